//! The six commands: parameter resolution (flags over config over
//! defaults), unit conversion at the boundary, library calls, and report
//! assembly.

use std::path::PathBuf;

use serde::Serialize;

use focusqed::cavity::{
    anaclastic_lens, coupling_g0_with_clebsch_gordan, diffraction_loss, finesse_estimate,
    max_focusing_from_angle, AtomLine,
};
use focusqed::focus::{scattering_ratio_maximum, FocusGeometry, ScatterResult};
use focusqed::modes::norm_standing_wave;
use focusqed::spectro::{
    fit_lorentzian, generate_spectrum, lorentzian, normalize_reflection, normalize_transmission,
    ratio_from_reflection_fit, ratio_from_transmission_fit, CountRates, LorentzFit,
    NormalizedPoint, SpectrumTruth,
};

use crate::cli::{Channel, CouplingArgs, FitArgs, LensArgs, RscArgs, SweepArgs, SweepQuantity, SynthArgs};
use crate::config::{Config, GridSpec};
use crate::error::CliError;
use crate::io::{self, format_float};

const DEFAULT_LAMBDA_NM: f64 = 780.0;
const DEFAULT_TAU_NS: f64 = 26.25;
const MM: f64 = 1e-3;
const NM: f64 = 1e-9;
const NS: f64 = 1e-9;

/// Scattering report for one focusing strength.
#[derive(Serialize)]
struct RscReport {
    u: f64,
    r_sc: f64,
    extinction: f64,
    reflectivity: f64,
    enhancement_sq: Option<f64>,
    beyond_model_validity: bool,
}

/// Coupling estimate for one (u, L) configuration.
#[derive(Serialize)]
struct CouplingReport {
    g0_rad_per_s: f64,
    #[serde(rename = "g0_over_2pi_MHz")]
    g0_over_2pi_mhz: f64,
    diffraction_loss: Option<f64>,
    finesse_for_budget: Option<f64>,
    mode_volume: f64,
    norm_constant: f64,
}

/// Anaclastic-lens geometry and angle conversion.
#[derive(Serialize)]
struct LensReport {
    half_axis_longitudinal_mm: Option<f64>,
    half_axis_transverse_mm: Option<f64>,
    u0_for_theta: Option<f64>,
}

/// Lorentzian fit of a measured spectrum plus the inferred scattering
/// ratio for the channel.
#[derive(Serialize)]
struct FitReport {
    channel: &'static str,
    points_used: usize,
    amplitude: f64,
    center_mhz: f64,
    fwhm_mhz: f64,
    offset: f64,
    sigma_amplitude: f64,
    sigma_center_mhz: f64,
    sigma_fwhm_mhz: f64,
    chi2_reduced: f64,
    r_sc_inferred: Option<f64>,
    r_sc_sigma: Option<f64>,
}

fn resolve(flag: Option<f64>, config_value: Option<f64>) -> Option<f64> {
    flag.or(config_value)
}

pub fn cmd_rsc(args: RscArgs, mut config: Config, output: Option<&PathBuf>) -> Result<(), CliError> {
    let u_flag = resolve(args.u, config.take_number("u")?);
    let waist_mm = resolve(args.w_l_mm, config.take_number("w_l_mm")?);
    let focal_mm = resolve(args.f_mm, config.take_number("f_mm")?);
    let lambda_nm =
        resolve(args.lambda_nm, config.take_number("lambda_nm")?).unwrap_or(DEFAULT_LAMBDA_NM);
    let sweep = GridSpec::resolve(args.sweep.as_deref(), &mut config, None)?;
    config.finish()?;

    if let Some(grid) = sweep {
        if u_flag.is_some() || waist_mm.is_some() || focal_mm.is_some() {
            return Err(CliError::parameter(
                "--sweep evaluates a u grid; do not also pass --u or beam geometry",
            ));
        }
        let table = rsc_sweep_table(grid)?;
        return io::emit(output, &table);
    }

    let report = match (u_flag, waist_mm, focal_mm) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(CliError::parameter(
                "give either --u or the --w-l-mm/--f-mm pair, not both",
            ))
        }
        (Some(u), None, None) => {
            let scatter = ScatterResult::from_focusing(u).map_err(CliError::from_library)?;
            RscReport {
                u,
                r_sc: scatter.r_sc,
                extinction: scatter.extinction,
                reflectivity: scatter.reflectivity,
                enhancement_sq: None,
                beyond_model_validity: scatter.beyond_model_validity,
            }
        }
        (None, Some(waist), Some(focal)) => {
            let geometry = FocusGeometry::new(waist * MM, focal * MM, lambda_nm * NM)
                .map_err(CliError::from_library)?;
            let scatter = ScatterResult::from_geometry(&geometry).map_err(CliError::from_library)?;
            RscReport {
                u: geometry.focusing_strength(),
                r_sc: scatter.r_sc,
                extinction: scatter.extinction,
                reflectivity: scatter.reflectivity,
                enhancement_sq: scatter.enhancement_sq,
                beyond_model_validity: scatter.beyond_model_validity,
            }
        }
        (None, _, _) => {
            return Err(CliError::parameter(
                "rsc needs --u, or --w-l-mm together with --f-mm",
            ))
        }
    };
    io::emit(output, &io::render_json(&report)?)
}

fn rsc_sweep_table(grid: GridSpec) -> Result<String, CliError> {
    let header = ["u", "r_sc", "extinction", "reflectivity", "is_located_max"];
    let mut entries: Vec<(f64, bool)> = grid.values().into_iter().map(|u| (u, false)).collect();

    // The located maximum joins the table at its sorted position when the
    // grid straddles it.
    let maximum = scattering_ratio_maximum().map_err(CliError::from_library)?;
    if maximum.u >= grid.start && maximum.u <= grid.stop {
        match entries.binary_search_by(|(u, _)| u.total_cmp(&maximum.u)) {
            Ok(index) => entries[index].1 = true,
            Err(index) => entries.insert(index, (maximum.u, true)),
        }
    }

    let mut rows = Vec::with_capacity(entries.len());
    for (u, is_max) in entries {
        let scatter = ScatterResult::from_focusing(u).map_err(CliError::from_library)?;
        rows.push(vec![
            format_float(u),
            format_float(scatter.r_sc),
            format_float(scatter.extinction),
            format_float(scatter.reflectivity),
            (if is_max { "1" } else { "0" }).to_string(),
        ]);
    }
    io::table_to_csv(&header, &rows)
}

struct CouplingInputs {
    lambda_m: f64,
    tau_s: f64,
    length_m: f64,
    u0: Option<f64>,
    mirror_loss: Option<f64>,
    cg: f64,
}

impl CouplingInputs {
    fn gather(args: &CouplingArgs, config: &mut Config) -> Result<(Self, Option<f64>), CliError> {
        let u = resolve(args.u, config.take_number("u")?);
        let length_mm = resolve(args.l_mm, config.take_number("l_mm")?)
            .ok_or_else(|| CliError::parameter("coupling needs --L-mm"))?;
        let tau_ns =
            resolve(args.tau_ns, config.take_number("tau_ns")?).unwrap_or(DEFAULT_TAU_NS);
        let lambda_nm =
            resolve(args.lambda_nm, config.take_number("lambda_nm")?).unwrap_or(DEFAULT_LAMBDA_NM);
        let u0_direct = resolve(args.u0, config.take_number("u0")?);
        let theta_deg = resolve(args.theta_deg, config.take_number("theta_deg")?);
        let mirror_loss = resolve(args.mirror_loss, config.take_number("mirror_loss")?);
        let cg = resolve(args.cg, config.take_number("cg")?).unwrap_or(1.0);

        let u0 = match (u0_direct, theta_deg) {
            (Some(_), Some(_)) => {
                return Err(CliError::parameter(
                    "give either --u0 or --theta-deg, not both",
                ))
            }
            (Some(u0), None) => Some(u0),
            (None, Some(theta)) => Some(
                max_focusing_from_angle(theta.to_radians()).map_err(CliError::from_library)?,
            ),
            (None, None) => None,
        };

        Ok((
            CouplingInputs {
                lambda_m: lambda_nm * NM,
                tau_s: tau_ns * NS,
                length_m: length_mm * MM,
                u0,
                mirror_loss,
                cg,
            },
            u,
        ))
    }

    fn report_for(&self, u: f64) -> Result<CouplingReport, CliError> {
        let line = AtomLine::new(self.lambda_m, self.tau_s).map_err(CliError::from_library)?;
        let rate = coupling_g0_with_clebsch_gordan(u, self.length_m, &line, self.cg)
            .map_err(CliError::from_library)?;
        let norm =
            norm_standing_wave(self.lambda_m, self.length_m, u).map_err(CliError::from_library)?;

        let loss = self
            .u0
            .map(|u0| diffraction_loss(u, u0).map_err(CliError::from_library))
            .transpose()?;
        let budget = match (self.mirror_loss, loss) {
            (None, None) => None,
            (mirror, diffraction) => Some(mirror.unwrap_or(0.0) + diffraction.unwrap_or(0.0)),
        };
        let finesse = budget
            .map(|rho| finesse_estimate(rho).map_err(CliError::from_library))
            .transpose()?;

        Ok(CouplingReport {
            g0_rad_per_s: rate.rad_per_s,
            g0_over_2pi_mhz: rate.hz / 1e6,
            diffraction_loss: loss,
            finesse_for_budget: finesse,
            mode_volume: norm.mode_volume,
            norm_constant: norm.value,
        })
    }
}

pub fn cmd_coupling(
    args: CouplingArgs,
    mut config: Config,
    output: Option<&PathBuf>,
) -> Result<(), CliError> {
    let sweep = GridSpec::resolve(args.sweep.as_deref(), &mut config, None)?;
    let (inputs, u) = CouplingInputs::gather(&args, &mut config)?;
    config.finish()?;

    if let Some(grid) = sweep {
        if u.is_some() {
            return Err(CliError::parameter(
                "--sweep evaluates a u grid; do not also pass --u",
            ));
        }
        let table = coupling_sweep_table(&inputs, grid)?;
        return io::emit(output, &table);
    }

    let u = u.ok_or_else(|| CliError::parameter("coupling needs --u"))?;
    let report = inputs.report_for(u)?;
    io::emit(output, &io::render_json(&report)?)
}

fn coupling_sweep_table(inputs: &CouplingInputs, grid: GridSpec) -> Result<String, CliError> {
    let header = ["u", "g0_rad_per_s", "g0_over_2pi_MHz", "diffraction_loss"];
    let mut rows = Vec::new();
    for u in grid.values() {
        let report = inputs.report_for(u)?;
        rows.push(vec![
            format_float(u),
            format_float(report.g0_rad_per_s),
            format_float(report.g0_over_2pi_mhz),
            report
                .diffraction_loss
                .map(format_float)
                .unwrap_or_default(),
        ]);
    }
    io::table_to_csv(&header, &rows)
}

pub fn cmd_lens(args: LensArgs, mut config: Config, output: Option<&PathBuf>) -> Result<(), CliError> {
    let focal_mm = resolve(args.f_mm, config.take_number("f_mm")?);
    let index = resolve(args.n, config.take_number("n")?);
    let theta_deg = resolve(args.theta_deg, config.take_number("theta_deg")?);
    config.finish()?;

    let ellipse = match (focal_mm, index) {
        (Some(focal), Some(n)) => {
            Some(anaclastic_lens(focal * MM, n).map_err(CliError::from_library)?)
        }
        (None, None) => None,
        _ => {
            return Err(CliError::parameter(
                "lens geometry needs both --f-mm and --n",
            ))
        }
    };
    let u0 = theta_deg
        .map(|theta| max_focusing_from_angle(theta.to_radians()).map_err(CliError::from_library))
        .transpose()?;
    if ellipse.is_none() && u0.is_none() {
        return Err(CliError::parameter(
            "lens needs --f-mm with --n, or --theta-deg",
        ));
    }

    let report = LensReport {
        half_axis_longitudinal_mm: ellipse.as_ref().map(|e| e.half_axis_longitudinal / MM),
        half_axis_transverse_mm: ellipse.as_ref().map(|e| e.half_axis_transverse / MM),
        u0_for_theta: u0,
    };
    io::emit(output, &io::render_json(&report)?)
}

pub fn cmd_fit(args: FitArgs, mut config: Config, output: Option<&PathBuf>) -> Result<(), CliError> {
    let background_flag = resolve(
        args.background_rate_hz,
        config.take_number("background_rate_hz")?,
    );
    config.finish()?;

    let file = io::read_spectrum(&args.input)?;
    let normalized: Vec<NormalizedPoint> = match args.channel {
        Channel::Transmission => {
            normalize_transmission(&file.points).map_err(CliError::from_data)?
        }
        Channel::Reflection => {
            let run_level = match background_flag {
                Some(rate) => rate,
                None => {
                    let all_per_point =
                        file.points.iter().all(|p| p.background_rate_hz.is_some());
                    if !all_per_point {
                        return Err(CliError::parameter(
                            "reflection fits need --background-rate-hz unless every row \
                             carries the background_rate_hz column",
                        ));
                    }
                    0.0
                }
            };
            normalize_reflection(&file.points, run_level).map_err(CliError::from_data)?
        }
    };

    let offset = match args.channel {
        Channel::Transmission => 1.0,
        Channel::Reflection => 0.0,
    };
    let data: Vec<(f64, f64, f64)> = normalized
        .iter()
        .map(|p| (p.detuning_mhz, p.value, p.sigma))
        .collect();
    let fit = fit_lorentzian(&data, offset, None).map_err(CliError::from_library)?;

    let estimate = match args.channel {
        Channel::Transmission => ratio_from_transmission_fit(&fit).ok(),
        Channel::Reflection => ratio_from_reflection_fit(&fit).ok(),
    };

    if let Some(path) = &args.residuals {
        let table = residual_table(&normalized, &fit)?;
        std::fs::write(path, table)
            .map_err(|err| CliError::io(format!("cannot write {}: {err}", path.display())))?;
    }

    let report = FitReport {
        channel: match args.channel {
            Channel::Transmission => "transmission",
            Channel::Reflection => "reflection",
        },
        points_used: data.len(),
        amplitude: fit.amplitude,
        center_mhz: fit.center_mhz,
        fwhm_mhz: fit.fwhm_mhz,
        offset: fit.offset,
        sigma_amplitude: fit.sigma_amplitude,
        sigma_center_mhz: fit.sigma_center_mhz,
        sigma_fwhm_mhz: fit.sigma_fwhm_mhz,
        chi2_reduced: fit.chi2_reduced,
        r_sc_inferred: estimate.as_ref().map(|e| e.r_sc),
        r_sc_sigma: estimate.as_ref().map(|e| e.sigma),
    };
    io::emit(output, &io::render_json(&report)?)
}

fn residual_table(points: &[NormalizedPoint], fit: &LorentzFit) -> Result<String, CliError> {
    let header = ["detuning_mhz", "value", "sigma", "model", "residual"];
    let mut rows = Vec::with_capacity(points.len());
    for point in points {
        let model = fit.offset
            + lorentzian(point.detuning_mhz, fit.amplitude, fit.center_mhz, fit.fwhm_mhz)
                .map_err(CliError::from_library)?;
        rows.push(vec![
            format_float(point.detuning_mhz),
            format_float(point.value),
            format_float(point.sigma),
            format_float(model),
            format_float(point.value - model),
        ]);
    }
    io::table_to_csv(&header, &rows)
}

pub fn cmd_synth(args: SynthArgs, mut config: Config, output: Option<&PathBuf>) -> Result<(), CliError> {
    let seed = match (args.seed, config.take_integer("seed")?) {
        (Some(seed), _) => seed,
        (None, Some(seed)) => seed,
        (None, None) => return Err(CliError::parameter("synth needs --seed")),
    };
    let truth = SpectrumTruth {
        r_sc: resolve(args.r_sc, config.take_number("r_sc")?)
            .unwrap_or(0.083_753_669_279_442_56),
        center_mhz: resolve(args.center_mhz, config.take_number("center_mhz")?).unwrap_or(37.1),
        fwhm_mhz: resolve(args.fwhm_mhz, config.take_number("fwhm_mhz")?).unwrap_or(8.1),
    };
    let rates = CountRates {
        reference_hz: resolve(args.reference_hz, config.take_number("reference_hz")?)
            .unwrap_or(8000.0),
        background_hz: resolve(args.background_hz, config.take_number("background_hz")?)
            .unwrap_or(250.0),
    };
    let dwell_s = resolve(args.dwell_s, config.take_number("dwell_s")?).unwrap_or(10.0);
    let grid = GridSpec::resolve(
        args.grid.as_deref(),
        &mut config,
        Some(GridSpec {
            start: 17.0,
            stop: 57.0,
            step: 1.0,
        }),
    )?
    .expect("synth always has a default grid");
    config.finish()?;

    let spectrum = generate_spectrum(truth, rates, dwell_s, &grid.values(), seed)
        .map_err(CliError::from_library)?;
    let csv = match args.channel {
        Channel::Transmission => io::spectrum_to_csv(&spectrum.transmission, false)?,
        Channel::Reflection => io::spectrum_to_csv(&spectrum.reflection, true)?,
    };
    io::emit(output, &csv)
}

pub fn cmd_sweep(args: SweepArgs, mut config: Config, output: Option<&PathBuf>) -> Result<(), CliError> {
    let grid = GridSpec::resolve(args.grid.as_deref(), &mut config, None)?
        .ok_or_else(|| CliError::parameter("sweep needs --grid start:stop:step"))?;
    match args.quantity {
        SweepQuantity::Rsc => {
            config.finish()?;
            let table = rsc_sweep_table(grid)?;
            io::emit(output, &table)
        }
        SweepQuantity::Coupling => {
            let coupling_args = CouplingArgs {
                u: None,
                l_mm: args.l_mm,
                tau_ns: args.tau_ns,
                lambda_nm: args.lambda_nm,
                u0: args.u0,
                theta_deg: args.theta_deg,
                mirror_loss: args.mirror_loss,
                cg: args.cg,
                sweep: None,
            };
            let (inputs, _) = CouplingInputs::gather(&coupling_args, &mut config)?;
            config.finish()?;
            let table = coupling_sweep_table(&inputs, grid)?;
            io::emit(output, &table)
        }
    }
}
