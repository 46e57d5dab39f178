//! File and stream plumbing: strict spectrum-CSV reading with line-level
//! error reporting, CSV table writing, and report emission to stdout or
//! a file.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use focusqed::spectro::SpectrumPoint;

use crate::error::CliError;

/// Header of a four-column spectrum file.
pub const SPECTRUM_HEADER: [&str; 4] = [
    "detuning_mhz",
    "counts_signal",
    "counts_reference",
    "dwell_s",
];
/// Optional fifth column carrying a per-point background rate.
pub const BACKGROUND_COLUMN: &str = "background_rate_hz";

/// A parsed spectrum file.
pub struct SpectrumFile {
    pub points: Vec<SpectrumPoint>,
    /// True when the file carries the background column.
    pub has_background_column: bool,
}

/// Reads a spectrum CSV, validating the header exactly and reporting the
/// first offending line on failure.
pub fn read_spectrum(path: &Path) -> Result<SpectrumFile, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|err| CliError::parse(format!("cannot open {}: {err}", path.display())))?;

    let headers = reader
        .headers()
        .map_err(|err| csv_parse_error(path, err))?
        .clone();
    let fields: Vec<&str> = headers.iter().collect();
    let has_background_column = match fields.as_slice() {
        f if f == SPECTRUM_HEADER => false,
        [a, b, c, d, e] if [*a, *b, *c, *d] == SPECTRUM_HEADER && *e == BACKGROUND_COLUMN => true,
        _ => {
            return Err(CliError::parse(format!(
                "{}: unexpected CSV header `{}`; expected `{}` with optional final column `{}`",
                path.display(),
                fields.join(","),
                SPECTRUM_HEADER.join(","),
                BACKGROUND_COLUMN
            )))
        }
    };

    let mut points = Vec::new();
    for record in reader.deserialize::<SpectrumPoint>() {
        points.push(record.map_err(|err| csv_parse_error(path, err))?);
    }
    if points.is_empty() {
        return Err(CliError::parse(format!(
            "{}: no data rows after the header",
            path.display()
        )));
    }
    Ok(SpectrumFile {
        points,
        has_background_column,
    })
}

fn csv_parse_error(path: &Path, err: csv::Error) -> CliError {
    let line = err
        .position()
        .map(|position| position.line())
        .or_else(|| match err.kind() {
            csv::ErrorKind::Deserialize { pos, .. } => pos.as_ref().map(|p| p.line()),
            _ => None,
        });
    match line {
        Some(line) => CliError::parse(format!("{}: line {line}: {err}", path.display())),
        None => CliError::parse(format!("{}: {err}", path.display())),
    }
}

/// Serializes spectrum points back to the input CSV format. The
/// background column is written only when requested, and must then be
/// present on every point.
pub fn spectrum_to_csv(points: &[SpectrumPoint], with_background: bool) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if with_background {
        let mut header: Vec<&str> = SPECTRUM_HEADER.to_vec();
        header.push(BACKGROUND_COLUMN);
        writer
            .write_record(&header)
            .map_err(|err| CliError::numerical(format!("CSV write failed: {err}")))?;
    } else {
        writer
            .write_record(SPECTRUM_HEADER)
            .map_err(|err| CliError::numerical(format!("CSV write failed: {err}")))?;
    }
    for point in points {
        let common = [
            format_float(point.detuning_mhz),
            point.counts_signal.to_string(),
            point.counts_reference.to_string(),
            format_float(point.dwell_s),
        ];
        let result = if with_background {
            let background = point.background_rate_hz.ok_or_else(|| {
                CliError::numerical(format!(
                    "point at {} MHz lacks a background rate for the 5-column format",
                    point.detuning_mhz
                ))
            })?;
            let mut row = common.to_vec();
            row.push(format_float(background));
            writer.write_record(&row)
        } else {
            writer.write_record(&common)
        };
        result.map_err(|err| CliError::numerical(format!("CSV write failed: {err}")))?;
    }
    finish_csv(writer)
}

/// Writes a generic table: one header record, then pre-formatted rows.
pub fn table_to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(header)
        .map_err(|err| CliError::numerical(format!("CSV write failed: {err}")))?;
    for row in rows {
        writer
            .write_record(row)
            .map_err(|err| CliError::numerical(format!("CSV write failed: {err}")))?;
    }
    finish_csv(writer)
}

fn finish_csv(writer: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = writer
        .into_inner()
        .map_err(|err| CliError::numerical(format!("CSV write failed: {err}")))?;
    String::from_utf8(bytes).map_err(|err| CliError::numerical(format!("CSV write failed: {err}")))
}

/// Shortest decimal representation that round-trips the value; formatted
/// through serde_json so the CSV and JSON spellings of a number are
/// identical bytes.
pub fn format_float(value: f64) -> String {
    serde_json::to_string(&value).unwrap_or_else(|_| value.to_string())
}

/// Renders a serializable report as pretty JSON with a trailing newline.
pub fn render_json<T: serde::Serialize>(report: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|err| CliError::numerical(format!("report serialization failed: {err}")))?;
    text.push('\n');
    Ok(text)
}

/// Sends rendered output to stdout or to `--output`.
pub fn emit(output: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|err| CliError::io(format!("cannot write {}: {err}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(content.as_bytes())
                .map_err(|err| CliError::io(format!("cannot write to stdout: {err}")))
        }
    }
}
