//! Physical constants (2018 CODATA adjustment, SI).
//!
//! `SPEED_OF_LIGHT` and `PLANCK` are exact by definition of the SI.
//! `HBAR` is *derived* as `PLANCK / (2 pi)` rather than quoted from the
//! rounded CODATA table: downstream identities mix `h` and `hbar` on the
//! two sides (dipole moments use `h`, coupling rates use `hbar`), and the
//! table's 10-digit abbreviation of `hbar` would inject a spurious 6e-10
//! relative mismatch between the two routes.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Planck constant, J s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant `PLANCK / (2 pi)`, J s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
