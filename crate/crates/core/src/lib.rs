//! Light scattering by a single atom placed at the focus of a strongly
//! focused Gaussian mode, and what that implies for cavity QED.
//!
//! The crate is organized along the physics:
//!
//! * [`specfun`]: upper incomplete gamma function for the fractional orders
//!   the focusing integrals need, plus an independent quadrature oracle used
//!   by the test suite.
//! * [`focus`]: the scattering ratio of a focused mode as a function of the
//!   focusing strength, the extinction and reflection it produces, and the
//!   focal field enhancement.
//! * [`modes`]: quantized-mode field normalization constants and effective
//!   mode volumes for paraxial and strongly focused geometries.
//! * [`cavity`]: single-photon coupling rates, diffraction-loss estimates,
//!   and resonator geometry helpers built on top of [`modes`].
//! * [`spectro`]: photon-counting transmission/reflection spectroscopy:
//!   normalization with Poisson errors, damped least-squares Lorentzian
//!   fits, and a seeded synthetic-data generator.
//!
//! All quantities are SI unless a name says otherwise. Fallible operations
//! return [`error::Error`]; nothing panics on bad physical input.

pub mod cavity;
pub mod constants;
pub mod error;
pub mod focus;
pub mod modes;
pub mod specfun;
pub mod spectro;

pub use error::{Error, Result};
