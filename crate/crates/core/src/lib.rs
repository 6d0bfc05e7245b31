//! Radial shooting construction of blow-up solution families for
//! Moser-Trudinger-type semilinear problems on the unit disk, with
//! quantitative verification of their asymptotic laws.
//!
//! The pipeline: disk eigen-data from scratch ([`bessel`]), overflow-safe
//! nonlinearities ([`nonlinearity`]), adaptive integration of the radial
//! equation in log-radius coordinates ([`radial_ode`]), eigenparameter solves
//! placing the relevant zero on the boundary ([`shooting`]), closed-form
//! bubble profiles and expansion residuals ([`bubble`]), and energy/norm/law
//! reports with a sweep runner ([`diagnostics`], [`sweep`]). The [`acceptance`]
//! module bundles the end-to-end checks behind the `verify` subcommand.

pub mod acceptance;
pub mod bessel;
pub mod bubble;
pub mod config;
mod dd;
pub mod diagnostics;
pub mod error;
pub mod nonlinearity;
pub mod oracle;
pub mod quad;
pub mod radial_ode;
pub mod shooting;
pub mod sweep;

pub use config::Tolerances;
pub use error::{Error, Result};
