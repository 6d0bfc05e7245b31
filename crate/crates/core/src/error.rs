use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("overflow: gamma too large for 64-bit mode (exponent {exponent:.1} > {limit})")]
    Overflow { exponent: f64, limit: f64 },

    #[error("integrator failure: {reason} (last x = {last_x})")]
    Integrator { reason: String, last_x: f64 },

    #[error("no zero found up to r = {r_max}")]
    NoZeroFound { r_max: f64 },

    #[error("no bracket for R = 1 after {steps} scan steps around log_beta = {seed}")]
    BracketNotFound { seed: f64, steps: usize },

    #[error("bisection stagnated: |R - 1| = {residual:e} at log_beta = {log_beta}")]
    BisectionStagnated { log_beta: f64, residual: f64 },

    #[error(
        "zero {k} not found in window [{lo}, {hi}]: gamma below the nodal threshold for this (k, l)"
    )]
    KthZeroNotInWindow { k: usize, lo: f64, hi: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
