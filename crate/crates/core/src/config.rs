//! Run-level tolerance presets, overridable from a key=value config file.

use crate::error::{Error, Result};
use crate::shooting::SolveOptions;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Local error per integrator step.
    pub ode_tol: f64,
    /// |R - 1| target of the shooting bisection.
    pub shoot_tol_r: f64,
    /// Relative tolerance of the diagnostic quadratures.
    pub quad_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ode_tol: 1e-12,
            shoot_tol_r: 1e-10,
            quad_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            ode_tol: self.ode_tol,
            tol_r: self.shoot_tol_r,
        }
    }

    /// Parse `key=value` lines; `#` starts a comment. Recognized keys:
    /// ode_tol, shoot_tol_R, quad_tol.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut t = Tolerances::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Config(format!("config line {}: bad number {:?}", lineno + 1, value))
            })?;
            match key.trim() {
                "ode_tol" => t.ode_tol = value,
                "shoot_tol_R" => t.shoot_tol_r = value,
                "quad_tol" => t.quad_tol = value,
                other => {
                    return Err(Error::Config(format!(
                        "config line {}: unknown key {:?}",
                        lineno + 1,
                        other
                    )))
                }
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let t = Tolerances::from_key_values(
            "# comment\node_tol = 1e-11\nshoot_tol_R=1e-9\n\nquad_tol = 1e-8 # inline\n",
        )
        .unwrap();
        assert_eq!(t.ode_tol, 1e-11);
        assert_eq!(t.shoot_tol_r, 1e-9);
        assert_eq!(t.quad_tol, 1e-8);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Tolerances::from_key_values("bogus=1").is_err());
        assert!(Tolerances::from_key_values("ode_tol").is_err());
        assert!(Tolerances::from_key_values("ode_tol=abc").is_err());
    }
}
