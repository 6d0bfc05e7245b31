//! Right-hand sides f(u) of the three problem families, with overflow-safe
//! evaluation.
//!
//! The exponential term mixes extreme factors (at gamma = 12 the solved beta
//! is ~4e-3 while exp(gamma^2) ~ 3e62), so it is always assembled in the log
//! domain: `sign(u) * exp(u^2 [- a|u|] + log_beta + ln|u|)`. `log_beta` is the
//! authoritative parameter; beta itself may underflow. Both variants are odd
//! in u by construction, which realizes the continuous odd extension of
//! `t -> t g(t)` used for whole-plane integrations.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest exponent fed to `exp`; beyond this the solve aborts rather than
/// silently saturate. Caps the usable gamma near 25 in 64-bit mode.
pub const EXP_LIMIT: f64 = 700.0;

/// Behavior of the g-type nonlinearity below the switch point `c0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GFloor {
    /// g = 1 on [0, c0); continuous at c0 = a since a^2 - a*a = 0.
    #[default]
    ConstantOne,
    /// g = 1 on [0, a/2], then linear up to the exponential branch value at
    /// c0. Degenerates to the constant floor when c0 = a.
    ConstantThenRamp,
}

/// One right-hand-side family, serialized into run configs as
/// `{"variant": ..., "lambda_bar": ..., "log_beta": ..., "a": ..., "c0": ...}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum NonlinearitySpec {
    /// f(u) = lambda_bar * u + beta * u * exp(u^2)
    AdimurthiDruet { lambda_bar: f64, log_beta: f64 },
    /// f(u) = beta * u * g(u) with g(t) = exp(t^2 - a t) for t >= c0 and the
    /// chosen floor below.
    GType {
        a: f64,
        c0: f64,
        log_beta: f64,
        #[serde(default)]
        floor: GFloor,
    },
}

impl NonlinearitySpec {
    /// Adimurthi-Druet family.
    pub fn adimurthi_druet(lambda_bar: f64, log_beta: f64) -> Self {
        NonlinearitySpec::AdimurthiDruet {
            lambda_bar,
            log_beta,
        }
    }

    /// Default g-type family: c0 = a and g = 1 below, i.e. g = max(1, e^{t^2 - a t}).
    pub fn gtype_default(a: f64, log_beta: f64) -> Self {
        NonlinearitySpec::GType {
            a,
            c0: a,
            log_beta,
            floor: GFloor::ConstantOne,
        }
    }

    pub fn log_beta(&self) -> f64 {
        match *self {
            NonlinearitySpec::AdimurthiDruet { log_beta, .. } => log_beta,
            NonlinearitySpec::GType { log_beta, .. } => log_beta,
        }
    }

    pub fn with_log_beta(&self, log_beta: f64) -> Self {
        let mut s = *self;
        match &mut s {
            NonlinearitySpec::AdimurthiDruet { log_beta: lb, .. } => *lb = log_beta,
            NonlinearitySpec::GType { log_beta: lb, .. } => *lb = log_beta,
        }
        s
    }

    pub fn lambda_bar(&self) -> Option<f64> {
        match *self {
            NonlinearitySpec::AdimurthiDruet { lambda_bar, .. } => Some(lambda_bar),
            NonlinearitySpec::GType { .. } => None,
        }
    }

    /// Exponent of the exponential term at |u| = t (not including ln t).
    fn growth_exponent(&self, t: f64) -> f64 {
        match *self {
            NonlinearitySpec::AdimurthiDruet { log_beta, .. } => t * t + log_beta,
            NonlinearitySpec::GType { a, log_beta, .. } => t * t - a * t + log_beta,
        }
    }

    /// Check that eval_f cannot overflow for |u| <= gamma.
    pub fn check_ceiling(&self, gamma: f64) -> Result<()> {
        let e = self.growth_exponent(gamma) + gamma.max(1.0).ln();
        if e > EXP_LIMIT {
            return Err(Error::Overflow {
                exponent: e,
                limit: EXP_LIMIT,
            });
        }
        Ok(())
    }

    /// f(u); odd in u, exponential part in the log domain.
    pub fn eval_f(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let t = u.abs();
        let sign = u.signum();
        match *self {
            NonlinearitySpec::AdimurthiDruet {
                lambda_bar,
                log_beta,
            } => {
                let e = t * t + log_beta + t.ln();
                if e > EXP_LIMIT {
                    return Err(Error::Overflow {
                        exponent: e,
                        limit: EXP_LIMIT,
                    });
                }
                Ok(lambda_bar * u + sign * e.exp())
            }
            NonlinearitySpec::GType {
                a,
                c0,
                log_beta,
                floor,
            } => {
                if t >= c0 {
                    let e = t * t - a * t + log_beta + t.ln();
                    if e > EXP_LIMIT {
                        return Err(Error::Overflow {
                            exponent: e,
                            limit: EXP_LIMIT,
                        });
                    }
                    Ok(sign * e.exp())
                } else {
                    Ok(log_beta.exp() * u * g_floor(a, c0, floor, t))
                }
            }
        }
    }
}

fn g_floor(a: f64, c0: f64, floor: GFloor, t: f64) -> f64 {
    match floor {
        GFloor::ConstantOne => 1.0,
        GFloor::ConstantThenRamp => {
            let knee = 0.5 * a;
            if t <= knee || c0 <= knee {
                1.0
            } else {
                let top = (c0 * c0 - a * c0).exp();
                1.0 + (top - 1.0) * (t - knee) / (c0 - knee)
            }
        }
    }
}

/// g(t) for a g-type spec (beta excluded). Errors on non-GType specs.
pub fn eval_g(spec: &NonlinearitySpec, t: f64) -> Result<f64> {
    let NonlinearitySpec::GType { a, c0, floor, .. } = *spec else {
        return Err(Error::Config(
            "eval_g requires a g-type nonlinearity".into(),
        ));
    };
    if t < 0.0 {
        return Err(Error::Domain(format!("g argument {t} negative")));
    }
    if t >= c0 {
        let e = t * t - a * t;
        if e > EXP_LIMIT {
            return Err(Error::Overflow {
                exponent: e,
                limit: EXP_LIMIT,
            });
        }
        Ok(e.exp())
    } else {
        Ok(g_floor(a, c0, floor, t))
    }
}

/// ln of g at t, used by the bubble-scale formulas.
pub fn log_g(spec: &NonlinearitySpec, t: f64) -> Result<f64> {
    let NonlinearitySpec::GType { a, c0, floor, .. } = *spec else {
        return Err(Error::Config(
            "log_g requires a g-type nonlinearity".into(),
        ));
    };
    if t >= c0 {
        Ok(t * t - a * t)
    } else {
        Ok(g_floor(a, c0, floor, t).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f_vanishes_at_origin() {
        let s = NonlinearitySpec::adimurthi_druet(5.0, 0.0);
        assert_eq!(s.eval_f(0.0).unwrap(), 0.0);
    }

    #[test]
    fn g_floor_region() {
        let s = NonlinearitySpec::gtype_default(2.0, 0.0);
        // u = 1 <= a = 2: f = u * g = 1
        assert_eq!(s.eval_f(1.0).unwrap(), 1.0);
    }

    #[test]
    fn log_domain_arithmetic_by_hand() {
        // lambda_bar = 0, log_beta = -100, u = 10: exp(100 - 100 + ln 10) = 10
        let s = NonlinearitySpec::adimurthi_druet(0.0, -100.0);
        let f = s.eval_f(10.0).unwrap();
        assert!((f - 10.0).abs() <= 1e-12 * 10.0);
    }

    #[test]
    fn g_values_for_a_two() {
        let s = NonlinearitySpec::gtype_default(2.0, 0.0);
        assert_eq!(eval_g(&s, 0.0).unwrap(), 1.0);
        assert_eq!(eval_g(&s, 2.0).unwrap(), 1.0); // e^{4-4}, continuous at c0
        assert!((eval_g(&s, 3.0).unwrap() - 3f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn g_matches_max_form() {
        // default variant equals max(1, e^{t^2 - a t})
        let s = NonlinearitySpec::gtype_default(2.0, 0.0);
        for i in 0..=300 {
            let t = i as f64 * 0.01;
            let want = 1f64.max((t * t - 2.0 * t).exp());
            assert!((eval_g(&s, t).unwrap() - want).abs() <= 1e-14 * want);
        }
    }

    #[test]
    fn default_g_infimum_is_one() {
        // grid over [0, 30] in the log domain (g itself overflows past
        // t^2 - a t > 700, where it is in any case far above the infimum)
        let s = NonlinearitySpec::gtype_default(2.0, 0.0);
        let mut inf = f64::INFINITY;
        for i in 0..=3000 {
            let t = i as f64 * 0.01;
            inf = inf.min(log_g(&s, t).unwrap());
        }
        assert_eq!(inf.exp(), 1.0);
    }

    #[test]
    fn ramp_floor_is_continuous() {
        let s = NonlinearitySpec::GType {
            a: 2.0,
            c0: 3.0,
            log_beta: 0.0,
            floor: GFloor::ConstantThenRamp,
        };
        let below = eval_g(&s, 3.0 - 1e-9).unwrap();
        let at = eval_g(&s, 3.0).unwrap();
        assert!((below - at).abs() < 1e-6);
        assert_eq!(eval_g(&s, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn overflow_is_an_error_not_inf() {
        let s = NonlinearitySpec::adimurthi_druet(1.0, 0.0);
        assert!(matches!(s.eval_f(30.0), Err(Error::Overflow { .. })));
        assert!(s.check_ceiling(30.0).is_err());
        assert!(s.check_ceiling(20.0).is_ok());
    }

    #[test]
    fn log_domain_consistency_where_direct_is_representable() {
        // u <= 10, log_beta >= -50: direct beta * u * e^{u^2} is representable
        for &(u, lb) in &[(1.0, -1.0), (5.0, -20.0), (10.0, -50.0), (8.0, 0.0)] {
            let s = NonlinearitySpec::adimurthi_druet(0.0, lb);
            let log_dom = s.eval_f(u).unwrap();
            let direct = f64::exp(lb) * u * f64::exp(u * u);
            assert!(
                ((log_dom - direct) / direct).abs() <= 1e-12,
                "u={u} lb={lb}: {log_dom} vs {direct}"
            );
        }
    }

    #[test]
    fn serialization_shape() {
        let s = NonlinearitySpec::adimurthi_druet(5.5, -2.0);
        let j = serde_json::to_value(s).unwrap();
        assert_eq!(j["variant"], "AdimurthiDruet");
        assert_eq!(j["lambda_bar"], 5.5);
        let g = NonlinearitySpec::gtype_default(2.0, 0.0);
        let j = serde_json::to_value(g).unwrap();
        assert_eq!(j["variant"], "GType");
        assert_eq!(j["a"], 2.0);
        assert_eq!(j["c0"], 2.0);
        let back: NonlinearitySpec = serde_json::from_value(j).unwrap();
        assert_eq!(back, g);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn f_is_odd_exactly(u in -20.0f64..20.0) {
            let ad = NonlinearitySpec::adimurthi_druet(3.0, -5.0);
            prop_assert_eq!(ad.eval_f(-u).unwrap(), -ad.eval_f(u).unwrap());
            let g = NonlinearitySpec::gtype_default(2.0, -1.0);
            prop_assert_eq!(g.eval_f(-u).unwrap(), -g.eval_f(u).unwrap());
        }
    }
}
