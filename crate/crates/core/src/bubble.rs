//! Closed-form bubble profiles, concentration scales, and residuals of the
//! inner expansions.
//!
//! The limiting profile is T0(y) = log(1 + |y|^2); the second-order corrector
//! is S0 = -T0/2 + |y|^2 / (2(1 + |y|^2)). Both satisfy explicit ODEs (with
//! Delta = -(d^2/dy^2 + (1/y) d/dy)):
//!
//!   Delta T0 + 4 e^{-2 T0} = 0,
//!   Delta S0 - 8 e^{-2 T0} S0 = 4 T0 e^{-2 T0}.
//!
//! All scale arithmetic is done on logarithms: mu underflows f64 beyond
//! gamma ~ 26 even when beta does not.

use crate::error::{Error, Result};
use crate::nonlinearity::{log_g, NonlinearitySpec};
use crate::quad;
use crate::radial_ode::RadialProfile;
use crate::shooting::ShootingResult;
use serde::Serialize;

/// Limiting bubble profile T0(y) = log(1 + y^2).
pub fn t0(y: f64) -> f64 {
    (y * y).ln_1p()
}

/// S0 expressed through t = T0(y): -t/2 + (1 - e^{-t})/2. Exact and
/// overflow-free for any t >= 0.
pub fn s0_of_t(t: f64) -> f64 {
    0.5 * (1.0 - (-t).exp()) - 0.5 * t
}

/// Second-order corrector S0(y) = -T0(y)/2 + y^2 / (2 (1 + y^2)).
pub fn s0(y: f64) -> f64 {
    s0_of_t(t0(y))
}

/// Which mu-definition applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScaleVariant {
    /// beta gamma^2 exp(gamma^2) mu^2 = 4
    AdimurthiDruet,
    /// mu^2 beta gamma^2 g(gamma) = 4
    GType,
}

/// Concentration scales of one solve.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BubbleScales {
    pub variant: ScaleVariant,
    pub gamma: f64,
    /// Authoritative log of the bubble scale.
    pub log_mu: f64,
    /// exp(log_mu); may underflow to 0 for extreme gamma.
    pub mu: f64,
    /// t(rho) = gamma^2 / 2.
    pub log_rho: f64,
    pub rho: f64,
    /// t(rho_1) = gamma.
    pub log_rho1: f64,
    pub rho1: f64,
}

impl BubbleScales {
    /// t_gamma(r) = log(1 + r^2/mu^2) from log r, safely for any magnitude.
    pub fn t_at_log_r(&self, log_r: f64) -> f64 {
        let d = 2.0 * (log_r - self.log_mu);
        if d > 30.0 {
            d + (-d).exp()
        } else {
            d.exp().ln_1p()
        }
    }
}

/// Scales of an accepted solve, per the defining identities, in log domain.
pub fn scales_for(result: &ShootingResult) -> Result<BubbleScales> {
    let gamma = result.gamma;
    let log_beta = result.spec.log_beta();
    let (variant, log_growth) = match result.spec {
        NonlinearitySpec::AdimurthiDruet { .. } => (ScaleVariant::AdimurthiDruet, gamma * gamma),
        NonlinearitySpec::GType { .. } => (ScaleVariant::GType, log_g(&result.spec, gamma)?),
    };
    let log_mu = 0.5 * (4f64.ln() - log_beta - 2.0 * gamma.ln() - log_growth);
    // rho^2 = mu^2 (e^{gamma^2/2} - 1), rho_1^2 = mu^2 (e^gamma - 1)
    let half_g2 = 0.5 * gamma * gamma;
    let log_rho = log_mu + 0.5 * (half_g2 + (-(-half_g2).exp()).ln_1p());
    let log_rho1 = log_mu + 0.5 * (gamma + (-(-gamma).exp()).ln_1p());
    Ok(BubbleScales {
        variant,
        gamma,
        log_mu,
        mu: log_mu.exp(),
        log_rho,
        rho: log_rho.exp(),
        log_rho1,
        rho1: log_rho1.exp(),
    })
}

/// Residual report over a radius window; serializes to
/// `{"window": [r_lo, r_hi], "max_residual": ..., "argmax_r": ..., "gamma": ...}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResidualReport {
    pub window: (f64, f64),
    pub max_residual: f64,
    pub argmax_r: f64,
    pub gamma: f64,
}

/// First-order inner residual for positive/nodal solves:
/// e(r) = |u - (gamma - t/gamma)| * gamma^3 / (1 + t) over r <= min(R_window, rho).
/// The sup is the empirical constant of the inner expansion.
pub fn inner_residual_t1(result: &ShootingResult, r_window: f64) -> Result<ResidualReport> {
    let scales = scales_for(result)?;
    let gamma = result.gamma;
    let x_hi = r_window.ln().min(scales.log_rho);
    let mut max_residual = f64::NEG_INFINITY;
    let mut argmax_r = f64::NAN;
    let mut seen = false;
    let p = &result.profile;
    for i in 0..p.len() {
        let x = p.x_grid[i];
        if x > x_hi {
            break;
        }
        seen = true;
        let t = scales.t_at_log_r(x);
        let e = (p.u[i] - (gamma - t / gamma)).abs() * gamma.powi(3) / (1.0 + t);
        if e > max_residual {
            max_residual = e;
            argmax_r = x.exp();
        }
    }
    if !seen {
        return Err(Error::Domain("empty inner residual window".into()));
    }
    Ok(ResidualReport {
        window: (p.x_grid[0].exp(), x_hi.exp()),
        max_residual,
        argmax_r,
        gamma,
    })
}

/// Second-order inner and mid-range residuals for g-type solves:
/// inner: |u - (gamma - t/gamma + a S0 / gamma^2)| * gamma^3 / max(t, 1) on r <= rho;
/// mid:   |u - (gamma - (t/gamma)(1 + a/(2 gamma)))| * gamma^2 / t on rho <= r <= r_gamma,
/// where u(r_gamma) = max(c0, a/2) + 1.
pub fn inner_residual_gtype(
    result: &ShootingResult,
    a: f64,
) -> Result<(ResidualReport, ResidualReport)> {
    let NonlinearitySpec::GType { c0, .. } = result.spec else {
        return Err(Error::Config("g-type result required".into()));
    };
    let scales = scales_for(result)?;
    let gamma = result.gamma;
    let p = &result.profile;

    let mut inner_max = f64::NEG_INFINITY;
    let mut inner_arg = f64::NAN;
    let mut inner_seen = false;
    for i in 0..p.len() {
        let x = p.x_grid[i];
        if x > scales.log_rho {
            break;
        }
        inner_seen = true;
        let t = scales.t_at_log_r(x);
        let model = gamma - t / gamma + a * s0_of_t(t) / (gamma * gamma);
        let e = (p.u[i] - model).abs() * gamma.powi(3) / t.max(1.0);
        if e > inner_max {
            inner_max = e;
            inner_arg = x.exp();
        }
    }
    if !inner_seen {
        return Err(Error::Domain("empty g-type inner window".into()));
    }

    // r_gamma: first radius with u <= c1 (u is radially decreasing)
    let c1 = c0.max(0.5 * a) + 1.0;
    let mut x_mid_hi = None;
    for i in 0..p.len() {
        if p.u[i] <= c1 {
            x_mid_hi = Some(p.x_grid[i]);
            break;
        }
    }
    let x_mid_hi = x_mid_hi.ok_or_else(|| {
        Error::Domain(format!("profile never drops to c1 = {c1}: gamma too small"))
    })?;
    if x_mid_hi <= scales.log_rho {
        return Err(Error::Domain("empty g-type mid window".into()));
    }

    let factor = 1.0 + a / (2.0 * gamma);
    let mut mid_max = f64::NEG_INFINITY;
    let mut mid_arg = f64::NAN;
    for i in 0..p.len() {
        let x = p.x_grid[i];
        if x < scales.log_rho || x > x_mid_hi {
            continue;
        }
        let t = scales.t_at_log_r(x);
        let model = gamma - (t / gamma) * factor;
        let e = (p.u[i] - model).abs() * gamma * gamma / t;
        if e > mid_max {
            mid_max = e;
            mid_arg = x.exp();
        }
    }
    Ok((
        ResidualReport {
            window: (p.x_grid[0].exp(), scales.log_rho.exp()),
            max_residual: inner_max,
            argmax_r: inner_arg,
            gamma,
        },
        ResidualReport {
            window: (scales.log_rho.exp(), x_mid_hi.exp()),
            max_residual: mid_max,
            argmax_r: mid_arg,
            gamma,
        },
    ))
}

/// sup over y in (0, y_max] of |tau_gamma(y) - T0(y)| with
/// tau_gamma(y) = gamma (gamma - u(mu y)), sampled on a uniform y grid.
pub fn tau_deviation(result: &ShootingResult, y_max: f64, samples: usize) -> Result<f64> {
    let scales = scales_for(result)?;
    let gamma = result.gamma;
    let mut sup: f64 = 0.0;
    for i in 1..=samples {
        let y = y_max * i as f64 / samples as f64;
        let x = scales.log_mu + y.ln();
        let tau = gamma * (gamma - result.profile.eval(x).0);
        sup = sup.max((tau - t0(y)).abs());
    }
    Ok(sup)
}

/// sup over y in (0, y_max] of |gamma (tau_gamma - T0) - a S0|: the
/// second-order bubble deformation of the g-type family.
pub fn tau_second_order_deviation(
    result: &ShootingResult,
    a: f64,
    y_max: f64,
    samples: usize,
) -> Result<f64> {
    let scales = scales_for(result)?;
    let gamma = result.gamma;
    let mut sup: f64 = 0.0;
    for i in 1..=samples {
        let y = y_max * i as f64 / samples as f64;
        let x = scales.log_mu + y.ln();
        let tau = gamma * (gamma - result.profile.eval(x).0);
        let dev = gamma * (tau - t0(y)) - a * s0(y);
        sup = sup.max(dev.abs());
    }
    Ok(sup)
}

/// Centered nonlinear mass 2 pi int_0^{r_hi} f(u) r dr, evaluated on the
/// profile grid in log-radius (r dr = e^{2x} dx).
pub fn nonlinear_mass(profile: &RadialProfile, log_r_hi: f64) -> Result<f64> {
    let spec = profile.spec;
    let mut edges: Vec<f64> = profile
        .x_grid
        .iter()
        .copied()
        .filter(|&x| x < log_r_hi)
        .collect();
    edges.push(log_r_hi);
    if edges.len() < 2 {
        return Err(Error::Domain("mass window empty".into()));
    }
    let integrand = |x: f64| {
        let u = profile.eval(x).0;
        (2.0 * x).exp() * spec.eval_f(u).unwrap_or(f64::NAN)
    };
    Ok(2.0 * std::f64::consts::PI * quad::integrate_cells(integrand, &edges, 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t0_values() {
        assert_eq!(t0(0.0), 0.0);
        assert!((t0(1.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn s0_values() {
        assert_eq!(s0(0.0), 0.0);
        // -ln2/2 + 1/4
        let want = -0.5 * std::f64::consts::LN_2 + 0.25;
        assert!((s0(1.0) - want).abs() < 1e-15);
        assert!((want + 0.096574).abs() < 1e-6);
    }

    /// (value, Laplacian) of f at y with Delta = -(d^2/dy^2 + (1/y) d/dy),
    /// 5-point 4th-order stencils.
    fn radial_laplacian<F: Fn(f64) -> f64>(f: F, y: f64, h: f64) -> f64 {
        let d1 =
            (-f(y + 2.0 * h) + 8.0 * f(y + h) - 8.0 * f(y - h) + f(y - 2.0 * h)) / (12.0 * h);
        let d2 = (-f(y + 2.0 * h) + 16.0 * f(y + h) - 30.0 * f(y) + 16.0 * f(y - h)
            - f(y - 2.0 * h))
            / (12.0 * h * h);
        -(d2 + d1 / y)
    }

    #[test]
    fn t0_satisfies_its_ode() {
        // Delta T0 + 4 e^{-2 T0} = 0
        let h = 2e-3;
        for &y in &[0.5, 2.0, 7.0] {
            let res = radial_laplacian(t0, y, h) + 4.0 * (-2.0 * t0(y)).exp();
            assert!(res.abs() <= 1e-10, "y = {y}: {res:e}");
        }
    }

    #[test]
    fn s0_satisfies_its_ode() {
        // Delta S0 - 8 e^{-2T0} S0 = 4 T0 e^{-2T0}
        let h = 2e-3;
        for &y in &[0.5, 2.0, 7.0] {
            let lhs = radial_laplacian(s0, y, h) - 8.0 * (-2.0 * t0(y)).exp() * s0(y);
            let rhs = 4.0 * t0(y) * (-2.0 * t0(y)).exp();
            assert!((lhs - rhs).abs() <= 1e-8, "y = {y}: {:e}", lhs - rhs);
        }
    }

    #[test]
    fn both_odes_at_random_points() {
        // deterministic LCG over [0.1, 20]
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let h = 2e-3;
        for _ in 0..50 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let y = 0.1 + (state >> 11) as f64 / (1u64 << 53) as f64 * 19.9;
            let res_t = radial_laplacian(t0, y, h) + 4.0 * (-2.0 * t0(y)).exp();
            assert!(res_t.abs() <= 1e-9, "T0 at y = {y}: {res_t:e}");
            let lhs = radial_laplacian(s0, y, h) - 8.0 * (-2.0 * t0(y)).exp() * s0(y);
            let rhs = 4.0 * t0(y) * (-2.0 * t0(y)).exp();
            assert!((lhs - rhs).abs() <= 1e-7, "S0 at y = {y}");
        }
    }

    #[test]
    fn scale_formula_theorem1() {
        // gamma = 10, log beta = -4.5: log mu = (ln4 + 4.5 - 2 ln 10 - 100)/2
        let log_mu = 0.5 * (4f64.ln() + 4.5 - 2.0 * 10f64.ln() - 100.0);
        assert!((log_mu - (-49.359438)).abs() < 1e-5);
    }

    #[test]
    fn rho_over_mu_identity() {
        // rho/mu = sqrt(e^{gamma^2/2} - 1), checked where representable
        let gamma: f64 = 3.0;
        let half_g2 = 0.5 * gamma * gamma;
        let log_ratio = 0.5 * (half_g2 + (-half_g2).exp().ln_1p());
        let direct = ((half_g2.exp() - 1.0) as f64).sqrt().ln();
        assert!((log_ratio - direct).abs() < 1e-12);
    }

    #[test]
    fn s0_of_t_matches_definition() {
        for &y in &[0.3, 1.0, 4.0, 50.0] {
            let direct = -0.5 * t0(y) + 0.5 * y * y / (1.0 + y * y);
            assert!((s0(y) - direct).abs() <= 1e-14);
        }
    }
}
