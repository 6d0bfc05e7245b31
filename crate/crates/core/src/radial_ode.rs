//! Adaptive integration of the radial equation u'' + u'/r = -f(u) from the
//! center outward, in log-radius coordinates.
//!
//! With x = ln r and v(x) = u(e^x) the first-derivative term drops out:
//!
//!   v''(x) = -e^{2x} f(v(x)),
//!
//! and the concentration layer of width mu (down to ~1e-31 at gamma = 12)
//! becomes an O(1)-wide feature the step controller walks through. The r = 0
//! coordinate singularity is avoided by seeding at x_start with the two-term
//! Taylor expansion u(r) = gamma - f(gamma) r^2 / 4 + O(r^4), which follows
//! from -r u'(r) = int_0^r (u'' + u'/s) s ds.
//!
//! The integrator is a Dormand-Prince 5(4) pair with cubic-Hermite dense
//! output on step endpoints; zero crossings are located by bisection on the
//! dense interpolant to |u| <= 1e-13 * gamma.

use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearitySpec;
use crate::quad;

/// Relative accuracy of a located zero crossing: |u| <= ZERO_TOL * max(1, gamma).
const ZERO_TOL: f64 = 1e-13;

/// One sign change of the solution.
#[derive(Clone, Copy, Debug)]
pub struct ZeroCrossing {
    /// Radius of the crossing.
    pub r: f64,
    /// Slope du/dr at the crossing.
    pub du_dr: f64,
}

/// Dense radial solution record on a log-radius grid.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    /// Center value u(0).
    pub gamma: f64,
    /// Nonlinearity the profile solves.
    pub spec: NonlinearitySpec,
    /// Series-start abscissa.
    pub x_start: f64,
    /// Strictly increasing log-radius grid.
    pub x_grid: Vec<f64>,
    /// Solution values at the grid.
    pub u: Vec<f64>,
    /// du/dx at the grid.
    pub du_dx: Vec<f64>,
    /// Ordered zero crossings.
    pub zeros: Vec<ZeroCrossing>,
}

/// Controls for `integrate_with`.
#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    /// Local error per step.
    pub tol: f64,
    /// Step ceiling; also sets the grid density available to quadrature and
    /// finite differences downstream.
    pub h_max: f64,
    /// Storage cap; grids longer than this are thinned by striding.
    pub max_points: usize,
    /// Stop once this many zero crossings have been recorded.
    pub stop_after_zeros: Option<usize>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            tol: 1e-12,
            h_max: 0.02,
            max_points: 20_000,
            stop_after_zeros: None,
        }
    }
}

/// Series-start abscissa: ln(mu_hat) - 8 with mu_hat^2 = 4/(gamma * max(f(gamma),
/// lambda_bar * gamma + 1)), a computable proxy for the concentration scale.
/// The -8 offset keeps the seed's neglected O(r^4) term below 1e-16 * gamma.
pub fn x_start_for(spec: &NonlinearitySpec, gamma: f64) -> Result<f64> {
    let f_gamma = spec.eval_f(gamma)?;
    let linear = spec.lambda_bar().unwrap_or(0.0) * gamma + 1.0;
    let m = f_gamma.max(linear);
    Ok(0.5 * (4.0 / (gamma * m)).ln() - 8.0)
}

/// Solve v'' = -e^{2x} f(v) from the Taylor seed out to ln(r_max) with the
/// default options (tol overridden).
pub fn integrate(
    spec: &NonlinearitySpec,
    gamma: f64,
    r_max: f64,
    tol: f64,
) -> Result<RadialProfile> {
    integrate_with(
        spec,
        gamma,
        r_max,
        IntegrateOptions {
            tol,
            ..IntegrateOptions::default()
        },
    )
}

pub fn integrate_with(
    spec: &NonlinearitySpec,
    gamma: f64,
    r_max: f64,
    opts: IntegrateOptions,
) -> Result<RadialProfile> {
    if gamma <= 0.0 {
        return Err(Error::Config(format!("gamma = {gamma} must be positive")));
    }
    if !(1e-14..=1e-6).contains(&opts.tol) {
        return Err(Error::Config(format!(
            "tol = {} outside [1e-14, 1e-6]",
            opts.tol
        )));
    }
    if r_max <= 0.0 {
        return Err(Error::Config(format!("r_max = {r_max} must be positive")));
    }
    spec.check_ceiling(gamma)?;

    let x_start = x_start_for(spec, gamma)?;
    let x_end = r_max.ln();

    // Taylor seed: with q = f(gamma)/max(f(gamma), lambda_bar*gamma + 1) <= 1,
    // f(gamma) e^{2 x_start} / 4 = q e^{-16} / gamma, so the seed never
    // overflows even when f(gamma) ~ 1e300.
    let f_gamma = spec.eval_f(gamma)?;
    let linear = spec.lambda_bar().unwrap_or(0.0) * gamma + 1.0;
    let q = f_gamma / f_gamma.max(linear);
    let quadratic = q * (-16.0f64).exp() / gamma;
    let mut x = x_start;
    let mut v = gamma - quadratic;
    let mut w = -2.0 * quadratic;

    let rhs = |x: f64, v: f64| -> Result<f64> {
        let e2x = (2.0 * x).exp();
        Ok(-e2x * spec.eval_f(v)?)
    };

    // Error per unit step: accepting when the embedded estimate is below
    // h * tol keeps the accumulated error proportional to the integration
    // range times tol (the per-step error is then h * tol <= tol as well).
    let scale = opts.tol;

    let mut xs = Vec::with_capacity(4096);
    let mut vs = Vec::with_capacity(4096);
    let mut ws = Vec::with_capacity(4096);
    xs.push(x);
    vs.push(v);
    ws.push(w);
    let mut zeros: Vec<ZeroCrossing> = Vec::new();

    let mut h = opts.h_max.min(1e-3);
    let mut k1 = rhs(x, v)?;
    let mut steps: u64 = 0;
    const MAX_STEPS: u64 = 4_000_000;

    while x < x_end {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integrator {
                reason: format!("step limit {MAX_STEPS} exceeded"),
                last_x: x,
            });
        }
        if h < 1e-13 * x.abs().max(1.0) {
            return Err(Error::Integrator {
                reason: "step size underflow".into(),
                last_x: x,
            });
        }
        if x + h > x_end {
            h = x_end - x;
        }

        let step = dopri5_step(&rhs, x, v, w, h, k1)?;
        let err = {
            let ev = step.err_v;
            let ew = step.err_w;
            (0.5 * (ev * ev + ew * ew)).sqrt() / (h * scale)
        };

        if !err.is_finite() {
            // NaN inside the stages: shrink hard
            h *= 0.25;
            continue;
        }

        if err <= 1.0 {
            // accept
            let x_new = x + h;
            let v_new = step.v_new;
            let w_new = step.w_new;
            if !v_new.is_finite() || !w_new.is_finite() {
                return Err(Error::Integrator {
                    reason: "non-finite state (NaN) reached".into(),
                    last_x: x,
                });
            }
            if v.signum() != v_new.signum() && v != 0.0 && v_new != 0.0 {
                let z = locate_zero(x, v, w, x_new, v_new, w_new, gamma);
                zeros.push(z);
            }
            x = x_new;
            v = v_new;
            w = w_new;
            k1 = step.k_last; // FSAL
            xs.push(x);
            vs.push(v);
            ws.push(w);
            if let Some(n) = opts.stop_after_zeros {
                if zeros.len() >= n {
                    break;
                }
            }
            let factor = (0.9 * err.powf(-0.25)).clamp(0.2, 5.0);
            h = (h * factor).min(opts.h_max);
        } else {
            let factor = (0.9 * err.powf(-0.25)).clamp(0.2, 1.0);
            h *= factor;
        }
    }

    // thin for storage
    if xs.len() > opts.max_points {
        let stride = xs.len().div_ceil(opts.max_points);
        let keep: Vec<usize> = (0..xs.len())
            .filter(|i| i % stride == 0 || *i == xs.len() - 1)
            .collect();
        xs = keep.iter().map(|&i| xs[i]).collect();
        vs = keep.iter().map(|&i| vs[i]).collect();
        ws = keep.iter().map(|&i| ws[i]).collect();
    }

    Ok(RadialProfile {
        gamma,
        spec: *spec,
        x_start,
        x_grid: xs,
        u: vs,
        du_dx: ws,
        zeros,
    })
}

struct StepResult {
    v_new: f64,
    w_new: f64,
    err_v: f64,
    err_w: f64,
    k_last: f64,
}

/// One Dormand-Prince 5(4) step for the second-order system written as
/// (v, w) with v' = w, w' = g(x, v).
fn dopri5_step<G: Fn(f64, f64) -> Result<f64>>(
    g: &G,
    x: f64,
    v: f64,
    w: f64,
    h: f64,
    k1: f64,
) -> Result<StepResult> {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 6] = [
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const ERR: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];

    // stage derivatives for v are wi = w + h * sum a_ij kv_j; for w they are
    // k_i = g(x + c_i h, v_i)
    let mut kw = [0.0f64; 7]; // derivatives of w (g evaluations)
    let mut kv = [0.0f64; 7]; // derivatives of v (stage w-values)
    kw[0] = k1;
    kv[0] = w;
    for i in 1..7 {
        let mut dv = 0.0;
        let mut dw = 0.0;
        for j in 0..i {
            dv += A[i - 1][j] * kv[j];
            dw += A[i - 1][j] * kw[j];
        }
        let vi = v + h * dv;
        let wi = w + h * dw;
        kv[i] = wi;
        kw[i] = g(x + C[i] * h, vi)?;
    }

    let mut dv5 = 0.0;
    let mut dw5 = 0.0;
    let mut ev = 0.0;
    let mut ew = 0.0;
    for i in 0..7 {
        dv5 += B5[i] * kv[i];
        dw5 += B5[i] * kw[i];
        ev += ERR[i] * kv[i];
        ew += ERR[i] * kw[i];
    }

    Ok(StepResult {
        v_new: v + h * dv5,
        w_new: w + h * dw5,
        err_v: (h * ev).abs(),
        err_w: (h * ew).abs(),
        k_last: kw[6],
    })
}

/// Cubic Hermite value and derivative on [x0, x1] at parameter t in [0, 1].
fn hermite(
    x0: f64,
    v0: f64,
    w0: f64,
    x1: f64,
    v1: f64,
    w1: f64,
    t: f64,
) -> (f64, f64) {
    let h = x1 - x0;
    let t2 = t * t;
    let t3 = t2 * t;
    let value = (2.0 * t3 - 3.0 * t2 + 1.0) * v0
        + (t3 - 2.0 * t2 + t) * h * w0
        + (-2.0 * t3 + 3.0 * t2) * v1
        + (t3 - t2) * h * w1;
    let deriv = ((6.0 * t2 - 6.0 * t) * v0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * w0
        + (-6.0 * t2 + 6.0 * t) * v1
        + (3.0 * t2 - 2.0 * t) * h * w1)
        / h;
    (value, deriv)
}

fn locate_zero(
    x0: f64,
    v0: f64,
    w0: f64,
    x1: f64,
    v1: f64,
    w1: f64,
    gamma: f64,
) -> ZeroCrossing {
    let target = ZERO_TOL * gamma.max(1.0);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let slo = v0.signum();
    let mut best_t = 0.5;
    for _ in 0..200 {
        let t = 0.5 * (lo + hi);
        best_t = t;
        let (val, _) = hermite(x0, v0, w0, x1, v1, w1, t);
        if val.abs() <= target {
            break;
        }
        if val.signum() == slo {
            lo = t;
        } else {
            hi = t;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    let (_, dv) = hermite(x0, v0, w0, x1, v1, w1, best_t);
    let x = x0 + best_t * (x1 - x0);
    let r = x.exp();
    ZeroCrossing {
        r,
        du_dr: dv / r,
    }
}

impl RadialProfile {
    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.x_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_grid.is_empty()
    }

    /// Dense evaluation (u, du/dx) at log-radius x; clamps to the grid range.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let n = self.x_grid.len();
        if x <= self.x_grid[0] {
            return (self.u[0], self.du_dx[0]);
        }
        if x >= self.x_grid[n - 1] {
            return (self.u[n - 1], self.du_dx[n - 1]);
        }
        let i = match self
            .x_grid
            .binary_search_by(|p| p.partial_cmp(&x).expect("finite grid"))
        {
            Ok(i) => return (self.u[i], self.du_dx[i]),
            Err(i) => i - 1,
        };
        let t = (x - self.x_grid[i]) / (self.x_grid[i + 1] - self.x_grid[i]);
        hermite(
            self.x_grid[i],
            self.u[i],
            self.du_dx[i],
            self.x_grid[i + 1],
            self.u[i + 1],
            self.du_dx[i + 1],
            t,
        )
    }

    /// u at radius r.
    pub fn u_at_r(&self, r: f64) -> f64 {
        self.eval(r.ln()).0
    }

    /// Profile rescaled by s: returns u(s * .), i.e. the grid shifted by ln s.
    pub fn rescaled(&self, s: f64) -> RadialProfile {
        let shift = s.ln();
        RadialProfile {
            gamma: self.gamma,
            spec: self.spec,
            x_start: self.x_start - shift,
            x_grid: self.x_grid.iter().map(|x| x - shift).collect(),
            u: self.u.clone(),
            du_dx: self.du_dx.clone(),
            zeros: self
                .zeros
                .iter()
                .map(|z| ZeroCrossing {
                    r: z.r / s,
                    du_dr: z.du_dr * s,
                })
                .collect(),
        }
    }

    /// CSV dump: `r,u,du_dr`, radii ascending, 17 significant digits.
    pub fn dump_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 72 + 16);
        out.push_str("r,u,du_dr\n");
        for i in 0..self.len() {
            let r = self.x_grid[i].exp();
            let du_dr = self.du_dx[i] / r;
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                r, self.u[i], du_dr
            ));
        }
        out
    }
}

/// Lyapunov monitor along the profile grid.
///
/// Adimurthi-Druet: E = (u')^2 + lambda u^2 + beta exp(u^2), nonincreasing in
/// r along exact solutions. G-type: E = (u')^2 / 2 + F(u) with F the
/// antiderivative of f.
pub fn energy_monitor(profile: &RadialProfile) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(profile.len());
    match profile.spec {
        NonlinearitySpec::AdimurthiDruet {
            lambda_bar,
            log_beta,
        } => {
            for i in 0..profile.len() {
                let u = profile.u[i];
                let du_dr = profile.du_dx[i] * (-profile.x_grid[i]).exp();
                let e = du_dr * du_dr + lambda_bar * u * u + (log_beta + u * u).exp();
                out.push(e);
            }
        }
        NonlinearitySpec::GType { .. } => {
            let spec = profile.spec;
            for i in 0..profile.len() {
                let u = profile.u[i];
                let du_dr = profile.du_dx[i] * (-profile.x_grid[i]).exp();
                let f_int = quad::integrate(
                    |s| spec.eval_f(s).unwrap_or(f64::INFINITY),
                    0.0,
                    u,
                    1e-10,
                );
                out.push(0.5 * du_dr * du_dr + f_int);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel;

    /// Proxy for beta = 0: the exponential term underflows to exactly zero.
    const LOG_BETA_OFF: f64 = -1e6;

    #[test]
    fn pure_eigen_first_zero_at_one() {
        // f = lambda_1 u: solution is proportional to vbar1, first zero at 1
        let spec = NonlinearitySpec::adimurthi_druet(bessel::lambda1(), LOG_BETA_OFF);
        let p = integrate(&spec, 1.0, 1.5, 1e-12).unwrap();
        assert_eq!(p.zeros.len(), 1);
        assert!((p.zeros[0].r - 1.0).abs() <= 1e-9, "r = {}", p.zeros[0].r);
        assert!(p.zeros[0].du_dr < 0.0);
    }

    #[test]
    fn zero_rhs_keeps_u_constant() {
        let spec = NonlinearitySpec::adimurthi_druet(0.0, LOG_BETA_OFF);
        let p = integrate(&spec, 1.0, 2.0, 1e-12).unwrap();
        assert!(p.zeros.is_empty());
        for &u in &p.u {
            assert!((u - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn radially_decreasing_up_to_first_zero() {
        let spec = NonlinearitySpec::adimurthi_druet(1.0, -3.0);
        let p = integrate(&spec, 3.0, 3.0, 1e-12).unwrap();
        let r1 = p.zeros.first().map(|z| z.r).unwrap_or(f64::INFINITY);
        for i in 1..p.len() {
            if p.x_grid[i].exp() < r1 {
                assert!(
                    p.u[i] <= p.u[i - 1] + 1e-13 * p.gamma,
                    "not decreasing at r = {}",
                    p.x_grid[i].exp()
                );
            }
        }
    }

    #[test]
    fn energy_monitor_nonincreasing_linear() {
        let spec = NonlinearitySpec::adimurthi_druet(bessel::lambda1(), LOG_BETA_OFF);
        let p = integrate(&spec, 1.0, 1.4, 1e-12).unwrap();
        let e = energy_monitor(&p).unwrap();
        let e0 = e[0];
        for i in 1..e.len() {
            assert!(e[i] <= e[i - 1] + 1e-12 * e0);
        }
    }

    #[test]
    fn energy_monitor_degenerate_all_equal() {
        let spec = NonlinearitySpec::adimurthi_druet(0.0, LOG_BETA_OFF);
        let p = integrate(&spec, 1.0, 2.0, 1e-12).unwrap();
        let e = energy_monitor(&p).unwrap();
        let (min, max) = e
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        assert!(max - min <= 1e-15);
    }

    #[test]
    fn x_start_formula() {
        // pure linear, gamma = 1, lambda_bar = lambda_1
        let spec = NonlinearitySpec::adimurthi_druet(bessel::lambda1(), LOG_BETA_OFF);
        let xs = x_start_for(&spec, 1.0).unwrap();
        let m = (bessel::lambda1() * 1.0 + 1.0).max(spec.eval_f(1.0).unwrap());
        let want = 0.5 * (4.0 / m).ln() - 8.0;
        assert!((xs - want).abs() < 1e-14);
        assert!(xs < -8.0 && xs > -9.0);
    }

    #[test]
    fn seed_accuracy_against_deeper_start() {
        // integrate from 4 units deeper with tighter tolerance up to x_start;
        // the Taylor seed there must agree to 1e-15 relative
        for spec in [
            NonlinearitySpec::adimurthi_druet(bessel::lambda1(), LOG_BETA_OFF),
            NonlinearitySpec::adimurthi_druet(2.0, -4.0),
        ] {
            let gamma = 4.0;
            let xs = x_start_for(&spec, gamma).unwrap();
            let f_gamma = spec.eval_f(gamma).unwrap();
            let linear = spec.lambda_bar().unwrap_or(0.0) * gamma + 1.0;
            let q = f_gamma / f_gamma.max(linear);
            let seed_dev = q * (-16.0f64).exp() / gamma;

            // deeper start: same seed formula 4 units down
            let quadratic_deep = q * (-24.0f64).exp() / gamma;
            // integrate the deviation d = gamma - u so rounding acts on the
            // ~1e-8 deviation scale, not on gamma: d'' = e^{2x} f(gamma - d)
            let rhs = |x: f64, d: f64| -> f64 { (2.0 * x).exp() * spec.eval_f(gamma - d).unwrap() };
            let h = 4.0 / 4096.0;
            let mut d = quadratic_deep;
            let mut w = 2.0 * quadratic_deep;
            for i in 0..4096 {
                // classic RK4, fixed step, abscissae formed fresh each step
                let x = xs - 4.0 + i as f64 * h;
                let k1d = w;
                let k1w = rhs(x, d);
                let k2d = w + 0.5 * h * k1w;
                let k2w = rhs(x + 0.5 * h, d + 0.5 * h * k1d);
                let k3d = w + 0.5 * h * k2w;
                let k3w = rhs(x + 0.5 * h, d + 0.5 * h * k2d);
                let k4d = w + h * k3w;
                let k4w = rhs(x + h, d + h * k3d);
                d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
                w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            }
            assert!(
                (d - seed_dev).abs() / gamma <= 1e-15,
                "seed mismatch: {:e}",
                (d - seed_dev).abs() / gamma
            );
        }
    }

    #[test]
    fn round_trip_reproduces_vbar1() {
        // u(0) = v1(0) solves the eigen equation, so u = vbar1 on [0, 3]
        let spec = NonlinearitySpec::adimurthi_druet(bessel::lambda1(), LOG_BETA_OFF);
        let gamma = bessel::v1_at_zero();
        let p = integrate(&spec, gamma, 3.0, 1e-12).unwrap();
        let mut sup: f64 = 0.0;
        let mut r = 0.05;
        while r <= 3.0 {
            let diff = (p.u_at_r(r) - bessel::vbar1(r).unwrap()).abs();
            sup = sup.max(diff);
            r += 0.05;
        }
        assert!(sup <= 1e-8, "sup error {sup:e}");
    }

    #[test]
    fn self_convergence_under_tol_halving() {
        let spec = NonlinearitySpec::adimurthi_druet(bessel::lambda1(), LOG_BETA_OFF);
        let tol = 1e-10;
        let a = integrate(&spec, 1.0, 1.2, tol).unwrap().u_at_r(1.0);
        let b = integrate(&spec, 1.0, 1.2, tol / 2.0).unwrap().u_at_r(1.0);
        assert!((a - b).abs() <= 50.0 * tol, "delta = {:e}", (a - b).abs());
    }

    #[test]
    fn transversal_zeros() {
        let spec = NonlinearitySpec::adimurthi_druet(bessel::lambda1(), LOG_BETA_OFF);
        let p = integrate(&spec, 1.0, 8.0, 1e-12).unwrap();
        assert!(p.zeros.len() >= 2);
        for z in &p.zeros {
            assert!(z.du_dr.abs() > 0.0);
        }
    }

    #[test]
    fn log_radius_matches_direct_r_integration() {
        // benign spec: gamma = 1, small beta
        let spec = NonlinearitySpec::adimurthi_druet(2.0, -3.0);
        let p = integrate(&spec, 1.0, 1.5, 1e-12).unwrap();

        // direct integration in r from r0 = 1e-6 with the same Taylor seed,
        // classic RK4: u'' = -f(u) - u'/r
        let f = |u: f64| spec.eval_f(u).unwrap();
        let r0 = 1e-6;
        let mut r = r0;
        let mut u = 1.0 - f(1.0) * r0 * r0 / 4.0;
        let mut du = -f(1.0) * r0 / 2.0;
        let h: f64 = 2e-5;
        let acc = |r: f64, u: f64, du: f64| -> f64 { -f(u) - du / r };
        while r < 1.0 - 1e-12 {
            let h = h.min(1.0 - r);
            let k1u = du;
            let k1d = acc(r, u, du);
            let k2u = du + 0.5 * h * k1d;
            let k2d = acc(r + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1d);
            let k3u = du + 0.5 * h * k2d;
            let k3d = acc(r + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2d);
            let k4u = du + h * k3d;
            let k4d = acc(r + h, u + h * k3u, du + h * k3d);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            r += h;
            if (r - 0.5).abs() < 1e-12 {
                assert!((p.u_at_r(0.5) - u).abs() <= 1e-9);
            }
        }
        assert!((p.u_at_r(1.0) - u).abs() <= 1e-9);
    }

    #[test]
    fn csv_dump_shape() {
        let spec = NonlinearitySpec::adimurthi_druet(1.0, LOG_BETA_OFF);
        let p = integrate(&spec, 1.0, 1.2, 1e-10).unwrap();
        let csv = p.dump_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "r,u,du_dr");
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 3);
        // 17 significant digits
        assert!(first.split(',').next().unwrap().contains('.'));
    }

    #[test]
    fn tol_domain_checked() {
        let spec = NonlinearitySpec::adimurthi_druet(1.0, LOG_BETA_OFF);
        assert!(integrate(&spec, 1.0, 1.0, 1e-15).is_err());
        assert!(integrate(&spec, 1.0, 1.0, 1e-5).is_err());
        assert!(integrate(&spec, -1.0, 1.0, 1e-10).is_err());
    }
}
