//! Quadrature-based functionals of solved profiles and the per-solve
//! asymptotic-law report.
//!
//! Integrals are taken in log-radius where the profiles live: with
//! u'(r) r = du/dx and r dr = e^{2x} dx,
//!
//!   2 pi int_0^1 u'(r)^2 r dr = 2 pi int (du/dx)^2 dx,
//!   2 pi int_0^1 u(r)^2  r dr = 2 pi int u^2 e^{2x} dx,
//!
//! both evaluated with the shared adaptive Gauss-Kronrod engine over the
//! profile's own grid cells.

use crate::bessel;
use crate::bubble::{self};
use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearitySpec;
use crate::quad;
use crate::radial_ode::RadialProfile;
use crate::shooting::ShootingResult;
use serde::Serialize;
use std::f64::consts::PI;

/// Which asymptotic family a result belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Problem {
    /// Positive blow-up family with weak limit v_1 sqrt(l/lambda_1).
    TheoremOne { l: f64 },
    /// Nodal family with k sign regions and weak limit v_k sqrt(l/lambda_k).
    Nodal { l: f64, k: usize },
    /// g-type family with weak limit (a / (2 v_1(0))) v_1.
    GType { a: f64 },
}

/// Grid cells of the profile clipped to [x_lo, x_hi], for cell-aligned
/// quadrature of interpolated integrands.
fn clipped_edges(profile: &RadialProfile, x_lo: f64, x_hi: f64) -> Vec<f64> {
    let mut edges = Vec::with_capacity(profile.len() + 2);
    edges.push(x_lo);
    for &x in &profile.x_grid {
        if x > x_lo && x < x_hi {
            edges.push(x);
        }
    }
    edges.push(x_hi);
    edges
}

/// Dirichlet energy 2 pi int_0^1 u'(r)^2 r dr of the profile, to relative
/// tolerance `rel_tol`.
pub fn dirichlet_energy(profile: &RadialProfile, rel_tol: f64) -> Result<f64> {
    if profile.x_grid[profile.len() - 1] < 0.0 {
        return Err(Error::Domain(
            "profile truncated before r = 1; energy window incomplete".into(),
        ));
    }
    let edges = clipped_edges(profile, profile.x_start, 0.0);
    let v = quad::integrate_cells(|x| profile.eval(x).1.powi(2), &edges, rel_tol);
    Ok(2.0 * PI * v)
}

/// L2 norm (2 pi int_0^1 u^2 r dr)^{1/2}.
pub fn l2_norm(profile: &RadialProfile, rel_tol: f64) -> Result<f64> {
    if profile.x_grid[profile.len() - 1] < 0.0 {
        return Err(Error::Domain(
            "profile truncated before r = 1; L2 window incomplete".into(),
        ));
    }
    let edges = clipped_edges(profile, profile.x_start, 0.0);
    let v = quad::integrate_cells(
        |x| {
            let u = profile.eval(x).0;
            u * u * (2.0 * x).exp()
        },
        &edges,
        rel_tol,
    );
    Ok((2.0 * PI * v).sqrt())
}

/// Both sides of the energy identity
/// int |grad u|^2 = lambda_bar int u^2 + beta int u^2 e^{u^2}
/// (the exponential factor assembled pointwise in the log domain).
pub fn energy_identity_sides(result: &ShootingResult, rel_tol: f64) -> Result<(f64, f64)> {
    let NonlinearitySpec::AdimurthiDruet {
        lambda_bar,
        log_beta,
    } = result.spec
    else {
        return Err(Error::Config(
            "energy identity applies to the Adimurthi-Druet family".into(),
        ));
    };
    let profile = &result.profile;
    let lhs = dirichlet_energy(profile, rel_tol)?;
    let edges = clipped_edges(profile, profile.x_start, 0.0);
    let l2sq = quad::integrate_cells(
        |x| {
            let u = profile.eval(x).0;
            u * u * (2.0 * x).exp()
        },
        &edges,
        rel_tol,
    );
    let weighted = quad::integrate_cells(
        |x| {
            let u = profile.eval(x).0;
            u * u * (log_beta + u * u + 2.0 * x).exp()
        },
        &edges,
        rel_tol,
    );
    let rhs = 2.0 * PI * (lambda_bar * l2sq + weighted);
    Ok((lhs, rhs))
}

/// sup over grid radii in [delta_out, 1] of |u(r) - predicted(r)|.
pub fn weak_limit_deviation<F: Fn(f64) -> f64>(
    profile: &RadialProfile,
    predicted: F,
    delta_out: f64,
) -> f64 {
    let x_lo = delta_out.ln();
    let mut sup: f64 = 0.0;
    for i in 0..profile.len() {
        let x = profile.x_grid[i];
        if x < x_lo || x > 0.0 {
            continue;
        }
        sup = sup.max((profile.u[i] - predicted(x.exp())).abs());
    }
    sup
}

/// Finite-difference weights for the m-th derivative at `z` from the points
/// `xs` (Fornberg's recurrence).
fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0f64; m + 1]; n];
    let mut c1 = 1.0f64;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0f64;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * ((k as f64) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - (k as f64) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Largest PDE residual of the profile over radii in [r_lo, r_hi], measured
/// in the log-radius frame where the profile is stored:
///
///   res(x) = | d2u/dx2 (by 5-point finite differences of du/dx) + e^{2x} f(u) |,
///
/// which is r^2 (u'' + u'/r + f(u)). Returns (max residual, max |e^{2x} f(u)|)
/// over the same window. The unweighted r-space comparison is not a
/// finite-precision-checkable quantity at the inner end of the window, where
/// u'' and u'/r cancel to ~16 digits.
pub fn pde_residual(profile: &RadialProfile, r_lo: f64, r_hi: f64) -> Result<(f64, f64)> {
    let spec = profile.spec;
    let x_lo = r_lo.ln();
    let x_hi = r_hi.ln();
    let n = profile.len();
    if n < 5 {
        return Err(Error::Domain("profile too short for stencils".into()));
    }
    let mut max_res: f64 = 0.0;
    let mut max_rhs: f64 = 0.0;
    let mut seen = false;
    for i in 2..n - 2 {
        let x = profile.x_grid[i];
        if x < x_lo || x > x_hi {
            continue;
        }
        seen = true;
        let xs = &profile.x_grid[i - 2..=i + 2];
        let w = fd_weights(x, xs, 1);
        let mut d2u = 0.0;
        for (j, wj) in w.iter().enumerate() {
            d2u += wj * profile.du_dx[i - 2 + j];
        }
        let rhs = (2.0 * x).exp() * spec.eval_f(profile.u[i])?;
        max_res = max_res.max((d2u + rhs).abs());
        max_rhs = max_rhs.max(rhs.abs());
    }
    if !seen {
        return Err(Error::Domain("empty residual window".into()));
    }
    Ok((max_res, max_rhs))
}

/// Per-solve report of every applicable asymptotic law.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticsReport {
    pub gamma: f64,
    pub lambda_bar: Option<f64>,
    pub log_beta: f64,
    pub beta: f64,
    /// Boundary residual |u(1)| of the accepted solve.
    pub r_residual: f64,
    pub dirichlet_energy: f64,
    pub energy_target: f64,
    pub energy_residual: f64,
    pub l2_norm: f64,
    pub l2_target: Option<f64>,
    /// [log(1/beta)/gamma] / [v_1(0) sqrt(l/lambda_1)], positive family only.
    pub beta_law_ratio: Option<f64>,
    /// sup |u - u_infinity| over [delta_out, 1].
    pub weak_limit_dev: f64,
    /// (lambda_k - lambda_bar) gamma / (4 pi v_k(0) sqrt(lambda_k / l)),
    /// nodal family only.
    pub gap_law_ratio: Option<f64>,
    /// Scaled first-order inner-expansion residual.
    pub inner_res: Option<f64>,
    /// Scaled mid-range expansion residual, g-type only.
    pub mid_res: Option<f64>,
}

/// Outer window for the weak-limit deviation; comfortably outside the bubble
/// at any gamma the 64-bit mode can reach.
pub const DELTA_OUT: f64 = 0.2;

/// Assemble the full report for one accepted solve.
pub fn report(result: &ShootingResult, problem: &Problem, quad_tol: f64) -> Result<DiagnosticsReport> {
    let gamma = result.gamma;
    let energy = dirichlet_energy(&result.profile, quad_tol)?;
    let l2 = l2_norm(&result.profile, quad_tol)?;
    let lambda1 = bessel::lambda1();
    let v10 = bessel::v1_at_zero();

    let (energy_target, l2_target) = match *problem {
        Problem::TheoremOne { l } => (4.0 * PI + l, Some((l / lambda1).sqrt())),
        Problem::Nodal { l, k } => {
            let lk = bessel::eigen_data(k)?.lambda_k;
            (4.0 * PI + l, Some((l / lk).sqrt()))
        }
        Problem::GType { a } => (
            4.0 * PI + a * a * lambda1 / (4.0 * v10 * v10),
            Some(a / (2.0 * v10)),
        ),
    };

    let beta_law_ratio = match *problem {
        Problem::TheoremOne { l } => {
            let law = -result.spec.log_beta() / gamma;
            Some(law / (v10 * (l / lambda1).sqrt()))
        }
        _ => None,
    };

    let gap_law_ratio = match *problem {
        Problem::Nodal { l, k } => {
            let ek = bessel::eigen_data(k)?;
            let lambda_bar = result.spec.lambda_bar().expect("nodal is AD-family");
            let gap = (ek.lambda_k - lambda_bar) * gamma;
            Some(gap / (4.0 * PI * ek.norm_c * (ek.lambda_k / l).sqrt()))
        }
        _ => None,
    };

    let weak_limit_dev = match *problem {
        Problem::TheoremOne { l } => {
            let e1 = bessel::eigen_data(1)?;
            let s = (l / lambda1).sqrt();
            weak_limit_deviation(
                &result.profile,
                |r| s * e1.eval(r).unwrap_or(f64::NAN),
                DELTA_OUT,
            )
        }
        Problem::Nodal { l, k } => {
            let ek = bessel::eigen_data(k)?;
            let s = (l / ek.lambda_k).sqrt();
            weak_limit_deviation(
                &result.profile,
                |r| s * ek.eval(r).unwrap_or(f64::NAN),
                DELTA_OUT,
            )
        }
        Problem::GType { a } => {
            let e1 = bessel::eigen_data(1)?;
            let s = a / (2.0 * v10);
            weak_limit_deviation(
                &result.profile,
                |r| s * e1.eval(r).unwrap_or(f64::NAN),
                DELTA_OUT,
            )
        }
    };

    let (inner_res, mid_res) = match *problem {
        Problem::GType { a } => {
            let (inner, mid) = bubble::inner_residual_gtype(result, a)?;
            (Some(inner.max_residual), Some(mid.max_residual))
        }
        _ => {
            let inner = bubble::inner_residual_t1(result, 1.0)?;
            (Some(inner.max_residual), None)
        }
    };

    Ok(DiagnosticsReport {
        gamma,
        lambda_bar: result.spec.lambda_bar(),
        log_beta: result.spec.log_beta(),
        beta: result.spec.log_beta().exp(),
        r_residual: result.boundary_residual,
        dirichlet_energy: energy,
        energy_target,
        energy_residual: (energy - energy_target).abs(),
        l2_norm: l2,
        l2_target,
        beta_law_ratio,
        weak_limit_dev,
        gap_law_ratio,
        inner_res,
        mid_res,
    })
}
