//! Bessel functions J0, J1, their zeros, and the radial Dirichlet eigen-data
//! of the unit disk.
//!
//! The disk's radial eigenpairs are `lambda_k = j_{0,k}^2` with eigenfunction
//! `v_k(r) = c_k J0(j_{0,k} r)`, L2-normalized over the disk with `v_k(0) > 0`.
//! The first eigenfunction extends to the entire plane as
//! `vbar1(r) = v_1(0) J0(j_{0,1} r)`, whose sign changes are exactly the
//! rescaled zeros `r_n = j_{0,n}/j_{0,1}`.
//!
//! Implementation: power series summed in double-double for `x <= 12`, a
//! Hankel-type asymptotic expansion beyond. Both branches target absolute
//! error below 1e-13 over `[0, 200]`; the splice and both branches are checked
//! against the exact-rational series oracle in `crate::oracle`.

use crate::dd::{dd_prod, Dd};
use crate::error::{Error, Result};
use crate::quad;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Upper end of the supported argument range for `j0`/`j1`.
pub const X_MAX: f64 = 200.0;

/// Series/asymptotic splice point. The asymptotic branch's smallest term
/// sits near m = 2x, an e^{-2x}-scale truncation floor: ~1.5e-12 at x = 12
/// but ~5e-16 at x = 16. The double-double series is exact to ~1e-26 here,
/// so the splice goes where the asymptotic side meets the 1e-13 contract.
const SPLICE: f64 = 16.0;

/// J0 by double-double power series; valid (and accurate) for x <= ~30.
fn j0_series(x: f64) -> f64 {
    // J0(x) = sum_m (-1)^m t^m / (m!)^2, t = x^2/4
    let t = dd_prod(x, x).div_f64(4.0);
    let mut term = Dd::from(1.0);
    let mut sum = term;
    for m in 1..250u32 {
        term = term.mul(t).div_f64(-((m as f64) * (m as f64)));
        sum = sum.add(term);
        if term.hi.abs() < 1e-22 {
            break;
        }
    }
    sum.to_f64()
}

/// J1 by double-double power series; valid for x <= ~30.
fn j1_series(x: f64) -> f64 {
    // J1(x) = (x/2) * sum_m (-1)^m t^m / (m! (m+1)!), t = x^2/4
    let t = dd_prod(x, x).div_f64(4.0);
    let mut term = Dd::from(1.0);
    let mut sum = term;
    for m in 1..250u32 {
        term = term.mul(t).div_f64(-((m as f64) * (m as f64 + 1.0)));
        sum = sum.add(term);
        if term.hi.abs() < 1e-22 {
            break;
        }
    }
    sum.mul(Dd::from(x / 2.0)).to_f64()
}

/// Hankel asymptotic expansion of J_nu for large x:
///
///   J_nu(x) ~ sqrt(2/(pi x)) [ P cos(w) - Q sin(w) ],  w = x - nu*pi/2 - pi/4,
///   P ~ sum_k (-1)^k a_{2k} / x^{2k},   Q ~ sum_k (-1)^k a_{2k+1} / x^{2k+1},
///   a_m = prod_{j=1..m} (4 nu^2 - (2j-1)^2) / (m! 8^m).
///
/// Terms are added while they decrease; at x >= 12 the smallest term is far
/// below 1e-15.
fn j_asymptotic(nu: u32, x: f64) -> f64 {
    let four_nu2 = 4.0 * (nu as f64) * (nu as f64);
    let inv_x = 1.0 / x;

    let mut a = 1.0f64; // a_m, running
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut pow = 1.0f64; // x^{-m}
    let mut last = f64::INFINITY;
    for m in 1..40u32 {
        let tm = 2.0 * (m as f64) - 1.0;
        a *= (four_nu2 - tm * tm) / (8.0 * m as f64);
        pow *= inv_x;
        let term = a * pow;
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        // sign (-1)^k with m = 2k or m = 2k+1
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }

    // w = x - nu*pi/2 - pi/4 computed in double-double so the phase error
    // does not limit accuracy at x ~ 200; pi/4 = PI/4 + 3.0616e-17 exactly
    let shift = (2 * nu + 1) as f64;
    let w_dd = Dd::from(x)
        .add(dd_prod(shift, -PI / 4.0))
        .add(Dd::from(-shift * 3.061616997868383e-17));
    let (s, c) = w_dd.hi.sin_cos();
    // first-order phase correction for the low part
    let cos_w = c - w_dd.lo * s;
    let sin_w = s + w_dd.lo * c;

    (2.0 / (PI * x)).sqrt() * (p * cos_w - q * sin_w)
}

fn check_domain(x: f64) -> Result<()> {
    if !(0.0..=X_MAX).contains(&x) {
        return Err(Error::Domain(format!(
            "bessel argument {x} outside [0, {X_MAX}]"
        )));
    }
    Ok(())
}

/// J0(x) for `0 <= x <= 200`, absolute error below 1e-13.
pub fn j0(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(if x <= SPLICE {
        j0_series(x)
    } else {
        j_asymptotic(0, x)
    })
}

/// J1(x) for `0 <= x <= 200`, absolute error below 1e-13. Satisfies J0' = -J1.
pub fn j1(x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(if x <= SPLICE {
        j1_series(x)
    } else {
        j_asymptotic(1, x)
    })
}

/// Number of J0 zeros kept in the process-wide cache.
const ZERO_CACHE_LEN: usize = 20;

fn zero_cache() -> &'static [f64; ZERO_CACHE_LEN] {
    static CACHE: OnceLock<[f64; ZERO_CACHE_LEN]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut zs = [0.0; ZERO_CACHE_LEN];
        for (i, z) in zs.iter_mut().enumerate() {
            *z = find_j0_zero(i + 1).expect("J0 zero bracketing failed");
        }
        zs
    })
}

/// Locate the k-th positive zero of J0 by sign scan + bisection inside
/// [(k - 3/4) pi, (k + 1/4) pi]; consecutive zeros are ~pi apart.
fn find_j0_zero(k: usize) -> Result<f64> {
    let lo0 = (k as f64 - 0.75) * PI;
    let hi0 = (k as f64 + 0.25) * PI;
    // sign scan to find a bracketing subinterval
    const SCAN: usize = 32;
    let mut bracket = None;
    let mut prev_x = lo0;
    let mut prev_f = j0(prev_x)?;
    for i in 1..=SCAN {
        let x = lo0 + (hi0 - lo0) * (i as f64) / (SCAN as f64);
        let f = j0(x)?;
        if prev_f == 0.0 {
            return Ok(prev_x);
        }
        if prev_f.signum() != f.signum() {
            bracket = Some((prev_x, prev_f, x));
            break;
        }
        prev_x = x;
        prev_f = f;
    }
    let (mut lo, mut flo, mut hi) = bracket.ok_or_else(|| {
        Error::Domain(format!(
            "no sign change of J0 in [{lo0}, {hi0}]: broken J0 implementation"
        ))
    })?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fmid = j0(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if flo.signum() != fmid.signum() {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// k-th positive zero of J0, `1 <= k <= 20`; |J0(result)| <= 1e-12.
pub fn bessel_zero(k: usize) -> Result<f64> {
    if k < 1 || k > ZERO_CACHE_LEN {
        return Err(Error::Domain(format!(
            "bessel_zero index {k} outside 1..={ZERO_CACHE_LEN}"
        )));
    }
    Ok(zero_cache()[k - 1])
}

/// Smallest radial Dirichlet eigenvalue of the disk, `lambda_1 = j_{0,1}^2`.
pub fn lambda1() -> f64 {
    let j = zero_cache()[0];
    j * j
}

/// Center value of the first normalized eigenfunction, `v_1(0)`.
pub fn v1_at_zero() -> f64 {
    eigen_data(1).expect("eigen_data(1)").norm_c
}

/// Eigen-data of one radial Dirichlet mode of the unit disk.
///
/// `v_k(r) = norm_c * J0(j0k * r)` with `int_disk v_k^2 = 1` and `v_k(0) > 0`;
/// `r_k = j0k / j01` is where the extended first mode vanishes for the k-th
/// time, and `alpha_k = int_{B(r_k)} vbar1^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenData {
    pub k: usize,
    pub j0k: f64,
    pub lambda_k: f64,
    pub norm_c: f64,
    pub r_k: f64,
    pub alpha_k: f64,
}

impl EigenData {
    /// Eigenfunction value v_k(r).
    pub fn eval(&self, r: f64) -> Result<f64> {
        Ok(self.norm_c * j0(self.j0k * r)?)
    }
}

const EIGEN_CACHE_LEN: usize = 10;

fn eigen_cache() -> &'static Vec<EigenData> {
    static CACHE: OnceLock<Vec<EigenData>> = OnceLock::new();
    CACHE.get_or_init(|| {
        (1..=EIGEN_CACHE_LEN)
            .map(|k| compute_eigen_data(k).expect("eigen data"))
            .collect()
    })
}

fn compute_eigen_data(k: usize) -> Result<EigenData> {
    let j0k = bessel_zero(k)?;
    let j01 = bessel_zero(1)?;
    let lambda_k = j0k * j0k;
    // 2 pi int_0^1 (c J0(j0k r))^2 r dr = pi c^2 J1(j0k)^2 = 1
    let norm_c = 1.0 / (PI.sqrt() * j1(j0k)?.abs());
    let r_k = if k == 1 { 1.0 } else { j0k / j01 };
    // alpha_k = 2 pi int_0^{r_k} vbar1(s)^2 s ds by adaptive quadrature
    let c1 = 1.0 / (PI.sqrt() * j1(j01)?.abs());
    let alpha_k = 2.0
        * PI
        * quad::integrate(
            |s| {
                let v = c1 * j0(j01 * s).expect("vbar1 in range");
                v * v * s
            },
            0.0,
            r_k,
            1e-10,
        );
    Ok(EigenData {
        k,
        j0k,
        lambda_k,
        norm_c,
        r_k,
        alpha_k,
    })
}

/// Eigen-data for mode `1 <= k <= 10`, cached per process.
pub fn eigen_data(k: usize) -> Result<EigenData> {
    if k < 1 || k > EIGEN_CACHE_LEN {
        return Err(Error::Domain(format!(
            "eigen_data index {k} outside 1..={EIGEN_CACHE_LEN}"
        )));
    }
    Ok(eigen_cache()[k - 1].clone())
}

/// Entire radial extension of the first eigenfunction,
/// `vbar1(r) = v_1(0) J0(j01 r)` for `0 <= r <= 20`.
pub fn vbar1(r: f64) -> Result<f64> {
    if !(0.0..=20.0).contains(&r) {
        return Err(Error::Domain(format!("vbar1 argument {r} outside [0, 20]")));
    }
    let e1 = eigen_data(1)?;
    Ok(e1.norm_c * j0(e1.j0k * r)?)
}
