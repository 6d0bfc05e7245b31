//! Slow reference path for J0/J1 and the J0 zeros.
//!
//! The power series for J0 loses digits to cancellation in floating point
//! (the largest term at x = 50 is ~3e19 against a result of ~0.06), so the
//! reference evaluates the truncated series exactly: the f64 argument is a
//! dyadic rational, the series is summed by integer Horner over a single
//! common denominator, and the only error is the series tail, which for an
//! alternating series with decreasing terms is below the first omitted term.
//! Term counts keep that tail under ~1e-18 on [0, 50].
//!
//! This path shares nothing with `crate::bessel` and exists to validate it.

use num::bigint::{BigInt, Sign};
use num::rational::Ratio;
use num::traits::{Signed, ToPrimitive, Zero};
use std::f64::consts::PI;

/// Terms kept so the alternating tail at |x| is below ~1e-18.
fn term_count(x: f64) -> usize {
    (3.0 * x).ceil() as usize + 25
}

/// Exact scaled partial sum of `sum_k (-1)^k t^k / (k! (k+d)!)` with
/// t = x^2/4: returns (numerator, denominator) as exact integers.
///
/// Writing t = p/q (dyadic, exact for any finite f64) and multiplying
/// through by q^M (M! (M+d)!), the Horner recurrence stays in BigInt:
///
///   H_M = b_M,  H_k = H_{k+1} * p + b_k * q^{M-k},
///
/// with b_k = (-1)^k (M!/k!) ((M+d)!/(k+d)!).
fn series_scaled(x: f64, d: u32, m: usize) -> (BigInt, BigInt) {
    let r = Ratio::<BigInt>::from_float(x).expect("finite argument");
    let t = &r * &r / BigInt::from(4);
    let (p, q) = (t.numer().clone(), t.denom().clone());

    // b_k built downward from b_M = 1
    let mut coeffs: Vec<BigInt> = vec![BigInt::from(1); m + 1];
    for k in (0..m).rev() {
        let f1 = BigInt::from((k + 1) as u64);
        let f2 = BigInt::from((k + 1) as u64 + d as u64);
        coeffs[k] = &coeffs[k + 1] * f1 * f2;
    }
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k % 2 == 1 {
            *c = -&*c;
        }
    }

    let mut acc = coeffs[m].clone();
    let mut q_pow = BigInt::from(1);
    for k in (0..m).rev() {
        q_pow *= &q;
        acc = acc * &p + &coeffs[k] * &q_pow;
    }

    // denominator: q^M * M! * (M+d)!
    let mut m_fact = BigInt::from(1);
    for j in 2..=m as u64 {
        m_fact *= BigInt::from(j);
    }
    let mut md_fact = BigInt::from(1);
    for j in 2..=(m as u64 + d as u64) {
        md_fact *= BigInt::from(j);
    }
    let den = q_pow * m_fact * md_fact;
    (acc, den)
}

/// Big-ratio to f64 without overflowing intermediate conversions: shift the
/// numerator so the integer quotient carries ~80 bits, then scale back.
fn big_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let neg = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let n = num.magnitude();
    let d = den.magnitude();
    let shift: i64 = 80 - (n.bits() as i64 - d.bits() as i64);
    let q = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    let qf = q.to_f64().expect("80-bit quotient fits f64");
    let val = qf * 2f64.powi(-shift as i32);
    if neg {
        -val
    } else {
        val
    }
}

/// J0(x) by the exact power series, truncation below 1e-15.
pub fn j0_oracle(x: f64) -> f64 {
    let (n, d) = series_scaled(x, 0, term_count(x));
    big_ratio_to_f64(&n, &d)
}

/// J1(x) by the exact power series, truncation below 1e-15.
pub fn j1_oracle(x: f64) -> f64 {
    let (n, d) = series_scaled(x, 1, term_count(x));
    0.5 * x * big_ratio_to_f64(&n, &d)
}

/// Sign of J0(x) straight from the exact scaled numerator.
fn j0_sign(x: f64) -> i32 {
    let (n, _) = series_scaled(x, 0, term_count(x));
    if n.is_positive() {
        1
    } else if n.is_negative() {
        -1
    } else {
        0
    }
}

/// k-th positive zero of J0 by sign scan + bisection on the exact series,
/// inside [(k - 3/4) pi, (k + 1/4) pi].
pub fn j0_zero_oracle(k: usize) -> f64 {
    assert!(k >= 1, "zero index starts at 1");
    let lo0 = (k as f64 - 0.75) * PI;
    let hi0 = (k as f64 + 0.25) * PI;
    const SCAN: usize = 16;
    let mut lo = lo0;
    let mut slo = j0_sign(lo);
    let mut hi = lo0;
    let mut found = false;
    for i in 1..=SCAN {
        let x = lo0 + (hi0 - lo0) * (i as f64) / (SCAN as f64);
        let s = j0_sign(x);
        if s == 0 {
            return x;
        }
        if s != slo {
            hi = x;
            found = true;
            break;
        }
        lo = x;
        slo = s;
    }
    assert!(found, "no sign change of the series in [{lo0}, {hi0}]");
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let s = j0_sign(mid);
        if s == 0 {
            return mid;
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
