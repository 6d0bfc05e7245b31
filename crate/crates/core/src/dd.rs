//! Minimal double-double arithmetic (~31 significant digits).
//!
//! The Bessel power series suffers catastrophic cancellation for moderate
//! arguments: at `x = 12` the largest series term is ~4.2e3 against a result
//! of ~4.8e-2, which strips ~5 digits and leaves plain f64 summation short of
//! the 1e-13 accuracy contract. Accumulating in double-double keeps the
//! rounding floor far below the final f64 rounding.
//!
//! Only the operations the series needs are implemented. Products rely on an
//! exact FMA (`f64::mul_add`).

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let s2 = s2 + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        // remainder of the first quotient, exactly
        let (p, e) = two_prod(q1, d);
        let r = ((self.hi - p) - e) + self.lo;
        let q2 = r / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Exact product of two f64 as a Dd.
#[inline]
pub(crate) fn dd_prod(a: f64, b: f64) -> Dd {
    let (hi, lo) = two_prod(a, b);
    Dd { hi, lo }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_recovers_cancelled_bits() {
        // 1 + 1e-20 - 1 is lost in f64 but survives in Dd
        let a = Dd::from(1.0).add(Dd::from(1e-20));
        let b = a.add(Dd::from(-1.0));
        assert_eq!(b.to_f64(), 1e-20);
    }

    #[test]
    fn prod_is_exact() {
        let p = dd_prod(1.0 + 2f64.powi(-30), 1.0 + 2f64.powi(-30));
        // (1+e)^2 = 1 + 2e + e^2; e^2 = 2^-60 is below f64 resolution of hi
        assert_eq!(p.lo, 2f64.powi(-60));
    }

    #[test]
    fn div_roundtrip() {
        let x = Dd::from(1.0).div_f64(3.0);
        let y = x.mul(Dd::from(3.0));
        assert!((y.to_f64() - 1.0).abs() < 1e-30);
    }
}
