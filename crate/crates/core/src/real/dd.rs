//! Double-double arithmetic: an unevaluated sum of two `f64`s giving
//! roughly 32 significant decimal digits.
//!
//! Only the operations the enumeration engine needs are provided. All
//! operations are deterministic; with the `fma` target feature the products
//! use fused multiply-add, otherwise the Dekker split is used (both exact).

use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Knuth two-sum: s + e == a + b exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Fast two-sum, valid when |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// p + e == a * b exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    #[cfg(target_feature = "fma")]
    {
        let p = a * b;
        let e = f64::mul_add(a, b, -p);
        (p, e)
    }
    #[cfg(not(target_feature = "fma"))]
    {
        const SPLITTER: f64 = 134217729.0; // 2^27 + 1
        let p = a * b;
        let t = SPLITTER * a;
        let a_hi = t - (t - a);
        let a_lo = a - a_hi;
        let t = SPLITTER * b;
        let b_hi = t - (t - b);
        let b_lo = b - b_hi;
        let e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo;
        (p, e)
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_u64(x: u64) -> Dd {
        // u64 may exceed 2^53; split exactly.
        let hi = (x >> 32) as f64 * 4294967296.0;
        let lo = (x & 0xffff_ffff) as f64;
        Dd::add(Dd::from_f64(hi), Dd::from_f64(lo))
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn add(a: Dd, b: Dd) -> Dd {
        let (s1, s2) = two_sum(a.hi, b.hi);
        let (t1, t2) = two_sum(a.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(a: Dd, b: Dd) -> Dd {
        Dd::add(a, b.neg())
    }

    #[inline]
    pub fn mul(a: Dd, b: Dd) -> Dd {
        let (p, mut e) = two_prod(a.hi, b.hi);
        e += a.hi * b.lo + a.lo * b.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(a: Dd, b: f64) -> Dd {
        let (p, mut e) = two_prod(a.hi, b);
        e += a.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(a: Dd, b: Dd) -> Dd {
        let q1 = a.hi / b.hi;
        let r = Dd::sub(a, Dd::mul_f64(b, q1));
        let q2 = r.hi / b.hi;
        let r = Dd::sub(r, Dd::mul_f64(b, q2));
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::add(Dd::new(s, e), Dd::from_f64(q3))
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut acc = Dd::ONE;
        let mut base = self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = Dd::mul(acc, base);
            }
            base = Dd::mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Ordering on the represented value (hi dominates by construction).
    pub fn cmp_value(a: Dd, b: Dd) -> std::cmp::Ordering {
        let d = Dd::sub(a, b);
        if d.hi > 0.0 || (d.hi == 0.0 && d.lo > 0.0) {
            std::cmp::Ordering::Greater
        } else if d.is_zero() {
            std::cmp::Ordering::Equal
        } else {
            std::cmp::Ordering::Less
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_recovers_small_term() {
        let a = Dd::from_f64(1.0);
        let b = Dd::new(1e-25, 0.0);
        let s = Dd::add(a, b);
        let back = Dd::sub(s, a);
        assert!((back.to_f64() - 1e-25).abs() < 1e-40);
    }

    #[test]
    fn mul_is_exact_on_representable_products() {
        let a = Dd::from_f64(3.0);
        let b = Dd::from_f64(1.0 / 8.0);
        let p = Dd::mul(a, b);
        assert_eq!(p, Dd::from_f64(0.375));
    }

    #[test]
    fn div_roundtrips() {
        let a = Dd::from_f64(1.0);
        let b = Dd::from_f64(3.0);
        let q = Dd::div(a, b);
        let r = Dd::mul(q, b);
        let err = Dd::sub(r, a);
        assert!(err.to_f64().abs() < 1e-31);
    }

    #[test]
    fn powi_matches_repeated_mul() {
        // Binary exponentiation groups products differently, so agreement
        // is to double-double rounding, not bitwise.
        let x = Dd::new(0.5411961001461970, 1.3267434430768136e-17);
        let mut acc = Dd::ONE;
        for _ in 0..7 {
            acc = Dd::mul(acc, x);
        }
        let err = Dd::sub(x.powi(7), acc).to_f64().abs();
        assert!(err < 1e-32);
    }

    #[test]
    fn from_u64_exact() {
        let v = Dd::from_u64(u64::MAX);
        // 2^64 - 1 = 18446744073709551615
        assert_eq!(v.hi, 1.8446744073709552e19);
        assert!((v.lo - -1.0).abs() < 2049.0); // representation error of hi
    }
}
