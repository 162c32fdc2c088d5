//! Analysis-tier reals: arbitrary-precision floats used for root finding,
//! extrapolation and table formatting.
//!
//! Backed by `astro-float`. Every value carries its working precision in
//! bits; binary operations run at the larger of the two operand precisions,
//! so arithmetic is deterministic for a fixed tier.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use super::Dd;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Precision of the analysis tier, constructed from a decimal digit count.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Precision {
    bits: usize,
}

impl Precision {
    /// `digits` decimal digits, plus guard bits for intermediate rounding.
    pub fn from_digits(digits: usize) -> Precision {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32;
        Precision { bits: bits.max(128) }
    }

    pub fn bits(self) -> usize {
        self.bits
    }
}

impl Default for Precision {
    /// 50 decimal digits.
    fn default() -> Self {
        Precision::from_digits(50)
    }
}

#[derive(Clone, Debug)]
pub struct AReal {
    v: BigFloat,
    prec: usize,
}

impl AReal {
    pub fn zero(p: Precision) -> AReal {
        AReal { v: BigFloat::from_i64(0, p.bits), prec: p.bits }
    }

    pub fn from_i64(x: i64, p: Precision) -> AReal {
        AReal { v: BigFloat::from_i64(x, p.bits), prec: p.bits }
    }

    pub fn from_f64(x: f64, p: Precision) -> AReal {
        AReal { v: BigFloat::from_f64(x, p.bits), prec: p.bits }
    }

    /// Exact embedding of a double-double value.
    pub fn from_dd(x: Dd, p: Precision) -> AReal {
        let hi = BigFloat::from_f64(x.hi, p.bits);
        let lo = BigFloat::from_f64(x.lo, p.bits);
        AReal { v: hi.add(&lo, p.bits, RM), prec: p.bits }
    }

    /// Parse a decimal literal such as `0.37905227776` or `1.5e-3`.
    pub fn parse(s: &str, p: Precision) -> Option<AReal> {
        let s = s.trim();
        if s.is_empty()
            || !s
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '.' | '+' | '-' | 'e' | 'E'))
        {
            return None;
        }
        let v = CONSTS.with(|cc| BigFloat::parse(s, Radix::Dec, p.bits, RM, &mut cc.borrow_mut()));
        if v.is_nan() {
            return None;
        }
        Some(AReal { v, prec: p.bits })
    }

    pub fn precision(&self) -> Precision {
        Precision { bits: self.prec }
    }

    fn lift(&self, other: &AReal) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, rhs: &AReal) -> AReal {
        let p = self.lift(rhs);
        AReal { v: self.v.add(&rhs.v, p, RM), prec: p }
    }

    pub fn sub(&self, rhs: &AReal) -> AReal {
        let p = self.lift(rhs);
        AReal { v: self.v.sub(&rhs.v, p, RM), prec: p }
    }

    pub fn mul(&self, rhs: &AReal) -> AReal {
        let p = self.lift(rhs);
        AReal { v: self.v.mul(&rhs.v, p, RM), prec: p }
    }

    pub fn div(&self, rhs: &AReal) -> AReal {
        let p = self.lift(rhs);
        AReal { v: self.v.div(&rhs.v, p, RM), prec: p }
    }

    pub fn neg(&self) -> AReal {
        AReal { v: self.v.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> AReal {
        AReal { v: self.v.abs(), prec: self.prec }
    }

    pub fn sqrt(&self) -> AReal {
        AReal { v: self.v.sqrt(self.prec, RM), prec: self.prec }
    }

    /// Real power, used for the extrapolation abscissa ratios when w != 1.
    pub fn pow(&self, exp: &AReal) -> AReal {
        let p = self.lift(exp);
        let v = CONSTS.with(|cc| self.v.pow(&exp.v, p, RM, &mut cc.borrow_mut()));
        AReal { v, prec: p }
    }

    pub fn powi(&self, mut n: i32) -> AReal {
        let neg = n < 0;
        if neg {
            n = -n;
        }
        let mut acc = AReal::from_i64(1, Precision { bits: self.prec });
        let mut base = self.clone();
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        if neg {
            AReal::from_i64(1, Precision { bits: self.prec }).div(&acc)
        } else {
            acc
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        // Display emits full-precision scientific notation; f64 parse rounds it.
        format!("{}", self.v).parse::<f64>().unwrap_or(f64::NAN)
    }

    pub fn to_dd(&self) -> Dd {
        let hi = self.to_f64();
        let rem = self.sub(&AReal::from_f64(hi, Precision { bits: self.prec }));
        Dd::new(hi, rem.to_f64())
    }

    /// `(negative, digits, exp10)` with value = 0.d1d2... x 10^exp10.
    fn decompose(&self) -> (bool, Vec<u8>, i32) {
        if self.v.is_zero() {
            return (false, vec![0], 1);
        }
        let s = format!("{}", self.v);
        let neg = s.starts_with('-');
        let body = s.trim_start_matches('-');
        let (mant, exp) = match body.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().unwrap_or(0)),
            None => (body, 0),
        };
        let mut digits = Vec::with_capacity(mant.len());
        let mut point_pos: i32 = 0;
        let mut seen_point = false;
        for c in mant.chars() {
            if c == '.' {
                seen_point = true;
            } else if c.is_ascii_digit() {
                digits.push(c as u8 - b'0');
                if !seen_point {
                    point_pos += 1;
                }
            }
        }
        (neg, digits, point_pos + exp)
    }

    /// Fixed-point rendering with `ndec` digits after the decimal point,
    /// rounded half-up. Matches the 15-decimal layout of the reference tables.
    pub fn to_fixed(&self, ndec: usize) -> String {
        let (neg, mut digits, mut exp10) = self.decompose();
        // Digit i of the string sits at decimal position exp10 - 1 - i;
        // the last rendered position is -ndec, so keep exp10 + ndec digits.
        let keep = exp10 + ndec as i32;
        if keep < 0 {
            return format!("0.{}", "0".repeat(ndec));
        }
        let keep = keep as usize;
        if keep < digits.len() {
            let round_up = digits[keep] >= 5;
            digits.truncate(keep);
            if round_up {
                let mut i = keep;
                loop {
                    if i == 0 {
                        digits.insert(0, 1);
                        exp10 += 1;
                        break;
                    }
                    i -= 1;
                    if digits[i] == 9 {
                        digits[i] = 0;
                    } else {
                        digits[i] += 1;
                        break;
                    }
                }
            }
        }
        let digit_at = |pos: i32| -> u8 {
            let i = exp10 - 1 - pos;
            if i < 0 {
                0
            } else {
                digits.get(i as usize).copied().unwrap_or(0)
            }
        };
        let mut out = String::new();
        if neg && digits.iter().any(|&d| d != 0) {
            out.push('-');
        }
        let int_slots = exp10.max(0);
        if int_slots == 0 {
            out.push('0');
        } else {
            for pos in (0..int_slots).rev() {
                out.push((b'0' + digit_at(pos)) as char);
            }
        }
        if ndec > 0 {
            out.push('.');
            for k in 1..=ndec as i32 {
                out.push((b'0' + digit_at(-k)) as char);
            }
        }
        out
    }

    /// Full-precision scientific notation (round-trips through `parse`).
    pub fn to_sci(&self) -> String {
        format!("{}", self.v)
    }
}

impl PartialEq for AReal {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl PartialOrd for AReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

impl fmt::Display for AReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p50() -> Precision {
        Precision::from_digits(50)
    }

    #[test]
    fn sqrt_two_digits() {
        let s2 = AReal::from_i64(2, p50()).sqrt();
        let s = s2.to_fixed(30);
        assert_eq!(s, "1.414213562373095048801688724210");
    }

    #[test]
    fn parse_and_fixed_roundtrip() {
        let x = AReal::parse("0.37905227776", p50()).unwrap();
        assert_eq!(x.to_fixed(11), "0.37905227776");
        assert_eq!(x.to_fixed(15), "0.379052277760000");
    }

    #[test]
    fn fixed_rounds_half_up() {
        let x = AReal::parse("1.23456", p50()).unwrap();
        assert_eq!(x.to_fixed(4), "1.2346");
        let y = AReal::parse("9.9999", p50()).unwrap();
        assert_eq!(y.to_fixed(3), "10.000");
    }

    #[test]
    fn fixed_handles_small_values() {
        let x = AReal::parse("0.00123", p50()).unwrap();
        assert_eq!(x.to_fixed(5), "0.00123");
        assert_eq!(x.to_fixed(2), "0.00");
    }

    #[test]
    fn dd_embedding_is_exact() {
        let d = Dd::new(1.0, 1e-20);
        let a = AReal::from_dd(d, p50());
        let one = AReal::from_i64(1, p50());
        let back = a.sub(&one);
        assert!((back.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn to_dd_splits() {
        let x = AReal::from_i64(2, p50()).sqrt();
        let d = x.to_dd();
        assert_eq!(d.hi, std::f64::consts::SQRT_2);
        assert!(d.lo.abs() < 1e-16);
        assert!(d.lo != 0.0);
    }

    #[test]
    fn zero_formats() {
        let z = AReal::zero(p50());
        assert_eq!(z.to_fixed(3), "0.000");
    }
}
