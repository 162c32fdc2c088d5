//! Truncated polynomials in the surface fugacity `y`.
//!
//! The value attached to every boundary signature during a sweep, and the
//! final series a strip build produces. Coefficient index = number of
//! surface contacts. Contributions above the truncation degree are dropped
//! silently; that is the truncation contract of the whole engine.

use serde::Serialize;
use thiserror::Error;

use crate::real::{AReal, Coeff, Dd, Precision};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("truncation degrees differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("composition would exceed truncation degree {0}")]
    DegreeOverflow(usize),
    #[error("constant term must be zero to divide by y")]
    NonzeroConstantTerm,
}

/// Dense polynomial in `y`, truncated at degree `trunc`.
///
/// `coeffs` stores only the occupied prefix; indices past `coeffs.len()`
/// are zero. The occupied prefix never exceeds `trunc + 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactPolynomial<C: Coeff = Dd> {
    coeffs: Vec<C>,
    trunc: usize,
}

impl<C: Coeff> ContactPolynomial<C> {
    pub fn zero(trunc: usize) -> Self {
        assert!(trunc >= 1, "truncation degree must be at least 1");
        ContactPolynomial { coeffs: Vec::new(), trunc }
    }

    pub fn from_coeffs(coeffs: Vec<C>, trunc: usize) -> Self {
        assert!(coeffs.len() <= trunc + 1);
        let mut p = ContactPolynomial { coeffs, trunc };
        p.normalize();
        p
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or(C::ZERO)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Highest index with a nonzero coefficient.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// `self[k + y_shift] += scale * src[k]`, dropping terms past `trunc`.
    pub fn axpy_shift(
        &mut self,
        src: &ContactPolynomial<C>,
        scale: C,
        y_shift: usize,
    ) -> Result<(), PolyError> {
        if self.trunc != src.trunc {
            return Err(PolyError::TruncationMismatch(self.trunc, src.trunc));
        }
        if y_shift > self.trunc {
            return Ok(());
        }
        let src_len = src.coeffs.len().min(self.trunc + 1 - y_shift);
        let need = src_len + y_shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, C::ZERO);
        }
        for k in 0..src_len {
            self.coeffs[k + y_shift].add_assign(scale.mul(src.coeffs[k]));
        }
        Ok(())
    }

    pub fn sub(&self, rhs: &ContactPolynomial<C>) -> Result<ContactPolynomial<C>, PolyError> {
        if self.trunc != rhs.trunc {
            return Err(PolyError::TruncationMismatch(self.trunc, rhs.trunc));
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.coeff(k).to_dd();
            c = Dd::sub(c, rhs.coeff(k).to_dd());
            out.push(C::from_dd(c));
        }
        Ok(ContactPolynomial::from_coeffs(out, self.trunc))
    }

    /// `p(y) -> p(y^2)`: coefficient k moves to 2k.
    pub fn compose_square(&self, out_trunc: usize) -> Result<ContactPolynomial<C>, PolyError> {
        if let Some(d) = self.effective_degree() {
            if 2 * d > out_trunc {
                return Err(PolyError::DegreeOverflow(out_trunc));
            }
        }
        let mut out = vec![C::ZERO; self.coeffs.len().saturating_mul(2).saturating_sub(1)];
        for (k, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[2 * k] = c;
            }
        }
        Ok(ContactPolynomial::from_coeffs(out, out_trunc))
    }

    /// Divide by one power of y; the constant term must vanish.
    pub fn scale_div_y(&self, out_trunc: usize) -> Result<ContactPolynomial<C>, PolyError> {
        if !self.coeff(0).is_zero() {
            return Err(PolyError::NonzeroConstantTerm);
        }
        let out: Vec<C> = self.coeffs.iter().skip(1).copied().collect();
        if out.len() > out_trunc + 1 {
            return Err(PolyError::DegreeOverflow(out_trunc));
        }
        Ok(ContactPolynomial::from_coeffs(out, out_trunc))
    }

    /// Horner evaluation at analysis precision.
    pub fn eval(&self, y: &AReal) -> AReal {
        let p = y.precision();
        let mut acc = AReal::zero(p);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(y).add(&AReal::from_dd(c.to_dd(), p));
        }
        acc
    }

    /// CSV rows `index,coefficient`, coefficients at full working precision.
    pub fn to_csv(&self) -> String {
        let p = Precision::from_digits(40);
        let mut s = String::from("index,coefficient\n");
        for (k, &c) in self.coeffs.iter().enumerate() {
            s.push_str(&format!("{},{}\n", k, AReal::from_dd(c.to_dd(), p).to_sci()));
        }
        s
    }

    /// Exact widening of the coefficient type into the default working tier.
    pub fn to_dd_poly(&self) -> ContactPolynomial<Dd> {
        ContactPolynomial::from_coeffs(self.coeffs.iter().map(|c| c.to_dd()).collect(), self.trunc)
    }

    /// Max |self[k] - rhs[k]| as f64, for coefficient-wise comparisons.
    pub fn max_abs_diff(&self, rhs: &ContactPolynomial<C>) -> f64 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut m = 0.0f64;
        for k in 0..n {
            let d = Dd::sub(self.coeff(k).to_dd(), rhs.coeff(k).to_dd()).to_f64().abs();
            if d > m {
                m = d;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Precision;
    use proptest::prelude::*;

    fn p50() -> Precision {
        Precision::from_digits(50)
    }

    fn dd(x: f64) -> Dd {
        Dd::from_f64(x)
    }

    #[test]
    fn axpy_single_term_with_shift() {
        // dst = 0, src = 1 at k=0, scale 2*xc^3, shift 1 -> 2*xc^3 * y
        let xc = Dd::new(0.5411961001461970, 3.869341537446176e-17);
        let scale = Dd::mul(Dd::from_f64(2.0), xc.powi(3));
        let src = ContactPolynomial::from_coeffs(vec![Dd::ONE], 10);
        let mut dst = ContactPolynomial::zero(10);
        dst.axpy_shift(&src, scale, 1).unwrap();
        assert!(dst.coeff(0).is_zero());
        assert_eq!(dst.coeff(1), scale);
        assert_eq!(dst.effective_degree(), Some(1));
    }

    #[test]
    fn axpy_identity_scale_is_addition() {
        let src = ContactPolynomial::from_coeffs(vec![dd(1.0), dd(2.0), dd(3.0)], 5);
        let mut dst = ContactPolynomial::from_coeffs(vec![dd(0.5)], 5);
        dst.axpy_shift(&src, Dd::ONE, 0).unwrap();
        assert_eq!(dst.coeff(0), dd(1.5));
        assert_eq!(dst.coeff(1), dd(2.0));
        assert_eq!(dst.coeff(2), dd(3.0));
    }

    #[test]
    fn axpy_drops_terms_past_truncation() {
        let mut src = ContactPolynomial::zero(4);
        src.axpy_shift(&ContactPolynomial::from_coeffs(vec![dd(1.0)], 4), dd(1.0), 4)
            .unwrap();
        assert_eq!(src.effective_degree(), Some(4));
        let mut dst = ContactPolynomial::zero(4);
        dst.axpy_shift(&src, dd(7.0), 1).unwrap();
        assert!(dst.is_zero());
    }

    #[test]
    fn axpy_rejects_truncation_mismatch() {
        let src = ContactPolynomial::<Dd>::zero(4);
        let mut dst = ContactPolynomial::<Dd>::zero(5);
        assert_eq!(
            dst.axpy_shift(&src, Dd::ONE, 0),
            Err(PolyError::TruncationMismatch(5, 4))
        );
    }

    #[test]
    fn eval_constant_one() {
        let p = ContactPolynomial::from_coeffs(vec![Dd::ONE], 3);
        let y = AReal::from_f64(123.456, p50());
        assert!((p.eval(&y).to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn eval_single_linear_term() {
        // 2 xc^3 y at y = 1 + sqrt(2), xc = 1/sqrt(2+sqrt(2)): 0.765366864...
        let two = AReal::from_i64(2, p50());
        let xc = AReal::from_i64(1, p50()).div(&two.add(&two.sqrt()).sqrt());
        let scale = two.mul(&xc.powi(3));
        let p = ContactPolynomial::from_coeffs(vec![Dd::ZERO, scale.to_dd()], 10);
        let y = AReal::from_i64(1, p50()).add(&two.sqrt());
        let got = p.eval(&y);
        assert!((got.to_f64() - 0.7653668647301795).abs() < 1e-15);
    }

    #[test]
    fn compose_square_and_div_y() {
        // y -> y^2; 3y^2 / y -> 3y
        let y = ContactPolynomial::from_coeffs(vec![Dd::ZERO, Dd::ONE], 8);
        let y2 = y.compose_square(8).unwrap();
        assert_eq!(y2.effective_degree(), Some(2));
        assert_eq!(y2.coeff(2), Dd::ONE);

        let p = ContactPolynomial::from_coeffs(vec![Dd::ZERO, Dd::ZERO, dd(3.0)], 8);
        let q = p.scale_div_y(8).unwrap();
        assert_eq!(q.coeff(1), dd(3.0));
        assert_eq!(q.effective_degree(), Some(1));

        let bad = ContactPolynomial::from_coeffs(vec![dd(1.0)], 8);
        assert_eq!(bad.scale_div_y(8), Err(PolyError::NonzeroConstantTerm));
    }

    #[test]
    fn sub_self_is_zero() {
        let p = ContactPolynomial::from_coeffs(vec![dd(1.0), dd(2.5), dd(0.25)], 6);
        assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn csv_roundtrip_digits() {
        let p = ContactPolynomial::from_coeffs(vec![Dd::new(1.0, 1e-20)], 2);
        let csv = p.to_csv();
        assert!(csv.starts_with("index,coefficient\n0,"));
        // The printed coefficient must round-trip to the same double-double.
        let field = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap();
        let back = AReal::parse(field, p50()).unwrap().to_dd();
        assert_eq!(back, Dd::new(1.0, 1e-20));
    }

    proptest! {
        // axpy with scale a then b == one axpy with scale a+b, to working precision
        #[test]
        fn axpy_linear_in_scale(
            coeffs in proptest::collection::vec(0.0f64..1.0, 1..12),
            a in -2.0f64..2.0,
            b in -2.0f64..2.0,
            shift in 0usize..2,
        ) {
            let src = ContactPolynomial::from_coeffs(coeffs.iter().map(|&c| dd(c)).collect(), 16);
            let mut d1 = ContactPolynomial::zero(16);
            d1.axpy_shift(&src, dd(a), shift).unwrap();
            d1.axpy_shift(&src, dd(b), shift).unwrap();
            let mut d2 = ContactPolynomial::zero(16);
            d2.axpy_shift(&src, Dd::add(dd(a), dd(b)), shift).unwrap();
            prop_assert!(d1.max_abs_diff(&d2) <= 1e-25);
        }

        // eval of a nonnegative polynomial is nondecreasing in y >= 0
        #[test]
        fn eval_monotone_for_nonneg(
            coeffs in proptest::collection::vec(0.0f64..1.0, 1..10),
            y1 in 0.0f64..3.0,
            dy in 0.0f64..2.0,
        ) {
            let p = ContactPolynomial::from_coeffs(coeffs.iter().map(|&c| dd(c)).collect(), 16);
            let prec = p50();
            let a = p.eval(&AReal::from_f64(y1, prec));
            let b = p.eval(&AReal::from_f64(y1 + dy, prec));
            prop_assert!(b >= a);
        }

        // compose_square then eval at y equals eval at y^2
        #[test]
        fn compose_square_eval(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 1..8),
            y in 0.1f64..1.5,
        ) {
            let p = ContactPolynomial::from_coeffs(coeffs.iter().map(|&c| dd(c)).collect(), 20);
            let q = p.compose_square(20).unwrap();
            let prec = p50();
            let ya = AReal::from_f64(y, prec);
            let lhs = q.eval(&ya);
            let rhs = p.eval(&ya.mul(&ya));
            prop_assert!(lhs.sub(&rhs).abs().to_f64() < 1e-28);
        }
    }
}
