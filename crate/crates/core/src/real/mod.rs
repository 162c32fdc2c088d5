//! Scalar types for the two precision tiers.
//!
//! Enumeration accumulates in [`Dd`] (double-double, ~32 significant digits);
//! root finding, extrapolation and report formatting run in [`AReal`]
//! (software big-float, 50 digits by default).

mod analysis;
mod dd;

pub use analysis::{AReal, Precision};
pub use dd::Dd;

/// Coefficient scalar the sweep engine is generic over.
///
/// `f64` exists as a cheaper, lower-precision alternative for sensitivity
/// checks; `Dd` is the default working tier.
pub trait Coeff:
    Copy + Send + Sync + PartialEq + std::fmt::Debug + serde::Serialize + 'static
{
    const ZERO: Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, rhs: Self);
    fn mul(self, rhs: Self) -> Self;
    /// Conversion used for the per-move step-fugacity scales.
    fn from_dd(v: Dd) -> Self;
    /// Exact embedding into the working tier (used when publishing results).
    fn to_dd(self) -> Dd;
}

impl Coeff for f64 {
    const ZERO: Self = 0.0;
    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self += rhs;
    }
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    #[inline]
    fn from_dd(v: Dd) -> Self {
        v.to_f64()
    }
    #[inline]
    fn to_dd(self) -> Dd {
        Dd::from_f64(self)
    }
}

impl Coeff for Dd {
    const ZERO: Self = Dd::ZERO;
    #[inline]
    fn is_zero(&self) -> bool {
        Dd::is_zero(*self)
    }
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = Dd::add(*self, rhs);
    }
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dd::mul(self, rhs)
    }
    #[inline]
    fn from_dd(v: Dd) -> Self {
        v
    }
    #[inline]
    fn to_dd(self) -> Dd {
        self
    }
}
