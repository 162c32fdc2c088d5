//! Surface-interacting self-avoiding walks in lattice strips.
//!
//! The crate enumerates strip generating functions A_T(x_c, y) by a
//! transfer-matrix sweep, locates the crossing points y_c(T) of successive
//! widths, extrapolates them to the critical surface fugacity, and verifies
//! the honeycomb finite-patch identities that anchor the method.

pub mod crossing;
pub mod extrapolate;
pub mod identity;
pub mod lattice;
pub mod oracle;
pub mod poly;
pub mod real;
pub mod tables;
pub mod tm;

pub use lattice::{critical_x, mu_squared, LatticeKind, StripSpec, WeightingMode};
pub use poly::ContactPolynomial;
pub use real::{AReal, Dd, Precision};
pub use tm::{build_a, build_two_variable, SeriesResult};
