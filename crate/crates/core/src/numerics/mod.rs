//! Shared numerical building blocks: scalar root finding and
//! minimization, Gauss-Legendre quadrature, symmetric tridiagonal
//! eigensolves, and mesh-ladder extrapolation.

pub mod extrapolate;
pub mod golden;
pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use extrapolate::{fit_order, two_term_extrapolate, LadderFit};
pub use golden::golden_min;
pub use quadrature::gauss_legendre;
pub use roots::{bisect, brent};
pub use tridiag::SymTridiag;
