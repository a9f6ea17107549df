//! Exact arithmetic: arbitrary-precision rationals, polynomials in the
//! central parameter, truncated Laurent series, and sparse multivariate
//! polynomials. Everything downstream computes over these types; no floats
//! enter until the numeric quadrature layer in the companion crate.

pub mod cpoly;
pub mod laurent;
pub mod mpoly;
pub mod packed;
pub mod rat;

pub use cpoly::CPoly;
pub use laurent::{SeriesError, Trunc, TruncLaurent, Var};
pub use mpoly::{MPoly, Monomial};
pub use packed::PackedPoly;
pub use rat::{rat, Rat};
