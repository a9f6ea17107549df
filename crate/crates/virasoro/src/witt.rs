//! Laurent vector fields on the formal punctured disk.
//!
//! A field is f(z) d/dz with f a truncated Laurent series. The bracket is
//!
//! ```text
//! [f d/dz, g d/dz] = (f g' - f' g) d/dz
//! ```
//!
//! and the central extension is generated by the residue pairing
//!
//! ```text
//! gf(f d/dz, g d/dz) = (1/12) Res f''' g .
//! ```
//!
//! On mode monomials this gives gf(z^(n+1) d/dz, z^(m+1) d/dz) =
//! (n^3 - n)/12 when n + m = 0 and zero otherwise, which is the central
//! coefficient the mode bracket in [`crate::pbw`] carries on its first index.

use num_traits::One;

use crate::exact::laurent::{SeriesError, TruncLaurent, Var};
use crate::exact::rat::Rat;

/// f(z) d/dz.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentVF {
    coefficient: TruncLaurent,
}

impl LaurentVF {
    pub fn new(coefficient: TruncLaurent) -> Self {
        LaurentVF { coefficient }
    }

    /// The mode vector field z^(n+1) d/dz (the geometric shadow of L_n up to
    /// sign; the residue cocycle below is insensitive to that global sign).
    pub fn mode(var: Var, n: i64) -> Self {
        LaurentVF { coefficient: TruncLaurent::monomial(var, Rat::one(), n + 1) }
    }

    pub fn coefficient(&self) -> &TruncLaurent {
        &self.coefficient
    }
}

/// [X, Y] with coefficient f g' - f' g.
pub fn vf_bracket(x: &LaurentVF, y: &LaurentVF) -> Result<LaurentVF, SeriesError> {
    let f = &x.coefficient;
    let g = &y.coefficient;
    let fg1 = f.mul(&g.derivative())?;
    let f1g = f.derivative().mul(g)?;
    Ok(LaurentVF::new(fg1.sub(&f1g)?))
}

/// The residue cocycle (1/12) Res f''' g.
pub fn gelfand_fuks(x: &LaurentVF, y: &LaurentVF) -> Result<Rat, SeriesError> {
    let f3 = x.coefficient.derivative().derivative().derivative();
    let prod = f3.mul(&y.coefficient)?;
    Ok(prod.residue()? * Rat::new(1, 12))
}

/// Cyclic cocycle sum gf([X,Y],Z) + gf([Y,Z],X) + gf([Z,X],Y); zero for a
/// 2-cocycle.
pub fn cocycle_defect(x: &LaurentVF, y: &LaurentVF, z: &LaurentVF) -> Result<Rat, SeriesError> {
    let a = gelfand_fuks(&vf_bracket(x, y)?, z)?;
    let b = gelfand_fuks(&vf_bracket(y, z)?, x)?;
    let c = gelfand_fuks(&vf_bracket(z, x)?, y)?;
    Ok(a + b + c)
}

/// (n^3 - n)/12, the diagonal central coefficient.
pub fn central_coeff(n: i64) -> Rat {
    Rat::new(n * n * n - n, 12)
}
