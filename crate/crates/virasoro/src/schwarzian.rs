//! Formal coordinate changes and the Schwarzian derivative.
//!
//! A `FormalMap` is a series f with f(0) = 0 and f'(0) invertible, carrying
//! an explicit truncation window (every interesting Schwarzian is an infinite
//! series, so exact polynomial inputs must be windowed first). The Schwarzian
//!
//! ```text
//! S(f) = (f''/f')' - (1/2) (f''/f')^2
//! ```
//!
//! vanishes identically on Mobius maps and obeys the cocycle-style chain rule
//! S(f o g) = (S(f) o g) (g')^2 + S(g).

use core::fmt;

use num_traits::Zero;

use crate::exact::laurent::{SeriesError, Trunc, TruncLaurent, Var};
use crate::exact::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    /// Constant term must be zero (expand about a fixed point of 0).
    NonzeroConstant,
    /// Linear coefficient absent or zero.
    ZeroLinearCoeff,
    /// Maps must carry a finite truncation window of order >= 2.
    NeedsWindow,
    /// ad - bc = 0, or d = 0 so the expansion point is a pole.
    DegenerateMobius,
    Series(SeriesError),
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::NonzeroConstant => write!(f, "formal map must vanish at 0"),
            MapError::ZeroLinearCoeff => write!(f, "formal map needs an invertible linear term"),
            MapError::NeedsWindow => {
                write!(f, "formal map needs a truncation window of order at least 2")
            }
            MapError::DegenerateMobius => {
                write!(f, "mobius parameters need ad - bc != 0 and d != 0")
            }
            MapError::Series(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MapError {}

impl From<SeriesError> for MapError {
    fn from(e: SeriesError) -> Self {
        MapError::Series(e)
    }
}

/// Invertible formal coordinate change fixing 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalMap {
    series: TruncLaurent,
}

impl FormalMap {
    pub fn new(series: TruncLaurent) -> Result<Self, MapError> {
        match series.trunc() {
            Trunc::Order(k) if k >= 2 => {}
            _ => return Err(MapError::NeedsWindow),
        }
        if series.terms().any(|(e, _)| e < 1) {
            return Err(MapError::NonzeroConstant);
        }
        if series.coeff(1).map_err(MapError::Series)?.is_zero() {
            return Err(MapError::ZeroLinearCoeff);
        }
        Ok(FormalMap { series })
    }

    pub fn series(&self) -> &TruncLaurent {
        &self.series
    }

    /// The composite f(g(z)).
    pub fn compose(&self, g: &FormalMap) -> Result<Self, MapError> {
        FormalMap::new(self.series.compose(&g.series)?)
    }
}

/// S(f) = (f''/f')' - (1/2)(f''/f')^2 as a truncated power series.
pub fn schwarzian(f: &FormalMap) -> Result<TruncLaurent, MapError> {
    let f1 = f.series.derivative();
    let f2 = f1.derivative();
    let h = f2.div(&f1)?;
    let h2 = h.mul(&h)?.scale(&Rat::new(-1, 2));
    Ok(h.derivative().add(&h2)?)
}

/// Truncated expansion of z -> (az+b)/(cz+d) - b/d about 0:
///
/// ```text
/// ((ad - bc)/d^2) z sum_k (-c/d)^k z^k .
/// ```
pub fn mobius_series(a: &Rat, b: &Rat, c: &Rat, d: &Rat, order: i64) -> Result<FormalMap, MapError> {
    let det = &(a * d) - &(b * c);
    if det.is_zero() || d.is_zero() {
        return Err(MapError::DegenerateMobius);
    }
    let lead = &det / &(d * d);
    let ratio = -(c / d);
    let order = order.max(2);
    let mut pow = Rat::from(1);
    let terms = (1..order).map(|e| {
        let t = (e, &lead * &pow);
        pow = &pow * &ratio;
        t
    });
    let series = TruncLaurent::from_terms(Var('z'), terms, Trunc::Order(order));
    FormalMap::new(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;
    use num_traits::One;

    const Z: Var = Var('z');

    fn assert_known_zero(s: &TruncLaurent) {
        for (e, r) in s.terms() {
            assert!(r.is_zero(), "unexpected term {r}*z^{e} in {s}");
        }
    }

    #[test]
    fn identity_has_zero_schwarzian() {
        let f = FormalMap::new(TruncLaurent::monomial(Z, Rat::one(), 1).with_order(10)).unwrap();
        assert_known_zero(&schwarzian(&f).unwrap());
    }

    #[test]
    fn mobius_geometric_expansion() {
        // z/(z+1) = z - z^2 + z^3 - ...
        let m = mobius_series(&Rat::one(), &Rat::zero(), &Rat::one(), &Rat::one(), 8).unwrap();
        for e in 1..8 {
            let expect = if e % 2 == 1 { Rat::one() } else { Rat::from_int(-1) };
            assert_eq!(m.series().coeff(e).unwrap(), expect, "exponent {e}");
        }
        // (1,0,0,1) is the identity.
        let id = mobius_series(&Rat::one(), &Rat::zero(), &Rat::zero(), &Rat::one(), 8).unwrap();
        assert_eq!(id.series().coeff(1).unwrap(), Rat::one());
        assert_known_zero(&schwarzian(&id).unwrap());
    }

    #[test]
    fn mobius_maps_are_projectively_flat() {
        // A spread of (a,b,c,d) with ad - bc != 0, d != 0.
        let params = [
            (rat(1, 1), rat(0, 1), rat(1, 1), rat(1, 1)),
            (rat(2, 1), rat(1, 1), rat(3, 1), rat(2, 1)),
            (rat(1, 2), rat(-1, 3), rat(1, 5), rat(4, 1)),
            (rat(-3, 1), rat(2, 1), rat(7, 2), rat(-1, 1)),
            (rat(5, 7), rat(1, 9), rat(-2, 3), rat(11, 4)),
        ];
        for (a, b, c, d) in params {
            let m = mobius_series(&a, &b, &c, &d, 10).unwrap();
            assert_known_zero(&schwarzian(&m).unwrap());
        }
    }

    #[test]
    fn degenerate_mobius_rejected() {
        let e = mobius_series(&Rat::one(), &Rat::zero(), &Rat::zero(), &Rat::zero(), 6);
        assert_eq!(e.unwrap_err(), MapError::DegenerateMobius);
        let e = mobius_series(&Rat::one(), &rat(1, 2), &rat(2, 1), &Rat::one(), 6);
        assert_eq!(e.unwrap_err(), MapError::DegenerateMobius);
    }

    #[test]
    fn exp_map_schwarzian() {
        // f = e^z - 1: f''/f' = 1, so S(f) = -1/2 exactly, every known
        // higher coefficient zero.
        let exp = TruncLaurent::exp_series(Z, 12);
        let f = FormalMap::new(exp.sub(&TruncLaurent::constant(Z, Rat::one())).unwrap()).unwrap();
        let s = schwarzian(&f).unwrap();
        assert_eq!(s.coeff(0).unwrap(), rat(-1, 2));
        for e in 1..9 {
            assert_eq!(s.coeff(e).unwrap(), Rat::zero(), "exponent {e}");
        }
    }

    #[test]
    fn chain_rule() {
        // S(f o g) = (S(f) o g) (g')^2 + S(g) for a non-Mobius pair.
        let f = FormalMap::new(
            TruncLaurent::from_terms(Z, [(1, rat(2, 1)), (2, rat(1, 3)), (4, rat(-1, 2))], Trunc::Order(12)),
        )
        .unwrap();
        let g = FormalMap::new(
            TruncLaurent::from_terms(Z, [(1, rat(1, 1)), (3, rat(5, 2))], Trunc::Order(12)),
        )
        .unwrap();
        let lhs = schwarzian(&f.compose(&g).unwrap()).unwrap();
        let g1 = g.series().derivative();
        let rhs = schwarzian(&f)
            .unwrap()
            .compose(g.series())
            .unwrap()
            .mul(&g1.mul(&g1).unwrap())
            .unwrap()
            .add(&schwarzian(&g).unwrap())
            .unwrap();
        let d = lhs.sub(&rhs).unwrap();
        assert_known_zero(&d);
    }
}
