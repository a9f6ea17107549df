//! Truncated Laurent series with explicit precision windows.
//!
//! A series is a finite map exponent -> coefficient together with a
//! truncation marker:
//!
//! * `Trunc::Exact` - every unstored coefficient is known to be zero
//!   (the series is a Laurent polynomial);
//! * `Trunc::Order(k)` - coefficients at exponents >= k are unknown.
//!
//! Every operation propagates the window; reading a coefficient outside the
//! known window is an error, never a silent zero. For a product the window is
//!
//! ```text
//! O(a*b) = min(O_a + val(b), O_b + val(a))
//! ```
//!
//! since the first unknown coefficient of one factor multiplies the lowest
//! known term of the other.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::rat::Rat;

/// Formal variable tag; arithmetic across different tags is an error.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Var(pub char);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Precision marker: exact Laurent polynomial, or unknown from order k on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Trunc {
    Exact,
    Order(i64),
}

impl Trunc {
    fn min(self, other: Trunc) -> Trunc {
        match (self, other) {
            (Trunc::Exact, t) | (t, Trunc::Exact) => t,
            (Trunc::Order(a), Trunc::Order(b)) => Trunc::Order(a.min(b)),
        }
    }

    /// True when the coefficient at `e` lies inside the known window.
    fn knows(self, e: i64) -> bool {
        match self {
            Trunc::Exact => true,
            Trunc::Order(k) => e < k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    VarMismatch { left: Var, right: Var },
    UnknownCoeff { var: Var, exponent: i64 },
    /// Inverting a non-monomial exact series has no finite representation;
    /// truncate first with [`TruncLaurent::with_order`].
    ExactInverse,
    /// No known nonzero leading coefficient inside the window.
    NotInvertible,
    /// Composition requires a power series outer factor and an inner factor
    /// of strictly positive valuation.
    ComposeDomain,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::VarMismatch { left, right } => {
                write!(f, "series variables differ: {left} vs {right}")
            }
            SeriesError::UnknownCoeff { var, exponent } => {
                write!(f, "coefficient of {var}^{exponent} is outside the known window")
            }
            SeriesError::ExactInverse => {
                write!(f, "inverse of an exact non-monomial series requires a truncation order")
            }
            SeriesError::NotInvertible => write!(f, "series has no invertible leading term"),
            SeriesError::ComposeDomain => {
                write!(f, "composition needs a power series and a positive-valuation inner series")
            }
        }
    }
}

impl core::error::Error for SeriesError {}

type Result<T> = core::result::Result<T, SeriesError>;

/// Laurent series in one variable, exact below its truncation window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncLaurent {
    var: Var,
    coeffs: BTreeMap<i64, Rat>,
    trunc: Trunc,
}

impl TruncLaurent {
    /// The zero Laurent polynomial (exact).
    pub fn zero(var: Var) -> Self {
        TruncLaurent { var, coeffs: BTreeMap::new(), trunc: Trunc::Exact }
    }

    /// r * v^e as an exact Laurent polynomial.
    pub fn monomial(var: Var, r: Rat, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(e, r);
        }
        TruncLaurent { var, coeffs, trunc: Trunc::Exact }
    }

    pub fn constant(var: Var, r: Rat) -> Self {
        Self::monomial(var, r, 0)
    }

    /// Build from (exponent, coefficient) pairs with the given window.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(var: Var, terms: I, trunc: Trunc) -> Self {
        let mut out = TruncLaurent { var, coeffs: BTreeMap::new(), trunc };
        for (e, r) in terms {
            debug_assert!(trunc.knows(e), "term at {e} outside window");
            if !r.is_zero() {
                *out.coeffs.entry(e).or_insert_with(Rat::zero) += r;
                if out.coeffs[&e].is_zero() {
                    out.coeffs.remove(&e);
                }
            }
        }
        out
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(e, r)| (*e, r))
    }

    /// Lowest exponent with a (known) nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Valuation bound used for window propagation: the true valuation is
    /// >= this, with `None` meaning the series is identically zero.
    fn val_bound(&self) -> Option<i64> {
        match (self.valuation(), self.trunc) {
            (Some(v), _) => Some(v),
            (None, Trunc::Order(k)) => Some(k),
            (None, Trunc::Exact) => None,
        }
    }

    /// True when the series is known to be identically zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.trunc == Trunc::Exact
    }

    /// Coefficient at exponent `e`; error outside the known window.
    pub fn coeff(&self, e: i64) -> Result<Rat> {
        if !self.trunc.knows(e) {
            return Err(SeriesError::UnknownCoeff { var: self.var, exponent: e });
        }
        Ok(self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero))
    }

    /// The coefficient of v^-1.
    pub fn residue(&self) -> Result<Rat> {
        self.coeff(-1)
    }

    /// Restrict the window to `order` and drop now-unknown terms.
    pub fn with_order(&self, order: i64) -> Self {
        let trunc = self.trunc.min(Trunc::Order(order));
        let coeffs = self.coeffs.iter().filter(|(e, _)| trunc.knows(**e)).map(|(e, r)| (*e, r.clone())).collect();
        TruncLaurent { var: self.var, coeffs, trunc }
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(SeriesError::VarMismatch { left: self.var, right: other.var });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = TruncLaurent { var: self.var, coeffs: BTreeMap::new(), trunc };
        for src in [&self.coeffs, &other.coeffs] {
            for (&e, r) in src {
                if !trunc.knows(e) {
                    continue;
                }
                let entry = out.coeffs.entry(e).or_insert_with(Rat::zero);
                *entry += r.clone();
                if entry.is_zero() {
                    out.coeffs.remove(&e);
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncLaurent {
            var: self.var,
            coeffs: self.coeffs.iter().map(|(e, r)| (*e, -r)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            // Scaling by zero keeps the window: unknown * 0 is still 0,
            // but we must not claim exactness beyond the original window.
            return TruncLaurent { var: self.var, coeffs: BTreeMap::new(), trunc: self.trunc };
        }
        TruncLaurent {
            var: self.var,
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a * r)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiply by v^k.
    pub fn shift(&self, k: i64) -> Self {
        TruncLaurent {
            var: self.var,
            coeffs: self.coeffs.iter().map(|(e, r)| (e + k, r.clone())).collect(),
            trunc: match self.trunc {
                Trunc::Exact => Trunc::Exact,
                Trunc::Order(o) => Trunc::Order(o + k),
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let trunc = match (self.trunc, self.val_bound(), other.trunc, other.val_bound()) {
            // A factor that is identically zero gives an exact zero.
            (_, None, _, _) | (_, _, _, None) => {
                return Ok(TruncLaurent::zero(self.var));
            }
            (Trunc::Exact, _, Trunc::Exact, _) => Trunc::Exact,
            (Trunc::Order(oa), _, Trunc::Exact, Some(vb)) => Trunc::Order(oa + vb),
            (Trunc::Exact, Some(va), Trunc::Order(ob), _) => Trunc::Order(ob + va),
            (Trunc::Order(oa), Some(va), Trunc::Order(ob), Some(vb)) => {
                Trunc::Order((oa + vb).min(ob + va))
            }
        };
        let mut out = TruncLaurent { var: self.var, coeffs: BTreeMap::new(), trunc };
        for (&ea, ra) in &self.coeffs {
            for (&eb, rb) in &other.coeffs {
                let e = ea + eb;
                if !trunc.knows(e) {
                    continue;
                }
                let entry = out.coeffs.entry(e).or_insert_with(Rat::zero);
                *entry += ra * rb;
                if entry.is_zero() {
                    out.coeffs.remove(&e);
                }
            }
        }
        Ok(out)
    }

    /// Term-by-term derivative d/dv; shifts a finite window down by one.
    pub fn derivative(&self) -> Self {
        TruncLaurent {
            var: self.var,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(&e, r)| (e - 1, r * &Rat::from_int(e)))
                .collect(),
            trunc: match self.trunc {
                Trunc::Exact => Trunc::Exact,
                Trunc::Order(o) => Trunc::Order(o - 1),
            },
        }
    }

    /// Multiplicative inverse 1/f for f with an invertible lowest term.
    ///
    /// Exact inputs must be monomials (anything else inverts to an infinite
    /// series); truncate first to request a finite window.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or(SeriesError::NotInvertible)?;
        let lead = self.coeffs[&v].clone();
        if self.coeffs.len() == 1 && self.trunc == Trunc::Exact {
            return Ok(Self::monomial(self.var, lead.inv().expect("nonzero lead"), -v));
        }
        let window = match self.trunc {
            Trunc::Exact => return Err(SeriesError::ExactInverse),
            Trunc::Order(o) => o - v, // window width of 1 + u below
        };
        // f = lead * v^val * (1 + u) with val(u) >= 1.
        let lead_inv = lead.inv().expect("nonzero lead");
        let u = self.shift(-v).scale(&lead_inv).sub(&Self::constant(self.var, Rat::one()))?;
        let mut geom = Self::constant(self.var, Rat::one()).with_order(window);
        let mut pow = geom.clone();
        loop {
            pow = pow.mul(&u.neg())?;
            // val(u) >= 1, so each power climbs; past the window nothing
            // more is knowable.
            match pow.valuation() {
                Some(pv) if pv < window => geom = geom.add(&pow)?,
                _ => break,
            }
        }
        Ok(geom.scale(&lead_inv).shift(-v))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    /// f(g) for a power series f and strictly positive valuation g.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_var(g)?;
        if self.valuation().is_some_and(|v| v < 0) {
            return Err(SeriesError::ComposeDomain);
        }
        if g.val_bound().is_some_and(|v| v < 1) || g.coeffs.keys().any(|&e| e < 1) {
            return Err(SeriesError::ComposeDomain);
        }
        let gval = g.val_bound().unwrap_or(i64::MAX);
        // Window: g's own window propagates through products; an unknown
        // outer coefficient a_O first enters at exponent O * val(g).
        let mut trunc = g.trunc;
        if let Trunc::Order(of) = self.trunc {
            let cap = of.saturating_mul(gval.max(1));
            trunc = trunc.min(Trunc::Order(cap));
        }
        let mut acc = Self::zero(self.var).with_window(trunc);
        let mut power = Self::constant(self.var, Rat::one());
        let mut k = 0i64;
        for (&e, r) in &self.coeffs {
            while k < e {
                power = power.mul(g)?;
                k += 1;
            }
            // Once g^k sits entirely past the result window (powers of a
            // positive-valuation series only climb), nothing more is known.
            let exhausted = match (trunc, power.valuation()) {
                (Trunc::Order(w), Some(pv)) => pv >= w,
                (_, None) => true,
                (Trunc::Exact, Some(_)) => false,
            };
            if exhausted && !power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(r))?;
        }
        Ok(acc)
    }

    fn with_window(mut self, trunc: Trunc) -> Self {
        self.trunc = self.trunc.min(trunc);
        self.coeffs.retain(|e, _| self.trunc.knows(*e));
        self
    }

    /// exp(v) = sum v^k / k!, truncated at `order`.
    pub fn exp_series(var: Var, order: i64) -> Self {
        let terms = (0..order.max(0)).map(|k| (k, Rat::factorial(k as u32).inv().expect("k! != 0")));
        Self::from_terms(var, terms, Trunc::Order(order.max(0)))
    }

    /// log(1 + v) = sum (-1)^(k+1) v^k / k, truncated at `order`.
    pub fn log1p_series(var: Var, order: i64) -> Self {
        let terms = (1..order.max(1)).map(|k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            (k, Rat::new(sign, k))
        });
        Self::from_terms(var, terms, Trunc::Order(order.max(1)))
    }
}

impl fmt::Display for TruncLaurent {
    /// Ascending exponents, e.g. `-1/2*z^-1 + 3 + z^2 + O(z^5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var;
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, r)| match e {
                0 => alloc::format!("{r}"),
                1 if r.is_one() => alloc::format!("{v}"),
                1 => alloc::format!("{r}*{v}"),
                _ if r.is_one() => alloc::format!("{v}^{e}"),
                _ => alloc::format!("{r}*{v}^{e}"),
            })
            .collect();
        if parts.is_empty() {
            parts.push(String::from("0"));
        }
        write!(f, "{}", parts.join(" + "))?;
        if let Trunc::Order(o) = self.trunc {
            write!(f, " + O({v}^{o})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    const Z: Var = Var('z');

    fn poly(terms: &[(i64, i64)]) -> TruncLaurent {
        TruncLaurent::from_terms(Z, terms.iter().map(|&(e, n)| (e, Rat::from_int(n))), Trunc::Exact)
    }

    #[test]
    fn product_truncation_window() {
        // (1 + z) * (1 - z) at order 3 -> 1 - z^2 exactly within the window.
        let a = poly(&[(0, 1), (1, 1)]).with_order(3);
        let b = poly(&[(0, 1), (1, -1)]).with_order(3);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeff(0).unwrap(), Rat::one());
        assert_eq!(p.coeff(1).unwrap(), Rat::zero());
        assert_eq!(p.coeff(2).unwrap(), Rat::from_int(-1));
        assert_eq!(p.trunc(), Trunc::Order(3));
        assert!(p.coeff(3).is_err());
    }

    #[test]
    fn laurent_monomials_cancel() {
        // z^-1 * z = 1, exact.
        let p = poly(&[(-1, 1)]).mul(&poly(&[(1, 1)])).unwrap();
        assert_eq!(p, poly(&[(0, 1)]));
        assert_eq!(p.trunc(), Trunc::Exact);
    }

    #[test]
    fn geometric_telescope() {
        // (1 - z) * sum_{j<10} z^j = 1 - z^10; truncated at 10 it is exactly 1.
        let geom = TruncLaurent::from_terms(Z, (0..10).map(|j| (j, Rat::one())), Trunc::Order(10));
        let p = poly(&[(0, 1), (1, -1)]).mul(&geom).unwrap();
        assert_eq!(p.coeff(0).unwrap(), Rat::one());
        for e in 1..10 {
            assert_eq!(p.coeff(e).unwrap(), Rat::zero(), "exponent {e}");
        }
        assert_eq!(p.trunc(), Trunc::Order(10));
    }

    #[test]
    fn residue_extraction() {
        assert_eq!(poly(&[(-1, 1)]).residue().unwrap(), Rat::one());
        assert_eq!(poly(&[(-2, 3), (0, 5)]).residue().unwrap(), Rat::zero());
        // (z^3)''' = 6, so (z^3)''' * z^-1 has residue 6.
        let d3 = poly(&[(3, 1)]).derivative().derivative().derivative();
        let p = d3.mul(&poly(&[(-1, 1)])).unwrap();
        assert_eq!(p.residue().unwrap(), Rat::from_int(6));
    }

    #[test]
    fn residue_outside_window_errors() {
        let p = poly(&[(0, 1)]).with_order(-1);
        assert!(matches!(p.residue(), Err(SeriesError::UnknownCoeff { .. })));
    }

    #[test]
    fn var_mismatch() {
        let a = poly(&[(0, 1)]);
        let b = TruncLaurent::constant(Var('q'), Rat::one());
        assert!(matches!(a.mul(&b), Err(SeriesError::VarMismatch { .. })));
    }

    #[test]
    fn derivative_kills_residue() {
        let p = TruncLaurent::from_terms(
            Z,
            [(-3, rat(2, 5)), (-1, rat(7, 2)), (0, rat(1, 3)), (4, rat(-2, 1))],
            Trunc::Order(6),
        );
        assert_eq!(p.derivative().residue().unwrap(), Rat::zero());
    }

    #[test]
    fn compose_basics() {
        // f = z^2, g = z + z^2, order 4: (z + z^2)^2 = z^2 + 2 z^3 + O(z^4).
        let f = poly(&[(2, 1)]);
        let g = poly(&[(1, 1), (2, 1)]).with_order(4);
        let h = f.compose(&g).unwrap();
        assert_eq!(h.coeff(2).unwrap(), Rat::one());
        assert_eq!(h.coeff(3).unwrap(), Rat::from_int(2));
        // identity outer series returns g itself
        let id = poly(&[(1, 1)]);
        assert_eq!(id.compose(&g).unwrap(), g);
    }

    #[test]
    fn exp_of_log() {
        // exp(log(1+z)) = 1 + z at order 6.
        let e = TruncLaurent::exp_series(Z, 6);
        let l = TruncLaurent::log1p_series(Z, 6);
        let h = e.compose(&l).unwrap();
        assert_eq!(h.coeff(0).unwrap(), Rat::one());
        assert_eq!(h.coeff(1).unwrap(), Rat::one());
        for e in 2..6 {
            assert_eq!(h.coeff(e).unwrap(), Rat::zero(), "exponent {e}");
        }
    }

    #[test]
    fn compose_domain_errors() {
        let f = poly(&[(-1, 1)]);
        let g = poly(&[(1, 1)]);
        assert!(matches!(f.compose(&g), Err(SeriesError::ComposeDomain)));
        let bad_g = poly(&[(0, 1), (1, 1)]);
        assert!(matches!(g.compose(&bad_g), Err(SeriesError::ComposeDomain)));
    }

    #[test]
    fn inverse_of_series() {
        // 1/(1 - z) = geometric series.
        let g = poly(&[(0, 1), (1, -1)]).with_order(6);
        let inv = g.inverse().unwrap();
        for e in 0..6 {
            assert_eq!(inv.coeff(e).unwrap(), Rat::one(), "exponent {e}");
        }
        // Monomial inverts exactly.
        let m = TruncLaurent::monomial(Z, rat(3, 2), 4);
        let im = m.inverse().unwrap();
        assert_eq!(im, TruncLaurent::monomial(Z, rat(2, 3), -4));
        // Exact non-monomial refuses.
        assert!(matches!(poly(&[(0, 1), (1, -1)]).inverse(), Err(SeriesError::ExactInverse)));
        // f * (1/f) = 1 within the window.
        let p = g.mul(&inv).unwrap();
        assert_eq!(p.coeff(0).unwrap(), Rat::one());
        for e in 1..6 {
            assert_eq!(p.coeff(e).unwrap(), Rat::zero());
        }
    }

    #[test]
    fn window_shrinks_with_valuation() {
        // Unknown tail of order-4 factor times z^2 is unknown from 6 on.
        let a = poly(&[(2, 1)]);
        let b = poly(&[(0, 1), (1, 1)]).with_order(4);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.trunc(), Trunc::Order(6));
    }
}
