//! Sparse multivariate polynomials over the rationals.
//!
//! Used as the expansion target when two rational-function expressions are
//! compared: clear denominators, expand, and test the numerators for
//! structural equality. Variable 0 is the central parameter c; variables
//! 1..=n are the insertion points x_1..x_n. Monomials are kept in graded
//! lexicographic order (total degree first, then variable order c < x_1 <
//! ... < x_n), which only matters for canonical printing.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};

use super::cpoly::CPoly;
use super::rat::Rat;

/// Exponent vector with trailing zeros trimmed (canonical form).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Single variable power v^k.
    pub fn var_pow(v: usize, k: u32) -> Self {
        if k == 0 {
            return Self::one();
        }
        let mut exps = alloc::vec![0; v + 1];
        exps[v] = k;
        Monomial(exps)
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut exps = Vec::with_capacity(n);
        for v in 0..n {
            exps.push(self.exponent(v) + other.exponent(v));
        }
        Monomial::new(exps)
    }

    /// Relabel variables 1..=n by `perm` (1-indexed image list); variable 0
    /// is fixed. `perm[i-1] = j` sends x_i to x_j.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut exps = alloc::vec![0u32; self.0.len().max(perm.len() + 1)];
        for (v, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let target = if v == 0 { 0 } else { perm[v - 1] };
            exps[target] += e;
        }
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in c, x_1, ..., x_n.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), r);
        }
        MPoly { terms }
    }

    pub fn monomial(m: Monomial, r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(m, r);
        }
        MPoly { terms }
    }

    /// x_i - x_j (insertion-point variables are 1-indexed).
    pub fn diff(i: usize, j: usize) -> Self {
        let mut out = MPoly::zero();
        out.add_term(Monomial::var_pow(i, 1), Rat::one());
        out.add_term(Monomial::var_pow(j, 1), -Rat::one());
        out
    }

    /// Embed a polynomial in c (variable 0).
    pub fn from_cpoly(p: &CPoly) -> Self {
        let mut out = MPoly::zero();
        for (k, r) in p.iter() {
            out.add_term(Monomial::var_pow(0, k), r.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, r: Rat) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(r);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += r;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.add_term(m.clone(), r.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.add_term(m.clone(), -r);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MPoly::zero();
        for (ma, ra) in &self.terms {
            for (mb, rb) in &other.terms {
                out.add_term(ma.mul(mb), ra * rb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::constant(Rat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let mut out = MPoly::zero();
        for (m, q) in &self.terms {
            out.add_term(m.clone(), q * r);
        }
        out
    }

    /// Partial derivative with respect to variable v.
    pub fn derivative(&self, v: usize) -> Self {
        let mut out = MPoly::zero();
        for (m, r) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut exps: Vec<u32> = (0..m.0.len()).map(|i| m.exponent(i)).collect();
            exps[v] = e - 1;
            out.add_term(Monomial::new(exps), r * &Rat::from_int(i64::from(e)));
        }
        out
    }

    /// Multiply by the single variable power v^k.
    pub fn mul_var(&self, v: usize, k: u32) -> Self {
        let shift = Monomial::var_pow(v, k);
        let mut out = MPoly::zero();
        for (m, r) in &self.terms {
            out.add_term(m.mul(&shift), r.clone());
        }
        out
    }

    /// Exact division by the binomial x_i - x_j; `None` when the remainder
    /// (the substitution x_i -> x_j) is nonzero.
    pub fn div_diff(&self, i: usize, j: usize) -> Option<Self> {
        assert!(i != j && i > 0 && j > 0, "need two distinct point variables");
        // Split P = sum_k x_i^k P_k with P_k free of x_i; then
        // Q_(k-1) = P_k + x_j Q_k downward from Q_top = 0, and the
        // remainder P_0 + x_j Q_0 must vanish.
        let mut parts: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, r) in &self.terms {
            let e = m.exponent(i);
            let mut exps: Vec<u32> = (0..m.0.len()).map(|v| m.exponent(v)).collect();
            if e > 0 {
                exps[i] = 0;
            }
            parts.entry(e).or_default().add_term(Monomial::new(exps), r.clone());
        }
        let Some(&top) = parts.keys().last() else {
            return Some(MPoly::zero());
        };
        let mut quotient = MPoly::zero();
        let mut carry = MPoly::zero();
        for k in (1..=top).rev() {
            let pk = parts.remove(&k).unwrap_or_default();
            carry = pk.add(&carry.mul_var(j, 1));
            quotient = quotient.add(&carry.mul_var(i, k - 1));
        }
        let remainder = parts.remove(&0).unwrap_or_default().add(&carry.mul_var(j, 1));
        remainder.is_zero().then_some(quotient)
    }

    /// Apply a permutation of the insertion points (see [`Monomial::relabel`]).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut out = MPoly::zero();
        for (m, r) in &self.terms {
            out.add_term(m.relabel(perm), r.clone());
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = |v: usize| -> String {
            if v == 0 {
                String::from("c")
            } else {
                alloc::format!("x{v}")
            }
        };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, r)| {
                let mut factors: Vec<String> = Vec::new();
                for v in 0..m.0.len() {
                    match m.exponent(v) {
                        0 => {}
                        1 => factors.push(names(v)),
                        e => factors.push(alloc::format!("{}^{e}", names(v))),
                    }
                }
                if factors.is_empty() {
                    alloc::format!("{r}")
                } else if r.is_one() {
                    factors.join("*")
                } else {
                    alloc::format!("{r}*{}", factors.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        // (x1 - x2)(x1 + x2) = x1^2 - x2^2
        let a = MPoly::diff(1, 2);
        let mut b = MPoly::zero();
        b.add_term(Monomial::var_pow(1, 1), Rat::one());
        b.add_term(Monomial::var_pow(2, 1), Rat::one());
        let p = a.mul(&b);
        let mut expect = MPoly::zero();
        expect.add_term(Monomial::var_pow(1, 2), Rat::one());
        expect.add_term(Monomial::var_pow(2, 2), -Rat::one());
        assert_eq!(p, expect);
    }

    #[test]
    fn relabel_is_substitution() {
        // x1^2 * x3 under (1 2 3) -> (2 3 1): x2^2 * x1
        let m = Monomial::new(alloc::vec![0, 2, 0, 1]);
        let p = MPoly::monomial(m, Rat::one());
        let q = p.relabel(&[2, 3, 1]);
        let expect = MPoly::monomial(Monomial::new(alloc::vec![0, 1, 2]), Rat::one());
        assert_eq!(q, expect);
    }

    #[test]
    fn graded_lex_printing() {
        let mut p = MPoly::zero();
        p.add_term(Monomial::var_pow(1, 2), Rat::one());
        p.add_term(Monomial::var_pow(2, 1), Rat::from_int(3));
        p.add_term(Monomial::one(), Rat::from_int(-1));
        assert_eq!(p.to_string(), "-1 + 3*x2 + x1^2");
    }

    #[test]
    fn cancellation_strips_entries() {
        let p = MPoly::diff(1, 2);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn partial_derivatives() {
        // d/dx1 (x1 - x2)^3 = 3 (x1 - x2)^2, and c is inert.
        let p = MPoly::diff(1, 2).pow(3);
        let expect = MPoly::diff(1, 2).pow(2).scale(&Rat::from_int(3));
        assert_eq!(p.derivative(1), expect);
        assert!(p.derivative(0).is_zero());
        let q = MPoly::from_cpoly(&CPoly::c());
        assert_eq!(q.derivative(0), MPoly::constant(Rat::one()));
    }

    #[test]
    fn binomial_division() {
        let p = MPoly::diff(1, 2).pow(3).mul(&MPoly::diff(2, 3));
        let q = p.div_diff(1, 2).expect("divides");
        assert_eq!(q, MPoly::diff(1, 2).pow(2).mul(&MPoly::diff(2, 3)));
        let deeper = q.div_diff(1, 2).and_then(|r| r.div_diff(1, 2)).expect("divides twice");
        assert_eq!(deeper, MPoly::diff(2, 3));
        // x1^2 + x2 has remainder x2^2 + x2 under x1 -> x2.
        let mut bad = MPoly::zero();
        bad.add_term(Monomial::var_pow(1, 2), Rat::one());
        bad.add_term(Monomial::var_pow(2, 1), Rat::one());
        assert!(bad.div_diff(1, 2).is_none());
        assert_eq!(MPoly::zero().div_diff(1, 2), Some(MPoly::zero()));
    }
}
