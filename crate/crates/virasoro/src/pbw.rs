//! Virasoro modes and the universal envelope with PBW normal ordering.
//!
//! The mode bracket is
//!
//! ```text
//! [L_n, L_m] = (n - m) L_(n+m) + C (n^3 - n)/12 delta_(n+m,0)
//! ```
//!
//! with the cubic central coefficient on the *first* index - the unique
//! antisymmetric completion consistent with the residue cocycle in
//! [`crate::witt`]. The central element C is folded into the coefficient
//! ring as the polynomial variable c throughout.
//!
//! Normal form in the envelope is ascending mode order n_1 <= ... <= n_k, so
//! annihilators of the vacuum sit rightmost. Straightening repeatedly swaps
//! adjacent out-of-order pairs
//!
//! ```text
//! L_a L_b = L_b L_a + (a - b) L_(a+b) + c (a^3 - a)/12 delta_(a+b,0)   (a > b)
//! ```
//!
//! and terminates because each step drops the measure (word length,
//! inversion count) lexicographically.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exact::cpoly::CPoly;
use crate::exact::rat::Rat;
use crate::witt::central_coeff;

/// Finite Q[c]-combination of modes L_n and the central element C.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VirElement {
    modes: BTreeMap<i64, CPoly>,
    central: CPoly,
}

impl VirElement {
    pub fn zero() -> Self {
        VirElement::default()
    }

    /// The single mode L_n.
    pub fn mode(n: i64) -> Self {
        let mut v = VirElement::zero();
        v.add_mode(n, CPoly::one());
        v
    }

    /// The central element C.
    pub fn central() -> Self {
        VirElement { modes: BTreeMap::new(), central: CPoly::one() }
    }

    pub fn add_mode(&mut self, n: i64, coeff: CPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.modes.entry(n) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn mode_coeff(&self, n: i64) -> CPoly {
        self.modes.get(&n).cloned().unwrap_or_else(CPoly::zero)
    }

    pub fn central_coeff(&self) -> &CPoly {
        &self.central
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &CPoly)> {
        self.modes.iter().map(|(n, p)| (*n, p))
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty() && self.central.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, p) in &other.modes {
            out.add_mode(*n, p.clone());
        }
        out.central += &other.central;
        out
    }

    pub fn scale(&self, p: &CPoly) -> Self {
        let mut out = VirElement::zero();
        for (n, q) in &self.modes {
            out.add_mode(*n, q * p);
        }
        out.central = &self.central * p;
        out
    }
}

/// Bilinear extension of the mode bracket; C is central.
pub fn vir_bracket(x: &VirElement, y: &VirElement) -> VirElement {
    let mut out = VirElement::zero();
    for (n, a) in &x.modes {
        for (m, b) in &y.modes {
            let ab = a * b;
            out.add_mode(n + m, ab.scale(&Rat::from_int(n - m)));
            if n + m == 0 {
                out.central += &ab.scale(&central_coeff(*n));
            }
        }
    }
    out
}

/// Mode word L_(n_1) ... L_(n_k); normal form is ascending.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Word(pub Vec<i64>);

impl Word {
    pub fn is_normal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for n in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "L{n}")?;
            first = false;
        }
        Ok(())
    }
}

/// Element of U(Vir): Q[c]-combination of normal-ordered words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UElem {
    terms: BTreeMap<Word, CPoly>,
}

/// Which adjacent inversion straightening rewrites first; the result is
/// strategy-independent (diamond property, pinned by tests).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SwapOrder {
    LeftmostFirst,
    RightmostFirst,
}

impl UElem {
    pub fn zero() -> Self {
        UElem::default()
    }

    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Word::default(), CPoly::one());
        UElem { terms }
    }

    pub fn scalar(p: CPoly) -> Self {
        let mut out = UElem::zero();
        out.add_term(Word::default(), p);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> CPoly {
        self.terms.get(w).cloned().unwrap_or_else(CPoly::zero)
    }

    pub fn add_term(&mut self, w: Word, p: CPoly) {
        debug_assert!(w.is_normal(), "UElem terms must be normal-ordered");
        if p.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += p;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_term(w.clone(), p.clone());
        }
        out
    }

    pub fn scale(&self, p: &CPoly) -> Self {
        let mut out = UElem::zero();
        for (w, q) in &self.terms {
            out.add_term(w.clone(), q * p);
        }
        out
    }
}

impl From<&VirElement> for UElem {
    /// Modes become length-one words; C becomes the scalar c.
    fn from(v: &VirElement) -> Self {
        let mut out = UElem::zero();
        for (n, p) in &v.modes {
            out.add_term(Word(alloc::vec![*n]), p.clone());
        }
        out.add_term(Word::default(), &v.central * &CPoly::c());
        out
    }
}

/// Normal-ordered expansion of L_(n_1) ... L_(n_k) in U(Vir).
pub fn straighten(word: &[i64]) -> UElem {
    straighten_with(word, SwapOrder::LeftmostFirst)
}

pub fn straighten_with(word: &[i64], order: SwapOrder) -> UElem {
    let mut out = UElem::zero();
    // Worklist of pending (word, coefficient) summands.
    let mut stack: Vec<(Vec<i64>, CPoly)> = alloc::vec![(word.to_vec(), CPoly::one())];
    while let Some((w, coeff)) = stack.pop() {
        let inversion = match order {
            SwapOrder::LeftmostFirst => w.windows(2).position(|p| p[0] > p[1]),
            SwapOrder::RightmostFirst => w.windows(2).rposition(|p| p[0] > p[1]),
        };
        let Some(i) = inversion else {
            out.add_term(Word(w), coeff);
            continue;
        };
        let (a, b) = (w[i], w[i + 1]);
        // Swapped word keeps length, drops one inversion.
        let mut swapped = w.clone();
        swapped[i] = b;
        swapped[i + 1] = a;
        stack.push((swapped, coeff.clone()));
        // Bracket terms are shorter words.
        let mut merged = w.clone();
        merged.splice(i..=i + 1, [a + b]);
        stack.push((merged, coeff.scale(&Rat::from_int(a - b))));
        if a + b == 0 {
            let mut dropped = w.clone();
            dropped.splice(i..=i + 1, core::iter::empty());
            stack.push((dropped, &coeff * &CPoly::monomial(central_coeff(a), 1)));
        }
    }
    out
}

/// Associative product on U(Vir): concatenate, straighten, combine.
pub fn u_multiply(x: &UElem, y: &UElem) -> UElem {
    let mut out = UElem::zero();
    for (wx, px) in &x.terms {
        for (wy, py) in &y.terms {
            let mut cat = wx.0.clone();
            cat.extend_from_slice(&wy.0);
            out = out.add(&straighten(&cat).scale(&(px * py)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    fn w(indices: &[i64]) -> Word {
        Word(indices.to_vec())
    }

    #[test]
    fn bracket_examples() {
        // [L2, L-2] = 4 L0 + (1/2) C
        let b = vir_bracket(&VirElement::mode(2), &VirElement::mode(-2));
        assert_eq!(b.mode_coeff(0), CPoly::from_int(4));
        assert_eq!(*b.central_coeff(), CPoly::constant(rat(1, 2)));
        // [L0, L0] = 0
        assert!(vir_bracket(&VirElement::mode(0), &VirElement::mode(0)).is_zero());
        // [L3, L-1] = 4 L2, no central part
        let b = vir_bracket(&VirElement::mode(3), &VirElement::mode(-1));
        assert_eq!(b.mode_coeff(2), CPoly::from_int(4));
        assert!(b.central_coeff().is_zero());
    }

    #[test]
    fn central_element_is_central() {
        let c = VirElement::central();
        for n in -4..=4 {
            assert!(vir_bracket(&c, &VirElement::mode(n)).is_zero());
            assert!(vir_bracket(&VirElement::mode(n), &c).is_zero());
        }
    }

    #[test]
    fn bracket_table() {
        for n in -8..=8i64 {
            for m in -8..=8i64 {
                let b = vir_bracket(&VirElement::mode(n), &VirElement::mode(m));
                if n == m {
                    assert!(b.mode_coeff(n + m).is_zero());
                } else {
                    assert_eq!(b.mode_coeff(n + m), CPoly::from_int(n - m), "n={n} m={m}");
                }
                let expect_central =
                    if n + m == 0 { CPoly::constant(central_coeff(n)) } else { CPoly::zero() };
                assert_eq!(*b.central_coeff(), expect_central, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn jacobi_identity() {
        for n in -6..=6i64 {
            for m in -6..=6i64 {
                for k in -6..=6i64 {
                    let x = VirElement::mode(n);
                    let y = VirElement::mode(m);
                    let z = VirElement::mode(k);
                    let s = vir_bracket(&vir_bracket(&x, &y), &z)
                        .add(&vir_bracket(&vir_bracket(&y, &z), &x))
                        .add(&vir_bracket(&vir_bracket(&z, &x), &y));
                    assert!(s.is_zero(), "n={n} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn straighten_examples() {
        // (2, -2) -> L-2 L2 + 4 L0 + (1/2) c
        let s = straighten(&[2, -2]);
        assert_eq!(s.coeff(&w(&[-2, 2])), CPoly::one());
        assert_eq!(s.coeff(&w(&[0])), CPoly::from_int(4));
        assert_eq!(s.coeff(&w(&[])), CPoly::monomial(rat(1, 2), 1));
        // (0, 1) already normal
        let s = straighten(&[0, 1]);
        assert_eq!(s.coeff(&w(&[0, 1])), CPoly::one());
        assert_eq!(s.terms().count(), 1);
        // (1, 0) -> L0 L1 + L1
        let s = straighten(&[1, 0]);
        assert_eq!(s.coeff(&w(&[0, 1])), CPoly::one());
        assert_eq!(s.coeff(&w(&[1])), CPoly::one());
        assert_eq!(s.terms().count(), 2);
    }

    #[test]
    fn straighten_top_term_is_sorted_word() {
        for word in [&[3, 1, -2][..], &[5, -5, 2][..], &[2, 2, -3, 1][..], &[4, -1, -4, 0][..]] {
            let s = straighten(word);
            let mut sorted = word.to_vec();
            sorted.sort_unstable();
            assert_eq!(s.coeff(&Word(sorted)), CPoly::one(), "word {word:?}");
        }
    }

    #[test]
    fn straighten_diamond_property() {
        let words: &[&[i64]] = &[
            &[2, -2, 3, -3],
            &[1, 0, -1, 2],
            &[4, -2, -2],
            &[3, 2, 1, 0, -1],
            &[-1, 5, -5, 1],
            &[2, 2, -4],
        ];
        for word in words {
            let l = straighten_with(word, SwapOrder::LeftmostFirst);
            let r = straighten_with(word, SwapOrder::RightmostFirst);
            assert_eq!(l, r, "word {word:?}");
        }
    }

    #[test]
    fn envelope_multiplication() {
        // 1 * a = a
        let a = straighten(&[2, -2, 1]);
        assert_eq!(u_multiply(&UElem::one(), &a), a);
        // L2 * L-2 = straighten(2, -2)
        let l2 = straighten(&[2]);
        let lm2 = straighten(&[-2]);
        assert_eq!(u_multiply(&l2, &lm2), straighten(&[2, -2]));
    }

    #[test]
    fn envelope_associativity() {
        let samples: &[&[i64]] = &[&[2], &[-2], &[1, -1], &[3, -2], &[-3, 2], &[0]];
        for x in samples {
            for y in samples {
                for z in samples {
                    let xy_z = u_multiply(&u_multiply(&straighten(x), &straighten(y)), &straighten(z));
                    let x_yz = u_multiply(&straighten(x), &u_multiply(&straighten(y), &straighten(z)));
                    assert_eq!(xy_z, x_yz, "x={x:?} y={y:?} z={z:?}");
                }
            }
        }
    }
}
