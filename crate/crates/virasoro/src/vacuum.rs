//! The vacuum module: the induced representation where L_n kills the vacuum
//! for n >= -1 and the central element acts by the polynomial variable c.
//!
//! Basis vectors are partitions into parts >= 2,
//!
//! ```text
//! (n_1 >= n_2 >= ... >= n_k >= 2)   <->   L_(-n_1) ... L_(-n_k) |0>
//! ```
//!
//! graded by level n_1 + ... + n_k (the L_0 eigenvalue). The mode action is a
//! dedicated left-action straightening: to apply L_n to L_(-m_1) w, commute
//! past the first creation operator,
//!
//! ```text
//! L_n L_(-m_1) w = L_(-m_1) L_n w + (n + m_1) L_(n - m_1) w
//!                  + delta_(n, m_1) c (n^3 - n)/12 w ,
//! ```
//!
//! except when L_n can be prepended directly in normal order. Each recursive
//! call strictly lowers the level of the input ket, so the recursion is
//! well-founded. Coefficients stay in Q[c]; specialization to a numeric
//! central charge is a separate pure map.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exact::cpoly::CPoly;
use crate::exact::laurent::{Trunc, TruncLaurent, Var};
use crate::exact::rat::Rat;
use crate::pbw::UElem;
use crate::witt::central_coeff;

/// Partition basis vector L_(-n_1)...L_(-n_k)|0>; empty = vacuum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Ket(Vec<i64>);

impl Ket {
    /// Parts must be non-increasing and >= 2.
    pub fn new(parts: Vec<i64>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p >= 2),
            "not a partition into parts >= 2: {parts:?}"
        );
        Ket(parts)
    }

    pub fn vacuum() -> Self {
        Ket::default()
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.0 {
            write!(f, "L-{n} ")?;
        }
        write!(f, "|0>")
    }
}

/// Q[c]-combination of basis kets.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct State {
    terms: BTreeMap<Ket, CPoly>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::from_ket(Ket::vacuum())
    }

    pub fn from_ket(k: Ket) -> Self {
        let mut s = State::zero();
        s.add_term(k, CPoly::one());
        s
    }

    /// The conformal vector L_(-2)|0>.
    pub fn omega() -> Self {
        State::from_ket(Ket::new(alloc::vec![2]))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Ket, &CPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &Ket) -> CPoly {
        self.terms.get(k).cloned().unwrap_or_else(CPoly::zero)
    }

    pub fn add_term(&mut self, k: Ket, p: CPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(k) {
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
        for (k, p) in &other.terms {
            out.add_term(k.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(k.clone(), -p.clone());
        }
        out
    }

    pub fn scale(&self, p: &CPoly) -> Self {
        let mut out = State::zero();
        for (k, q) in &self.terms {
            out.add_term(k.clone(), q * p);
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&CPoly::constant(r.clone()))
    }

    /// Common level of all terms; `None` if mixed or zero.
    pub fn level(&self) -> Option<i64> {
        let mut levels = self.terms.keys().map(Ket::level);
        let first = levels.next()?;
        levels.all(|l| l == first).then_some(first)
    }

    /// Specialize c to a numeric value.
    pub fn specialize(&self, c0: &Rat) -> State {
        let mut out = State::zero();
        for (k, p) in &self.terms {
            out.add_term(k.clone(), CPoly::constant(p.eval(c0)));
        }
        out
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({p}) {k}")?;
            first = false;
        }
        Ok(())
    }
}

/// L_n applied to a basis ket.
fn act_ket(n: i64, ket: &Ket) -> State {
    // Grading shortcut: L_n lowers level by n and levels are non-negative.
    if n > ket.level() {
        return State::zero();
    }
    match ket.parts() {
        [] => {
            if n <= -2 {
                State::from_ket(Ket::new(alloc::vec![-n]))
            } else {
                State::zero()
            }
        }
        [m1, rest @ ..] => {
            if n <= -2 && -n >= *m1 {
                // Prepend in normal order.
                let mut parts = Vec::with_capacity(ket.parts().len() + 1);
                parts.push(-n);
                parts.extend_from_slice(ket.parts());
                return State::from_ket(Ket::new(parts));
            }
            let rest = Ket::new(rest.to_vec());
            // Commute past L_(-m_1): each piece acts on a lower-level ket.
            let mut out = act(-*m1, &act_ket(n, &rest));
            out = out.add(&act(n - m1, &State::from_ket(rest.clone())).scale_rat(&Rat::from_int(n + m1)));
            if n == *m1 {
                out.add_term(rest, CPoly::monomial(central_coeff(n), 1));
            }
            out
        }
    }
}

/// L_n applied linearly to a state.
pub fn act(n: i64, v: &State) -> State {
    let mut out = State::zero();
    for (k, p) in v.terms() {
        out = out.add(&act_ket(n, k).scale(p));
    }
    out
}

/// Apply an envelope element, words acting right factor first.
pub fn act_element(u: &UElem, v: &State) -> State {
    let mut out = State::zero();
    for (word, p) in u.terms() {
        let mut cur = v.clone();
        for &n in word.0.iter().rev() {
            cur = act(n, &cur);
            if cur.is_zero() {
                break;
            }
        }
        out = out.add(&cur.scale(p));
    }
    out
}

/// Number of partitions of `level` into parts >= 2.
pub fn graded_dimension(level: i64) -> u64 {
    assert!(level >= 0, "levels are non-negative");
    kets_at_level(level).len() as u64
}

/// All basis kets at the given level, in lexicographic order.
pub fn kets_at_level(level: i64) -> Vec<Ket> {
    fn go(remaining: i64, max_part: i64, prefix: &mut Vec<i64>, out: &mut Vec<Ket>) {
        if remaining == 0 {
            out.push(Ket::new(prefix.clone()));
            return;
        }
        let mut p = max_part.min(remaining);
        while p >= 2 {
            // Skip parts that would strand a remainder of 1.
            if remaining - p != 1 {
                prefix.push(p);
                go(remaining - p, p, prefix, out);
                prefix.pop();
            }
            p -= 1;
        }
    }
    let mut out = Vec::new();
    if level >= 0 {
        go(level, level, &mut Vec::new(), &mut out);
    }
    out
}

/// All basis kets of level <= cap, ordered by level.
pub fn kets_up_to(cap: i64) -> Vec<Ket> {
    (0..=cap).flat_map(kets_at_level).collect()
}

/// The character sum_k dim(level k) q^k as a q-series, computed from the
/// generating product prod_(n>=2) (1 - q^n)^(-1) truncated at `order`.
pub fn character(order: i64) -> TruncLaurent {
    let q = Var('q');
    assert!(order >= 1, "character needs a positive order");
    let mut acc = TruncLaurent::constant(q, Rat::one()).with_order(order);
    for n in 2..order {
        let factor = TruncLaurent::from_terms(
            q,
            [(0, Rat::one()), (n, Rat::from_int(-1))],
            Trunc::Order(order),
        );
        let inv = factor.inverse().expect("unit constant term");
        acc = acc.mul(&inv).expect("same variable");
    }
    acc
}
