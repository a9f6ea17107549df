//! Polynomials in the central parameter c.
//!
//! Every coefficient ring in the mode algebra is Q[c]: bracket central terms,
//! vacuum-module matrix entries, correlator coefficients. `CPoly` keeps a
//! sparse exponent -> coefficient map with no zero entries stored.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::rat::Rat;

/// Sparse polynomial in c over the rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct CPoly {
    coeffs: BTreeMap<u32, Rat>,
}

impl CPoly {
    pub fn constant(r: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        CPoly { coeffs }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rat::from_int(n))
    }

    /// The monomial r * c^k.
    pub fn monomial(r: Rat, k: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(k, r);
        }
        CPoly { coeffs }
    }

    /// The variable c itself.
    pub fn c() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    pub fn coeff(&self, k: u32) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs.iter().map(|(k, r)| (*k, r))
    }

    /// Exact evaluation at c = c0.
    pub fn eval(&self, c0: &Rat) -> Rat {
        let mut acc = Rat::zero();
        // Horner over the sparse support, highest power first.
        let mut prev: Option<u32> = None;
        for (&k, a) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                acc *= c0.pow((p - k) as i64);
            }
            acc += a.clone();
            prev = Some(k);
        }
        match prev {
            Some(k) => acc * c0.pow(k as i64),
            None => Rat::zero(),
        }
    }

    /// True when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.degree() {
            None => Some(Rat::zero()),
            Some(0) => Some(self.coeff(0)),
            _ => None,
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return CPoly::zero();
        }
        CPoly {
            coeffs: self.coeffs.iter().map(|(k, a)| (*k, a * r)).collect(),
        }
    }

    fn insert_add(&mut self, k: u32, r: Rat) {
        if r.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(Rat::zero);
        *entry += r;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }
}

impl Zero for CPoly {
    fn zero() -> Self {
        CPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for CPoly {
    fn one() -> Self {
        CPoly::constant(Rat::one())
    }
    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|r| r.is_one())
    }
}

impl Add for CPoly {
    type Output = CPoly;
    fn add(mut self, rhs: CPoly) -> CPoly {
        for (k, r) in rhs.coeffs {
            self.insert_add(k, r);
        }
        self
    }
}

impl Add<&CPoly> for CPoly {
    type Output = CPoly;
    fn add(mut self, rhs: &CPoly) -> CPoly {
        self += rhs;
        self
    }
}

impl AddAssign<&CPoly> for CPoly {
    fn add_assign(&mut self, rhs: &CPoly) {
        for (k, r) in &rhs.coeffs {
            self.insert_add(*k, r.clone());
        }
    }
}

impl AddAssign for CPoly {
    fn add_assign(&mut self, rhs: CPoly) {
        for (k, r) in rhs.coeffs {
            self.insert_add(k, r);
        }
    }
}

impl Sub for CPoly {
    type Output = CPoly;
    fn sub(mut self, rhs: CPoly) -> CPoly {
        for (k, r) in rhs.coeffs {
            self.insert_add(k, -r);
        }
        self
    }
}

impl SubAssign<&CPoly> for CPoly {
    fn sub_assign(&mut self, rhs: &CPoly) {
        for (k, r) in &rhs.coeffs {
            self.insert_add(*k, -r);
        }
    }
}

impl Neg for CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        CPoly {
            coeffs: self.coeffs.into_iter().map(|(k, r)| (k, -r)).collect(),
        }
    }
}

impl Mul for CPoly {
    type Output = CPoly;
    fn mul(self, rhs: CPoly) -> CPoly {
        &self * &rhs
    }
}

impl Mul<&CPoly> for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (ka, a) in &self.coeffs {
            for (kb, b) in &rhs.coeffs {
                out.insert_add(ka + kb, a * b);
            }
        }
        out
    }
}

impl From<Rat> for CPoly {
    fn from(r: Rat) -> Self {
        CPoly::constant(r)
    }
}

impl From<i64> for CPoly {
    fn from(n: i64) -> Self {
        CPoly::from_int(n)
    }
}

impl fmt::Display for CPoly {
    /// Ascending powers, e.g. `3 + 2*c + 1/2*c^2`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, r)| match k {
                0 => alloc::format!("{r}"),
                1 if r.is_one() => String::from("c"),
                1 => alloc::format!("{r}*c"),
                _ if r.is_one() => alloc::format!("c^{k}"),
                _ => alloc::format!("{r}*c^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
