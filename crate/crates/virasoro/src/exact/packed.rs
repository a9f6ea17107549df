//! Integer multivariate polynomials with byte-packed exponents, built for
//! very large expansions of products of variable differences.
//!
//! A monomial c^k x_1^{e_1} ... x_7^{e_7} packs into a single u64 (one byte
//! per exponent), and coefficients are checked i128 integers, so arithmetic
//! is allocation-free and polynomial sums become sorted-vector merges. The
//! intended use stores a rational polynomial as (integer polynomial) /
//! (integer scale) with the scale cleared through an LCM of denominators;
//! every operation here panics on byte-exponent or i128 overflow rather
//! than wrapping.

use alloc::vec::Vec;

/// Byte slots 0..=6 hold x_1..x_7; slot 7 holds the power of c.
pub const MAX_VARS: usize = 7;
const C_SLOT: usize = 7;

#[inline]
fn slot_of(var: usize) -> usize {
    assert!((1..=MAX_VARS).contains(&var), "variable index out of range");
    var - 1
}

#[inline]
fn exp_at(key: u64, slot: usize) -> u32 {
    ((key >> (8 * slot)) & 0xff) as u32
}

#[inline]
fn bump(key: u64, slot: usize, by: u32) -> u64 {
    let e = exp_at(key, slot) + by;
    assert!(e < 256, "packed exponent overflow");
    (key & !(0xffu64 << (8 * slot))) | ((e as u64) << (8 * slot))
}

#[inline]
fn drop_slot(key: u64, slot: usize) -> u64 {
    key & !(0xffu64 << (8 * slot))
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("i128 coefficient overflow")
}

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("i128 coefficient overflow")
}

/// A polynomial in c and x_1..x_7 with integer coefficients; entries are
/// sorted by packed key with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PackedPoly {
    entries: Vec<(u64, i128)>,
}

/// Sort and combine raw (key, coefficient) pairs.
fn normalize(mut raw: Vec<(u64, i128)>) -> Vec<(u64, i128)> {
    raw.sort_unstable_by_key(|&(k, _)| k);
    let mut out: Vec<(u64, i128)> = Vec::with_capacity(raw.len());
    for (k, c) in raw {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = checked_add(last.1, c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

/// Merge two sorted entry lists.
fn merge(a: &[(u64, i128)], b: &[(u64, i128)]) -> Vec<(u64, i128)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let c = checked_add(a[i].1, b[j].1);
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl PackedPoly {
    pub fn zero() -> Self {
        PackedPoly { entries: Vec::new() }
    }

    /// Single monomial with explicit exponents: c^{c_pow} * prod x_v^{xs[v-1]}.
    pub fn monomial(coeff: i128, c_pow: u32, xs: &[u32]) -> Self {
        assert!(xs.len() <= MAX_VARS);
        if coeff == 0 {
            return Self::zero();
        }
        let mut key = 0u64;
        key = bump(key, C_SLOT, c_pow);
        for (v, &e) in xs.iter().enumerate() {
            key = bump(key, v, e);
        }
        PackedPoly { entries: alloc::vec![(key, coeff)] }
    }

    pub fn from_raw(raw: Vec<(u64, i128)>) -> Self {
        PackedPoly { entries: normalize(raw) }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u64, i128)] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        PackedPoly { entries: merge(&self.entries, &other.entries) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PackedPoly { entries: self.entries.iter().map(|&(k, c)| (k, -c)).collect() }
    }

    pub fn scale(&self, s: i128) -> Self {
        if s == 0 {
            return Self::zero();
        }
        PackedPoly {
            entries: self.entries.iter().map(|&(k, c)| (k, checked_mul(c, s))).collect(),
        }
    }

    /// Multiply by x_var^by.
    pub fn mul_var(&self, var: usize, by: u32) -> Self {
        let slot = slot_of(var);
        PackedPoly { entries: self.entries.iter().map(|&(k, c)| (bump(k, slot, by), c)).collect() }
    }

    /// Multiply by (x_i - x_j)^k, expanding the binomial directly.
    pub fn mul_binomial_pow(&self, i: usize, j: usize, k: u32) -> Self {
        assert!(i != j);
        if k == 0 {
            return self.clone();
        }
        let (si, sj) = (slot_of(i), slot_of(j));
        // Row k of Pascal's triangle with alternating signs on the x_j side.
        let mut binom: Vec<i128> = Vec::with_capacity(k as usize + 1);
        let mut b: i128 = 1;
        for a in 0..=k {
            binom.push(b);
            if a < k {
                b = checked_mul(b, (k - a) as i128) / (a as i128 + 1);
            }
        }
        let mut raw = Vec::with_capacity(self.entries.len() * (k as usize + 1));
        for &(key, coeff) in &self.entries {
            for a in 0..=k {
                let sign = if (k - a).is_multiple_of(2) { 1 } else { -1 };
                let term = checked_mul(coeff, sign * binom[a as usize]);
                raw.push((bump(bump(key, si, a), sj, k - a), term));
            }
        }
        Self::from_raw(raw)
    }

    /// Partial derivative in x_var.
    pub fn derivative(&self, var: usize) -> Self {
        let slot = slot_of(var);
        let entries = self
            .entries
            .iter()
            .filter_map(|&(k, c)| {
                let e = exp_at(k, slot);
                if e == 0 {
                    None
                } else {
                    Some((bump(drop_slot(k, slot), slot, e - 1), checked_mul(c, e as i128)))
                }
            })
            .collect();
        // Exponent order is preserved under e -> e-1 within one slot, and
        // keys remain distinct, so the result is still sorted.
        PackedPoly { entries }
    }

    /// Exact division by (x_i - x_j); None if not divisible.
    pub fn div_binomial(&self, i: usize, j: usize) -> Option<Self> {
        assert!(i != j);
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (si, sj) = (slot_of(i), slot_of(j));
        let top = self.entries.iter().map(|&(k, _)| exp_at(k, si)).max().unwrap();
        // Split into layers P_k by the x_i exponent, keys with x_i removed.
        let mut layers: Vec<Vec<(u64, i128)>> = alloc::vec![Vec::new(); top as usize + 1];
        for &(k, c) in &self.entries {
            layers[exp_at(k, si) as usize].push((drop_slot(k, si), c));
        }
        let layers: Vec<Vec<(u64, i128)>> =
            layers.into_iter().map(normalize).collect();
        // Writing P = sum_k x_i^k P_k, the quotient layers satisfy
        // Q_{k-1} = P_k + x_j Q_k downward from Q_top = 0, and the
        // remainder P_0 + x_j Q_0 must vanish.
        let mut carry: Vec<(u64, i128)> = Vec::new();
        let mut quotient: Vec<(u64, i128)> = Vec::new();
        for k in (1..=top as usize).rev() {
            let shifted: Vec<(u64, i128)> =
                carry.iter().map(|&(key, c)| (bump(key, sj, 1), c)).collect();
            carry = merge(&layers[k], &shifted);
            quotient
                .extend(carry.iter().map(|&(key, c)| (bump(key, si, k as u32 - 1), c)));
        }
        let shifted: Vec<(u64, i128)> =
            carry.iter().map(|&(key, c)| (bump(key, sj, 1), c)).collect();
        if !merge(&layers[0], &shifted).is_empty() {
            return None;
        }
        Some(Self::from_raw(quotient))
    }

    /// Apply a permutation of x-variables: perm[v-1] = w sends x_v to x_w.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let raw = self
            .entries
            .iter()
            .map(|&(key, c)| {
                let mut out = key & (0xffu64 << (8 * C_SLOT));
                for v in 1..=perm.len() {
                    let e = exp_at(key, slot_of(v));
                    if e > 0 {
                        out = bump(out, slot_of(perm[v - 1]), e);
                    }
                }
                (out, c)
            })
            .collect();
        Self::from_raw(raw)
    }

    /// Total degree in the x-variables (ignoring c) if homogeneous.
    pub fn x_degree_if_homogeneous(&self) -> Option<u32> {
        let deg = |key: u64| -> u32 { (0..MAX_VARS).map(|s| exp_at(key, s)).sum() };
        let mut degrees = self.entries.iter().map(|&(k, _)| deg(k));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}
