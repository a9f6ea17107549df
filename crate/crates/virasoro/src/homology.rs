//! Chevalley-Eilenberg chain complexes of finite-dimensional Lie algebras
//! over exact rationals, and the genus-graded global-section tables they
//! feed.
//!
//! The boundary on the exterior algebra is
//!
//! ```text
//! d(x_1 ^ ... ^ x_k) = sum_(a<b) (-1)^(a+b) [x_a, x_b] ^ x_1 ^ ...^x_a...^x_b... ^ x_k ,
//! ```
//!
//! with homological (chain) grading: degrees are the non-negative exterior
//! powers, and Betti numbers are
//!
//! ```text
//! b_k = dim ker d_k - rank d_(k+1) = C(d,k) - rank d_k - rank d_(k+1) .
//! ```
//!
//! Ranks are computed by exact Gaussian elimination over Q; nothing is ever
//! rounded. The genus tables report the polynomial-algebra generators of the
//! global sections: genus 0 comes out of the sl2 computation (one generator
//! in degree 3 next to the central one), genus 1 and higher are assembled
//! from the formality presentation with 3g - 3 degree-0 generators.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::exact::rat::Rat;

/// Structure constants of a Lie algebra on basis e_0..e_(d-1): for each
/// i < j the coefficient vector of [e_i, e_j]. Antisymmetry is implied by
/// the storage; the Jacobi identity is validated on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieTable {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<Rat>>,
}

/// Construction failures: malformed entries or a Jacobi violation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LieError {
    BadIndex { i: usize, j: usize },
    BadLength { i: usize, j: usize, len: usize },
    Jacobi { i: usize, j: usize, k: usize },
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::BadIndex { i, j } => write!(f, "bracket indices ({i},{j}) need i < j < dim"),
            LieError::BadLength { i, j, len } => {
                write!(f, "bracket ({i},{j}) has {len} coefficients, want dim")
            }
            LieError::Jacobi { i, j, k } => {
                write!(f, "Jacobi identity fails on basis triple ({i},{j},{k})")
            }
        }
    }
}

impl core::error::Error for LieError {}

impl LieTable {
    /// Build and validate. Entries are ((i, j), coeffs of [e_i, e_j]) with
    /// i < j, zero-based; omitted pairs bracket to zero.
    pub fn new(
        dim: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Vec<Rat>)>,
    ) -> Result<Self, LieError> {
        let mut brackets = BTreeMap::new();
        for ((i, j), coeffs) in entries {
            if i >= j || j >= dim {
                return Err(LieError::BadIndex { i, j });
            }
            if coeffs.len() != dim {
                return Err(LieError::BadLength { i, j, len: coeffs.len() });
            }
            if coeffs.iter().any(|c| !c.is_zero()) {
                brackets.insert((i, j), coeffs);
            }
        }
        let table = LieTable { dim, brackets };
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    if !table.jacobi_holds(i, j, k) {
                        return Err(LieError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn brackets(&self) -> impl Iterator<Item = ((usize, usize), &[Rat])> {
        self.brackets.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// [e_i, e_j] for any index order.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let mut out = alloc::vec![Rat::zero(); self.dim];
        if i == j {
            return out;
        }
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        if let Some(coeffs) = self.brackets.get(&key) {
            for (m, c) in coeffs.iter().enumerate() {
                out[m] = c.clone() * Rat::from_int(sign);
            }
        }
        out
    }

    /// Bilinear extension of the bracket to coefficient vectors.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = alloc::vec![Rat::zero(); self.dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for (m, c) in self.bracket_basis(i, j).into_iter().enumerate() {
                    out[m] += c * &(a * b);
                }
            }
        }
        out
    }

    fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> bool {
        let basis = |v: usize| -> Vec<Rat> {
            let mut e = alloc::vec![Rat::zero(); self.dim];
            e[v] = Rat::from_int(1);
            e
        };
        let mut total = self.bracket(&self.bracket_basis(i, j), &basis(k));
        for (m, c) in self.bracket(&self.bracket_basis(j, k), &basis(i)).into_iter().enumerate() {
            total[m] += c;
        }
        for (m, c) in self.bracket(&self.bracket_basis(k, i), &basis(j)).into_iter().enumerate() {
            total[m] += c;
        }
        total.iter().all(Rat::is_zero)
    }
}

/// Dense exact-rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: alloc::vec![Rat::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = a * other.get(k, c);
                    out.add_to(r, c, v);
                }
            }
        }
        out
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rat>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].clone().inv().expect("pivot nonzero");
            for r in (rank + 1)..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone() * &inv;
                // Row rank is strictly above row r, so the split is disjoint.
                let (head, tail) = m.split_at_mut(r);
                for (dst, src) in tail[0][col..].iter_mut().zip(&head[rank][col..]) {
                    *dst -= src * &factor;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// The CE chain complex: boundaries[k-1] is d_k taking the k-th exterior
/// power to the (k-1)-st, for k = 1..=dim.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dim: usize,
    boundaries: Vec<Matrix>,
}

/// Subsets of {0..d-1} of size k in lexicographic order.
fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for v in start..d {
            prefix.push(v);
            go(v + 1, d, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// The standard CE boundary matrices of a validated table.
pub fn build_ce(table: &LieTable) -> ChainComplex {
    let d = table.dim;
    let mut boundaries = Vec::with_capacity(d);
    for k in 1..=d {
        let domain = subsets(d, k);
        let codomain = subsets(d, k - 1);
        let index: BTreeMap<Vec<usize>, usize> =
            codomain.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut mat = Matrix::zero(codomain.len(), domain.len());
        for (col, subset) in domain.iter().enumerate() {
            // Sign (-1)^(a+b) over 1-based positions a < b; the 0-based sum
            // below has the same parity (shift by 2).
            for a in 0..k {
                for b in (a + 1)..k {
                    let pair_sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                    let rest: Vec<usize> = subset
                        .iter()
                        .enumerate()
                        .filter(|&(pos, _)| pos != a && pos != b)
                        .map(|(_, &v)| v)
                        .collect();
                    for (m, c) in
                        table.bracket_basis(subset[a], subset[b]).into_iter().enumerate()
                    {
                        if c.is_zero() || rest.contains(&m) {
                            continue;
                        }
                        // Insert e_m into the sorted rest; each hop is a sign.
                        let pos = rest.iter().filter(|&&v| v < m).count();
                        let insert_sign = if pos % 2 == 0 { 1 } else { -1 };
                        let mut target = rest.clone();
                        target.insert(pos, m);
                        let row = index[&target];
                        mat.add_to(row, col, c * Rat::from_int(pair_sign * insert_sign));
                    }
                }
            }
        }
        boundaries.push(mat);
    }
    ChainComplex { dim: d, boundaries }
}

impl ChainComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// d_k for k = 1..=dim.
    pub fn boundary(&self, k: usize) -> &Matrix {
        &self.boundaries[k - 1]
    }

    /// d_(k-1) . d_k = 0 for all k.
    pub fn boundary_squared_is_zero(&self) -> bool {
        (2..=self.dim).all(|k| self.boundary(k - 1).mul(self.boundary(k)).is_zero())
    }

    /// Chain Betti numbers b_0..b_dim.
    pub fn betti(&self) -> Vec<u64> {
        let ranks: Vec<usize> = self.boundaries.iter().map(Matrix::rank).collect();
        (0..=self.dim)
            .map(|k| {
                let space = binomial(self.dim, k);
                let below = if k == 0 { 0 } else { ranks[k - 1] };
                let above = if k == self.dim { 0 } else { ranks[k] };
                (space - below - above) as u64
            })
            .collect()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut out = 1usize;
    for i in 0..k.min(n - k) {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Named generator of a global-section polynomial algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// Generators of the genus-g global sections: genus 0 has one generator in
/// degree 3 (read off the sl2 Betti table) next to the central generator;
/// genus 1 has an extra degree -1 generator; genus >= 2 has 3g - 3
/// generators in degree 0.
pub fn genus_table(g: i64) -> Result<Vec<Generator>, NegativeGenus> {
    if g < 0 {
        return Err(NegativeGenus(g));
    }
    let central = Generator { name: String::from("C"), degree: 0 };
    Ok(match g {
        0 => {
            let betti = build_ce(&sl2()).betti();
            assert_eq!(betti, alloc::vec![1, 0, 0, 1], "sl2 homology pins the genus-0 table");
            let degree = (1..betti.len()).find(|&k| betti[k] != 0).expect("top class") as i64;
            alloc::vec![Generator { name: String::from("y"), degree }, central]
        }
        1 => alloc::vec![
            Generator { name: String::from("x"), degree: -1 },
            Generator { name: String::from("y"), degree: 0 },
            central,
        ],
        g => {
            let mut out: Vec<Generator> = (1..=(3 * g - 3))
                .map(|i| Generator { name: alloc::format!("y{i}"), degree: 0 })
                .collect();
            out.push(central);
            out
        }
    })
}

/// Error for a genus below zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NegativeGenus(pub i64);

impl fmt::Display for NegativeGenus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {} is negative", self.0)
    }
}

impl core::error::Error for NegativeGenus {}

/// The abelian algebra of the given dimension.
pub fn abelian(dim: usize) -> LieTable {
    LieTable::new(dim, core::iter::empty()).expect("trivially Jacobi")
}

fn single(dim: usize, i: usize, j: usize, targets: &[(usize, i64)]) -> ((usize, usize), Vec<Rat>) {
    let mut coeffs = alloc::vec![Rat::zero(); dim];
    for &(m, c) in targets {
        coeffs[m] = Rat::from_int(c);
    }
    ((i, j), coeffs)
}

/// Heisenberg algebra on (p, q, z): [p, q] = z.
pub fn heisenberg3() -> LieTable {
    LieTable::new(3, [single(3, 0, 1, &[(2, 1)])]).expect("Jacobi")
}

/// Five-dimensional Heisenberg: [p1, q1] = z = [p2, q2].
pub fn heisenberg5() -> LieTable {
    LieTable::new(5, [single(5, 0, 1, &[(4, 1)]), single(5, 2, 3, &[(4, 1)])]).expect("Jacobi")
}

/// sl2 on (e, h, f): [e, h] = -2e, [e, f] = h, [h, f] = -2f.
pub fn sl2() -> LieTable {
    LieTable::new(
        3,
        [
            single(3, 0, 1, &[(0, -2)]),
            single(3, 0, 2, &[(1, 1)]),
            single(3, 1, 2, &[(2, -2)]),
        ],
    )
    .expect("Jacobi")
}

/// so3: [e1, e2] = e3 cyclically.
pub fn so3() -> LieTable {
    LieTable::new(
        3,
        [
            single(3, 0, 1, &[(2, 1)]),
            single(3, 1, 2, &[(0, 1)]),
            single(3, 0, 2, &[(1, -1)]),
        ],
    )
    .expect("Jacobi")
}

/// The nonabelian 2-dimensional algebra [e0, e1] = e1.
pub fn solvable2() -> LieTable {
    LieTable::new(2, [single(2, 0, 1, &[(1, 1)])]).expect("Jacobi")
}

/// The split solvable 3-dimensional algebra [e0, e1] = e1, [e0, e2] = e2.
pub fn solvable3() -> LieTable {
    LieTable::new(3, [single(3, 0, 1, &[(1, 1)]), single(3, 0, 2, &[(2, 1)])]).expect("Jacobi")
}

/// Filiform nilpotent dimension 4: [e0, e1] = e2, [e0, e2] = e3.
pub fn filiform4() -> LieTable {
    LieTable::new(4, [single(4, 0, 1, &[(2, 1)]), single(4, 0, 2, &[(3, 1)])]).expect("Jacobi")
}

/// The validation corpus: ten algebras with exact tables.
pub fn corpus() -> Vec<(&'static str, LieTable)> {
    alloc::vec![
        ("abelian1", abelian(1)),
        ("abelian2", abelian(2)),
        ("abelian3", abelian(3)),
        ("heisenberg3", heisenberg3()),
        ("heisenberg5", heisenberg5()),
        ("sl2", sl2()),
        ("so3", so3()),
        ("solvable2", solvable2()),
        ("solvable3", solvable3()),
        ("filiform4", filiform4()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_validation_rejects_bad_tables() {
        // Adding [e1,e2] = e0 to the split solvable algebra leaves the
        // Jacobiator of (e0,e1,e2) equal to 2 e0.
        let bad = LieTable::new(
            3,
            [
                single(3, 0, 1, &[(1, 1)]),
                single(3, 0, 2, &[(2, 1)]),
                single(3, 1, 2, &[(0, 1)]),
            ],
        );
        assert_eq!(bad.unwrap_err(), LieError::Jacobi { i: 0, j: 1, k: 2 });
        assert_eq!(
            LieTable::new(2, [single(2, 1, 1, &[(0, 1)])]).unwrap_err(),
            LieError::BadIndex { i: 1, j: 1 }
        );
    }

    #[test]
    fn abelian_complex_is_trivial() {
        let c = build_ce(&abelian(2));
        assert!(c.boundary(1).is_zero() && c.boundary(2).is_zero());
        assert_eq!(c.betti(), alloc::vec![1, 2, 1]);
        assert_eq!(build_ce(&abelian(3)).betti(), alloc::vec![1, 3, 3, 1]);
    }

    #[test]
    fn sl2_betti_hand_oracle() {
        let c = build_ce(&sl2());
        // d2 sends e^h, e^f, h^f to -2e, h, -2f: full rank 3; d3 kills the
        // top class.
        assert_eq!(c.boundary(2).rank(), 3);
        assert_eq!(c.boundary(3).rank(), 0);
        assert_eq!(c.betti(), alloc::vec![1, 0, 0, 1]);
    }

    #[test]
    fn known_betti_tables() {
        assert_eq!(build_ce(&heisenberg3()).betti(), alloc::vec![1, 2, 2, 1]);
        assert_eq!(build_ce(&so3()).betti(), alloc::vec![1, 0, 0, 1]);
        assert_eq!(build_ce(&solvable2()).betti(), alloc::vec![1, 1, 0]);
        assert_eq!(build_ce(&solvable3()).betti(), alloc::vec![1, 1, 0, 0]);
        assert_eq!(build_ce(&filiform4()).betti(), alloc::vec![1, 2, 2, 2, 1]);
        // h5: b1 = dim g/[g,g] = 4 and nilpotent Poincare duality.
        let b5 = build_ce(&heisenberg5()).betti();
        assert_eq!(b5, alloc::vec![1, 4, 5, 5, 4, 1]);
    }

    #[test]
    fn corpus_complexes_are_complexes() {
        for (name, table) in corpus() {
            let c = build_ce(&table);
            assert!(c.boundary_squared_is_zero(), "{name}");
            let betti = c.betti();
            let mut euler_betti = 0i64;
            let mut euler_space = 0i64;
            for (k, &b) in betti.iter().enumerate() {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                euler_betti += sign * b as i64;
                euler_space += sign * binomial(table.dim(), k) as i64;
            }
            assert_eq!(euler_betti, euler_space, "{name}");
            if table.dim() >= 1 {
                assert_eq!(euler_betti, 0, "{name}");
            }
        }
    }

    #[test]
    fn sl2_betti_poincare_dual() {
        let b = build_ce(&sl2()).betti();
        for k in 0..=3 {
            assert_eq!(b[k], b[3 - k]);
        }
    }

    #[test]
    fn genus_tables() {
        let g0 = genus_table(0).unwrap();
        assert_eq!(g0.len(), 2);
        assert_eq!((g0[0].name.as_str(), g0[0].degree), ("y", 3));
        assert_eq!((g0[1].name.as_str(), g0[1].degree), ("C", 0));
        let g1 = genus_table(1).unwrap();
        assert_eq!(
            g1.iter().map(|g| (g.name.as_str(), g.degree)).collect::<Vec<_>>(),
            alloc::vec![("x", -1), ("y", 0), ("C", 0)]
        );
        let g3 = genus_table(3).unwrap();
        assert_eq!(g3.len(), 7);
        assert!(g3[..6].iter().all(|g| g.degree == 0));
        assert_eq!(genus_table(-1), Err(NegativeGenus(-1)));
    }

    #[test]
    fn rank_examples() {
        let mut m = Matrix::zero(2, 3);
        m.set(0, 0, Rat::from_int(1));
        m.set(0, 1, Rat::from_int(2));
        m.set(1, 0, Rat::from_int(2));
        m.set(1, 1, Rat::from_int(4));
        assert_eq!(m.rank(), 1);
        m.set(1, 2, Rat::from_int(1));
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::zero(3, 3).rank(), 0);
    }
}
