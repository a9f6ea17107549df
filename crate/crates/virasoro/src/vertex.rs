//! Vertex-operator structure on the vacuum module.
//!
//! The stress field is
//!
//! ```text
//! L(z) = sum_n L_n z^(-n-2) = sum_j T_(j) z^(-j-1) ,      T_(j) = L_(j-1) ,
//! ```
//!
//! and the state-field map Y sends the basis ket (n_1, ..., n_k) to the
//! iterated normal-ordered product
//!
//! ```text
//! Y(L_(-n_1)...L_(-n_k)|0>, z)
//!     = : (d^(n_1-2)L / (n_1-2)!) (: ... (d^(n_k-2)L / (n_k-2)!) Id ... :) : .
//! ```
//!
//! Fields are lazy: a node of the expression tree never materializes its
//! infinite mode family. Each requested pair (mode, input ket) expands to a
//! finite sum through the normal-product splitting
//!
//! ```text
//! (:AB:)_(m) w = sum_(j<=-1) A_(j) B_(m-1-j) w + sum_(j>=0) B_(m-1-j) A_(j) w ,
//! ```
//!
//! where both sums are finite on a graded input: X_(j) kills every state of
//! level < j - wt(X) + 1, so creation modes of a weight-h field are the
//! indices j <= -1, i.e. L-indices <= -h. Evaluations are memoized per arena
//! keyed by (node, mode, ket); an arena is a single-thread evaluation context
//! (it is not Sync) and all returned states are immutable values.
//!
//! The axiom checkers are bounded verifications. Locality is tested through
//! its mode form: (z - w)^N [Y(v,z), Y(w',w)] = 0 holds iff
//!
//! ```text
//! sum_(i=0..N) (-1)^i binom(N,i) [ v_(m+N-i), w'_(k+i) ] = 0   for all m, k,
//! ```
//!
//! checked for |m|, |k| and input levels within the caps.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_traits::Zero;

use crate::exact::cpoly::CPoly;
use crate::exact::rat::Rat;
use crate::vacuum::{act, kets_up_to, Ket, State};

/// The mode L_n as an operator; identical to the module action.
pub fn stress_mode(n: i64, v: &State) -> State {
    act(n, v)
}

/// Index of a field-expression node inside its arena.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FieldId(usize);

/// Field expression: identity, divided derivative of the stress field, or a
/// normal-ordered product of two earlier nodes.
#[derive(Clone, PartialEq, Eq, Debug)]
enum FieldNode {
    /// Y(|0>, z) = id.
    Identity,
    /// d^(deriv) L(z) / deriv!.
    Stress { deriv: u32 },
    /// :left right:.
    Normal { left: FieldId, right: FieldId },
}

/// Y(v, z) for a general state: a Q[c]-combination of expression nodes.
#[derive(Clone, Debug)]
pub struct FieldHandle {
    terms: Vec<(FieldId, CPoly)>,
}

/// Finite window of a formal distribution with state coefficients,
/// sum_e v_e z^e for e in [lo, hi].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentState {
    window: (i64, i64),
    coeffs: BTreeMap<i64, State>,
}

impl LaurentState {
    pub fn zero(window: (i64, i64)) -> Self {
        assert!(window.0 <= window.1, "empty window");
        LaurentState { window, coeffs: BTreeMap::new() }
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn coeff(&self, e: i64) -> State {
        assert!(self.window.0 <= e && e <= self.window.1, "exponent outside window");
        self.coeffs.get(&e).cloned().unwrap_or_else(State::zero)
    }

    pub fn set_coeff(&mut self, e: i64, v: State) {
        assert!(self.window.0 <= e && e <= self.window.1, "exponent outside window");
        if v.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = (i64, &State)> {
        self.coeffs.iter().map(|(e, v)| (*e, v))
    }
}

/// Arena of field-expression nodes with a per-arena evaluation memo.
#[derive(Default)]
pub struct FieldArena {
    nodes: Vec<FieldNode>,
    memo: RefCell<BTreeMap<(usize, i64, Ket), State>>,
}

impl FieldArena {
    pub fn new() -> Self {
        FieldArena::default()
    }

    fn intern(&mut self, node: FieldNode) -> FieldId {
        if let Some(i) = self.nodes.iter().position(|n| *n == node) {
            return FieldId(i);
        }
        self.nodes.push(node);
        FieldId(self.nodes.len() - 1)
    }

    pub fn identity(&mut self) -> FieldId {
        self.intern(FieldNode::Identity)
    }

    /// d^(deriv) L(z) / deriv!.
    pub fn stress(&mut self, deriv: u32) -> FieldId {
        self.intern(FieldNode::Stress { deriv })
    }

    pub fn normal(&mut self, left: FieldId, right: FieldId) -> FieldId {
        self.intern(FieldNode::Normal { left, right })
    }

    /// Conformal weight: Id has 0, d^(d)L/d! has 2 + d, :AB: has wt A + wt B.
    pub fn weight(&self, id: FieldId) -> i64 {
        match self.nodes[id.0] {
            FieldNode::Identity => 0,
            FieldNode::Stress { deriv } => 2 + i64::from(deriv),
            FieldNode::Normal { left, right } => self.weight(left) + self.weight(right),
        }
    }

    /// The reconstruction node for one basis ket.
    pub fn reconstruct_ket(&mut self, k: &Ket) -> FieldId {
        let mut field = self.identity();
        for &n in k.parts().iter().rev() {
            let factor = self.stress((n - 2) as u32);
            field = self.normal(factor, field);
        }
        field
    }

    /// Y(v, z) for a finite state v, term by term.
    pub fn reconstruct_field(&mut self, v: &State) -> FieldHandle {
        let terms = v
            .terms()
            .map(|(k, p)| (k.clone(), p.clone()))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|(k, p)| (self.reconstruct_ket(&k), p))
            .collect();
        FieldHandle { terms }
    }

    /// Node mode on a basis ket, memoized.
    fn node_mode(&self, id: FieldId, j: i64, ket: &Ket) -> State {
        // Grading bound: X_(j) drops the level by j - wt + 1.
        if j > ket.level() + self.weight(id) - 1 {
            return State::zero();
        }
        let key = (id.0, j, ket.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = match self.nodes[id.0] {
            FieldNode::Identity => {
                if j == -1 {
                    State::from_ket(ket.clone())
                } else {
                    State::zero()
                }
            }
            FieldNode::Stress { deriv } => {
                // (d^(d)L/d!)_(j) = (-1)^d binom(j, d) T_(j-d), T_(j) = L_(j-1).
                let d = i64::from(deriv);
                let mut coeff = Rat::binom(j, deriv);
                if deriv % 2 == 1 {
                    coeff = -coeff;
                }
                if coeff.is_zero() {
                    State::zero()
                } else {
                    act(j - d - 1, &State::from_ket(ket.clone())).scale_rat(&coeff)
                }
            }
            FieldNode::Normal { left, right } => {
                let level = ket.level();
                let (wa, wb) = (self.weight(left), self.weight(right));
                let mut out = State::zero();
                // Creation modes of the left factor act outermost.
                for jj in (j - level - wb)..=-1 {
                    let inner = self.node_mode(right, j - 1 - jj, ket);
                    out = out.add(&self.node_mode_state(left, jj, &inner));
                }
                for jj in 0..=(level + wa - 1) {
                    let inner = self.node_mode(left, jj, ket);
                    out = out.add(&self.node_mode_state(right, j - 1 - jj, &inner));
                }
                out
            }
        };
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn node_mode_state(&self, id: FieldId, j: i64, v: &State) -> State {
        let mut out = State::zero();
        for (k, p) in v.terms() {
            out = out.add(&self.node_mode(id, j, k).scale(p));
        }
        out
    }

    /// The mode v_(j) of a reconstructed field, extended linearly.
    pub fn mode(&self, h: &FieldHandle, j: i64, w: &State) -> State {
        let mut out = State::zero();
        for (id, p) in &h.terms {
            out = out.add(&self.node_mode_state(*id, j, w).scale(p));
        }
        out
    }

    /// Largest mode index that can act nonzero on w: max wt(v) + max level(w) - 1.
    fn mode_bound(&self, h: &FieldHandle, w: &State) -> Option<i64> {
        let wt = h.terms.iter().map(|(id, _)| self.weight(*id)).max()?;
        let lv = w.terms().map(|(k, _)| k.level()).max()?;
        Some(wt + lv - 1)
    }

    /// Coefficients of Y(v, z) w inside the exponent window, exact.
    pub fn apply_field(&mut self, v: &State, w: &State, window: (i64, i64)) -> LaurentState {
        let h = self.reconstruct_field(v);
        let mut out = LaurentState::zero(window);
        for e in window.0..=window.1 {
            out.set_coeff(e, self.mode(&h, -e - 1, w));
        }
        out
    }

    /// All strictly negative z-exponents of Y(v,z)w with nonzero coefficient,
    /// as (pole order, coefficient) with pole order p meaning z^(-p).
    pub fn ope_singular(&mut self, v: &State, w: &State) -> Vec<(i64, State)> {
        let h = self.reconstruct_field(v);
        let Some(bound) = self.mode_bound(&h, w) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        // Pole p is the mode j = p - 1.
        for p in (1..=bound + 1).rev() {
            let coeff = self.mode(&h, p - 1, w);
            if !coeff.is_zero() {
                out.push((p, coeff));
            }
        }
        out
    }

    /// [T, Y(v,z)] w - d/dz (Y(v,z) w) on the window; T = L_(-1).
    pub fn translation_defect(&mut self, v: &State, w: &State, window: (i64, i64)) -> LaurentState {
        let h = self.reconstruct_field(v);
        let mut out = LaurentState::zero(window);
        for e in window.0..=window.1 {
            let vw = self.mode(&h, -e - 1, w);
            let mut defect = act(-1, &vw).sub(&self.mode(&h, -e - 1, &act(-1, w)));
            // d/dz shifts: coefficient of z^e picks (e+1) times the z^(e+1) one.
            let shifted = self.mode(&h, -e - 2, w);
            defect = defect.sub(&shifted.scale_rat(&Rat::from_int(e + 1)));
            out.set_coeff(e, defect);
        }
        out
    }

    /// Translation axiom sweep over all basis states of level <= level_cap;
    /// returns the first nonzero per-state defect, zero when the axiom holds.
    pub fn check_translation(&mut self, v: &State, level_cap: i64, window: (i64, i64)) -> LaurentState {
        for k in kets_up_to(level_cap) {
            let d = self.translation_defect(v, &State::from_ket(k), window);
            if !d.is_zero() {
                return d;
            }
        }
        LaurentState::zero(window)
    }

    /// Bounded locality check of (z - w)^N [Y(v,z), Y(v',w)] = 0 through the
    /// equivalent mode identity, for |m|, |k| <= mode_cap on all basis states
    /// of level <= level_cap.
    pub fn check_locality(
        &mut self,
        v: &State,
        w: &State,
        n_pow: u32,
        level_cap: i64,
        mode_cap: i64,
    ) -> bool {
        let hv = self.reconstruct_field(v);
        let hw = self.reconstruct_field(w);
        let kets = kets_up_to(level_cap);
        for m in -mode_cap..=mode_cap {
            for k in -mode_cap..=mode_cap {
                for ket in &kets {
                    let u = State::from_ket(ket.clone());
                    let mut sum = State::zero();
                    for i in 0..=n_pow {
                        let mut coeff = Rat::binom(i64::from(n_pow), i);
                        if i % 2 == 1 {
                            coeff = -coeff;
                        }
                        let (jv, jw) = (m + i64::from(n_pow) - i64::from(i), k + i64::from(i));
                        let fwd = self.mode(&hv, jv, &self.mode(&hw, jw, &u));
                        let bwd = self.mode(&hw, jw, &self.mode(&hv, jv, &u));
                        sum = sum.add(&fwd.sub(&bwd).scale_rat(&coeff));
                    }
                    if !sum.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Vacuum axiom on every basis ket of level <= level_cap: Y(v,z)|0> has
    /// no pole and its constant coefficient is v.
    pub fn check_vacuum_axiom(&mut self, level_cap: i64) -> bool {
        for k in kets_up_to(level_cap) {
            let v = State::from_ket(k.clone());
            let h = self.reconstruct_field(&v);
            if self.mode(&h, -1, &State::vacuum()) != v {
                return false;
            }
            // Poles come from modes j >= 0; grading kills j >= wt on |0>.
            for j in 0..=(k.level() - 1).max(0) {
                if !self.mode(&h, j, &State::vacuum()).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Skew-symmetry defect Y(v,z)w - e^(zT) Y(w,-z)v, coefficients of z^e
    /// for |e| <= order.
    pub fn skew_defect(&mut self, v: &State, w: &State, order: i64) -> LaurentState {
        let hv = self.reconstruct_field(v);
        let hw = self.reconstruct_field(w);
        let window = (-order, order);
        let mut out = LaurentState::zero(window);
        let bound = self.mode_bound(&hw, v);
        for e in -order..=order {
            let lhs = self.mode(&hv, -e - 1, w);
            // e^(zT) Y(w,-z) v at z^e: sum_r (-1)^(r-e) T^r/r! w_(r-e-1) v,
            // finite because modes past the grading bound annihilate v.
            let mut rhs = State::zero();
            if let Some(bound) = bound {
                let mut r = 0i64;
                while r - e - 1 <= bound {
                    let mut term = self.mode(&hw, r - e - 1, v);
                    for _ in 0..r {
                        term = act(-1, &term);
                    }
                    let mut coeff = Rat::factorial(r as u32).inv().expect("nonzero");
                    if (r - e) % 2 != 0 {
                        coeff = -coeff;
                    }
                    rhs = rhs.add(&term.scale_rat(&coeff));
                    r += 1;
                }
            }
            out.set_coeff(e, lhs.sub(&rhs));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;
    use crate::pbw::{vir_bracket, VirElement};
    use crate::vacuum::{act_element, kets_at_level};
    use crate::pbw::UElem;

    fn ket(parts: &[i64]) -> Ket {
        Ket::new(parts.to_vec())
    }

    fn state(parts: &[i64]) -> State {
        State::from_ket(ket(parts))
    }

    #[test]
    fn identity_field_is_identity() {
        let mut arena = FieldArena::new();
        let vac = State::vacuum();
        for k in kets_up_to(5) {
            let w = State::from_ket(k.clone());
            let ls = arena.apply_field(&vac, &w, (-4, 4));
            for (e, v) in ls.support() {
                assert_eq!(e, 0, "only z^0 survives");
                assert_eq!(*v, w);
            }
            assert_eq!(ls.coeff(0), w);
        }
    }

    #[test]
    fn stress_field_matches_modes() {
        let mut arena = FieldArena::new();
        let h = arena.reconstruct_field(&State::omega());
        for k in kets_up_to(6) {
            let w = State::from_ket(k.clone());
            for n in -6..=6i64 {
                // T_(j) = L_(j-1), so L_n sits at mode j = n + 1.
                assert_eq!(arena.mode(&h, n + 1, &w), act(n, &w), "L_{n} on {k}");
            }
        }
    }

    #[test]
    fn normal_product_with_identity_is_transparent() {
        let mut arena = FieldArena::new();
        let id = arena.identity();
        let l = arena.stress(0);
        let wrapped = arena.normal(l, id);
        let also = arena.normal(id, l);
        for k in kets_up_to(4) {
            for j in -5..=5 {
                let base = arena.node_mode(l, j, &k);
                assert_eq!(arena.node_mode(wrapped, j, &k), base);
                assert_eq!(arena.node_mode(also, j, &k), base);
            }
        }
    }

    #[test]
    fn derivative_field_shifts_modes() {
        // Y(L_(-3)|0>, z) = dL(z): modes (dL)_(j) = -j T_(j-1) = -j L_(j-2).
        let mut arena = FieldArena::new();
        let h = arena.reconstruct_field(&state(&[3]));
        for k in kets_up_to(4) {
            let w = State::from_ket(k.clone());
            for j in -5..=5i64 {
                let expect = act(j - 2, &w).scale_rat(&Rat::from_int(-j));
                assert_eq!(arena.mode(&h, j, &w), expect, "mode {j} on {k}");
            }
        }
    }

    #[test]
    fn field_on_vacuum_is_regular() {
        let mut arena = FieldArena::new();
        let ls = arena.apply_field(&State::omega(), &State::vacuum(), (-4, 2));
        for e in -4..0 {
            assert!(ls.coeff(e).is_zero(), "pole at z^{e}");
        }
        assert_eq!(ls.coeff(0), State::omega());
        assert_eq!(ls.coeff(1), state(&[3]));
        // z^2: L_(-4)|0> with the divided-power coefficient from e^(zT).
        assert_eq!(ls.coeff(2), act(-1, &state(&[3])).scale_rat(&rat(1, 2)));
    }

    #[test]
    fn vacuum_axiom_up_to_level_6() {
        let mut arena = FieldArena::new();
        assert!(arena.check_vacuum_axiom(6));
    }

    #[test]
    fn stress_ope_with_itself() {
        let mut arena = FieldArena::new();
        let omega = State::omega();
        let ope = arena.ope_singular(&omega, &omega);
        let mut central = State::zero();
        central.add_term(Ket::vacuum(), CPoly::monomial(rat(1, 2), 1));
        let expect = alloc::vec![
            (4, central),
            (2, omega.scale_rat(&Rat::from_int(2))),
            (1, state(&[3])),
        ];
        assert_eq!(ope, expect);
    }

    #[test]
    fn ope_with_identity_is_regular() {
        let mut arena = FieldArena::new();
        for k in kets_up_to(5) {
            assert!(arena.ope_singular(&State::vacuum(), &State::from_ket(k)).is_empty());
        }
    }

    #[test]
    fn stress_ope_with_derivative_state() {
        // Modes on L_(-3)|0>: L_3 gives 2c|0>, L_2 gives 0, L_1 gives 4 L_(-2)|0>,
        // L_0 gives 3 L_(-3)|0>, L_(-1) gives 2 L_(-4)|0>.
        let mut arena = FieldArena::new();
        let ope = arena.ope_singular(&State::omega(), &state(&[3]));
        let mut top = State::zero();
        top.add_term(Ket::vacuum(), CPoly::monomial(Rat::from_int(2), 1));
        let expect = alloc::vec![
            (5, top),
            (3, state(&[2]).scale_rat(&Rat::from_int(4))),
            (2, state(&[3]).scale_rat(&Rat::from_int(3))),
            (1, state(&[4]).scale_rat(&Rat::from_int(2))),
        ];
        assert_eq!(ope, expect);
    }

    #[test]
    fn mode_commutators_realize_the_bracket() {
        let mut arena = FieldArena::new();
        let h = arena.reconstruct_field(&State::omega());
        for n in -6..=6i64 {
            for m in -6..=6i64 {
                let bracket = UElem::from(&vir_bracket(&VirElement::mode(n), &VirElement::mode(m)));
                for k in kets_up_to(6) {
                    let w = State::from_ket(k.clone());
                    let lhs = arena
                        .mode(&h, n + 1, &arena.mode(&h, m + 1, &w))
                        .sub(&arena.mode(&h, m + 1, &arena.mode(&h, n + 1, &w)));
                    assert_eq!(lhs, act_element(&bracket, &w), "n={n} m={m} {k}");
                }
            }
        }
    }

    #[test]
    fn translation_axiom_bounded() {
        let mut arena = FieldArena::new();
        assert!(arena.check_translation(&State::omega(), 4, (-6, 4)).is_zero());
        assert!(arena.check_translation(&State::vacuum(), 4, (-4, 4)).is_zero());
        assert!(arena.check_translation(&state(&[2, 2]), 3, (-6, 3)).is_zero());
        assert!(arena.check_translation(&state(&[4, 3]), 3, (-8, 3)).is_zero());
    }

    #[test]
    fn locality_bounds_match_pole_order() {
        let mut arena = FieldArena::new();
        let omega = State::omega();
        assert!(arena.check_locality(&omega, &omega, 4, 6, 6));
        assert!(!arena.check_locality(&omega, &omega, 3, 6, 6));
        for k in kets_at_level(4) {
            assert!(arena.check_locality(&State::vacuum(), &State::from_ket(k), 0, 4, 4));
        }
    }

    #[test]
    fn skew_symmetry_bounded() {
        let mut arena = FieldArena::new();
        let omega = State::omega();
        assert!(arena.skew_defect(&omega, &omega, 6).is_zero());
        assert!(arena.skew_defect(&omega, &state(&[3]), 6).is_zero());
        assert!(arena.skew_defect(&state(&[2, 2]), &omega, 5).is_zero());
    }
}
