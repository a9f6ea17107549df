#![cfg_attr(not(feature = "std"), no_std)]

//! Exact computation in the Virasoro world: the mode algebra and its
//! universal envelope, the vacuum vertex algebra with bounded axiom checks,
//! stress-tensor correlators on the sphere, and Chevalley-Eilenberg homology
//! of finite-dimensional Lie algebras - everything over arbitrary-precision
//! rationals (with the central charge kept symbolic as a polynomial variable).
//!
//! Layers, bottom up:
//!
//! * [`exact`] - rationals, polynomials in c, truncated Laurent series,
//!   sparse multivariate polynomials;
//! * [`witt`] - Laurent vector fields, their bracket, the residue cocycle
//!   (1/12) Res f''' g;
//! * [`schwarzian`] - formal coordinate changes, S(f), Mobius expansions;
//! * [`pbw`] - modes L_n, the bracket with central term, PBW straightening
//!   in U(Vir);
//! * [`vacuum`] - the vacuum module with partition basis, mode action,
//!   graded dimensions, character;
//! * [`vertex`] - reconstructed fields Y(v,z), OPE extraction, vacuum /
//!   translation / locality checks at explicit caps;
//! * [`correlators`] - exact n-point functions of the stress field with
//!   Ward and symmetry verifiers;
//! * [`homology`] - Chevalley-Eilenberg complexes, Betti numbers, and the
//!   genus tables they assemble into.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion CLI
//! crate carries IO, JSON, and the numeric quadrature audits.

extern crate alloc;

pub mod correlators;
pub mod exact;
pub mod homology;
pub mod pbw;
pub mod schwarzian;
pub mod vacuum;
pub mod vertex;
pub mod witt;
