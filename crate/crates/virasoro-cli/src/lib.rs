//! Numeric and IO companion to the [`virasoro`] core: adaptive quadrature,
//! radial bump profiles, the one-loop anomaly integrals, the annulus
//! central-term audit, the heat kernel, and (in the binary) a JSON CLI over
//! both crates.
//!
//! The core crate never touches floats; everything approximate lives here,
//! and every approximate result carries an explicit error estimate.

pub use virasoro;

pub mod annulus;
pub mod anomaly;
pub mod bump;
pub mod heat;
pub mod quad;
