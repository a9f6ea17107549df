//! The plane heat kernel used by the one-loop anomaly computation:
//!
//! ```text
//! K_L(z, w) = (1/(4 pi L)) exp(-|z - w|^2 / (4 L)) ,   L > 0 ,
//! ```
//!
//! a probability density in w for every fixed z. There is no CLI surface
//! for this; it backs the quadrature tests of the anomaly module.

use core::fmt;

/// Non-positive kernel time.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct BadKernelTime(pub f64);

impl fmt::Display for BadKernelTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "heat kernel time must be positive, got {}", self.0)
    }
}

impl std::error::Error for BadKernelTime {}

/// Scalar heat kernel factor at time l between points z and w of the plane.
pub fn heat_kernel(l: f64, z: (f64, f64), w: (f64, f64)) -> Result<f64, BadKernelTime> {
    if l <= 0.0 || !l.is_finite() {
        return Err(BadKernelTime(l));
    }
    let d2 = (z.0 - w.0).powi(2) + (z.1 - w.1).powi(2);
    Ok((-d2 / (4.0 * l)).exp() / (4.0 * core::f64::consts::PI * l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate2_rows;

    #[test]
    fn coincidence_value() {
        let z = (0.3, -1.1);
        let v = heat_kernel(1.0, z, z).unwrap();
        assert!((v - 1.0 / (4.0 * core::f64::consts::PI)).abs() < 1e-15);
        // Off-diagonal values sit strictly below the coincidence peak.
        for l in [0.1, 1.0, 7.5] {
            let peak = 1.0 / (4.0 * core::f64::consts::PI * l);
            let v = heat_kernel(l, z, (2.0, 0.5)).unwrap();
            assert!(0.0 < v && v < peak);
        }
        assert!(heat_kernel(0.0, z, z).is_err());
        assert!(heat_kernel(-2.0, z, z).is_err());
    }

    #[test]
    fn spreads_and_decays_with_time() {
        let z = (0.0, 0.0);
        let w = (3.0, 4.0);
        // At fixed separation the kernel vanishes in both limits; in between
        // it peaks near L = |z-w|^2/8 (2D).
        let small = heat_kernel(1e-3, z, w).unwrap();
        let mid = heat_kernel(25.0 / 8.0, z, w).unwrap();
        let large = heat_kernel(1e6, z, w).unwrap();
        assert!(small < mid && large < mid);
    }

    #[test]
    fn gaussian_normalization_by_quadrature() {
        // int K_L(z, w) d^2w = 1; the tail beyond radius 12 sqrt(L) is
        // below 1e-15.
        let z = (0.25, -0.5);
        for l in [0.5f64, 1.0, 2.0] {
            let half = 12.0 * l.sqrt();
            let r = integrate2_rows(
                |x| move |y: f64| (heat_kernel(l, z, (x, y)).unwrap(), 0.0),
                (z.0 - half, z.0 + half),
                (z.1 - half, z.1 + half),
                1e-9,
            );
            assert!((r.re - 1.0).abs() < 1e-6, "L = {l}: {}", r.re);
            assert!(r.error < 1e-6);
        }
    }
}
