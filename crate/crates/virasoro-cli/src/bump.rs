//! Radial bump profiles on annuli, with derivatives to third order.
//!
//! A bump lives on the annulus r < |z| < R as a function of u = |z|^2 only,
//! smooth and compactly supported in [r^2, R^2], normalized so that its area
//! integral over the plane is 1:
//!
//! ```text
//! int f(|z|^2) dx dy = pi * int f(u) du = 1 .
//! ```
//!
//! Third u-derivatives are needed downstream (three z-derivatives fall on
//! the profile), so evaluation returns a degree-3 jet computed by forward
//! automatic differentiation rather than finite differences.

use core::fmt;

use crate::quad::integrate;

/// Value and first three derivatives at a point; arithmetic is exact
/// truncated Taylor calculus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet3 {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet3 {
    pub const ZERO: Jet3 = Jet3 { f: 0.0, d1: 0.0, d2: 0.0, d3: 0.0 };

    pub fn constant(c: f64) -> Self {
        Jet3 { f: c, d1: 0.0, d2: 0.0, d3: 0.0 }
    }

    /// The identity jet u at a point, with respect to which d1..d3 are taken.
    pub fn variable(u: f64) -> Self {
        Jet3 { f: u, d1: 1.0, d2: 0.0, d3: 0.0 }
    }

    pub fn scale(self, s: f64) -> Self {
        Jet3 { f: s * self.f, d1: s * self.d1, d2: s * self.d2, d3: s * self.d3 }
    }

    pub fn powi(self, k: u32) -> Self {
        let mut out = Jet3::constant(1.0);
        for _ in 0..k {
            out = out * self;
        }
        out
    }

    /// Chain rule for exp: each derivative of e^f is e^f times a Bell
    /// polynomial in f', f'', f'''.
    pub fn exp(self) -> Self {
        let e = self.f.exp();
        Jet3 {
            f: e,
            d1: e * self.d1,
            d2: e * (self.d1 * self.d1 + self.d2),
            d3: e * (self.d1.powi(3) + 3.0 * self.d1 * self.d2 + self.d3),
        }
    }

    /// Chain rule for 1/f.
    pub fn recip(self) -> Self {
        let g = 1.0 / self.f;
        let g2 = g * g;
        Jet3 {
            f: g,
            d1: -self.d1 * g2,
            d2: (2.0 * self.d1 * self.d1 - self.f * self.d2) * g2 * g,
            d3: (-6.0 * self.d1.powi(3) + 6.0 * self.f * self.d1 * self.d2
                - self.f * self.f * self.d3)
                * g2 * g2,
        }
    }
}

impl core::ops::Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3 { f: self.f + o.f, d1: self.d1 + o.d1, d2: self.d2 + o.d2, d3: self.d3 + o.d3 }
    }
}

impl core::ops::Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self + o.scale(-1.0)
    }
}

/// Leibniz product rule through third order.
impl core::ops::Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        Jet3 {
            f: self.f * o.f,
            d1: self.d1 * o.f + self.f * o.d1,
            d2: self.d2 * o.f + 2.0 * self.d1 * o.d1 + self.f * o.d2,
            d3: self.d3 * o.f + 3.0 * self.d2 * o.d1 + 3.0 * self.d1 * o.d2 + self.f * o.d3,
        }
    }
}

/// The two smoothness families: the C-infinity mollifier exp(-1/(1-s^2))
/// and the C^5 polynomial (1-s^2)^6, both on the normalized coordinate
/// s in (-1, 1).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BumpFamily {
    Exp,
    Poly,
}

impl BumpFamily {
    /// Raw unnormalized profile jet in s; identically zero outside (-1, 1).
    fn raw(self, s: Jet3) -> Jet3 {
        let t = Jet3::constant(1.0) - s * s;
        match self {
            BumpFamily::Exp => {
                // Below this the value is under exp(-1000); returning the
                // zero jet avoids inf * 0 in the chain rule.
                if t.f < 1e-3 {
                    return Jet3::ZERO;
                }
                t.recip().scale(-1.0).exp()
            }
            BumpFamily::Poly => {
                if t.f <= 0.0 {
                    return Jet3::ZERO;
                }
                t.powi(6)
            }
        }
    }
}

/// Invalid bump geometry.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct BumpError {
    pub r: f64,
    pub big_r: f64,
}

impl fmt::Display for BumpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bump radii must satisfy 0 < r < R, got r = {}, R = {}", self.r, self.big_r)
    }
}

impl std::error::Error for BumpError {}

/// A normalized radial bump supported on r < |z| < R.
#[derive(Clone, Copy, Debug)]
pub struct BumpSpec {
    family: BumpFamily,
    u_min: f64,
    u_max: f64,
    norm: f64,
}

impl BumpSpec {
    /// Validates 0 < r < R and computes the normalization constant by 1D
    /// quadrature so that the plane integral of f(|z|^2) is 1.
    pub fn new(r: f64, big_r: f64, family: BumpFamily) -> Result<Self, BumpError> {
        if !(r > 0.0 && big_r > r && big_r.is_finite()) {
            return Err(BumpError { r, big_r });
        }
        let (u_min, u_max) = (r * r, big_r * big_r);
        let mut spec = BumpSpec { family, u_min, u_max, norm: 1.0 };
        let raw_mass = integrate(|u| spec.jet(u).f, u_min, u_max, 1e-13).value;
        spec.norm = 1.0 / (core::f64::consts::PI * raw_mass);
        Ok(spec)
    }

    pub fn family(&self) -> BumpFamily {
        self.family
    }

    /// Support in the u = |z|^2 coordinate.
    pub fn support(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    /// f(u) with derivatives in u through third order.
    pub fn jet(&self, u: f64) -> Jet3 {
        if u <= self.u_min || u >= self.u_max {
            return Jet3::ZERO;
        }
        let slope = 2.0 / (self.u_max - self.u_min);
        let s = Jet3 { f: (2.0 * u - self.u_min - self.u_max) * 0.5 * slope, d1: slope, d2: 0.0, d3: 0.0 };
        self.family.raw(s).scale(self.norm)
    }

    pub fn value(&self, u: f64) -> f64 {
        self.jet(u).f
    }

    /// Mass below u of the u-profile (not the plane integral), which climbs
    /// from 0 to 1/pi across the support.
    pub fn mass_below(&self, u: f64) -> f64 {
        if u <= self.u_min {
            return 0.0;
        }
        integrate(|s| self.value(s), self.u_min, u.min(self.u_max), 1e-13).value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet_close(a: Jet3, b: Jet3, tol: f64) -> bool {
        (a.f - b.f).abs() < tol
            && (a.d1 - b.d1).abs() < tol
            && (a.d2 - b.d2).abs() < tol
            && (a.d3 - b.d3).abs() < tol
    }

    #[test]
    fn jet_arithmetic_against_hand_derivatives() {
        // g(u) = u^3 at u = 2: (8, 12, 12, 6).
        let u = Jet3::variable(2.0);
        assert!(jet_close(u.powi(3), Jet3 { f: 8.0, d1: 12.0, d2: 12.0, d3: 6.0 }, 1e-12));
        // exp(u^2) at u = 1: f = e, f' = 2e, f'' = 6e, f''' = 20e.
        let e = 1.0f64.exp();
        let g = Jet3::variable(1.0).powi(2).exp();
        assert!(jet_close(g, Jet3 { f: e, d1: 2.0 * e, d2: 6.0 * e, d3: 20.0 * e }, 1e-12));
        // 1/u at u = 2: (1/2, -1/4, 1/4, -3/8).
        let r = Jet3::variable(2.0).recip();
        assert!(jet_close(r, Jet3 { f: 0.5, d1: -0.25, d2: 0.25, d3: -0.375 }, 1e-12));
    }

    #[test]
    fn jet_matches_finite_differences() {
        for family in [BumpFamily::Exp, BumpFamily::Poly] {
            let b = BumpSpec::new(1.0, 2.0, family).unwrap();
            let h = 1e-4;
            for &u in &[1.3, 2.2, 3.1, 3.8] {
                let jet = b.jet(u);
                let d1 = (b.value(u + h) - b.value(u - h)) / (2.0 * h);
                let d2 = (b.value(u + h) - 2.0 * b.value(u) + b.value(u - h)) / (h * h);
                let d3 = (b.value(u + 2.0 * h) - 2.0 * b.value(u + h) + 2.0 * b.value(u - h)
                    - b.value(u - 2.0 * h))
                    / (2.0 * h * h * h);
                assert!((jet.d1 - d1).abs() < 1e-5 * (1.0 + d1.abs()), "{family:?} d1 at {u}");
                assert!((jet.d2 - d2).abs() < 1e-4 * (1.0 + d2.abs()), "{family:?} d2 at {u}");
                assert!((jet.d3 - d3).abs() < 1e-2 * (1.0 + d3.abs()), "{family:?} d3 at {u}");
            }
        }
    }

    #[test]
    fn normalization_gives_unit_plane_mass() {
        for family in [BumpFamily::Exp, BumpFamily::Poly] {
            let b = BumpSpec::new(0.5, 1.5, family).unwrap();
            let (lo, hi) = b.support();
            let mass = integrate(|u| b.value(u), lo, hi, 1e-13).value;
            assert!((core::f64::consts::PI * mass - 1.0).abs() < 1e-10, "{family:?}");
            assert!((b.mass_below(hi + 1.0) - 1.0 / core::f64::consts::PI).abs() < 1e-10);
            assert_eq!(b.mass_below(lo), 0.0);
        }
    }

    #[test]
    fn support_is_sharp() {
        let b = BumpSpec::new(1.0, 2.0, BumpFamily::Exp).unwrap();
        assert_eq!(b.jet(0.9), Jet3::ZERO);
        assert_eq!(b.jet(1.0), Jet3::ZERO);
        assert_eq!(b.jet(4.0), Jet3::ZERO);
        assert!(b.value(2.5) > 0.0);
        assert!(BumpSpec::new(2.0, 1.0, BumpFamily::Exp).is_err());
        assert!(BumpSpec::new(0.0, 1.0, BumpFamily::Poly).is_err());
    }
}
