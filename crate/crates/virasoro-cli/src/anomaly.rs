//! The one-loop anomaly integral of the mollified free-field system and the
//! central-charge bookkeeping it feeds.
//!
//! The regulated integral is
//!
//! ```text
//! I(eps, L) = int_eps^L eps^2 t / (eps + t)^4 dt
//!           = 1/12 - eps^2/(2 (eps+L)^2) + eps^3/(3 (eps+L)^3) ,
//! ```
//!
//! exactly, for 0 < eps <= L; it tends to 1/12 as eps -> 0 with defect
//! bounded by eps^2/(2 L^2) + eps^3/(3 L^3). The factor 1/12 is the
//! coefficient of the defining central cocycle, and an n-component system
//! carries exactly n copies: central charge n. The constant chain around
//! 1/12 involves 1/(2 pi) and 2 pi factors that cancel; the audit record
//! keeps them itemized as exact (rational, power of pi) pairs.

use core::fmt;

use num_traits::Zero;
use virasoro::exact::rat::{rat, Rat};

use crate::quad::{integrate, QuadratureResult};

/// Invalid integration range: requires 0 < eps <= L.
/// Carries the offending endpoints already rendered, keeping the error small.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BadRange {
    pub eps: String,
    pub l: String,
}

impl fmt::Display for BadRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "anomaly integral needs 0 < eps <= L, got eps = {}, L = {}", self.eps, self.l)
    }
}

impl std::error::Error for BadRange {}

fn check_range(eps: &Rat, l: &Rat) -> Result<(), BadRange> {
    if eps <= &Rat::zero() || eps > l {
        return Err(BadRange { eps: eps.to_string(), l: l.to_string() });
    }
    Ok(())
}

/// Exact value of I(eps, L) through the closed antiderivative.
pub fn anomaly_integral_exact(eps: &Rat, l: &Rat) -> Result<Rat, BadRange> {
    check_range(eps, l)?;
    let s = eps + l;
    Ok(rat(1, 12) - rat(1, 2) * (eps / &s).pow(2) + rat(1, 3) * (eps / &s).pow(3))
}

/// The same integral by adaptive quadrature, for cross-checking the
/// antiderivative.
pub fn anomaly_integral_quadrature(eps: &Rat, l: &Rat, tol: f64) -> Result<QuadratureResult, BadRange> {
    check_range(eps, l)?;
    let e = eps.to_f64();
    let b = l.to_f64();
    let f = |t: f64| e * e * t / (e + t).powi(4);
    let mut q = integrate(f, e, b, tol);
    // Rounding the rational endpoints to f64 perturbs the integral by about
    // |f(endpoint)| * ulp(endpoint); fold that into the reported error.
    q.error += f64::EPSILON * (e.abs() * f(e).abs() + b.abs() * f(b).abs());
    Ok(q)
}

/// |I(eps, L) - 1/12| exactly. Always bounded by
/// eps^2/(2 L^2) + eps^3/(3 L^3) (see [`anomaly_defect_bound`]).
pub fn anomaly_limit_defect(eps: &Rat, l: &Rat) -> Result<Rat, BadRange> {
    Ok((anomaly_integral_exact(eps, l)? - rat(1, 12)).abs())
}

/// The closed bound on the defect.
pub fn anomaly_defect_bound(eps: &Rat, l: &Rat) -> Rat {
    rat(1, 2) * (eps / l).pow(2) + rat(1, 3) * (eps / l).pow(3)
}

/// One multiplicative step in the constant chain: coeff * pi^pi_power.
#[derive(Clone, PartialEq, Debug)]
pub struct ConstantFactor {
    pub label: &'static str,
    pub coeff: Rat,
    pub pi_power: i32,
}

/// The assembled central-charge record for the n-component system.
#[derive(Clone, PartialEq, Debug)]
pub struct ChargeAudit {
    pub components: u32,
    pub charge: u32,
    /// Product of the factor chain; the pi powers cancel, leaving 1/12.
    pub cocycle_coefficient: Rat,
    pub factors: Vec<ConstantFactor>,
}

/// Invalid component count.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BadComponentCount(pub i64);

impl fmt::Display for BadComponentCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component count must be >= 1, got {}", self.0)
    }
}

impl std::error::Error for BadComponentCount {}

/// Central charge of the n-component system, with the full constant audit
/// trail: each component contributes the t-integral limit 1/12 against the
/// defining cocycle, through a loop-measure 1/(2 pi) and an angular 2 pi
/// that cancel exactly.
pub fn beta_gamma_central_charge(n: i64) -> Result<ChargeAudit, BadComponentCount> {
    if n < 1 {
        return Err(BadComponentCount(n));
    }
    let factors = vec![
        ConstantFactor { label: "t-integral limit", coeff: rat(1, 12), pi_power: 0 },
        ConstantFactor { label: "loop measure", coeff: rat(1, 2), pi_power: -1 },
        ConstantFactor { label: "angular integral", coeff: rat(2, 1), pi_power: 1 },
    ];
    let mut coeff = Rat::from_int(1);
    let mut pi_power = 0i32;
    for f in &factors {
        coeff = coeff * &f.coeff;
        pi_power += f.pi_power;
    }
    assert_eq!(pi_power, 0, "pi factors must cancel in the cocycle coefficient");
    Ok(ChargeAudit {
        components: n as u32,
        charge: n as u32,
        cocycle_coefficient: coeff,
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        // Empty range.
        let l = rat(7, 3);
        assert_eq!(anomaly_integral_exact(&l, &l).unwrap(), Rat::zero());
        // I(1, 2) = 13/324 by the antiderivative.
        assert_eq!(anomaly_integral_exact(&rat(1, 1), &rat(2, 1)).unwrap(), rat(13, 324));
        // I(1/10, 10) exact and near 1/12.
        let v = anomaly_integral_exact(&rat(1, 10), &rat(10, 1)).unwrap();
        assert_eq!(v, rat(1, 12) - rat(1, 20402) + rat(1, 3090903));
        assert!((v.to_f64() - 0.0832846).abs() < 1e-7);
        // Range validation.
        assert!(anomaly_integral_exact(&rat(3, 1), &rat(2, 1)).is_err());
        assert!(anomaly_integral_exact(&Rat::zero(), &rat(2, 1)).is_err());
        assert!(anomaly_integral_exact(&rat(-1, 2), &rat(2, 1)).is_err());
    }

    #[test]
    fn quadrature_cross_check() {
        for (e, l) in [(1, 2), (1, 7), (3, 5), (2, 2), (1, 100)] {
            let eps = Rat::from_int(e);
            let l = Rat::from_int(l);
            let exact = anomaly_integral_exact(&eps, &l).unwrap().to_f64();
            let q = anomaly_integral_quadrature(&eps, &l, 1e-12).unwrap();
            assert!((q.value - exact).abs() <= q.error.max(1e-12), "({e},{l})");
        }
    }

    #[test]
    fn defect_and_bound() {
        // At eps = L the integral is empty, so the defect is the full 1/12.
        let l = rat(4, 1);
        assert_eq!(anomaly_limit_defect(&l, &l).unwrap(), rat(1, 12));
        // Example bound: defect(1/10, 10) < 1/20000.
        let d = anomaly_limit_defect(&rat(1, 10), &rat(10, 1)).unwrap();
        assert!(d < rat(1, 20000));
        // Bound holds exactly and the defect decreases monotonically along
        // eps = 1/2^k at fixed L = 1.
        let one = rat(1, 1);
        let mut last = rat(1, 1);
        for k in 1..=10 {
            let eps = rat(1, 1 << k);
            let d = anomaly_limit_defect(&eps, &one).unwrap();
            assert!(d <= anomaly_defect_bound(&eps, &one));
            assert!(d < last, "k = {k}");
            last = d;
        }
    }

    #[test]
    fn charge_audit() {
        for n in 1..=8 {
            let audit = beta_gamma_central_charge(n).unwrap();
            assert_eq!(audit.charge, n as u32);
            assert_eq!(audit.cocycle_coefficient, rat(1, 12));
            assert_eq!(audit.factors.len(), 3);
            let pi_total: i32 = audit.factors.iter().map(|f| f.pi_power).sum();
            assert_eq!(pi_total, 0);
        }
        assert!(beta_gamma_central_charge(0).is_err());
        assert!(beta_gamma_central_charge(-3).is_err());
    }
}
