//! Gauss-Legendre quadrature with dyadic refinement.
//!
//! Panels are halved (1, 2, 4, ... per axis) until two successive estimates
//! agree to the requested tolerance; the reported error is that last
//! difference. Cells evaluate in parallel, but sums are reduced pairwise in
//! a fixed index order, so results are bit-for-bit deterministic.

use rayon::prelude::*;

/// Nodes per panel and the refinement ceiling.
const ORDER: usize = 16;
const MAX_LEVEL_1D: u32 = 14;
const MAX_LEVEL_2D: u32 = 6;

/// A numeric integral estimate: the value, the difference of the last two
/// refinements as the error estimate, and how many integrand evaluations
/// were spent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub evals: u64,
}

/// As above for a complex-valued integrand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexQuadrature {
    pub re: f64,
    pub im: f64,
    pub error: f64,
    pub evals: u64,
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Sum in a fixed pairwise tree order; deterministic and accurate.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

fn panel_estimate_1d(f: &(impl Fn(f64) -> f64 + Sync), a: f64, b: f64, panels: usize) -> f64 {
    let nodes = gauss_legendre(ORDER);
    let h = (b - a) / panels as f64;
    let cells: Vec<f64> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let lo = a + p as f64 * h;
            let vals: Vec<f64> =
                nodes.iter().map(|&(x, w)| w * f(lo + 0.5 * h * (x + 1.0))).collect();
            0.5 * h * pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&cells)
}

/// Successive-difference estimates collapse to zero once refinement stops
/// changing the sum; the result still carries evaluation round-off, so the
/// reported error never claims better than a few ulps of the value.
fn round_off_floor(magnitude: f64) -> f64 {
    4.0 * f64::EPSILON * magnitude
}

/// Adaptive 1D integral of f over [a, b] to absolute tolerance tol.
pub fn integrate(f: impl Fn(f64) -> f64 + Sync, a: f64, b: f64, tol: f64) -> QuadratureResult {
    let mut prev = panel_estimate_1d(&f, a, b, 1);
    let mut evals = ORDER as u64;
    for level in 1..=MAX_LEVEL_1D {
        let panels = 1usize << level;
        let value = panel_estimate_1d(&f, a, b, panels);
        evals += (panels * ORDER) as u64;
        let error = (value - prev).abs().max(round_off_floor(value.abs()));
        if error <= tol {
            return QuadratureResult { value, error, evals };
        }
        prev = value;
    }
    QuadratureResult { value: prev, error: f64::INFINITY, evals }
}

/// Adaptive tensor-product integral over [ax, bx] x [ay, by] of a complex
/// integrand, organized by rows: `row(x)` does per-row setup once and
/// returns the function of y. Rows evaluate in parallel.
pub fn integrate2_rows<G>(
    row: impl Fn(f64) -> G + Sync,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    tol: f64,
) -> ComplexQuadrature
where
    G: Fn(f64) -> (f64, f64),
{
    let nodes = gauss_legendre(ORDER);
    let estimate = |panels: usize| -> (f64, f64) {
        let hx = (bx - ax) / panels as f64;
        let hy = (by - ay) / panels as f64;
        let rows: Vec<(f64, f64)> = (0..panels * ORDER)
            .into_par_iter()
            .map(|ix| {
                let (px, nx) = (ix / ORDER, ix % ORDER);
                let (x, wx) = nodes[nx];
                let x = ax + px as f64 * hx + 0.5 * hx * (x + 1.0);
                let fy = row(x);
                let mut re = Vec::with_capacity(panels * ORDER);
                let mut im = Vec::with_capacity(panels * ORDER);
                for py in 0..panels {
                    for &(y, wy) in &nodes {
                        let y = ay + py as f64 * hy + 0.5 * hy * (y + 1.0);
                        let (vr, vi) = fy(y);
                        re.push(wx * wy * vr);
                        im.push(wx * wy * vi);
                    }
                }
                (pairwise_sum(&re), pairwise_sum(&im))
            })
            .collect();
        let scale = 0.25 * hx * hy;
        let re: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let im: Vec<f64> = rows.iter().map(|r| r.1).collect();
        (scale * pairwise_sum(&re), scale * pairwise_sum(&im))
    };
    let mut prev = estimate(1);
    let mut evals = (ORDER * ORDER) as u64;
    for level in 1..=MAX_LEVEL_2D {
        let panels = 1usize << level;
        let value = estimate(panels);
        evals += (panels * panels * ORDER * ORDER) as u64;
        let error = (value.0 - prev.0)
            .hypot(value.1 - prev.1)
            .max(round_off_floor(value.0.hypot(value.1)));
        if error <= tol {
            return ComplexQuadrature { re: value.0, im: value.1, error, evals };
        }
        prev = value;
    }
    ComplexQuadrature { re: prev.0, im: prev.1, error: f64::INFINITY, evals }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        // ORDER-point Gauss-Legendre is exact through degree 2*ORDER - 1.
        let nodes = gauss_legendre(ORDER);
        let total: f64 = nodes.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        for deg in [1usize, 7, 17, 31] {
            let val: f64 = nodes.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((val - exact).abs() < 1e-13, "degree {deg}: {val} vs {exact}");
        }
    }

    #[test]
    fn one_dimensional_examples() {
        let r = integrate(|x| x.sin(), 0.0, core::f64::consts::PI, 1e-12);
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.error <= 1e-12);
        let r = integrate(|x| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert!((r.value - core::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn two_dimensional_product() {
        // int_0^1 int_0^1 x y dx dy = 1/4, imaginary part via a phase.
        let r = integrate2_rows(
            |x| move |y: f64| (x * y, 0.0),
            (0.0, 1.0),
            (0.0, 1.0),
            1e-12,
        );
        assert!((r.re - 0.25).abs() < 1e-12 && r.im.abs() < 1e-14);
        // int_0^{2pi} e^{i k theta} dtheta = 0 for k != 0.
        let r = integrate2_rows(
            |_x| move |theta: f64| ((3.0 * theta).cos(), (3.0 * theta).sin()),
            (0.0, 1.0),
            (0.0, 2.0 * core::f64::consts::PI),
            1e-10,
        );
        assert!(r.re.abs() < 1e-10 && r.im.abs() < 1e-10);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..101).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
