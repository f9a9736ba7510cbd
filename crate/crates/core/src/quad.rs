//! Gauss–Legendre rules and a bisecting adaptive integrator for complex
//! valued integrands on real intervals.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the rule to `f` on `[lo, hi]`.
    pub fn integrate<F>(&self, lo: f64, hi: f64, mut f: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x)? * *w;
        }
        Ok(acc * half)
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Settings for [`adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            order: 16,
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_depth: 40,
        }
    }
}

/// Integrates `f` over `[lo, hi]`, bisecting every interval whose rule
/// disagrees with the sum over its two halves.
pub fn adaptive<F>(lo: f64, hi: f64, opts: &AdaptiveOptions, mut f: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let rule = GaussLegendre::new(opts.order);
    let whole = rule.integrate(lo, hi, &mut f)?;
    let mut stack = vec![(lo, hi, whole, 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut worst = 0.0f64;
    let scale = whole.norm().max(1e-300);
    while let Some((a, b, coarse, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = rule.integrate(a, m, &mut f)?;
        let right = rule.integrate(m, b, &mut f)?;
        let fine = left + right;
        let diff = (fine - coarse).norm();
        let frac = (b - a) / (hi - lo);
        let tol = (opts.abs_tol + opts.rel_tol * scale) * frac.abs().max(1e-6).sqrt();
        if diff <= tol || (b - a).abs() < 1e-14 * (hi - lo).abs() {
            total += fine;
        } else if depth >= opts.max_depth {
            worst = worst.max(diff);
            total += fine;
        } else {
            stack.push((m, b, right, depth + 1));
            stack.push((a, m, left, depth + 1));
        }
    }
    if worst > 0.0 {
        return Err(Error::QuadratureNonConvergence(worst));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_are_symmetric() {
        for n in [1, 2, 5, 16, 33] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n} sum={s}");
            for i in 0..n {
                assert!((gl.nodes[i] + gl.nodes[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_for_polynomials_of_degree_2n_minus_1() {
        let gl = GaussLegendre::new(8);
        let v = gl
            .integrate(0.0, 2.0, |x| Ok(Complex64::new(x.powi(15), -x.powi(14))))
            .unwrap();
        assert!((v.re - 2f64.powi(16) / 16.0).abs() < 1e-9);
        assert!((v.im + 2f64.powi(15) / 15.0).abs() < 1e-9);
    }

    #[test]
    fn adaptive_handles_near_singular_integrand() {
        // integral of 1/(x - i d) over [-1,1] = log((1 - i d)/(-1 - i d))
        let d = 1e-4;
        let pole = Complex64::new(0.0, d);
        let exact = ((Complex64::new(1.0, 0.0) - pole) / (Complex64::new(-1.0, 0.0) - pole)).ln();
        let v = adaptive(-1.0, 1.0, &AdaptiveOptions::default(), |x| {
            Ok(1.0 / (Complex64::new(x, 0.0) - pole))
        })
        .unwrap();
        assert!((v - exact).norm() < 1e-11, "{v} vs {exact}");
    }
}
