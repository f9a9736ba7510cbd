//! Complex log-gamma, digamma and the modified gamma function
//!
//! ```text
//! Λ(w) = e^w Γ(w) / (√(2π) w^(w - 1/2))
//! ```
//!
//! together with its logarithmic derivative. `log_gamma` is the branch that
//! is analytic on the plane cut along `(-∞, 0]` and real on the positive axis;
//! `log_lambda` inherits it and tends to zero at infinity in the cut plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use crate::error::{Error, Result};

/// `B_{2k}` for `k = 1..=15`.
const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Terms of the Stirling series used once `|w| >= STIRLING_RADIUS`.
const STIRLING_TERMS: usize = 10;
const STIRLING_RADIUS: f64 = 15.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

/// Which cut the multivalued functions use and how close to it an argument
/// may come.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPolicy {
    /// Reject arguments within `margin` of the cut. When false, such
    /// arguments are evaluated as the limit from the upper half-plane.
    pub principal_only: bool,
    pub cut_axis: CutAxis,
    /// Minimum `|arg(-w)|` for an argument to count as off the cut.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutAxis {
    NegativeReal,
}

impl Default for BranchPolicy {
    fn default() -> Self {
        Self {
            principal_only: true,
            cut_axis: CutAxis::NegativeReal,
            margin: 1e-8,
        }
    }
}

impl BranchPolicy {
    /// Checks `w` against the cut; returns the argument to evaluate at.
    pub fn admit(&self, w: Complex64) -> Result<Complex64> {
        check_pole(w)?;
        if w.re < 0.0 && (-w).arg().abs() < self.margin {
            if self.principal_only {
                return Err(Error::BranchCutError(w));
            }
            return Ok(Complex64::new(w.re, 0.0));
        }
        if w == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleError(w));
        }
        Ok(w)
    }
}

fn check_pole(w: Complex64) -> Result<()> {
    if w.im == 0.0 && w.re <= 0.0 && w.re == w.re.round() {
        return Err(Error::PoleError(w));
    }
    Ok(())
}

fn non_finite(w: Complex64) -> Error {
    Error::NonFiniteEvaluation {
        location: format!("w = {w}"),
    }
}

/// Number of unit shifts needed before the Stirling series is accurate.
fn shift_count(w: Complex64) -> usize {
    let mut n = 0usize;
    let mut z = w;
    while z.re < 0.0 || z.norm() < STIRLING_RADIUS {
        z += 1.0;
        n += 1;
    }
    n
}

/// `Σ_k B_{2k} / (2k (2k-1) w^{2k-1})`, the asymptotic series of `log Λ`.
fn stirling_tail(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().take(STIRLING_TERMS).enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        acc += pow * (b / (m * (m - 1.0)));
        pow *= inv2;
    }
    acc
}

/// `Σ_k B_{2k} / (2k w^{2k})`, so that `ψ(w) ~ Log w - 1/(2w) - (this)`.
fn digamma_tail(w: Complex64) -> Complex64 {
    let inv2 = (w * w).inv();
    let mut pow = inv2;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().take(STIRLING_TERMS).enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        acc += pow * (b / m);
        pow *= inv2;
    }
    acc
}

/// Principal-branch `log Γ(w)`.
pub fn log_gamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    let n = shift_count(w);
    let z = w + n as f64;
    let mut acc = (z - 0.5) * z.ln() - z + HALF_LN_2PI + stirling_tail(z);
    for k in 0..n {
        acc -= (w + k as f64).ln();
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(non_finite(w));
    }
    Ok(acc)
}

/// `ψ(w) = Γ'(w)/Γ(w)`.
pub fn digamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    let n = shift_count(w);
    let z = w + n as f64;
    let mut acc = z.ln() - 0.5 * z.inv() - digamma_tail(z);
    for k in 0..n {
        acc -= (w + k as f64).inv();
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(non_finite(w));
    }
    Ok(acc)
}

/// `log Λ(w)` with the default [`BranchPolicy`].
pub fn log_lambda(w: Complex64) -> Result<Complex64> {
    log_lambda_with(w, &BranchPolicy::default())
}

pub fn log_lambda_with(w: Complex64, policy: &BranchPolicy) -> Result<Complex64> {
    let w = policy.admit(w)?;
    let n = shift_count(w);
    let v = if n == 0 {
        stirling_tail(w)
    } else {
        // log Λ(w) = log Λ(w + n) - n + (w + n - 1/2) Log(w + n)
        //            - (w - 1/2) Log w - Σ_{k<n} Log(w + k)
        let z = w + n as f64;
        let mut acc = stirling_tail(z) - n as f64 + (z - 0.5) * z.ln() - (w - 0.5) * w.ln();
        for k in 0..n {
            acc -= (w + k as f64).ln();
        }
        acc
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(non_finite(w));
    }
    Ok(v)
}

/// `d/dw log Λ(w) = ψ(w) - Log w + 1/(2w)` with the default policy.
pub fn dlog_lambda(w: Complex64) -> Result<Complex64> {
    dlog_lambda_with(w, &BranchPolicy::default())
}

pub fn dlog_lambda_with(w: Complex64, policy: &BranchPolicy) -> Result<Complex64> {
    let w = policy.admit(w)?;
    let n = shift_count(w);
    let v = if n == 0 {
        -digamma_tail(w)
    } else {
        let z = w + n as f64;
        let mut acc = -digamma_tail(z) + z.ln() - 0.5 * z.inv() - w.ln() + 0.5 * w.inv();
        for k in 0..n {
            acc -= (w + k as f64).inv();
        }
        acc
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(non_finite(w));
    }
    Ok(v)
}

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_at_one_and_half() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v - c(0.5 * PI.ln(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn poles_are_rejected() {
        for w in [0.0, -1.0, -7.0] {
            assert_eq!(log_gamma(c(w, 0.0)), Err(Error::PoleError(c(w, 0.0))));
            assert!(matches!(digamma(c(w, 0.0)), Err(Error::PoleError(_))));
            assert!(matches!(log_lambda(c(w, 0.0)), Err(Error::PoleError(_))));
        }
    }

    #[test]
    fn cut_is_rejected_unless_allowed() {
        let w = c(-2.5, 1e-12);
        assert!(matches!(log_lambda(w), Err(Error::BranchCutError(_))));
        let lax = BranchPolicy {
            principal_only: false,
            ..Default::default()
        };
        let above = log_lambda_with(c(-2.5, 1e-6), &BranchPolicy::default()).unwrap();
        let on = log_lambda_with(w, &lax).unwrap();
        assert!((on - above).norm() < 1e-4);
    }

    #[test]
    fn digamma_recurrence() {
        for w in [c(0.3, 0.2), c(-3.7, 1.5), c(12.0, -40.0), c(2.0, 0.0)] {
            let d = digamma(w + 1.0).unwrap() - digamma(w).unwrap() - w.inv();
            assert!(d.norm() < 1e-13, "w={w} d={d}");
        }
    }

    #[test]
    fn digamma_at_one() {
        let v = digamma(c(1.0, 0.0)).unwrap();
        assert!((v.re + EULER_GAMMA).abs() < 1e-14 && v.im.abs() < 1e-16);
    }

    #[test]
    fn log_lambda_closed_forms() {
        let one = log_lambda(c(1.0, 0.0)).unwrap();
        assert!((one - c(1.0 - HALF_LN_2PI, 0.0)).norm() < 1e-14);
        assert!((one.exp().re - 1.084_437_551).abs() < 1e-9);
        let half = log_lambda(c(0.5, 0.0)).unwrap();
        assert!((half - c(0.5 - 0.5 * 2f64.ln(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dlog_lambda_at_one() {
        let v = dlog_lambda(c(1.0, 0.0)).unwrap();
        assert!((v - c(0.5 - EULER_GAMMA, 0.0)).norm() < 1e-14);
    }
}
