//! Uncoupled BPS structures and their tau-functions.
//!
//! The lattice has basis `γ_1..γ_2d` with `⟨γ_i, γ_j⟩ = 0` unless
//! `|i - j| = d`, and every active charge lies in the span of the first
//! `d` basis vectors. The solution of the Riemann–Hilbert problem on the
//! section `ξ(γ_i) = 1` is `x_i = -z_i/ε + y_i` with `y_i = 0` for `i ≤ d`
//! and
//!
//! ```text
//! y_{i+d} = c_i Σ_k Ω(k) k_i log Λ(Z(k) / 2πiε),    c_i = ⟨γ_i, γ_{i+d}⟩.
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forms::{
    d_residual, integrate_one_form_adaptive, max_abs, ChartPoint, OneFormField, PathQuadrature,
    Polyline, PotentialChoice, Theta0Choice, Theta1Choice, ThetaIChoice,
};
use crate::report::{TauReport, TauSample};
use crate::specfun::{dlog_lambda_with, log_lambda_with, BranchPolicy};

pub const CHART: &str = "z";

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// An active charge `Σ k_p γ_p` with its BPS invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Charge {
    pub k: Vec<i64>,
    pub omega: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawStructure")]
pub struct UncoupledBpsStructure {
    pub d: usize,
    pub pairing: Vec<i64>,
    pub support: Vec<Charge>,
}

#[derive(Deserialize)]
struct RawStructure {
    d: usize,
    pairing: Vec<i64>,
    support: Vec<Charge>,
}

impl TryFrom<RawStructure> for UncoupledBpsStructure {
    type Error = Error;

    fn try_from(r: RawStructure) -> Result<Self> {
        Self::new(r.d, r.pairing, r.support)
    }
}

impl UncoupledBpsStructure {
    pub fn new(d: usize, pairing: Vec<i64>, support: Vec<Charge>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidStructure(m));
        if d == 0 {
            return bad("d must be positive".into());
        }
        if pairing.len() != d {
            return bad(format!("pairing has {} entries, expected {d}", pairing.len()));
        }
        if pairing.contains(&0) {
            return bad("pairing entries must be nonzero".into());
        }
        for ch in &support {
            if ch.k.len() != d {
                return bad(format!("charge {:?} does not have {d} components", ch.k));
            }
            if ch.k.iter().all(|&v| v == 0) {
                return bad("the zero charge cannot be active".into());
            }
        }
        for (i, ch) in support.iter().enumerate() {
            if support[..i].iter().any(|o| o.k == ch.k) {
                return bad(format!("charge {:?} listed twice", ch.k));
            }
            let neg: Vec<i64> = ch.k.iter().map(|v| -v).collect();
            match support.iter().find(|o| o.k == neg) {
                Some(o) if o.omega == ch.omega => {}
                Some(_) => return bad(format!("Ω({:?}) differs from Ω of its negative", ch.k)),
                None => return bad(format!("charge {:?} has no partner -k", ch.k)),
            }
        }
        Ok(Self {
            d,
            pairing,
            support,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidStructure(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure serialises")
    }

    pub fn rank(&self) -> usize {
        2 * self.d
    }

    /// `ω_{i,i+d} = -1/(2πi c_i)`.
    pub fn omega(&self, i: usize) -> Complex64 {
        -(two_pi_i() * self.pairing[i] as f64).inv()
    }

    /// `η_{i,i+d} = 2πi c_i`.
    pub fn eta(&self, i: usize) -> Complex64 {
        two_pi_i() * self.pairing[i] as f64
    }

    /// Full antisymmetric `ω_{pq}` on the rank `2d` lattice.
    pub fn omega_matrix(&self) -> Vec<Vec<Complex64>> {
        let n = self.rank();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..self.d {
            m[i][i + self.d] = self.omega(i);
            m[i + self.d][i] = -self.omega(i);
        }
        m
    }

    fn active(&self) -> impl Iterator<Item = &Charge> {
        self.support.iter().filter(|c| c.omega != 0)
    }
}

/// Truncated resolved-conifold structure: charges `±β + nδ` (`|n| ≤ N`)
/// with `Ω = 1` and `±δ` with `Ω = -2`, in the basis `(β, δ)` completed by
/// dual charges with pairing `c`.
pub fn conifold_truncation(n: usize, pairing_c: i64) -> UncoupledBpsStructure {
    let n = n.max(1) as i64;
    let mut support = Vec::new();
    for sign in [1, -1] {
        for m in -n..=n {
            support.push(Charge {
                k: vec![sign, m],
                omega: 1,
            });
        }
    }
    support.push(Charge { k: vec![0, 1], omega: -2 });
    support.push(Charge { k: vec![0, -1], omega: -2 });
    UncoupledBpsStructure::new(2, vec![pairing_c; 2], support).expect("conifold structure is valid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralChargePoint {
    pub z: Vec<Complex64>,
    pub epsilon: Complex64,
}

impl CentralChargePoint {
    pub fn new(z: Vec<Complex64>, epsilon: Complex64) -> Self {
        Self { z, epsilon }
    }
}

/// Per-charge data at a point: `w_k` and the two log Λ values.
struct Active {
    k: Vec<i64>,
    omega: f64,
    w: Complex64,
    log_lambda: Complex64,
    dlog_lambda: Complex64,
}

fn central_charge(k: &[i64], z: &[Complex64]) -> Complex64 {
    k.iter().zip(z).map(|(&kp, zp)| zp * kp as f64).sum()
}

fn check_point(bps: &UncoupledBpsStructure, pt: &CentralChargePoint) -> Result<()> {
    if pt.z.len() != bps.rank() {
        return Err(Error::DimensionMismatch {
            expected: bps.rank(),
            found: pt.z.len(),
        });
    }
    if pt.epsilon.norm() == 0.0 || !pt.epsilon.is_finite() {
        return Err(Error::InvalidInput("epsilon must be finite and nonzero".into()));
    }
    Ok(())
}

fn evaluate_active(
    bps: &UncoupledBpsStructure,
    pt: &CentralChargePoint,
    policy: &BranchPolicy,
) -> Result<Vec<Active>> {
    check_point(bps, pt)?;
    let scale = (two_pi_i() * pt.epsilon).inv();
    bps.active()
        .map(|ch| {
            let zk = central_charge(&ch.k, &pt.z);
            if zk.norm() == 0.0 {
                return Err(Error::DegenerateCharge(ch.k.clone()));
            }
            let w = zk * scale;
            Ok(Active {
                k: ch.k.clone(),
                omega: ch.omega as f64,
                w,
                log_lambda: log_lambda_with(w, policy)?,
                dlog_lambda: dlog_lambda_with(w, policy)?,
            })
        })
        .collect()
}

/// `y_1..y_2d` at `pt`.
pub fn y_components(bps: &UncoupledBpsStructure, pt: &CentralChargePoint) -> Result<Vec<Complex64>> {
    let act = evaluate_active(bps, pt, &BranchPolicy::default())?;
    Ok(y_from(bps, &act))
}

fn y_from(bps: &UncoupledBpsStructure, act: &[Active]) -> Vec<Complex64> {
    let d = bps.d;
    let mut y = vec![Complex64::new(0.0, 0.0); 2 * d];
    for i in 0..d {
        let s: Complex64 = act
            .iter()
            .map(|a| a.log_lambda * (a.omega * a.k[i] as f64))
            .sum();
        y[i + d] = s * bps.pairing[i] as f64;
    }
    y
}

/// `x_i = -z_i/ε + y_i`.
pub fn x_components(bps: &UncoupledBpsStructure, pt: &CentralChargePoint) -> Result<Vec<Complex64>> {
    let y = y_components(bps, pt)?;
    Ok(pt.z.iter().zip(&y).map(|(z, y)| -z / pt.epsilon + y).collect())
}

/// Analytic derivatives of `y_{i+d}`, `i < d`: `(∂/∂z_j for j < 2d, ∂/∂ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct YDerivatives {
    /// `dz[i][j] = ∂y_{i+d}/∂z_j`; zero for `j ≥ d`.
    pub dz: Vec<Vec<Complex64>>,
    /// `deps[i] = ∂y_{i+d}/∂ε`.
    pub deps: Vec<Complex64>,
}

pub fn y_derivatives(bps: &UncoupledBpsStructure, pt: &CentralChargePoint) -> Result<YDerivatives> {
    let act = evaluate_active(bps, pt, &BranchPolicy::default())?;
    Ok(y_derivatives_from(bps, pt, &act))
}

fn y_derivatives_from(bps: &UncoupledBpsStructure, pt: &CentralChargePoint, act: &[Active]) -> YDerivatives {
    let d = bps.d;
    let scale = (two_pi_i() * pt.epsilon).inv();
    let mut dz = vec![vec![Complex64::new(0.0, 0.0); 2 * d]; d];
    let mut deps = vec![Complex64::new(0.0, 0.0); d];
    for i in 0..d {
        let c = bps.pairing[i] as f64;
        for a in act {
            let t = a.dlog_lambda * (a.omega * a.k[i] as f64 * c);
            for j in 0..d {
                dz[i][j] += t * scale * a.k[j] as f64;
            }
            // dw/dε = -w/ε
            deps[i] -= t * a.w / pt.epsilon;
        }
    }
    YDerivatives { dz, deps }
}

/// `∂ log τ / ∂z_i = -ω_{i,i+d} ∂y_{i+d}/∂ε` for `i < d`, zero otherwise.
pub fn dlog_tau_gradient(bps: &UncoupledBpsStructure, pt: &CentralChargePoint) -> Result<Vec<Complex64>> {
    let act = evaluate_active(bps, pt, &BranchPolicy::default())?;
    let der = y_derivatives_from(bps, pt, &act);
    let mut g = vec![Complex64::new(0.0, 0.0); bps.rank()];
    for i in 0..bps.d {
        g[i] = -bps.omega(i) * der.deps[i];
    }
    Ok(g)
}

/// Symmetry matrix `ω_i ∂y_{i+d}/∂z_j - ω_j ∂y_{j+d}/∂z_i` and homogeneity
/// vector `Σ_j z_j ∂y_{i+d}/∂z_j + ε ∂y_{i+d}/∂ε`.
pub fn relation_residuals(
    bps: &UncoupledBpsStructure,
    pt: &CentralChargePoint,
) -> Result<(Vec<Vec<Complex64>>, Vec<Complex64>)> {
    let der = y_derivatives(bps, pt)?;
    Ok(relations_from(bps, pt, &der))
}

fn relations_from(
    bps: &UncoupledBpsStructure,
    pt: &CentralChargePoint,
    der: &YDerivatives,
) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let d = bps.d;
    let sym = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| bps.omega(i) * der.dz[i][j] - bps.omega(j) * der.dz[j][i])
                .collect()
        })
        .collect();
    let hom = (0..d)
        .map(|i| {
            let s: Complex64 = (0..2 * d).map(|j| pt.z[j] * der.dz[i][j]).sum();
            s + pt.epsilon * der.deps[i]
        })
        .collect();
    (sym, hom)
}

/// Largest modulus among the entries of [`relation_residuals`].
pub fn max_relation_residual(bps: &UncoupledBpsStructure, pt: &CentralChargePoint) -> Result<f64> {
    let (sym, hom) = relation_residuals(bps, pt)?;
    Ok(max_abs(&sym).max(hom.iter().fold(0.0, |a, z| a.max(z.norm()))))
}

/// The 1-form `Σ_i ∂_{z_i} log τ dz_i` on the slice at fixed `ε`.
pub fn dlog_tau_form(bps: &UncoupledBpsStructure, epsilon: Complex64) -> OneFormField {
    let bps = bps.clone();
    OneFormField::new(CHART, bps.rank(), true, move |z| {
        dlog_tau_gradient(&bps, &CentralChargePoint::new(z.to_vec(), epsilon))
    })
}

/// Constant fibre coordinates of the section `M ⊂ T_M` on which the
/// tau-function is evaluated. `θ_i = 0` for `i ≤ d` is forced by
/// `ξ(γ_i) = 1`; `upper` holds `θ_{d+1..2d}`, which shift `x_{i+d}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Section {
    pub upper: Vec<Complex64>,
}

impl Section {
    fn upper(&self, d: usize) -> Result<Vec<Complex64>> {
        if self.upper.is_empty() {
            return Ok(vec![Complex64::new(0.0, 0.0); d]);
        }
        if self.upper.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.upper.len(),
            });
        }
        Ok(self.upper.clone())
    }
}

/// `dlog τ = ε⁻² Θ₀ + ε⁻¹ 2iΘ_I - Θ₁` pulled back to the section, written
/// in the chart `z_1..z_2d` for the given choice of potentials.
pub fn definition_form(
    bps: &UncoupledBpsStructure,
    epsilon: Complex64,
    choice: PotentialChoice,
    section: &Section,
) -> Result<OneFormField> {
    let theta = section.upper(bps.d)?;
    let bps = bps.clone();
    let closed = true;
    Ok(OneFormField::new(CHART, bps.rank(), closed, move |z| {
        let d = bps.d;
        let pt = CentralChargePoint::new(z.to_vec(), epsilon);
        let act = evaluate_active(&bps, &pt, &BranchPolicy::default())?;
        let y = y_from(&bps, &act);
        let der = y_derivatives_from(&bps, &pt, &act);
        let e1 = epsilon.inv();
        let e2 = e1 * e1;
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * d];
        for i in 0..d {
            let w = bps.omega(i);
            // ε⁻² Θ₀
            match choice.theta0 {
                Theta0Choice::Canonical => {
                    c[i + d] += e2 * 0.5 * w * z[i];
                    c[i] -= e2 * 0.5 * w * z[i + d];
                }
                Theta0Choice::Liouville => c[i] -= e2 * w * z[i + d],
                Theta0Choice::Hamiltonian => c[i + d] += e2 * w * z[i],
            }
            // ε⁻¹ 2iΘ_I; the standard potential vanishes on the section
            if choice.theta_i == ThetaIChoice::Flipped {
                c[i] += e1 * w * theta[i];
            }
            // -Θ₁ with x_i = -z_i/ε, x_{i+d} = -z_{i+d}/ε + θ_{i+d} + y_{i+d}
            let xi = -z[i] * e1;
            let xu = -z[i + d] * e1 + theta[i] + y[i + d];
            let mut dxu = der.dz[i].clone();
            dxu[i + d] -= e1;
            let (a, b) = match choice.theta1 {
                Theta1Choice::Full => (0.5, 0.5),
                Theta1Choice::Polarized => (1.0, 0.0),
            };
            // -(a ω x_i dx_{i+d} - b ω x_{i+d} dx_i)
            for (j, dj) in dxu.iter().enumerate() {
                c[j] -= a * w * xi * dj;
            }
            c[i] += b * w * xu * (-e1);
        }
        Ok(c)
    }))
}

/// Scalars relating the potential choices at a point of the section: the
/// values that [`crate::forms::shift_by_potential_change`] consumes.
pub fn shift_data(
    bps: &UncoupledBpsStructure,
    pt: &CentralChargePoint,
    section: &Section,
) -> Result<crate::forms::ShiftData> {
    let theta = section.upper(bps.d)?;
    let y = y_components(bps, pt)?;
    let d = bps.d;
    let e1 = pt.epsilon.inv();
    let mut ie_lambda = Complex64::new(0.0, 0.0);
    let mut omega_xx = Complex64::new(0.0, 0.0);
    let mut k = Complex64::new(0.0, 0.0);
    for i in 0..d {
        let w = bps.omega(i);
        ie_lambda += w * pt.z[i] * pt.z[i + d];
        let xi = -pt.z[i] * e1;
        let xu = -pt.z[i + d] * e1 + theta[i] + y[i + d];
        omega_xx += w * xi * xu;
        k += w * pt.z[i] * theta[i];
    }
    Ok(crate::forms::ShiftData {
        half_ie_lambda: Some(0.5 * ie_lambda * e1 * e1),
        half_omega_xx: Some(0.5 * omega_xx),
        flip_k: Some(k * e1),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauOptions {
    pub choice: PotentialChoice,
    pub section: Section,
    pub quadrature: PathQuadrature,
    /// Base finite-difference step for the closedness samples.
    pub closedness_step: f64,
}

impl Default for TauOptions {
    fn default() -> Self {
        Self {
            choice: PotentialChoice::HAMILTONIAN_POLARIZED,
            section: Section::default(),
            quadrature: PathQuadrature::default(),
            closedness_step: 1e-5,
        }
    }
}

/// Rejects segments along which some `Z(k)` vanishes or some `w_k` crosses
/// the cut of log Λ.
fn check_segment(
    bps: &UncoupledBpsStructure,
    a: &[Complex64],
    b: &[Complex64],
    epsilon: Complex64,
) -> Result<()> {
    let scale = (two_pi_i() * epsilon).inv();
    for ch in bps.active() {
        let w0 = central_charge(&ch.k, a) * scale;
        let w1 = central_charge(&ch.k, b) * scale;
        let dw = w1 - w0;
        // closest approach of w(s) = w0 + s dw to the origin
        let s = if dw.norm_sqr() > 0.0 {
            (-(w0.conj() * dw).re / dw.norm_sqr()).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let wmin = w0 + dw * s;
        if wmin.norm() <= 1e-12 * (1.0 + w0.norm()) {
            return Err(Error::PathThroughDegenerateLocus(format!(
                "Z({:?}) vanishes on the path",
                ch.k
            )));
        }
        // crossing of the negative real axis
        if dw.im != 0.0 {
            let t = -w0.im / dw.im;
            if (0.0..=1.0).contains(&t) && (w0.re + t * dw.re) < 0.0 {
                return Err(Error::BranchCutError(w0 + dw * t));
            }
        }
    }
    Ok(())
}

/// `log τ` at the end of `path`, normalised to zero at its start, for the
/// potentials in `opts.choice`.
///
/// The integrand is the definition of dlog τ for that choice. For the
/// Hamiltonian/polarised choice it is also compared against the closed
/// form gradient at every vertex.
pub fn log_tau(
    bps: &UncoupledBpsStructure,
    path: &Polyline,
    epsilon: Complex64,
    opts: &TauOptions,
) -> Result<TauReport> {
    if path.chart() != CHART {
        return Err(Error::ChartMismatch {
            expected: CHART.into(),
            found: path.chart().into(),
        });
    }
    for (a, b) in path.segments() {
        check_segment(bps, a, b, epsilon)?;
    }
    let form = definition_form(bps, epsilon, opts.choice, &opts.section)?;
    let gradient = dlog_tau_form(bps, epsilon);
    let mut report = TauReport::new("uncoupled-bps", CHART, path.vertices()[0].clone(), epsilon);
    report.choice = Some(opts.choice);
    report.notes.push("log tau is normalised to 0 at the first path vertex".into());

    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, v) in path.vertices().iter().enumerate() {
        if idx > 0 {
            let seg = Polyline::from_coords(CHART, vec![path.vertices()[idx - 1].clone(), v.clone()])?;
            acc += integrate_one_form_adaptive(&form, &seg, &opts.quadrature)?;
        }
        let pt = CentralChargePoint::new(v.clone(), epsilon);
        report.record("relations", max_relation_residual(bps, &pt)?);
        let cp = ChartPoint::new(CHART, v.clone());
        report.record("closedness", max_abs(&d_residual(&gradient, &cp, opts.closedness_step)?));
        if opts.choice == PotentialChoice::HAMILTONIAN_POLARIZED && opts.section.upper.iter().all(|t| t.norm() == 0.0) {
            let f = form.evaluate(&cp)?;
            let g = gradient.evaluate(&cp)?;
            let diff = f.iter().zip(&g).fold(0.0f64, |m, (p, q)| m.max((p - q).norm()));
            report.record("definition_vs_gradient", diff);
        }
        let mut s = TauSample::default();
        for (j, z) in v.iter().enumerate() {
            s.push(&format!("z{}", j + 1), *z);
        }
        s.push("logtau", acc);
        report.samples.push(s);
    }
    report.end_point = path.vertices().last().unwrap().clone();
    report.log_tau = acc;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn doubled_a1() -> UncoupledBpsStructure {
        UncoupledBpsStructure::new(
            1,
            vec![1],
            vec![Charge { k: vec![1], omega: 1 }, Charge { k: vec![-1], omega: 1 }],
        )
        .unwrap()
    }

    #[test]
    fn omega_eta_product_is_minus_one() {
        let b = conifold_truncation(2, 3);
        for i in 0..b.d {
            assert!((b.omega(i) * b.eta(i) + 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn conifold_n1_has_six_charges() {
        let b = conifold_truncation(1, 1);
        assert_eq!(b.support.len(), 8);
        let n1: Vec<_> = b.support.iter().filter(|c| c.k[0] != 0 && c.k[1].abs() <= 1).collect();
        assert_eq!(n1.len(), 6);
        assert!(b.support.iter().any(|c| c.k == vec![0, 1] && c.omega == -2));
    }

    #[test]
    fn validation_rejects_asymmetric_support() {
        let r = UncoupledBpsStructure::new(1, vec![1], vec![Charge { k: vec![1], omega: 1 }]);
        assert!(matches!(r, Err(Error::InvalidStructure(_))));
        let r = UncoupledBpsStructure::new(1, vec![0], vec![]);
        assert!(matches!(r, Err(Error::InvalidStructure(_))));
    }

    #[test]
    fn empty_support_gives_vacuous_values() {
        let b = UncoupledBpsStructure::new(2, vec![1, 2], vec![]).unwrap();
        let pt = CentralChargePoint::new(vec![c(1.0, 1.0), c(0.5, 0.0), c(2.0, 0.0), c(0.0, 1.0)], c(1.0, 0.0));
        assert!(y_components(&b, &pt).unwrap().iter().all(|y| y.norm() == 0.0));
        let x = x_components(&b, &pt).unwrap();
        for (x, z) in x.iter().zip(&pt.z) {
            assert_eq!(*x, -z / pt.epsilon);
        }
        assert!(dlog_tau_gradient(&b, &pt).unwrap().iter().all(|g| g.norm() == 0.0));
    }

    #[test]
    fn doubled_a1_matches_direct_formula() {
        let b = doubled_a1();
        let z1 = c(1.3, 0.4);
        let eps = c(0.7, 0.1);
        let pt = CentralChargePoint::new(vec![z1, c(0.2, -0.5)], eps);
        let y = y_components(&b, &pt).unwrap();
        let w = z1 / (two_pi_i() * eps);
        let expect = -(two_pi_i() * b.omega(0)).inv()
            * (crate::specfun::log_lambda(w).unwrap() - crate::specfun::log_lambda(-w).unwrap());
        assert_eq!(y[0], c(0.0, 0.0));
        assert!((y[1] - expect).norm() < 1e-14);
    }

    #[test]
    fn charge_on_the_cut_is_rejected() {
        let b = doubled_a1();
        // w = z / 2πi is real and ±0.2; the negative one lies on the cut
        let pt = CentralChargePoint::new(vec![c(0.0, 0.2 * 2.0 * PI), c(0.0, 0.0)], c(1.0, 0.0));
        assert!(matches!(y_components(&b, &pt), Err(Error::BranchCutError(_))));
        let pt = CentralChargePoint::new(vec![c(0.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0));
        assert!(matches!(y_components(&b, &pt), Err(Error::DegenerateCharge(_))));
    }

    #[test]
    fn json_round_trip_validates() {
        let b = conifold_truncation(3, 1);
        let back = UncoupledBpsStructure::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
        let bad = r#"{"d":1,"pairing":[1],"support":[{"k":[2],"omega":1}]}"#;
        assert!(UncoupledBpsStructure::from_json(bad).is_err());
    }
}
