//! The A2 Joyce structure: isomonodromy vector fields, the identities they
//! satisfy, the Painlevé I leaf flow on `r = 0`, and the tau-function on
//! that locus.
//!
//! Coordinates on the extended space are `(a, b, q, r)`, with `p` slaved
//! to `p² = q³ + aq + b`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{continue_p, CurvePoint, CycleBasis, FiberPoint, ZtMap};
use crate::error::{Error, Result};
use crate::forms::{jacobian, OneFormField, Stencil};
use crate::ode::{integrate_observed, OdeOptions, StepControl};
use crate::oscillator::{fg_coordinates_with, FgPlan, FrameOptions, OscillatorPotential};
use crate::report::{TauReport, TauSample};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2ExtendedPoint {
    pub a: Complex64,
    pub b: Complex64,
    pub q: Complex64,
    pub p: Complex64,
    pub r: Complex64,
    pub epsilon: Complex64,
}

impl A2ExtendedPoint {
    pub fn new(a: Complex64, b: Complex64, q: Complex64, p: Complex64, r: Complex64, epsilon: Complex64) -> Result<Self> {
        let curve = CurvePoint::new(a, b)?;
        FiberPoint::new(&curve, q, p, r)?;
        if epsilon.norm() == 0.0 {
            return Err(Error::InvalidInput("epsilon must be nonzero".into()));
        }
        Ok(Self { a, b, q, p, r, epsilon })
    }

    /// Point with `b` determined by `(a, q, p)`.
    pub fn on_leaf_locus(a: Complex64, q: Complex64, p: Complex64, epsilon: Complex64) -> Result<Self> {
        let b = p * p - q * q * q - a * q;
        Self::new(a, b, q, p, c(0.0, 0.0), epsilon)
    }

    pub fn curve(&self) -> CurvePoint {
        CurvePoint { a: self.a, b: self.b }
    }

    pub fn fiber(&self) -> FiberPoint {
        FiberPoint { q: self.q, p: self.p, r: self.r }
    }

    /// `(a, b, q, r)`.
    pub fn chart(&self) -> [Complex64; 4] {
        [self.a, self.b, self.q, self.r]
    }
}

/// Additive change to one coefficient of `h_ε(∂_a)`, for sensitivity
/// checks.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldPerturbation {
    /// Added to the `∂_r` component of `h_ε(∂_a)`.
    pub dr_of_ha: Complex64,
}

/// `h_ε(∂_a)` and `h_ε(∂_b)` in the chart `(a, b, q, r)`.
pub fn h_vector_fields(pt: &A2ExtendedPoint) -> Result<[[Complex64; 4]; 2]> {
    fields_at(pt.a, pt.q, pt.p, pt.r, pt.epsilon, &FieldPerturbation::default())
}

fn fields_at(
    a: Complex64,
    q: Complex64,
    p: Complex64,
    r: Complex64,
    eps: Complex64,
    pert: &FieldPerturbation,
) -> Result<[[Complex64; 4]; 2]> {
    if p.norm() == 0.0 {
        return Err(Error::ZeroP);
    }
    let e1 = eps.inv();
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let ha = [
        one,
        zero,
        -2.0 * p * e1 - r / p,
        -q * e1 - (r * r * (3.0 * q * q + a) - q * p * r) / (2.0 * p * p * p) + pert.dr_of_ha,
    ];
    let hb = [zero, one, zero, -e1 + r / (2.0 * p * p)];
    Ok([ha, hb])
}

/// Fields as functions of `(a, b, q, r)` near `pt`, `p` continued from
/// its value at `pt`.
fn field_map(pt: &A2ExtendedPoint, pert: FieldPerturbation, which: usize) -> impl Fn(&[Complex64]) -> Result<Vec<Complex64>> {
    let (p0, eps) = (pt.p, pt.epsilon);
    move |x: &[Complex64]| {
        let curve = CurvePoint { a: x[0], b: x[1] };
        let p = continue_p(&curve, x[2], p0);
        Ok(fields_at(x[0], x[2], p, x[3], eps, &pert)?[which].to_vec())
    }
}

/// Components of `[h_ε(∂_a), h_ε(∂_b)]` together with a magnitude scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessResidual {
    pub bracket: [Complex64; 4],
    /// `Σ |X||∂Y| + |Y||∂X|` over the terms of the bracket.
    pub scale: f64,
}

impl FlatnessResidual {
    pub fn scaled(&self) -> f64 {
        self.bracket.iter().fold(0.0f64, |m, z| m.max(z.norm())) / self.scale.max(1.0)
    }
}

/// Lie bracket `[h_ε(∂_a), h_ε(∂_b)]` by finite differences.
pub fn flatness_residual(pt: &A2ExtendedPoint) -> Result<FlatnessResidual> {
    flatness_residual_with(pt, 1e-5, Stencil::ComplexSymmetric, FieldPerturbation::default())
}

pub fn flatness_residual_with(
    pt: &A2ExtendedPoint,
    step: f64,
    stencil: Stencil,
    pert: FieldPerturbation,
) -> Result<FlatnessResidual> {
    let x0 = pt.chart();
    let fa = field_map(pt, pert, 0);
    let fb = field_map(pt, pert, 1);
    let xa = fa(&x0)?;
    let xb = fb(&x0)?;
    let ja = jacobian(&fa, &x0, step, stencil)?;
    let jb = jacobian(&fb, &x0, step, stencil)?;
    let mut bracket = [c(0.0, 0.0); 4];
    let mut scale = 0.0;
    for k in 0..4 {
        for j in 0..4 {
            bracket[k] += xa[j] * jb[k][j] - xb[j] * ja[k][j];
            scale += (xa[j] * jb[k][j]).norm() + (xb[j] * ja[k][j]).norm();
        }
    }
    Ok(FlatnessResidual { bracket, scale })
}

/// Antisymmetric coefficient matrix of `α ∧ β`.
fn wedge(alpha: &[Complex64], beta: &[Complex64]) -> Vec<Vec<Complex64>> {
    let n = alpha.len();
    (0..n)
        .map(|i| (0..n).map(|j| alpha[i] * beta[j] - alpha[j] * beta[i]).collect())
        .collect()
}

/// `dq ∧ dp + da ∧ dr` in the chart `(a, b, q, r)`.
pub fn omega_i_darboux(pt: &A2ExtendedPoint) -> Result<Vec<Vec<Complex64>>> {
    if pt.p.norm() == 0.0 {
        return Err(Error::ZeroP);
    }
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let two_p = 2.0 * pt.p;
    let dq = [zero, zero, one, zero];
    let dp = [pt.q / two_p, one / two_p, (3.0 * pt.q * pt.q + pt.a) / two_p, zero];
    let da = [one, zero, zero, zero];
    let dr = [zero, zero, zero, one];
    let mut m = wedge(&dq, &dp);
    let n = wedge(&da, &dr);
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] += n[i][j];
        }
    }
    Ok(m)
}

/// `(1/2πi)(dθ₁ ∧ dz₂ - dθ₂ ∧ dz₁) - (dq ∧ dp + da ∧ dr)` in the chart
/// `(a, b, q, r)`, the left side through finite differences of the
/// periods and fibre coordinates.
pub fn omega_identity_residual(pt: &A2ExtendedPoint, basis: &CycleBasis, step: f64) -> Result<Vec<Vec<Complex64>>> {
    let map = ZtMap::at_base(&pt.curve(), &pt.fiber(), basis)?;
    let j = jacobian(|x| map.eval(x), &pt.chart(), step, Stencil::ComplexSymmetric)?;
    let (dz1, dz2, dt1, dt2) = (&j[0], &j[1], &j[2], &j[3]);
    let a = wedge(dt1, dz2);
    let b = wedge(dt2, dz1);
    let rhs = omega_i_darboux(pt)?;
    let k = c(0.0, 2.0 * std::f64::consts::PI).inv();
    Ok((0..4)
        .map(|i| (0..4).map(|l| k * (a[i][l] - b[i][l]) - rhs[i][l]).collect())
        .collect())
}


/// A sample of the leaf flow on `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeafSample {
    pub a: Complex64,
    pub b: Complex64,
    pub q: Complex64,
    pub p: Complex64,
}

impl LeafSample {
    pub fn point(&self, epsilon: Complex64) -> Result<A2ExtendedPoint> {
        A2ExtendedPoint::new(self.a, self.b, self.q, self.p, c(0.0, 0.0), epsilon)
    }

    fn constraint(&self) -> f64 {
        let (a, b, q, p) = (self.a, self.b, self.q, self.p);
        (p * p - q * q * q - a * q - b).norm() / (1.0 + (p * p).norm() + (q * q * q).norm() + (a * q).norm() + b.norm())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafTrajectory {
    pub epsilon: Complex64,
    pub samples: Vec<LeafSample>,
}

impl LeafTrajectory {
    /// Largest relative violation of `p² = q³ + aq + b`.
    pub fn constraint_drift(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.constraint()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeafOptions {
    pub rtol: f64,
    /// `|q| + |p|` beyond which the flow is taken to be at a pole.
    pub pole_guard: f64,
}

impl Default for LeafOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            pole_guard: 1e6,
        }
    }
}

/// `(dq/da, dp/da)` along the leaf.
pub fn leaf_direction(a: Complex64, q: Complex64, p: Complex64, epsilon: Complex64) -> [Complex64; 2] {
    [-2.0 * p / epsilon, -(3.0 * q * q + a) / epsilon]
}

/// Integrates the Painlevé I flow `dq/da = -2p/ε`, `dp/da = -(3q² + a)/ε`
/// through the straight segments between consecutive entries of `a_grid`,
/// with `b = p² - q³ - aq` along the way.
pub fn hamiltonian_leaf_flow(y0: [Complex64; 3], epsilon: Complex64, a_grid: &[Complex64]) -> Result<LeafTrajectory> {
    hamiltonian_leaf_flow_with(y0, epsilon, a_grid, &LeafOptions::default())
}

pub fn hamiltonian_leaf_flow_with(
    y0: [Complex64; 3],
    epsilon: Complex64,
    a_grid: &[Complex64],
    opts: &LeafOptions,
) -> Result<LeafTrajectory> {
    let [a0, q0, p0] = y0;
    if p0.norm() == 0.0 {
        return Err(Error::ZeroP);
    }
    if epsilon.norm() == 0.0 {
        return Err(Error::InvalidInput("epsilon must be nonzero".into()));
    }
    if a_grid.first() != Some(&a0) {
        return Err(Error::InvalidInput("a_grid must start at a₀".into()));
    }
    let sample = |a: Complex64, q: Complex64, p: Complex64| LeafSample {
        a,
        b: p * p - q * q * q - a * q,
        q,
        p,
    };
    let mut out = vec![sample(a0, q0, p0)];
    let mut y = [q0, p0];
    for w in a_grid.windows(2) {
        let (s, e) = (w[0], w[1]);
        let da = e - s;
        let ode = OdeOptions {
            rtol: opts.rtol,
            ..OdeOptions::default()
        };
        let mut blowup = None;
        let res = integrate_observed(
            |t, y: &[Complex64; 2]| {
                let d = leaf_direction(s + da * t, y[0], y[1], epsilon);
                [d[0] * da, d[1] * da]
            },
            0.0,
            1.0,
            y,
            &ode,
            |t, y| {
                if y[0].norm() + y[1].norm() > opts.pole_guard {
                    blowup = Some((s + da * t, *y));
                    StepControl::Stop
                } else {
                    StepControl::Continue
                }
            },
        );
        let pole = |a: Complex64, y: [Complex64; 2]| {
            let dq = leaf_direction(a, y[0], y[1], epsilon)[0];
            Error::MovablePoleEncountered {
                a,
                estimate: a + 2.0 * y[0] / dq,
            }
        };
        if let Some((a, yb)) = blowup {
            return Err(pole(a, yb));
        }
        match res {
            Ok(o) => y = o.y,
            Err(Error::StepUnderflow(t)) => return Err(pole(s + da * t, y)),
            Err(e) => return Err(e),
        }
        if y[1].norm() == 0.0 {
            return Err(Error::ZeroP);
        }
        out.push(sample(e, y[0], y[1]));
    }
    Ok(LeafTrajectory { epsilon, samples: out })
}

/// Chart on the locus `r = 0`.
pub const LEAF_CHART: &str = "aqp";

/// Coefficients `(da, dq, dp)` of the explicit part of `dlog τ` on `r = 0`,
/// `ε⁻²(-(6b/5)da + (4a/5)db + b da) + ε⁻¹((2q/5)dp - (3p/5)dq)`, with
/// `db = -q da - (3q² + a)dq + 2p dp`.
pub fn explicit_tau_coefficients(a: Complex64, q: Complex64, p: Complex64, epsilon: Complex64) -> [Complex64; 3] {
    let e1 = epsilon.inv();
    let e2 = e1 * e1;
    let b = p * p - q * q * q - a * q;
    let k = 3.0 * q * q + a;
    [
        e2 * (-b / 5.0 - 4.0 * a * q / 5.0),
        -e2 * 4.0 * a / 5.0 * k - e1 * 3.0 * p / 5.0,
        e2 * 8.0 * a * p / 5.0 + e1 * 2.0 * q / 5.0,
    ]
}

/// `dlog τ_LR = -(4b/5)da + (16a/5)db - (6p/5)dq + (4q/5)dp` without the
/// shared Fock–Goncharov term, in the chart `(a, q, p)`.
pub fn lr_tau_coefficients(a: Complex64, q: Complex64, p: Complex64) -> [Complex64; 3] {
    let b = p * p - q * q * q - a * q;
    let db = [-q, -(3.0 * q * q + a), 2.0 * p];
    let s = 16.0 * a / 5.0;
    [
        -4.0 * b / 5.0 + s * db[0],
        -6.0 * p / 5.0 + s * db[1],
        4.0 * q / 5.0 + s * db[2],
    ]
}

/// Largest coefficient difference between the explicit part at `ε = 1/2`
/// and the Lisovyy–Roussillon form. The Fock–Goncharov term is the same
/// expression on both sides and is not recomputed.
pub fn lr_form_coincidence(a: Complex64, q: Complex64, p: Complex64) -> f64 {
    let m = explicit_tau_coefficients(a, q, p, c(0.5, 0.0));
    let l = lr_tau_coefficients(a, q, p);
    let scale = 1.0 + l.iter().fold(0.0f64, |s, z| s.max(z.norm()));
    m.iter().zip(&l).fold(0.0f64, |s, (x, y)| s.max((x - y).norm())) / scale
}

/// Fock–Goncharov coordinates as a function of `(a, q, p)` on `r = 0`, with
/// the Wronskian plan and log branches fixed at a base point.
#[derive(Debug, Clone)]
pub struct FgLeafMap {
    pub epsilon: Complex64,
    pub plan: FgPlan,
    pub reference: [Complex64; 2],
    pub double_pole: Complex64,
    /// Relative finite-difference step.
    pub step: f64,
}

impl FgLeafMap {
    pub fn at(a: Complex64, q: Complex64, p: Complex64, epsilon: Complex64) -> Result<Self> {
        let pt = A2ExtendedPoint::on_leaf_locus(a, q, p, epsilon)?;
        let pot = OscillatorPotential::from_point(&pt);
        let plan = FgPlan::build(&pot, &FrameOptions::default())?;
        let reference = fg_coordinates_with(&pot, &plan, None)?;
        Ok(Self {
            epsilon,
            plan,
            reference,
            double_pole: pot.double_pole,
            step: FG_STEP,
        })
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<[Complex64; 2]> {
        let (a, q, p) = (x[0], x[1], x[2]);
        let b = p * p - q * q * q - a * q;
        let pot = OscillatorPotential {
            a,
            b,
            q,
            p,
            r: c(0.0, 0.0),
            epsilon: self.epsilon,
            double_pole: self.double_pole,
        };
        fg_coordinates_with(&pot, &self.plan, Some(self.reference))
    }

    /// Moves the branch reference to follow a path.
    pub fn track(&mut self, x: &[Complex64]) -> Result<[Complex64; 2]> {
        let v = self.eval(x)?;
        self.reference = v;
        Ok(v)
    }
}

/// Default relative step for derivatives of the Fock–Goncharov
/// coordinates.
pub const FG_STEP: f64 = 1e-4;

/// `(x₁, x₂)` and the Jacobian `∂x_i/∂(a, q, p)` at a point of `r = 0`.
pub fn fg_jacobian(map: &FgLeafMap, x: &[Complex64]) -> Result<([Complex64; 2], Vec<Vec<Complex64>>)> {
    let v = map.eval(x)?;
    let j = jacobian(|y| map.eval(y).map(|v| v.to_vec()), x, map.step, Stencil::ComplexSymmetric)?;
    Ok((v, j))
}

/// `dlog τ` on `r = 0` in the chart `(a, q, p)`: the explicit part plus
/// `(1/2πi) x₁ dx₂`, the latter by finite differences.
pub fn assemble_tau_oneform(epsilon: Complex64, base: [Complex64; 3]) -> Result<OneFormField> {
    let map = FgLeafMap::at(base[0], base[1], base[2], epsilon)?;
    let k = c(0.0, 2.0 * PI).inv();
    Ok(OneFormField::new(LEAF_CHART, 3, true, move |x: &[Complex64]| {
        let ex = explicit_tau_coefficients(x[0], x[1], x[2], epsilon);
        let (v, j) = fg_jacobian(&map, x)?;
        Ok((0..3).map(|i| ex[i] + k * v[0] * j[1][i]).collect())
    }))
}

/// Antisymmetric matrix of `d(explicit part) + (1/2πi) dx₁ ∧ dx₂`; zero
/// when the assembled form is closed.
pub fn assembled_closedness(map: &FgLeafMap, x: [Complex64; 3]) -> Result<Vec<Vec<Complex64>>> {
    let eps = map.epsilon;
    let jx = jacobian(
        |y| Ok(explicit_tau_coefficients(y[0], y[1], y[2], eps).to_vec()),
        &x,
        1e-4,
        Stencil::ComplexSymmetric,
    )?;
    let (_, jf) = fg_jacobian(map, &x)?;
    let k = c(0.0, 2.0 * PI).inv();
    Ok((0..3)
        .map(|i| {
            (0..3)
                .map(|l| jx[l][i] - jx[i][l] + k * (jf[0][i] * jf[1][l] - jf[0][l] * jf[1][i]))
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeafTauOptions {
    /// Evaluate the Fock–Goncharov term and integrate the assembled form
    /// alongside the `b`-integral.
    pub assembled: bool,
}

impl Default for LeafTauOptions {
    fn default() -> Self {
        Self { assembled: true }
    }
}

/// `log τ(a) = ε⁻² ∫ b da` along a trajectory, with cross-checks:
/// `assembled` (integral of [`assemble_tau_oneform`]), `leaf_derivative`
/// (its contraction with the leaf direction minus `ε⁻²b`), `fg_drift`
/// and, on a uniform grid at `ε = 1/2`, `sigma_form` for `σ = 2b`,
/// `t = 2a`.
pub fn leaf_tau(traj: &LeafTrajectory) -> Result<TauReport> {
    leaf_tau_with(traj, &LeafTauOptions::default())
}

pub fn leaf_tau_with(traj: &LeafTrajectory, opts: &LeafTauOptions) -> Result<TauReport> {
    let s = &traj.samples;
    let eps = traj.epsilon;
    let first = s.first().ok_or_else(|| Error::InvalidPath("empty trajectory".into()))?;
    let e2 = eps.inv() * eps.inv();
    let mut rep = TauReport::new("a2-leaf", LEAF_CHART, vec![first.a, first.q, first.p], eps);
    let mut fg = if opts.assembled && s.len() > 1 {
        Some(FgLeafMap::at(first.a, first.q, first.p, eps)?)
    } else {
        None
    };
    let k = c(0.0, 2.0 * PI).inv();
    // per-sample d log τ/da from the explicit part and the FG term
    let mut assembled_rate = Vec::with_capacity(s.len());
    let mut x0 = None;
    for smp in s {
        let x = [smp.a, smp.q, smp.p];
        let ex = explicit_tau_coefficients(smp.a, smp.q, smp.p, eps);
        let d = leaf_direction(smp.a, smp.q, smp.p, eps);
        let tangent = [c(1.0, 0.0), d[0], d[1]];
        let mut rate: Complex64 = (0..3).map(|i| ex[i] * tangent[i]).sum();
        if let Some(map) = fg.as_mut() {
            let (v, j) = fg_jacobian(map, &x)?;
            map.reference = v;
            let dx2: Complex64 = (0..3).map(|i| j[1][i] * tangent[i]).sum();
            rate += k * v[0] * dx2;
            let x_start = *x0.get_or_insert(v);
            rep.record("fg_drift", (v[0] - x_start[0]).norm().max((v[1] - x_start[1]).norm()));
            rep.record("leaf_derivative", (rate - e2 * smp.b).norm() / (1.0 + (e2 * smp.b).norm()));
        }
        assembled_rate.push(rate);
    }
    // log τ by the two-point Hermite rule with b' = -q, b'' = 2p/ε; the
    // assembled rate and ε⁻²b are compared under one common rule
    // (trapezoid with differenced end slopes).
    let eb: Vec<Complex64> = s.iter().map(|x| e2 * x.b).collect();
    let (sa, sb) = (slopes(s, &assembled_rate), slopes(s, &eb));
    let mut log_tau = c(0.0, 0.0);
    let mut assembled = c(0.0, 0.0);
    let mut reference = c(0.0, 0.0);
    let sample = |rep: &mut TauReport, i: usize, lt: Complex64| {
        let mut row = TauSample::default();
        row.push("a", s[i].a);
        row.push("b", s[i].b);
        row.push("q", s[i].q);
        row.push("p", s[i].p);
        row.push("logtau", lt);
        rep.samples.push(row);
    };
    sample(&mut rep, 0, log_tau);
    for i in 1..s.len() {
        let (u, v) = (&s[i - 1], &s[i]);
        let h = v.a - u.a;
        let bint = 0.5 * h * (u.b + v.b) + h * h / 10.0 * (-u.q + v.q) + h * h * h / 120.0 * 2.0 * (u.p + v.p) / eps;
        log_tau += e2 * bint;
        let trap = |f: &[Complex64], d: &[Complex64]| 0.5 * h * (f[i - 1] + f[i]) + h * h / 12.0 * (d[i - 1] - d[i]);
        assembled += trap(&assembled_rate, &sa);
        reference += trap(&eb, &sb);
        sample(&mut rep, i, log_tau);
    }
    if fg.is_some() {
        rep.record(
            "assembled",
            (assembled - reference).norm() / (1.0 + reference.norm()),
        );
    }
    if let Some(r) = sigma_form_residual(traj) {
        rep.record("sigma_form", r);
    }
    rep.log_tau = log_tau;
    rep.end_point = s.last().map(|l| vec![l.a, l.q, l.p]).unwrap_or_default();
    Ok(rep)
}

/// Derivatives of `f` along the samples: three-point differences.
fn slopes(s: &[LeafSample], f: &[Complex64]) -> Vec<Complex64> {
    let n = s.len();
    if n < 3 {
        return vec![c(0.0, 0.0); n];
    }
    let d3 = |i: usize, j: usize, k: usize, at: usize| {
        // derivative at s[at] of the quadratic through i, j, k
        let (x0, x1, x2) = (s[i].a, s[j].a, s[k].a);
        let x = s[at].a;
        f[i] * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2))
            + f[j] * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2))
            + f[k] * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))
    };
    (0..n)
        .map(|i| match i {
            0 => d3(0, 1, 2, 0),
            _ if i == n - 1 => d3(n - 3, n - 2, n - 1, n - 1),
            _ => d3(i - 1, i, i + 1, i),
        })
        .collect()
}

/// Largest `|(σ'')² + 4(σ')³ + 2tσ' - 2σ|` at interior samples, with
/// `σ = 2b`, `t = 2a` and derivatives from five-point stencils on the
/// sample grid. Only meaningful at `ε = 1/2` on a uniform grid.
pub fn sigma_form_residual(traj: &LeafTrajectory) -> Option<f64> {
    let s = &traj.samples;
    if s.len() < 5 || (traj.epsilon - c(0.5, 0.0)).norm() > 1e-14 {
        return None;
    }
    let h = s[1].a - s[0].a;
    let uniform = s.windows(2).all(|w| (w[1].a - w[0].a - h).norm() < 1e-12 * (1.0 + h.norm()));
    if !uniform {
        return None;
    }
    let ht = 2.0 * h;
    let sigma: Vec<Complex64> = s.iter().map(|x| 2.0 * x.b).collect();
    let mut worst = 0.0f64;
    for i in 2..s.len() - 2 {
        let d1 = (sigma[i - 2] - 8.0 * sigma[i - 1] + 8.0 * sigma[i + 1] - sigma[i + 2]) / (12.0 * ht);
        let d2 = (-sigma[i - 2] + 16.0 * sigma[i - 1] - 30.0 * sigma[i] + 16.0 * sigma[i + 1] - sigma[i + 2])
            / (12.0 * ht * ht);
        let t = 2.0 * s[i].a;
        let res = d2 * d2 + 4.0 * d1 * d1 * d1 + 2.0 * t * d1 - 2.0 * sigma[i];
        worst = worst.max(res.norm());
    }
    Some(worst)
}
