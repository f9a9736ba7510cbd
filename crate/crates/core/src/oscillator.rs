//! The deformed cubic oscillator `f'' = Q(x) f` with
//!
//! ```text
//! Q = ε⁻²(x³ + ax + b) + ε⁻¹(p/(x-q) + r) + 3/(4(x-q)²) + r/(2p(x-q)) + r²/(4p²)
//! ```
//!
//! Subdominant solutions in the five Stokes sectors at infinity, their
//! Wronskians, the Fock–Goncharov coordinates built from them, and
//! monodromy around closed loops.
//!
//! The only singularity at finite distance is the apparent one at `x = q`,
//! around which every solution changes sign. Solutions are therefore lifted
//! to a fixed hub point along straight paths; a Wronskian evaluated
//! elsewhere is corrected by the parity of `q` inside the triangles between
//! the two lifts. Each frame occurs an even number of times in the
//! cross-ratios, so the choice of lift drops out of them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::a2::A2ExtendedPoint;
use crate::error::{Error, Result};
use crate::forms::Polyline;
use crate::ode::{integrate_observed, OdeOptions, StepControl};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const X_CHART: &str = "x";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorPotential {
    pub a: Complex64,
    pub b: Complex64,
    pub q: Complex64,
    pub p: Complex64,
    pub r: Complex64,
    pub epsilon: Complex64,
    /// Coefficient of `(x-q)⁻²`; `3/4` for the apparent singularity.
    pub double_pole: Complex64,
}

impl OscillatorPotential {
    pub fn new(a: Complex64, b: Complex64, q: Complex64, p: Complex64, r: Complex64, epsilon: Complex64) -> Result<Self> {
        let pt = A2ExtendedPoint::new(a, b, q, p, r, epsilon)?;
        Ok(Self::from_point(&pt))
    }

    pub fn from_point(pt: &A2ExtendedPoint) -> Self {
        Self {
            a: pt.a,
            b: pt.b,
            q: pt.q,
            p: pt.p,
            r: pt.r,
            epsilon: pt.epsilon,
            double_pole: c(0.75, 0.0),
        }
    }

    pub fn with_double_pole(mut self, coefficient: Complex64) -> Self {
        self.double_pole = coefficient;
        self
    }

    fn value(&self, x: Complex64) -> Complex64 {
        let e1 = self.epsilon.inv();
        let u = (x - self.q).inv();
        e1 * e1 * (x * x * x + self.a * x + self.b)
            + e1 * (self.p * u + self.r)
            + self.double_pole * u * u
            + self.r / (2.0 * self.p) * u
            + self.r * self.r / (4.0 * self.p * self.p)
    }

    fn derivative(&self, x: Complex64) -> Complex64 {
        let e1 = self.epsilon.inv();
        let u = (x - self.q).inv();
        e1 * e1 * (3.0 * x * x + self.a) - e1 * self.p * u * u - 2.0 * self.double_pole * u * u * u
            - self.r / (2.0 * self.p) * u * u
    }

    /// Largest modulus among the branch points and `q`, at least 1.
    pub fn scale(&self) -> f64 {
        let roots = crate::elliptic::CurvePoint { a: self.a, b: self.b };
        let mut s = 1.0f64.max(self.q.norm());
        if let Ok(r) = crate::elliptic::cubic_roots(&roots) {
            for e in r {
                s = s.max(e.norm());
            }
        }
        s
    }
}

/// `Q(x)`.
pub fn evaluate_q(pot: &OscillatorPotential, x: Complex64) -> Result<Complex64> {
    if x == pot.q {
        return Err(Error::PoleEvaluation(x));
    }
    let v = pot.value(x);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFiniteEvaluation {
            location: format!("Q({x})"),
        });
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportOptions {
    pub rtol: f64,
    /// Closest admissible approach of a path to `x = q`, relative to the
    /// potential's scale.
    pub pole_margin: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            pole_margin: 1e-6,
        }
    }
}

/// A solution vector `(f, f')` stored as `e^{log_scale} · value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub value: [Complex64; 2],
    pub log_scale: f64,
}

impl Scaled {
    pub fn new(value: [Complex64; 2]) -> Self {
        Self { value, log_scale: 0.0 }
    }

    fn normalized(mut self) -> Self {
        let n = (self.value[0].norm_sqr() + self.value[1].norm_sqr()).sqrt();
        if n > 0.0 && n.is_finite() {
            self.value = [self.value[0] / n, self.value[1] / n];
            self.log_scale += n.ln();
        }
        self
    }
}

fn distance_to_segment(q: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = if d.norm_sqr() > 0.0 {
        ((q - a) * d.conj()).re / d.norm_sqr()
    } else {
        0.0
    };
    (a + d * t.clamp(0.0, 1.0) - q).norm()
}

/// Transports `init` along straight segments through `points`.
/// Segments passing close to `x = q` are replaced by a two-segment detour
/// bulging away from it, which is homotopic to the original and keeps the
/// integrator out of the pole's neighbourhood.
pub fn transport(pot: &OscillatorPotential, points: &[Complex64], init: Scaled, opts: &TransportOptions) -> Result<Scaled> {
    let margin = opts.pole_margin * pot.scale();
    let path = detour(points, pot.q, margin, DETOUR_FRACTION * pot.scale());
    let avoid = Some((pot.q, margin));
    transport_fn(|x| pot.value(x), avoid, &path, init, opts)
}

/// Clearance, relative to the potential's scale, below which straight
/// segments are routed around `x = q`.
const DETOUR_FRACTION: f64 = 0.1;

/// Segments closer than `margin` are left alone: they have no side to pass
/// on and are refused by the transport.
fn detour(points: &[Complex64], q: Complex64, margin: f64, delta: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(points.len() + 2);
    out.extend(points.first());
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let d = b - a;
        let dist = distance_to_segment(q, a, b);
        if d.norm() > 0.0 && dist >= margin && dist < delta {
            let t = ((q - a) * d.conj()).re / d.norm_sqr();
            let foot = a + d * t;
            // only a foot well inside the segment can be bypassed
            if (foot - a).norm() > delta && (foot - b).norm() > delta {
                let left = Complex64::i() * d / d.norm();
                let side = if ((q - a) * d.conj()).im > 0.0 { -1.0 } else { 1.0 };
                out.push(foot + left * (side * 1.5 * delta));
            }
        }
        out.push(b);
    }
    out
}

/// Transport for an arbitrary potential `q_of_x`, refusing segments that
/// come within `avoid.1` of `avoid.0`.
pub fn transport_fn<F: Fn(Complex64) -> Complex64>(
    q_of_x: F,
    avoid: Option<(Complex64, f64)>,
    points: &[Complex64],
    init: Scaled,
    opts: &TransportOptions,
) -> Result<Scaled> {
    let mut state = init.normalized();
    for w in points.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if let Some((pole, margin)) = avoid {
            if distance_to_segment(pole, x0, x1) < margin {
                return Err(Error::PoleProximity { margin });
            }
        }
        let dx = x1 - x0;
        let mut extra = 0.0;
        let ode = OdeOptions {
            rtol: opts.rtol,
            ..OdeOptions::default()
        };
        let out = integrate_observed(
            |t, y: &[Complex64; 2]| {
                let x = x0 + dx * t;
                [dx * y[1], dx * q_of_x(x) * y[0]]
            },
            0.0,
            1.0,
            state.value,
            &ode,
            |_, y| {
                let n = (y[0].norm_sqr() + y[1].norm_sqr()).sqrt();
                if n > 1e100 || (n < 1e-100 && n > 0.0) {
                    y[0] /= n;
                    y[1] /= n;
                    extra += n.ln();
                    StepControl::Modified
                } else {
                    StepControl::Continue
                }
            },
        )?;
        state = Scaled {
            value: out.y,
            log_scale: state.log_scale + extra,
        }
        .normalized();
    }
    Ok(state)
}

/// Transports `init` along a polyline in the `x` chart.
pub fn integrate_schrodinger(pot: &OscillatorPotential, path: &Polyline, init: [Complex64; 2]) -> Result<[Complex64; 2]> {
    integrate_schrodinger_with(pot, path, init, &TransportOptions::default())
}

pub fn integrate_schrodinger_with(
    pot: &OscillatorPotential,
    path: &Polyline,
    init: [Complex64; 2],
    opts: &TransportOptions,
) -> Result<[Complex64; 2]> {
    let pts = chart_points(path)?;
    let s = transport(pot, &pts, Scaled::new(init), opts)?;
    let k = s.log_scale.exp();
    Ok([s.value[0] * k, s.value[1] * k])
}

/// [`integrate_schrodinger`] for an arbitrary potential.
pub fn integrate_schrodinger_fn<F: Fn(Complex64) -> Complex64>(
    q_of_x: F,
    path: &Polyline,
    init: [Complex64; 2],
    opts: &TransportOptions,
) -> Result<[Complex64; 2]> {
    let pts = chart_points(path)?;
    let s = transport_fn(q_of_x, None, &pts, Scaled::new(init), opts)?;
    let k = s.log_scale.exp();
    Ok([s.value[0] * k, s.value[1] * k])
}

fn chart_points(path: &Polyline) -> Result<Vec<Complex64>> {
    if path.chart() != X_CHART {
        return Err(Error::ChartMismatch {
            expected: X_CHART.into(),
            found: path.chart().into(),
        });
    }
    path.vertices()
        .iter()
        .map(|v| {
            if v.len() != 1 {
                Err(Error::DimensionMismatch { expected: 1, found: v.len() })
            } else {
                Ok(v[0])
            }
        })
        .collect()
}

/// Transport matrix around `path` (closed or not) of the fundamental pair
/// with initial values `(1, 0)` and `(0, 1)`.
pub fn monodromy_matrix(pot: &OscillatorPotential, path: &Polyline) -> Result<[[Complex64; 2]; 2]> {
    monodromy_matrix_with(pot, path, &TransportOptions::default())
}

pub fn monodromy_matrix_with(
    pot: &OscillatorPotential,
    path: &Polyline,
    opts: &TransportOptions,
) -> Result<[[Complex64; 2]; 2]> {
    let u = integrate_schrodinger_with(pot, path, [c(1.0, 0.0), c(0.0, 0.0)], opts)?;
    let v = integrate_schrodinger_with(pot, path, [c(0.0, 0.0), c(1.0, 0.0)], opts)?;
    Ok([[u[0], v[0]], [u[1], v[1]]])
}

/// Closed regular `n`-gon of radius `rho` around `centre`, starting and
/// ending at `centre + rho`.
pub fn circle_loop(centre: Complex64, rho: f64, n: usize) -> Result<Polyline> {
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|k| vec![centre + Complex64::from_polar(rho, 2.0 * PI * k as f64 / n as f64)])
        .collect();
    v.push(v[0].clone());
    Polyline::from_coords(X_CHART, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameOptions {
    pub transport: TransportOptions,
    /// Anchor radius; `None` picks the smallest radius on which
    /// `|Q - ε⁻²x³| < 0.1 |ε⁻²x³|`.
    pub r_anchor: Option<f64>,
    /// Outer radius where the WKB data are imposed; `None` gives
    /// `(R^{5/2} + outer_exponent |ε|)^{2/5}`, i.e. a WKB exponent of
    /// `(2/5) outer_exponent` between the two radii.
    pub r_out: Option<f64>,
    pub outer_exponent: f64,
}

impl Default for FrameOptions {
    fn default() -> Self {
        Self {
            transport: TransportOptions {
                rtol: 1e-12,
                pole_margin: 1e-6,
            },
            r_anchor: None,
            r_out: None,
            outer_exponent: 100.0,
        }
    }
}

/// Direction of the ray along which the sector-`k` solution decays.
pub fn sector_direction(epsilon: Complex64, k: usize) -> f64 {
    2.0 * PI * k as f64 / 5.0 + 0.4 * epsilon.arg()
}

/// Smallest radius (on a doubling-then-bisection search) where the cubic
/// term dominates `Q` to 10% all around the circle.
pub fn anchor_radius(pot: &OscillatorPotential) -> f64 {
    let ok = |rad: f64| {
        (0..64).all(|i| {
            let x = Complex64::from_polar(rad, 2.0 * PI * (i as f64 + 0.5) / 64.0);
            if (x - pot.q).norm() < 1e-9 {
                return false;
            }
            let lead = x * x * x / (pot.epsilon * pot.epsilon);
            (pot.value(x) - lead).norm() < 0.1 * lead.norm()
        })
    };
    let mut hi = pot.scale();
    while !ok(hi) {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    if ok(lo) {
        return lo.max(pot.scale() * 0.5);
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // keep the anchor circle clear of q and the branch points
    hi.max(1.2 * pot.scale())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSolution {
    pub sector: usize,
    pub anchor: Complex64,
    pub value: Scaled,
    /// Ray direction and the two radii used.
    pub direction: f64,
    pub r_anchor: f64,
    pub r_out: f64,
}

/// Solution recessive along the sector-`k` ray, obtained by imposing the
/// WKB data `f'/f = -√Q - Q'/4Q` at the outer radius and integrating
/// inward to the anchor.
pub fn subdominant_frame(pot: &OscillatorPotential, k: usize, opts: &FrameOptions) -> Result<FrameSolution> {
    if k > 4 {
        return Err(Error::InvalidInput(format!("sector index {k} out of range")));
    }
    let r = opts.r_anchor.unwrap_or_else(|| anchor_radius(pot));
    let r_out = opts
        .r_out
        .unwrap_or_else(|| (r.powf(2.5) + opts.outer_exponent * pot.epsilon.norm()).powf(0.4));
    let phi = sector_direction(pot.epsilon, k);
    let dir = Complex64::from_polar(1.0, phi);
    let x_out = dir * r_out;
    let anchor = dir * r;
    if (pot.q - anchor).norm() < 0.05 * r || distance_to_segment(pot.q, anchor, x_out) < 0.05 * r {
        return Err(Error::SectorDegeneracy(k));
    }
    let qv = pot.value(x_out);
    let mut sq = qv.sqrt();
    // decay outward along the ray
    if (sq * dir).re < 0.0 {
        sq = -sq;
    }
    let u = -sq - pot.derivative(x_out) / (4.0 * qv);
    let init = Scaled::new([c(1.0, 0.0), u]);
    let value = transport(pot, &[x_out, anchor], init, &opts.transport)?;
    Ok(FrameSolution {
        sector: k,
        anchor,
        value,
        direction: phi,
        r_anchor: r,
        r_out,
    })
}

/// `f₁ f₂' - f₁' f₂` as `(value, log_scale)`.
fn scaled_wronskian(u: &Scaled, v: &Scaled) -> (Complex64, f64) {
    (u.value[0] * v.value[1] - u.value[1] * v.value[0], u.log_scale + v.log_scale)
}

/// Wronskian of two frames, both transported along straight lines to
/// `point`.
pub fn wronskian(s1: &FrameSolution, s2: &FrameSolution, pot: &OscillatorPotential, point: Complex64) -> Result<Complex64> {
    let (w, l) = wronskian_at(s1, s2, pot, point, &TransportOptions::default())?;
    Ok(w * l.exp())
}

fn wronskian_at(
    s1: &FrameSolution,
    s2: &FrameSolution,
    pot: &OscillatorPotential,
    point: Complex64,
    opts: &TransportOptions,
) -> Result<(Complex64, f64)> {
    let u = transport(pot, &[s1.anchor, point], s1.value, opts)?;
    let v = transport(pot, &[s2.anchor, point], s2.value, opts)?;
    Ok(scaled_wronskian(&u, &v))
}

/// Whether `q` lies inside the triangle `(a, b, c)`.
fn in_triangle(q: Complex64, a: Complex64, b: Complex64, c: Complex64) -> bool {
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, q - a);
    let d2 = cross(c - b, q - b);
    let d3 = cross(a - c, q - c);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Pairs entering the two cross-ratios.
pub const FG_PAIRS: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 4), (4, 0), (2, 3), (3, 4), (0, 2)];

/// Fixed choices reused across nearby evaluations: anchor radii, hub and
/// the comparison point of every Wronskian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FgPlan {
    pub frame: FrameOptions,
    pub hub: Complex64,
    /// Comparison point for each entry of [`FG_PAIRS`].
    pub points: Vec<Complex64>,
    /// `|W|` between unit vectors at the chosen points (conditioning).
    pub conditioning: Vec<f64>,
    pub convention: FgConvention,
}

impl FgPlan {
    /// Chooses, for each Wronskian, the candidate point where the two
    /// transported frames are least parallel.
    pub fn build(pot: &OscillatorPotential, opts: &FrameOptions) -> Result<Self> {
        let r = opts.r_anchor.unwrap_or_else(|| anchor_radius(pot));
        let r_out = opts
            .r_out
            .unwrap_or_else(|| (r.powf(2.5) + opts.outer_exponent * pot.epsilon.norm()).powf(0.4));
        let frame = FrameOptions {
            r_anchor: Some(r),
            r_out: Some(r_out),
            ..*opts
        };
        let frames = all_frames(pot, &frame)?;
        let scale = pot.scale();
        let hub = if pot.q.norm() > 0.2 * scale {
            c(0.0, 0.0)
        } else {
            -pot.q / pot.q.norm().max(1e-300) * (0.4 * scale)
        };
        let mut base = vec![hub];
        if let Ok(roots) = crate::elliptic::cubic_roots(&crate::elliptic::CurvePoint { a: pot.a, b: pot.b }) {
            base.extend(roots);
        }
        let mut points = Vec::new();
        let mut conditioning = Vec::new();
        for &(j, k) in FG_PAIRS.iter() {
            let (fj, fk) = (&frames[j], &frames[k]);
            let mut cands = base.clone();
            let mid = 0.5 * (fj.anchor + fk.anchor);
            for t in [0.25, 0.5, 0.75, 1.0] {
                cands.push(mid * t);
                if mid.norm() > 0.0 {
                    cands.push(mid / mid.norm() * r * t);
                }
            }
            let mut best: Option<(f64, Complex64)> = None;
            for x in cands {
                if (x - pot.q).norm() < 0.05 * scale
                    || distance_to_segment(pot.q, fj.anchor, x) < 0.05 * scale
                    || distance_to_segment(pot.q, fk.anchor, x) < 0.05 * scale
                {
                    continue;
                }
                let Ok(u) = transport(pot, &[fj.anchor, x], fj.value, &frame.transport) else { continue };
                let Ok(v) = transport(pot, &[fk.anchor, x], fk.value, &frame.transport) else { continue };
                let w = scaled_wronskian(&u, &v).0.norm();
                if best.is_none_or(|(b, _)| w > b) {
                    best = Some((w, x));
                }
            }
            let (w, x) = best.ok_or(Error::DegenerateWronskian(j, k))?;
            points.push(x);
            conditioning.push(w);
        }
        Ok(Self {
            frame,
            hub,
            points,
            conditioning,
            convention: FgConvention::default(),
        })
    }
}

fn all_frames(pot: &OscillatorPotential, opts: &FrameOptions) -> Result<Vec<FrameSolution>> {
    (0..5).map(|k| subdominant_frame(pot, k, opts)).collect()
}

/// Complex logarithms of the Wronskians in [`FG_PAIRS`], all referred to
/// lifts through the plan's hub.
pub fn log_wronskians(pot: &OscillatorPotential, plan: &FgPlan) -> Result<Vec<Complex64>> {
    let frames = all_frames(pot, &plan.frame)?;
    let mut out = Vec::with_capacity(FG_PAIRS.len());
    for (&(j, k), &x) in FG_PAIRS.iter().zip(&plan.points) {
        let (fj, fk) = (&frames[j], &frames[k]);
        let (w, l) = wronskian_at(fj, fk, pot, x, &plan.frame.transport)?;
        if w.norm() == 0.0 {
            return Err(Error::DegenerateWronskian(j, k));
        }
        let flips = in_triangle(pot.q, fj.anchor, x, plan.hub) as u8 + in_triangle(pot.q, fk.anchor, x, plan.hub) as u8;
        let mut lw = w.ln() + l;
        if flips % 2 == 1 {
            lw += c(0.0, PI);
        }
        out.push(lw);
    }
    Ok(out)
}

/// Global relabeling of the raw cross-ratio logarithms, `x = relabel · x̂`.
/// The shipped one swaps the two, which makes `dx₁ ∧ dx₂` carry the
/// orientation of the elliptic basis (`det ∂z/∂(a,b) = -2πi`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgConvention {
    pub relabel: [[i8; 2]; 2],
}

impl Default for FgConvention {
    fn default() -> Self {
        serde_json::from_str(include_str!("../fixtures/fg_convention.json")).expect("shipped convention parses")
    }
}

impl FgConvention {
    pub const RAW: FgConvention = FgConvention {
        relabel: [[1, 0], [0, 1]],
    };
}

/// `m · v` for a small integer matrix.
pub fn lattice_apply(m: &[[i8; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [
        v[0] * m[0][0] as f64 + v[1] * m[0][1] as f64,
        v[0] * m[1][0] as f64 + v[1] * m[1][1] as f64,
    ]
}

/// Raw cross-ratio logarithms `log[-w₀₁w₂₄/(w₁₂w₄₀)]`,
/// `log[-w₂₃w₄₀/(w₃₄w₀₂)]`.
pub fn raw_fg_from_logs(lw: &[Complex64]) -> [Complex64; 2] {
    let ipi = c(0.0, PI);
    [lw[0] + lw[2] - lw[1] - lw[3] + ipi, lw[4] + lw[3] - lw[5] - lw[6] + ipi]
}

/// Imaginary part brought within `π` of `reference` (principal branch
/// when `None`).
pub fn unwrap_log(x: Complex64, reference: Option<Complex64>) -> Complex64 {
    let target = reference.map_or(0.0, |r| r.im);
    let k = ((x.im - target) / (2.0 * PI)).round();
    c(x.re, x.im - 2.0 * PI * k)
}

pub fn fg_from_logs(lw: &[Complex64], convention: &FgConvention, reference: Option<[Complex64; 2]>) -> [Complex64; 2] {
    let x = lattice_apply(&convention.relabel, raw_fg_from_logs(lw));
    [
        unwrap_log(x[0], reference.map(|r| r[0])),
        unwrap_log(x[1], reference.map(|r| r[1])),
    ]
}

/// Fock–Goncharov coordinates on the principal branch, in the shipped
/// convention.
pub fn fg_coordinates(pot: &OscillatorPotential) -> Result<[Complex64; 2]> {
    let plan = FgPlan::build(pot, &FrameOptions::default())?;
    fg_coordinates_with(pot, &plan, None)
}

pub fn fg_coordinates_with(pot: &OscillatorPotential, plan: &FgPlan, reference: Option<[Complex64; 2]>) -> Result<[Complex64; 2]> {
    Ok(fg_from_logs(&log_wronskians(pot, plan)?, &plan.convention, reference))
}

/// `x_i + z_i/ε - θ_i`, reduced modulo `2πi`, where `z = cycles · ẑ` and
/// `θ = cycles · θ̂` in terms of the normalized elliptic basis. Which
/// cycles match depends on the chamber of the point (the normalized
/// basis is defined through root ordering), so `cycles` is data of the
/// point.
pub fn asymptotic_residual(pot: &OscillatorPotential, plan: &FgPlan, cycles: &[[i8; 2]; 2]) -> Result<[Complex64; 2]> {
    use crate::elliptic::{periods, theta_coords, CurvePoint, CycleBasis, FiberPoint};
    let curve = CurvePoint::new(pot.a, pot.b)?;
    let basis = CycleBasis::normalized(&curve)?;
    let z = lattice_apply(cycles, periods(&curve, &basis)?);
    let fiber = FiberPoint::new(&curve, pot.q, pot.p, pot.r)?;
    let theta = lattice_apply(cycles, theta_coords(&curve, &fiber, &basis)?.theta);
    let x = fg_coordinates_with(pot, plan, None)?;
    Ok([0, 1].map(|i| unwrap_log(x[i] + z[i] / pot.epsilon - theta[i], None)))
}
