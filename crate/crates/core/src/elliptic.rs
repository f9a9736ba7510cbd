//! Periods and fibre coordinates on the curve `y² = x³ + ax + b`.
//!
//! A cycle is the lift of a segment between two branch points: its period
//! is twice the integral of `y dx` along the segment, with `y` continued
//! along the segment from the factorisation
//!
//! ```text
//! y = i h √(1-s²) √(m-e_k) √((x-e_k)/(m-e_k)),   x = m + h s,
//! ```
//!
//! `m` and `h` being the midpoint and half-span. The endpoint square roots
//! are removed by `s = sin(πu/2)` before Gauss–Legendre.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::forms::ChartPoint;
use crate::quad::{adaptive, AdaptiveOptions};

pub const ZT_CHART: &str = "zt";

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub a: Complex64,
    pub b: Complex64,
}

impl CurvePoint {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let pt = Self { a, b };
        let disc = pt.discriminant();
        let scale = 4.0 * a.norm().powi(3) + 27.0 * b.norm_sqr();
        if disc.norm() <= 1e-12 * scale.max(1e-300) {
            return Err(Error::DegenerateDiscriminant(disc));
        }
        Ok(pt)
    }

    /// `4a³ + 27b²`.
    pub fn discriminant(&self) -> Complex64 {
        4.0 * self.a.powu(3) + 27.0 * self.b * self.b
    }

    pub fn cubic(&self, x: Complex64) -> Complex64 {
        x * x * x + self.a * x + self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberPoint {
    pub q: Complex64,
    pub p: Complex64,
    pub r: Complex64,
}

impl FiberPoint {
    /// Checks `p² = q³ + aq + b` (relative tolerance 1e-9) and `p ≠ 0`.
    pub fn new(curve: &CurvePoint, q: Complex64, p: Complex64, r: Complex64) -> Result<Self> {
        if p.norm() == 0.0 {
            return Err(Error::ZeroP);
        }
        let res = (p * p - curve.cubic(q)).norm();
        let scale = 1.0 + p.norm_sqr() + q.norm().powi(3);
        if res > 1e-9 * scale {
            return Err(Error::FiberConstraint(res));
        }
        Ok(Self { q, p, r })
    }
}

/// A cycle: the lift of the segment from branch point `from` to `to`
/// (indices into the ordered roots) with an orientation sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    pub from: usize,
    pub to: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBasis {
    pub cycles: [Cycle; 2],
}

impl CycleBasis {
    /// `γ₁ = [e₁, e₂]`, `γ₂ = ±[e₂, e₃]` with the sign of `γ₂` chosen so that
    /// `det ∂(z₁, z₂)/∂(a, b) = -2πi`.
    pub fn normalized(curve: &CurvePoint) -> Result<Self> {
        let mut basis = CycleBasis {
            cycles: [
                Cycle { from: 0, to: 1, sign: 1 },
                Cycle { from: 1, to: 2, sign: 1 },
            ],
        };
        let det = det2(&period_jacobian(curve, &basis)?);
        if (det - c(0.0, 2.0 * PI)).norm() < (det + c(0.0, 2.0 * PI)).norm() {
            basis.cycles[1].sign = -1;
        }
        Ok(basis)
    }

    fn validate(&self) -> Result<()> {
        for cy in &self.cycles {
            if cy.from > 2 || cy.to > 2 || cy.from == cy.to || cy.sign.abs() != 1 {
                return Err(Error::InvalidInput(format!("invalid cycle {cy:?}")));
            }
        }
        Ok(())
    }
}

pub fn det2(m: &[[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Roots of `x³ + ax + b`, sorted lexicographically by `(Re, Im)`.
pub fn cubic_roots(curve: &CurvePoint) -> Result<[Complex64; 3]> {
    let mut r = raw_roots(curve)?;
    r.sort_by(|u, v| u.re.total_cmp(&v.re).then(u.im.total_cmp(&v.im)));
    Ok(r)
}

/// Roots ordered to match `reference` by nearest assignment, for following
/// branch points through small parameter changes.
pub fn cubic_roots_near(curve: &CurvePoint, reference: &[Complex64; 3]) -> Result<[Complex64; 3]> {
    let r = raw_roots(curve)?;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let best = perms
        .iter()
        .min_by(|p, q| {
            let cost = |p: &[usize; 3]| (0..3).map(|i| (r[p[i]] - reference[i]).norm_sqr()).sum::<f64>();
            cost(p).total_cmp(&cost(q))
        })
        .unwrap();
    Ok([r[best[0]], r[best[1]], r[best[2]]])
}

fn raw_roots(curve: &CurvePoint) -> Result<[Complex64; 3]> {
    let disc = curve.discriminant();
    let scale = 4.0 * curve.a.norm().powi(3) + 27.0 * curve.b.norm_sqr();
    if disc.norm() <= 1e-12 * scale.max(1e-300) {
        return Err(Error::DegenerateDiscriminant(disc));
    }
    let (a, b) = (curve.a, curve.b);
    // Cardano: x = u - a/(3u), u³ = -b/2 + √(b²/4 + a³/27)
    let s = (b * b / 4.0 + a.powu(3) / 27.0).sqrt();
    let mut u3 = -b / 2.0 + s;
    if u3.norm() < (-b / 2.0 - s).norm() {
        u3 = -b / 2.0 - s;
    }
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [c(0.0, 0.0); 3];
    if u3.norm() == 0.0 {
        // a = b = 0 is excluded by the discriminant check
        return Err(Error::DegenerateDiscriminant(disc));
    }
    let u = u3.powf(1.0 / 3.0);
    for (k, root) in roots.iter_mut().enumerate() {
        let uk = u * omega.powu(k as u32);
        *root = uk - a / (3.0 * uk);
    }
    // Newton polish
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let f = curve.cubic(*root);
            let df = 3.0 * *root * *root + a;
            if df.norm() == 0.0 {
                break;
            }
            *root -= f / df;
        }
    }
    Ok(roots)
}

/// A segment `e_from → e_to` of the curve, optionally bent into the
/// parabola `x = m + h (s + iκ(1 - s²))` to keep clear of a point.
#[derive(Debug, Clone, Copy)]
struct Segment {
    m: Complex64,
    h: Complex64,
    /// `m - e_k` for the third branch point.
    mk: Complex64,
    sqrt_mk: Complex64,
    kappa: f64,
}

impl Segment {
    fn new(roots: &[Complex64; 3], cy: &Cycle, kappa: f64) -> Self {
        let (ei, ej) = (roots[cy.from], roots[cy.to]);
        let ek = roots[3 - cy.from - cy.to];
        let m = 0.5 * (ei + ej);
        let mk = m - ek;
        Self {
            m,
            h: 0.5 * (ej - ei),
            mk,
            sqrt_mk: mk.sqrt(),
            kappa,
        }
    }

    /// `(x, dx/ds, y / √(1-s²))` at parameter `s`.
    fn at(&self, s: f64) -> (Complex64, Complex64, Complex64) {
        let ik = c(0.0, self.kappa);
        let x = self.m + self.h * (s + ik * (1.0 - s * s));
        let dx = self.h * (1.0 - 2.0 * ik * s);
        let f1 = (1.0 + ik * (1.0 - s)).sqrt();
        let f2 = (1.0 - ik * (1.0 + s)).sqrt();
        let fk = ((x - self.m) / self.mk + 1.0).sqrt();
        let y_red = c(0.0, 1.0) * self.h * f1 * f2 * self.sqrt_mk * fk;
        (x, dx, y_red)
    }

    /// `2 ∫ f dx` along the segment, given `g = f √(1-s²)` as a function of
    /// `(x, y/√(1-s²), √(1-s²))`; the extra `√(1-s²)` is `du`-Jacobian of
    /// `s = sin(πu/2)`.
    fn integrate<F>(&self, opts: &AdaptiveOptions, mut g: F) -> Result<Complex64>
    where
        F: FnMut(Complex64, Complex64, f64) -> Complex64,
    {
        let v = adaptive(-1.0, 1.0, opts, |u| {
            let s = (0.5 * PI * u).sin();
            let root = (0.5 * PI * u).cos();
            let (x, dx, y_red) = self.at(s);
            // ds = (π/2) √(1-s²) du
            Ok(g(x, y_red, root) * dx * (0.5 * PI))
        })?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteEvaluation {
                location: "period integrand".into(),
            });
        }
        Ok(2.0 * v)
    }

    fn min_distance(&self, q: Complex64) -> f64 {
        (0..=200)
            .map(|i| self.at(-1.0 + i as f64 / 100.0).0)
            .fold(f64::INFINITY, |m, x| m.min((x - q).norm()))
    }
}

fn quad_opts() -> AdaptiveOptions {
    AdaptiveOptions {
        order: 24,
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_depth: 30,
    }
}

fn roots_for(curve: &CurvePoint, reference: Option<&[Complex64; 3]>) -> Result<[Complex64; 3]> {
    match reference {
        Some(r) => cubic_roots_near(curve, r),
        None => cubic_roots(curve),
    }
}

/// `(z₁, z₂)`, `z_i = ∮_{γ_i} y dx`.
pub fn periods(curve: &CurvePoint, basis: &CycleBasis) -> Result<[Complex64; 2]> {
    periods_tracked(curve, basis, None)
}

/// As [`periods`], with branch points labelled by proximity to `reference`.
pub fn periods_tracked(
    curve: &CurvePoint,
    basis: &CycleBasis,
    reference: Option<&[Complex64; 3]>,
) -> Result<[Complex64; 2]> {
    basis.validate()?;
    let roots = roots_for(curve, reference)?;
    let mut out = [c(0.0, 0.0); 2];
    for (slot, cy) in out.iter_mut().zip(&basis.cycles) {
        let seg = Segment::new(&roots, cy, 0.0);
        // y ds = y_red (1-s²) du (π/2)
        *slot = seg.integrate(&quad_opts(), |_, y_red, root| y_red * root * root)? * cy.sign as f64;
    }
    Ok(out)
}

/// `J[i] = (∂z_i/∂a, ∂z_i/∂b) = (∮ x dx/2y, ∮ dx/2y)`.
pub fn period_jacobian(curve: &CurvePoint, basis: &CycleBasis) -> Result<[[Complex64; 2]; 2]> {
    period_jacobian_tracked(curve, basis, None)
}

pub fn period_jacobian_tracked(
    curve: &CurvePoint,
    basis: &CycleBasis,
    reference: Option<&[Complex64; 3]>,
) -> Result<[[Complex64; 2]; 2]> {
    basis.validate()?;
    let roots = roots_for(curve, reference)?;
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for (row, cy) in out.iter_mut().zip(&basis.cycles) {
        let seg = Segment::new(&roots, cy, 0.0);
        let sg = cy.sign as f64;
        // 1/2y = 1/(2 y_red √(1-s²)); the √ cancels against ds
        row[0] = sg * seg.integrate(&quad_opts(), |x, y_red, _| x / (2.0 * y_red))?;
        row[1] = sg * seg.integrate(&quad_opts(), |_, y_red, _| 1.0 / (2.0 * y_red))?;
    }
    Ok(out)
}

/// Detour taken by a θ contour to avoid `x = q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deformation {
    pub cycle: usize,
    /// Bend parameter `κ` of `x = m + h (s + iκ(1 - s²))`.
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaCoords {
    pub theta: [Complex64; 2],
    pub deformations: Vec<Deformation>,
    pub note: String,
}

/// Controls for the θ contours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourOptions {
    /// Collision margin as a fraction of the branch-point scale.
    pub margin: f64,
    /// Bend the contour when `q` is closer than this fraction of the
    /// segment half-span.
    pub bend_threshold: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            margin: 1e-3,
            bend_threshold: 0.25,
        }
    }
}

/// `θ_i = -∮_{γ_i} (p/(x-q) + r) dx/2y`.
///
/// The values are representatives modulo `2πi`: moving `q` across a
/// segment changes them by `±2πi`. Only differences along continuous
/// paths and `exp(θ)` are convention-free.
pub fn theta_coords(curve: &CurvePoint, fiber: &FiberPoint, basis: &CycleBasis) -> Result<ThetaCoords> {
    theta_coords_with(curve, fiber, basis, None, &ContourOptions::default(), None)
}

/// As [`theta_coords`] with explicit root tracking, contour options and,
/// optionally, the bends to reuse (so that nearby evaluations stay on one
/// branch).
pub fn theta_coords_with(
    curve: &CurvePoint,
    fiber: &FiberPoint,
    basis: &CycleBasis,
    reference: Option<&[Complex64; 3]>,
    opts: &ContourOptions,
    bends: Option<&[Deformation]>,
) -> Result<ThetaCoords> {
    basis.validate()?;
    if fiber.p.norm() == 0.0 {
        return Err(Error::ZeroP);
    }
    let roots = roots_for(curve, reference)?;
    let scale = roots.iter().fold(1.0f64, |m, e| m.max(e.norm()));
    let margin = opts.margin * scale;
    let q = fiber.q;
    let mut theta = [c(0.0, 0.0); 2];
    let mut deformations = Vec::new();
    for (idx, cy) in basis.cycles.iter().enumerate() {
        for &e in [roots[cy.from], roots[cy.to]].iter() {
            if (e - q).norm() < margin {
                return Err(Error::ContourCollision(q));
            }
        }
        let kappa = match bends {
            Some(list) => list.iter().find(|d| d.cycle == idx).map_or(0.0, |d| d.kappa),
            None => {
                let third = roots[3 - cy.from - cy.to];
                choose_bend(&Segment::new(&roots, cy, 0.0), q, third, opts.bend_threshold)
            }
        };
        let seg = Segment::new(&roots, cy, kappa);
        if seg.min_distance(q) < margin {
            return Err(Error::ContourCollision(q));
        }
        if kappa != 0.0 {
            deformations.push(Deformation { cycle: idx, kappa });
        }
        let v = seg.integrate(&quad_opts(), |x, y_red, _| {
            (fiber.p / (x - q) + fiber.r) / (2.0 * y_red)
        })?;
        theta[idx] = -(cy.sign as f64) * v;
    }
    Ok(ThetaCoords {
        theta,
        deformations,
        note: "theta is defined modulo 2*pi*i; contours bend away from x = q".into(),
    })
}

/// Bend that keeps the contour clear of `q` without crossing it: the
/// parabola bulges to the side of the segment away from `q`, by the largest
/// amount that neither sweeps over nor grazes the third branch point.
fn choose_bend(seg: &Segment, q: Complex64, third: Complex64, threshold: f64) -> f64 {
    let t = (q - seg.m) / seg.h;
    let near = t.re.abs() < 1.0 + threshold && t.im.abs() < threshold;
    if !near {
        return 0.0;
    }
    let side = if t.im >= 0.0 { -1.0 } else { 1.0 };
    let e = (third - seg.m) / seg.h;
    let clearance = |kappa: f64| {
        // the swept region is between s ↦ s and s ↦ s + iκ(1 - s²)
        let inside = e.re.abs() < 1.0 && e.im * side > 0.0 && e.im.abs() < kappa * (1.0 - e.re * e.re);
        if inside {
            return 0.0;
        }
        let bent = Segment { kappa: side * kappa, ..*seg };
        bent.min_distance(q).min(bent.min_distance(third))
    };
    let mut best = (0.0, seg.min_distance(q).min(seg.min_distance(third)));
    for kappa in [0.5, 0.4, 0.3, 0.2, 0.1] {
        let d = clearance(kappa);
        if d > best.1 {
            best = (side * kappa, d);
        }
    }
    best.0
}

/// `(z₁, z₂, θ₁, θ₂)` at `(a, b, q, p, r)`.
pub fn zt_chart(curve: &CurvePoint, fiber: &FiberPoint, basis: &CycleBasis) -> Result<ChartPoint> {
    let z = periods(curve, basis)?;
    let t = theta_coords(curve, fiber, basis)?;
    Ok(ChartPoint::new(ZT_CHART, vec![z[0], z[1], t.theta[0], t.theta[1]]))
}

/// The branch of `√(cubic(q))` closest to `p_ref`.
pub fn continue_p(curve: &CurvePoint, q: Complex64, p_ref: Complex64) -> Complex64 {
    let p = curve.cubic(q).sqrt();
    if (p - p_ref).norm() <= (p + p_ref).norm() {
        p
    } else {
        -p
    }
}

/// Evaluates `(z₁, z₂, θ₁, θ₂)` at points near a base point `(a, b, q, p,
/// r)`, keeping root labels, contour bends and the `p` branch fixed at
/// their base values. Used for finite-difference Jacobians.
#[derive(Debug, Clone)]
pub struct ZtMap {
    pub basis: CycleBasis,
    pub roots: [Complex64; 3],
    pub bends: Vec<Deformation>,
    pub p0: Complex64,
    pub opts: ContourOptions,
}

impl ZtMap {
    pub fn at_base(curve: &CurvePoint, fiber: &FiberPoint, basis: &CycleBasis) -> Result<Self> {
        let roots = cubic_roots(curve)?;
        let opts = ContourOptions::default();
        let t = theta_coords_with(curve, fiber, basis, Some(&roots), &opts, None)?;
        Ok(Self {
            basis: *basis,
            roots,
            bends: t.deformations,
            p0: fiber.p,
            opts,
        })
    }

    /// `x = (a, b, q, r)`; `p` follows from the constraint.
    pub fn eval(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let curve = CurvePoint::new(x[0], x[1])?;
        let p = continue_p(&curve, x[2], self.p0);
        let fiber = FiberPoint::new(&curve, x[2], p, x[3])?;
        let z = periods_tracked(&curve, &self.basis, Some(&self.roots))?;
        let t = theta_coords_with(&curve, &fiber, &self.basis, Some(&self.roots), &self.opts, Some(&self.bends))?;
        Ok(vec![z[0], z[1], t.theta[0], t.theta[1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: (f64, f64), b: (f64, f64)) -> CurvePoint {
        CurvePoint::new(c(a.0, a.1), c(b.0, b.1)).unwrap()
    }

    #[test]
    fn roots_of_x3_minus_x() {
        let r = cubic_roots(&curve((-1.0, 0.0), (0.0, 0.0))).unwrap();
        for (x, e) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((x - c(e, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn roots_satisfy_vieta() {
        let cv = curve((0.3, -1.2), (2.0, 0.7));
        let r = cubic_roots(&cv).unwrap();
        assert!((r[0] + r[1] + r[2]).norm() < 1e-12);
        assert!((r[0] * r[1] + r[0] * r[2] + r[1] * r[2] - cv.a).norm() < 1e-12);
        assert!((r[0] * r[1] * r[2] + cv.b).norm() < 1e-12);
    }

    #[test]
    fn degenerate_curve_is_rejected() {
        // 4(-3)^3 + 27(2)^2 = 0
        assert!(matches!(
            CurvePoint::new(c(-3.0, 0.0), c(2.0, 0.0)),
            Err(Error::DegenerateDiscriminant(_))
        ));
    }

    #[test]
    fn normalized_basis_has_minus_two_pi_i_determinant() {
        let cv = curve((1.0, 0.0), (1.0, 0.0));
        let basis = CycleBasis::normalized(&cv).unwrap();
        let det = det2(&period_jacobian(&cv, &basis).unwrap());
        assert!((det - c(0.0, -2.0 * PI)).norm() < 1e-10, "{det}");
    }

    #[test]
    fn zero_p_is_rejected() {
        let cv = curve((-1.0, 0.0), (0.0, 0.0));
        assert_eq!(FiberPoint::new(&cv, c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)), Err(Error::ZeroP));
    }
}
