//! Complex 1-forms on coordinate charts: line integrals along polylines,
//! exterior-derivative residuals by finite differences, and the scalar
//! shifts relating tau-functions built from different symplectic
//! potentials.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// A point in a named coordinate chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub chart: String,
    pub coords: Vec<Complex64>,
}

impl ChartPoint {
    pub fn new(chart: impl Into<String>, coords: Vec<Complex64>) -> Self {
        Self {
            chart: chart.into(),
            coords,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn is_finite(&self) -> bool {
        self.coords.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

type Evaluator = dyn Fn(&[Complex64]) -> Result<Vec<Complex64>> + Send + Sync;

/// A complex 1-form `Σ_i c_i(x) dx_i`, given by an evaluator returning the
/// coefficient vector at a chart point.
#[derive(Clone)]
pub struct OneFormField {
    chart: String,
    dim: usize,
    pub expected_closed: bool,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for OneFormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OneFormField")
            .field("chart", &self.chart)
            .field("dim", &self.dim)
            .field("expected_closed", &self.expected_closed)
            .finish_non_exhaustive()
    }
}

impl OneFormField {
    pub fn new<F>(chart: impl Into<String>, dim: usize, expected_closed: bool, eval: F) -> Self
    where
        F: Fn(&[Complex64]) -> Result<Vec<Complex64>> + Send + Sync + 'static,
    {
        Self {
            chart: chart.into(),
            dim,
            expected_closed,
            eval: Arc::new(eval),
        }
    }

    pub fn chart(&self) -> &str {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficients at `point`, checked for chart, length and finiteness.
    pub fn evaluate(&self, point: &ChartPoint) -> Result<Vec<Complex64>> {
        self.check_point(point)?;
        self.evaluate_coords(&point.coords)
    }

    fn check_point(&self, point: &ChartPoint) -> Result<()> {
        if point.chart != self.chart {
            return Err(Error::ChartMismatch {
                expected: self.chart.clone(),
                found: point.chart.clone(),
            });
        }
        if point.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.dim(),
            });
        }
        Ok(())
    }

    fn evaluate_coords(&self, coords: &[Complex64]) -> Result<Vec<Complex64>> {
        let c = (self.eval)(coords)?;
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: c.len(),
            });
        }
        if c.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFiniteEvaluation {
                location: format!("{:?}", coords),
            });
        }
        Ok(c)
    }

    /// Pairing with a tangent vector at `point`.
    pub fn contract(&self, point: &ChartPoint, tangent: &[Complex64]) -> Result<Complex64> {
        let c = self.evaluate(point)?;
        Ok(c.iter().zip(tangent).map(|(a, b)| a * b).sum())
    }

    /// `self + other` on the same chart.
    pub fn add(&self, other: &OneFormField) -> Result<OneFormField> {
        if other.chart != self.chart || other.dim != self.dim {
            return Err(Error::ChartMismatch {
                expected: self.chart.clone(),
                found: other.chart.clone(),
            });
        }
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Ok(OneFormField {
            chart: self.chart.clone(),
            dim: self.dim,
            expected_closed: self.expected_closed && other.expected_closed,
            eval: Arc::new(move |x| {
                let u = a(x)?;
                let v = b(x)?;
                Ok(u.iter().zip(&v).map(|(p, q)| p + q).collect())
            }),
        })
    }

    /// `s * self`.
    pub fn scale(&self, s: Complex64) -> OneFormField {
        let a = self.eval.clone();
        OneFormField {
            chart: self.chart.clone(),
            dim: self.dim,
            expected_closed: self.expected_closed,
            eval: Arc::new(move |x| Ok(a(x)?.into_iter().map(|c| c * s).collect())),
        }
    }
}

/// A piecewise-linear path in one chart.
///
/// A single vertex is accepted and denotes the zero-length path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    chart: String,
    vertices: Vec<Vec<Complex64>>,
}

impl Polyline {
    pub fn new(points: Vec<ChartPoint>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidPath("a path needs at least one point".into()))?;
        let chart = first.chart.clone();
        let dim = first.dim();
        for (i, p) in points.iter().enumerate() {
            if p.chart != chart {
                return Err(Error::ChartMismatch {
                    expected: chart,
                    found: p.chart.clone(),
                });
            }
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !p.is_finite() {
                return Err(Error::InvalidPath(format!("vertex {i} is not finite")));
            }
            if i > 0 && points[i - 1].coords == p.coords {
                return Err(Error::InvalidPath(format!(
                    "vertices {} and {i} coincide",
                    i - 1
                )));
            }
        }
        Ok(Self {
            chart,
            vertices: points.into_iter().map(|p| p.coords).collect(),
        })
    }

    /// Builds a path from raw coordinate vectors.
    pub fn from_coords(chart: &str, vertices: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(
            vertices
                .into_iter()
                .map(|c| ChartPoint::new(chart, c))
                .collect(),
        )
    }

    pub fn chart(&self) -> &str {
        &self.chart
    }

    pub fn vertices(&self) -> &[Vec<Complex64>] {
        &self.vertices
    }

    pub fn start(&self) -> ChartPoint {
        ChartPoint::new(self.chart.clone(), self.vertices[0].clone())
    }

    pub fn end(&self) -> ChartPoint {
        ChartPoint::new(self.chart.clone(), self.vertices.last().unwrap().clone())
    }

    pub fn segments(&self) -> impl Iterator<Item = (&[Complex64], &[Complex64])> {
        self.vertices
            .windows(2)
            .map(|w| (w[0].as_slice(), w[1].as_slice()))
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self {
            chart: self.chart.clone(),
            vertices: v,
        }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &Polyline) -> Result<Self> {
        if other.chart != self.chart {
            return Err(Error::ChartMismatch {
                expected: self.chart.clone(),
                found: other.chart.clone(),
            });
        }
        if self.vertices.last() != other.vertices.first() {
            return Err(Error::InvalidPath("paths do not join".into()));
        }
        let mut v = self.vertices.clone();
        v.extend(other.vertices.iter().skip(1).cloned());
        Ok(Self {
            chart: self.chart.clone(),
            vertices: v,
        })
    }

    /// Point at parameter `s ∈ [0, 1]` on segment `seg`.
    pub fn point_on_segment(&self, seg: usize, s: f64) -> Vec<Complex64> {
        let (a, b) = (&self.vertices[seg], &self.vertices[seg + 1]);
        a.iter().zip(b).map(|(x, y)| x + (y - x) * s).collect()
    }
}

fn segment_integral(
    form: &OneFormField,
    a: &[Complex64],
    b: &[Complex64],
    rule: &GaussLegendre,
    lo: f64,
    hi: f64,
) -> Result<Complex64> {
    let tangent: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); a.len()];
    rule.integrate(lo, hi, |s| {
        for (k, slot) in buf.iter_mut().enumerate() {
            *slot = a[k] + tangent[k] * s;
        }
        let c = form.evaluate_coords(&buf)?;
        Ok(c.iter().zip(&tangent).map(|(p, q)| p * q).sum())
    })
}

/// `∫_path form` with an `n`-point Gauss–Legendre rule on every segment.
pub fn integrate_one_form(
    form: &OneFormField,
    path: &Polyline,
    nodes_per_segment: usize,
) -> Result<Complex64> {
    if nodes_per_segment == 0 {
        return Err(Error::InvalidInput("nodes_per_segment must be positive".into()));
    }
    check_path(form, path)?;
    let rule = GaussLegendre::new(nodes_per_segment);
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in path.segments() {
        total += segment_integral(form, a, b, &rule, 0.0, 1.0)?;
    }
    Ok(total)
}

fn check_path(form: &OneFormField, path: &Polyline) -> Result<()> {
    if path.chart != form.chart {
        return Err(Error::ChartMismatch {
            expected: form.chart.clone(),
            found: path.chart.clone(),
        });
    }
    if path.vertices[0].len() != form.dim {
        return Err(Error::DimensionMismatch {
            expected: form.dim,
            found: path.vertices[0].len(),
        });
    }
    Ok(())
}

/// Controls for [`integrate_one_form_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathQuadrature {
    pub order: usize,
    pub tol: f64,
    pub max_levels: u32,
}

impl Default for PathQuadrature {
    fn default() -> Self {
        Self {
            order: 16,
            tol: 1e-10,
            max_levels: 12,
        }
    }
}

/// `∫_path form`, bisecting every segment uniformly until two successive
/// refinement levels agree within `tol` (relative to the result, floored
/// at 1).
pub fn integrate_one_form_adaptive(
    form: &OneFormField,
    path: &Polyline,
    opts: &PathQuadrature,
) -> Result<Complex64> {
    check_path(form, path)?;
    let rule = GaussLegendre::new(opts.order);
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in path.segments() {
        let mut pieces = 1usize;
        let mut prev = segment_integral(form, a, b, &rule, 0.0, 1.0)?;
        loop {
            pieces *= 2;
            let mut next = Complex64::new(0.0, 0.0);
            for k in 0..pieces {
                let lo = k as f64 / pieces as f64;
                let hi = (k + 1) as f64 / pieces as f64;
                next += segment_integral(form, a, b, &rule, lo, hi)?;
            }
            let diff = (next - prev).norm();
            prev = next;
            if diff <= opts.tol * next.norm().max(1.0) {
                break;
            }
            if pieces >= 1 << opts.max_levels {
                return Err(Error::QuadratureNonConvergence(diff));
            }
        }
        total += prev;
    }
    Ok(total)
}

/// Finite-difference stencils for holomorphic coefficient functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// `(f(x+h) - f(x-h)) / 2h`, error `O(h²)`.
    Central,
    /// Average of the real and imaginary central differences. For
    /// holomorphic `f` the `h²` terms cancel, leaving `O(h⁴)`.
    #[default]
    ComplexSymmetric,
}

/// Step actually used for coordinate value `x` at base step `step`.
pub fn scaled_step(step: f64, x: Complex64) -> f64 {
    step * (1.0 + x.norm())
}

/// Partial derivative of a vector-valued function along coordinate `i`.
pub fn partial<F>(f: &mut F, x: &[Complex64], i: usize, h: f64, stencil: Stencil) -> Result<Vec<Complex64>>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>,
{
    let mut probe = x.to_vec();
    let mut eval = |delta: Complex64, probe: &mut Vec<Complex64>| -> Result<Vec<Complex64>> {
        probe[i] = x[i] + delta;
        let v = f(probe)?;
        probe[i] = x[i];
        Ok(v)
    };
    let fp = eval(Complex64::new(h, 0.0), &mut probe)?;
    let fm = eval(Complex64::new(-h, 0.0), &mut probe)?;
    let mut d: Vec<Complex64> = fp.iter().zip(&fm).map(|(p, m)| (p - m) / (2.0 * h)).collect();
    if stencil == Stencil::ComplexSymmetric {
        let gp = eval(Complex64::new(0.0, h), &mut probe)?;
        let gm = eval(Complex64::new(0.0, -h), &mut probe)?;
        let ih2 = Complex64::new(0.0, 2.0 * h);
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = 0.5 * (*dk + (gp[k] - gm[k]) / ih2);
        }
    }
    Ok(d)
}

/// Jacobian `J[k][i] = ∂ f_k / ∂ x_i` with per-coordinate scaled steps.
pub fn jacobian<F>(mut f: F, x: &[Complex64], step: f64, stencil: Stencil) -> Result<Vec<Vec<Complex64>>>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>>,
{
    let mut cols = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        cols.push(partial(&mut f, x, i, scaled_step(step, x[i]), stencil)?);
    }
    let rows = cols.first().map_or(0, |c| c.len());
    Ok((0..rows)
        .map(|k| cols.iter().map(|c| c[k]).collect())
        .collect())
}

/// Antisymmetric matrix `R[i][j] = ∂_i c_j - ∂_j c_i` of the coefficients
/// `c` of `form` at `point`, by complex-symmetric central differences.
pub fn d_residual(form: &OneFormField, point: &ChartPoint, step: f64) -> Result<Vec<Vec<Complex64>>> {
    d_residual_with(form, point, step, Stencil::ComplexSymmetric)
}

pub fn d_residual_with(
    form: &OneFormField,
    point: &ChartPoint,
    step: f64,
    stencil: Stencil,
) -> Result<Vec<Vec<Complex64>>> {
    form.check_point(point)?;
    let j = jacobian(|x| form.evaluate_coords(x), &point.coords, step, stencil)?;
    let n = form.dim;
    let mut r = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            // j[c][x] = ∂_x c
            r[i][k] = j[k][i] - j[i][k];
        }
    }
    Ok(r)
}

/// Largest entry modulus of a matrix.
pub fn max_abs(m: &[Vec<Complex64>]) -> f64 {
    m.iter()
        .flat_map(|row| row.iter())
        .fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Choice of symplectic potential on the fibre over `ε = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theta0Choice {
    /// `½ i_E(Ω₀)`.
    Canonical,
    /// `-λ` for the Liouville form `λ` of a cotangent structure.
    Liouville,
    /// `i_E(Ω₀) + λ`.
    Hamiltonian,
}

/// Choice of symplectic potential on the fibre over `ε = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theta1Choice {
    /// `½ Σ ω_ij x_i dx_j`.
    Full,
    /// `Σ_{i≤d} ω_{i,i+d} x_i dx_{i+d}`.
    Polarized,
}

/// Potential for the `2iΩ_I` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaIChoice {
    /// `-Σ ω_pq z_p dθ_q`.
    Standard,
    /// `Σ ω_pq θ_q dz_p`.
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PotentialChoice {
    pub theta0: Theta0Choice,
    pub theta1: Theta1Choice,
    pub theta_i: ThetaIChoice,
}

impl PotentialChoice {
    pub const CANONICAL: PotentialChoice = PotentialChoice {
        theta0: Theta0Choice::Canonical,
        theta1: Theta1Choice::Full,
        theta_i: ThetaIChoice::Standard,
    };

    /// Hamiltonian `Θ₀` with polarised `Θ₁`, the pair under which the
    /// uncoupled BPS tau-function takes its classical form.
    pub const HAMILTONIAN_POLARIZED: PotentialChoice = PotentialChoice {
        theta0: Theta0Choice::Hamiltonian,
        theta1: Theta1Choice::Polarized,
        theta_i: ThetaIChoice::Standard,
    };

    pub fn new(theta0: Theta0Choice, theta1: Theta1Choice, theta_i: ThetaIChoice) -> Self {
        Self {
            theta0,
            theta1,
            theta_i,
        }
    }
}

impl Default for PotentialChoice {
    fn default() -> Self {
        Self::CANONICAL
    }
}

/// Scalars entering [`shift_by_potential_change`], each evaluated at the
/// point of interest and already weighted as it enters `log τ` (so on the
/// `ε`-slice `half_ie_lambda` carries its `ε⁻²` and `flip_k` its `ε⁻¹`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ShiftData {
    /// `½ i_E(λ)`.
    pub half_ie_lambda: Option<Complex64>,
    /// `½ Σ_i ω_{i,i+d} x_i x_{i+d}`.
    pub half_omega_xx: Option<Complex64>,
    /// `K = Σ ω_pq z_p θ_q`.
    pub flip_k: Option<Complex64>,
}

impl ShiftData {
    fn get(v: Option<Complex64>, name: &'static str) -> Result<Complex64> {
        v.ok_or(Error::MissingShiftDatum(name))
    }
}

/// Offset of `log τ` for `choice` relative to the canonical choice.
fn offset(choice: &PotentialChoice, data: &ShiftData) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    // Θ₀ᴴ - Θ₀ = Θ₀ - Θ₀ᴸ = ½ d i_E(λ), and Θ₀ enters with a plus sign.
    match choice.theta0 {
        Theta0Choice::Canonical => {}
        Theta0Choice::Hamiltonian => s += ShiftData::get(data.half_ie_lambda, "half_ie_lambda")?,
        Theta0Choice::Liouville => s -= ShiftData::get(data.half_ie_lambda, "half_ie_lambda")?,
    }
    // Θ₁ᴾ - Θ₁ = d(½ Σ ω x_i x_{i+d}), and Θ₁ enters with a minus sign.
    if choice.theta1 == Theta1Choice::Polarized {
        s -= ShiftData::get(data.half_omega_xx, "half_omega_xx")?;
    }
    // 2iΘ'_I - 2iΘ_I = dK.
    if choice.theta_i == ThetaIChoice::Flipped {
        s += ShiftData::get(data.flip_k, "flip_k")?;
    }
    Ok(s)
}

/// Re-expresses `log τ` computed with potentials `from` as the value for
/// potentials `to`.
pub fn shift_by_potential_change(
    log_tau: Complex64,
    from: &PotentialChoice,
    to: &PotentialChoice,
    data: &ShiftData,
) -> Result<Complex64> {
    if from == to {
        return Ok(log_tau);
    }
    let mut out = log_tau;
    if from.theta0 != to.theta0 {
        let f = PotentialChoice { theta0: from.theta0, ..PotentialChoice::CANONICAL };
        let t = PotentialChoice { theta0: to.theta0, ..PotentialChoice::CANONICAL };
        out += offset(&t, data)? - offset(&f, data)?;
    }
    if from.theta1 != to.theta1 {
        let f = PotentialChoice { theta1: from.theta1, ..PotentialChoice::CANONICAL };
        let t = PotentialChoice { theta1: to.theta1, ..PotentialChoice::CANONICAL };
        out += offset(&t, data)? - offset(&f, data)?;
    }
    if from.theta_i != to.theta_i {
        let f = PotentialChoice { theta_i: from.theta_i, ..PotentialChoice::CANONICAL };
        let t = PotentialChoice { theta_i: to.theta_i, ..PotentialChoice::CANONICAL };
        out += offset(&t, data)? - offset(&f, data)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(v: &[(f64, f64)]) -> ChartPoint {
        ChartPoint::new("z", v.iter().map(|&(a, b)| c(a, b)).collect())
    }

    fn d_z1z2() -> OneFormField {
        OneFormField::new("z", 2, true, |x| Ok(vec![x[1], x[0]]))
    }

    #[test]
    fn exact_differential_of_product() {
        let path = Polyline::new(vec![pt(&[(0.0, 0.0), (0.0, 0.0)]), pt(&[(1.0, 0.0), (2.0, 0.0)])]).unwrap();
        let v = integrate_one_form(&d_z1z2(), &path, 4).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_form_is_linear_in_length() {
        let k = c(0.3, -1.2);
        let form = OneFormField::new("z", 2, true, move |_| Ok(vec![k, c(0.0, 0.0)]));
        let path = Polyline::new(vec![pt(&[(0.0, 0.0), (0.0, 0.0)]), pt(&[(2.5, 0.0), (0.0, 0.0)])]).unwrap();
        let v = integrate_one_form(&form, &path, 1).unwrap();
        assert!((v - k * 2.5).norm() < 1e-14);
    }

    #[test]
    fn d_residual_of_dz1_wedge_dz2_coefficient() {
        let form = OneFormField::new("z", 2, false, |x| Ok(vec![c(0.0, 0.0), x[0]]));
        let r = d_residual(&form, &pt(&[(0.4, 0.1), (-1.0, 2.0)]), 1e-5).unwrap();
        assert!((r[0][1] - c(1.0, 0.0)).norm() < 1e-9);
        assert!((r[1][0] + c(1.0, 0.0)).norm() < 1e-9);
        assert!(r[0][0].norm() == 0.0);
    }

    #[test]
    fn d_residual_of_exact_form_vanishes() {
        // d(z1^2 z2) = 2 z1 z2 dz1 + z1^2 dz2
        let form = OneFormField::new("z", 2, true, |x| Ok(vec![2.0 * x[0] * x[1], x[0] * x[0]]));
        let r = d_residual(&form, &pt(&[(0.7, -0.3), (1.1, 0.4)]), 1e-5).unwrap();
        assert!(max_abs(&r) < 1e-9);
    }

    #[test]
    fn chart_and_dimension_are_checked() {
        let f = d_z1z2();
        let other = ChartPoint::new("w", vec![c(0.0, 0.0); 2]);
        assert!(matches!(f.evaluate(&other), Err(Error::ChartMismatch { .. })));
        let short = ChartPoint::new("z", vec![c(0.0, 0.0)]);
        assert!(matches!(f.evaluate(&short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn non_finite_coefficients_are_reported() {
        let f = OneFormField::new("z", 1, true, |x| Ok(vec![x[0].inv()]));
        let path = Polyline::new(vec![pt(&[(-1.0, 0.0)]), pt(&[(1.0, 0.0)])]).unwrap();
        // odd node count puts a node on the pole
        assert!(matches!(
            integrate_one_form(&f, &path, 3),
            Err(Error::NonFiniteEvaluation { .. })
        ));
    }

    #[test]
    fn polyline_rejects_repeated_vertices() {
        let p = pt(&[(1.0, 0.0)]);
        assert!(matches!(Polyline::new(vec![p.clone(), p]), Err(Error::InvalidPath(_))));
        assert!(Polyline::new(vec![]).is_err());
    }

    #[test]
    fn adaptive_path_quadrature_converges() {
        let form = OneFormField::new("z", 1, true, |x| Ok(vec![x[0].exp()]));
        let path = Polyline::new(vec![pt(&[(0.0, 0.0)]), pt(&[(1.0, 3.0)]), pt(&[(-2.0, 0.5)])]).unwrap();
        let v = integrate_one_form_adaptive(&form, &path, &PathQuadrature::default()).unwrap();
        let exact = c(-2.0, 0.5).exp() - 1.0;
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn equal_choices_leave_value_unchanged() {
        let v = c(1.5, -0.25);
        for ch in [PotentialChoice::CANONICAL, PotentialChoice::HAMILTONIAN_POLARIZED] {
            assert_eq!(shift_by_potential_change(v, &ch, &ch, &ShiftData::default()), Ok(v));
        }
    }

    #[test]
    fn missing_datum_is_named() {
        let to = PotentialChoice {
            theta_i: ThetaIChoice::Flipped,
            ..PotentialChoice::CANONICAL
        };
        assert_eq!(
            shift_by_potential_change(c(0.0, 0.0), &PotentialChoice::CANONICAL, &to, &ShiftData::default()),
            Err(Error::MissingShiftDatum("flip_k"))
        );
    }

    #[test]
    fn flip_adds_k_and_polarisation_subtracts_half_omega_xx() {
        let data = ShiftData {
            half_ie_lambda: Some(c(0.5, 0.0)),
            half_omega_xx: Some(c(0.0, 2.0)),
            flip_k: Some(c(3.0, 1.0)),
        };
        let flipped = PotentialChoice {
            theta_i: ThetaIChoice::Flipped,
            ..PotentialChoice::CANONICAL
        };
        let v = shift_by_potential_change(c(0.0, 0.0), &PotentialChoice::CANONICAL, &flipped, &data).unwrap();
        assert_eq!(v, c(3.0, 1.0));
        let v = shift_by_potential_change(
            c(0.0, 0.0),
            &PotentialChoice::CANONICAL,
            &PotentialChoice::HAMILTONIAN_POLARIZED,
            &data,
        )
        .unwrap();
        assert_eq!(v, c(0.5, -2.0));
    }
}
