use joyce_tau::a2::{hamiltonian_leaf_flow_with, leaf_tau_with, LeafOptions, LeafTauOptions, LeafTrajectory};
use joyce_tau::bps::{conifold_truncation, log_tau, Section, TauOptions, UncoupledBpsStructure, CHART};
use joyce_tau::elliptic::{det2, period_jacobian, periods, theta_coords, CurvePoint, CycleBasis, FiberPoint};
use joyce_tau::forms::{PathQuadrature, Polyline};
use joyce_tau::oscillator::{fg_coordinates, OscillatorPotential};
use joyce_tau::verify::{self, CheckOutcome, VerifyOptions};
use joyce_tau::{Complex64, Error};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::config::{cxs, BpsTauParams, ConifoldParams, FgParams, FibrePoint, Job, JobConfig, PiTauParams, VerifyParams};
use crate::output::Table;

#[derive(Debug)]
pub enum JobError {
    Config(String),
    Numerical(Error),
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        JobError::Numerical(e)
    }
}

type JobResult<T> = Result<T, JobError>;

fn config_err<T>(msg: impl Into<String>) -> JobResult<T> {
    Err(JobError::Config(msg.into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualCheck {
    pub name: String,
    pub max_residual: f64,
    /// Absent when the residual is only reported.
    pub threshold: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct JobReport {
    pub kind: &'static str,
    pub seed: Option<u64>,
    pub passed: bool,
    pub checks: Vec<ResidualCheck>,
    pub notes: Vec<String>,
    /// Kind-specific summary values.
    pub values: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verify: Vec<CheckOutcome>,
}

pub struct JobOutput {
    pub tables: Vec<(String, Table)>,
    pub report: JobReport,
    /// Set when a check raised a domain error rather than just missing its
    /// threshold.
    pub aborted: bool,
}

pub struct RunSettings {
    pub seed: Option<u64>,
    pub tol_scale: f64,
}

impl JobReport {
    fn new(kind: &'static str, seed: Option<u64>) -> Self {
        Self {
            kind,
            seed,
            passed: true,
            checks: Vec::new(),
            notes: Vec::new(),
            values: BTreeMap::new(),
            verify: Vec::new(),
        }
    }

    /// Judges each residual against the configured threshold.
    fn judge(&mut self, residuals: &BTreeMap<String, f64>, cfg: &JobConfig, scale: f64) {
        for (name, &value) in residuals {
            let threshold = cfg.tolerances.residuals.get(name).map(|t| t * scale);
            let passed = threshold.is_none_or(|t| value < t);
            self.passed &= passed;
            self.checks.push(ResidualCheck {
                name: name.clone(),
                max_residual: value,
                threshold,
                passed,
            });
        }
    }

    fn value(&mut self, name: &str, v: impl Serialize) {
        self.values.insert(name.into(), serde_json::to_value(v).unwrap_or_default());
    }
}

pub fn run(cfg: &JobConfig, settings: &RunSettings) -> JobResult<JobOutput> {
    match &cfg.job {
        Job::BpsTau(p) => bps_tau(cfg, p, settings),
        Job::Conifold(p) => conifold(cfg, p, settings),
        Job::Periods(p) => periods_job(cfg, &p.points, settings),
        Job::Fg(p) => fg(p, settings),
        Job::PiTau(p) => pi_tau(cfg, p, settings),
        Job::Verify(p) => verify_job(p, settings),
    }
}

fn load_structure(cfg: &JobConfig, name: &str) -> JobResult<UncoupledBpsStructure> {
    if let Ok(s) = verify::bps_fixture(name) {
        return Ok(s);
    }
    let path = cfg.base_dir.join(name);
    let text = std::fs::read_to_string(&path).map_err(|e| JobError::Config(format!("{}: {e}", path.display())))?;
    UncoupledBpsStructure::from_json(&text).map_err(|e| JobError::Config(e.to_string()))
}

fn build_path(rank: usize, vertices: &[Vec<crate::config::Cx>], subdivisions: usize) -> JobResult<Polyline> {
    let vs: Vec<Vec<Complex64>> = vertices.iter().map(|v| cxs(v)).collect();
    if let Some(v) = vs.iter().find(|v| v.len() != rank) {
        return config_err(format!("path vertex has {} coordinates, the structure has rank {rank}", v.len()));
    }
    let mut out = vec![vs[0].clone()];
    for w in vs.windows(2) {
        for k in 1..=subdivisions {
            let t = k as f64 / subdivisions as f64;
            out.push(w[0].iter().zip(&w[1]).map(|(a, b)| a + (b - a) * t).collect());
        }
    }
    Polyline::from_coords(CHART, out).map_err(|e| JobError::Config(e.to_string()))
}

fn tau_options(cfg: &JobConfig) -> TauOptions {
    TauOptions {
        quadrature: PathQuadrature {
            tol: cfg.tolerances.quadrature,
            ..PathQuadrature::default()
        },
        ..TauOptions::default()
    }
}

fn bps_tau(cfg: &JobConfig, p: &BpsTauParams, s: &RunSettings) -> JobResult<JobOutput> {
    let bps = load_structure(cfg, &p.structure)?;
    let path = build_path(bps.rank(), &p.path, p.subdivisions)?;
    if !p.section.is_empty() && p.section.len() != bps.d {
        return config_err(format!("section needs {} entries", bps.d));
    }
    let opts = TauOptions {
        choice: p.choice,
        section: Section { upper: cxs(&p.section) },
        ..tau_options(cfg)
    };
    let rep = log_tau(&bps, &path, p.epsilon.get(), &opts)?;
    let mut report = JobReport::new("bps-tau", s.seed);
    report.judge(&rep.residuals, cfg, s.tol_scale);
    report.notes = rep.notes.clone();
    report.value("log_tau", rep.log_tau);
    report.value("choice", rep.choice);
    Ok(JobOutput {
        tables: vec![("bps-tau.csv".into(), Table::from_report(&rep))],
        report,
        aborted: false,
    })
}

fn conifold(cfg: &JobConfig, p: &ConifoldParams, s: &RunSettings) -> JobResult<JobOutput> {
    let path = build_path(4, &p.path, 1)?;
    let opts = tau_options(cfg);
    let values: Vec<Complex64> = p
        .orders
        .par_iter()
        .map(|&n| log_tau(&conifold_truncation(n, p.pairing), &path, p.epsilon.get(), &opts).map(|r| r.log_tau))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&["n"], &["logtau"], &["residual_truncation"]);
    let mut worst = 0.0f64;
    for (i, (&n, v)) in p.orders.iter().zip(&values).enumerate() {
        let diff = if i == 0 { f64::NAN } else { (v - values[i - 1]).norm() };
        if i > 0 {
            worst = worst.max(diff);
        }
        table.row(&[n as f64], &[*v], &[diff]);
    }
    let mut report = JobReport::new("conifold", s.seed);
    if values.len() > 1 {
        report.judge(&BTreeMap::from([("truncation".to_string(), worst)]), cfg, s.tol_scale);
    }
    report.value("log_tau", &values);
    Ok(JobOutput {
        tables: vec![("conifold.csv".into(), table)],
        report,
        aborted: false,
    })
}

/// Curve and fibre of a configured point, checked up front so that bad
/// points are reported as configuration errors.
fn fibre(pt: &FibrePoint) -> JobResult<(CurvePoint, FiberPoint)> {
    let curve = CurvePoint::new(pt.a.get(), pt.b.get()).map_err(|e| JobError::Config(e.to_string()))?;
    let q = pt.q.get();
    let f = FiberPoint::new(&curve, q, curve.cubic(q).sqrt(), pt.r.get()).map_err(|e| JobError::Config(e.to_string()))?;
    Ok((curve, f))
}

fn periods_job(cfg: &JobConfig, points: &[FibrePoint], s: &RunSettings) -> JobResult<JobOutput> {
    let fibres: Vec<_> = points.iter().map(fibre).collect::<JobResult<_>>()?;
    let rows: Vec<([Complex64; 8], f64)> = fibres
        .par_iter()
        .map(|(curve, f)| -> Result<_, Error> {
            let basis = CycleBasis::normalized(curve)?;
            let z = periods(curve, &basis)?;
            let t = theta_coords(curve, f, &basis)?.theta;
            let det = (det2(&period_jacobian(curve, &basis)?) - Complex64::new(0.0, -2.0 * PI)).norm();
            Ok(([curve.a, curve.b, f.q, f.r, z[0], z[1], t[0], t[1]], det))
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&[], &["a", "b", "q", "r", "z1", "z2", "theta1", "theta2"], &["residual_det"]);
    let mut worst = 0.0f64;
    for (v, det) in &rows {
        worst = worst.max(*det);
        table.row(&[], v, &[*det]);
    }
    let mut report = JobReport::new("periods", s.seed);
    report.judge(&BTreeMap::from([("determinant".to_string(), worst)]), cfg, s.tol_scale);
    report.notes.push("theta is defined modulo 2πi; z and theta use the basis with det ∂z/∂(a,b) = -2πi".into());
    Ok(JobOutput {
        tables: vec![("periods.csv".into(), table)],
        report,
        aborted: false,
    })
}

fn fg(p: &FgParams, s: &RunSettings) -> JobResult<JobOutput> {
    let eps = p.epsilon.get();
    let pots: Vec<OscillatorPotential> = p
        .points
        .iter()
        .map(|pt| {
            let (curve, f) = fibre(pt)?;
            OscillatorPotential::new(curve.a, curve.b, f.q, f.p, f.r, eps).map_err(|e| JobError::Config(e.to_string()))
        })
        .collect::<JobResult<_>>()?;
    let xs: Vec<[Complex64; 2]> = pots.par_iter().map(fg_coordinates).collect::<Result<_, _>>()?;
    let mut table = Table::new(&[], &["a", "b", "q", "r", "x1", "x2"], &[]);
    for (pot, x) in pots.iter().zip(&xs) {
        table.row(&[], &[pot.a, pot.b, pot.q, pot.r, x[0], x[1]], &[]);
    }
    let mut report = JobReport::new("fg", s.seed);
    report.notes.push("x is defined modulo 2πi".into());
    Ok(JobOutput {
        tables: vec![("fg.csv".into(), table)],
        report,
        aborted: false,
    })
}

fn pi_tau(cfg: &JobConfig, p: &PiTauParams, s: &RunSettings) -> JobResult<JobOutput> {
    let (a0, a1, eps) = (p.a0.get(), p.a1.get(), p.epsilon.get());
    let y0 = [a0, p.q0.get(), p.p0.get()];
    let opts = LeafOptions {
        rtol: cfg.tolerances.ode_rtol,
        pole_guard: cfg.tolerances.pole_guard,
    };
    let mut grid: Vec<Complex64> = (0..=p.steps).map(|k| a0 + (a1 - a0) * (k as f64 / p.steps as f64)).collect();
    let mut report = JobReport::new("pi-tau", s.seed);
    let traj: LeafTrajectory = loop {
        match hamiltonian_leaf_flow_with(y0, eps, &grid, &opts) {
            Ok(t) => break t,
            Err(Error::MovablePoleEncountered { a, estimate }) => {
                // keep the grid points strictly before the step that blew up
                let reached = ((a - a0) / (a1 - a0)).re;
                let keep = grid.iter().filter(|g| ((*g - a0) / (a1 - a0)).re < reached).count();
                report.notes.push(format!("stopped before a movable pole near a = {estimate}"));
                report.value("pole_estimate", estimate);
                if keep == grid.len() {
                    return Err(Error::MovablePoleEncountered { a, estimate }.into());
                }
                grid.truncate(keep.max(1));
            }
            Err(e) => return Err(e.into()),
        }
    };
    let rep = leaf_tau_with(&traj, &LeafTauOptions { assembled: false })?;
    let mut residuals = rep.residuals.clone();
    if p.assembled != Some(false) {
        // the Fock–Goncharov term is costly, so it is cross-checked on a
        // coarser subset of the same samples
        let stride = (traj.samples.len() - 1).div_ceil(p.assembled_steps).max(1);
        let coarse = LeafTrajectory {
            epsilon: traj.epsilon,
            samples: traj.samples.iter().step_by(stride).copied().collect(),
        };
        match leaf_tau_with(&coarse, &LeafTauOptions { assembled: true }) {
            Ok(r) => {
                for key in ["fg_drift", "leaf_derivative", "assembled"] {
                    if let Some(v) = r.residuals.get(key) {
                        residuals.insert(key.into(), *v);
                    }
                }
            }
            Err(e @ (Error::SectorDegeneracy(_) | Error::DegenerateWronskian(..))) if p.assembled.is_none() => {
                report.notes.push(format!("assembled cross-check skipped: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    report.judge(&residuals, cfg, s.tol_scale);
    report.notes.extend(rep.notes.iter().cloned());
    report.value("log_tau", rep.log_tau);
    report.value("a_end", traj.samples.last().map(|x| x.a));
    Ok(JobOutput {
        tables: vec![("pi-tau.csv".into(), Table::from_report(&rep))],
        report,
        aborted: false,
    })
}

fn verify_job(p: &VerifyParams, s: &RunSettings) -> JobResult<JobOutput> {
    let opts = VerifyOptions {
        seed: s.seed.unwrap_or(VerifyOptions::default().seed),
        tol_scale: s.tol_scale,
    };
    let ids: Vec<&str> = verify::manifest()
        .iter()
        .map(|c| c.id)
        .filter(|id| p.checks.is_empty() || p.checks.iter().any(|c| c == id))
        .collect();
    let results: Vec<(&str, Result<CheckOutcome, Error>)> =
        ids.par_iter().map(|id| (*id, verify::run_check(id, &opts))).collect();
    let mut report = JobReport::new("verify", Some(opts.seed));
    let mut table = Table::text(&["id", "measurement", "value", "threshold", "passed"]);
    let mut aborted = false;
    for (id, r) in results {
        match r {
            Ok(o) => {
                for m in &o.measurements {
                    table.text_row(vec![
                        id.into(),
                        m.name.clone(),
                        format!("{:e}", m.value),
                        format!("{:e}", m.threshold),
                        m.passed.to_string(),
                    ]);
                }
                report.passed &= o.passed;
                report.verify.push(o);
            }
            Err(e) => {
                aborted = true;
                report.passed = false;
                report.notes.push(format!("{id}: {} ({})", e, e.kind()));
            }
        }
    }
    Ok(JobOutput {
        tables: vec![("verify.csv".into(), table)],
        report,
        aborted,
    })
}
