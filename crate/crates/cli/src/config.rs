use joyce_tau::forms::PotentialChoice;
use joyce_tau::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// A complex number written as `1.5` or `[1.5, -0.2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cx {
    Real(f64),
    Pair([f64; 2]),
}

impl Cx {
    pub fn get(self) -> Complex64 {
        match self {
            Cx::Real(x) => Complex64::new(x, 0.0),
            Cx::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

pub fn cxs(v: &[Cx]) -> Vec<Complex64> {
    v.iter().map(|z| z.get()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct JobConfig {
    #[serde(flatten)]
    pub job: Job,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Directory the config was read from; relative inputs resolve here.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// The file as written: `params` is decoded once `kind` is known.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: String,
    #[serde(default)]
    params: Option<serde_json::Value>,
    #[serde(default)]
    tolerances: Tolerances,
    /// Output directory, relative to the working directory.
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum Job {
    BpsTau(BpsTauParams),
    Conifold(ConifoldParams),
    Periods(PeriodsParams),
    Fg(FgParams),
    PiTau(PiTauParams),
    Verify(VerifyParams),
}

impl Job {
    pub fn kind(&self) -> &'static str {
        match self {
            Job::BpsTau(_) => "bps-tau",
            Job::Conifold(_) => "conifold",
            Job::Periods(_) => "periods",
            Job::Fg(_) => "fg",
            Job::PiTau(_) => "pi-tau",
            Job::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpsTauParams {
    /// A shipped fixture name (`doubled_a1`, `random_d2`, `conifold_n5`) or
    /// a JSON file, resolved against the config's directory.
    pub structure: String,
    pub epsilon: Cx,
    /// Vertices `(z_1, …, z_2d)` of the path; `log τ` is 0 at the first.
    pub path: Vec<Vec<Cx>>,
    /// Rows per segment in the output table.
    #[serde(default = "one")]
    pub subdivisions: usize,
    #[serde(default = "hamiltonian_polarized")]
    pub choice: PotentialChoice,
    /// `θ_{d+1..2d}` of the section; zero when empty.
    #[serde(default)]
    pub section: Vec<Cx>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConifoldParams {
    /// Truncation orders, compared in the given order.
    pub orders: Vec<usize>,
    #[serde(default = "one_i64")]
    pub pairing: i64,
    pub epsilon: Cx,
    pub path: Vec<Vec<Cx>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrePoint {
    pub a: Cx,
    pub b: Cx,
    pub q: Cx,
    #[serde(default = "zero")]
    pub r: Cx,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodsParams {
    pub points: Vec<FibrePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FgParams {
    pub epsilon: Cx,
    pub points: Vec<FibrePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiTauParams {
    #[serde(default = "zero")]
    pub a0: Cx,
    pub a1: Cx,
    pub q0: Cx,
    pub p0: Cx,
    pub epsilon: Cx,
    #[serde(default = "thousand")]
    pub steps: usize,
    /// Cross-check against the assembled form built from Fock–Goncharov
    /// coordinates. Unset means "when the oscillator frames allow it".
    #[serde(default)]
    pub assembled: Option<bool>,
    /// Segments of the coarser grid the assembled cross-check runs on.
    #[serde(default = "forty")]
    pub assembled_steps: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    /// Check ids to run; all of them when empty.
    #[serde(default)]
    pub checks: Vec<String>,
}

/// Every tolerance used by the table jobs. `scale` multiplies all
/// residual thresholds and is what `--tol-scale` overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub scale: f64,
    pub quadrature: f64,
    pub ode_rtol: f64,
    pub pole_guard: f64,
    /// Thresholds on named residuals; residuals without one are reported
    /// but never fail a job.
    pub residuals: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        let residuals = [
            ("relations", 1e-9),
            ("closedness", 1e-7),
            ("definition_vs_gradient", 1e-8),
            ("determinant", 1e-7),
            ("fg_drift", 1e-5),
            ("leaf_derivative", 1e-6),
            ("assembled", 1e-6),
            ("sigma_form", 1e-6),
            ("truncation", 1e-6),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self {
            scale: 1.0,
            quadrature: 1e-10,
            ode_rtol: 1e-12,
            pole_guard: 1e6,
            residuals,
        }
    }
}

fn one() -> usize {
    1
}

fn one_i64() -> i64 {
    1
}

fn thousand() -> usize {
    1000
}

fn forty() -> usize {
    40
}

fn zero() -> Cx {
    Cx::Real(0.0)
}

fn hamiltonian_polarized() -> PotentialChoice {
    PotentialChoice::HAMILTONIAN_POLARIZED
}

#[derive(Debug)]
pub struct ConfigError(pub String);

/// Parses TOML, or JSON when the file ends in `.json`.
pub fn load(path: &Path) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let mut cfg = parse(&text, path.extension().is_some_and(|e| e == "json"))?;
    cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(cfg)
}

pub fn parse(text: &str, json: bool) -> Result<JobConfig, ConfigError> {
    let raw: RawConfig = if json {
        serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?
    };
    let params = raw.params.unwrap_or_else(|| serde_json::Value::Object(Default::default()));
    fn decode<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T, ConfigError> {
        serde_json::from_value(v).map_err(|e| ConfigError(format!("params: {e}")))
    }
    let job = match raw.kind.as_str() {
        "bps-tau" => Job::BpsTau(decode(params)?),
        "conifold" => Job::Conifold(decode(params)?),
        "periods" => Job::Periods(decode(params)?),
        "fg" => Job::Fg(decode(params)?),
        "pi-tau" => Job::PiTau(decode(params)?),
        "verify" => Job::Verify(decode(params)?),
        other => return Err(ConfigError(format!("unknown job kind `{other}`"))),
    };
    let mut tolerances = raw.tolerances;
    let mut residuals = Tolerances::default().residuals;
    residuals.append(&mut tolerances.residuals);
    tolerances.residuals = residuals;
    let cfg = JobConfig {
        job,
        tolerances,
        base_dir: PathBuf::new(),
        output: raw.output,
        seed: raw.seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl JobConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError(m.to_string()));
        let t = &self.tolerances;
        if !(t.scale > 0.0 && t.quadrature > 0.0 && t.ode_rtol > 0.0 && t.pole_guard > 0.0) {
            return bad("tolerances must be positive");
        }
        let nonzero = |z: Cx| z.get().norm() > 0.0;
        match &self.job {
            Job::BpsTau(p) => {
                if p.path.len() < 2 || p.subdivisions == 0 || !nonzero(p.epsilon) {
                    return bad("bps-tau needs a path of at least two vertices, subdivisions ≥ 1 and ε ≠ 0");
                }
            }
            Job::Conifold(p) => {
                if p.orders.is_empty() || p.orders.contains(&0) || p.path.len() < 2 || !nonzero(p.epsilon) {
                    return bad("conifold needs positive orders, a path of at least two vertices and ε ≠ 0");
                }
            }
            Job::Periods(p) => {
                if p.points.is_empty() {
                    return bad("periods needs at least one point");
                }
            }
            Job::Fg(p) => {
                if p.points.is_empty() || !nonzero(p.epsilon) {
                    return bad("fg needs at least one point and ε ≠ 0");
                }
            }
            Job::PiTau(p) => {
                if p.steps == 0 || p.assembled_steps == 0 || !nonzero(p.epsilon) || !nonzero(p.p0) {
                    return bad("pi-tau needs steps ≥ 1, assembled_steps ≥ 1, ε ≠ 0 and p₀ ≠ 0");
                }
            }
            Job::Verify(p) => {
                let ids: Vec<&str> = joyce_tau::verify::manifest().iter().map(|s| s.id).collect();
                if let Some(unknown) = p.checks.iter().find(|c| !ids.contains(&c.as_str())) {
                    return Err(ConfigError(format!("unknown check `{unknown}`")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let t = parse(
            "kind = \"pi-tau\"\n[params]\nq0 = 0\np0 = [1, 0]\na1 = 1\nepsilon = 0.5\n",
            false,
        )
        .unwrap();
        let j = parse(r#"{"kind":"pi-tau","params":{"q0":0,"p0":[1,0],"a1":1,"epsilon":0.5}}"#, true).unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), serde_json::to_string(&j).unwrap());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse("kind = \"verify\"\nbogus = 1\n", false).is_err());
        assert!(parse("kind = \"verify\"\n[params]\nchecks = [\"nope\"]\n", false).is_err());
        assert!(parse("kind = \"verify\"\n", false).is_ok());
    }
}
