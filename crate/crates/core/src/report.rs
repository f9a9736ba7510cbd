//! Accumulated tau-function values along a path together with the
//! residuals of every identity checked on the way.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::PotentialChoice;

/// One row of a tabulated path: named complex columns in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TauSample {
    pub columns: Vec<(String, Complex64)>,
}

impl TauSample {
    pub fn push(&mut self, name: &str, v: Complex64) {
        self.columns.push((name.to_string(), v));
    }

    pub fn get(&self, name: &str) -> Option<Complex64> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauReport {
    pub family: String,
    pub chart: String,
    /// Point at which `log τ` is normalised to zero.
    pub base_point: Vec<Complex64>,
    pub end_point: Vec<Complex64>,
    pub epsilon: Complex64,
    pub choice: Option<PotentialChoice>,
    pub log_tau: Complex64,
    pub samples: Vec<TauSample>,
    /// Largest residual seen for each named identity.
    pub residuals: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl TauReport {
    pub fn new(family: &str, chart: &str, base_point: Vec<Complex64>, epsilon: Complex64) -> Self {
        Self {
            family: family.into(),
            chart: chart.into(),
            end_point: base_point.clone(),
            base_point,
            epsilon,
            choice: None,
            log_tau: Complex64::new(0.0, 0.0),
            samples: Vec::new(),
            residuals: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Records `value` under `name`, keeping the maximum.
    pub fn record(&mut self, name: &str, value: f64) {
        let slot = self.residuals.entry(name.to_string()).or_insert(0.0);
        if value > *slot || value.is_nan() {
            *slot = value;
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().fold(0.0, |a, &b| a.max(b))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// Samples as CSV, one `name_re,name_im` pair per column. Column names
    /// come from the first sample.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        if let Some(first) = self.samples.first() {
            let header: Vec<String> = first
                .columns
                .iter()
                .flat_map(|(n, _)| [format!("{n}_re"), format!("{n}_im")])
                .collect();
            w.write_record(&header).map_err(io)?;
            for s in &self.samples {
                if s.columns.len() != first.columns.len() {
                    return Err(Error::InvalidInput("ragged sample rows".into()));
                }
                let row: Vec<String> = s
                    .columns
                    .iter()
                    .flat_map(|(_, v)| [format!("{:e}", v.re), format!("{:e}", v.im)])
                    .collect();
                w.write_record(&row).map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_csv_header() {
        let mut r = TauReport::new("test", "z", vec![Complex64::new(1.0, 0.0)], Complex64::new(0.5, 0.0));
        r.record("closedness", 1e-9);
        r.record("closedness", 1e-12);
        let mut s = TauSample::default();
        s.push("a", Complex64::new(0.0, 0.0));
        s.push("logtau", Complex64::new(1.5, -2.0));
        r.samples.push(s);
        assert_eq!(r.residuals["closedness"], 1e-9);
        let back = TauReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("a_re,a_im,logtau_re,logtau_im\n"));
        assert!(csv.contains("1.5e0,-2e0"));
    }
}
