use joyce_tau::report::TauReport;
use joyce_tau::Complex64;

/// A CSV table. Complex columns become `name_re,name_im` pairs; numbers
/// are written in shortest round-trip form and NaN as an empty cell.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:?}")
    }
}

impl Table {
    pub fn new(real: &[&str], complex: &[&str], residual: &[&str]) -> Self {
        let mut header: Vec<String> = real.iter().map(|s| s.to_string()).collect();
        header.extend(complex.iter().flat_map(|n| [format!("{n}_re"), format!("{n}_im")]));
        header.extend(residual.iter().map(|s| s.to_string()));
        Self { header, rows: Vec::new() }
    }

    pub fn text(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, real: &[f64], complex: &[Complex64], residual: &[f64]) {
        let mut r: Vec<String> = real.iter().map(|&x| num(x)).collect();
        r.extend(complex.iter().flat_map(|z| [num(z.re), num(z.im)]));
        r.extend(residual.iter().map(|&x| num(x)));
        self.rows.push(r);
    }

    pub fn text_row(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// The sample columns of a tau report, in their recorded order.
    pub fn from_report(rep: &TauReport) -> Self {
        let names: Vec<&str> = rep
            .samples
            .first()
            .map(|s| s.columns.iter().map(|(n, _)| n.as_str()).collect())
            .unwrap_or_default();
        let mut t = Table::new(&[], &names, &[]);
        for s in &rep.samples {
            let vals: Vec<Complex64> = s.columns.iter().map(|(_, v)| *v).collect();
            t.row(&[], &vals, &[]);
        }
        t
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}
