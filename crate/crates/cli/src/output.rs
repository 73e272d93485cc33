//! Serialization of reports, frames and sweep tables.

use std::io::Write;
use std::path::Path;

use frobkit::canonical::CanonicalFrame;
use frobkit::report::labeled_point;
use frobkit::{LabeledValue, VerificationReport, C64};
use serde::Serialize;

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
pub struct FrameDump {
    pub model: String,
    pub point: Vec<LabeledValue>,
    pub lame: String,
    pub alphas: Vec<[f64; 2]>,
    pub u: Vec<[f64; 2]>,
    pub lame_sq: Vec<[f64; 2]>,
    pub h: Vec<[f64; 2]>,
    pub gauge: Vec<i8>,
    pub beta: Vec<Vec<[f64; 2]>>,
    pub v: Vec<Vec<[f64; 2]>>,
    pub omega: Option<Vec<[f64; 2]>>,
    pub omega_sq: Option<Vec<[f64; 2]>>,
    pub jacobian: Vec<Vec<[f64; 2]>>,
    pub symmetry_defect: f64,
}

impl FrameDump {
    pub fn new(f: &CanonicalFrame<f64>) -> Self {
        let rows = |m: &frobkit::Metric64| (0..m.rows()).map(|i| m.row(i).iter().map(pair).collect()).collect();
        FrameDump {
            model: f.model.to_string(),
            point: labeled_point(&f.model.coordinate_labels(), &f.coords),
            lame: format!("{:?}", f.lame),
            alphas: f.alphas.iter().map(pair).collect(),
            u: f.u.iter().map(pair).collect(),
            lame_sq: f.lame_sq.iter().map(pair).collect(),
            h: f.h.iter().map(pair).collect(),
            gauge: f.gauge.clone(),
            beta: rows(&f.beta),
            v: rows(&f.vmat),
            omega: f.omega.map(|w| w.iter().map(pair).collect()),
            omega_sq: f.omega_sq().map(|w| w.iter().map(pair).collect()),
            jacobian: rows(&f.jac),
            symmetry_defect: f.symmetry_defect,
        }
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// One row per report.
pub fn reports_csv(reports: &[VerificationReport]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check_name", "model", "residual", "tolerance", "passed", "convention"])?;
    for r in reports {
        w.write_record([
            r.check_name.clone(),
            r.model.clone(),
            format!("{:e}", r.residual),
            format!("{:e}", r.tolerance),
            r.passed.to_string(),
            r.convention.clone().unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

/// Parameter value, then one residual column per check name in order of first appearance.
pub fn sweep_csv(rows: &[(f64, Option<Vec<VerificationReport>>)]) -> Result<String, csv::Error> {
    let mut columns: Vec<String> = Vec::new();
    for (_, reports) in rows {
        for r in reports.iter().flatten() {
            if !columns.contains(&r.check_name) {
                columns.push(r.check_name.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["param".to_string()];
    header.extend(columns.iter().cloned());
    w.write_record(&header)?;
    for (p, reports) in rows {
        let mut rec = vec![format!("{p}")];
        for c in &columns {
            let cell = reports
                .as_ref()
                .and_then(|rs| rs.iter().find(|r| &r.check_name == c))
                .map(|r| format!("{:e}", r.residual))
                .unwrap_or_default();
            rec.push(cell);
        }
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

pub fn emit(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()
        }
    }
}
