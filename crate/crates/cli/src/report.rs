use std::io::Write;
use std::path::Path;

use qball::numerics::{EstimatePoint, GapReport, NormEstimate};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRow {
    #[serde(rename = "N")]
    pub truncation: usize,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<usize>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
}

impl From<&EstimatePoint> for ScheduleRow {
    fn from(p: &EstimatePoint) -> Self {
        ScheduleRow {
            truncation: p.truncation,
            theta: p.theta,
            value: p.value,
            fock: p.fock,
            boundary: p.boundary,
            gap: None,
        }
    }
}

pub fn schedule_rows(est: &NormEstimate) -> Vec<ScheduleRow> {
    est.points.iter().map(ScheduleRow::from).collect()
}

/// Ball rows annotated with the boundary value and the gap at each point.
pub fn gap_rows(r: &GapReport) -> Vec<ScheduleRow> {
    r.ball
        .points
        .iter()
        .zip(&r.boundary.points)
        .zip(&r.gaps)
        .map(|((a, b), g)| ScheduleRow { boundary: Some(b.value), gap: Some(*g), ..ScheduleRow::from(a) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

/// The machine-readable record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: Option<String>,
    pub n: usize,
    pub q: f64,
    pub mode: String,
    pub operation: String,
    pub schedule: Vec<ScheduleRow>,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holomorphic: Option<bool>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub version: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_json().as_bytes())?;
        f.write_all(b"\n")
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
        w.write_record(["N", "M", "value", "fock", "boundary", "gap"])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.schedule {
            w.write_record([
                row.truncation.to_string(),
                row.theta.map(|m| m.to_string()).unwrap_or_default(),
                row.value.to_string(),
                opt(row.fock),
                opt(row.boundary),
                opt(row.gap),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Plain-text schedule table.
    pub fn table(&self) -> String {
        if self.schedule.is_empty() {
            return String::new();
        }
        let mut out = format!("{:>5} {:>6} {:>20} {:>20} {:>20} {:>12}\n", "N", "M", "value", "fock", "boundary", "gap");
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.15}")).unwrap_or_else(|| "-".into());
        for r in &self.schedule {
            out.push_str(&format!(
                "{:>5} {:>6} {:>20.15} {:>20} {:>20} {:>12}\n",
                r.truncation,
                r.theta.map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
                r.value,
                cell(r.fock),
                cell(r.boundary),
                r.gap.map(|g| format!("{g:.3e}")).unwrap_or_else(|| "-".into()),
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        Report {
            input: Some("1+z1".into()),
            n: 1,
            q: 0.5,
            mode: "ball".into(),
            operation: "maxprinciple".into(),
            schedule: vec![
                ScheduleRow { truncation: 10, theta: Some(1024), value: 2.0, fock: Some(1.9881), boundary: Some(2.0), gap: Some(0.0) },
                ScheduleRow { truncation: 20, theta: None, value: 0.1 + 0.2, fock: None, boundary: None, gap: None },
            ],
            result: json!({"ball": 2.0, "boundary": 1.9999999999999996}),
            gap: Some(4.440892098500626e-16),
            holomorphic: Some(true),
            tolerances: Tolerances { tol: Some(1e-8), threshold: None },
            seed: None,
            version: "0.1.0".into(),
        }
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let r = sample();
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn schedule_fields_use_upper_case_names() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["schedule"][0]["N"], 10);
        assert_eq!(v["schedule"][0]["M"], 1024);
        assert!(v["schedule"][1].get("M").is_none());
    }

    #[test]
    fn table_lists_every_point() {
        let t = sample().table();
        assert_eq!(t.lines().count(), 3);
        assert!(t.lines().nth(1).unwrap().contains("1024"));
    }
}
