//! Serialization of structure reports.
//!
//! One schema, two encodings: the JSON object (nested maps) and a flat CSV
//! row carrying the same fields with `|`-joined map entries. Exact scalars
//! are always rendered as strings elsewhere; everything in the report
//! itself is integral or boolean.

use serde::{Deserialize, Serialize};

use crate::analysis::StructureReport;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckJson {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The report schema written by the driver.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportJson {
    pub dim_v: usize,
    pub n_copies: usize,
    pub gamma_space_dim: usize,
    /// Degree → dimension, keys as decimal strings.
    pub graded_dims: Vec<(String, usize)>,
    pub h0_dim: usize,
    pub verdict: String,
    pub positive_part: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_ideal_dims: Option<Vec<(String, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
    pub jacobi_ok: bool,
    pub checks: Vec<CheckJson>,
    pub runtime_ms: u64,
}

impl ReportJson {
    pub fn from_report(report: &StructureReport, runtime_ms: u64) -> Self {
        ReportJson {
            dim_v: report.dim_v,
            n_copies: report.copies,
            gamma_space_dim: report.gamma_space_dim,
            graded_dims: report
                .graded_dims
                .iter()
                .map(|(d, n)| (d.to_string(), *n))
                .collect(),
            h0_dim: report.h0_dim,
            verdict: report.verdict.clone(),
            positive_part: report.positive_part,
            minimal_ideal_dims: report.minimal_ideal_dims.as_ref().map(|m| {
                m.iter().map(|(d, n)| (d.to_string(), *n)).collect()
            }),
            simple: report.simple,
            jacobi_ok: report.jacobi_ok,
            checks: report
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.to_string(),
                    ok: c.ok,
                    note: c.note.clone(),
                })
                .collect(),
            runtime_ms,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn join_dims(dims: &[(String, usize)]) -> String {
        dims.iter()
            .map(|(d, n)| format!("{d}:{n}"))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// CSV with the same fields, one header line and one value line.
    pub fn to_csv_string(&self) -> String {
        let header = "dim_v,n_copies,gamma_space_dim,graded_dims,h0_dim,verdict,\
                      positive_part,minimal_ideal_dims,simple,jacobi_ok,checks,runtime_ms";
        let checks = self
            .checks
            .iter()
            .map(|c| match &c.note {
                Some(note) => format!("{}={} ({note})", c.name, c.ok),
                None => format!("{}={}", c.name, c.ok),
            })
            .collect::<Vec<_>>()
            .join(";");
        let row = [
            self.dim_v.to_string(),
            self.n_copies.to_string(),
            self.gamma_space_dim.to_string(),
            csv_quote(&Self::join_dims(&self.graded_dims)),
            self.h0_dim.to_string(),
            csv_quote(&self.verdict),
            self.positive_part.to_string(),
            csv_quote(
                &self
                    .minimal_ideal_dims
                    .as_ref()
                    .map(|d| Self::join_dims(d))
                    .unwrap_or_default(),
            ),
            self.simple.map(|s| s.to_string()).unwrap_or_default(),
            self.jacobi_ok.to_string(),
            csv_quote(&checks),
            self.runtime_ms.to_string(),
        ]
        .join(",");
        format!("{header}\n{row}\n")
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportJson {
        ReportJson {
            dim_v: 3,
            n_copies: 1,
            gamma_space_dim: 1,
            graded_dims: vec![("-2".into(), 3), ("-1".into(), 2), ("0".into(), 4)],
            h0_dim: 0,
            verdict: "osp(1|4)".into(),
            positive_part: true,
            minimal_ideal_dims: None,
            simple: Some(true),
            jacobi_ok: true,
            checks: vec![CheckJson {
                name: "jacobi".into(),
                ok: true,
                note: None,
            }],
            runtime_ms: 0,
        }
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let s = r.to_json_string();
        let back: ReportJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_has_matching_field_count() {
        let s = sample().to_csv_string();
        let mut lines = s.lines();
        let header = lines.next().unwrap();
        let row = lines.next().unwrap();
        assert_eq!(header.split(',').count(), 12);
        // The row has quoted fields; count unquoted commas.
        let mut in_quotes = false;
        let fields = row
            .chars()
            .filter(|c| {
                if *c == '"' {
                    in_quotes = !in_quotes;
                }
                *c == ',' && !in_quotes
            })
            .count()
            + 1;
        assert_eq!(fields, 12);
    }
}
