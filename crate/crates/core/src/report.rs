//! The JSON report every analysis run produces.

use serde::Serialize;

use crate::attractor::Hull;
use crate::classify::Classification;
use crate::interior::InteriorStatus;
use crate::topology::ConnectivityStatus;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Exact,
    Bound,
    Evidence,
}

/// A number or bracket together with how much it is worth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tagged {
    pub kind: CertificateKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Tagged {
    pub fn value(kind: CertificateKind, v: f64) -> Self {
        Self { kind, value: Some(v), interval: None, note: None }
    }

    pub fn interval(kind: CertificateKind, lo: f64, hi: f64) -> Self {
        Self { kind, value: None, interval: Some([lo, hi]), note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Thresholds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<Tagged>,
    /// τ̄: connected for all t above it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connectivity_bound: Option<Tagged>,
    /// t_m: empty interior below it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_bound: Option<Tagged>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_bound: Option<Tagged>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2_bracket: Option<Tagged>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_tau: Option<Tagged>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<ConnectivityStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior: Option<InteriorStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hull: Option<Hull>,
}

impl ScanRow {
    pub fn new(t: f64) -> Self {
        Self { t, connectivity: None, interior: None, hull: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub command: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    pub thresholds: Thresholds,
    pub rows: Vec<ScanRow>,
    /// Extra command-specific output.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
    pub artifacts: Vec<String>,
}

impl AnalysisReport {
    pub fn new(command: impl Into<String>, config: serde_json::Value) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            command: command.into(),
            config,
            family: None,
            classification: None,
            thresholds: Thresholds::default(),
            rows: Vec::new(),
            details: serde_json::Value::Null,
            artifacts: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_carry_kinds() {
        let mut r = AnalysisReport::new("t0", serde_json::json!({"depth": 12}));
        r.thresholds.t0 = Some(Tagged::value(CertificateKind::Exact, 1.0));
        r.thresholds.weak_tau = Some(Tagged::interval(CertificateKind::Evidence, 0.5, 0.6).with_note("grid bracket"));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["thresholds"]["t0"]["kind"], "exact");
        assert_eq!(v["thresholds"]["weak_tau"]["interval"][1], 0.6);
        assert!(v["thresholds"].get("cone_bound").is_none());
        for (_, t) in v["thresholds"].as_object().unwrap() {
            assert!(t.get("kind").is_some());
        }
    }
}
