//! Serializable reports. Field names here are stable.

use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{AlphaEstimate, RatioProfile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct AnnulusRow {
    pub lo: f64,
    pub hi: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub argmin: Option<String>,
    pub argmax: Option<String>,
    pub count: usize,
}

pub fn annulus_rows(profile: &RatioProfile) -> Vec<AnnulusRow> {
    profile
        .annuli
        .iter()
        .map(|a| AnnulusRow {
            lo: a.lo,
            hi: a.hi,
            min: a.extremes.as_ref().map(|e| e.min),
            max: a.extremes.as_ref().map(|e| e.max),
            argmin: a.extremes.as_ref().map(|e| e.argmin.to_string()),
            argmax: a.extremes.as_ref().map(|e| e.argmax.to_string()),
            count: a.count,
        })
        .collect()
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub window: usize,
    pub alpha_hat: f64,
    pub limsup_hat: f64,
    pub liminf_hat: f64,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct AlphaReport {
    pub group: String,
    pub l1: String,
    pub l2: String,
    pub annuli: Vec<AnnulusRow>,
    pub alpha_hat: f64,
    pub limsup_hat: f64,
    pub liminf_hat: f64,
    pub window: usize,
    pub convergence: Vec<ConvergenceRow>,
}

impl AlphaReport {
    pub fn new(group: &str, profile: &RatioProfile, est: &AlphaEstimate) -> Self {
        AlphaReport {
            group: group.to_string(),
            l1: profile.l1.clone(),
            l2: profile.l2.clone(),
            annuli: annulus_rows(profile),
            alpha_hat: est.alpha_hat,
            limsup_hat: est.limsup_hat,
            liminf_hat: est.liminf_hat,
            window: est.window,
            convergence: est
                .convergence
                .iter()
                .map(|c| ConvergenceRow {
                    window: c.window,
                    alpha_hat: c.alpha_hat,
                    limsup_hat: c.limsup_hat,
                    liminf_hat: c.liminf_hat,
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AssertionKind {
    /// Arithmetic identity checked at a fixed tolerance.
    Exact,
    /// Finite-radius check of an asymptotic statement.
    Heuristic,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Assertion {
    pub id: String,
    pub scenario: String,
    pub claim: String,
    pub kind: AssertionKind,
    pub relation: &'static str,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub scenario: String,
    pub version: &'static str,
    pub seed: u64,
    pub parameters: Value,
    pub assertions: Vec<Assertion>,
    pub tables: serde_json::Map<String, Value>,
    pub passed: bool,
}

impl ScenarioReport {
    pub fn new(scenario: &str, seed: u64, parameters: Value) -> Self {
        ScenarioReport {
            scenario: scenario.to_string(),
            version: VERSION,
            seed,
            parameters,
            assertions: Vec::new(),
            tables: serde_json::Map::new(),
            passed: true,
        }
    }

    fn push(&mut self, id: &str, claim: &str, kind: AssertionKind, relation: &'static str, m: f64, t: f64, tol: f64, ok: bool) {
        self.passed &= ok;
        self.assertions.push(Assertion {
            id: id.to_string(),
            scenario: self.scenario.clone(),
            claim: claim.to_string(),
            kind,
            relation,
            measured: m,
            target: t,
            tolerance: tol,
            passed: ok,
        });
    }

    /// `|measured − target| ≤ tol`.
    pub fn within(&mut self, id: &str, claim: &str, kind: AssertionKind, measured: f64, target: f64, tol: f64) {
        let ok = (measured - target).abs() <= tol;
        self.push(id, claim, kind, "=", measured, target, tol, ok);
    }

    /// `measured ≤ bound + tol`.
    pub fn at_most(&mut self, id: &str, claim: &str, kind: AssertionKind, measured: f64, bound: f64, tol: f64) {
        let ok = measured <= bound + tol;
        self.push(id, claim, kind, "<=", measured, bound, tol, ok);
    }

    /// `measured ≥ bound − tol`.
    pub fn at_least(&mut self, id: &str, claim: &str, kind: AssertionKind, measured: f64, bound: f64, tol: f64) {
        let ok = measured >= bound - tol;
        self.push(id, claim, kind, ">=", measured, bound, tol, ok);
    }

    /// A boolean property; `measured` is 1 when it holds.
    pub fn holds(&mut self, id: &str, claim: &str, kind: AssertionKind, ok: bool) {
        self.push(id, claim, kind, "holds", if ok { 1.0 } else { 0.0 }, 1.0, 0.0, ok);
    }

    pub fn table(&mut self, name: &str, value: impl Serialize) {
        self.tables
            .insert(name.to_string(), serde_json::to_value(value).unwrap_or_else(|e| json!(e.to_string())));
    }

    pub fn assertion(&self, id: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assertions_track_overall_status() {
        let mut r = ScenarioReport::new("x", 0, json!({}));
        r.within("a", "c", AssertionKind::Exact, 1.0, 1.0 + 1e-10, 1e-9);
        r.at_most("b", "c", AssertionKind::Heuristic, 2.0, 2.0, 0.0);
        assert!(r.passed);
        r.at_least("c", "c", AssertionKind::Heuristic, 0.5, 1.0, 0.1);
        assert!(!r.passed);
        assert!(!r.assertion("c").unwrap().passed);
        let text = r.to_json();
        assert!(text.contains("\"kind\": \"heuristic\""));
        assert_eq!(text, r.to_json());
    }

    #[test]
    fn non_finite_values_serialize_as_null() {
        let mut r = ScenarioReport::new("x", 0, json!({}));
        r.table("t", vec![f64::INFINITY]);
        assert!(r.to_json().contains("null"));
    }
}
