//! Verdicts over a list of group specs, evaluated in parallel with rows
//! kept in input order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check, RuleConfig, Status, Verdict, SCHEMA};
use crate::constructors::build_str;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyEntry {
    pub spec: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SurveyEntry {
    pub fn new(spec: &str) -> SurveyEntry {
        SurveyEntry { spec: spec.to_string(), label: None }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub label: String,
    pub spec: String,
    pub order: Option<usize>,
    pub simple: Option<bool>,
    pub status: Option<Status>,
    pub violated: Vec<String>,
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub schema: String,
    pub sphere_dim: u32,
    pub rows: Vec<SurveyRow>,
    /// Labels of rows that no rule excluded.
    pub survivors: Vec<String>,
    pub simple_survivors: Vec<String>,
}

fn survey_row(e: &SurveyEntry, sphere_dim: u32, cfg: &RuleConfig) -> SurveyRow {
    let mut row = SurveyRow {
        label: e.label().to_string(),
        spec: e.spec.clone(),
        order: None,
        simple: None,
        status: None,
        violated: Vec::new(),
        error: None,
        verdict: None,
    };
    let g = match build_str(&e.spec, &cfg.caps) {
        Ok(g) => g,
        Err(err) => {
            row.error = Some(err.to_string());
            return row;
        }
    };
    row.order = Some(g.order());
    row.simple = Some(g.is_nonabelian_simple());
    match check(&g, sphere_dim, cfg) {
        Ok(v) => {
            row.status = Some(v.status);
            row.violated = v.violated_rules();
            row.verdict = Some(v);
        }
        Err(err) => row.error = Some(err.to_string()),
    }
    row
}

/// One row per entry; build and rule errors are recorded in the row.
pub fn survey(entries: &[SurveyEntry], sphere_dim: u32, cfg: &RuleConfig) -> SurveyReport {
    let rows: Vec<SurveyRow> = entries.par_iter().map(|e| survey_row(e, sphere_dim, cfg)).collect();
    let survivors = rows
        .iter()
        .filter(|r| r.status == Some(Status::NotExcluded))
        .map(|r| r.label.clone())
        .collect();
    let simple_survivors = rows
        .iter()
        .filter(|r| r.status == Some(Status::NotExcluded) && r.simple == Some(true))
        .map(|r| r.label.clone())
        .collect();
    SurveyReport { schema: SCHEMA.to_string(), sphere_dim, rows, survivors, simple_survivors }
}

impl SurveyReport {
    /// Drops the per-row traces.
    pub fn without_traces(mut self) -> SurveyReport {
        for r in &mut self.rows {
            r.verdict = None;
        }
        self
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "spec", "order", "simple", "status", "violated", "error"]).unwrap();
        for r in &self.rows {
            let status = match r.status {
                Some(Status::Excluded) => "excluded",
                Some(Status::NotExcluded) => "not excluded",
                None => "",
            };
            w.write_record([
                r.label.clone(),
                r.spec.clone(),
                r.order.map(|o| o.to_string()).unwrap_or_default(),
                r.simple.map(|s| s.to_string()).unwrap_or_default(),
                status.to_string(),
                r.violated.join(";"),
                r.error.clone().unwrap_or_default(),
            ])
            .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}
