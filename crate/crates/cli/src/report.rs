//! Report records: JSON lines per instance plus one summary object.

use std::path::Path;

use ghkit::SandwichReport;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichInstanceRecord {
    pub index: usize,
    #[serde(flatten)]
    pub report: SandwichReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichSummary {
    pub kind: String,
    pub seed: u64,
    pub instances: usize,
    /// Violations of the theorem inequality `d_GH <= eh value`; must be 0 on
    /// any completed batch.
    pub left_violations: usize,
    pub max_c_hat: Option<f64>,
    pub c_prime: f64,
    /// Right-hand-side quantities depend on the configured constant, not on
    /// a value the artifact could derive.
    pub right_side_basis: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichBatch {
    pub records: Vec<SandwichInstanceRecord>,
    pub summary: SandwichSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverCheckRecord {
    pub contained: bool,
    pub sampled_max: f64,
    pub ball_radius: f64,
    pub samples_per_axis: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub index: usize,
    pub apex: Vec<f64>,
    pub axis: Vec<f64>,
    pub hit: bool,
    pub witness: Option<usize>,
    /// For probes aimed into a punched hole: the verdict linking the miss to
    /// the empty ball containing the whole cone-annulus region.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_check: Option<CoverCheckRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub c: f64,
    pub c_prime: f64,
    pub slack_coefficient: f64,
    pub sphere_radius: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoveringCurvePoint {
    pub half_width: f64,
    pub covering_radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetProbeSummary {
    pub kind: String,
    pub preset: String,
    pub seed: u64,
    pub probes: usize,
    pub hits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hit_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub covering_curve: Vec<CoveringCurvePoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NetProbeBatch {
    pub records: Vec<ProbeRecord>,
    pub summary: NetProbeSummary,
}

/// Serializes records then the summary, one JSON object per line. The byte
/// output is a pure function of the inputs, which is what makes rerun
/// reports comparable.
pub fn render_jsonl<R: Serialize, S: Serialize>(records: &[R], summary: &S) -> Result<String, CliError> {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).map_err(CliError::from_display)?);
        out.push('\n');
    }
    out.push_str(&serde_json::to_string(summary).map_err(CliError::from_display)?);
    out.push('\n');
    Ok(out)
}

pub fn write_report(path: &Path, body: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(CliError::from_display)?;
        }
    }
    std::fs::write(path, body).map_err(CliError::from_display)?;
    Ok(())
}
