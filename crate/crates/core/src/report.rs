//! Run reports and their JSON/CSV renderings.
//!
//! Reports contain no timing or host information, so identical configs give
//! byte-identical output.
//!
//! CSV columns: `suite,label,passed,metric,tolerance,lhs_re,lhs_im,rhs_re,rhs_im`.
//! `metric` is the quantity compared against `tolerance` (a relative
//! residual, a Frobenius distance, or an inequality ratio); `tolerance` is
//! empty when no bound applies; the `lhs`/`rhs` columns are filled for
//! identity checks only.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::figa::{FigaReport, RihaczekSumReport};
use crate::frames::DualityReport;
use crate::group::C64;
use crate::norms::InequalityReport;
use crate::sampled::SampledFigaReport;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameDetail {
    pub lower: f64,
    pub upper: f64,
    /// Power-iteration estimates of the same bounds.
    pub power_lower: f64,
    pub power_upper: f64,
    pub is_frame: bool,
    /// `‖Σ ⟨f,π(λ)g⟩π(λ)γ₀ - f‖ / ‖f‖` for `f = f1`; absent without a frame.
    pub reconstruction_residual: Option<f64>,
    /// `‖S_{g,γ₀,Λ} - I‖_F`.
    pub dual_identity_defect: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JanssenDetail {
    /// `‖Janssen - S_{g,γ,Λ}‖_F`.
    pub frobenius: f64,
    /// `‖S_{g,γ,Λ}f - (|Λ|/N^d) S_{f,γ,Λ⁰}g‖₂`.
    pub vector_identity_residual: f64,
    pub condition_a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormsDetail {
    pub submultiplicativity_constant: f64,
    pub moderateness_constant: f64,
    #[serde(with = "crate::serde_ext")]
    pub shift_invariance_ratio: f64,
    #[serde(with = "crate::serde_ext")]
    pub fourier_invariance_ratio: f64,
    pub amalgam_direct: f64,
    pub amalgam_stft: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityDetail {
    #[serde(flatten)]
    pub report: InequalityReport,
    /// Where the compared constant came from.
    pub constant_source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Detail {
    Figa(FigaReport),
    Rihaczek(RihaczekSumReport),
    Sampled(SampledFigaReport),
    Frame(FrameDetail),
    Duality(DualityReport),
    Janssen(JanssenDetail),
    Norms(NormsDetail),
    Inequality(InequalityDetail),
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub suite: String,
    pub label: String,
    pub passed: bool,
    #[serde(with = "crate::serde_ext")]
    pub metric: f64,
    pub tolerance: Option<f64>,
    pub detail: Detail,
}

impl CheckEntry {
    fn sides(&self) -> Option<(C64, C64)> {
        match &self.detail {
            Detail::Figa(r) => Some((r.lhs, r.rhs)),
            Detail::Rihaczek(r) => Some((r.figa.lhs, r.figa.rhs)),
            Detail::Sampled(r) => Some((r.figa.lhs, r.figa.rhs)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub tool: ToolInfo,
    pub config: RunConfig,
    pub tolerance_scale: f64,
    pub entries: Vec<CheckEntry>,
    pub summary: Summary,
    pub all_pass: bool,
}

impl RunReport {
    pub fn new(config: RunConfig, tolerance_scale: f64, entries: Vec<CheckEntry>) -> Self {
        let passed = entries.iter().filter(|e| e.passed).count();
        let summary = Summary { total: entries.len(), passed, failed: entries.len() - passed };
        Self {
            schema: REPORT_SCHEMA,
            tool: ToolInfo { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() },
            config,
            tolerance_scale,
            all_pass: summary.failed == 0,
            entries,
            summary,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Renders a report. Field order is fixed by the type definitions.
pub fn emit_table(report: &RunReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::from("suite,label,passed,metric,tolerance,lhs_re,lhs_im,rhs_re,rhs_im\n");
            for e in &report.entries {
                let tol = e.tolerance.map(num).unwrap_or_default();
                let sides = match e.sides() {
                    Some((l, r)) => format!("{},{},{},{}", num(l.re), num(l.im), num(r.re), num(r.im)),
                    None => ",,,".into(),
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_field(&e.suite),
                    csv_field(&e.label),
                    e.passed,
                    num(e.metric),
                    tol,
                    sides
                ));
            }
            Ok(out.into_bytes())
        }
    }
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
    let name =
        path.file_name().ok_or_else(|| Error::Io(format!("{}: not a file path", path.display())))?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::from(e)
    })
}
