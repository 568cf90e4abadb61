//! Trace files: a versioned JSON record of a run and its verification.

use serde::{Deserialize, Serialize};

use super::scene_file::SceneDoc;
use crate::arc_weld::{MultiWeld, WeldConfig};
use crate::crosscut_chop::CrosscutPlan;
use crate::grid_approx::{Scene, SceneError};
use crate::verify::{verify_chop, verify_multi, VerificationReport};

pub const TRACE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceRun {
    Weld { config: WeldConfig, result: MultiWeld },
    Chop { rounds: u32, plan: CrosscutPlan },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub version: u32,
    pub scene: SceneDoc,
    pub run: TraceRun,
    pub report: VerificationReport,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("trace version {0} is not supported (expected {TRACE_VERSION})")]
    Version(u32),
    #[error("stored scene is invalid: {0}")]
    Scene(#[from] SceneError),
}

impl TraceFile {
    pub fn weld(scene: &Scene, config: WeldConfig, result: MultiWeld, report: VerificationReport) -> Self {
        Self { version: TRACE_VERSION, scene: SceneDoc::of(scene), run: TraceRun::Weld { config, result }, report }
    }

    pub fn chop(scene: &Scene, rounds: u32, plan: CrosscutPlan, report: VerificationReport) -> Self {
        Self { version: TRACE_VERSION, scene: SceneDoc::of(scene), run: TraceRun::Chop { rounds, plan }, report }
    }

    /// Runs the verifier again on the stored geometry, ignoring the stored
    /// report.
    pub fn reverify(&self) -> Result<VerificationReport, TraceError> {
        let scene = self.scene.to_scene()?;
        Ok(match &self.run {
            TraceRun::Weld { config, result } => verify_multi(&scene, result, config),
            TraceRun::Chop { plan, .. } => verify_chop(&scene, plan),
        })
    }
}

/// Pretty-printed JSON with a trailing newline; the same trace always gives
/// the same bytes.
pub fn emit_trace(t: &TraceFile) -> String {
    let mut s = serde_json::to_string_pretty(t).expect("trace types serialize");
    s.push('\n');
    s
}

pub fn parse_trace(text: &str) -> Result<TraceFile, TraceError> {
    #[derive(Deserialize)]
    struct Head {
        version: u32,
    }
    let head: Head = serde_json::from_str(text).map_err(parse_error)?;
    if head.version != TRACE_VERSION {
        return Err(TraceError::Version(head.version));
    }
    serde_json::from_str(text).map_err(parse_error)
}

fn parse_error(e: serde_json::Error) -> TraceError {
    TraceError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}
