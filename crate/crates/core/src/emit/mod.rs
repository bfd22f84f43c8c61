//! Serializing a warp plan for downstream tools: a JSON edit-decision list,
//! a neutral line-oriented plan script, and an encoder filter graph.

mod edl;
mod script;
mod tempo;

use thiserror::Error;

use crate::planner::PlanError;
use crate::time::TimeMs;

pub use edl::{emit_edl, read_edl, Edl, EdlSegment, EDL_VERSION};
pub use script::{emit_filter_script, ScriptProfile};
pub use tempo::{approximate_ratio, decompose_tempo, TEMPO_STAGE_MAX, TEMPO_STAGE_MIN};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("malformed EDL: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported EDL version {0}")]
    UnsupportedVersion(u32),
    #[error("EDL source duration {stated} does not match its segments ({actual})")]
    SourceMismatch { stated: TimeMs, actual: TimeMs },
    #[error("EDL output duration {stated} is inconsistent with its speeds ({rebuilt})")]
    OutputMismatch { stated: TimeMs, rebuilt: TimeMs },
    #[error(transparent)]
    Plan(#[from] PlanError),
}
