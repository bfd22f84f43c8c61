//! Two-level fast-forward planning driven by subtitle timing.
//!
//! Segments where subtitles are on screen play at a readable speed, the rest
//! plays much faster. The crate covers the whole chain:
//!
//! * [`subtitle`]: SRT / WebVTT parsing, SRT and ASS writing, text-unit counts
//! * [`timeline`]: language / non-language segmentation
//! * [`planner`]: speed solving and the piecewise-linear time map
//! * [`styling`]: retiming cues, centering and translucent fade holds
//! * [`emit`]: JSON edit-decision lists, plan scripts, encoder filter graphs
//! * [`analytics`]: per-track and corpus statistics, logistic curve fitting
//!
//! ```
//! use warpwatch_core::prelude::*;
//!
//! let track = parse_srt("1\n00:00:10,000 --> 00:00:20,000\nHello there\n").unwrap();
//! let segs = segment_timeline(&track, TimeMs(60_000), DEFAULT_GAP_MERGE).unwrap();
//! let plan = build_warp_plan(&segs, &SpeedSpec::PerClass { s_m: 6.0, s_s: 2.5 }, &track).unwrap();
//! assert_eq!(plan.l_out(), TimeMs(12_333));
//! ```

pub mod analytics;
pub mod emit;
pub mod par;
pub mod planner;
pub mod styling;
pub mod subtitle;
pub mod time;
pub mod timeline;

use thiserror::Error;

pub use time::TimeMs;

/// Any error the pipeline can raise.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Subtitle(#[from] subtitle::SubtitleError),
    #[error(transparent)]
    Timeline(#[from] timeline::TimelineError),
    #[error(transparent)]
    Plan(#[from] planner::PlanError),
    #[error(transparent)]
    Styling(#[from] styling::StylingError),
    #[error(transparent)]
    Emit(#[from] emit::EmitError),
    #[error(transparent)]
    Analytics(#[from] analytics::AnalyticsError),
    #[error(transparent)]
    Fit(#[from] analytics::FitError),
}

pub mod prelude {
    pub use crate::analytics::{
        corpus_stats, fade_extension_factor, fit_logistic, track_stats, CorpusStats, LogisticFit, TrackStats,
    };
    pub use crate::emit::{decompose_tempo, emit_edl, emit_filter_script, read_edl, ScriptProfile};
    pub use crate::planner::{
        build_warp_plan, predict_duration, predict_duration_reading, solve_sm_for_target, unwarp_time, warp_time,
        SpeedSpec, WarpPlan,
    };
    pub use crate::styling::{apply_centering, apply_fading, retime_track, FadeConfig, StyledTrack};
    pub use crate::subtitle::{
        count_text_units, parse_auto, parse_srt, parse_webvtt, write_ass, write_srt, CountMode, RenderConfig,
        SubtitleCue, SubtitleTrack,
    };
    pub use crate::time::TimeMs;
    pub use crate::timeline::{compute_r, segment_timeline, SegmentKind, SegmentList, DEFAULT_GAP_MERGE};
}
