//! Speed assignment over a segmented timeline and the resulting piecewise
//! linear source-to-output time map.

mod solve;
mod warp;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subtitle::{CountMode, SubtitleTrack};
use crate::time::TimeMs;
use crate::timeline::{compute_r, SegmentKind, SegmentList};

pub use solve::{predict_duration, predict_duration_reading, solve_sm_for_target, SolvedSpeeds};
pub use warp::{unwarp_time, warp_many, warp_time};

/// Largest user-supplied speed multiplier.
pub const MAX_SPEED: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("{name} must be positive and finite (speeds at most {MAX_SPEED}), got {value}")]
    InvalidSpeed { name: &'static str, value: f64 },
    #[error("non-language ratio must lie in [0, 1], got {0}")]
    InvalidRatio(f64),
    #[error("target duration {0} must be positive")]
    InvalidTarget(TimeMs),
    #[error("target {l_q} cannot be reached; the achievable floor is {floor}")]
    InfeasibleTarget { l_q: TimeMs, floor: TimeMs },
    #[error("min_speed {min} exceeds max_speed {max}")]
    InvertedClamp { min: f64, max: f64 },
    #[error("segment refers to cue {0}, which is not in the track")]
    UnknownCue(u32),
    #[error("plan segments do not tile the source: {0}")]
    InvalidSegments(String),
    #[error("time {t} lies outside [0, {limit}]")]
    OutOfRange { t: TimeMs, limit: TimeMs },
}

pub(crate) fn check_speed(name: &'static str, value: f64) -> Result<(), PlanError> {
    if value.is_finite() && value > 0.0 && value <= MAX_SPEED {
        Ok(())
    } else {
        Err(PlanError::InvalidSpeed { name, value })
    }
}

/// The three ways of asking for a two-level schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SpeedSpec {
    /// Fixed speed for non-language (`s_m`) and language (`s_s`) segments.
    PerClass { s_m: f64, s_s: f64 },
    /// Language segments play as fast as a reader at `s_r` units/minute allows.
    ReadingRate { s_m: f64, s_r: f64, count_mode: CountMode, min_speed: Option<f64>, max_speed: Option<f64> },
    /// Hit an output length, keeping `s_s` when possible.
    TargetDuration { l_q: TimeMs, s_s: f64, s_m_max: Option<f64> },
}

impl SpeedSpec {
    pub fn validate(&self) -> Result<(), PlanError> {
        match *self {
            SpeedSpec::PerClass { s_m, s_s } => {
                check_speed("s_m", s_m)?;
                check_speed("s_s", s_s)
            }
            SpeedSpec::ReadingRate { s_m, s_r, min_speed, max_speed, .. } => {
                check_speed("s_m", s_m)?;
                if !(s_r.is_finite() && s_r > 0.0) {
                    return Err(PlanError::InvalidSpeed { name: "s_r", value: s_r });
                }
                if let Some(v) = min_speed {
                    check_speed("min_speed", v)?;
                }
                if let Some(v) = max_speed {
                    check_speed("max_speed", v)?;
                }
                match (min_speed, max_speed) {
                    (Some(min), Some(max)) if min > max => Err(PlanError::InvertedClamp { min, max }),
                    _ => Ok(()),
                }
            }
            SpeedSpec::TargetDuration { l_q, s_s, s_m_max } => {
                if l_q == TimeMs::ZERO {
                    return Err(PlanError::InvalidTarget(l_q));
                }
                check_speed("s_s", s_s)?;
                if let Some(v) = s_m_max {
                    check_speed("s_m_max", v)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PlanWarning {
    /// A segment rounded to zero output length and was stretched to 1 ms.
    ZeroLengthOutput { segment: usize },
    /// A segment plays slower than real time.
    SlowSpeed { segment: usize, speed: f64 },
    /// The solved non-language speed is above the configured comfort ceiling.
    HighMainSpeed { s_m: f64, threshold: f64 },
    /// `s_s` had to be raised to reach the requested duration.
    SubtitleSpeedAdjusted { requested: f64, used: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions {
    /// Warn when a solved `s_m` exceeds this multiplier.
    pub high_main_speed_warning: f64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { high_main_speed_warning: 50.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WarpSegment {
    pub in_start: TimeMs,
    pub in_end: TimeMs,
    pub speed: f64,
    pub out_start: TimeMs,
    pub out_end: TimeMs,
    pub kind: SegmentKind,
}

impl WarpSegment {
    pub fn in_duration(&self) -> TimeMs {
        self.in_end - self.in_start
    }

    pub fn out_duration(&self) -> TimeMs {
        self.out_end - self.out_start
    }
}

/// Where a segment starts on the unrounded output axis, split so that time at
/// the segment's own speed is summed in integer ms before dividing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Anchor {
    /// Unrounded output time contributed by the other speed classes.
    pub other: f64,
    /// Source ms already played at this segment's speed.
    pub same_ms: u64,
    /// Extra ms inserted earlier to keep segments non-empty.
    pub shift: u64,
}

/// Immutable piecewise-linear map from source time to output time.
///
/// Read plans back from an EDL ([`crate::emit::read_edl`]); serialization here
/// is one-way.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WarpPlan {
    segments: Vec<WarpSegment>,
    l_in: TimeMs,
    l_out: TimeMs,
    spec: Option<SpeedSpec>,
    solved: Option<SolvedSpeeds>,
    warnings: Vec<PlanWarning>,
    #[serde(skip)]
    anchors: Vec<Anchor>,
}

impl WarpPlan {
    /// Builds a plan from explicit `(in_start, in_end, speed, kind)` pieces that
    /// must tile `[0, l_in]`.
    ///
    /// Output boundaries are rounded once each: the boundary after piece `k`
    /// is `round(sum over speeds s of (source ms at speed s so far) / s)`, so a
    /// plan whose pieces share one speed maps every boundary `t` to exactly
    /// `round(t / s)`.
    pub fn from_pieces(
        pieces: &[(TimeMs, TimeMs, f64, SegmentKind)],
        spec: Option<SpeedSpec>,
    ) -> Result<WarpPlan, PlanError> {
        let Some(&(first_start, ..)) = pieces.first() else {
            return Err(PlanError::InvalidSegments("no segments".into()));
        };
        if first_start != TimeMs::ZERO {
            return Err(PlanError::InvalidSegments(format!("first segment starts at {first_start}")));
        }

        let mut classes: Vec<(f64, u64)> = Vec::new();
        let mut segments = Vec::with_capacity(pieces.len());
        let mut anchors = Vec::with_capacity(pieces.len());
        let mut warnings = Vec::new();
        let mut out_cursor = TimeMs::ZERO;
        let mut shift: u64 = 0;
        let mut in_cursor = TimeMs::ZERO;

        for (i, &(in_start, in_end, speed, kind)) in pieces.iter().enumerate() {
            if in_start != in_cursor || in_end <= in_start {
                return Err(PlanError::InvalidSegments(format!(
                    "segment {i} spans {in_start}..{in_end}, expected to start at {in_cursor}"
                )));
            }
            if !(speed.is_finite() && speed > 0.0) {
                return Err(PlanError::InvalidSpeed { name: "segment speed", value: speed });
            }
            if speed < 1.0 {
                warnings.push(PlanWarning::SlowSpeed { segment: i, speed });
            }
            let same_ms = classes.iter().find(|(s, _)| s.to_bits() == speed.to_bits()).map_or(0, |c| c.1);
            let other: f64 =
                classes.iter().filter(|(s, _)| s.to_bits() != speed.to_bits()).map(|&(s, ms)| ms as f64 / s).sum();
            anchors.push(Anchor { other, same_ms, shift });
            match classes.iter_mut().find(|(s, _)| s.to_bits() == speed.to_bits()) {
                Some((_, ms)) => *ms += (in_end - in_start).0,
                None => classes.push((speed, (in_end - in_start).0)),
            }
            let exact: f64 = classes.iter().map(|&(s, ms)| ms as f64 / s).sum();
            let mut out_end = TimeMs::round_from_f64(exact) + TimeMs(shift);
            if out_end <= out_cursor {
                warnings.push(PlanWarning::ZeroLengthOutput { segment: i });
                shift += out_cursor.0 + 1 - out_end.0;
                out_end = out_cursor + TimeMs(1);
            }
            segments.push(WarpSegment { in_start, in_end, speed, out_start: out_cursor, out_end, kind });
            out_cursor = out_end;
            in_cursor = in_end;
        }

        Ok(WarpPlan { segments, l_in: in_cursor, l_out: out_cursor, spec, solved: None, warnings, anchors })
    }

    pub(crate) fn anchor(&self, i: usize) -> Anchor {
        self.anchors[i]
    }

    pub fn segments(&self) -> &[WarpSegment] {
        &self.segments
    }

    pub fn l_in(&self) -> TimeMs {
        self.l_in
    }

    pub fn l_out(&self) -> TimeMs {
        self.l_out
    }

    pub fn spec(&self) -> Option<&SpeedSpec> {
        self.spec.as_ref()
    }

    /// Speeds chosen by the target-duration solver, if that spec was used.
    pub fn solved(&self) -> Option<SolvedSpeeds> {
        self.solved
    }

    pub fn warnings(&self) -> &[PlanWarning] {
        &self.warnings
    }

    pub fn max_speed(&self) -> f64 {
        self.segments.iter().map(|s| s.speed).fold(0.0, f64::max)
    }

    pub fn min_speed(&self) -> f64 {
        self.segments.iter().map(|s| s.speed).fold(f64::INFINITY, f64::min)
    }

    /// Output durations before any rounding, `in_duration / speed`.
    pub fn unrounded_out_durations(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.in_duration().0 as f64 / s.speed).collect()
    }

    /// `l_out / l_in`.
    pub fn compression_ratio(&self) -> f64 {
        self.l_out.0 as f64 / self.l_in.0 as f64
    }
}

/// Assigns a speed to every segment and builds the time map.
pub fn build_warp_plan(segs: &SegmentList, spec: &SpeedSpec, track: &SubtitleTrack) -> Result<WarpPlan, PlanError> {
    build_warp_plan_with(segs, spec, track, &PlanOptions::default())
}

pub fn build_warp_plan_with(
    segs: &SegmentList,
    spec: &SpeedSpec,
    track: &SubtitleTrack,
    options: &PlanOptions,
) -> Result<WarpPlan, PlanError> {
    spec.validate()?;
    let mut extra_warnings = Vec::new();
    let mut solved = None;

    let speeds: Vec<f64> = match *spec {
        SpeedSpec::PerClass { s_m, s_s } => segs
            .segments()
            .iter()
            .map(|seg| match seg.kind {
                SegmentKind::NonLanguage => s_m,
                SegmentKind::Language => s_s,
            })
            .collect(),
        SpeedSpec::ReadingRate { s_m, s_r, count_mode, min_speed, max_speed } => segs
            .segments()
            .iter()
            .map(|seg| {
                if seg.kind == SegmentKind::NonLanguage {
                    return Ok(s_m);
                }
                let units = solve::segment_text_units(&seg.cue_indices, track, count_mode)?;
                if units == 0 {
                    return Ok(s_m);
                }
                let mut speed = seg.duration().0 as f64 * s_r / (60_000.0 * units as f64);
                if let Some(min) = min_speed {
                    speed = speed.max(min);
                }
                if let Some(max) = max_speed {
                    speed = speed.min(max);
                }
                Ok(speed)
            })
            .collect::<Result<_, PlanError>>()?,
        SpeedSpec::TargetDuration { l_q, s_s, s_m_max } => {
            let solution = solve_sm_for_target(l_q, s_s, compute_r(segs), segs.total(), s_m_max)?;
            if solution.s_m > options.high_main_speed_warning {
                extra_warnings
                    .push(PlanWarning::HighMainSpeed { s_m: solution.s_m, threshold: options.high_main_speed_warning });
            }
            if solution.adjusted {
                extra_warnings.push(PlanWarning::SubtitleSpeedAdjusted { requested: s_s, used: solution.s_s });
            }
            solved = Some(solution);
            segs.segments()
                .iter()
                .map(|seg| match seg.kind {
                    SegmentKind::NonLanguage => solution.s_m,
                    SegmentKind::Language => solution.s_s,
                })
                .collect()
        }
    };

    let pieces: Vec<_> =
        segs.segments().iter().zip(&speeds).map(|(seg, &speed)| (seg.start, seg.end, speed, seg.kind)).collect();
    let mut plan = WarpPlan::from_pieces(&pieces, Some(spec.clone()))?;
    plan.solved = solved;
    plan.warnings.extend(extra_warnings);
    Ok(plan)
}
