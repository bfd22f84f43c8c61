//! Closed-form duration predictions and the target-duration solver.

use serde::{Deserialize, Serialize};

use super::{check_speed, PlanError};
use crate::subtitle::{count_text_units, CountMode, SubtitleTrack};
use crate::time::TimeMs;
use crate::timeline::{SegmentKind, SegmentList};

/// Speeds produced by [`solve_sm_for_target`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolvedSpeeds {
    pub s_m: f64,
    pub s_s: f64,
    /// True iff `s_s` differs from the requested value.
    pub adjusted: bool,
}

fn check_ratio(r: f64) -> Result<(), PlanError> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(PlanError::InvalidRatio(r))
    }
}

/// Output duration when a fraction `r` of `l` plays at `s_m` and the rest at `s_s`.
pub fn predict_duration(s_m: f64, s_s: f64, r: f64, l: TimeMs) -> Result<TimeMs, PlanError> {
    check_speed("s_m", s_m)?;
    check_speed("s_s", s_s)?;
    check_ratio(r)?;
    let l = l.0 as f64;
    Ok(TimeMs::round_from_f64(r * l / s_m + (1.0 - r) * l / s_s))
}

/// Output duration when every language segment is slowed or sped so its text
/// can be read at `s_r` units per minute. Segments whose text counts to zero
/// play at `s_m`.
pub fn predict_duration_reading(
    s_m: f64,
    s_r: f64,
    segs: &SegmentList,
    track: &SubtitleTrack,
    mode: CountMode,
) -> Result<TimeMs, PlanError> {
    check_speed("s_m", s_m)?;
    if !(s_r.is_finite() && s_r > 0.0) {
        return Err(PlanError::InvalidSpeed { name: "s_r", value: s_r });
    }
    let mut total = segs.nonlanguage_ms().0 as f64 / s_m;
    for seg in segs.segments().iter().filter(|s| s.kind == SegmentKind::Language) {
        let units = segment_text_units(seg.cue_indices.as_slice(), track, mode)?;
        total += if units == 0 { seg.duration().0 as f64 / s_m } else { 60_000.0 * units as f64 / s_r };
    }
    Ok(TimeMs::round_from_f64(total))
}

pub(crate) fn segment_text_units(
    cue_indices: &[u32],
    track: &SubtitleTrack,
    mode: CountMode,
) -> Result<usize, PlanError> {
    cue_indices.iter().map(|&i| track.cue(i).map(|c| count_text_units(c, mode)).ok_or(PlanError::UnknownCue(i))).sum()
}

/// Picks `s_m` so that the predicted duration hits `l_q` while keeping `s_s`.
/// When the required `s_m` exceeds `s_m_max`, `s_m` is pinned to the cap and
/// `s_s` is raised by the smallest amount that still reaches `l_q`.
pub fn solve_sm_for_target(
    l_q: TimeMs,
    s_s: f64,
    r: f64,
    l: TimeMs,
    s_m_max: Option<f64>,
) -> Result<SolvedSpeeds, PlanError> {
    check_speed("s_s", s_s)?;
    if let Some(cap) = s_m_max {
        check_speed("s_m_max", cap)?;
    }
    check_ratio(r)?;
    if l_q == TimeMs::ZERO {
        return Err(PlanError::InvalidTarget(l_q));
    }
    if l == TimeMs::ZERO {
        return Err(PlanError::InvalidTarget(l));
    }
    let (target, l) = (l_q.0 as f64, l.0 as f64);
    let main_work = r * l;
    let lang_work = (1.0 - r) * l;

    if lang_work == 0.0 {
        let s_m = main_work / target;
        if s_m_max.is_some_and(|cap| s_m > cap) {
            return Err(PlanError::InfeasibleTarget {
                l_q,
                floor: TimeMs::round_from_f64(main_work / s_m_max.unwrap()),
            });
        }
        return Ok(SolvedSpeeds { s_m, s_s, adjusted: false });
    }
    if main_work == 0.0 {
        // no non-language time: only s_s can move the total
        let needed = lang_work / target;
        if (lang_work / s_s - target).abs() <= 0.5 {
            return Ok(SolvedSpeeds { s_m: s_s, s_s, adjusted: false });
        }
        return Ok(SolvedSpeeds { s_m: needed, s_s: needed, adjusted: true });
    }

    let lang_floor = lang_work / s_s;
    let s_m = if target > lang_floor { main_work / (target - lang_floor) } else { f64::INFINITY };
    match s_m_max {
        Some(cap) if s_m > cap => {
            let main_floor = main_work / cap;
            if target <= main_floor {
                return Err(PlanError::InfeasibleTarget { l_q, floor: TimeMs::round_from_f64(main_floor) });
            }
            Ok(SolvedSpeeds { s_m: cap, s_s: lang_work / (target - main_floor), adjusted: true })
        }
        _ if s_m.is_infinite() => Err(PlanError::InfeasibleTarget { l_q, floor: TimeMs::round_from_f64(lang_floor) }),
        _ => Ok(SolvedSpeeds { s_m, s_s, adjusted: false }),
    }
}
