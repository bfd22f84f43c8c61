//! Retiming subtitles through a warp plan, and the centering / fading display
//! transforms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planner::{warp_time, WarpPlan};
use crate::subtitle::{SubtitleCue, SubtitleTrack};
use crate::time::TimeMs;
use crate::timeline::SegmentKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StylingError {
    #[error("cue {index} ({start}..{end}) is not inside the plan's language segments")]
    CueOutsidePlan { index: u32, start: TimeMs, end: TimeMs },
    #[error("fade alpha must be in 0..=255, got {0}")]
    InvalidAlpha(u32),
    #[error("fade max extension must be positive")]
    ZeroExtension,
}

/// Translucent hold after a cue expires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FadeConfig {
    pub enabled: bool,
    /// ASS-style alpha: 0 is opaque, 255 invisible.
    pub alpha: u8,
    /// Upper bound on the hold; `None` keeps the cue until the next one.
    pub max_extension: Option<TimeMs>,
}

impl Default for FadeConfig {
    fn default() -> Self {
        FadeConfig { enabled: false, alpha: 128, max_extension: None }
    }
}

impl FadeConfig {
    pub fn new(enabled: bool, alpha: u32, max_extension: Option<TimeMs>) -> Result<Self, StylingError> {
        let alpha = u8::try_from(alpha).map_err(|_| StylingError::InvalidAlpha(alpha))?;
        if max_extension == Some(TimeMs::ZERO) {
            return Err(StylingError::ZeroExtension);
        }
        Ok(FadeConfig { enabled, alpha, max_extension })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FadeInterval {
    pub start: TimeMs,
    pub end: TimeMs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StyledCue {
    /// The cue in output time; this is its solid (opaque) display interval.
    pub base: SubtitleCue,
    pub centered: bool,
    pub fade: Option<FadeInterval>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StyledTrack {
    pub cues: Vec<StyledCue>,
    pub total_out: TimeMs,
}

impl StyledTrack {
    /// Wraps a retimed track with no fades and bottom placement.
    pub fn plain(track: &SubtitleTrack, total_out: TimeMs) -> Self {
        let cues = track.cues().iter().map(|c| StyledCue { base: c.clone(), centered: false, fade: None }).collect();
        StyledTrack { cues, total_out }
    }
}

/// Moves every cue through the plan. A cue squeezed to zero length keeps 1 ms.
pub fn retime_track(track: &SubtitleTrack, plan: &WarpPlan) -> Result<SubtitleTrack, StylingError> {
    let segments = plan.segments();
    let mut cues = Vec::with_capacity(track.len());
    for cue in track.cues() {
        let outside = StylingError::CueOutsidePlan { index: cue.index, start: cue.start, end: cue.end };
        if cue.end > plan.l_in() {
            return Err(outside);
        }
        let first = segments.partition_point(|s| s.in_end <= cue.start);
        let touches_nonlanguage =
            segments[first..].iter().take_while(|s| s.in_start < cue.end).any(|s| s.kind == SegmentKind::NonLanguage);
        if touches_nonlanguage {
            return Err(outside);
        }

        let mut start = warp_time(plan, cue.start).map_err(|_| outside.clone())?;
        let mut end = warp_time(plan, cue.end).map_err(|_| outside.clone())?;
        if end <= start {
            if start < plan.l_out() {
                end = start + TimeMs(1);
            } else {
                start = end - TimeMs(1);
            }
        }
        cues.push(SubtitleCue { index: cue.index, start, end, lines: cue.lines.clone() });
    }
    Ok(SubtitleTrack::from_cues(cues, track.source_format()).expect("retimed cues keep start < end"))
}

/// Holds each cue translucently until the next cue starts (or the video
/// ends), optionally capped at `cfg.max_extension`.
pub fn apply_fading(track: &SubtitleTrack, total_out: TimeMs, cfg: &FadeConfig) -> StyledTrack {
    let cues = track.cues();
    let styled = cues
        .iter()
        .enumerate()
        .map(|(i, cue)| {
            let fade = cfg.enabled.then(|| {
                let next = cues.get(i + 1).map_or(total_out, |n| n.start);
                let limit = cfg.max_extension.map_or(next, |cap| next.min(cue.end + cap));
                FadeInterval { start: cue.end, end: limit }
            });
            let fade = fade.filter(|f| f.end > f.start);
            StyledCue { base: cue.clone(), centered: false, fade }
        })
        .collect();
    StyledTrack { cues: styled, total_out }
}

/// Sets the placement of every cue. Idempotent.
pub fn apply_centering(mut track: StyledTrack, centered: bool) -> StyledTrack {
    for cue in &mut track.cues {
        cue.centered = centered;
    }
    track
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subtitle::SourceFormat;
    use SegmentKind::{Language as L, NonLanguage as N};

    fn track(spans: &[(u64, u64)]) -> SubtitleTrack {
        let cues = spans
            .iter()
            .enumerate()
            .map(|(i, &(s, e))| SubtitleCue::new(i as u32 + 1, TimeMs(s), TimeMs(e), vec![format!("cue {i}")]))
            .collect();
        SubtitleTrack::from_cues(cues, SourceFormat::Srt).unwrap()
    }

    fn fades(t: &StyledTrack) -> Vec<Option<(u64, u64)>> {
        t.cues.iter().map(|c| c.fade.map(|f| (f.start.0, f.end.0))).collect()
    }

    #[test]
    fn identity_plan_keeps_track() {
        let t = track(&[(100, 200), (300, 900)]);
        let plan = WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(1000), 1.0, L)], None).unwrap();
        assert_eq!(retime_track(&t, &plan).unwrap(), t);
    }

    #[test]
    fn retimes_through_two_speed_plan() {
        let t = track(&[(12_000, 14_000)]);
        let plan = WarpPlan::from_pieces(
            &[(TimeMs(0), TimeMs(10_000), 2.0, N), (TimeMs(10_000), TimeMs(20_000), 1.0, L)],
            None,
        )
        .unwrap();
        let out = retime_track(&t, &plan).unwrap();
        assert_eq!((out.cues()[0].start.0, out.cues()[0].end.0), (7000, 9000));
    }

    #[test]
    fn cue_over_nonlanguage_is_rejected() {
        let t = track(&[(9000, 11_000)]);
        let plan = WarpPlan::from_pieces(
            &[(TimeMs(0), TimeMs(10_000), 2.0, N), (TimeMs(10_000), TimeMs(20_000), 1.0, L)],
            None,
        )
        .unwrap();
        assert!(matches!(retime_track(&t, &plan), Err(StylingError::CueOutsidePlan { index: 1, .. })));
        let late = track(&[(19_000, 21_000)]);
        assert!(retime_track(&late, &plan).is_err());
    }

    #[test]
    fn collapsed_cue_keeps_one_ms() {
        let t = track(&[(0, 1), (999, 1000)]);
        let plan = WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(1000), 50.0, L)], None).unwrap();
        let out = retime_track(&t, &plan).unwrap();
        assert_eq!((out.cues()[0].start.0, out.cues()[0].end.0), (0, 1));
        assert_eq!((out.cues()[1].start.0, out.cues()[1].end.0), (19, 20));
    }

    #[test]
    fn fades_until_next_cue_or_end() {
        let t = track(&[(0, 2000), (10_000, 12_000)]);
        let styled = apply_fading(&t, TimeMs(20_000), &FadeConfig { enabled: true, ..FadeConfig::default() });
        assert_eq!(fades(&styled), vec![Some((2000, 10_000)), Some((12_000, 20_000))]);
    }

    #[test]
    fn capped_fades() {
        let t = track(&[(0, 2000), (10_000, 12_000)]);
        let cfg = FadeConfig::new(true, 128, Some(TimeMs(3000))).unwrap();
        let styled = apply_fading(&t, TimeMs(20_000), &cfg);
        assert_eq!(fades(&styled), vec![Some((2000, 5000)), Some((12_000, 15_000))]);
    }

    #[test]
    fn abutting_and_disabled() {
        let t = track(&[(0, 2000), (2000, 4000)]);
        let on = apply_fading(&t, TimeMs(4000), &FadeConfig { enabled: true, ..FadeConfig::default() });
        assert_eq!(fades(&on), vec![None, None]);
        let off = apply_fading(&track(&[(0, 10)]), TimeMs(4000), &FadeConfig::default());
        assert_eq!(fades(&off), vec![None]);
    }

    #[test]
    fn centering_is_idempotent() {
        let styled = StyledTrack::plain(&track(&[(0, 10), (20, 30)]), TimeMs(40));
        let once = apply_centering(styled.clone(), true);
        assert!(once.cues.iter().all(|c| c.centered));
        assert_eq!(apply_centering(once.clone(), true), once);
        assert!(apply_centering(once, false).cues.iter().all(|c| !c.centered));
    }

    #[test]
    fn fade_config_validation() {
        assert_eq!(FadeConfig::new(true, 256, None), Err(StylingError::InvalidAlpha(256)));
        assert_eq!(FadeConfig::new(true, 1, Some(TimeMs(0))), Err(StylingError::ZeroExtension));
    }
}
