//! Language / non-language segmentation of the source timeline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subtitle::SubtitleTrack;
use crate::time::TimeMs;

/// Default gap below which two language intervals are fused.
pub const DEFAULT_GAP_MERGE: TimeMs = TimeMs(500);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimelineError {
    #[error("cue {index} ends at {end}, after the {total} total duration")]
    CueBeyondDuration { index: u32, end: TimeMs, total: TimeMs },
    #[error("total duration must be positive")]
    ZeroDuration,
    #[error("segment list is not a valid tiling: {0}")]
    InvalidTiling(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Language,
    NonLanguage,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Language => "language",
            SegmentKind::NonLanguage => "nonlanguage",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: TimeMs,
    pub end: TimeMs,
    pub kind: SegmentKind,
    /// Canonical indices of the cues displayed inside; empty for non-language.
    pub cue_indices: Vec<u32>,
}

impl Segment {
    pub fn duration(&self) -> TimeMs {
        self.end - self.start
    }
}

/// Alternating segments that tile `[0, total]` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentList {
    segments: Vec<Segment>,
    total: TimeMs,
}

impl SegmentList {
    /// Builds a list from explicit segments, checking the tiling invariants.
    pub fn new(segments: Vec<Segment>, total: TimeMs) -> Result<Self, TimelineError> {
        if total == TimeMs::ZERO {
            return Err(TimelineError::ZeroDuration);
        }
        let bad = |msg: String| Err(TimelineError::InvalidTiling(msg));
        let mut cursor = TimeMs::ZERO;
        let mut prev_kind = None;
        for (i, seg) in segments.iter().enumerate() {
            if seg.start != cursor {
                return bad(format!("segment {i} starts at {} instead of {cursor}", seg.start));
            }
            if seg.end <= seg.start {
                return bad(format!("segment {i} is empty"));
            }
            if prev_kind == Some(seg.kind) {
                return bad(format!("segments {} and {i} share a kind", i - 1));
            }
            match seg.kind {
                SegmentKind::Language if seg.cue_indices.is_empty() => {
                    return bad(format!("language segment {i} lists no cues"));
                }
                SegmentKind::NonLanguage if !seg.cue_indices.is_empty() => {
                    return bad(format!("non-language segment {i} lists cues"));
                }
                _ => {}
            }
            cursor = seg.end;
            prev_kind = Some(seg.kind);
        }
        if cursor != total {
            return bad(format!("segments end at {cursor}, expected {total}"));
        }
        Ok(SegmentList { segments, total })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total(&self) -> TimeMs {
        self.total
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    fn kind_total(&self, kind: SegmentKind) -> TimeMs {
        TimeMs(self.segments.iter().filter(|s| s.kind == kind).map(|s| s.duration().0).sum())
    }

    pub fn language_ms(&self) -> TimeMs {
        self.kind_total(SegmentKind::Language)
    }

    pub fn nonlanguage_ms(&self) -> TimeMs {
        self.kind_total(SegmentKind::NonLanguage)
    }
}

/// Splits `[0, total]` into language intervals (the union of cue intervals,
/// with gaps strictly shorter than `gap_merge` fused) and the non-language
/// remainder.
pub fn segment_timeline(track: &SubtitleTrack, total: TimeMs, gap_merge: TimeMs) -> Result<SegmentList, TimelineError> {
    if total == TimeMs::ZERO {
        return Err(TimelineError::ZeroDuration);
    }
    if let Some(c) = track.cues().iter().find(|c| c.end > total) {
        return Err(TimelineError::CueBeyondDuration { index: c.index, end: c.end, total });
    }

    // (start, end, cues) of fused language spans; cues arrive sorted by start
    let mut spans: Vec<(TimeMs, TimeMs, Vec<u32>)> = Vec::new();
    for cue in track.cues() {
        match spans.last_mut() {
            Some((_, end, members)) if cue.start <= *end || cue.start - *end < gap_merge => {
                *end = (*end).max(cue.end);
                members.push(cue.index);
            }
            _ => spans.push((cue.start, cue.end, vec![cue.index])),
        }
    }

    let mut segments = Vec::with_capacity(spans.len() * 2 + 1);
    let mut cursor = TimeMs::ZERO;
    for (start, end, cue_indices) in spans {
        if start > cursor {
            segments.push(Segment {
                start: cursor,
                end: start,
                kind: SegmentKind::NonLanguage,
                cue_indices: Vec::new(),
            });
        }
        segments.push(Segment { start, end, kind: SegmentKind::Language, cue_indices });
        cursor = end;
    }
    if cursor < total {
        segments.push(Segment { start: cursor, end: total, kind: SegmentKind::NonLanguage, cue_indices: Vec::new() });
    }
    Ok(SegmentList { segments, total })
}

/// Fraction of the source duration that carries no language.
pub fn compute_r(segs: &SegmentList) -> f64 {
    segs.nonlanguage_ms().0 as f64 / segs.total.0 as f64
}
