use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::EmitError;
use crate::planner::WarpPlan;
use crate::time::TimeMs;
use crate::timeline::SegmentKind;

pub const EDL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdlSegment {
    pub start_ms: u64,
    pub end_ms: u64,
    pub speed: f64,
    pub kind: SegmentKind,
}

/// Edit-decision list: the source cut into speed-tagged segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edl {
    pub version: u32,
    pub source_duration_ms: u64,
    pub output_duration_ms: u64,
    pub segments: Vec<EdlSegment>,
}

impl Edl {
    pub fn from_plan(plan: &WarpPlan) -> Self {
        Edl {
            version: EDL_VERSION,
            source_duration_ms: plan.l_in().0,
            output_duration_ms: plan.l_out().0,
            segments: plan
                .segments()
                .iter()
                .map(|s| EdlSegment { start_ms: s.in_start.0, end_ms: s.in_end.0, speed: s.speed, kind: s.kind })
                .collect(),
        }
    }

    /// Rebuilds the time map. The stated output duration must agree with the
    /// rebuilt one to within one millisecond per segment, the slack the
    /// six-digit speed rounding can introduce.
    pub fn to_plan(&self) -> Result<WarpPlan, EmitError> {
        if self.version != EDL_VERSION {
            return Err(EmitError::UnsupportedVersion(self.version));
        }
        let pieces: Vec<_> =
            self.segments.iter().map(|s| (TimeMs(s.start_ms), TimeMs(s.end_ms), s.speed, s.kind)).collect();
        let plan = WarpPlan::from_pieces(&pieces, None)?;
        if plan.l_in().0 != self.source_duration_ms {
            return Err(EmitError::SourceMismatch { stated: TimeMs(self.source_duration_ms), actual: plan.l_in() });
        }
        if plan.l_out().0.abs_diff(self.output_duration_ms) > self.segments.len() as u64 {
            return Err(EmitError::OutputMismatch { stated: TimeMs(self.output_duration_ms), rebuilt: plan.l_out() });
        }
        Ok(plan)
    }
}

/// Compact, key-ordered JSON with speeds printed to six decimals.
pub fn emit_edl(plan: &WarpPlan) -> String {
    let edl = Edl::from_plan(plan);
    let mut out = String::new();
    write!(
        out,
        "{{\"version\":{},\"source_duration_ms\":{},\"output_duration_ms\":{},\"segments\":[",
        edl.version, edl.source_duration_ms, edl.output_duration_ms
    )
    .unwrap();
    for (i, seg) in edl.segments.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(
            out,
            "{{\"start_ms\":{},\"end_ms\":{},\"speed\":{:.6},\"kind\":\"{}\"}}",
            seg.start_ms,
            seg.end_ms,
            seg.speed,
            seg.kind.as_str()
        )
        .unwrap();
    }
    out.push_str("]}");
    out
}

/// Parses EDL JSON back into a plan.
pub fn read_edl(text: &str) -> Result<WarpPlan, EmitError> {
    let edl: Edl = serde_json::from_str(text)?;
    edl.to_plan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::warp_time;
    use SegmentKind::{Language as L, NonLanguage as N};

    #[test]
    fn identity_plan_json() {
        let plan = WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(1000), 1.0, N)], None).unwrap();
        assert_eq!(
            emit_edl(&plan),
            r#"{"version":1,"source_duration_ms":1000,"output_duration_ms":1000,"segments":[{"start_ms":0,"end_ms":1000,"speed":1.000000,"kind":"nonlanguage"}]}"#
        );
    }

    #[test]
    fn reads_back_into_same_map() {
        let plan = WarpPlan::from_pieces(
            &[
                (TimeMs(0), TimeMs(10_000), 2.0, N),
                (TimeMs(10_000), TimeMs(20_000), 1.0, L),
                (TimeMs(20_000), TimeMs(20_003), 3.5, N),
            ],
            None,
        )
        .unwrap();
        let back = read_edl(&emit_edl(&plan)).unwrap();
        for seg in plan.segments() {
            assert_eq!(warp_time(&back, seg.in_start).unwrap(), seg.out_start);
            assert_eq!(warp_time(&back, seg.in_end).unwrap(), seg.out_end);
        }
        assert_eq!(emit_edl(&back), emit_edl(&plan));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(read_edl("{"), Err(EmitError::Json(_))));
        let v2 = r#"{"version":2,"source_duration_ms":1,"output_duration_ms":1,"segments":[{"start_ms":0,"end_ms":1,"speed":1.0,"kind":"language"}]}"#;
        assert!(matches!(read_edl(v2), Err(EmitError::UnsupportedVersion(2))));
        let gap = r#"{"version":1,"source_duration_ms":3,"output_duration_ms":3,"segments":[{"start_ms":0,"end_ms":1,"speed":1.0,"kind":"language"},{"start_ms":2,"end_ms":3,"speed":1.0,"kind":"nonlanguage"}]}"#;
        assert!(matches!(read_edl(gap), Err(EmitError::Plan(_))));
        let lie = r#"{"version":1,"source_duration_ms":1000,"output_duration_ms":10,"segments":[{"start_ms":0,"end_ms":1000,"speed":1.0,"kind":"language"}]}"#;
        assert!(matches!(read_edl(lie), Err(EmitError::OutputMismatch { .. })));
    }
}
