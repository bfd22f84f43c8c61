use std::fmt::Write;

use super::tempo::{approximate_ratio, decompose_tempo};
use crate::planner::WarpPlan;
use crate::time::TimeMs;

/// Largest denominator used when printing speeds as fractions.
const RATIO_MAX_DEN: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptProfile {
    /// `warpplan v1 <l_in> <l_out>` then `seg <i> <start> <end> speed <p>/<q>`.
    Generic,
    /// `filter_complex` graph: per segment a trimmed, re-timed video branch and
    /// a trimmed audio branch with chained `atempo` stages, all concatenated
    /// into `[outv]` and `[outa]`.
    FilterGraph,
}

pub fn emit_filter_script(plan: &WarpPlan, profile: ScriptProfile) -> String {
    match profile {
        ScriptProfile::Generic => generic(plan),
        ScriptProfile::FilterGraph => filter_graph(plan),
    }
}

fn generic(plan: &WarpPlan) -> String {
    let mut out = format!("warpplan v1 {} {}\n", plan.l_in().0, plan.l_out().0);
    for (i, seg) in plan.segments().iter().enumerate() {
        let (p, q) = approximate_ratio(seg.speed, RATIO_MAX_DEN);
        writeln!(out, "seg {i} {} {} speed {p}/{q}", seg.in_start.0, seg.in_end.0).unwrap();
    }
    out
}

fn seconds(t: TimeMs) -> String {
    format!("{}.{:03}", t.0 / 1000, t.0 % 1000)
}

fn filter_graph(plan: &WarpPlan) -> String {
    let mut out = String::new();
    let mut pads = String::new();
    for (i, seg) in plan.segments().iter().enumerate() {
        let (p, q) = approximate_ratio(seg.speed, RATIO_MAX_DEN);
        let (start, end) = (seconds(seg.in_start), seconds(seg.in_end));
        writeln!(out, "[0:v]trim=start={start}:end={end},setpts=(PTS-STARTPTS)*{q}/{p}[v{i}];").unwrap();
        write!(out, "[0:a]atrim=start={start}:end={end},asetpts=PTS-STARTPTS").unwrap();
        for stage in decompose_tempo(seg.speed).expect("plan speeds are positive and finite") {
            write!(out, ",atempo={stage}").unwrap();
        }
        writeln!(out, "[a{i}];").unwrap();
        write!(pads, "[v{i}][a{i}]").unwrap();
    }
    writeln!(out, "{pads}concat=n={}:v=1:a=1[outv][outa]", plan.segments().len()).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeline::SegmentKind::{Language as L, NonLanguage as N};

    #[test]
    fn generic_identity() {
        let plan = WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(1000), 1.0, N)], None).unwrap();
        assert_eq!(
            emit_filter_script(&plan, ScriptProfile::Generic),
            "warpplan v1 1000 1000\nseg 0 0 1000 speed 1/1\n"
        );
    }

    #[test]
    fn filter_graph_layout() {
        let plan =
            WarpPlan::from_pieces(&[(TimeMs(0), TimeMs(1500), 6.0, N), (TimeMs(1500), TimeMs(4000), 2.5, L)], None)
                .unwrap();
        let graph = emit_filter_script(&plan, ScriptProfile::FilterGraph);
        let lines: Vec<&str> = graph.lines().collect();
        assert_eq!(lines[0], "[0:v]trim=start=0.000:end=1.500,setpts=(PTS-STARTPTS)*1/6[v0];");
        assert_eq!(lines[1].matches("atempo=").count(), 3);
        assert_eq!(lines[2], "[0:v]trim=start=1.500:end=4.000,setpts=(PTS-STARTPTS)*2/5[v1];");
        assert_eq!(lines[3], "[0:a]atrim=start=1.500:end=4.000,asetpts=PTS-STARTPTS,atempo=1.5811388300841898,atempo=1.5811388300841898[a1];");
        assert_eq!(lines[4], "[v0][a0][v1][a1]concat=n=2:v=1:a=1[outv][outa]");
    }
}
