//! Byte-exact output checks against files under `tests/fixtures/golden`.
//!
//! Run with `WARPWATCH_BLESS=1` to rewrite the golden files after an
//! intentional format change.

use std::fs;
use std::path::PathBuf;

use warpwatch_core::emit::{emit_edl, emit_filter_script, ScriptProfile};
use warpwatch_core::planner::{build_warp_plan, SpeedSpec, WarpPlan};
use warpwatch_core::styling::{apply_centering, apply_fading, retime_track, FadeConfig, StyledTrack};
use warpwatch_core::subtitle::{parse_srt, write_ass, write_srt, RenderConfig};
use warpwatch_core::timeline::{segment_timeline, SegmentKind};
use warpwatch_core::TimeMs;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn check(name: &str, actual: &str) {
    let path = fixture("golden").join(name);
    if std::env::var_os("WARPWATCH_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn two_speed() -> WarpPlan {
    WarpPlan::from_pieces(
        &[
            (TimeMs(0), TimeMs(10_000), 2.0, SegmentKind::NonLanguage),
            (TimeMs(10_000), TimeMs(20_000), 1.0, SegmentKind::Language),
        ],
        None,
    )
    .unwrap()
}

fn golden_plan() -> (WarpPlan, warpwatch_core::subtitle::SubtitleTrack) {
    let track = parse_srt(&fs::read_to_string(fixture("golden_track.srt")).unwrap()).unwrap();
    let segs = segment_timeline(&track, TimeMs(30_000), TimeMs(500)).unwrap();
    let plan = build_warp_plan(&segs, &SpeedSpec::PerClass { s_m: 6.0, s_s: 2.5 }, &track).unwrap();
    (plan, track)
}

#[test]
fn two_speed_edl() {
    check("two_speed.edl.json", &emit_edl(&two_speed()));
}

#[test]
fn two_speed_generic_script() {
    check("two_speed.warpplan.txt", &emit_filter_script(&two_speed(), ScriptProfile::Generic));
}

#[test]
fn fixture_track_outputs() {
    let (plan, track) = golden_plan();
    let retimed = retime_track(&track, &plan).unwrap();
    let fade = FadeConfig::new(true, 160, Some(TimeMs(1500))).unwrap();
    let styled = apply_centering(apply_fading(&retimed, plan.l_out(), &fade), true);
    let render = RenderConfig { fade_alpha: fade.alpha, ..RenderConfig::default() };

    check("track.edl.json", &emit_edl(&plan));
    check("track.warpplan.txt", &emit_filter_script(&plan, ScriptProfile::Generic));
    check("track.filtergraph.txt", &emit_filter_script(&plan, ScriptProfile::FilterGraph));
    check("track.retimed.srt", &write_srt(&retimed).unwrap());
    check("track.centered_fade.ass", &write_ass(&styled, &render));
}

#[test]
fn plain_ass_shows_cues_exactly_over_warped_intervals() {
    let (plan, track) = golden_plan();
    let retimed = retime_track(&track, &plan).unwrap();
    let styled = apply_centering(StyledTrack::plain(&retimed, plan.l_out()), false);
    let ass = write_ass(&styled, &RenderConfig::default());
    check("track.plain.ass", &ass);

    let events: Vec<&str> = ass.lines().filter(|l| l.starts_with("Dialogue:")).collect();
    assert_eq!(events.len(), retimed.len());
    for (line, cue) in events.iter().zip(retimed.cues()) {
        let fields: Vec<&str> = line.splitn(10, ',').collect();
        let cs = |t: TimeMs| {
            let c = t.0 / 10;
            format!("{}:{:02}:{:02}.{:02}", c / 360_000, c / 6000 % 60, c / 100 % 60, c % 100)
        };
        assert_eq!(fields[1], cs(cue.start));
        assert_eq!(fields[2], cs(cue.end));
        assert_eq!(fields[3], "Main");
    }
}

#[test]
fn outputs_are_stable_across_runs() {
    let (a, _) = golden_plan();
    let (b, _) = golden_plan();
    assert_eq!(emit_edl(&a), emit_edl(&b));
    assert_eq!(emit_filter_script(&a, ScriptProfile::FilterGraph), emit_filter_script(&b, ScriptProfile::FilterGraph));
}
