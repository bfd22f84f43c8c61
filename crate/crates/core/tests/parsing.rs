use std::fs;
use std::path::PathBuf;

use warpwatch_core::subtitle::{parse_auto, parse_srt, parse_webvtt, SourceFormat, SubtitleError};
use warpwatch_core::TimeMs;

fn read(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    fs::read_to_string(path).unwrap()
}

fn spans(track: &warpwatch_core::subtitle::SubtitleTrack) -> Vec<(u32, u64, u64)> {
    track.cues().iter().map(|c| (c.index, c.start.0, c.end.0)).collect()
}

#[test]
fn wellformed_srt() {
    let track = parse_srt(&read("wellformed.srt")).unwrap();
    assert_eq!(track.source_format(), SourceFormat::Srt);
    assert_eq!(spans(&track), vec![(1, 1000, 2500), (2, 3000, 5000), (3, 60_000, 61_250)]);
    assert_eq!(track.cues()[1].lines, vec!["Two lines", "of text"]);
}

#[test]
fn out_of_order_crlf_srt_is_sorted_and_renumbered() {
    let track = parse_srt(&read("out_of_order.srt")).unwrap();
    assert_eq!(spans(&track), vec![(1, 1000, 2000), (2, 3000, 4000), (3, 5000, 6000)]);
    let text: Vec<&str> = track.cues().iter().map(|c| c.lines[0].as_str()).collect();
    assert_eq!(text, vec!["first", "second", "third"]);
}

#[test]
fn overlapping_srt_keeps_every_cue() {
    let track = parse_srt(&read("overlapping.srt")).unwrap();
    assert_eq!(spans(&track), vec![(1, 1000, 5000), (2, 2000, 3000), (3, 2000, 3000)]);
    assert_eq!(track.cues()[1].lines[0], "Interjection");
}

#[test]
fn malformed_srt_reports_line_and_column() {
    match parse_srt(&read("malformed.srt")) {
        Err(SubtitleError::MalformedTimestamp { line, .. }) => assert_eq!(line, 6),
        other => panic!("expected malformed timestamp, got {other:?}"),
    }
}

#[test]
fn webvtt_skips_metadata_blocks_and_settings() {
    let track = parse_webvtt(&read("sample.vtt")).unwrap();
    assert_eq!(track.source_format(), SourceFormat::WebVtt);
    assert_eq!(spans(&track), vec![(1, 1000, 2000), (2, 3500, 5000)]);
    assert_eq!(track.cues()[1].lines, vec!["<v Ann>Second</v>", "cue"]);
    assert_eq!(parse_auto(&read("sample.vtt")).unwrap().cues(), track.cues());
}

#[test]
fn srt_rejects_missing_header_as_vtt() {
    assert!(matches!(parse_webvtt(&read("wellformed.srt")), Err(SubtitleError::MissingHeader)));
    let t = parse_auto(&read("wellformed.srt")).unwrap();
    assert_eq!(t.cues()[0].start, TimeMs(1000));
}
