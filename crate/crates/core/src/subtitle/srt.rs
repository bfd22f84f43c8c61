use std::fmt::Write;

use super::{is_blank, parse_timing_line, SourceFormat, SubtitleCue, SubtitleError, SubtitleTrack};
use crate::time::TimeMs;

const MAX_SRT_MS: u64 = 100 * 3_600_000 - 1;

/// Parses SubRip text. Accepts a leading BOM, CRLF line endings, `.` in place
/// of `,` before the milliseconds and blocks whose number line is missing.
pub fn parse_srt(text: &str) -> Result<SubtitleTrack, SubtitleError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let lines: Vec<&str> = text.lines().collect();
    let mut cues = Vec::new();
    let mut i = 0;

    while i < lines.len() {
        if is_blank(lines[i]) {
            i += 1;
            continue;
        }
        if !lines[i].contains("-->") {
            let number = lines[i].trim();
            if number.parse::<u64>().is_err() {
                return Err(SubtitleError::MalformedIndex { line: i + 1, text: number.to_string() });
            }
            i += 1;
            if i >= lines.len() || !lines[i].contains("-->") {
                return Err(SubtitleError::MissingTiming { line: i + 1 });
            }
        }
        let (start, end) = parse_timing_line(lines[i], i + 1, &[',', '.'], true)?;
        i += 1;

        let mut text_lines = Vec::new();
        while i < lines.len() && !is_blank(lines[i]) {
            text_lines.push(lines[i].to_string());
            i += 1;
        }
        cues.push(SubtitleCue::new(cues.len() as u32 + 1, start, end, text_lines));
    }

    SubtitleTrack::from_cues(cues, SourceFormat::Srt)
}

/// Serializes a track as canonical SRT: numbered from 1, `HH:MM:SS,mmm`,
/// every block followed by one blank line.
pub fn write_srt(track: &SubtitleTrack) -> Result<String, SubtitleError> {
    let mut out = String::new();
    for (i, cue) in track.cues().iter().enumerate() {
        writeln!(out, "{}", i + 1).unwrap();
        writeln!(out, "{} --> {}", srt_timestamp(cue.start)?, srt_timestamp(cue.end)?).unwrap();
        for line in &cue.lines {
            writeln!(out, "{line}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub(crate) fn srt_timestamp(t: TimeMs) -> Result<String, SubtitleError> {
    if t.0 > MAX_SRT_MS {
        return Err(SubtitleError::TimestampOutOfRange(t));
    }
    let ms = t.0;
    Ok(format!("{:02}:{:02}:{:02},{:03}", ms / 3_600_000, ms / 60_000 % 60, ms / 1000 % 60, ms % 1000))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_block() {
        let t = parse_srt("1\n00:00:01,000 --> 00:00:02,500\nHi\n").unwrap();
        assert_eq!(t.cues(), &[SubtitleCue::new(1, TimeMs(1000), TimeMs(2500), vec!["Hi".into()])]);
        assert_eq!(t.source_format(), SourceFormat::Srt);
    }

    #[test]
    fn rejects_inverted_timing() {
        let err = parse_srt("1\n00:00:02,500 --> 00:00:01,000\nHi\n").unwrap_err();
        assert_eq!(err, SubtitleError::EndNotAfterStart { line: 2 });
    }

    #[test]
    fn sorts_and_renumbers() {
        let text = "1\n00:00:05,000 --> 00:00:06,000\nlater\n\n2\n00:00:01,000 --> 00:00:02,000\nearlier\n";
        let t = parse_srt(text).unwrap();
        let got: Vec<_> = t.cues().iter().map(|c| (c.index, c.start.0, c.lines[0].as_str())).collect();
        assert_eq!(got, vec![(1, 1000, "earlier"), (2, 5000, "later")]);
    }

    #[test]
    fn empty_input_is_empty_track() {
        assert!(parse_srt("").unwrap().is_empty());
        assert!(parse_srt("\u{feff}\r\n\r\n").unwrap().is_empty());
    }

    #[test]
    fn crlf_bom_dot_separator_and_coordinates() {
        let text = "\u{feff}7\r\n00:00:01.000 --> 00:00:02,000 X1:10 X2:20\r\n<i>a</i>\r\nb\r\n";
        let t = parse_srt(text).unwrap();
        assert_eq!(t.cues()[0].lines, vec!["<i>a</i>".to_string(), "b".to_string()]);
        assert_eq!((t.cues()[0].start.0, t.cues()[0].end.0), (1000, 2000));
    }

    #[test]
    fn reports_timestamp_location() {
        let err = parse_srt("1\n00:00:01,000 --> 00:0x:02,000\nHi\n").unwrap_err();
        assert_eq!(err, SubtitleError::MalformedTimestamp { line: 2, column: 18, text: "00:0x:02,000".into() });
    }

    #[test]
    fn rejects_garbage_index() {
        assert!(matches!(
            parse_srt("one\n00:00:01,000 --> 00:00:02,000\n"),
            Err(SubtitleError::MalformedIndex { line: 1, .. })
        ));
        assert!(matches!(parse_srt("1\nhello\n"), Err(SubtitleError::MissingTiming { line: 2 })));
    }

    #[test]
    fn block_without_text_gets_one_empty_line() {
        let t = parse_srt("1\n00:00:01,000 --> 00:00:02,000\n\n").unwrap();
        assert_eq!(t.cues()[0].lines, vec![String::new()]);
        let again = parse_srt(&write_srt(&t).unwrap()).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn writes_canonical_block() {
        let t = SubtitleTrack::from_cues(
            vec![SubtitleCue::new(1, TimeMs(1000), TimeMs(2500), vec!["Hi".into()])],
            SourceFormat::Srt,
        )
        .unwrap();
        assert_eq!(write_srt(&t).unwrap(), "1\n00:00:01,000 --> 00:00:02,500\nHi\n\n");
        assert_eq!(write_srt(&SubtitleTrack::empty(SourceFormat::Srt)).unwrap(), "");
    }

    #[test]
    fn writer_rejects_hundred_hours() {
        let t = SubtitleTrack::from_cues(
            vec![SubtitleCue::new(1, TimeMs(360_000_000), TimeMs(360_000_001), vec!["x".into()])],
            SourceFormat::Srt,
        )
        .unwrap();
        assert!(matches!(write_srt(&t), Err(SubtitleError::TimestampOutOfRange(_))));
        // the parser itself takes any hour count
        assert_eq!(parse_srt("1\n100:00:00,000 --> 100:00:00,001\nx\n").unwrap().cues()[0].start.0, 360_000_000);
    }
}
