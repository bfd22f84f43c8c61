//! Canonical subtitle model plus SRT / WebVTT readers and SRT / ASS writers.
//!
//! Every parser funnels into [`SubtitleTrack::from_cues`], which sorts cues by
//! `(start, end, index)` and renumbers them `1..=n`. Overlapping cues are kept
//! as-is; it is up to the timeline segmentation to union them.

mod ass;
mod srt;
mod webvtt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_segmentation::UnicodeSegmentation;

use crate::time::TimeMs;

pub use ass::{write_ass, RenderConfig};
pub use srt::{parse_srt, write_srt};
pub use webvtt::parse_webvtt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubtitleError {
    #[error("line {line}, column {column}: malformed timestamp {text:?}")]
    MalformedTimestamp { line: usize, column: usize, text: String },
    #[error("line {line}: cue end is not after its start")]
    EndNotAfterStart { line: usize },
    #[error("line {line}: expected a cue number, found {text:?}")]
    MalformedIndex { line: usize, text: String },
    #[error("line {line}: expected a `-->` timing line")]
    MissingTiming { line: usize },
    #[error("missing WEBVTT header")]
    MissingHeader,
    #[error("input is not valid UTF-8 (first bad byte at offset {offset})")]
    InvalidUtf8 { offset: usize },
    #[error("cue {index}: start {start} is not before end {end}")]
    InvalidCue { index: u32, start: TimeMs, end: TimeMs },
    #[error("timestamp {0} does not fit the two-digit hour field")]
    TimestampOutOfRange(TimeMs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SourceFormat {
    Srt,
    WebVtt,
}

/// How reading load is measured for a cue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    /// Extended grapheme clusters, whitespace excluded.
    #[default]
    Graphemes,
    /// Whitespace-delimited tokens.
    Words,
}

impl std::str::FromStr for CountMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "graphemes" | "chars" | "characters" => Ok(CountMode::Graphemes),
            "words" => Ok(CountMode::Words),
            other => Err(format!("unknown count mode {other:?} (expected graphemes|words)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtitleCue {
    pub index: u32,
    pub start: TimeMs,
    pub end: TimeMs,
    /// Text lines with markup left exactly as parsed.
    pub lines: Vec<String>,
}

impl SubtitleCue {
    pub fn new(index: u32, start: TimeMs, end: TimeMs, lines: Vec<String>) -> Self {
        let lines = if lines.is_empty() { vec![String::new()] } else { lines };
        SubtitleCue { index, start, end, lines }
    }

    pub fn duration(&self) -> TimeMs {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtitleTrack {
    cues: Vec<SubtitleCue>,
    source_format: SourceFormat,
}

impl SubtitleTrack {
    /// Validates and canonicalizes a cue list: sorted by `(start, end, index)`,
    /// renumbered from 1.
    pub fn from_cues(mut cues: Vec<SubtitleCue>, source_format: SourceFormat) -> Result<Self, SubtitleError> {
        if let Some(bad) = cues.iter().find(|c| c.start >= c.end) {
            return Err(SubtitleError::InvalidCue { index: bad.index, start: bad.start, end: bad.end });
        }
        for cue in &mut cues {
            if cue.lines.is_empty() {
                cue.lines.push(String::new());
            }
        }
        cues.sort_by_key(|c| (c.start, c.end, c.index));
        for (i, cue) in cues.iter_mut().enumerate() {
            cue.index = i as u32 + 1;
        }
        Ok(SubtitleTrack { cues, source_format })
    }

    pub fn empty(source_format: SourceFormat) -> Self {
        SubtitleTrack { cues: Vec::new(), source_format }
    }

    pub fn cues(&self) -> &[SubtitleCue] {
        &self.cues
    }

    pub fn len(&self) -> usize {
        self.cues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cues.is_empty()
    }

    pub fn source_format(&self) -> SourceFormat {
        self.source_format
    }

    /// Looks a cue up by its (1-based, canonical) index.
    pub fn cue(&self, index: u32) -> Option<&SubtitleCue> {
        let i = (index as usize).checked_sub(1)?;
        self.cues.get(i).filter(|c| c.index == index)
    }

    pub fn into_cues(self) -> Vec<SubtitleCue> {
        self.cues
    }
}

/// Decodes raw file bytes, rejecting anything that is not UTF-8.
pub fn decode_utf8(bytes: &[u8]) -> Result<&str, SubtitleError> {
    std::str::from_utf8(bytes).map_err(|e| SubtitleError::InvalidUtf8 { offset: e.valid_up_to() })
}

/// Sniffs the format from the first non-BOM bytes and dispatches.
pub fn parse_auto(text: &str) -> Result<SubtitleTrack, SubtitleError> {
    let body = text.strip_prefix('\u{feff}').unwrap_or(text);
    if body.starts_with("WEBVTT") {
        parse_webvtt(text)
    } else {
        parse_srt(text)
    }
}

/// Counts reading units in a cue after markup is stripped.
///
/// Angle-bracket tags (`<i>`, `</font>`, `<c.yellow>`) and brace override
/// blocks (`{\an8}`) are removed first. Line breaks count as whitespace.
pub fn count_text_units(cue: &SubtitleCue, mode: CountMode) -> usize {
    let joined = cue.lines.join("\n");
    let plain = strip_markup(&joined);
    match mode {
        CountMode::Graphemes => plain.graphemes(true).filter(|g| !g.chars().all(char::is_whitespace)).count(),
        CountMode::Words => plain.split_whitespace().count(),
    }
}

/// Removes `<...>` and `{...}` spans. An opener without a matching closer is
/// kept as literal text.
pub fn strip_markup(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = rest.find(['<', '{']) {
        out.push_str(&rest[..pos]);
        let opener = rest.as_bytes()[pos];
        let closer = if opener == b'<' { '>' } else { '}' };
        match rest[pos + 1..].find(closer) {
            Some(len) => {
                // tags replace with nothing; a bare space would change word splits
                rest = &rest[pos + 1 + len + 1..];
            }
            None => {
                out.push(opener as char);
                rest = &rest[pos + 1..];
            }
        }
    }
    out.push_str(rest);
    out
}

pub(crate) fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

/// Parses `[H+:]MM:SS<sep>mmm`. `hours_required` is true for SRT.
pub(crate) fn parse_clock(token: &str, fraction_seps: &[char], hours_required: bool) -> Option<TimeMs> {
    let (clock, millis) = token.rsplit_once(|c| fraction_seps.contains(&c))?;
    if millis.len() != 3 || !millis.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let parts: Vec<&str> = clock.split(':').collect();
    let (hours, minutes, seconds) = match parts.as_slice() {
        [h, m, s] => (*h, *m, *s),
        [m, s] if !hours_required => ("0", *m, *s),
        _ => return None,
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(hours) || minutes.len() != 2 || seconds.len() != 2 || !digits(minutes) || !digits(seconds) {
        return None;
    }
    let h: u64 = hours.parse().ok()?;
    let m: u64 = minutes.parse().ok()?;
    let s: u64 = seconds.parse().ok()?;
    let ms: u64 = millis.parse().ok()?;
    if m >= 60 || s >= 60 {
        return None;
    }
    h.checked_mul(3_600_000)?.checked_add(m * 60_000 + s * 1000 + ms).map(TimeMs)
}

/// Splits a `start --> end [settings]` line. Returns the parsed pair or a
/// located error.
pub(crate) fn parse_timing_line(
    line: &str,
    line_no: usize,
    fraction_seps: &[char],
    hours_required: bool,
) -> Result<(TimeMs, TimeMs), SubtitleError> {
    let Some(arrow) = line.find("-->") else {
        return Err(SubtitleError::MissingTiming { line: line_no });
    };
    let left = &line[..arrow];
    let start_tok = left.trim();
    let start_col = left.len() - left.trim_start().len() + 1;
    let right = &line[arrow + 3..];
    let end_offset = right.len() - right.trim_start().len();
    let end_tok = right.split_whitespace().next().unwrap_or("");
    let end_col = arrow + 3 + end_offset + 1;

    let bad = |text: &str, column| SubtitleError::MalformedTimestamp { line: line_no, column, text: text.to_string() };
    let start = parse_clock(start_tok, fraction_seps, hours_required).ok_or_else(|| bad(start_tok, start_col))?;
    let end = parse_clock(end_tok, fraction_seps, hours_required).ok_or_else(|| bad(end_tok, end_col))?;
    if end <= start {
        return Err(SubtitleError::EndNotAfterStart { line: line_no });
    }
    Ok((start, end))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cue(lines: &[&str]) -> SubtitleCue {
        SubtitleCue::new(1, TimeMs(0), TimeMs(1000), lines.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn counts_empty_cue_as_zero() {
        assert_eq!(count_text_units(&cue(&[""]), CountMode::Graphemes), 0);
        assert_eq!(count_text_units(&cue(&[""]), CountMode::Words), 0);
    }

    #[test]
    fn counts_graphemes_without_whitespace() {
        assert_eq!(count_text_units(&cue(&["Hello, world!"]), CountMode::Graphemes), 12);
    }

    #[test]
    fn counts_words_after_tag_strip() {
        assert_eq!(count_text_units(&cue(&["<i>pay it forward</i>"]), CountMode::Words), 3);
    }

    #[test]
    fn counts_across_lines_and_overrides() {
        let c = cue(&["{\\an8}<font color=\"#fff\">Two</font>", "lines here"]);
        assert_eq!(count_text_units(&c, CountMode::Words), 3);
        assert_eq!(count_text_units(&c, CountMode::Graphemes), 12);
    }

    #[test]
    fn combining_marks_and_cjk_count_as_single_units() {
        // "e" + combining acute is one cluster
        assert_eq!(count_text_units(&cue(&["e\u{301}a"]), CountMode::Graphemes), 2);
        assert_eq!(count_text_units(&cue(&["映画を見る"]), CountMode::Graphemes), 5);
    }

    #[test]
    fn music_glyph_only_line_counts_as_one() {
        assert_eq!(count_text_units(&cue(&["<i>♪</i>"]), CountMode::Graphemes), 1);
        assert_eq!(count_text_units(&cue(&["<i></i>"]), CountMode::Graphemes), 0);
    }

    #[test]
    fn unmatched_angle_bracket_is_text() {
        assert_eq!(strip_markup("a < b"), "a < b");
        assert_eq!(strip_markup("<b>x</b> {y"), "x {y");
    }

    #[test]
    fn clock_parsing() {
        assert_eq!(parse_clock("00:00:01,000", &[',', '.'], true), Some(TimeMs(1000)));
        assert_eq!(parse_clock("123:00:00.001", &[',', '.'], true), Some(TimeMs(442_800_001)));
        assert_eq!(parse_clock("01.500", &['.'], false), None);
        assert_eq!(parse_clock("00:61:00,000", &[','], true), None);
        assert_eq!(parse_clock("00:01.000", &['.'], false), Some(TimeMs(1000)));
        assert_eq!(parse_clock("00:01.000", &['.'], true), None);
        assert_eq!(parse_clock("00:00:01,00", &[','], true), None);
    }

    #[test]
    fn from_cues_rejects_inverted_cue() {
        let c = SubtitleCue::new(1, TimeMs(5), TimeMs(5), vec![]);
        assert!(matches!(SubtitleTrack::from_cues(vec![c], SourceFormat::Srt), Err(SubtitleError::InvalidCue { .. })));
    }

    #[test]
    fn invalid_utf8_is_reported() {
        assert_eq!(decode_utf8(b"ok\xff"), Err(SubtitleError::InvalidUtf8 { offset: 2 }));
    }
}
