use super::{is_blank, parse_timing_line, SourceFormat, SubtitleCue, SubtitleError, SubtitleTrack};

/// Parses a WebVTT file: cues are kept, NOTE / STYLE / REGION blocks and
/// cue settings are dropped, and blocks without a timing line are ignored.
pub fn parse_webvtt(text: &str) -> Result<SubtitleTrack, SubtitleError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let lines: Vec<&str> = text.lines().collect();

    let header = lines.first().copied().unwrap_or("");
    let valid_header =
        header.strip_prefix("WEBVTT").is_some_and(|rest| rest.is_empty() || rest.starts_with([' ', '\t']));
    if !valid_header {
        return Err(SubtitleError::MissingHeader);
    }

    // header metadata runs until the first blank line
    let mut i = 1;
    while i < lines.len() && !is_blank(lines[i]) {
        i += 1;
    }

    let mut cues = Vec::new();
    while i < lines.len() {
        if is_blank(lines[i]) {
            i += 1;
            continue;
        }
        let block_start = i;
        while i < lines.len() && !is_blank(lines[i]) {
            i += 1;
        }
        let block = &lines[block_start..i];
        if is_metadata_block(block[0]) {
            continue;
        }
        let timing_at = if block[0].contains("-->") {
            0
        } else if block.len() > 1 && block[1].contains("-->") {
            1
        } else {
            continue;
        };
        let line_no = block_start + timing_at + 1;
        let (start, end) = parse_timing_line(block[timing_at], line_no, &['.'], false)?;
        let text_lines = block[timing_at + 1..].iter().map(|s| s.to_string()).collect();
        cues.push(SubtitleCue::new(cues.len() as u32 + 1, start, end, text_lines));
    }

    SubtitleTrack::from_cues(cues, SourceFormat::WebVtt)
}

fn is_metadata_block(first_line: &str) -> bool {
    ["NOTE", "STYLE", "REGION"]
        .iter()
        .any(|kw| first_line.strip_prefix(kw).is_some_and(|rest| rest.is_empty() || rest.starts_with([' ', '\t'])))
}
