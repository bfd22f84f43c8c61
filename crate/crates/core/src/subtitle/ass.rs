use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::styling::StyledTrack;
use crate::time::TimeMs;

/// Canvas and font settings for the ASS writer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderConfig {
    pub play_res_x: u32,
    pub play_res_y: u32,
    pub font_name: String,
    pub font_size: u32,
    /// Alpha of the `Fade` style (0 opaque, 255 invisible).
    pub fade_alpha: u8,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            play_res_x: 1920,
            play_res_y: 1080,
            font_name: "Arial".to_string(),
            font_size: 48,
            fade_alpha: 128,
        }
    }
}

const BOTTOM_CENTER: u8 = 2;
const MIDDLE_CENTER: u8 = 5;

const STYLE_FORMAT: &str =
    "Format: Name, Fontname, Fontsize, PrimaryColour, SecondaryColour, OutlineColour, BackColour, \
Bold, Italic, Underline, StrikeOut, ScaleX, ScaleY, Spacing, Angle, BorderStyle, Outline, Shadow, Alignment, \
MarginL, MarginR, MarginV, Encoding";

/// Renders a styled track as an ASS v4.00+ script.
///
/// Solid display uses style `Main`; a fade hold is a separate `Dialogue` line
/// in style `Fade`, whose colours carry `cfg.fade_alpha`. Style alignment
/// follows the first cue; cues placed differently get an `\an` override.
/// Times are truncated to centiseconds.
pub fn write_ass(track: &StyledTrack, cfg: &RenderConfig) -> String {
    let centered = track.cues.first().is_some_and(|c| c.centered);
    let align = if centered { MIDDLE_CENTER } else { BOTTOM_CENTER };

    let mut out = String::new();
    out.push_str("[Script Info]\n");
    out.push_str("ScriptType: v4.00+\n");
    writeln!(out, "PlayResX: {}", cfg.play_res_x).unwrap();
    writeln!(out, "PlayResY: {}", cfg.play_res_y).unwrap();
    out.push_str("WrapStyle: 0\n");
    out.push_str("ScaledBorderAndShadow: yes\n\n");

    out.push_str("[V4+ Styles]\n");
    out.push_str(STYLE_FORMAT);
    out.push('\n');
    write_style(&mut out, "Main", cfg, 0, align);
    write_style(&mut out, "Fade", cfg, cfg.fade_alpha, align);
    out.push('\n');

    out.push_str("[Events]\n");
    out.push_str("Format: Layer, Start, End, Style, Name, MarginL, MarginR, MarginV, Effect, Text\n");
    for cue in &track.cues {
        let mut text = String::new();
        if cue.centered != centered {
            let an = if cue.centered { MIDDLE_CENTER } else { BOTTOM_CENTER };
            write!(text, "{{\\an{an}}}").unwrap();
        }
        text.push_str(&ass_text(&cue.base.lines));
        write_dialogue(&mut out, cue.base.start, cue.base.end, "Main", &text);
        if let Some(fade) = cue.fade {
            write_dialogue(&mut out, fade.start, fade.end, "Fade", &text);
        }
    }
    out
}

fn write_style(out: &mut String, name: &str, cfg: &RenderConfig, alpha: u8, align: u8) {
    let back_alpha = alpha.max(0x80);
    writeln!(
        out,
        "Style: {name},{font},{size},&H{a:02X}FFFFFF,&H{a:02X}0000FF,&H{a:02X}000000,&H{b:02X}000000,\
0,0,0,0,100,100,0,0,1,2,1,{align},20,20,40,1",
        font = cfg.font_name,
        size = cfg.font_size,
        a = alpha,
        b = back_alpha,
    )
    .unwrap();
}

fn write_dialogue(out: &mut String, start: TimeMs, end: TimeMs, style: &str, text: &str) {
    writeln!(out, "Dialogue: 0,{},{},{style},,0,0,0,,{text}", ass_timestamp(start), ass_timestamp(end)).unwrap();
}

pub(crate) fn ass_timestamp(t: TimeMs) -> String {
    let cs = t.0 / 10;
    format!("{}:{:02}:{:02}.{:02}", cs / 360_000, cs / 6000 % 60, cs / 100 % 60, cs % 100)
}

/// Joins lines with `\N` and maps simple HTML emphasis tags onto ASS
/// overrides; other angle-bracket tags are dropped.
fn ass_text(lines: &[String]) -> String {
    let joined = lines.join("\\N");
    let mut out = String::with_capacity(joined.len());
    let mut rest = joined.as_str();
    while let Some(pos) = rest.find('<') {
        out.push_str(&rest[..pos]);
        let Some(len) = rest[pos..].find('>') else {
            out.push_str(&rest[pos..]);
            rest = "";
            break;
        };
        let tag = rest[pos + 1..pos + len].trim().to_ascii_lowercase();
        let (closing, name) = match tag.strip_prefix('/') {
            Some(n) => (true, n.trim()),
            None => (false, tag.as_str()),
        };
        if let Some(code) = match name {
            "i" => Some('i'),
            "b" => Some('b'),
            "u" => Some('u'),
            "s" => Some('s'),
            _ => None,
        } {
            write!(out, "{{\\{code}{}}}", if closing { 0 } else { 1 }).unwrap();
        }
        rest = &rest[pos + len + 1..];
    }
    out.push_str(rest);
    out
}
