use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use warpwatch_core::subtitle::CountMode;

#[derive(Debug, Parser)]
#[command(name = "warpwatch", version, about = "Two-level fast-forward planning for subtitled video")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a warp plan from subtitles and write the requested artifacts.
    Plan(PlanArgs),
    /// Re-time subtitles with an existing EDL.
    Retime(RetimeArgs),
    /// Corpus timing and reading-load statistics as JSON.
    Stats(StatsArgs),
    /// Fit a logistic curve to (x, y) samples from a CSV file.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Edl,
    Ass,
    Srt,
    ScriptGeneric,
    ScriptFiltergraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountArg {
    Graphemes,
    Words,
}

impl From<CountArg> for CountMode {
    fn from(c: CountArg) -> Self {
        match c {
            CountArg::Graphemes => CountMode::Graphemes,
            CountArg::Words => CountMode::Words,
        }
    }
}

/// Flags shared by every subcommand that renders subtitles.
#[derive(Debug, Args)]
pub struct StyleArgs {
    /// Render cues at screen centre.
    #[arg(long, env = "WARPWATCH_CENTER", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub center: Option<bool>,
    /// Keep expired cues on screen, translucent, until the next cue.
    #[arg(long, env = "WARPWATCH_FADE", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub fade: Option<bool>,
    /// Alpha of the faded phase, 0 (opaque) to 255 (invisible).
    #[arg(long, env = "WARPWATCH_FADE_ALPHA", value_parser = clap::value_parser!(u32).range(0..=255))]
    pub fade_alpha: Option<u32>,
    /// Longest a faded cue may linger, in output milliseconds.
    #[arg(long, env = "WARPWATCH_FADE_MAX_MS")]
    pub fade_max_ms: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// JSON file with defaults for any flag below (snake_case keys).
    #[arg(long, env = "WARPWATCH_CONFIG")]
    pub config: Option<PathBuf>,
    /// SRT or WebVTT input.
    #[arg(long, env = "WARPWATCH_SUBS")]
    pub subs: Option<PathBuf>,
    /// Length of the source video in milliseconds.
    #[arg(long, env = "WARPWATCH_DURATION_MS")]
    pub duration_ms: Option<u64>,
    /// Speed for non-language segments.
    #[arg(long, env = "WARPWATCH_SM")]
    pub sm: Option<f64>,
    /// Speed for language segments.
    #[arg(long, env = "WARPWATCH_SS")]
    pub ss: Option<f64>,
    /// Reading rate in text units per minute; sets language speeds per segment.
    #[arg(long, env = "WARPWATCH_READING_RATE")]
    pub reading_rate: Option<f64>,
    /// Solve the non-language speed for this output length.
    #[arg(long, env = "WARPWATCH_TARGET_DURATION_MS")]
    pub target_duration_ms: Option<u64>,
    /// Upper bound on the solved non-language speed.
    #[arg(long, env = "WARPWATCH_SM_MAX")]
    pub sm_max: Option<f64>,
    /// Lower clamp for reading-rate language speeds.
    #[arg(long, env = "WARPWATCH_MIN_SPEED")]
    pub min_speed: Option<f64>,
    /// Upper clamp for reading-rate language speeds.
    #[arg(long, env = "WARPWATCH_MAX_SPEED")]
    pub max_speed: Option<f64>,
    /// Gaps between cues shorter than this join one language segment.
    #[arg(long, env = "WARPWATCH_GAP_MERGE_MS")]
    pub gap_merge_ms: Option<u64>,
    #[arg(long, value_enum, env = "WARPWATCH_COUNT_MODE")]
    pub count_mode: Option<CountArg>,
    #[command(flatten)]
    pub style: StyleArgs,
    /// Artifact to write; repeat for several.
    #[arg(long, value_enum, env = "WARPWATCH_EMIT", value_delimiter = ',')]
    pub emit: Vec<OutputKind>,
    #[arg(long, env = "WARPWATCH_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    /// Run the encoder on `--media` with the generated filter graph.
    #[cfg(feature = "encode")]
    #[arg(long, requires = "media")]
    pub encode: bool,
    #[cfg(feature = "encode")]
    #[arg(long, env = "WARPWATCH_MEDIA")]
    pub media: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RetimeArgs {
    #[arg(long, env = "WARPWATCH_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, env = "WARPWATCH_SUBS")]
    pub subs: Option<PathBuf>,
    /// EDL produced by `plan --emit edl`.
    #[arg(long, env = "WARPWATCH_EDL")]
    pub edl: Option<PathBuf>,
    #[command(flatten)]
    pub style: StyleArgs,
    /// `srt` or `ass`; repeat for both.
    #[arg(long, value_enum, env = "WARPWATCH_EMIT", value_delimiter = ',')]
    pub emit: Vec<OutputKind>,
    #[arg(long, env = "WARPWATCH_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long, env = "WARPWATCH_CONFIG")]
    pub config: Option<PathBuf>,
    /// Directory holding the subtitle files named in the manifest.
    #[arg(long, env = "WARPWATCH_SUBS_DIR")]
    pub subs_dir: Option<PathBuf>,
    /// JSON object mapping file name to source duration in milliseconds.
    #[arg(long, env = "WARPWATCH_DURATION_MANIFEST")]
    pub duration_manifest: Option<PathBuf>,
    #[arg(long, env = "WARPWATCH_GAP_MERGE_MS")]
    pub gap_merge_ms: Option<u64>,
    #[arg(long, value_enum, env = "WARPWATCH_COUNT_MODE")]
    pub count_mode: Option<CountArg>,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV of `x,y` rows; `#` starts a comment, a header row is skipped.
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
