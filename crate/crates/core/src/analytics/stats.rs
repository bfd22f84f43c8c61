use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::{self, Execution};
use crate::subtitle::{count_text_units, CountMode, SubtitleTrack};
use crate::time::TimeMs;
use crate::timeline::{compute_r, segment_timeline, TimelineError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Timeline(#[from] TimelineError),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("track has no cues")]
    EmptyTrack,
}

/// Per-track timing and reading-load figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackStats {
    /// Non-language fraction of the duration.
    pub r: f64,
    pub total_ms: TimeMs,
    pub language_ms: TimeMs,
    pub cue_count: usize,
    pub text_units: usize,
    /// Text units per minute of summed cue display time. Overlapping cues
    /// each contribute their own display time.
    pub required_rate: f64,
    pub per_cue_rate_mean: f64,
    /// Population standard deviation.
    pub per_cue_rate_std: f64,
    /// False when the track has no cues and the rate fields are zero.
    pub rates_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_tracks: usize,
    pub r_mean: f64,
    pub r_std: f64,
    pub rate_mean: f64,
    pub rate_std: f64,
    pub total_cues: usize,
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn track_stats(
    track: &SubtitleTrack,
    total: TimeMs,
    mode: CountMode,
    gap_merge: TimeMs,
) -> Result<TrackStats, AnalyticsError> {
    let segs = segment_timeline(track, total, gap_merge)?;
    let counts: Vec<usize> = track.cues().iter().map(|c| count_text_units(c, mode)).collect();
    let text_units: usize = counts.iter().sum();
    let display_ms: u64 = track.cues().iter().map(|c| c.duration().0).sum();

    let per_cue: Vec<f64> =
        track.cues().iter().zip(&counts).map(|(c, &n)| 60_000.0 * n as f64 / c.duration().0 as f64).collect();
    let (per_cue_rate_mean, per_cue_rate_std) = mean_and_std(&per_cue);
    let rates_defined = !track.is_empty();

    Ok(TrackStats {
        r: compute_r(&segs),
        total_ms: total,
        language_ms: segs.language_ms(),
        cue_count: track.len(),
        text_units,
        required_rate: if rates_defined { 60_000.0 * text_units as f64 / display_ms as f64 } else { 0.0 },
        per_cue_rate_mean,
        per_cue_rate_std,
        rates_defined,
    })
}

/// [`track_stats`] over many tracks; order of results follows the input.
pub fn track_stats_batch(
    inputs: &[(SubtitleTrack, TimeMs)],
    mode: CountMode,
    gap_merge: TimeMs,
    exec: Execution,
) -> Vec<Result<TrackStats, AnalyticsError>> {
    par::map(exec, inputs, |(track, total)| track_stats(track, *total, mode, gap_merge))
}

/// Means and population standard deviations of `r` and the required rate.
pub fn corpus_stats(stats: &[TrackStats]) -> Result<CorpusStats, AnalyticsError> {
    if stats.is_empty() {
        return Err(AnalyticsError::EmptyCorpus);
    }
    let rs: Vec<f64> = stats.iter().map(|s| s.r).collect();
    let rates: Vec<f64> = stats.iter().map(|s| s.required_rate).collect();
    let (r_mean, r_std) = mean_and_std(&rs);
    let (rate_mean, rate_std) = mean_and_std(&rates);
    Ok(CorpusStats {
        n_tracks: stats.len(),
        r_mean,
        r_std,
        rate_mean,
        rate_std,
        total_cues: stats.iter().map(|s| s.cue_count).sum(),
    })
}

/// Mean ratio of how long each cue would stay up with fading (until the next
/// cue, or `total` for the last one) to its own display time, with both
/// segment speeds equal.
///
/// When a cue overlaps the next one, fading adds nothing and the cue counts as 1.
pub fn fade_extension_factor(track: &SubtitleTrack, total: TimeMs) -> Result<f64, AnalyticsError> {
    let cues = track.cues();
    if cues.is_empty() {
        return Err(AnalyticsError::EmptyTrack);
    }
    if let Some(c) = cues.iter().find(|c| c.end > total) {
        return Err(TimelineError::CueBeyondDuration { index: c.index, end: c.end, total }.into());
    }
    let sum: f64 = cues
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let next = cues.get(i + 1).map_or(total, |n| n.start).max(c.end);
            (next - c.start).0 as f64 / c.duration().0 as f64
        })
        .sum();
    Ok(sum / cues.len() as f64)
}
