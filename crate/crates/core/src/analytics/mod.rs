//! Subtitle corpus measurements and comprehension-curve fitting.

mod logistic;
mod stats;

pub use logistic::{fit_logistic, fit_logistic_with, logistic, sse, sse_gradient, FitError, FitOptions, LogisticFit};
pub use stats::{
    corpus_stats, fade_extension_factor, track_stats, track_stats_batch, AnalyticsError, CorpusStats, TrackStats,
};
