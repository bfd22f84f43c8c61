use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// A point or span on a timeline, in whole milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeMs(pub u64);

impl TimeMs {
    pub const ZERO: TimeMs = TimeMs(0);

    pub const fn from_millis(ms: u64) -> Self {
        TimeMs(ms)
    }

    pub const fn as_millis(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    /// Saturating difference `self - earlier`.
    pub fn saturating_sub(self, earlier: TimeMs) -> TimeMs {
        TimeMs(self.0.saturating_sub(earlier.0))
    }

    /// Rounds a non-negative real millisecond value to the nearest integer (half away from zero).
    pub(crate) fn round_from_f64(ms: f64) -> TimeMs {
        debug_assert!(ms.is_finite() && ms >= -0.5, "bad ms value {ms}");
        TimeMs(ms.max(0.0).round() as u64)
    }
}

impl Add for TimeMs {
    type Output = TimeMs;
    fn add(self, rhs: TimeMs) -> TimeMs {
        TimeMs(self.0 + rhs.0)
    }
}

impl Sub for TimeMs {
    type Output = TimeMs;
    fn sub(self, rhs: TimeMs) -> TimeMs {
        TimeMs(self.0 - rhs.0)
    }
}

impl From<u64> for TimeMs {
    fn from(ms: u64) -> Self {
        TimeMs(ms)
    }
}

impl fmt::Display for TimeMs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ms", self.0)
    }
}
