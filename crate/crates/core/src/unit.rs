//! The seven coarse temporal units shared by distances and durations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

const MINUTE: f64 = 60.0;
const HOUR: f64 = 60.0 * MINUTE;
const DAY: f64 = 24.0 * HOUR;

/// Lower bound (inclusive, in seconds) of each bucket above `≤minutes`.
///
/// Bucket `k` covers `[LOWER_BOUNDS[k - 1], LOWER_BOUNDS[k])`; the last one is unbounded.
pub const LOWER_BOUNDS: [f64; 6] = [
    HOUR,
    DAY,
    7.0 * DAY,
    30.0 * DAY,
    365.0 * DAY,
    3650.0 * DAY,
];

/// A coarse magnitude bucket, ordered from `≤minutes` (index 0) to `≥decades` (index 6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemporalUnit {
    Minutes,
    Hours,
    Days,
    Weeks,
    Months,
    Years,
    Decades,
}

impl TemporalUnit {
    pub const COUNT: usize = 7;

    pub const ALL: [TemporalUnit; 7] = [
        TemporalUnit::Minutes,
        TemporalUnit::Hours,
        TemporalUnit::Days,
        TemporalUnit::Weeks,
        TemporalUnit::Months,
        TemporalUnit::Years,
        TemporalUnit::Decades,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    /// Display name used in reports (`≤minutes`, `hours`, …, `≥decades`).
    pub fn canonical_name(self) -> &'static str {
        match self {
            TemporalUnit::Minutes => "≤minutes",
            TemporalUnit::Hours => "hours",
            TemporalUnit::Days => "days",
            TemporalUnit::Weeks => "weeks",
            TemporalUnit::Months => "months",
            TemporalUnit::Years => "years",
            TemporalUnit::Decades => "≥decades",
        }
    }

    /// ASCII name used in JSON files.
    pub fn name(self) -> &'static str {
        match self {
            TemporalUnit::Minutes => "minutes",
            TemporalUnit::Hours => "hours",
            TemporalUnit::Days => "days",
            TemporalUnit::Weeks => "weeks",
            TemporalUnit::Months => "months",
            TemporalUnit::Years => "years",
            TemporalUnit::Decades => "decades",
        }
    }

    /// The sentinel output token standing for this unit: `[extra_id_k]` for index `k`.
    pub fn token(self) -> String {
        format!("[extra_id_{}]", self.index())
    }

    /// Inverse of [`TemporalUnit::token`]. Anything else is `None`.
    pub fn parse_token(token: &str) -> Option<Self> {
        let digits = token.strip_prefix("[extra_id_")?.strip_suffix(']')?;
        if digits.len() != 1 {
            return None;
        }
        let index = digits.parse::<usize>().ok()?;
        Self::from_index(index)
    }

    /// Buckets a nonnegative number of seconds.
    pub fn from_seconds(seconds: f64) -> Result<Self, Error> {
        if seconds.is_nan() || seconds < 0.0 {
            return Err(Error::Domain(format!(
                "duration must be a nonnegative number of seconds, got {seconds}"
            )));
        }
        let index = LOWER_BOUNDS.iter().take_while(|&&lo| seconds >= lo).count();
        Ok(Self::ALL[index])
    }
}

impl fmt::Display for TemporalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TemporalUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim_start_matches(['≤', '≥']);
        Self::ALL
            .iter()
            .copied()
            .find(|u| u.name() == trimmed)
            .ok_or_else(|| Error::Parse(format!("unknown temporal unit `{s}`")))
    }
}

/// Convenience wrapper over [`TemporalUnit::from_seconds`].
pub fn bucket_of_seconds(seconds: f64) -> Result<TemporalUnit, Error> {
    TemporalUnit::from_seconds(seconds)
}
