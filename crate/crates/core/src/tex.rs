//! Rule-based temporal expressions: recognition, field inheritance and bucketed distances.
//!
//! Recognized inventory (case-insensitive except where noted):
//!
//! * month + day: `January 2nd`, `Jan. 2`, `January the 2nd`, optionally followed by
//!   `, 2020` or `2020`
//! * day + month: `the 2nd of January`, `2nd of January`, `2 January`, optionally with a year
//! * month + year: `January 2020`, `January of 2020`
//! * bare ordinal day: `the 10th`
//! * 4-digit year in `1000..=2999`
//! * clock times: `3 pm`, `3pm`, `3:30 pm`, `3:30pm`, `14:30`, `noon`, `midnight`
//! * a date immediately followed by `at <clock time>` merges into one expression
//!
//! `May` and `March` only count as months when capitalized.

use serde::{Deserialize, Serialize};

use crate::types::Relation;
use crate::unit::TemporalUnit;

/// Year substituted when neither side of a comparison names one.
pub const SENTINEL_YEAR: i32 = 2000;

/// Timestamp fields from coarsest to finest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Year,
    Month,
    Day,
    Hour,
    Minute,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::Year, Field::Month, Field::Day, Field::Hour, Field::Minute];
}

/// A possibly incomplete date/time as written in text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PartialTimestamp {
    pub year: Option<i32>,
    pub month: Option<u32>,
    pub day: Option<u32>,
    pub hour: Option<u32>,
    pub minute: Option<u32>,
    /// Half-open token range of the originating expression.
    pub source_span: (usize, usize),
}

impl PartialTimestamp {
    fn field(&self, f: Field) -> Option<i64> {
        match f {
            Field::Year => self.year.map(i64::from),
            Field::Month => self.month.map(i64::from),
            Field::Day => self.day.map(i64::from),
            Field::Hour => self.hour.map(i64::from),
            Field::Minute => self.minute.map(i64::from),
        }
    }

    fn copy_field(&mut self, f: Field, from: &PartialTimestamp) {
        match f {
            Field::Year => self.year = from.year,
            Field::Month => self.month = from.month,
            Field::Day => self.day = from.day,
            Field::Hour => self.hour = from.hour,
            Field::Minute => self.minute = from.minute,
        }
    }

    pub fn has(&self, f: Field) -> bool {
        self.field(f).is_some()
    }

    pub fn coarsest(&self) -> Option<Field> {
        Field::ALL.into_iter().find(|&f| self.has(f))
    }

    pub fn finest(&self) -> Option<Field> {
        Field::ALL.into_iter().rev().find(|&f| self.has(f))
    }

    /// At least one field is present and every present field is in range.
    pub fn is_valid(&self) -> bool {
        let in_range = |v: Option<u32>, lo: u32, hi: u32| v.is_none_or(|v| (lo..=hi).contains(&v));
        self.coarsest().is_some()
            && in_range(self.month, 1, 12)
            && in_range(self.day, 1, 31)
            && in_range(self.hour, 0, 23)
            && in_range(self.minute, 0, 59)
    }

    /// Resolves to seconds since 1970-01-01 after defaulting absent fields.
    ///
    /// Missing year takes `default_year`, missing month/day take 1, missing hour/minute take 0.
    /// Dates that do not exist on the calendar (February 30th) resolve to `None`.
    pub fn resolve(&self, default_year: i32) -> Option<ResolvedInstant> {
        let resolution = self.finest()?;
        let date = chrono::NaiveDate::from_ymd_opt(
            self.year.unwrap_or(default_year),
            self.month.unwrap_or(1),
            self.day.unwrap_or(1),
        )?;
        let at = date.and_hms_opt(self.hour.unwrap_or(0), self.minute.unwrap_or(0), 0)?;
        let epoch = chrono::NaiveDate::from_ymd_opt(1970, 1, 1)?.and_hms_opt(0, 0, 0)?;
        Some(ResolvedInstant {
            seconds: (at - epoch).num_seconds(),
            resolution,
        })
    }
}

/// A concrete instant used only to subtract two expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedInstant {
    pub seconds: i64,
    /// Finest field that was explicitly written.
    pub resolution: Field,
}

/// Fills the absent fields of `current` that are coarser than its finest present field
/// from `previous`. Finer fields stay absent.
pub fn inherit(previous: &PartialTimestamp, current: &PartialTimestamp) -> PartialTimestamp {
    let mut out = *current;
    let Some(finest) = current.finest() else {
        return out;
    };
    for f in Field::ALL.into_iter().take_while(|&f| f < finest) {
        if !current.has(f) {
            out.copy_field(f, previous);
        }
    }
    out
}

/// Orders `a` against `b` and buckets the gap between them.
///
/// The two expressions must share their coarsest written field (both name a year, or
/// both start at the month, ...). Year-less pairs are placed in [`SENTINEL_YEAR`].
/// Equal instants report `before`. Returns `None` when the pair cannot be compared.
pub fn distance_between(
    a: &PartialTimestamp,
    b: &PartialTimestamp,
) -> Option<(Relation, TemporalUnit)> {
    let coarsest = a.coarsest()?;
    if b.coarsest()? != coarsest {
        return None;
    }
    let ta = a.resolve(SENTINEL_YEAR)?;
    let tb = b.resolve(SENTINEL_YEAR)?;
    let order = if ta.seconds <= tb.seconds {
        Relation::Before
    } else {
        Relation::After
    };
    let gap = (tb.seconds - ta.seconds).unsigned_abs() as f64;
    let bucket = TemporalUnit::from_seconds(gap).ok()?;
    Some((order, bucket))
}

/// Returns the first temporal expression found in `tokens`, if any.
pub fn parse_temporal_expression<S: AsRef<str>>(tokens: &[S]) -> Option<PartialTimestamp> {
    let toks = Toks::new(tokens);
    (0..toks.len()).find_map(|i| toks.match_at(i))
}

/// Returns every non-overlapping temporal expression in `tokens`, left to right.
pub fn find_temporal_expressions<S: AsRef<str>>(tokens: &[S]) -> Vec<PartialTimestamp> {
    let toks = Toks::new(tokens);
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        match toks.match_at(i) {
            Some(ts) => {
                i = ts.source_span.1;
                out.push(ts);
            }
            None => i += 1,
        }
    }
    out
}

const MONTHS: [&str; 12] = [
    "january",
    "february",
    "march",
    "april",
    "may",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
];

struct Toks<'a> {
    raw: Vec<&'a str>,
    lower: Vec<String>,
}

impl<'a> Toks<'a> {
    fn new<S: AsRef<str>>(tokens: &'a [S]) -> Self {
        let raw: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
        let lower = raw.iter().map(|t| t.to_lowercase()).collect();
        Toks { raw, lower }
    }

    fn len(&self) -> usize {
        self.raw.len()
    }

    fn lower(&self, i: usize) -> Option<&str> {
        self.lower.get(i).map(String::as_str)
    }

    fn is(&self, i: usize, word: &str) -> bool {
        self.lower(i) == Some(word)
    }

    /// Month at `i`, returning (month, tokens consumed) so `Jan .` counts as one month.
    fn month(&self, i: usize) -> Option<(u32, usize)> {
        let raw = *self.raw.get(i)?;
        let lower = self.lower(i)?;
        let word = lower.trim_end_matches('.');
        let idx = MONTHS.iter().position(|m| *m == word).or_else(|| {
            if word.len() >= 3 && word != "mar" && word != "may" {
                MONTHS
                    .iter()
                    .position(|m| m.starts_with(word) && (word.len() == 3 || word == "sept"))
            } else if word == "mar" {
                Some(2)
            } else {
                None
            }
        })?;
        // "may" and "march" are ordinary words unless capitalized
        if (idx == 4 || idx == 2) && !raw.starts_with(|c: char| c.is_uppercase()) {
            return None;
        }
        let abbreviated = word != MONTHS[idx];
        let used = if abbreviated && !lower.ends_with('.') && self.is(i + 1, ".") {
            2
        } else {
            1
        };
        Some((idx as u32 + 1, used))
    }

    /// `2nd`, `10th`: returns the day.
    fn ordinal_day(&self, i: usize) -> Option<u32> {
        let t = self.lower(i)?;
        let digits = ["st", "nd", "rd", "th"].iter().find_map(|s| t.strip_suffix(s))?;
        let day = small_number(digits, 2)?;
        (1..=31).contains(&day).then_some(day)
    }

    /// Either an ordinal or a plain 1–2 digit number in day range.
    fn day(&self, i: usize) -> Option<u32> {
        self.ordinal_day(i).or_else(|| {
            let day = small_number(self.lower(i)?, 2)?;
            (1..=31).contains(&day).then_some(day)
        })
    }

    fn year(&self, i: usize) -> Option<i32> {
        let t = self.lower(i)?;
        if t.len() != 4 {
            return None;
        }
        let y = small_number(t, 4)? as i32;
        (1000..=2999).contains(&y).then_some(y)
    }

    /// Optional year after a date, allowing one comma: returns (year, tokens consumed).
    fn trailing_year(&self, i: usize) -> Option<(i32, usize)> {
        if let Some(y) = self.year(i) {
            return Some((y, 1));
        }
        if self.is(i, ",") {
            if let Some(y) = self.year(i + 1) {
                return Some((y, 2));
            }
        }
        None
    }

    fn date(&self, i: usize) -> Option<PartialTimestamp> {
        let mut ts = PartialTimestamp::default();
        // Month-first forms.
        if let Some((month, used)) = self.month(i) {
            ts.month = Some(month);
            let mut j = i + used;
            let with_the = self.is(j, "the");
            let day = if with_the {
                self.ordinal_day(j + 1)
            } else {
                self.day(j)
            };
            if let Some(day) = day {
                ts.day = Some(day);
                j += if with_the { 2 } else { 1 };
                if let Some((y, used)) = self.trailing_year(j) {
                    ts.year = Some(y);
                    j += used;
                }
                ts.source_span = (i, j);
                return Some(ts);
            }
            let of = usize::from(self.is(j, "of"));
            if let Some(y) = self.year(j + of) {
                ts.year = Some(y);
                ts.source_span = (i, j + of + 1);
                return Some(ts);
            }
            return None;
        }
        // Day-first forms.
        let with_the = self.is(i, "the");
        let d = i + usize::from(with_the);
        let day = self.ordinal_day(d).or_else(|| if with_the { None } else { self.day(d) })?;
        let mut j = d + 1;
        let of = self.is(j, "of");
        let month = self.month(j + usize::from(of));
        match month {
            Some((month, used)) => {
                ts.month = Some(month);
                j += usize::from(of) + used;
                if let Some((y, used)) = self.trailing_year(j) {
                    ts.year = Some(y);
                    j += used;
                }
            }
            // A bare plain number is not a date; a bare ordinal needs "the".
            None if with_the && self.ordinal_day(d).is_some() => {}
            None => return None,
        }
        ts.day = Some(day);
        ts.source_span = (i, j);
        Some(ts)
    }

    /// Clock time at `i`: returns (hour, minute, tokens consumed).
    fn clock(&self, i: usize) -> Option<(u32, u32, usize)> {
        let t = self.lower(i)?;
        match t {
            "noon" => return Some((12, 0, 1)),
            "midnight" => return Some((0, 0, 1)),
            _ => {}
        }
        let (body, glued) = match split_meridiem(t) {
            Some((body, m)) if !body.is_empty() => (body, Some(m)),
            _ => (t, None),
        };
        let (hour, minute, colon) = match body.split_once(':') {
            Some((h, m)) if m.len() == 2 => (small_number(h, 2)?, small_number(m, 2)?, true),
            Some(_) => return None,
            None => (small_number(body, 2)?, 0, false),
        };
        if minute > 59 {
            return None;
        }
        let (meridiem, used) = match glued {
            Some(m) => (Some(m), 1),
            None => match self.lower(i + 1).and_then(meridiem_word) {
                Some(m) => {
                    let dotted = self.is(i + 2, ".") && self.lower(i + 1).is_some_and(|w| w.contains('.'));
                    (Some(m), if dotted { 3 } else { 2 })
                }
                None => (None, 1),
            },
        };
        match meridiem {
            Some(pm) => {
                if !(1..=12).contains(&hour) {
                    return None;
                }
                let hour = match (hour, pm) {
                    (12, false) => 0,
                    (12, true) => 12,
                    (h, false) => h,
                    (h, true) => h + 12,
                };
                Some((hour, minute, used))
            }
            None if colon && hour <= 23 => Some((hour, minute, 1)),
            None => None,
        }
    }

    fn match_at(&self, i: usize) -> Option<PartialTimestamp> {
        if let Some(mut ts) = self.date(i) {
            let j = ts.source_span.1;
            if self.is(j, "at") {
                if let Some((h, m, used)) = self.clock(j + 1) {
                    ts.hour = Some(h);
                    ts.minute = Some(m);
                    ts.source_span.1 = j + 1 + used;
                }
            }
            return Some(ts);
        }
        if let Some((h, m, used)) = self.clock(i) {
            return Some(PartialTimestamp {
                hour: Some(h),
                minute: Some(m),
                source_span: (i, i + used),
                ..Default::default()
            });
        }
        self.year(i).map(|y| PartialTimestamp {
            year: Some(y),
            source_span: (i, i + 1),
            ..Default::default()
        })
    }
}

fn small_number(s: &str, max_digits: usize) -> Option<u32> {
    if s.is_empty() || s.len() > max_digits || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `true` for pm.
fn meridiem_word(w: &str) -> Option<bool> {
    match w {
        "am" | "a.m." | "a.m" => Some(false),
        "pm" | "p.m." | "p.m" => Some(true),
        _ => None,
    }
}

fn split_meridiem(t: &str) -> Option<(&str, bool)> {
    ["a.m.", "p.m.", "a.m", "p.m", "am", "pm"]
        .iter()
        .find_map(|suffix| t.strip_suffix(suffix).map(|body| (body, meridiem_word(suffix).unwrap())))
}
