//! ISO-week and calendar-month keys used by every time-bucketed series.

use std::fmt;

use chrono::{DateTime, Datelike, Duration, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

/// An ISO-8601 week, stored as the Monday that opens it. Ordering and
/// equality follow the calendar; `Display` renders `YYYY-Www` with the ISO
/// week-based year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Week(NaiveDate);

impl Week {
    pub fn from_date(date: NaiveDate) -> Self {
        let back = date.weekday().num_days_from_monday() as i64;
        Week(date - Duration::days(back))
    }

    pub fn from_datetime(at: &DateTime<Utc>) -> Self {
        Week::from_date(at.date_naive())
    }

    pub fn monday(self) -> NaiveDate {
        self.0
    }

    pub fn succ(self) -> Self {
        Week(self.0 + Duration::days(7))
    }

    /// Whole weeks from `self` to `other`; negative when `other` is earlier.
    pub fn weeks_until(self, other: Week) -> i64 {
        (other.0 - self.0).num_days() / 7
    }
}

impl fmt::Display for Week {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let iso = self.0.iso_week();
        write!(f, "{:04}-W{:02}", iso.year(), iso.week())
    }
}

/// A calendar month. `Display` renders `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonthKey {
    year: i32,
    month: u32,
}

impl MonthKey {
    pub fn new(year: i32, month: u32) -> Self {
        assert!((1..=12).contains(&month), "month out of range: {month}");
        MonthKey { year, month }
    }

    pub fn from_datetime(at: &DateTime<Utc>) -> Self {
        let d = at.date_naive();
        MonthKey {
            year: d.year(),
            month: d.month(),
        }
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    pub fn succ(self) -> Self {
        if self.month == 12 {
            MonthKey::new(self.year + 1, 1)
        } else {
            MonthKey::new(self.year, self.month + 1)
        }
    }

    pub fn pred(self) -> Self {
        if self.month == 1 {
            MonthKey::new(self.year - 1, 12)
        } else {
            MonthKey::new(self.year, self.month - 1)
        }
    }
}

impl fmt::Display for MonthKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}
