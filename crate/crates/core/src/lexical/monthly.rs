use std::collections::BTreeMap;

use chrono::{DateTime, Utc};

use crate::calendar::MonthKey;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothing {
    Raw,
    Rolling3,
}

/// Monthly means of some article-level value. Months are strictly
/// increasing; months without articles are absent (a mean has no value
/// there), which also isolates rolling windows across gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlySeries {
    months: Vec<MonthKey>,
    values: Vec<f64>,
    smoothing: Smoothing,
}

impl MonthlySeries {
    pub fn months(&self) -> &[MonthKey] {
        &self.months
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn len(&self) -> usize {
        self.months.len()
    }

    pub fn is_empty(&self) -> bool {
        self.months.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MonthKey, f64)> + '_ {
        self.months.iter().copied().zip(self.values.iter().copied())
    }

    /// Centered 3-month rolling mean over the calendar-adjacent neighbors
    /// that are present in the series; the window shrinks at edges and at
    /// gaps.
    pub fn rolling3(&self) -> MonthlySeries {
        let by_month: BTreeMap<MonthKey, f64> = self.iter().collect();
        let values = self
            .months
            .iter()
            .map(|m| {
                let mut sum = 0.0;
                let mut n = 0usize;
                for key in [m.pred(), *m, m.succ()] {
                    if let Some(v) = by_month.get(&key) {
                        sum += v;
                        n += 1;
                    }
                }
                sum / n as f64
            })
            .collect();
        MonthlySeries {
            months: self.months.clone(),
            values,
            smoothing: Smoothing::Rolling3,
        }
    }
}

/// Unweighted mean per calendar month of the given (timestamp, value) points.
pub fn monthly_mean(points: &[(DateTime<Utc>, f64)]) -> Result<MonthlySeries> {
    if points.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut sums: BTreeMap<MonthKey, (f64, usize)> = BTreeMap::new();
    for (at, value) in points {
        let entry = sums.entry(MonthKey::from_datetime(at)).or_insert((0.0, 0));
        entry.0 += value;
        entry.1 += 1;
    }
    let mut months = Vec::with_capacity(sums.len());
    let mut values = Vec::with_capacity(sums.len());
    for (month, (sum, n)) in sums {
        months.push(month);
        values.push(sum / n as f64);
    }
    Ok(MonthlySeries {
        months,
        values,
        smoothing: Smoothing::Raw,
    })
}

/// Percent deviation from the baseline mean: 100·(x − μ)/μ.
pub fn relative_change(value: f64, baseline_mean: f64) -> Result<f64> {
    if !(baseline_mean > 0.0) {
        return Err(Error::NonPositiveBaseline(baseline_mean));
    }
    Ok(100.0 * (value - baseline_mean) / baseline_mean)
}

/// Apply `relative_change` pointwise, then aggregate monthly; returns the
/// raw monthly series and its 3-month rolling mean.
pub fn relative_change_series(
    points: &[(DateTime<Utc>, f64)],
    baseline_mean: f64,
) -> Result<(MonthlySeries, MonthlySeries)> {
    let transformed: Vec<(DateTime<Utc>, f64)> = points
        .iter()
        .map(|(at, x)| Ok((*at, relative_change(*x, baseline_mean)?)))
        .collect::<Result<_>>()?;
    let raw = monthly_mean(&transformed)?;
    let rolling = raw.rolling3();
    Ok((raw, rolling))
}
