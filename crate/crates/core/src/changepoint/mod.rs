//! Weekly series construction, smoothing, three change-point detectors
//! (PELT, Binary Segmentation, BOCPD) under a shared RBF segment cost, and
//! ±1-week consensus clustering.

mod binseg;
mod bocpd;
mod consensus;
mod kernel;
mod loess;
mod pelt;

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};

use crate::calendar::Week;
use crate::error::{Error, Result};
use crate::language::Language;

pub use binseg::binseg;
pub use bocpd::{bocpd, BocpdParams, BocpdResult, DEFAULT_HAZARD};
pub use consensus::{consensus, ChangePointReport, Cluster, ConsensusPoint};
pub use kernel::RbfCost;
pub use loess::loess_trend;
pub use pelt::{pelt_grid, pelt_rbf, PeltGrid, MIN_SERIES_LEN};

pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_LOESS_SPAN: f64 = 0.25;
pub const DEFAULT_PENALTY_MULTIPLIERS: [f64; 3] = [0.5, 1.0, 2.0];
pub const DEFAULT_BASELINE_MULTIPLIER: f64 = 1.0;

/// A contiguous weekly series (empty weeks zero-filled).
#[derive(Debug, Clone, PartialEq)]
pub struct WeeklySeries {
    label: String,
    language: Language,
    start: Week,
    values: Vec<f64>,
}

impl WeeklySeries {
    pub fn new(
        label: impl Into<String>,
        language: Language,
        start: Week,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(WeeklySeries {
            label: label.into(),
            language,
            start,
            values,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn start(&self) -> Week {
        self.start
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn week_at(&self, index: usize) -> Week {
        let mut w = self.start;
        for _ in 0..index {
            w = w.succ();
        }
        w
    }

    pub fn weeks(&self) -> impl Iterator<Item = Week> + '_ {
        let mut w = self.start;
        (0..self.values.len()).map(move |_| {
            let current = w;
            w = w.succ();
            current
        })
    }
}

/// Article counts per ISO week over [first, last], zero-filled between.
pub fn weekly_counts(
    label: impl Into<String>,
    language: Language,
    timestamps: &[DateTime<Utc>],
) -> Result<WeeklySeries> {
    if timestamps.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut counts: BTreeMap<Week, usize> = BTreeMap::new();
    for at in timestamps {
        *counts.entry(Week::from_datetime(at)).or_insert(0) += 1;
    }
    let first = *counts.keys().next().unwrap();
    let last = *counts.keys().next_back().unwrap();
    let mut values = Vec::new();
    let mut week = first;
    loop {
        values.push(counts.get(&week).copied().unwrap_or(0) as f64);
        if week == last {
            break;
        }
        week = week.succ();
    }
    WeeklySeries::new(label, language, first, values)
}

/// Centered moving average with an odd window; the window shrinks at the
/// edges to the values actually available.
pub fn moving_average(values: &[f64], window: usize) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidWindow(window));
    }
    let half = window / 2;
    let n = values.len();
    Ok((0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect())
}

/// The three detectors, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Detector {
    Pelt,
    Binseg,
    Bocpd,
}

impl std::fmt::Display for Detector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Detector::Pelt => "pelt",
            Detector::Binseg => "binseg",
            Detector::Bocpd => "bocpd",
        })
    }
}

/// One detector's candidate change points over a series of length `t`.
/// A candidate at index i means a new segment starts at week position i.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorCandidates {
    pub detector: Detector,
    /// Human-readable parameter echo for reports.
    pub parameters: String,
    indices: Vec<usize>,
}

impl DetectorCandidates {
    /// Indices are sorted, deduplicated, and restricted to [1, t−1].
    pub fn new(
        detector: Detector,
        parameters: impl Into<String>,
        mut indices: Vec<usize>,
        t: usize,
    ) -> Self {
        indices.retain(|&i| i >= 1 && i < t);
        indices.sort_unstable();
        indices.dedup();
        DetectorCandidates {
            detector,
            parameters: parameters.into(),
            indices,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Detector and smoothing parameters for one analysis run.
#[derive(Debug, Clone)]
pub struct CpdParams {
    pub penalty_multipliers: Vec<f64>,
    pub baseline_multiplier: f64,
    pub bocpd: BocpdParams,
    pub window: usize,
    pub loess_span: f64,
}

impl Default for CpdParams {
    fn default() -> Self {
        CpdParams {
            penalty_multipliers: DEFAULT_PENALTY_MULTIPLIERS.to_vec(),
            baseline_multiplier: DEFAULT_BASELINE_MULTIPLIER,
            bocpd: BocpdParams::default(),
            window: DEFAULT_WINDOW,
            loess_span: DEFAULT_LOESS_SPAN,
        }
    }
}

/// Full analysis of one weekly series: smoothed variants plus detector and
/// consensus results. Detection runs on the moving-average series; LOESS is
/// a display trend over the raw series.
#[derive(Debug, Clone)]
pub struct SeriesAnalysis {
    pub ma3: Vec<f64>,
    pub loess: Vec<f64>,
    pub report: ChangePointReport,
}

pub fn analyze_weekly(series: &WeeklySeries, params: &CpdParams) -> Result<SeriesAnalysis> {
    let smoothed = moving_average(series.values(), params.window)?;
    let loess = loess_trend(series.values(), params.loess_span)?;

    let grid = pelt_grid(
        &smoothed,
        &params.penalty_multipliers,
        params.baseline_multiplier,
    )?;
    let k = grid.baseline_indices.len();
    let binseg_out = binseg(&smoothed, k)?;
    let bocpd_out = bocpd(&smoothed, &params.bocpd)?;

    let report = consensus(
        vec![grid.union, binseg_out, bocpd_out.candidates],
        "ma3",
    );
    Ok(SeriesAnalysis {
        ma3: smoothed,
        loess,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn at(y: i32, m: u32, d: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(y, m, d, 9, 0, 0).unwrap()
    }

    #[test]
    fn weekly_counts_zero_fills() {
        // Weeks 2020-W02, (W03 empty), W04.
        let series = weekly_counts(
            "e",
            Language::Fr,
            &[at(2020, 1, 6), at(2020, 1, 7), at(2020, 1, 20)],
        )
        .unwrap();
        assert_eq!(series.values(), &[2.0, 0.0, 1.0]);
        assert_eq!(series.start().to_string(), "2020-W02");
        assert_eq!(series.week_at(2).to_string(), "2020-W04");
        let weeks: Vec<String> = series.weeks().map(|w| w.to_string()).collect();
        assert_eq!(weeks, vec!["2020-W02", "2020-W03", "2020-W04"]);
    }

    #[test]
    fn weekly_counts_single_week() {
        let series =
            weekly_counts("e", Language::Fr, &[at(2020, 1, 6), at(2020, 1, 8)]).unwrap();
        assert_eq!(series.values(), &[2.0]);
    }

    #[test]
    fn empty_subset_is_an_error() {
        assert!(matches!(
            weekly_counts("e", Language::Fr, &[]),
            Err(Error::EmptySeries)
        ));
    }

    #[test]
    fn ma3_spec_example() {
        let out = moving_average(&[0.0, 0.0, 9.0, 0.0, 0.0], 3).unwrap();
        assert_eq!(out, vec![0.0, 3.0, 3.0, 3.0, 0.0]);
    }

    #[test]
    fn ma3_constant_unchanged() {
        let out = moving_average(&[2.5; 7], 3).unwrap();
        assert_eq!(out, vec![2.5; 7]);
    }

    #[test]
    fn ma_rejects_even_window() {
        assert!(matches!(
            moving_average(&[1.0, 2.0], 2),
            Err(Error::InvalidWindow(2))
        ));
        assert!(matches!(
            moving_average(&[1.0, 2.0], 0),
            Err(Error::InvalidWindow(0))
        ));
    }

    #[test]
    fn ma3_mean_preserved_on_edge_padded_series() {
        // With both edge pairs at the overall mean the edge shrinkage is
        // lossless, so the mean is preserved exactly.
        let c = 4.0;
        let values = vec![c, c, c + 3.0, c - 1.0, c - 2.0, c, c, c];
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        assert!((mean - c).abs() < 1e-12);
        let out = moving_average(&values, 3).unwrap();
        let out_mean = out.iter().sum::<f64>() / out.len() as f64;
        assert!((out_mean - mean).abs() < 1e-9);
    }

    #[test]
    fn candidates_are_normalized() {
        let c = DetectorCandidates::new(Detector::Pelt, "p", vec![9, 3, 3, 0, 10, 11], 10);
        assert_eq!(c.indices(), &[3, 9]);
    }
}
