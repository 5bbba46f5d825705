//! CSV report writers. Every file gets a header row, a stable column order,
//! and shortest-roundtrip float formatting so reruns are byte-identical.

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use newstrace::changepoint::{SeriesAnalysis, WeeklySeries};
use newstrace::corpus::{CorpusStats, Rejection, SourceQuality};
use newstrace::domestication::{WeeklyLpsr, WeeklyProfile};
use newstrace::entities::MentionRejection;
use newstrace::lexical::{Metric, MonthlySeries};
use newstrace::retrieval::EventSubset;
use newstrace::sentiment::EntitySentimentSeries;
use newstrace::Language;

/// Shortest decimal that round-trips to the same f64; empty for None.
pub fn fmt_f64(value: f64) -> String {
    format!("{value}")
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(fmt_f64).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create {}", parent.display()))?;
    }
    let file =
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(mut w: csv::Writer<File>, path: &Path) -> Result<()> {
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// stats.csv: one row per language plus an `all` total row carrying the
/// corpus date window.
pub fn write_stats(dir: &Path, stats: &CorpusStats) -> Result<PathBuf> {
    let path = dir.join("stats.csv");
    let mut w = writer(&path)?;
    w.write_record(["scope", "articles", "outlets", "window_start", "window_end"])?;
    for (&language, &articles) in &stats.per_language_articles {
        let outlets = stats.per_language_outlets.get(&language).copied().unwrap_or(0);
        w.write_record([
            language.to_string(),
            articles.to_string(),
            outlets.to_string(),
            String::new(),
            String::new(),
        ])?;
    }
    let outlets_total: usize = stats.per_language_outlets.values().sum();
    let (start, end) = match stats.window {
        Some((s, e)) => (s.to_rfc3339(), e.to_rfc3339()),
        None => (String::new(), String::new()),
    };
    w.write_record([
        "all".to_string(),
        stats.total_articles.to_string(),
        outlets_total.to_string(),
        start,
        end,
    ])?;
    finish(w, &path)?;
    Ok(path)
}

/// rejections.csv: one row per rejected corpus line.
pub fn write_rejections(dir: &Path, rejections: &[Rejection]) -> Result<PathBuf> {
    let path = dir.join("rejections.csv");
    let mut w = writer(&path)?;
    w.write_record(["line", "reason"])?;
    for r in rejections {
        w.write_record([r.line.to_string(), r.reason.to_string()])?;
    }
    finish(w, &path)?;
    Ok(path)
}

/// mention_rejections.csv: one row per rejected annotation line.
pub fn write_mention_rejections(dir: &Path, rejections: &[MentionRejection]) -> Result<PathBuf> {
    let path = dir.join("mention_rejections.csv");
    let mut w = writer(&path)?;
    w.write_record(["line", "reason"])?;
    for r in rejections {
        w.write_record([r.line.to_string(), r.reason.to_string()])?;
    }
    finish(w, &path)?;
    Ok(path)
}

/// source_quality.csv: per-outlet fault and coverage measures.
pub fn write_source_quality(dir: &Path, rows: &[SourceQuality]) -> Result<PathBuf> {
    let path = dir.join("source_quality.csv");
    let mut w = writer(&path)?;
    w.write_record([
        "outlet",
        "total_articles",
        "faulty_articles",
        "faulty_ratio",
        "months_active",
        "months_in_window",
        "temporal_consistency",
    ])?;
    for q in rows {
        w.write_record([
            q.outlet.clone(),
            q.total_articles.to_string(),
            q.faulty_articles.to_string(),
            fmt_f64(q.faulty_ratio),
            q.months_active.to_string(),
            q.months_in_window.to_string(),
            fmt_f64(q.temporal_consistency),
        ])?;
    }
    finish(w, &path)?;
    Ok(path)
}

/// boilerplate.csv: lines stripped during cleaning, per outlet.
pub fn write_boilerplate(
    dir: &Path,
    removed: &std::collections::BTreeMap<String, Vec<String>>,
) -> Result<PathBuf> {
    let path = dir.join("boilerplate.csv");
    let mut w = writer(&path)?;
    w.write_record(["outlet", "removed_line"])?;
    for (outlet, lines) in removed {
        for line in lines {
            w.write_record([outlet.as_str(), line.as_str()])?;
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// events_summary.csv: one row per event and language with volume flags.
pub fn write_events_summary(dir: &Path, subsets: &[EventSubset]) -> Result<PathBuf> {
    let path = dir.join("events_summary.csv");
    let mut w = writer(&path)?;
    w.write_record(["event", "method", "language", "articles", "below_min_volume"])?;
    for subset in subsets {
        for (&language, docs) in &subset.per_language {
            w.write_record([
                subset.event_name.clone(),
                subset.method.to_string(),
                language.to_string(),
                docs.len().to_string(),
                subset.below_volume.contains(&language).to_string(),
            ])?;
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// subsets.csv: every retrieved article with its score and 1-based rank.
pub fn write_subsets(dir: &Path, subsets: &[EventSubset]) -> Result<PathBuf> {
    let path = dir.join("subsets.csv");
    let mut w = writer(&path)?;
    w.write_record(["event", "language", "rank", "article_id", "score"])?;
    for subset in subsets {
        for (&language, docs) in &subset.per_language {
            for (rank, doc) in docs.iter().enumerate() {
                w.write_record([
                    subset.event_name.clone(),
                    language.to_string(),
                    (rank + 1).to_string(),
                    doc.article_id.clone(),
                    fmt_f64(doc.score),
                ])?;
            }
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// Monthly lexical series for one language and metric, aligned on months.
/// Relative change is absent when the baseline mean is not positive.
pub struct LexicalSeries {
    pub language: Language,
    pub metric: Metric,
    pub mean_raw: MonthlySeries,
    pub mean_z: MonthlySeries,
    pub rolling3_z: MonthlySeries,
    pub rel_change: Option<MonthlySeries>,
    pub rolling3_rel: Option<MonthlySeries>,
}

/// Composite-z monthly series for one language (no raw or relative form).
pub struct CompositeSeries {
    pub language: Language,
    pub mean_z: MonthlySeries,
    pub rolling3_z: MonthlySeries,
}

/// lexical.csv: per-language, per-metric monthly means of raw values,
/// z-scores, and percent relative change, with 3-month rolling variants.
/// Composite rows leave the raw and relative columns empty.
pub fn write_lexical(
    dir: &Path,
    series: &[LexicalSeries],
    composites: &[CompositeSeries],
) -> Result<PathBuf> {
    let path = dir.join("lexical.csv");
    let mut w = writer(&path)?;
    w.write_record([
        "language",
        "month",
        "metric",
        "mean_raw",
        "mean_z",
        "rolling3_z",
        "rel_change",
        "rolling3_rel",
    ])?;
    for s in series {
        for (i, (month, raw)) in s.mean_raw.iter().enumerate() {
            w.write_record([
                s.language.to_string(),
                month.to_string(),
                s.metric.to_string(),
                fmt_f64(raw),
                fmt_f64(s.mean_z.values()[i]),
                fmt_f64(s.rolling3_z.values()[i]),
                fmt_opt(s.rel_change.as_ref().map(|m| m.values()[i])),
                fmt_opt(s.rolling3_rel.as_ref().map(|m| m.values()[i])),
            ])?;
        }
    }
    for c in composites {
        for (i, (month, z)) in c.mean_z.iter().enumerate() {
            w.write_record([
                c.language.to_string(),
                month.to_string(),
                "composite".to_string(),
                String::new(),
                fmt_f64(z),
                fmt_f64(c.rolling3_z.values()[i]),
                String::new(),
                String::new(),
            ])?;
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// domestication.csv: weekly mean anchored-mention shares per language.
pub fn write_domestication(dir: &Path, rows: &[WeeklyProfile]) -> Result<PathBuf> {
    let path = dir.join("domestication.csv");
    let mut w = writer(&path)?;
    w.write_record(["language", "week", "articles", "p_swiss", "p_neighbor", "p_other"])?;
    for r in rows {
        w.write_record([
            r.language.to_string(),
            r.week.to_string(),
            r.article_count.to_string(),
            fmt_f64(r.p_swiss),
            fmt_f64(r.p_neighbor),
            fmt_f64(r.p_other),
        ])?;
    }
    finish(w, &path)?;
    Ok(path)
}

/// lpsr.csv: weekly proximity salience per language.
pub fn write_lpsr(dir: &Path, rows: &[WeeklyLpsr]) -> Result<PathBuf> {
    let path = dir.join("lpsr.csv");
    let mut w = writer(&path)?;
    w.write_record(["language", "week", "articles", "mean_lpsr"])?;
    for r in rows {
        w.write_record([
            r.language.to_string(),
            r.week.to_string(),
            r.article_count.to_string(),
            fmt_f64(r.mean_lpsr),
        ])?;
    }
    finish(w, &path)?;
    Ok(path)
}

/// sentiment.csv: per-entity bucketed mean scores per language.
pub fn write_sentiment(dir: &Path, series: &[EntitySentimentSeries]) -> Result<PathBuf> {
    let path = dir.join("sentiment.csv");
    let mut w = writer(&path)?;
    w.write_record(["language", "link_id", "bucket", "mentions", "mean_score", "low_support"])?;
    for s in series {
        for b in &s.buckets {
            w.write_record([
                s.language.to_string(),
                s.link_id.clone(),
                b.key.to_string(),
                b.mention_count.to_string(),
                fmt_f64(b.mean_score),
                b.low_support.to_string(),
            ])?;
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// series.csv: raw weekly counts with smoothed variants. Short series carry
/// counts and ma3 only.
pub fn write_series(
    dir: &Path,
    rows: &[(WeeklySeries, Option<SeriesAnalysis>)],
) -> Result<PathBuf> {
    let path = dir.join("series.csv");
    let mut w = writer(&path)?;
    w.write_record(["language", "week", "count", "ma3", "loess"])?;
    for (series, analysis) in rows {
        for (i, week) in series.weeks().enumerate() {
            let (ma3, loess) = match analysis {
                Some(a) => (Some(a.ma3[i]), Some(a.loess[i])),
                None => (None, None),
            };
            w.write_record([
                series.language().to_string(),
                week.to_string(),
                fmt_f64(series.values()[i]),
                fmt_opt(ma3),
                fmt_opt(loess),
            ])?;
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// changepoint.csv: every candidate from every detector, before consensus.
pub fn write_changepoints(
    dir: &Path,
    rows: &[(WeeklySeries, Option<SeriesAnalysis>)],
) -> Result<PathBuf> {
    let path = dir.join("changepoint.csv");
    let mut w = writer(&path)?;
    w.write_record(["language", "detector", "parameters", "week_index", "week"])?;
    for (series, analysis) in rows {
        let Some(analysis) = analysis else { continue };
        for candidates in &analysis.report.per_detector {
            for &index in candidates.indices() {
                w.write_record([
                    series.language().to_string(),
                    candidates.detector.to_string(),
                    candidates.parameters.clone(),
                    index.to_string(),
                    series.week_at(index).to_string(),
                ])?;
            }
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// consensus.csv: change points supported by at least two detectors.
pub fn write_consensus(
    dir: &Path,
    rows: &[(WeeklySeries, Option<SeriesAnalysis>)],
) -> Result<PathBuf> {
    let path = dir.join("consensus.csv");
    let mut w = writer(&path)?;
    w.write_record([
        "language",
        "week_index",
        "week",
        "band_start",
        "band_end",
        "detectors",
    ])?;
    for (series, analysis) in rows {
        let Some(analysis) = analysis else { continue };
        for point in &analysis.report.consensus {
            let detectors: Vec<String> =
                point.detectors.iter().map(|d| d.to_string()).collect();
            w.write_record([
                series.language().to_string(),
                point.index.to_string(),
                series.week_at(point.index).to_string(),
                series.week_at(point.band.0).to_string(),
                series.week_at(point.band.1).to_string(),
                detectors.join("+"),
            ])?;
        }
    }
    finish(w, &path)?;
    Ok(path)
}
