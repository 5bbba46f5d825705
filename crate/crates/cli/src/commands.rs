//! Subcommand implementations. Each returns accumulated warnings; the
//! caller maps a non-empty list to the partial exit code.

use std::collections::BTreeSet;

use anyhow::{bail, Context, Result};
use chrono::{DateTime, Utc};

use newstrace::changepoint::{analyze_weekly, weekly_counts, SeriesAnalysis, WeeklySeries, MIN_SERIES_LEN};
use newstrace::domestication::{
    article_lpsr, article_profile, weekly_lpsr, weekly_profiles, AnchorCounts, ArticleProfile,
    LpsrRecord,
};
use newstrace::entities::{detect_cues, resolve_anchor, MentionRecord};
use newstrace::lexical::{
    article_metrics, monthly_mean, relative_change_series, standardize, LexicalRecord, Metric,
};
use newstrace::retrieval::EventSubset;
use newstrace::sentiment::entity_series;
use newstrace::{Article, Error, Language};

use crate::config::RunConfig;
use crate::pipeline::{event_subsets, load_resources, Resources};
use crate::reports;

/// Ingest the corpus, strip boilerplate, and write corpus-level reports.
pub fn cmd_ingest(config: &RunConfig) -> Result<Vec<String>> {
    let resources = load_resources(config)?;
    let stats = resources.store.stats();
    let dir = &config.output_dir;
    reports::write_stats(dir, &stats)?;
    reports::write_rejections(dir, &resources.ingest.rejections)?;
    reports::write_mention_rejections(dir, &resources.mention_rejections)?;
    reports::write_boilerplate(dir, &resources.boilerplate)?;

    let mut quality = Vec::new();
    for outlet in resources.store.outlets() {
        quality.push(resources.store.source_quality(outlet, stats.window)?);
    }
    reports::write_source_quality(dir, &quality)?;
    Ok(Vec::new())
}

/// Build every configured event subset and write the retrieval reports.
pub fn cmd_events(config: &RunConfig) -> Result<Vec<String>> {
    let resources = load_resources(config)?;
    let subsets = event_subsets(config, &resources.store)?;
    reports::write_subsets(&config.output_dir, &subsets)?;
    reports::write_events_summary(&config.output_dir, &subsets)?;
    Ok(Vec::new())
}

/// Print corpus statistics to stdout without writing files.
pub fn cmd_stats(config: &RunConfig) -> Result<Vec<String>> {
    let resources = load_resources(config)?;
    let stats = resources.store.stats();
    println!("articles: {}", stats.total_articles);
    for (&language, &count) in &stats.per_language_articles {
        let outlets = stats
            .per_language_outlets
            .get(&language)
            .copied()
            .unwrap_or(0);
        println!("{language}: {count} articles from {outlets} outlets");
    }
    match stats.window {
        Some((start, end)) => println!(
            "window: {} to {}",
            start.format("%Y-%m-%d"),
            end.format("%Y-%m-%d")
        ),
        None => println!("window: empty"),
    }
    println!("rejected lines: {}", resources.ingest.rejections.len());
    Ok(Vec::new())
}

/// Run the full analysis for each event (or one selected event) and write
/// the seven per-event reports.
pub fn cmd_analyze(config: &RunConfig, only_event: Option<&str>) -> Result<Vec<String>> {
    let resources = load_resources(config)?;
    let mut subsets = event_subsets(config, &resources.store)?;
    if let Some(name) = only_event {
        subsets.retain(|s| s.event_name == name);
        if subsets.is_empty() {
            bail!("no configured event named `{name}`");
        }
    }
    let mut warnings = Vec::new();
    for subset in &subsets {
        analyze_event(config, &resources, subset, &mut warnings)?;
    }
    Ok(warnings)
}

fn analyze_event(
    config: &RunConfig,
    resources: &Resources,
    subset: &EventSubset,
    warnings: &mut Vec<String>,
) -> Result<()> {
    let event = &subset.event_name;
    let dir = config.output_dir.join(event);

    let mut lexical_series = Vec::new();
    let mut composite_series = Vec::new();
    let mut profile_rows = Vec::new();
    let mut lpsr_rows = Vec::new();
    let mut sentiment_rows = Vec::new();
    let mut series_rows: Vec<(WeeklySeries, Option<SeriesAnalysis>)> = Vec::new();
    let mut anchored_articles_total = 0usize;

    for &language in &config.languages {
        let Some(docs) = subset.per_language.get(&language) else {
            continue;
        };
        if docs.is_empty() {
            continue;
        }
        let articles: Vec<&Article> = docs
            .iter()
            .map(|d| {
                resources
                    .store
                    .article(&d.article_id)
                    .with_context(|| format!("subset article `{}` missing", d.article_id))
            })
            .collect::<Result<_>>()?;

        lexical_for_language(
            event,
            language,
            &articles,
            resources,
            &mut lexical_series,
            &mut composite_series,
            warnings,
        )?;

        anchored_articles_total += mentions_for_language(
            config,
            resources,
            language,
            &articles,
            &mut profile_rows,
            &mut lpsr_rows,
            &mut sentiment_rows,
        )?;

        series_for_language(config, event, language, &articles, &mut series_rows, warnings)?;
    }

    if anchored_articles_total == 0 {
        warnings.push(format!(
            "event `{event}` has no linked mentions; domestication.csv and lpsr.csv are empty"
        ));
    }

    reports::write_lexical(&dir, &lexical_series, &composite_series)?;
    reports::write_domestication(&dir, &profile_rows)?;
    reports::write_lpsr(&dir, &lpsr_rows)?;
    reports::write_sentiment(&dir, &sentiment_rows)?;
    reports::write_series(&dir, &series_rows)?;
    reports::write_changepoints(&dir, &series_rows)?;
    reports::write_consensus(&dir, &series_rows)?;
    Ok(())
}

/// Article-level metrics, per-language standardization, and the monthly
/// raw/z/relative-change series.
fn lexical_for_language(
    event: &str,
    language: Language,
    articles: &[&Article],
    resources: &Resources,
    lexical_series: &mut Vec<reports::LexicalSeries>,
    composite_series: &mut Vec<reports::CompositeSeries>,
    warnings: &mut Vec<String>,
) -> Result<()> {
    let function_words = resources.function_words(language);
    let abbreviations = resources.abbreviations(language);
    let mut records: Vec<LexicalRecord> = Vec::with_capacity(articles.len());
    let mut timestamps: Vec<DateTime<Utc>> = Vec::with_capacity(articles.len());
    for article in articles {
        match article_metrics(article, function_words, abbreviations) {
            Ok(record) => {
                records.push(record);
                timestamps.push(article.published_at);
            }
            Err(Error::NoTokens) => warnings.push(format!(
                "event `{event}` {language}: article `{}` has no tokens; excluded from lexical indices",
                article.id
            )),
            Err(e) => return Err(e.into()),
        }
    }
    if records.len() < 2 {
        warnings.push(format!(
            "event `{event}` {language}: fewer than 2 scorable articles; lexical indices omitted"
        ));
        return Ok(());
    }
    let baseline = standardize(&mut records)?;

    for metric in Metric::ALL {
        let raw_points: Vec<(DateTime<Utc>, f64)> = timestamps
            .iter()
            .zip(&records)
            .map(|(&at, r)| (at, r.raw(metric)))
            .collect();
        let z_points: Vec<(DateTime<Utc>, f64)> = timestamps
            .iter()
            .zip(&records)
            .map(|(&at, r)| (at, r.z(metric).expect("standardize fills z")))
            .collect();
        let mean_raw = monthly_mean(&raw_points)?;
        let mean_z = monthly_mean(&z_points)?;
        let rolling3_z = mean_z.rolling3();
        let baseline_mean = baseline.stats(metric).mean;
        let (rel_change, rolling3_rel) = if baseline_mean > 0.0 {
            let (raw, rolling) = relative_change_series(&raw_points, baseline_mean)?;
            (Some(raw), Some(rolling))
        } else {
            warnings.push(format!(
                "event `{event}` {language}: {metric} baseline mean is not positive; relative change omitted"
            ));
            (None, None)
        };
        lexical_series.push(reports::LexicalSeries {
            language,
            metric,
            mean_raw,
            mean_z,
            rolling3_z,
            rel_change,
            rolling3_rel,
        });
    }

    let composite_points: Vec<(DateTime<Utc>, f64)> = timestamps
        .iter()
        .zip(&records)
        .map(|(&at, r)| (at, r.composite_z.expect("standardize fills composite")))
        .collect();
    let mean_z = monthly_mean(&composite_points)?;
    let rolling3_z = mean_z.rolling3();
    composite_series.push(reports::CompositeSeries {
        language,
        mean_z,
        rolling3_z,
    });
    Ok(())
}

/// Anchoring, domestication profiles, LPSR, and targeted sentiment for one
/// language partition. Returns how many articles had anchored mentions.
fn mentions_for_language(
    config: &RunConfig,
    resources: &Resources,
    language: Language,
    articles: &[&Article],
    profile_rows: &mut Vec<newstrace::domestication::WeeklyProfile>,
    lpsr_rows: &mut Vec<newstrace::domestication::WeeklyLpsr>,
    sentiment_rows: &mut Vec<newstrace::sentiment::EntitySentimentSeries>,
) -> Result<usize> {
    let mut profiles: Vec<(DateTime<Utc>, ArticleProfile)> = Vec::new();
    let mut lpsr_records: Vec<(DateTime<Utc>, LpsrRecord)> = Vec::new();
    let mut all_mentions: Vec<MentionRecord> = Vec::new();
    let mut anchored_articles = 0usize;

    for article in articles {
        let mentions = resources.article_mentions(&article.id, config.link_threshold)?;
        if let Some(table) = &resources.anchors {
            let counts = AnchorCounts::from_classes(
                mentions.iter().map(|m| resolve_anchor(m, table, language)),
            );
            if counts.anchored_total() > 0 {
                anchored_articles += 1;
                let cue = detect_cues(article, resources.cues(language))?;
                if let Some(profile) = article_profile(&article.id, language, counts, cue) {
                    profiles.push((article.published_at, profile));
                }
                lpsr_records.push((
                    article.published_at,
                    article_lpsr(&article.id, language, counts),
                ));
            }
        }
        all_mentions.extend(mentions);
    }

    profile_rows.extend(weekly_profiles(&profiles, language));
    lpsr_rows.extend(weekly_lpsr(&lpsr_records, language, config.lpsr_aggregation));

    let link_ids: BTreeSet<&str> = all_mentions
        .iter()
        .filter(|m| m.sentiment.is_some())
        .filter_map(|m| m.link_id.as_deref())
        .collect();
    for link_id in link_ids {
        let series = entity_series(
            &all_mentions,
            &resources.store,
            link_id,
            language,
            config.sentiment_granularity,
        )?;
        sentiment_rows.push(series);
    }
    Ok(anchored_articles)
}

/// Weekly counts plus smoothing, detectors, and consensus for one language.
fn series_for_language(
    config: &RunConfig,
    event: &str,
    language: Language,
    articles: &[&Article],
    series_rows: &mut Vec<(WeeklySeries, Option<SeriesAnalysis>)>,
    warnings: &mut Vec<String>,
) -> Result<()> {
    let timestamps: Vec<DateTime<Utc>> = articles.iter().map(|a| a.published_at).collect();
    let series = weekly_counts(event, language, &timestamps)?;
    let analysis = if series.len() >= MIN_SERIES_LEN {
        Some(analyze_weekly(&series, &config.cpd)?)
    } else {
        warnings.push(format!(
            "event `{event}` {language}: series spans {} weeks, fewer than {MIN_SERIES_LEN}; detectors skipped",
            series.len()
        ));
        None
    };
    series_rows.push((series, analysis));
    Ok(())
}
