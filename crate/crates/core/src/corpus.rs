//! Corpus ingest, cleaning, and storage. Per-record problems reject the
//! record with a reason code and never abort the whole ingest.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::calendar::MonthKey;
use crate::error::{Error, Result};
use crate::language::Language;
use crate::lexical::tokenize;

/// Sources with at least this share of faulty articles are flagged for
/// exclusion (boundary inclusive).
pub const FAULTY_RATIO_EXCLUSION: f64 = 0.05;

/// Articles with fewer body tokens than this count as faulty.
pub const MIN_BODY_TOKENS: usize = 25;

/// One cleaned news item. `token_count` always reflects the current body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Article {
    pub id: String,
    pub outlet: String,
    pub language: Language,
    pub published_at: DateTime<Utc>,
    pub title: String,
    pub body: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detected_language: Option<Language>,
    #[serde(skip)]
    pub token_count: usize,
}

impl Article {
    /// Faulty per the source-quality rule: empty body, very short body, or a
    /// detected language that conflicts with the declared one.
    pub fn is_faulty(&self) -> bool {
        self.body.trim().is_empty()
            || self.token_count < MIN_BODY_TOKENS
            || self
                .detected_language
                .map(|d| d != self.language)
                .unwrap_or(false)
    }
}

/// Raw record shape; fields are validated one at a time so each failure gets
/// a specific reason code.
#[derive(Debug, Deserialize)]
struct RawArticle {
    id: String,
    outlet: String,
    language: String,
    published_at: String,
    title: String,
    body: String,
    #[serde(default)]
    detected_language: Option<String>,
}

pub mod reason {
    pub const MALFORMED_JSON: &str = "malformed:json";
    pub const MALFORMED_TIMESTAMP: &str = "malformed:timestamp";
    pub const MALFORMED_LANGUAGE: &str = "malformed:language";
    pub const MALFORMED_ID: &str = "malformed:id";
    pub const FAULTY_EMPTY_BODY: &str = "faulty:empty_body";
    pub const DUPLICATE_ID: &str = "duplicate:id";
}

/// One rejected input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based line number in the ingested file.
    pub line: usize,
    pub reason: &'static str,
}

/// Outcome of one ingest call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejections: Vec<Rejection>,
}

/// Per-outlet quality measures over a date window.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceQuality {
    pub outlet: String,
    pub total_articles: usize,
    pub faulty_articles: usize,
    pub faulty_ratio: f64,
    pub months_active: usize,
    pub months_in_window: usize,
    pub temporal_consistency: f64,
}

impl SourceQuality {
    pub fn excluded(&self) -> bool {
        self.faulty_ratio >= FAULTY_RATIO_EXCLUSION
    }
}

/// Corpus-wide counts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusStats {
    pub total_articles: usize,
    pub per_language_articles: BTreeMap<Language, usize>,
    pub per_language_outlets: BTreeMap<Language, usize>,
    pub window: Option<(DateTime<Utc>, DateTime<Utc>)>,
}

/// In-memory article store. Single-writer during ingest; immutable and
/// freely shareable afterwards.
#[derive(Debug, Default)]
pub struct CorpusStore {
    articles: Vec<Article>,
    by_id: HashMap<String, usize>,
}

impl CorpusStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn article(&self, id: &str) -> Option<&Article> {
        self.by_id.get(id).map(|&i| &self.articles[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn by_language(&self, language: Language) -> impl Iterator<Item = &Article> {
        self.articles.iter().filter(move |a| a.language == language)
    }

    pub fn outlets(&self) -> BTreeSet<&str> {
        self.articles.iter().map(|a| a.outlet.as_str()).collect()
    }

    /// Ingest line-delimited records. Accepted articles get `token_count`
    /// computed; every rejected line is reported with a reason code.
    pub fn ingest<R: BufRead>(&mut self, reader: R) -> Result<IngestReport> {
        let mut report = IngestReport::default();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            match self.ingest_line(&line) {
                Ok(()) => report.accepted += 1,
                Err(reason) => report.rejections.push(Rejection {
                    line: line_no,
                    reason,
                }),
            }
        }
        Ok(report)
    }

    fn ingest_line(&mut self, line: &str) -> std::result::Result<(), &'static str> {
        let raw: RawArticle =
            serde_json::from_str(line).map_err(|_| reason::MALFORMED_JSON)?;
        if raw.id.trim().is_empty() {
            return Err(reason::MALFORMED_ID);
        }
        let language: Language = raw.language.parse().map_err(|_| reason::MALFORMED_LANGUAGE)?;
        let detected_language = match &raw.detected_language {
            None => None,
            Some(code) => Some(
                code.parse::<Language>()
                    .map_err(|_| reason::MALFORMED_LANGUAGE)?,
            ),
        };
        let published_at = DateTime::parse_from_rfc3339(&raw.published_at)
            .map_err(|_| reason::MALFORMED_TIMESTAMP)?
            .with_timezone(&Utc);
        let token_count = tokenize(&raw.body).len();
        if token_count == 0 {
            return Err(reason::FAULTY_EMPTY_BODY);
        }
        if self.by_id.contains_key(&raw.id) {
            return Err(reason::DUPLICATE_ID);
        }
        let article = Article {
            id: raw.id,
            outlet: raw.outlet,
            language,
            published_at,
            title: raw.title,
            body: raw.body,
            detected_language,
            token_count,
        };
        self.by_id.insert(article.id.clone(), self.articles.len());
        self.articles.push(article);
        Ok(())
    }

    /// Remove per-outlet boilerplate lines from every body and recompute
    /// token counts. Returns the removed lines per outlet.
    pub fn strip_all_boilerplate(&mut self) -> BTreeMap<String, Vec<String>> {
        let outlets: BTreeSet<String> =
            self.articles.iter().map(|a| a.outlet.clone()).collect();
        let mut removed = BTreeMap::new();
        for outlet in outlets {
            let mut members: Vec<&mut Article> = self
                .articles
                .iter_mut()
                .filter(|a| a.outlet == outlet)
                .collect();
            let lines = strip_boilerplate(&mut members);
            if !lines.is_empty() {
                removed.insert(outlet, lines);
            }
        }
        removed
    }

    /// Quality measures for one outlet. With `window` unset, the outlet's
    /// own first/last article months bound the window.
    pub fn source_quality(
        &self,
        outlet: &str,
        window: Option<(DateTime<Utc>, DateTime<Utc>)>,
    ) -> Result<SourceQuality> {
        let members: Vec<&Article> = self
            .articles
            .iter()
            .filter(|a| a.outlet == outlet)
            .collect();
        if members.is_empty() {
            return Err(Error::Table {
                file: "corpus",
                line: 0,
                msg: format!("unknown outlet `{outlet}`"),
            });
        }
        let (win_start, win_end) = window.unwrap_or_else(|| {
            let min = members.iter().map(|a| a.published_at).min().unwrap();
            let max = members.iter().map(|a| a.published_at).max().unwrap();
            (min, max)
        });
        let first_month = MonthKey::from_datetime(&win_start);
        let last_month = MonthKey::from_datetime(&win_end);
        let mut months_in_window = 0usize;
        let mut m = first_month;
        while m <= last_month {
            months_in_window += 1;
            m = m.succ();
        }
        let active: BTreeSet<MonthKey> = members
            .iter()
            .map(|a| MonthKey::from_datetime(&a.published_at))
            .filter(|m| (first_month..=last_month).contains(m))
            .collect();
        let faulty = members.iter().filter(|a| a.is_faulty()).count();
        let total = members.len();
        Ok(SourceQuality {
            outlet: outlet.to_string(),
            total_articles: total,
            faulty_articles: faulty,
            faulty_ratio: faulty as f64 / total.max(1) as f64,
            months_active: active.len(),
            months_in_window,
            temporal_consistency: active.len() as f64 / months_in_window as f64,
        })
    }

    pub fn stats(&self) -> CorpusStats {
        let mut per_language_articles = BTreeMap::new();
        let mut outlets: BTreeMap<Language, BTreeSet<&str>> = BTreeMap::new();
        for a in &self.articles {
            *per_language_articles.entry(a.language).or_insert(0) += 1;
            outlets.entry(a.language).or_default().insert(&a.outlet);
        }
        let window = if self.articles.is_empty() {
            None
        } else {
            Some((
                self.articles.iter().map(|a| a.published_at).min().unwrap(),
                self.articles.iter().map(|a| a.published_at).max().unwrap(),
            ))
        };
        CorpusStats {
            total_articles: self.articles.len(),
            per_language_articles,
            per_language_outlets: outlets.into_iter().map(|(k, v)| (k, v.len())).collect(),
            window,
        }
    }
}

/// Remove boilerplate from one outlet's articles: any trimmed non-empty line
/// present in at least 10% of the articles and in at least 3 of them is
/// dropped from every body. Returns removed lines, sorted.
pub fn strip_boilerplate(articles: &mut [&mut Article]) -> Vec<String> {
    let total = articles.len();
    if total == 0 {
        return Vec::new();
    }
    let mut line_articles: HashMap<&str, usize> = HashMap::new();
    let mut seen_in_article: BTreeSet<&str> = BTreeSet::new();
    let bodies: Vec<String> = articles.iter().map(|a| a.body.clone()).collect();
    for body in &bodies {
        seen_in_article.clear();
        for line in body.lines() {
            let trimmed = line.trim();
            if !trimmed.is_empty() {
                seen_in_article.insert(trimmed);
            }
        }
        for line in &seen_in_article {
            *line_articles.entry(line).or_insert(0) += 1;
        }
    }
    // count/total ≥ 0.1 done in integers to keep the boundary exact.
    let mut removable: Vec<String> = line_articles
        .iter()
        .filter(|(_, &count)| count >= 3 && count * 10 >= total)
        .map(|(line, _)| line.to_string())
        .collect();
    removable.sort();
    if removable.is_empty() {
        return removable;
    }
    let removal: BTreeSet<&str> = removable.iter().map(String::as_str).collect();
    for article in articles.iter_mut() {
        let kept: Vec<&str> = article
            .body
            .lines()
            .filter(|l| !removal.contains(l.trim()))
            .collect();
        let new_body = kept.join("\n");
        if new_body != article.body {
            article.body = new_body;
            article.token_count = tokenize(&article.body).len();
        }
    }
    removable
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;
    use std::io::Cursor;

    fn record(id: &str, body: &str) -> String {
        format!(
            r#"{{"id":"{id}","outlet":"out-a","language":"fr","published_at":"2020-01-06T12:00:00Z","title":"Titre","body":"{body}"}}"#
        )
    }

    fn make_article(id: &str, outlet: &str, month: u32, body: &str) -> Article {
        let body = body.to_string();
        Article {
            id: id.into(),
            outlet: outlet.into(),
            language: Language::Fr,
            published_at: Utc.with_ymd_and_hms(2020, month, 6, 12, 0, 0).unwrap(),
            title: "t".into(),
            token_count: tokenize(&body).len(),
            body,
            detected_language: None,
        }
    }

    #[test]
    fn ingest_accepts_valid_lines() {
        let input = [record("a", "Un texte."), record("b", "Deux textes."), record("c", "Trois textes.")]
            .join("\n");
        let mut store = CorpusStore::new();
        let report = store.ingest(Cursor::new(input)).unwrap();
        assert_eq!(report.accepted, 3);
        assert!(report.rejections.is_empty());
        assert_eq!(store.len(), 3);
        assert_eq!(store.article("a").unwrap().token_count, 2);
    }

    #[test]
    fn ingest_rejects_empty_body() {
        let input = [record("a", "Texte."), record("b", " ")].join("\n");
        let mut store = CorpusStore::new();
        let report = store.ingest(Cursor::new(input)).unwrap();
        assert_eq!(report.accepted, 1);
        assert_eq!(
            report.rejections,
            vec![Rejection {
                line: 2,
                reason: reason::FAULTY_EMPTY_BODY
            }]
        );
    }

    #[test]
    fn ingest_rejects_duplicates_and_is_idempotent() {
        let input = [record("a", "Texte un."), record("a", "Texte deux.")].join("\n");
        let mut store = CorpusStore::new();
        let report = store.ingest(Cursor::new(&input)).unwrap();
        assert_eq!(report.accepted, 1);
        assert_eq!(report.rejections[0].reason, reason::DUPLICATE_ID);
        let body_before = store.article("a").unwrap().body.clone();

        let again = store.ingest(Cursor::new(&input)).unwrap();
        assert_eq!(again.accepted, 0);
        assert_eq!(again.rejections.len(), 2);
        assert_eq!(store.len(), 1);
        assert_eq!(store.article("a").unwrap().body, body_before);
    }

    #[test]
    fn ingest_reason_codes_are_specific() {
        let lines = [
            "not json".to_string(),
            record("x", "Texte.").replace("2020-01-06T12:00:00Z", "yesterday"),
            record("y", "Texte.").replace(r#""language":"fr""#, r#""language":"rm""#),
            record("", "Texte."),
        ]
        .join("\n");
        let mut store = CorpusStore::new();
        let report = store.ingest(Cursor::new(lines)).unwrap();
        assert_eq!(report.accepted, 0);
        let reasons: Vec<&str> = report.rejections.iter().map(|r| r.reason).collect();
        assert_eq!(
            reasons,
            vec![
                reason::MALFORMED_JSON,
                reason::MALFORMED_TIMESTAMP,
                reason::MALFORMED_LANGUAGE,
                reason::MALFORMED_ID
            ]
        );
    }

    #[test]
    fn ingest_normalizes_timestamps_to_utc() {
        let line = record("a", "Texte.").replace("2020-01-06T12:00:00Z", "2020-01-06T13:00:00+01:00");
        let mut store = CorpusStore::new();
        store.ingest(Cursor::new(line)).unwrap();
        assert_eq!(
            store.article("a").unwrap().published_at,
            Utc.with_ymd_and_hms(2020, 1, 6, 12, 0, 0).unwrap()
        );
    }

    #[test]
    fn boilerplate_footer_removed_from_all() {
        let mut articles: Vec<Article> = (0..10)
            .map(|i| {
                make_article(
                    &format!("a{i}"),
                    "out-a",
                    1,
                    &format!("Corps numéro {i} assez long.\nAbonnez-vous ici."),
                )
            })
            .collect();
        let mut refs: Vec<&mut Article> = articles.iter_mut().collect();
        let removed = strip_boilerplate(&mut refs);
        assert_eq!(removed, vec!["Abonnez-vous ici.".to_string()]);
        for a in &articles {
            assert!(!a.body.contains("Abonnez-vous"));
            assert_eq!(a.token_count, tokenize(&a.body).len());
        }
    }

    #[test]
    fn boilerplate_unique_line_kept() {
        let mut articles: Vec<Article> = (0..10)
            .map(|i| make_article(&format!("a{i}"), "out-a", 1, &format!("Corps {i}.")))
            .collect();
        articles[0].body.push_str("\nLigne unique.");
        let mut refs: Vec<&mut Article> = articles.iter_mut().collect();
        let removed = strip_boilerplate(&mut refs);
        assert!(removed.is_empty());
        assert!(articles[0].body.contains("Ligne unique."));
    }

    #[test]
    fn boilerplate_thresholds_are_exact() {
        // 40 articles; planted lines at 100%, 50%, and 5% frequency.
        let mut articles: Vec<Article> = (0..40)
            .map(|i| {
                let mut body = format!("Corps numéro {i} avec assez de texte.\nToujours présent.");
                if i < 20 {
                    body.push_str("\nSouvent présent.");
                }
                if i < 2 {
                    body.push_str("\nRarement présent.");
                }
                make_article(&format!("a{i}"), "out-a", 1, &body)
            })
            .collect();
        let mut refs: Vec<&mut Article> = articles.iter_mut().collect();
        let removed = strip_boilerplate(&mut refs);
        assert_eq!(
            removed,
            vec!["Souvent présent.".to_string(), "Toujours présent.".to_string()]
        );
        assert!(articles[0].body.contains("Rarement présent."));
    }

    #[test]
    fn source_quality_counts_faults_and_months() {
        let long = "mot ".repeat(30);
        let mut articles: Vec<Article> = (0..80)
            .map(|i| make_article(&format!("a{i}"), "out-a", 1 + (i % 4), &long))
            .collect();
        for a in articles.iter_mut().take(7) {
            a.body = "court".into();
            a.token_count = 1;
        }
        let mut store = CorpusStore::new();
        for a in articles {
            store.by_id.insert(a.id.clone(), store.articles.len());
            store.articles.push(a);
        }
        let q = store.source_quality("out-a", None).unwrap();
        assert_eq!(q.total_articles, 80);
        assert_eq!(q.faulty_articles, 7);
        assert!((q.faulty_ratio - 0.0875).abs() < 1e-12);
        assert!(q.excluded());
        assert_eq!(q.months_active, 4);
        assert_eq!(q.months_in_window, 4);
        assert!((q.temporal_consistency - 1.0).abs() < 1e-12);
    }

    #[test]
    fn source_quality_boundary_is_inclusive() {
        let long = "mot ".repeat(30);
        let mut store = CorpusStore::new();
        for i in 0..100 {
            let mut a = make_article(&format!("a{i}"), "out-a", 1, &long);
            if i < 5 {
                a.body = "court".into();
                a.token_count = 1;
            }
            store.by_id.insert(a.id.clone(), store.articles.len());
            store.articles.push(a);
        }
        let q = store.source_quality("out-a", None).unwrap();
        assert!((q.faulty_ratio - 0.05).abs() < 1e-12);
        assert!(q.excluded());
    }

    #[test]
    fn detected_language_conflict_is_faulty() {
        let long = "mot ".repeat(30);
        let mut a = make_article("a", "out-a", 1, &long);
        assert!(!a.is_faulty());
        a.detected_language = Some(Language::De);
        assert!(a.is_faulty());
        a.detected_language = Some(Language::Fr);
        assert!(!a.is_faulty());
    }

    #[test]
    fn stats_totals_match_partitions() {
        let mut store = CorpusStore::new();
        let input = [
            record("a", "Un texte."),
            record("b", "Deux textes."),
            record("c", "Tre testi.").replace(r#""language":"fr""#, r#""language":"it""#),
        ]
        .join("\n");
        store.ingest(Cursor::new(input)).unwrap();
        let stats = store.stats();
        assert_eq!(stats.total_articles, 3);
        assert_eq!(stats.per_language_articles[&Language::Fr], 2);
        assert_eq!(stats.per_language_articles[&Language::It], 1);
        assert_eq!(
            stats.per_language_articles.values().sum::<usize>(),
            stats.total_articles
        );
        assert_eq!(stats.per_language_outlets[&Language::Fr], 1);
    }

    #[test]
    fn empty_store_stats_are_zero() {
        let stats = CorpusStore::new().stats();
        assert_eq!(stats.total_articles, 0);
        assert!(stats.window.is_none());
        assert!(stats.per_language_articles.is_empty());
    }
}
