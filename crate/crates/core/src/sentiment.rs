//! Targeted sentiment: mention scores from 3-class probabilities and
//! per-entity weekly/monthly aggregation.

use std::collections::BTreeMap;
use std::fmt;

use crate::calendar::{MonthKey, Week};
use crate::corpus::CorpusStore;
use crate::entities::{MentionRecord, SentimentProbs};
use crate::error::{Error, Result};
use crate::language::Language;

/// Buckets with fewer mentions than this are flagged as low support.
pub const LOW_SUPPORT_THRESHOLD: usize = 5;

/// Tolerance on the probability sum, matching mention ingest.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-6;

/// Score = p_pos − p_neg, in [−1, 1]. Probabilities are validated.
pub fn mention_score(probs: &SentimentProbs) -> Result<f64> {
    for p in [probs.p_pos, probs.p_neu, probs.p_neg] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityRange(p));
        }
    }
    let sum = probs.sum();
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(Error::ProbabilitySum(sum));
    }
    Ok(probs.p_pos - probs.p_neg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Weekly,
    Monthly,
}

impl Granularity {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "weekly" => Some(Granularity::Weekly),
            "monthly" => Some(Granularity::Monthly),
            _ => None,
        }
    }
}

/// Time bucket key; displays as the ISO week or calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BucketKey {
    Week(Week),
    Month(MonthKey),
}

impl fmt::Display for BucketKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BucketKey::Week(w) => w.fmt(f),
            BucketKey::Month(m) => m.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentimentBucket {
    pub key: BucketKey,
    pub mean_score: f64,
    pub mention_count: usize,
    pub low_support: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntitySentimentSeries {
    pub link_id: String,
    pub language: Language,
    pub granularity: Granularity,
    pub buckets: Vec<SentimentBucket>,
}

/// Aggregate scored mentions of one linked entity in one language. Mentions
/// must already have passed the link gate; mentions without sentiment are
/// skipped. Buckets without mentions are omitted.
pub fn entity_series(
    mentions: &[MentionRecord],
    store: &CorpusStore,
    link_id: &str,
    language: Language,
    granularity: Granularity,
) -> Result<EntitySentimentSeries> {
    let mut buckets: BTreeMap<BucketKey, (f64, usize)> = BTreeMap::new();
    for mention in mentions {
        if mention.link_id.as_deref() != Some(link_id) {
            continue;
        }
        let Some(probs) = &mention.sentiment else {
            continue;
        };
        let article = store
            .article(&mention.article_id)
            .ok_or_else(|| Error::UnknownArticle(mention.article_id.clone()))?;
        if article.language != language {
            continue;
        }
        let key = match granularity {
            Granularity::Weekly => BucketKey::Week(Week::from_datetime(&article.published_at)),
            Granularity::Monthly => {
                BucketKey::Month(MonthKey::from_datetime(&article.published_at))
            }
        };
        let score = mention_score(probs)?;
        let slot = buckets.entry(key).or_insert((0.0, 0));
        slot.0 += score;
        slot.1 += 1;
    }
    if buckets.is_empty() {
        return Err(Error::NoMentions(link_id.to_string()));
    }
    Ok(EntitySentimentSeries {
        link_id: link_id.to_string(),
        language,
        granularity,
        buckets: buckets
            .into_iter()
            .map(|(key, (sum, n))| SentimentBucket {
                key,
                mean_score: sum / n as f64,
                mention_count: n,
                low_support: n < LOW_SUPPORT_THRESHOLD,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::EntityCategory;
    use approx::assert_abs_diff_eq;
    use std::io::Cursor;

    fn probs(p_pos: f64, p_neu: f64, p_neg: f64) -> SentimentProbs {
        SentimentProbs { p_pos, p_neu, p_neg }
    }

    #[test]
    fn score_formula() {
        assert_abs_diff_eq!(mention_score(&probs(0.7, 0.2, 0.1)).unwrap(), 0.6);
        assert_abs_diff_eq!(
            mention_score(&probs(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(mention_score(&probs(0.0, 0.0, 1.0)).unwrap(), -1.0);
    }

    #[test]
    fn score_is_antisymmetric() {
        let a = mention_score(&probs(0.7, 0.2, 0.1)).unwrap();
        let b = mention_score(&probs(0.1, 0.2, 0.7)).unwrap();
        assert_abs_diff_eq!(a, -b);
    }

    #[test]
    fn score_validates_probabilities() {
        assert!(matches!(
            mention_score(&probs(0.9, 0.3, 0.1)),
            Err(Error::ProbabilitySum(_))
        ));
        assert!(matches!(
            mention_score(&probs(1.2, -0.2, 0.0)),
            Err(Error::ProbabilityRange(_))
        ));
    }

    fn store() -> CorpusStore {
        let mut store = CorpusStore::new();
        let lines: Vec<String> = [
            ("a1", "2020-01-06T10:00:00Z"), // 2020-W02, January
            ("a2", "2020-01-08T10:00:00Z"), // 2020-W02
            ("a3", "2020-02-10T10:00:00Z"), // 2020-W07, February
        ]
        .iter()
        .map(|(id, at)| {
            serde_json::json!({
                "id": id,
                "outlet": "o",
                "language": "fr",
                "published_at": at,
                "title": "t",
                "body": "Un corps de texte.",
            })
            .to_string()
        })
        .collect();
        store.ingest(Cursor::new(lines.join("\n"))).unwrap();
        store
    }

    fn mention(article_id: &str, link: &str, sentiment: Option<SentimentProbs>) -> MentionRecord {
        MentionRecord {
            article_id: article_id.into(),
            surface: "X".into(),
            category: EntityCategory::Person,
            start: 0,
            end: 2,
            link_id: Some(link.into()),
            link_confidence: Some(0.9),
            sentiment,
        }
    }

    #[test]
    fn weekly_series_buckets_and_flags() {
        let store = store();
        let mentions = vec![
            mention("a1", "Q1", Some(probs(0.7, 0.2, 0.1))),
            mention("a2", "Q1", Some(probs(0.1, 0.2, 0.7))),
            mention("a3", "Q1", Some(probs(0.5, 0.5, 0.0))),
            mention("a3", "Q2", Some(probs(0.9, 0.1, 0.0))),
            mention("a3", "Q1", None),
        ];
        let series =
            entity_series(&mentions, &store, "Q1", Language::Fr, Granularity::Weekly).unwrap();
        assert_eq!(series.buckets.len(), 2);
        assert_abs_diff_eq!(series.buckets[0].mean_score, 0.0, epsilon = 1e-12);
        assert_eq!(series.buckets[0].mention_count, 2);
        assert!(series.buckets[0].low_support);
        assert_abs_diff_eq!(series.buckets[1].mean_score, 0.5);
        assert_eq!(series.buckets[0].key.to_string(), "2020-W02");
    }

    #[test]
    fn monthly_series_uses_calendar_months() {
        let store = store();
        let mentions = vec![
            mention("a1", "Q1", Some(probs(0.6, 0.4, 0.0))),
            mention("a2", "Q1", Some(probs(0.0, 0.4, 0.6))),
            mention("a3", "Q1", Some(probs(0.5, 0.5, 0.0))),
        ];
        let series =
            entity_series(&mentions, &store, "Q1", Language::Fr, Granularity::Monthly).unwrap();
        assert_eq!(series.buckets.len(), 2);
        assert_eq!(series.buckets[0].key.to_string(), "2020-01");
        assert_abs_diff_eq!(series.buckets[0].mean_score, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn no_mentions_is_an_error() {
        let store = store();
        let err = entity_series(&[], &store, "Q9", Language::Fr, Granularity::Weekly);
        assert!(matches!(err, Err(Error::NoMentions(id)) if id == "Q9"));
    }

    #[test]
    fn low_support_threshold_is_five() {
        let store = store();
        let mentions: Vec<MentionRecord> = (0..5)
            .map(|_| mention("a1", "Q1", Some(probs(0.5, 0.5, 0.0))))
            .collect();
        let series =
            entity_series(&mentions, &store, "Q1", Language::Fr, Granularity::Weekly).unwrap();
        assert_eq!(series.buckets[0].mention_count, 5);
        assert!(!series.buckets[0].low_support);
    }
}
