use std::io::BufRead;

use serde::Deserialize;

use crate::corpus::CorpusStore;
use crate::error::{Error, Result};

use super::{EntityCategory, MentionRecord, SentimentProbs};

pub const DEFAULT_LINK_THRESHOLD: f64 = 0.5;

/// Tolerance on p_pos + p_neu + p_neg.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-6;

pub mod mention_reason {
    pub const MALFORMED_JSON: &str = "malformed:json";
    pub const UNKNOWN_ARTICLE: &str = "unknown_article";
    pub const INVALID_SPAN: &str = "invalid_span";
    pub const INVALID_CONFIDENCE: &str = "invalid_confidence";
    pub const LINK_INCOMPLETE: &str = "link:incomplete";
    pub const SENTIMENT_INCOMPLETE: &str = "sentiment:incomplete";
    pub const SENTIMENT_RANGE: &str = "sentiment:range";
    pub const SENTIMENT_SUM: &str = "sentiment:sum";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionRejection {
    /// 1-based line number in the annotation file.
    pub line: usize,
    pub reason: &'static str,
}

#[derive(Debug, Deserialize)]
struct RawMention {
    article_id: String,
    surface: String,
    category: EntityCategory,
    start: usize,
    end: usize,
    #[serde(default)]
    link_id: Option<String>,
    #[serde(default)]
    confidence: Option<f64>,
    #[serde(default)]
    p_pos: Option<f64>,
    #[serde(default)]
    p_neu: Option<f64>,
    #[serde(default)]
    p_neg: Option<f64>,
}

/// Ingest line-delimited mention annotations, validating each record against
/// the store. Violations reject the record with a reason; they never abort
/// the ingest.
pub fn ingest_mentions<R: BufRead>(
    reader: R,
    store: &CorpusStore,
) -> Result<(Vec<MentionRecord>, Vec<MentionRejection>)> {
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match validate_line(&line, store) {
            Ok(mention) => accepted.push(mention),
            Err(reason) => rejected.push(MentionRejection {
                line: line_no,
                reason,
            }),
        }
    }
    Ok((accepted, rejected))
}

fn validate_line(
    line: &str,
    store: &CorpusStore,
) -> std::result::Result<MentionRecord, &'static str> {
    let raw: RawMention =
        serde_json::from_str(line).map_err(|_| mention_reason::MALFORMED_JSON)?;
    let article = store
        .article(&raw.article_id)
        .ok_or(mention_reason::UNKNOWN_ARTICLE)?;
    let body_chars = article.body.chars().count();
    if raw.start >= raw.end || raw.end > body_chars {
        return Err(mention_reason::INVALID_SPAN);
    }
    if raw.link_id.is_some() != raw.confidence.is_some() {
        return Err(mention_reason::LINK_INCOMPLETE);
    }
    if let Some(c) = raw.confidence {
        if !(0.0..=1.0).contains(&c) {
            return Err(mention_reason::INVALID_CONFIDENCE);
        }
    }
    let sentiment = match (raw.p_pos, raw.p_neu, raw.p_neg) {
        (None, None, None) => None,
        (Some(p_pos), Some(p_neu), Some(p_neg)) => {
            let probs = SentimentProbs { p_pos, p_neu, p_neg };
            if [p_pos, p_neu, p_neg].iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(mention_reason::SENTIMENT_RANGE);
            }
            if (probs.sum() - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                return Err(mention_reason::SENTIMENT_SUM);
            }
            Some(probs)
        }
        _ => return Err(mention_reason::SENTIMENT_INCOMPLETE),
    };
    Ok(MentionRecord {
        article_id: raw.article_id,
        surface: raw.surface,
        category: raw.category,
        start: raw.start,
        end: raw.end,
        link_id: raw.link_id,
        link_confidence: raw.confidence,
        sentiment,
    })
}

/// Clear links whose confidence falls below `threshold` (boundary inclusive:
/// a link with confidence exactly at the threshold is kept). Mentions are
/// never removed. Idempotent.
pub fn apply_link_gate(mentions: &mut [MentionRecord], threshold: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    for mention in mentions.iter_mut() {
        let keep = mention
            .link_confidence
            .map(|c| c >= threshold)
            .unwrap_or(false);
        if !keep {
            mention.link_id = None;
            mention.link_confidence = None;
        }
    }
    Ok(())
}
