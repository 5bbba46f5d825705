//! Entity mentions: gazetteer tagging, annotation ingest with validation,
//! the linking-confidence gate, country anchoring, and cue detection.

mod anchors;
mod cues;
mod gazetteer;
mod mentions;

use serde::{Deserialize, Serialize};

pub use anchors::{neighbor_countries, resolve_anchor, Anchor, AnchorClass, AnchorTable};
pub use cues::{default_cue_lexicon, detect_cues, CueLexicon};
pub use gazetteer::{gazetteer_tag, Gazetteer, GazetteerEntry};
pub use mentions::{
    apply_link_gate, ingest_mentions, mention_reason, MentionRejection, DEFAULT_LINK_THRESHOLD,
};

/// Mention categories used throughout the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityCategory {
    Person,
    Location,
    Organization,
    Event,
}

impl std::fmt::Display for EntityCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EntityCategory::Person => "person",
            EntityCategory::Location => "location",
            EntityCategory::Organization => "organization",
            EntityCategory::Event => "event",
        })
    }
}

impl std::str::FromStr for EntityCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "person" => Ok(EntityCategory::Person),
            "location" => Ok(EntityCategory::Location),
            "organization" => Ok(EntityCategory::Organization),
            "event" => Ok(EntityCategory::Event),
            other => Err(format!("unknown entity category `{other}`")),
        }
    }
}

/// Three-class probabilities attached to a mention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentProbs {
    pub p_pos: f64,
    pub p_neu: f64,
    pub p_neg: f64,
}

impl SentimentProbs {
    pub fn sum(&self) -> f64 {
        self.p_pos + self.p_neu + self.p_neg
    }
}

/// One entity mention. Spans are char offsets into the article body,
/// half-open `[start, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MentionRecord {
    pub article_id: String,
    pub surface: String,
    pub category: EntityCategory,
    pub start: usize,
    pub end: usize,
    pub link_id: Option<String>,
    pub link_confidence: Option<f64>,
    pub sentiment: Option<SentimentProbs>,
}

impl MentionRecord {
    pub fn is_linked(&self) -> bool {
        self.link_id.is_some()
    }
}
