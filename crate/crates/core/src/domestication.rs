//! Article-level domestication profiles (with the clipped +0.1 Swiss cue
//! bonus), the log proximity salience ratio, and weekly per-language
//! aggregates.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};

use crate::calendar::Week;
use crate::entities::AnchorClass;
use crate::language::Language;

/// Swiss-share bonus applied when a cue pattern fires, clipped at 1.0.
pub const CUE_BONUS: f64 = 0.1;

/// Class counts over one article's anchor-resolved mentions. Unanchored
/// mentions are excluded before counting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnchorCounts {
    pub swiss: usize,
    pub neighbor: usize,
    pub other: usize,
}

impl AnchorCounts {
    pub fn from_classes<I: IntoIterator<Item = AnchorClass>>(classes: I) -> Self {
        let mut counts = AnchorCounts::default();
        for class in classes {
            match class {
                AnchorClass::Swiss => counts.swiss += 1,
                AnchorClass::Neighbor => counts.neighbor += 1,
                AnchorClass::ForeignOther => counts.other += 1,
                AnchorClass::Unanchored => {}
            }
        }
        counts
    }

    pub fn anchored_total(&self) -> usize {
        self.swiss + self.neighbor + self.other
    }
}

/// Share of anchored mentions per class for one article.
#[derive(Debug, Clone, PartialEq)]
pub struct ArticleProfile {
    pub article_id: String,
    pub language: Language,
    pub p_swiss: f64,
    pub p_neighbor: f64,
    pub p_other: f64,
    pub anchored_mention_count: usize,
    pub cue_applied: bool,
}

/// Build the profile, or `None` when the article has no anchored mentions
/// (profiles are omitted, never zero-filled). With a cue, p_swiss gains +0.1
/// (clipped at 1.0) and the remaining mass is split over neighbor/other in
/// their raw ratio, so the bonus never changes that ratio.
pub fn article_profile(
    article_id: &str,
    language: Language,
    counts: AnchorCounts,
    cue_flag: bool,
) -> Option<ArticleProfile> {
    let total = counts.anchored_total();
    if total == 0 {
        return None;
    }
    let total_f = total as f64;
    let mut p_swiss = counts.swiss as f64 / total_f;
    let mut p_neighbor = counts.neighbor as f64 / total_f;
    let mut p_other = counts.other as f64 / total_f;
    if cue_flag {
        p_swiss = (p_swiss + CUE_BONUS).min(1.0);
        let remainder = 1.0 - p_swiss;
        let foreign_raw = counts.neighbor + counts.other;
        if foreign_raw == 0 {
            p_swiss = 1.0;
            p_neighbor = 0.0;
            p_other = 0.0;
        } else {
            p_neighbor = remainder * counts.neighbor as f64 / foreign_raw as f64;
            p_other = remainder * counts.other as f64 / foreign_raw as f64;
        }
    }
    Some(ArticleProfile {
        article_id: article_id.to_string(),
        language,
        p_swiss,
        p_neighbor,
        p_other,
        anchored_mention_count: total,
        cue_applied: cue_flag,
    })
}

/// Log proximity salience ratio for one article.
#[derive(Debug, Clone, PartialEq)]
pub struct LpsrRecord {
    pub article_id: String,
    pub language: Language,
    pub m_prox: usize,
    pub m_other: usize,
    pub lpsr: f64,
}

/// LPSR = ln((m_prox + 1)/(m_other + 1)). Swiss mentions count in neither
/// term; the +1 smoothing keeps the ratio finite everywhere.
pub fn article_lpsr(article_id: &str, language: Language, counts: AnchorCounts) -> LpsrRecord {
    let lpsr = ((counts.neighbor + 1) as f64 / (counts.other + 1) as f64).ln();
    LpsrRecord {
        article_id: article_id.to_string(),
        language,
        m_prox: counts.neighbor,
        m_other: counts.other,
        lpsr,
    }
}

/// Weekly unweighted means of article profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct WeeklyProfile {
    pub language: Language,
    pub week: Week,
    pub p_swiss: f64,
    pub p_neighbor: f64,
    pub p_other: f64,
    pub article_count: usize,
}

/// Weekly mean LPSR.
#[derive(Debug, Clone, PartialEq)]
pub struct WeeklyLpsr {
    pub language: Language,
    pub week: Week,
    pub mean_lpsr: f64,
    pub article_count: usize,
}

/// How weekly LPSR is formed: mean of article-level ratios (default) or the
/// ratio of pooled weekly counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LpsrAggregation {
    #[default]
    ArticleMean,
    PooledCounts,
}

impl LpsrAggregation {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "article_mean" => Some(LpsrAggregation::ArticleMean),
            "pooled_counts" => Some(LpsrAggregation::PooledCounts),
            _ => None,
        }
    }
}

/// Weekly unweighted mean of profiles; weeks without articles are omitted.
pub fn weekly_profiles(
    profiles: &[(DateTime<Utc>, ArticleProfile)],
    language: Language,
) -> Vec<WeeklyProfile> {
    let mut buckets: BTreeMap<Week, (f64, f64, f64, usize)> = BTreeMap::new();
    for (at, profile) in profiles {
        if profile.language != language {
            continue;
        }
        let slot = buckets
            .entry(Week::from_datetime(at))
            .or_insert((0.0, 0.0, 0.0, 0));
        slot.0 += profile.p_swiss;
        slot.1 += profile.p_neighbor;
        slot.2 += profile.p_other;
        slot.3 += 1;
    }
    buckets
        .into_iter()
        .map(|(week, (s, nb, o, n))| WeeklyProfile {
            language,
            week,
            p_swiss: s / n as f64,
            p_neighbor: nb / n as f64,
            p_other: o / n as f64,
            article_count: n,
        })
        .collect()
}

/// Weekly LPSR under the chosen aggregation; weeks without articles are
/// omitted.
pub fn weekly_lpsr(
    records: &[(DateTime<Utc>, LpsrRecord)],
    language: Language,
    mode: LpsrAggregation,
) -> Vec<WeeklyLpsr> {
    let mut buckets: BTreeMap<Week, Vec<&LpsrRecord>> = BTreeMap::new();
    for (at, record) in records {
        if record.language != language {
            continue;
        }
        buckets.entry(Week::from_datetime(at)).or_default().push(record);
    }
    buckets
        .into_iter()
        .map(|(week, members)| {
            let mean_lpsr = match mode {
                LpsrAggregation::ArticleMean => {
                    members.iter().map(|r| r.lpsr).sum::<f64>() / members.len() as f64
                }
                LpsrAggregation::PooledCounts => {
                    let prox: usize = members.iter().map(|r| r.m_prox).sum();
                    let other: usize = members.iter().map(|r| r.m_other).sum();
                    ((prox + 1) as f64 / (other + 1) as f64).ln()
                }
            };
            WeeklyLpsr {
                language,
                week,
                mean_lpsr,
                article_count: members.len(),
            }
        })
        .collect()
}
