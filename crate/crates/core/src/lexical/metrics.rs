use std::fmt;

use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::language::Language;

use super::text::{split_sentences, tokenize};
use super::wordlists::{Abbreviations, WordList};

/// Standard deviations below this are treated as degenerate: the metric
/// carries no information, so every z-score is set to 0.
pub const SIGMA_EPSILON: f64 = 1e-12;

/// The three per-article lexical metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Ttr,
    Density,
    Msl,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Ttr, Metric::Density, Metric::Msl];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Ttr => "ttr",
            Metric::Density => "density",
            Metric::Msl => "msl",
        })
    }
}

/// Raw and (after `standardize`) standardized lexical values for one article.
#[derive(Debug, Clone, PartialEq)]
pub struct LexicalRecord {
    pub article_id: String,
    pub language: Language,
    pub ttr: f64,
    pub density: f64,
    pub msl: f64,
    pub token_count: usize,
    pub z_ttr: Option<f64>,
    pub z_density: Option<f64>,
    pub z_msl: Option<f64>,
    pub composite_z: Option<f64>,
}

impl LexicalRecord {
    pub fn raw(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Ttr => self.ttr,
            Metric::Density => self.density,
            Metric::Msl => self.msl,
        }
    }

    pub fn z(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Ttr => self.z_ttr,
            Metric::Density => self.z_density,
            Metric::Msl => self.z_msl,
        }
    }

    fn set_z(&mut self, metric: Metric, value: f64) {
        match metric {
            Metric::Ttr => self.z_ttr = Some(value),
            Metric::Density => self.z_density = Some(value),
            Metric::Msl => self.z_msl = Some(value),
        }
    }
}

/// Mean and population standard deviation of one metric over one language.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricStats {
    pub mean: f64,
    pub stddev: f64,
}

/// Per-language baselines produced by `standardize`; never pooled across
/// languages.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageBaseline {
    pub language: Language,
    pub ttr: MetricStats,
    pub density: MetricStats,
    pub msl: MetricStats,
}

impl LanguageBaseline {
    pub fn stats(&self, metric: Metric) -> MetricStats {
        match metric {
            Metric::Ttr => self.ttr,
            Metric::Density => self.density,
            Metric::Msl => self.msl,
        }
    }
}

/// Compute raw TTR, lexical density, and mean sentence length for one
/// article body. Sentences without any word token are ignored by MSL.
pub fn article_metrics(
    article: &Article,
    function_words: &WordList,
    abbreviations: &Abbreviations,
) -> Result<LexicalRecord> {
    let tokens = tokenize(&article.body);
    if tokens.is_empty() {
        return Err(Error::NoTokens);
    }
    let total = tokens.len() as f64;

    let mut distinct: std::collections::HashSet<&str> = std::collections::HashSet::new();
    let mut content = 0usize;
    for t in &tokens {
        distinct.insert(t.as_str());
        if !function_words.contains(t) {
            content += 1;
        }
    }

    let mut sentence_tokens = 0usize;
    let mut sentences_with_tokens = 0usize;
    for sentence in split_sentences(&article.body, abbreviations) {
        let n = tokenize(&sentence).len();
        if n > 0 {
            sentence_tokens += n;
            sentences_with_tokens += 1;
        }
    }
    debug_assert_eq!(sentence_tokens, tokens.len());

    Ok(LexicalRecord {
        article_id: article.id.clone(),
        language: article.language,
        ttr: distinct.len() as f64 / total,
        density: content as f64 / total,
        msl: sentence_tokens as f64 / sentences_with_tokens as f64,
        token_count: tokens.len(),
        z_ttr: None,
        z_density: None,
        z_msl: None,
        composite_z: None,
    })
}

/// Fill z-scores and the composite for one language partition and return the
/// baseline. Uses the population standard deviation; a metric whose σ falls
/// below `SIGMA_EPSILON` yields z = 0 for every record.
pub fn standardize(records: &mut [LexicalRecord]) -> Result<LanguageBaseline> {
    if records.len() < 2 {
        return Err(Error::TooFewRecords {
            needed: 2,
            got: records.len(),
        });
    }
    let language = records[0].language;
    if records.iter().any(|r| r.language != language) {
        return Err(Error::MixedLanguages);
    }

    let mut stats = [MetricStats { mean: 0.0, stddev: 0.0 }; 3];
    for (slot, metric) in stats.iter_mut().zip(Metric::ALL) {
        let n = records.len() as f64;
        let mean = records.iter().map(|r| r.raw(metric)).sum::<f64>() / n;
        let var = records
            .iter()
            .map(|r| {
                let d = r.raw(metric) - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        *slot = MetricStats {
            mean,
            stddev: var.sqrt(),
        };
    }

    for record in records.iter_mut() {
        for (slot, metric) in stats.iter().zip(Metric::ALL) {
            let z = if slot.stddev < SIGMA_EPSILON {
                0.0
            } else {
                (record.raw(metric) - slot.mean) / slot.stddev
            };
            record.set_z(metric, z);
        }
        let sum = record.z_ttr.unwrap() + record.z_density.unwrap() + record.z_msl.unwrap();
        record.composite_z = Some(sum / 3.0);
    }

    Ok(LanguageBaseline {
        language,
        ttr: stats[0],
        density: stats[1],
        msl: stats[2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use chrono::{TimeZone, Utc};

    fn article(body: &str) -> Article {
        Article {
            id: "a1".into(),
            outlet: "o".into(),
            language: Language::Fr,
            published_at: Utc.with_ymd_and_hms(2020, 1, 6, 12, 0, 0).unwrap(),
            title: "t".into(),
            body: body.into(),
            token_count: 0,
            detected_language: None,
        }
    }

    fn record(id: &str, ttr: f64, density: f64, msl: f64) -> LexicalRecord {
        LexicalRecord {
            article_id: id.into(),
            language: Language::Fr,
            ttr,
            density,
            msl,
            token_count: 100,
            z_ttr: None,
            z_density: None,
            z_msl: None,
            composite_z: None,
        }
    }

    #[test]
    fn ttr_and_density_direct_counts() {
        // Tokens: the cat the dog. Function words: {the}.
        let fw = WordList::parse("the");
        let abb = Abbreviations::default();
        let rec = article_metrics(&article("The cat the dog"), &fw, &abb).unwrap();
        assert_abs_diff_eq!(rec.ttr, 0.75);
        assert_abs_diff_eq!(rec.density, 0.5);
    }

    #[test]
    fn msl_means_tokens_per_sentence() {
        let fw = WordList::default();
        let abb = Abbreviations::default();
        let rec = article_metrics(&article("Un deux trois. Un deux trois quatre cinq."), &fw, &abb)
            .unwrap();
        assert_abs_diff_eq!(rec.msl, 4.0);
    }

    #[test]
    fn empty_body_errors() {
        let fw = WordList::default();
        let abb = Abbreviations::default();
        assert!(matches!(
            article_metrics(&article("…"), &fw, &abb),
            Err(Error::NoTokens)
        ));
    }

    #[test]
    fn standardize_zero_sigma_gives_zero_z() {
        let mut recs = vec![record("a", 0.5, 0.5, 10.0), record("b", 0.5, 0.5, 10.0)];
        let baseline = standardize(&mut recs).unwrap();
        for r in &recs {
            assert_eq!(r.z_ttr, Some(0.0));
            assert_eq!(r.z_density, Some(0.0));
            assert_eq!(r.z_msl, Some(0.0));
            assert_eq!(r.composite_z, Some(0.0));
        }
        assert_abs_diff_eq!(baseline.ttr.mean, 0.5);
        assert_abs_diff_eq!(baseline.ttr.stddev, 0.0);
    }

    #[test]
    fn composite_is_equal_weight_mean() {
        let mut r = record("a", 0.0, 0.0, 0.0);
        r.z_ttr = Some(0.3);
        r.z_density = Some(-0.3);
        r.z_msl = Some(0.6);
        let composite = (r.z_ttr.unwrap() + r.z_density.unwrap() + r.z_msl.unwrap()) / 3.0;
        assert_abs_diff_eq!(composite, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn standardize_needs_two_records() {
        let mut recs = vec![record("a", 0.5, 0.5, 10.0)];
        assert!(matches!(
            standardize(&mut recs),
            Err(Error::TooFewRecords { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn standardize_population_moments() {
        let mut recs = vec![
            record("a", 0.2, 0.1, 5.0),
            record("b", 0.4, 0.3, 7.0),
            record("c", 0.9, 0.8, 21.0),
        ];
        let baseline = standardize(&mut recs).unwrap();
        assert_abs_diff_eq!(baseline.ttr.mean, 0.5, epsilon = 1e-12);
        // Population σ over {0.2, 0.4, 0.9}.
        let var: f64 = [0.2f64, 0.4, 0.9]
            .iter()
            .map(|x| (x - 0.5) * (x - 0.5))
            .sum::<f64>()
            / 3.0;
        assert_abs_diff_eq!(baseline.ttr.stddev, var.sqrt(), epsilon = 1e-12);
        let mean_z: f64 = recs.iter().map(|r| r.z_ttr.unwrap()).sum::<f64>() / 3.0;
        let var_z: f64 = recs
            .iter()
            .map(|r| r.z_ttr.unwrap().powi(2))
            .sum::<f64>()
            / 3.0;
        assert_abs_diff_eq!(mean_z, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(var_z, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn standardize_rejects_mixed_languages() {
        let mut recs = vec![record("a", 0.2, 0.1, 5.0), record("b", 0.4, 0.3, 7.0)];
        recs[1].language = Language::De;
        assert!(matches!(standardize(&mut recs), Err(Error::MixedLanguages)));
    }
}
