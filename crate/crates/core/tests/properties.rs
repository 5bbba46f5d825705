//! Property-based checks of algebraic laws the library promises.

use proptest::prelude::*;

use newstrace::changepoint::{
    bocpd, consensus, moving_average, pelt_rbf, weekly_counts, BocpdParams, Detector,
    DetectorCandidates,
};
use newstrace::domestication::{article_lpsr, article_profile, AnchorCounts};
use newstrace::entities::{apply_link_gate, EntityCategory, MentionRecord, SentimentProbs};
use newstrace::lexical::{standardize, LexicalRecord};
use newstrace::sentiment::mention_score;
use newstrace::Language;

fn lexical_record(i: usize, ttr: f64, density: f64, msl: f64) -> LexicalRecord {
    LexicalRecord {
        article_id: format!("a{i}"),
        language: Language::Fr,
        ttr,
        density,
        msl,
        token_count: 50,
        z_ttr: None,
        z_density: None,
        z_msl: None,
        composite_z: None,
    }
}

fn mention(i: usize, confidence: Option<f64>) -> MentionRecord {
    MentionRecord {
        article_id: format!("a{i}"),
        surface: "X".to_string(),
        category: EntityCategory::Person,
        start: 0,
        end: 1,
        link_id: confidence.map(|_| format!("Q{i}")),
        link_confidence: confidence,
        sentiment: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn z_scores_are_affine_invariant(
        values in prop::collection::vec((0.01f64..1.0, 0.01f64..1.0, 1.0f64..40.0), 3..20),
        scale in 0.1f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let mut plain: Vec<LexicalRecord> = values
            .iter()
            .enumerate()
            .map(|(i, &(t, d, m))| lexical_record(i, t, d, m))
            .collect();
        let mut transformed: Vec<LexicalRecord> = values
            .iter()
            .enumerate()
            .map(|(i, &(t, d, m))| {
                lexical_record(i, t * scale + shift, d * scale + shift, m * scale + shift)
            })
            .collect();
        standardize(&mut plain).unwrap();
        standardize(&mut transformed).unwrap();
        for (a, b) in plain.iter().zip(&transformed) {
            // Degenerate metrics collapse to z = 0 in both copies.
            for (za, zb) in [
                (a.z_ttr, b.z_ttr),
                (a.z_density, b.z_density),
                (a.z_msl, b.z_msl),
                (a.composite_z, b.composite_z),
            ] {
                prop_assert!((za.unwrap() - zb.unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn link_gate_is_idempotent_and_inclusive(
        confidences in prop::collection::vec(prop::option::of(0.0f64..=1.0), 1..30),
        threshold in 0.0f64..=1.0,
    ) {
        let mut once: Vec<MentionRecord> = confidences
            .iter()
            .enumerate()
            .map(|(i, &c)| mention(i, c))
            .collect();
        apply_link_gate(&mut once, threshold).unwrap();
        let mut twice = once.clone();
        apply_link_gate(&mut twice, threshold).unwrap();
        prop_assert_eq!(&once, &twice);
        for (m, &c) in once.iter().zip(&confidences) {
            match c {
                Some(c) if c >= threshold => {
                    prop_assert!(m.is_linked());
                    prop_assert_eq!(m.link_confidence, Some(c));
                }
                _ => {
                    prop_assert!(!m.is_linked());
                    prop_assert_eq!(m.link_confidence, None);
                }
            }
        }
    }

    #[test]
    fn profile_shares_obey_the_distribution_law(
        swiss in 0usize..12,
        neighbor in 0usize..12,
        other in 0usize..12,
    ) {
        let counts = AnchorCounts { swiss, neighbor, other };
        if counts.anchored_total() == 0 {
            prop_assert!(article_profile("a", Language::Fr, counts, false).is_none());
            return Ok(());
        }
        let plain = article_profile("a", Language::Fr, counts, false).unwrap();
        let cued = article_profile("a", Language::Fr, counts, true).unwrap();
        for p in [&plain, &cued] {
            let sum = p.p_swiss + p.p_neighbor + p.p_other;
            prop_assert!((sum - 1.0).abs() < 1e-9);
            prop_assert!(p.p_swiss >= 0.0 && p.p_neighbor >= 0.0 && p.p_other >= 0.0);
        }
        prop_assert!(cued.p_swiss >= plain.p_swiss - 1e-12);
        prop_assert!(cued.p_swiss <= plain.p_swiss + 0.1 + 1e-12);
        if neighbor > 0 && other > 0 {
            let plain_ratio = plain.p_neighbor / plain.p_other;
            let cued_ratio = cued.p_neighbor / cued.p_other;
            let true_ratio = neighbor as f64 / other as f64;
            prop_assert!((plain_ratio - true_ratio).abs() < 1e-9);
            prop_assert!((cued_ratio - true_ratio).abs() < 1e-9);
        }
    }

    #[test]
    fn lpsr_is_antisymmetric_in_neighbor_and_other(
        neighbor in 0usize..40,
        other in 0usize..40,
        swiss in 0usize..10,
    ) {
        let ab = article_lpsr("a", Language::Fr, AnchorCounts { swiss, neighbor, other });
        let ba = article_lpsr("a", Language::Fr, AnchorCounts { swiss, neighbor: other, other: neighbor });
        prop_assert!((ab.lpsr + ba.lpsr).abs() < 1e-12);
        if neighbor > other {
            prop_assert!(ab.lpsr > 0.0);
        } else if neighbor < other {
            prop_assert!(ab.lpsr < 0.0);
        } else {
            prop_assert_eq!(ab.lpsr, 0.0);
        }
    }

    #[test]
    fn sentiment_scores_are_bounded_and_antisymmetric(
        p_pos in 0.0f64..=1.0,
        split in 0.0f64..=1.0,
    ) {
        let p_neg = (1.0 - p_pos) * split;
        let p_neu = 1.0 - p_pos - p_neg;
        let probs = SentimentProbs { p_pos, p_neu, p_neg };
        let score = mention_score(&probs).unwrap();
        prop_assert!((-1.0..=1.0).contains(&score));
        let mirrored = SentimentProbs { p_pos: p_neg, p_neu, p_neg: p_pos };
        let mirror_score = mention_score(&mirrored).unwrap();
        prop_assert!((score + mirror_score).abs() < 1e-12);
    }

    #[test]
    fn consensus_ignores_detector_input_order(
        pelt in prop::collection::btree_set(1usize..60, 0..6),
        binseg in prop::collection::btree_set(1usize..60, 0..6),
        bocpd_set in prop::collection::btree_set(1usize..60, 0..6),
    ) {
        let make = |d: Detector, s: &std::collections::BTreeSet<usize>| {
            DetectorCandidates::new(d, "t", s.iter().copied().collect(), 61)
        };
        let forward = consensus(
            vec![
                make(Detector::Pelt, &pelt),
                make(Detector::Binseg, &binseg),
                make(Detector::Bocpd, &bocpd_set),
            ],
            "ma3",
        );
        let reversed = consensus(
            vec![
                make(Detector::Bocpd, &bocpd_set),
                make(Detector::Binseg, &binseg),
                make(Detector::Pelt, &pelt),
            ],
            "ma3",
        );
        prop_assert_eq!(&forward.consensus, &reversed.consensus);
        prop_assert_eq!(&forward.clusters, &reversed.clusters);
        for point in &forward.consensus {
            prop_assert!(point.detectors.len() >= 2);
            prop_assert!(point.band.1 - point.band.0 <= 2);
            prop_assert!(point.index >= point.band.0 && point.index <= point.band.1);
        }
    }

    #[test]
    fn pelt_break_count_is_monotone_in_penalty(
        raw in prop::collection::vec(-5.0f64..5.0, 8..20),
        step_at in 3usize..6,
        step_size in 2.0f64..8.0,
    ) {
        let values: Vec<f64> = raw
            .iter()
            .enumerate()
            .map(|(i, v)| if i >= step_at { v + step_size } else { *v })
            .collect();
        let mut previous = usize::MAX;
        for multiplier in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let penalty = multiplier * (values.len() as f64).ln();
            let breaks = pelt_rbf(&values, penalty).unwrap();
            prop_assert!(breaks.len() <= previous);
            previous = breaks.len();
        }
    }

    #[test]
    fn moving_average_stays_within_series_bounds(
        values in prop::collection::vec(-50.0f64..50.0, 1..40),
        half in 0usize..3,
    ) {
        let window = 2 * half + 1;
        let out = moving_average(&values, window).unwrap();
        prop_assert_eq!(out.len(), values.len());
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for v in out {
            prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
        }
    }

    #[test]
    fn bocpd_posterior_columns_always_sum_to_one(
        values in prop::collection::vec(-10.0f64..10.0, 2..30),
    ) {
        let out = bocpd(&values, &BocpdParams::default()).unwrap();
        for column in &out.posterior {
            let sum: f64 = column.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            for p in column {
                prop_assert!(*p >= 0.0 && *p <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn weekly_counts_conserve_articles(
        offsets in prop::collection::vec(0i64..400, 1..60),
    ) {
        use chrono::{Duration, TimeZone, Utc};
        let base = Utc.with_ymd_and_hms(2020, 1, 6, 12, 0, 0).unwrap();
        let stamps: Vec<_> = offsets.iter().map(|&d| base + Duration::days(d)).collect();
        let series = weekly_counts("e", Language::It, &stamps).unwrap();
        let total: f64 = series.values().iter().sum();
        prop_assert_eq!(total as usize, stamps.len());
        for v in series.values() {
            prop_assert!(*v >= 0.0);
        }
    }
}
