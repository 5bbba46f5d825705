//! LOESS fits must match a textbook reimplementation that solves the
//! weighted least squares in centered form.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use newstrace::changepoint::loess_trend;

const TOLERANCE: f64 = 1e-8;

/// Independent degree-1 LOESS: q nearest neighbors, tricube in distance
/// to the furthest neighbor, centered weighted regression.
fn reference_loess(values: &[f64], span: f64) -> Vec<f64> {
    let n = values.len();
    let q = 3usize.max((span * n as f64).ceil() as usize).min(n);
    (0..n)
        .map(|i| {
            let mut by_distance: Vec<usize> = (0..n).collect();
            by_distance.sort_by_key(|&j| (j.abs_diff(i), j));
            let neighbors = &by_distance[..q];
            let d_max = neighbors.iter().map(|&j| j.abs_diff(i)).max().unwrap() as f64;
            let weighted: Vec<(f64, f64, f64)> = neighbors
                .iter()
                .filter_map(|&j| {
                    let u = if d_max > 0.0 {
                        j.abs_diff(i) as f64 / d_max
                    } else {
                        0.0
                    };
                    if u >= 1.0 {
                        return None;
                    }
                    let w = (1.0 - u.powi(3)).powi(3);
                    Some((w, j as f64, values[j]))
                })
                .collect();
            let sw: f64 = weighted.iter().map(|(w, _, _)| w).sum();
            let xb: f64 = weighted.iter().map(|(w, x, _)| w * x).sum::<f64>() / sw;
            let yb: f64 = weighted.iter().map(|(w, _, y)| w * y).sum::<f64>() / sw;
            let sxx: f64 = weighted.iter().map(|(w, x, _)| w * (x - xb) * (x - xb)).sum();
            let sxy: f64 = weighted
                .iter()
                .map(|(w, x, y)| w * (x - xb) * (y - yb))
                .sum();
            if sxx.abs() > 1e-12 {
                let slope = sxy / sxx;
                yb + slope * (i as f64 - xb)
            } else {
                yb
            }
        })
        .collect()
}

#[test]
fn fits_match_reference_on_random_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let n = rng.gen_range(4..=80);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let span = *[0.25, 0.4, 0.75].choose(&mut rng).unwrap();
        let ours = loess_trend(&values, span).unwrap();
        let reference = reference_loess(&values, span);
        for (k, (a, b)) in ours.iter().zip(&reference).enumerate() {
            assert!(
                (a - b).abs() < TOLERANCE,
                "n={n} span={span} point {k}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn fits_match_reference_on_step_and_sine() {
    let mut step: Vec<f64> = vec![1.0; 25];
    step.extend(vec![7.5; 25]);
    let sine: Vec<f64> = (0..60).map(|i| (i as f64 * 0.3).sin() * 4.0).collect();
    for series in [step, sine] {
        let ours = loess_trend(&series, 0.25).unwrap();
        let reference = reference_loess(&series, 0.25);
        for (a, b) in ours.iter().zip(&reference) {
            assert!((a - b).abs() < TOLERANCE);
        }
    }
}

#[test]
fn random_linear_series_are_reproduced() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..25 {
        let n = rng.gen_range(4..=100);
        let slope = rng.gen_range(-5.0..5.0);
        let intercept = rng.gen_range(-20.0..20.0);
        let values: Vec<f64> = (0..n).map(|i| intercept + slope * i as f64).collect();
        let fitted = loess_trend(&values, 0.25).unwrap();
        for (f, v) in fitted.iter().zip(&values) {
            assert!((f - v).abs() < 1e-6, "n={n} slope={slope}: {f} vs {v}");
        }
    }
}
