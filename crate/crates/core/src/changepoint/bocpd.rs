//! Bayesian online change-point detection with a constant hazard and a
//! Normal observation model under a conjugate Normal-Gamma prior.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

use super::{Detector, DetectorCandidates};

pub const DEFAULT_HAZARD: f64 = 1.0 / 52.0;

/// Hazard, prior, and MAP-reset thresholds. `mu0`/`beta0` default to the
/// series mean and population variance (1.0 when the variance is zero).
#[derive(Debug, Clone)]
pub struct BocpdParams {
    pub hazard: f64,
    pub kappa0: f64,
    pub alpha0: f64,
    pub mu0: Option<f64>,
    pub beta0: Option<f64>,
    /// Candidate fires when the MAP run length is ≤ `reset_low` at t
    /// after being ≥ `reset_high` at t−1.
    pub reset_low: usize,
    pub reset_high: usize,
}

impl Default for BocpdParams {
    fn default() -> Self {
        BocpdParams {
            hazard: DEFAULT_HAZARD,
            kappa0: 1.0,
            alpha0: 1.0,
            mu0: None,
            beta0: None,
            reset_low: 1,
            reset_high: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BocpdResult {
    pub candidates: DetectorCandidates,
    /// posterior[t] is the run-length distribution after observation t+1;
    /// entry r is P(run length = r). Each column sums to 1.
    pub posterior: Vec<Vec<f64>>,
    /// MAP run length after each observation (smallest index on ties).
    pub map_run_length: Vec<usize>,
}

/// Normal-Gamma posterior parameters for one run-length hypothesis.
#[derive(Debug, Clone, Copy)]
struct NormalGamma {
    mu: f64,
    kappa: f64,
    alpha: f64,
    beta: f64,
}

impl NormalGamma {
    fn update(self, x: f64) -> NormalGamma {
        NormalGamma {
            mu: (self.kappa * self.mu + x) / (self.kappa + 1.0),
            kappa: self.kappa + 1.0,
            alpha: self.alpha + 0.5,
            beta: self.beta + self.kappa * (x - self.mu).powi(2) / (2.0 * (self.kappa + 1.0)),
        }
    }

    /// Log density of the Student-t posterior predictive at x.
    fn log_predictive(self, x: f64) -> f64 {
        let nu = 2.0 * self.alpha;
        let scale2 = self.beta * (self.kappa + 1.0) / (self.alpha * self.kappa);
        ln_gamma((nu + 1.0) / 2.0)
            - ln_gamma(nu / 2.0)
            - 0.5 * (nu * std::f64::consts::PI * scale2).ln()
            - (nu + 1.0) / 2.0 * (1.0 + (x - self.mu).powi(2) / (nu * scale2)).ln()
    }
}

fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

pub fn bocpd(values: &[f64], params: &BocpdParams) -> Result<BocpdResult> {
    if !(params.hazard > 0.0 && params.hazard < 1.0) {
        return Err(Error::InvalidHazard(params.hazard));
    }
    if values.len() < 2 {
        return Err(Error::SeriesTooShort {
            got: values.len(),
            needed: 2,
        });
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(i));
        }
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let prior = NormalGamma {
        mu: params.mu0.unwrap_or(mean),
        kappa: params.kappa0,
        alpha: params.alpha0,
        beta: params.beta0.unwrap_or(if variance > 0.0 { variance } else { 1.0 }),
    };
    let ln_h = params.hazard.ln();
    let ln_1mh = (1.0 - params.hazard).ln();

    let mut log_r: Vec<f64> = vec![0.0];
    let mut stats: Vec<NormalGamma> = vec![prior];
    let mut posterior: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    let mut map_run_length: Vec<usize> = Vec::with_capacity(values.len());

    for &x in values {
        let joint: Vec<f64> = log_r
            .iter()
            .zip(&stats)
            .map(|(lr, ng)| lr + ng.log_predictive(x))
            .collect();
        let mut next = Vec::with_capacity(joint.len() + 1);
        next.push(logsumexp(&joint) + ln_h);
        next.extend(joint.iter().map(|j| j + ln_1mh));
        let z = logsumexp(&next);
        for v in &mut next {
            *v -= z;
        }
        let column: Vec<f64> = next.iter().map(|v| v.exp()).collect();
        let mut best = 0;
        for (r, &p) in column.iter().enumerate() {
            if p > column[best] {
                best = r;
            }
        }
        map_run_length.push(best);
        posterior.push(column);

        let mut next_stats = Vec::with_capacity(stats.len() + 1);
        next_stats.push(prior);
        next_stats.extend(stats.iter().map(|ng| ng.update(x)));
        stats = next_stats;
        log_r = next;
    }

    let mut indices = Vec::new();
    for t in 1..map_run_length.len() {
        if map_run_length[t] <= params.reset_low && map_run_length[t - 1] >= params.reset_high {
            indices.push(t);
        }
    }
    let candidates = DetectorCandidates::new(
        Detector::Bocpd,
        format!("hazard={:.4}", params.hazard),
        indices,
        values.len(),
    );
    Ok(BocpdResult {
        candidates,
        posterior,
        map_run_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_observation_posterior_is_hazard_split() {
        let params = BocpdParams::default();
        let out = bocpd(&[5.0, 6.0], &params).unwrap();
        let h = params.hazard;
        assert_eq!(out.posterior[0].len(), 2);
        assert!((out.posterior[0][0] - h).abs() < 1e-12);
        assert!((out.posterior[0][1] - (1.0 - h)).abs() < 1e-12);
    }

    #[test]
    fn posterior_columns_sum_to_one() {
        let values: Vec<f64> = (0..40)
            .map(|i| ((i * 37 % 11) as f64) * 0.3 + if i >= 20 { 6.0 } else { 0.0 })
            .collect();
        let out = bocpd(&values, &BocpdParams::default()).unwrap();
        for (t, column) in out.posterior.iter().enumerate() {
            assert_eq!(column.len(), t + 2);
            let sum: f64 = column.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "column {t} sums to {sum}");
        }
    }

    #[test]
    fn map_run_length_resets_within_two_steps_of_a_step() {
        let mut values = vec![0.0; 10];
        values.extend(vec![8.0; 10]);
        let out = bocpd(&values, &BocpdParams::default()).unwrap();
        // Ten quiet observations grow the MAP run to 10.
        assert_eq!(out.map_run_length[9], 10);
        // Within two observations of the step the MAP run drops to ≤ 2,
        // placing the inferred segment start at the step.
        let reset = (10..12).any(|t| out.map_run_length[t] <= 2);
        assert!(reset, "map path: {:?}", out.map_run_length);
    }

    #[test]
    fn step_after_long_quiet_run_emits_candidate_at_step_index() {
        // A long quiet run tightens the predictive enough that the first
        // post-step observation drops the MAP run length to ≤ 1.
        let mut values = vec![0.0; 40];
        values.extend(vec![8.0; 10]);
        let out = bocpd(&values, &BocpdParams::default()).unwrap();
        assert_eq!(out.candidates.indices(), &[40]);
    }

    #[test]
    fn constant_series_has_no_candidates() {
        let out = bocpd(&[3.0; 30], &BocpdParams::default()).unwrap();
        assert!(out.candidates.is_empty());
        assert_eq!(out.map_run_length[29], 30);
    }

    #[test]
    fn invalid_hazard_is_an_error() {
        let mut params = BocpdParams::default();
        params.hazard = 0.0;
        assert!(matches!(
            bocpd(&[1.0, 2.0], &params),
            Err(Error::InvalidHazard(_))
        ));
        params.hazard = 1.0;
        assert!(matches!(
            bocpd(&[1.0, 2.0], &params),
            Err(Error::InvalidHazard(_))
        ));
    }

    #[test]
    fn single_observation_is_too_short() {
        assert!(matches!(
            bocpd(&[1.0], &BocpdParams::default()),
            Err(Error::SeriesTooShort { got: 1, needed: 2 })
        ));
    }
}
