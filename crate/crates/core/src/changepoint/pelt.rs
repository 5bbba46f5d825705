//! PELT over the RBF segment cost, exact under zero-gap pruning.

use crate::error::{Error, Result};

use super::kernel::RbfCost;
use super::{Detector, DetectorCandidates};

pub const MIN_SERIES_LEN: usize = 4;

/// Optimal partition under `penalty` per change point. Returns interior
/// breakpoints (new-segment start indices), sorted ascending.
pub fn pelt_rbf(values: &[f64], penalty: f64) -> Result<Vec<usize>> {
    if !(penalty.is_finite() && penalty > 0.0) {
        return Err(Error::InvalidPenalty(penalty));
    }
    if values.len() < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            got: values.len(),
            needed: MIN_SERIES_LEN,
        });
    }
    let cost = RbfCost::new(values)?;
    Ok(pelt_partition(&cost, penalty))
}

/// Dynamic program F(t) = min over last-segment starts s of
/// F(s) + C(s, t) + β, with F(0) = −β. The RBF cost never increases when a
/// segment is split, so candidates with F(s) + C(s, t) > F(t) can be pruned
/// without a gap constant.
pub fn pelt_partition(cost: &RbfCost, penalty: f64) -> Vec<usize> {
    let t_len = cost.len();
    let mut best = vec![f64::INFINITY; t_len + 1];
    let mut prev = vec![0usize; t_len + 1];
    best[0] = -penalty;
    let mut candidates: Vec<usize> = vec![0];
    for t in 1..=t_len {
        let mut arg = candidates[0];
        let mut val = f64::INFINITY;
        for &s in &candidates {
            let c = best[s] + cost.segment_cost(s, t) + penalty;
            if c < val {
                val = c;
                arg = s;
            }
        }
        best[t] = val;
        prev[t] = arg;
        candidates.retain(|&s| best[s] + cost.segment_cost(s, t) <= best[t]);
        candidates.push(t);
    }
    let mut breaks = Vec::new();
    let mut t = t_len;
    while t > 0 {
        let s = prev[t];
        if s > 0 {
            breaks.push(s);
        }
        t = s;
    }
    breaks.reverse();
    breaks
}

/// PELT run across a penalty grid of multipliers of ln T.
#[derive(Debug, Clone)]
pub struct PeltGrid {
    /// Breakpoints per multiplier, in the order given.
    pub per_penalty: Vec<(f64, Vec<usize>)>,
    /// Breakpoints at the baseline multiplier (sizes the BinSeg budget).
    pub baseline_indices: Vec<usize>,
    /// Candidate union across the grid.
    pub union: DetectorCandidates,
}

pub fn pelt_grid(
    values: &[f64],
    multipliers: &[f64],
    baseline_multiplier: f64,
) -> Result<PeltGrid> {
    if multipliers.is_empty() {
        return Err(Error::InvalidPenalty(f64::NAN));
    }
    let t_len = values.len();
    if t_len < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            got: t_len,
            needed: MIN_SERIES_LEN,
        });
    }
    let log_t = (t_len as f64).ln();
    let cost = RbfCost::new(values)?;
    let mut per_penalty = Vec::new();
    let mut union = Vec::new();
    for &m in multipliers {
        let penalty = m * log_t;
        if !(penalty.is_finite() && penalty > 0.0) {
            return Err(Error::InvalidPenalty(penalty));
        }
        let breaks = pelt_partition(&cost, penalty);
        union.extend(breaks.iter().copied());
        per_penalty.push((m, breaks));
    }
    let baseline_penalty = baseline_multiplier * log_t;
    if !(baseline_penalty.is_finite() && baseline_penalty > 0.0) {
        return Err(Error::InvalidPenalty(baseline_penalty));
    }
    let baseline_indices = pelt_partition(&cost, baseline_penalty);
    let parameters = format!(
        "rbf penalty={}*lnT",
        multipliers
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join("/")
    );
    Ok(PeltGrid {
        per_penalty,
        baseline_indices,
        union: DetectorCandidates::new(Detector::Pelt, parameters, union, t_len),
    })
}
