//! Degree-1 LOESS trend with tricube weights over index distance.

use crate::error::{Error, Result};

const MIN_POINTS: usize = 4;
const MIN_NEIGHBORS: usize = 3;

/// Locally weighted linear fit evaluated at each index. The neighborhood
/// size is max(3, ceil(span·T)); weights are tricube in |j − i| scaled by
/// the furthest neighbor. Degenerate fits fall back to the weighted mean,
/// so exactly linear input is reproduced exactly.
pub fn loess_trend(values: &[f64], span: f64) -> Result<Vec<f64>> {
    if !(span > 0.0 && span <= 1.0) {
        return Err(Error::InvalidSpan(span));
    }
    let n = values.len();
    if n < MIN_POINTS {
        return Err(Error::SeriesTooShort {
            got: n,
            needed: MIN_POINTS,
        });
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(i));
        }
    }
    let q = MIN_NEIGHBORS.max((span * n as f64).ceil() as usize).min(n);
    let mut fitted = Vec::with_capacity(n);
    for i in 0..n {
        // q nearest indices by |j − i|, smaller index first on ties.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| (j.abs_diff(i), j));
        let neighbors = &order[..q];
        let d_max = neighbors.iter().map(|&j| j.abs_diff(i)).max().unwrap() as f64;
        let mut points: Vec<(f64, f64, f64)> = Vec::with_capacity(q);
        for &j in neighbors {
            let d = j.abs_diff(i) as f64;
            let u = if d_max > 0.0 { d / d_max } else { 0.0 };
            if u >= 1.0 {
                continue;
            }
            let w = (1.0 - u.powi(3)).powi(3);
            points.push((w, j as f64, values[j]));
        }
        // The self point always carries weight 1, so points is non-empty.
        let sw: f64 = points.iter().map(|(w, _, _)| w).sum();
        let xb = points.iter().map(|(w, x, _)| w * x).sum::<f64>() / sw;
        let yb = points.iter().map(|(w, _, y)| w * y).sum::<f64>() / sw;
        let sxx: f64 = points.iter().map(|(w, x, _)| w * (x - xb) * (x - xb)).sum();
        let sxy: f64 = points.iter().map(|(w, x, y)| w * (x - xb) * (y - yb)).sum();
        // A concentrated weight pattern leaves no slope information; fall
        // back to the weighted mean.
        let fit = if sxx.abs() > 1e-12 {
            yb + (sxy / sxx) * (i as f64 - xb)
        } else {
            yb
        };
        fitted.push(fit);
    }
    Ok(fitted)
}
