//! Greedy binary segmentation over the RBF segment cost.

use crate::error::{Error, Result};

use super::kernel::RbfCost;
use super::pelt::MIN_SERIES_LEN;
use super::{Detector, DetectorCandidates};

/// Splits greedily until `k` breakpoints are placed or no segment can be
/// split further. `k` may not exceed T − 2. Among equal gains the smallest
/// index wins.
pub fn binseg(values: &[f64], k: usize) -> Result<DetectorCandidates> {
    let t_len = values.len();
    if t_len < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            got: t_len,
            needed: MIN_SERIES_LEN,
        });
    }
    if k + 2 > t_len {
        return Err(Error::TooManyBreakpoints {
            k,
            max: t_len - 2,
        });
    }
    let cost = RbfCost::new(values)?;
    let mut segments: Vec<(usize, usize)> = vec![(0, t_len)];
    let mut breaks: Vec<usize> = Vec::new();
    for _ in 0..k {
        let mut best: Option<(f64, usize, usize)> = None;
        for (seg_idx, &(a, b)) in segments.iter().enumerate() {
            if b - a < 2 {
                continue;
            }
            let whole = cost.segment_cost(a, b);
            for s in (a + 1)..b {
                let gain = whole - cost.segment_cost(a, s) - cost.segment_cost(s, b);
                let better = match best {
                    None => true,
                    Some((g, _, at)) => gain > g || (gain == g && s < at),
                };
                if better {
                    best = Some((gain, seg_idx, s));
                }
            }
        }
        let Some((_, seg_idx, s)) = best else {
            break;
        };
        let (a, b) = segments[seg_idx];
        segments[seg_idx] = (a, s);
        segments.insert(seg_idx + 1, (s, b));
        breaks.push(s);
    }
    Ok(DetectorCandidates::new(
        Detector::Binseg,
        format!("rbf k={k}"),
        breaks,
        t_len,
    ))
}
