//! Cross-detector clustering of candidate change points.

use std::collections::BTreeSet;

use super::{Detector, DetectorCandidates};

/// A maximal run of pooled candidates in which consecutive indices differ
/// by at most 1. Members are sorted by (index, detector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub members: Vec<(usize, Detector)>,
}

impl Cluster {
    pub fn first_index(&self) -> usize {
        self.members.first().map(|m| m.0).unwrap_or(0)
    }

    pub fn last_index(&self) -> usize {
        self.members.last().map(|m| m.0).unwrap_or(0)
    }

    pub fn span(&self) -> usize {
        self.last_index() - self.first_index()
    }

    pub fn detectors(&self) -> BTreeSet<Detector> {
        self.members.iter().map(|m| m.1).collect()
    }

    /// Lower median of member indices.
    pub fn median_index(&self) -> usize {
        let indices: Vec<usize> = self.members.iter().map(|m| m.0).collect();
        indices[(indices.len() - 1) / 2]
    }
}

/// A cluster that survived the support and span gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusPoint {
    pub index: usize,
    pub detectors: BTreeSet<Detector>,
    /// Index extent of the supporting cluster, inclusive.
    pub band: (usize, usize),
}

/// Per-detector candidates plus clusters and consensus points.
#[derive(Debug, Clone)]
pub struct ChangePointReport {
    pub per_detector: Vec<DetectorCandidates>,
    pub clusters: Vec<Cluster>,
    pub consensus: Vec<ConsensusPoint>,
    /// Which smoothed variant the detectors ran on.
    pub smoothing: String,
}

/// Pools all candidates, clusters runs with gaps ≤ 1, and keeps the lower
/// median of every cluster that spans ≤ 2 index units and is supported by
/// at least two distinct detectors.
pub fn consensus(
    per_detector: Vec<DetectorCandidates>,
    smoothing: impl Into<String>,
) -> ChangePointReport {
    let mut pooled: Vec<(usize, Detector)> = per_detector
        .iter()
        .flat_map(|c| c.indices().iter().map(|&i| (i, c.detector)))
        .collect();
    pooled.sort();

    let mut clusters: Vec<Cluster> = Vec::new();
    for entry in pooled {
        match clusters.last_mut() {
            Some(cluster) if entry.0 - cluster.last_index() <= 1 => {
                cluster.members.push(entry);
            }
            _ => clusters.push(Cluster {
                members: vec![entry],
            }),
        }
    }

    let consensus = clusters
        .iter()
        .filter(|c| c.span() <= 2 && c.detectors().len() >= 2)
        .map(|c| ConsensusPoint {
            index: c.median_index(),
            detectors: c.detectors(),
            band: (c.first_index(), c.last_index()),
        })
        .collect();

    ChangePointReport {
        per_detector,
        clusters,
        consensus,
        smoothing: smoothing.into(),
    }
}
