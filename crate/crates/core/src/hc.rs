//! Hierarchical-clustering baseline for grouping selection.
//!
//! Elementary components that carry the same underlying signal structure
//! are strongly w-correlated with each other (a harmonic's two
//! eigencomponents are almost perfectly correlated) and only weakly
//! correlated with noise components, so `1 − |wcorr|` behaves like a
//! distance. Agglomerative clustering under that distance, cut at
//! `max(2, ⌊d/2⌋)` clusters, isolates such groups; the baseline grouping
//! index is the largest component index clustered together with the
//! leading component. The half-rank cut matters: noise components are
//! heterogeneous, so a coarser two-cluster cut tends to sweep them into
//! the signal's cluster and drag the index far above the truth.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::separability::wcorr_matrix;
use crate::ssa::SsaDecomposition;

/// Cluster-distance update rule used by the agglomeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    /// Closest pair of members.
    Single,
    /// Farthest pair of members; the default.
    Complete,
    /// Mean over all member pairs.
    Average,
}

impl Linkage {
    pub fn name(self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            other => Err(Error::InvalidConfig(format!(
                "unknown linkage `{other}` (expected `single`, `complete` or `average`)"
            ))),
        }
    }
}

/// Partition of the component indices `1..=d` around the leading
/// component, and the derived baseline grouping index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HcGrouping {
    /// Cluster containing component 1, ascending.
    pub first: Vec<usize>,
    /// All components outside that cluster, ascending; empty when `d < 2`.
    pub second: Vec<usize>,
    /// Largest index in `first`.
    pub g_hc: usize,
    /// Set when `d < 2` left nothing to cluster and the partition is the
    /// trivial one — a warning rather than an error.
    pub trivial: bool,
}

/// Clusters the decomposition's components with the default complete
/// linkage.
pub fn hc_grouping(dec: &SsaDecomposition) -> Result<HcGrouping> {
    hc_grouping_with(dec, Linkage::Complete)
}

/// Clusters the decomposition's components under the given linkage and
/// reports the largest index clustered together with component 1.
pub fn hc_grouping_with(dec: &SsaDecomposition, linkage: Linkage) -> Result<HcGrouping> {
    let d = dec.rank();
    if d == 0 {
        return Err(Error::DegenerateComponent(
            "decomposition has no components above the rank tolerance".into(),
        ));
    }
    if d == 1 {
        return Ok(HcGrouping {
            first: vec![1],
            second: Vec::new(),
            g_hc: 1,
            trivial: true,
        });
    }
    let m = wcorr_matrix(dec)?;
    // Dissimilarity 1 − |wcorr|; the matrix entries are already absolute
    // values, and the max(0) guards against ulp overshoot above 1.
    let mut dis = vec![0.0; d * d];
    for i in 1..=d {
        for j in 1..=d {
            dis[(i - 1) * d + (j - 1)] = (1.0 - m.get(i, j)).max(0.0);
        }
    }
    let clusters = cluster_components(&dis, d, linkage, (d / 2).max(2));
    let mut first = Vec::new();
    let mut second = Vec::new();
    for cluster in clusters {
        if cluster.contains(&0) {
            first = cluster;
        } else {
            second.extend(cluster);
        }
    }
    // 0-based slots to 1-based component indices.
    second.sort_unstable();
    for c in first.iter_mut().chain(second.iter_mut()) {
        *c += 1;
    }
    let g_hc = *first.last().expect("cluster with component 1 is nonempty");
    Ok(HcGrouping {
        first,
        second,
        g_hc,
        trivial: false,
    })
}

/// Agglomerates `d` items under the Lance–Williams recurrence until `k`
/// clusters remain (`1 ≤ k ≤ d`); each returned cluster is ascending.
///
/// Clusters are kept in the slot of their smallest member, and the merge
/// pair is the lexicographically first among those at minimal distance, so
/// the procedure is deterministic even under ties.
fn cluster_components(dis: &[f64], d: usize, linkage: Linkage, k: usize) -> Vec<Vec<usize>> {
    debug_assert_eq!(dis.len(), d * d);
    debug_assert!(k >= 1 && k <= d);
    let mut dist = dis.to_vec();
    let mut members: Vec<Option<Vec<usize>>> = (0..d).map(|i| Some(vec![i])).collect();
    let at = |i: usize, j: usize| i * d + j;

    for _ in 0..d - k {
        let mut best: Option<(usize, usize)> = None;
        let mut best_d = f64::INFINITY;
        for i in 0..d {
            if members[i].is_none() {
                continue;
            }
            for j in i + 1..d {
                if members[j].is_none() {
                    continue;
                }
                if dist[at(i, j)] < best_d {
                    best_d = dist[at(i, j)];
                    best = Some((i, j));
                }
            }
        }
        let (i, j) = best.expect("at least two active clusters");
        let (ni, nj) = (
            members[i].as_ref().unwrap().len() as f64,
            members[j].as_ref().unwrap().len() as f64,
        );
        for c in 0..d {
            if c == i || c == j || members[c].is_none() {
                continue;
            }
            let (dic, djc) = (dist[at(i, c)], dist[at(j, c)]);
            let merged = match linkage {
                Linkage::Single => dic.min(djc),
                Linkage::Complete => dic.max(djc),
                Linkage::Average => (ni * dic + nj * djc) / (ni + nj),
            };
            dist[at(i, c)] = merged;
            dist[at(c, i)] = merged;
        }
        let absorbed = members[j].take().unwrap();
        members[i].as_mut().unwrap().extend(absorbed);
    }

    let mut clusters: Vec<Vec<usize>> = members.into_iter().flatten().collect();
    for c in &mut clusters {
        c.sort_unstable();
    }
    clusters
}
