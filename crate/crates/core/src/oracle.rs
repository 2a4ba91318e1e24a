//! Exact joint distributions of statistic vectors by enumerating every graph
//! on `n <= 6` vertices.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{graph_probability, pair_count, Graph, Simplex, ENUMERATION_CAP};
use crate::moments::{MomentReport, Provenance, StatParams};
use crate::morse::critical_counts_direct;
use crate::StatisticKind;

/// Number of contiguous graph-mask blocks summed independently and merged in
/// block order, which keeps floating-point results independent of threads.
const BLOCKS: u64 = 64;

/// Sorted support of a count vector with its probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub kind: StatisticKind,
    pub params: StatParams,
    pub support: Vec<Vec<u64>>,
    pub probabilities: Vec<f64>,
}

/// The count vector of `kind` on one graph. Link vectors use
/// `t = {1, ..., t_size}`.
pub fn count_vector(kind: StatisticKind, g: &Graph, params: &StatParams) -> Result<Vec<u64>> {
    match kind {
        StatisticKind::Critical => Ok(critical_counts_direct(g, params.d)?.counts().to_vec()),
        StatisticKind::Clique => Ok(kind
            .sizes(params.d)
            .map(|s| crate::graph::clique_count(g, s))
            .collect()),
        StatisticKind::Link => {
            let t = link_base(params)?;
            kind.sizes(params.d)
                .map(|s| crate::graph::link_count(g, &t, s))
                .collect()
        }
    }
}

pub(crate) fn link_base(params: &StatParams) -> Result<Simplex> {
    let t = params
        .t_size
        .ok_or_else(|| invalid("link vectors need t_size"))?;
    Simplex::new((1..=t).collect())
}

/// Exact distribution of the statistic vector over all graphs on `n <= 6`
/// vertices.
pub fn exact_distribution(kind: StatisticKind, params: &StatParams) -> Result<ExactDistribution> {
    if params.n > ENUMERATION_CAP {
        return Err(crate::Error::CapExceeded {
            n: params.n,
            cap: ENUMERATION_CAP,
        });
    }
    params.validate(kind)?;
    let n = params.n;
    let total = 1u64 << pair_count(n);
    let blocks = BLOCKS.min(total);
    let per_block = total.div_ceil(blocks);
    let partial: Vec<Result<HashMap<Vec<u64>, f64>>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = HashMap::new();
            for mask in b * per_block..((b + 1) * per_block).min(total) {
                let g = Graph::from_edge_mask(n, mask);
                let w = graph_probability(&g, params.p);
                *acc.entry(count_vector(kind, &g, params)?).or_insert(0.0) += w;
            }
            Ok(acc)
        })
        .collect();
    let mut merged: HashMap<Vec<u64>, f64> = HashMap::new();
    for block in partial {
        let mut entries: Vec<_> = block?.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for (k, w) in entries {
            *merged.entry(k).or_insert(0.0) += w;
        }
    }
    let mut entries: Vec<_> = merged.into_iter().filter(|(_, w)| *w > 0.0).collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let (support, probabilities) = entries.into_iter().unzip();
    Ok(ExactDistribution {
        kind,
        params: *params,
        support,
        probabilities,
    })
}

impl ExactDistribution {
    pub fn mean(&self) -> Vec<f64> {
        let d = self.params.d;
        let mut m = vec![0.0; d];
        for (x, w) in self.support.iter().zip(&self.probabilities) {
            for a in 0..d {
                m[a] += w * x[a] as f64;
            }
        }
        m
    }

    /// Covariance computed around the exact mean.
    pub fn cov(&self) -> Vec<Vec<f64>> {
        let d = self.params.d;
        let m = self.mean();
        let mut c = vec![vec![0.0; d]; d];
        for (x, w) in self.support.iter().zip(&self.probabilities) {
            for a in 0..d {
                for b in 0..d {
                    c[a][b] += w * (x[a] as f64 - m[a]) * (x[b] as f64 - m[b]);
                }
            }
        }
        c
    }

    /// Probability of one support point, zero when absent.
    pub fn pmf(&self, x: &[u64]) -> f64 {
        self.support
            .binary_search_by(|s| s.as_slice().cmp(x))
            .map(|i| self.probabilities[i])
            .unwrap_or(0.0)
    }
}

/// Exact mean vector and covariance matrix.
pub fn exact_moments(kind: StatisticKind, params: &StatParams) -> Result<MomentReport> {
    let dist = exact_distribution(kind, params)?;
    Ok(MomentReport {
        kind,
        params: *params,
        mean: dist.mean(),
        cov: dist.cov(),
        provenance: Provenance::ExactOracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: f64, d: usize, t_size: Option<usize>) -> StatParams {
        StatParams { n, p, d, t_size }
    }

    #[test]
    fn critical_n3() {
        let dist = exact_distribution(StatisticKind::Critical, &params(3, 0.5, 1, None)).unwrap();
        assert_eq!(dist.support, vec![vec![0], vec![1]]);
        assert_eq!(dist.probabilities, vec![0.875, 0.125]);
    }

    #[test]
    fn link_n3_is_binomial() {
        let dist = exact_distribution(StatisticKind::Link, &params(3, 0.5, 1, Some(1))).unwrap();
        assert_eq!(dist.support, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(dist.probabilities, vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn degenerate_p() {
        let dist = exact_distribution(StatisticKind::Clique, &params(4, 1.0, 2, None)).unwrap();
        assert_eq!(dist.support, vec![vec![6, 4]]);
        assert_eq!(dist.probabilities, vec![1.0]);
    }

    #[test]
    fn cap() {
        assert!(exact_distribution(StatisticKind::Clique, &params(7, 0.5, 1, None)).is_err());
    }
}
