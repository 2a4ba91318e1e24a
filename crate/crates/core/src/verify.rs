//! Self-contained verification suites shared by the command-line driver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{all_graphs, sample_gnp_with, Graph, Simplex};
use crate::moments::{self, StatParams};
use crate::montecarlo::Verdict;
use crate::morse;
use crate::oracle::exact_moments;
use crate::StatisticKind;

/// Relative tolerance for analytic-vs-enumeration comparisons.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl Gate {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Gate {
            name: name.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail: detail.into(),
        }
    }
}

pub fn all_pass(gates: &[Gate]) -> bool {
    gates.iter().all(|g| g.verdict != Verdict::Fail)
}

/// `|a - b| <= tol · max(|a|, |b|) + 1e-15`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()) + 1e-15
}

/// Analytic moments against exhaustive enumeration for every kind,
/// `n <= n_max`, `d <= 3` and `p ∈ {0.2, 0.5, 0.8}`. Critical vectors are
/// compared on means and per-component variances, the others on the full
/// covariance matrix.
pub fn oracle_suite(n_max: usize) -> Result<Vec<Gate>> {
    if n_max > crate::graph::ENUMERATION_CAP {
        return Err(invalid(format!(
            "n_max {n_max} exceeds {}",
            crate::graph::ENUMERATION_CAP
        )));
    }
    let mut gates = Vec::new();
    for kind in [
        StatisticKind::Critical,
        StatisticKind::Link,
        StatisticKind::Clique,
    ] {
        for n in 2..=n_max {
            for d in 1..=3 {
                for p in [0.2, 0.5, 0.8] {
                    let t_sizes: Vec<Option<usize>> = match kind {
                        StatisticKind::Link => (1..n).map(Some).collect(),
                        _ => vec![None],
                    };
                    for t_size in t_sizes {
                        let params = StatParams { n, p, d, t_size };
                        if params.validate(kind).is_err() {
                            continue;
                        }
                        gates.push(compare_with_oracle(kind, &params)?);
                    }
                }
            }
        }
    }
    Ok(gates)
}

fn compare_with_oracle(kind: StatisticKind, params: &StatParams) -> Result<Gate> {
    let exact = exact_moments(kind, params)?;
    let analytic = moments::statistic_cov_matrix(kind, params)?;
    let d = params.d;
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut check = |a: f64, b: f64| {
        ok &= rel_close(a, b, ORACLE_TOLERANCE);
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-300));
    };
    for a in 0..d {
        check(analytic.mean[a], exact.mean[a]);
        for b in 0..d {
            if kind != StatisticKind::Critical || a == b {
                check(analytic.cov[a][b], exact.cov[a][b]);
            }
        }
    }
    let name = format!(
        "oracle {kind} n={} d={} p={}{}",
        params.n,
        d,
        params.p,
        params.t_size.map(|t| format!(" t={t}")).unwrap_or_default()
    );
    Ok(Gate::new(
        name,
        ok,
        format!("max relative deviation {worst:.3e}"),
    ))
}

/// Direct matching counts against the indicator formula, plus acyclicity,
/// on `graphs` seeded G(n, 1/2) draws with `d = min(3, n - 1)`.
pub fn morse_equivalence_suite(graphs: usize, n: usize, seed: u64) -> Result<Vec<Gate>> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    let d = 3.min(n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0usize;
    let mut cyclic = 0usize;
    for _ in 0..graphs {
        let p = rng.random_range(0.1..0.9);
        let g = sample_gnp_with(&mut rng, n, p);
        let (eq, acyclic) = morse_check(&g, d)?;
        mismatches += !eq as usize;
        cyclic += !acyclic as usize;
    }
    Ok(vec![
        Gate::new(
            format!("direct = formula on {graphs} graphs, n={n}"),
            mismatches == 0,
            format!("{mismatches} mismatches"),
        ),
        Gate::new(
            format!("acyclic matching on {graphs} graphs, n={n}"),
            cyclic == 0,
            format!("{cyclic} cyclic"),
        ),
    ])
}

/// Same checks over every graph on `n <= 6` vertices.
pub fn morse_exhaustive_suite(n: usize) -> Result<Vec<Gate>> {
    let d = 3.min(n.saturating_sub(1)).max(1);
    let mut mismatches = 0usize;
    let mut cyclic = 0usize;
    let mut count = 0usize;
    for g in all_graphs(n)? {
        let (eq, acyclic) = morse_check(&g, d)?;
        mismatches += !eq as usize;
        cyclic += !acyclic as usize;
        count += 1;
    }
    Ok(vec![
        Gate::new(
            format!("direct = formula on all {count} graphs, n={n}"),
            mismatches == 0,
            format!("{mismatches} mismatches"),
        ),
        Gate::new(
            format!("acyclic matching on all {count} graphs, n={n}"),
            cyclic == 0,
            format!("{cyclic} cyclic"),
        ),
    ])
}

/// `(direct == formula, matching acyclic)` for one graph.
pub fn morse_check(g: &Graph, d: usize) -> Result<(bool, bool)> {
    let direct = morse::critical_counts_direct(g, d)?;
    let formula = morse::critical_counts_formula(g, d)?;
    let m = morse::lex_matching(g, (d + 2).min(g.n()))?;
    Ok((direct == formula, morse::verify_acyclic(&m, g)))
}

/// The five-vertex example: edges 12, 14, 23, 34, 35, 45.
pub fn five_vertex_graph() -> Graph {
    Graph::from_edges(5, &[(1, 2), (1, 4), (2, 3), (3, 4), (3, 5), (4, 5)]).expect("valid edges")
}

/// Reproduce the five-pair matching and the two critical simplices of the
/// five-vertex example.
pub fn five_vertex_suite() -> Result<Vec<Gate>> {
    let g = five_vertex_graph();
    let sx = |v: &[usize]| Simplex::new(v.to_vec()).expect("valid simplex");
    let expected = vec![
        (sx(&[2]), sx(&[1, 2])),
        (sx(&[3]), sx(&[2, 3])),
        (sx(&[4]), sx(&[1, 4])),
        (sx(&[5]), sx(&[3, 5])),
        (sx(&[4, 5]), sx(&[3, 4, 5])),
    ];
    let m = morse::lex_matching(&g, 3)?;
    let crit = morse::critical_simplices(&g, 3)?;
    Ok(vec![
        Gate::new(
            "five-pair matching",
            m.pairs() == expected.as_slice(),
            m.to_text(),
        ),
        Gate::new(
            "critical simplices {1}, {3,4}",
            crit == vec![sx(&[1]), sx(&[3, 4])],
            format!("{crit:?}"),
        ),
        Gate::new(
            "matching acyclic",
            morse::verify_acyclic(&m, &g),
            String::new(),
        ),
    ])
}
