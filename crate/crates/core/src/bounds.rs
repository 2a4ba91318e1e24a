//! Stein-method bounds on the distance between a standardized vector of
//! dissociated sums and a multivariate normal with the same covariance.
//!
//! Smooth bounds control `|E h(W) - E h(Σ^{1/2} Z)|` for test functions with
//! third partial derivatives bounded by 1. Convex bounds control
//! `sup_A |P(W ∈ A) - P(Σ^{1/2} Z ∈ A)|` over convex sets and are derived
//! from a smooth value by [`convex_bound`].

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{all_graphs, graph_probability, Graph, Simplex};
use crate::moments::{binom, c2, crit_variance, moment_bound, powi};
use crate::StatisticKind;

/// Default cap on the number of terms [`generic_bound`] will evaluate.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

/// Values at or above this are flagged vacuous.
pub const VACUOUS_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothnessClass {
    /// Test functions with `|h|_3 <= 1`.
    Smooth,
    /// Indicators of convex sets.
    Convex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    /// Exponent of `n` in the decay of `value`, when the bound has one.
    pub rate_exponent: Option<f64>,
    pub vacuous: bool,
    pub params: BTreeMap<String, f64>,
    pub smoothness_class: SmoothnessClass,
}

impl BoundReport {
    fn new(
        name: &str,
        value: f64,
        class: SmoothnessClass,
        rate: Option<f64>,
        params: &[(&str, f64)],
    ) -> Self {
        BoundReport {
            name: name.to_string(),
            value,
            rate_exponent: rate,
            vacuous: value >= VACUOUS_THRESHOLD,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            smoothness_class: class,
        }
    }
}

/// Position of a summand: component `component`, entry `pos` within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    pub component: usize,
    pub pos: usize,
}

/// `E|X_s X_t X_u|` and `E|X_s X_t| E|X_u|`, or upper bounds for them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsMoments {
    pub triple: f64,
    pub pair_times_single: f64,
}

/// A vector `W = (W_1, ..., W_d)` with `W_i = Σ_{s ∈ I_i} X_s`, together with
/// dependency neighbourhoods `D_j(s) ⊆ I_j` outside of which summands are
/// independent of `X_s`.
pub trait DissociatedInstance: Sync {
    fn dimension(&self) -> usize;
    fn component_len(&self, i: usize) -> usize;
    /// Positions in component `j` of `D_j(s)`.
    fn neighborhood(&self, s: Index, j: usize) -> Vec<usize>;
    fn abs_moments(&self, s: Index, t: Index, u: Index) -> AbsMoments;
}

fn all_indices(inst: &dyn DissociatedInstance) -> Vec<Index> {
    (0..inst.dimension())
        .flat_map(|c| (0..inst.component_len(c)).map(move |pos| Index { component: c, pos }))
        .collect()
}

fn full_neighborhood(inst: &dyn DissociatedInstance, s: Index) -> Vec<Index> {
    (0..inst.dimension())
        .flat_map(|j| {
            inst.neighborhood(s, j)
                .into_iter()
                .map(move |pos| Index { component: j, pos })
        })
        .collect()
}

/// Direct evaluation of `B = B.1 + B.2` with
/// `B.1 = (1/3) Σ_s Σ_{t,u ∈ D(s)} [½ E|X_s X_t X_u| + E|X_s X_t| E|X_u|]` and
/// `B.2 = (1/3) Σ_s Σ_{t ∈ D(s)} Σ_{v ∈ D(t) \ D(s)} [E|X_s X_t X_v| + E|X_s X_t| E|X_v|]`.
pub fn generic_bound(inst: &dyn DissociatedInstance) -> Result<BoundReport> {
    generic_bound_with_budget(inst, DEFAULT_TERM_BUDGET)
}

pub fn generic_bound_with_budget(
    inst: &dyn DissociatedInstance,
    budget: u64,
) -> Result<BoundReport> {
    let indices = all_indices(inst);
    let hoods: Vec<Vec<Index>> = indices
        .iter()
        .map(|&s| full_neighborhood(inst, s))
        .collect();
    let flat = |s: Index| -> usize {
        (0..s.component)
            .map(|c| inst.component_len(c))
            .sum::<usize>()
            + s.pos
    };
    let terms: u64 = hoods
        .iter()
        .map(|h| {
            (h.len() * h.len()) as u64 + h.iter().map(|&t| hoods[flat(t)].len() as u64).sum::<u64>()
        })
        .sum();
    if terms > budget {
        return Err(Error::BudgetExceeded { terms, budget });
    }
    // Per-index partial sums are collected in index order, so the total does
    // not depend on how rayon schedules the work.
    let partial: Vec<(f64, f64)> = indices
        .par_iter()
        .zip(hoods.par_iter())
        .map(|(&s, hood)| {
            let in_hood: HashSet<Index> = hood.iter().copied().collect();
            let mut b1 = 0.0;
            let mut b2 = 0.0;
            for &t in hood {
                for &u in hood {
                    let m = inst.abs_moments(s, t, u);
                    b1 += 0.5 * m.triple + m.pair_times_single;
                }
                for &v in &hoods[flat(t)] {
                    if !in_hood.contains(&v) {
                        let m = inst.abs_moments(s, t, v);
                        b2 += m.triple + m.pair_times_single;
                    }
                }
            }
            (b1, b2)
        })
        .collect();
    let b1: f64 = partial.iter().map(|x| x.0).sum::<f64>() / 3.0;
    let b2: f64 = partial.iter().map(|x| x.1).sum::<f64>() / 3.0;
    Ok(BoundReport::new(
        "generic",
        b1 + b2,
        SmoothnessClass::Smooth,
        None,
        &[("d", inst.dimension() as f64), ("b1", b1), ("b2", b2)],
    ))
}

/// Component sizes `|I_i|`, `α_ij` and `β_ijk`.
pub type UniformParameters = (Vec<usize>, Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>);

/// Neighbourhood sizes `α_ij = max_{s ∈ I_i} |D_j(s)|` and moment maxima
/// `β_ijk` over the triples that enter [`generic_bound`], for feeding
/// [`uniform_bound`].
pub fn uniform_parameters(inst: &dyn DissociatedInstance) -> UniformParameters {
    let d = inst.dimension();
    let sizes: Vec<usize> = (0..d).map(|i| inst.component_len(i)).collect();
    let mut alpha = vec![vec![0.0f64; d]; d];
    let mut beta = vec![vec![vec![0.0f64; d]; d]; d];
    for s in all_indices(inst) {
        let hood = full_neighborhood(inst, s);
        for (j, slot) in alpha[s.component].iter_mut().enumerate() {
            let len = hood.iter().filter(|t| t.component == j).count() as f64;
            *slot = slot.max(len);
        }
        for &t in &hood {
            let mut thirds = hood.clone();
            thirds.extend(full_neighborhood(inst, t));
            for u in thirds {
                let m = inst.abs_moments(s, t, u);
                let slot = &mut beta[s.component][t.component][u.component];
                *slot = slot.max(m.triple).max(m.pair_times_single);
            }
        }
    }
    (sizes, alpha, beta)
}

/// `B = (1/3) Σ_{i,j,k} |I_i| α_ij (3α_ik/2 + 2α_jk) β_ijk`.
pub fn uniform_bound(
    sizes: &[usize],
    alpha: &[Vec<f64>],
    beta: &[Vec<Vec<f64>>],
) -> Result<BoundReport> {
    let d = sizes.len();
    if alpha.len() != d || alpha.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch(format!("alpha must be {d}x{d}")));
    }
    if beta.len() != d
        || beta
            .iter()
            .any(|m| m.len() != d || m.iter().any(|r| r.len() != d))
    {
        return Err(Error::DimensionMismatch(format!(
            "beta must be {d}x{d}x{d}"
        )));
    }
    if alpha
        .iter()
        .flatten()
        .chain(beta.iter().flatten().flatten())
        .any(|&x| x < 0.0 || !x.is_finite())
    {
        return Err(invalid(
            "alpha and beta entries must be finite and nonnegative",
        ));
    }
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                total += sizes[i] as f64
                    * alpha[i][j]
                    * (1.5 * alpha[i][k] + 2.0 * alpha[j][k])
                    * beta[i][j][k];
            }
        }
    }
    Ok(BoundReport::new(
        "uniform",
        total / 3.0,
        SmoothnessClass::Smooth,
        None,
        &[("d", d as f64)],
    ))
}

/// `2^{7/2} 3^{-3/4} d^{3/16} B^{1/4}`.
pub fn convex_bound(d: usize, smooth_b: f64) -> f64 {
    2f64.powf(3.5) * 3f64.powf(-0.75) * (d as f64).powf(3.0 / 16.0) * smooth_b.max(0.0).powf(0.25)
}

/// Convex-set report derived from a smooth one.
pub fn convex_report(smooth: &BoundReport, d: usize) -> BoundReport {
    let mut params = smooth.params.clone();
    params.insert("smooth_value".into(), smooth.value);
    let value = convex_bound(d, smooth.value);
    BoundReport {
        name: format!("{}-convex", smooth.name),
        value,
        rate_exponent: smooth.rate_exponent.map(|r| r / 4.0),
        vacuous: value >= VACUOUS_THRESHOLD,
        params,
        smoothness_class: SmoothnessClass::Convex,
    }
}

/// A bound with an explicit `n`-free constant and its smooth and convex
/// evaluations at a given `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplicationBound {
    pub constant: f64,
    pub smooth: BoundReport,
    pub convex: BoundReport,
}

fn check_open_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("edge probability {p} must lie in (0, 1)")));
    }
    Ok(())
}

/// Number of `(φ, ψ)` with `φ` an `(i+1)`-set of least vertex `a`, `ψ` a
/// `(j+1)`-set of least vertex `b`, and `φ ∩ ψ ≠ ∅`.
pub fn overlapping_pairs(n: i64, i: i64, j: i64, a: i64, b: i64) -> f64 {
    let all = binom(n - a, i) * binom(n - b, j);
    let disjoint = if b < a {
        binom(n - a, i) * binom(n - b - i - 1, j)
    } else if b == a {
        0.0
    } else {
        (0..=i)
            .map(|r| binom(n - b, r) * binom(b - a - 1, i - r) * binom(n - b - r, j))
            .sum()
    };
    all - disjoint
}

/// Grouped bound on `B` for the standardized critical-count vector of sizes
/// `2..=d+1`, summed over components and least vertices with the
/// Bernoulli moment bound and exact variances.
pub fn crit_bound(n: usize, d: usize, p: f64) -> Result<BoundReport> {
    if d == 0 || d + 1 > n {
        return Err(invalid(format!("d = {d} needs 1 <= d <= n - 1")));
    }
    check_open_p(p)?;
    let ni = n as i64;
    let sigma: Vec<f64> = (1..=d)
        .map(|k| crit_variance(n, k, p).map(f64::sqrt))
        .collect::<Result<_>>()?;
    if sigma.iter().any(|&s| s <= 0.0) {
        return Err(invalid(
            "a critical count has zero variance at these parameters",
        ));
    }
    let mu = |i: i64, a: i64| -> f64 {
        powi(p, c2(i + 1)) * (powi(1.0 - powi(p, i + 1), a - 1) - powi(1.0 - powi(p, i), a - 1))
    };
    // |D_k(φ)| for φ of size i+1: (k+1)-sets meeting φ.
    let hood = |i: i64, k: i64| binom(ni, k + 1) - binom(ni - i - 1, k + 1);
    let mut total = 0.0;
    for i in 1..=d as i64 {
        for j in 1..=d as i64 {
            // Σ_{a,b} S_ij(a,b) √(μ(i,a)μ(j,b)(1-μ(i,a))(1-μ(j,b))).
            let mut pair_mass = 0.0;
            for a in 1..=ni - i {
                let ma = mu(i, a);
                for b in 1..=ni - j {
                    let mb = mu(j, b);
                    let count = overlapping_pairs(ni, i, j, a, b);
                    if count > 0.0 {
                        pair_mass += count * moment_bound(ma, mb, 1.0, 1.0, 1.0)?;
                    }
                }
            }
            for k in 1..=d as i64 {
                let scale = sigma[i as usize - 1] * sigma[j as usize - 1] * sigma[k as usize - 1];
                total += pair_mass / scale * (1.5 * hood(i, k) + 2.0 * hood(j, k));
            }
        }
    }
    Ok(BoundReport::new(
        "critical",
        total / 3.0,
        SmoothnessClass::Smooth,
        Some(-1.0),
        &[("n", n as f64), ("d", d as f64), ("p", p)],
    ))
}

/// Bounds for the link vector of a fixed `t` with `|t| = t_size`.
pub fn link_bound(n: usize, t_size: usize, d: usize, p: f64) -> Result<ApplicationBound> {
    if t_size == 0 || n <= t_size {
        return Err(invalid(format!(
            "need n > t_size >= 1, got n = {n}, t_size = {t_size}"
        )));
    }
    if d == 0 {
        return Err(invalid("d must be at least 1"));
    }
    check_open_p(p)?;
    let (df, t) = (d as f64, t_size as i64);
    let constant = 7.0 / 6.0
        * (2.0 * df + 1.0).powf(5.0 * df + 8.5)
        * (powi(p, -t) - 1.0).powf(-1.5)
        * p.powf(-((d + 1) as f64) * (df + 2.0 * t_size as f64));
    let params = [
        ("n", n as f64),
        ("t_size", t_size as f64),
        ("d", df),
        ("p", p),
        ("constant", constant),
    ];
    let smooth = BoundReport::new(
        "link",
        constant * ((n - t_size) as f64).powf(-0.5),
        SmoothnessClass::Smooth,
        Some(-0.5),
        &params,
    );
    let convex = convex_report(&smooth, d);
    Ok(ApplicationBound {
        constant,
        smooth,
        convex,
    })
}

fn ustat_sum(k_vec: &[usize], alpha_vec: &[f64], beta: f64) -> Result<f64> {
    if k_vec.is_empty() || k_vec.len() != alpha_vec.len() {
        return Err(Error::DimensionMismatch(
            "k_vec and alpha_vec must have equal nonzero length".into(),
        ));
    }
    if k_vec.contains(&0) {
        return Err(invalid("every k_i must be at least 1"));
    }
    if alpha_vec.iter().any(|&a| a.is_nan() || a <= 0.0) || beta.is_nan() || beta < 0.0 {
        return Err(invalid("need alpha_i > 0 and beta >= 0"));
    }
    let kf: Vec<f64> = k_vec.iter().map(|&k| k as f64).collect();
    let big_k: Vec<f64> = kf
        .iter()
        .map(|&k| (2.0 * k * k - k).powf(-k / 2.0 + 0.5))
        .collect();
    let fact = |k: usize| -> f64 { (1..=k).map(|x| x as f64).product() };
    let overlap = |a: usize, b: usize| kf[a].powi(k_vec[a].min(k_vec[b]) as i32 + 1);
    let d = k_vec.len();
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                total += overlap(i, j)
                    / (fact(k_vec[i]) * (alpha_vec[i] * alpha_vec[j] * alpha_vec[l]).sqrt())
                    * (overlap(i, l) + overlap(j, l))
                    * big_k[i]
                    * big_k[j]
                    * big_k[l];
            }
        }
    }
    Ok(total)
}

/// Constant for U-statistics of i.i.d. labels on vertices and edges; the
/// smooth distance decays like `n^{-1/2}`.
pub fn ustat_bound(k_vec: &[usize], alpha_vec: &[f64], beta: f64) -> Result<BoundReport> {
    let value = 2.0 * beta / 3.0 * ustat_sum(k_vec, alpha_vec, beta)?;
    Ok(BoundReport::new(
        "ustat",
        value,
        SmoothnessClass::Smooth,
        Some(-0.5),
        &[("d", k_vec.len() as f64), ("beta", beta)],
    ))
}

/// Constant for U-statistics of edge labels only; the smooth distance decays
/// like `n^{-1}`.
pub fn ustat_no_x_bound(k_vec: &[usize], alpha_vec: &[f64], beta: f64) -> Result<BoundReport> {
    let value = 16.0 * beta / 3.0 * ustat_sum(k_vec, alpha_vec, beta)?;
    Ok(BoundReport::new(
        "ustat-no-x",
        value,
        SmoothnessClass::Smooth,
        Some(-1.0),
        &[("d", k_vec.len() as f64), ("beta", beta)],
    ))
}

/// Bounds for the standardized clique-count vector of sizes `2..=d+1`.
pub fn clique_bound(n: usize, d: usize, p: f64) -> Result<ApplicationBound> {
    if d == 0 {
        return Err(invalid("d must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    check_open_p(p)?;
    let e = c2(d as i64 + 1);
    let constant = 16.0 / 3.0
        * (d as f64).powi(2 * d as i32 + 5)
        * powi(p, -3 * e + 1)
        * (1.0 - powi(p, e))
        * (1.0 / p - 1.0).powf(-1.5);
    let params = [
        ("n", n as f64),
        ("d", d as f64),
        ("p", p),
        ("constant", constant),
    ];
    let smooth = BoundReport::new(
        "clique",
        constant / n as f64,
        SmoothnessClass::Smooth,
        Some(-1.0),
        &params,
    );
    let convex = convex_report(&smooth, d);
    Ok(ApplicationBound {
        constant,
        smooth,
        convex,
    })
}

/// How [`EnumeratedInstance`] supplies absolute moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    /// Exact expectations over all graphs.
    Exact,
    /// The Bernoulli product bound with `c_i = 1/σ_i`.
    BernoulliBound,
}

/// A critical, link or clique count vector on `n <= 6` vertices with every
/// moment computed by summing over all graphs.
pub struct EnumeratedInstance {
    simplices: Vec<Vec<Simplex>>,
    min_overlap: usize,
    sigma: Vec<f64>,
    means: Vec<Vec<f64>>,
    /// Graph weights and, per graph, the indicator of every index in flat order.
    weights: Vec<f64>,
    indicators: Vec<Vec<bool>>,
    offsets: Vec<usize>,
    source: MomentSource,
}

impl EnumeratedInstance {
    /// Indices are all vertex sets of the sizes counted by `kind` (avoiding
    /// `t = {1..t_size}` for links). Neighbourhoods are sets sharing at least
    /// one vertex, or at least two for cliques.
    pub fn new(
        kind: StatisticKind,
        n: usize,
        p: f64,
        d: usize,
        t_size: Option<usize>,
        source: MomentSource,
    ) -> Result<Self> {
        let params = crate::moments::StatParams { n, p, d, t_size };
        params.validate(kind)?;
        check_open_p(p)?;
        let t = match kind {
            StatisticKind::Link => Some(Simplex::new((1..=t_size.expect("validated")).collect())?),
            _ => None,
        };
        let simplices: Vec<Vec<Simplex>> = kind
            .sizes(d)
            .map(|size| {
                crate::graph::cliques(&Graph::complete(n), size)
                    .into_iter()
                    .filter(|s| {
                        t.as_ref()
                            .is_none_or(|t| s.vertices().iter().all(|&v| !t.contains(v)))
                    })
                    .collect()
            })
            .collect();
        let offsets: Vec<usize> = simplices
            .iter()
            .scan(0, |acc, c| {
                let o = *acc;
                *acc += c.len();
                Some(o)
            })
            .collect();
        let flat: Vec<(usize, &Simplex)> = simplices
            .iter()
            .enumerate()
            .flat_map(|(c, v)| v.iter().map(move |s| (c, s)))
            .collect();
        let mut weights = Vec::new();
        let mut indicators = Vec::new();
        for g in all_graphs(n)? {
            weights.push(graph_probability(&g, p));
            indicators.push(
                flat.iter()
                    .map(|&(_, s)| indicator(kind, &g, s, t.as_ref()))
                    .collect::<Vec<bool>>(),
            );
        }
        let mut means = simplices
            .iter()
            .map(|c| vec![0.0; c.len()])
            .collect::<Vec<_>>();
        let mut comp_mean = vec![0.0; d];
        let mut comp_sq = vec![0.0; d];
        for (w, ind) in weights.iter().zip(&indicators) {
            let mut totals = vec![0.0; d];
            for (f, &(c, _)) in flat.iter().enumerate() {
                if ind[f] {
                    totals[c] += 1.0;
                    means[c][f - offsets[c]] += w;
                }
            }
            for c in 0..d {
                comp_mean[c] += w * totals[c];
                comp_sq[c] += w * totals[c] * totals[c];
            }
        }
        let sigma: Vec<f64> = (0..d)
            .map(|c| (comp_sq[c] - comp_mean[c] * comp_mean[c]).max(0.0).sqrt())
            .collect();
        if sigma.iter().any(|&s| s <= 0.0) {
            return Err(invalid("a component has zero variance"));
        }
        let min_overlap = if kind == StatisticKind::Clique { 2 } else { 1 };
        Ok(EnumeratedInstance {
            simplices,
            min_overlap,
            sigma,
            means,
            weights,
            indicators,
            offsets,
            source,
        })
    }

    pub fn simplex(&self, s: Index) -> &Simplex {
        &self.simplices[s.component][s.pos]
    }

    pub fn mean(&self, s: Index) -> f64 {
        self.means[s.component][s.pos]
    }

    pub fn sigma(&self, component: usize) -> f64 {
        self.sigma[component]
    }

    fn flat(&self, s: Index) -> usize {
        self.offsets[s.component] + s.pos
    }

    /// `E[1_s 1_t]` over all graphs.
    pub fn joint_mean(&self, s: Index, t: Index) -> f64 {
        let (a, b) = (self.flat(s), self.flat(t));
        self.weights
            .iter()
            .zip(&self.indicators)
            .filter(|(_, ind)| ind[a] && ind[b])
            .map(|(w, _)| w)
            .sum()
    }

    fn standardized(&self, s: Index, on: bool) -> f64 {
        (on as u8 as f64 - self.mean(s)) / self.sigma[s.component]
    }

    pub fn all_indices(&self) -> Vec<Index> {
        all_indices(self)
    }

    fn overlap(&self, s: &Simplex, t: &Simplex) -> usize {
        s.vertices().iter().filter(|&&v| t.contains(v)).count()
    }
}

fn indicator(kind: StatisticKind, g: &Graph, s: &Simplex, t: Option<&Simplex>) -> bool {
    if !s.is_clique_in(g) {
        return false;
    }
    match kind {
        StatisticKind::Clique => true,
        StatisticKind::Link => {
            let t = t.expect("link base");
            t.vertices()
                .iter()
                .all(|&u| s.vertices().iter().all(|&v| g.has_edge(u, v)))
        }
        StatisticKind::Critical => {
            let v = s.vertices();
            let lower_common =
                |set: &[usize]| (1..v[0]).any(|j| set.iter().all(|&x| g.has_edge(j, x)));
            !lower_common(v) && lower_common(&v[1..])
        }
    }
}

impl DissociatedInstance for EnumeratedInstance {
    fn dimension(&self) -> usize {
        self.simplices.len()
    }

    fn component_len(&self, i: usize) -> usize {
        self.simplices[i].len()
    }

    fn neighborhood(&self, s: Index, j: usize) -> Vec<usize> {
        let base = self.simplex(s);
        (0..self.simplices[j].len())
            .filter(|&pos| self.overlap(base, &self.simplices[j][pos]) >= self.min_overlap)
            .collect()
    }

    fn abs_moments(&self, s: Index, t: Index, u: Index) -> AbsMoments {
        match self.source {
            MomentSource::BernoulliBound => {
                let c = |x: Index| 1.0 / self.sigma[x.component];
                let b = moment_bound(self.mean(s), self.mean(t), c(s), c(t), c(u))
                    .expect("means are probabilities");
                AbsMoments {
                    triple: b,
                    pair_times_single: b,
                }
            }
            MomentSource::Exact => {
                let (fs, ft, fu) = (self.flat(s), self.flat(t), self.flat(u));
                let mut triple = 0.0;
                let mut pair = 0.0;
                let mut single = 0.0;
                for (w, ind) in self.weights.iter().zip(&self.indicators) {
                    let xs = self.standardized(s, ind[fs]);
                    let xt = self.standardized(t, ind[ft]);
                    let xu = self.standardized(u, ind[fu]);
                    triple += w * (xs * xt * xu).abs();
                    pair += w * (xs * xt).abs();
                    single += w * xu.abs();
                }
                AbsMoments {
                    triple,
                    pair_times_single: pair * single,
                }
            }
        }
    }
}
