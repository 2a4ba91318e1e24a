//! Exact means, variances and covariances of critical, link and clique
//! counts in G(n, p), plus the closed-form bounds that accompany them.
//!
//! In this module `k` is a simplex dimension unless a doc comment says
//! otherwise, so critical `k`-simplices have `k + 1` vertices.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::StatisticKind;

/// `C(n, k)` as a float, zero when `k < 0`, `n < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round_if_integral()
}

trait RoundIfIntegral {
    fn round_if_integral(self) -> Self;
}

impl RoundIfIntegral for f64 {
    // Products of ratios drift by an ulp; binomials below 2^53 are integers.
    fn round_if_integral(self) -> f64 {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

/// `C(m, 2)` for possibly negative `m`, as an integer exponent.
pub fn c2(m: i64) -> i64 {
    m * (m - 1) / 2
}

/// `base^e` with `0^0 = 1`; large exponents go through logarithms.
pub fn powi(base: f64, e: i64) -> f64 {
    if e == 0 {
        1.0
    } else if e.abs() > 1000 {
        if base <= 0.0 {
            if e > 0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (e as f64 * base.ln()).exp()
        }
    } else {
        base.powi(e as i32)
    }
}

fn check_open_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("edge probability {p} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_closed_p(p: f64) -> Result<()> {
    crate::graph::check_probability(p)
}

fn check_crit(n: usize, k: usize) -> Result<()> {
    if k == 0 || k + 1 > n {
        return Err(invalid(format!(
            "critical dimension {k} must satisfy 1 <= k <= n - 1 = {}",
            n as i64 - 1
        )));
    }
    Ok(())
}

/// Mean number of critical `k`-simplices.
pub fn crit_mean(n: usize, k: usize, p: f64) -> Result<f64> {
    check_crit(n, k)?;
    check_closed_p(p)?;
    let (n, k) = (n as i64, k as i64);
    let a = 1.0 - powi(p, k + 1);
    let b = 1.0 - powi(p, k);
    let sum: f64 = (0..n - k)
        .map(|l| binom(n - l - 1, k) * (powi(a, l) - powi(b, l)))
        .sum();
    Ok(powi(p, c2(k + 1)) * sum)
}

/// Elementary lower and upper bounds `(lower, upper)` on the critical mean.
pub fn crit_mean_bounds(n: usize, k: usize, p: f64) -> Result<(f64, f64)> {
    check_crit(n, k)?;
    check_open_p(p)?;
    let (n, k) = (n as i64, k as i64);
    let lower = powi(p, c2(k + 1) + k) * binom(n - 2, k) * (1.0 - p);
    let upper = powi(p, c2(k + 1) - k - 1) * binom(n - 1, k) * (1.0 - p);
    Ok((lower, upper))
}

/// Bound on the mean number of critical `k`-simplices whose least vertex
/// exceeds `threshold`.
pub fn crit_tail_bound(n: usize, k: usize, p: f64, threshold: usize) -> Result<f64> {
    check_crit(n, k)?;
    check_open_p(p)?;
    if threshold == 0 || threshold > n - k {
        return Err(invalid(format!(
            "threshold {threshold} outside 1..={}",
            n - k
        )));
    }
    let ki = k as i64;
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    Ok(
        powi(p, c2(ki + 1) - ki - 1) * (n as f64).powi(k as i32) / factorial
            * powi(1.0 - powi(p, ki + 1), threshold as i64),
    )
}

/// Building blocks of the critical-count variance for fixed `(n, k, p)`.
///
/// Positions `i < j` are least vertices of two critical `k`-simplices, `m`
/// counts shared vertices and `q` counts vertices of the second simplex that
/// lie strictly between the two minima.
#[derive(Debug, Clone, Copy)]
pub struct CritMomentTerms {
    n: i64,
    k: i64,
    p: f64,
}

impl CritMomentTerms {
    pub fn new(n: usize, k: usize, p: f64) -> Result<Self> {
        check_crit(n, k)?;
        check_open_p(p)?;
        Ok(CritMomentTerms {
            n: n as i64,
            k: k as i64,
            p,
        })
    }

    fn pk(&self, e: i64) -> f64 {
        powi(self.p, e)
    }

    /// `P(s critical | s clique)` when `min(s) = a`.
    pub fn eta(&self, a: i64) -> f64 {
        let k = self.k;
        powi(1.0 - self.pk(k + 1), a - 1) - powi(1.0 - self.pk(k), a - 1)
    }

    /// Joint probability factor for vertices between the two minima, with
    /// `delta` in `{0, 1}` choosing whether the second minimum is shared and
    /// `overlap` the number of shared vertices entering the exponent.
    pub fn theta(&self, i: i64, j: i64, q: i64, m: i64, delta: i64, overlap: i64) -> f64 {
        let k = self.k;
        self.pk(-c2(m))
            * powi(1.0 - self.pk(k + delta), j - i - q)
            * powi(1.0 - self.pk(k + delta - overlap), q)
    }

    /// Probability that a single vertex below both minima leaves the two
    /// simplices in the given states: `pi(a, b, m)` = `1 - p^a - p^b + p^(a+b-m)`.
    pub fn pi(&self, a: i64, b: i64, shared: i64) -> f64 {
        1.0 - self.pk(a) - self.pk(b) + self.pk(a + b - shared)
    }

    /// Number of ordered placements with the second simplex meeting the
    /// first in `m` vertices, the first's minimum shared.
    pub fn gamma_shared_min(&self, i: i64, j: i64, m: i64, q: i64) -> f64 {
        let (n, k) = (self.n, self.k);
        binom(n - j, 2 * k + 1 - m - q)
            * binom(2 * k + 1 - m - q, k)
            * binom(k, m - 1)
            * binom(j - i - 1, q - 1)
    }

    /// As [`Self::gamma_shared_min`] with the first's minimum not shared.
    pub fn gamma_unshared_min(&self, i: i64, j: i64, m: i64, q: i64) -> f64 {
        let (n, k) = (self.n, self.k);
        binom(n - j, 2 * k + 1 - m - q)
            * binom(2 * k + 1 - m - q, k)
            * binom(k, m)
            * binom(j - i - 1, q - 1)
    }

    /// Overlapping pairs with distinct minima, shared lower minimum.
    pub fn v1(&self) -> f64 {
        let (n, k) = (self.n, self.k);
        let mut total = 0.0;
        for i in 1..=n - k {
            for j in i + 1..=n - k {
                let base = self.eta(i) * self.eta(j);
                for m in 1..=k {
                    let a =
                        powi(self.pi(k + 1, k + 1, m), i - 1) - powi(self.pi(k + 1, k, m), i - 1);
                    let b =
                        powi(self.pi(k, k, m - 1), i - 1) - powi(self.pi(k + 1, k, m - 1), i - 1);
                    for q in 1..=(k + 1).min(j - i) {
                        let c = self.gamma_shared_min(i, j, m, q);
                        if c == 0.0 {
                            continue;
                        }
                        total += c
                            * (self.theta(i, j, q, m, 1, m) * a
                                + self.theta(i, j, q, m, 0, m - 1) * b
                                - base);
                    }
                }
            }
        }
        total
    }

    /// Overlapping pairs with distinct minima, lower minimum not shared.
    pub fn v2(&self) -> f64 {
        let (n, k) = (self.n, self.k);
        let mut total = 0.0;
        for i in 1..=n - k {
            for j in i + 1..=n - k {
                let base = self.eta(i) * self.eta(j);
                for m in 1..=k {
                    let a =
                        powi(self.pi(k + 1, k + 1, m), i - 1) - powi(self.pi(k + 1, k, m), i - 1);
                    let b = powi(self.pi(k, k, m), i - 1) - powi(self.pi(k + 1, k, m), i - 1);
                    for q in 1..=(k + 1).min(j - i) {
                        let c = self.gamma_unshared_min(i, j, m, q);
                        if c == 0.0 {
                            continue;
                        }
                        total += c
                            * (self.theta(i, j, q, m, 1, m) * a + self.theta(i, j, q, m, 0, m) * b
                                - base);
                    }
                }
            }
        }
        total
    }

    /// Distinct overlapping pairs with a common minimum.
    pub fn v3(&self) -> f64 {
        let (n, k) = (self.n, self.k);
        let mut total = 0.0;
        for i in 1..=n - k {
            let e2 = self.eta(i) * self.eta(i);
            for m in 1..=k {
                let c = binom(n - i, 2 * k + 1 - m) * binom(2 * k + 1 - m, k) * binom(k, m - 1);
                if c == 0.0 {
                    continue;
                }
                let joint = powi(self.pi(k + 1, k + 1, m), i - 1)
                    + powi(self.pi(k, k, m - 1), i - 1)
                    - 2.0 * powi(self.pi(k + 1, k, m - 1), i - 1);
                total += c * (self.pk(-c2(m)) * joint - e2);
            }
        }
        total
    }

    /// Diagonal terms.
    pub fn v4(&self) -> f64 {
        let (n, k) = (self.n, self.k);
        let big_p = self.pk(c2(k + 1));
        (1..=n - k)
            .map(|i| binom(n - i, k) * (self.eta(i) - big_p * self.eta(i).powi(2)))
            .sum()
    }

    /// Exact variance `2P²V1 + 2P²V2 + P²V3 + P·V4` with `P = p^C(k+1,2)`.
    pub fn variance(&self) -> f64 {
        let big_p = self.pk(c2(self.k + 1));
        2.0 * big_p * big_p * (self.v1() + self.v2())
            + big_p * big_p * self.v3()
            + big_p * self.v4()
    }

    fn r_prefactor(&self) -> f64 {
        let (n, k) = (self.n as f64, self.k);
        let kf = k as f64;
        let fact: f64 = (1..k).map(|i| i as f64).product();
        n.powi(2 * k as i32 - 1) * (2.0 * kf - 1.0).powi(k as i32) * (kf + 1.0).powi(k as i32 + 1)
            / fact
    }

    /// Upper bound on the first overlap remainder.
    pub fn r1(&self) -> f64 {
        let k = self.k;
        let q = self.pk(k + 1);
        self.r_prefactor() * (1.0 - q) / ((2.0 - q) * self.pk(2 * k + 2))
    }

    /// Upper bound on the second overlap remainder.
    pub fn r2(&self) -> f64 {
        let k = self.k;
        self.r_prefactor() * self.pk(-c2(k)) * (1.0 - self.pk(k + 1)) / self.pk(2 * k + 2)
    }

    /// Upper bound on the common-minimum remainder.
    pub fn r3(&self) -> f64 {
        let (n, k) = (self.n as f64, self.k);
        let kf = k as f64;
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        n.powi(2 * k as i32 - 1) * (2.0 * kf - 1.0).powi(k as i32) * kf.powi(k as i32) / fact
            * 2.0
            * (self.pk(-c2(k)) + 1.0)
            * self.pk(-k - 1)
    }

    /// Lower bound on the disjoint-pair main term.
    pub fn r4(&self) -> f64 {
        let (n, k) = (self.n, self.k);
        if n - 2 < 2 * k {
            return 0.0;
        }
        let ratio = (n - 2) as f64 / (2 * k) as f64;
        ratio.powi(2 * k as i32) * binom(2 * k, k) * self.pk(2 * k + 1) * (1.0 - self.p)
    }

    /// `max(0, P²(R4 − 8R1 − 8R2 − R3))`.
    pub fn variance_lower(&self) -> f64 {
        let big_p = self.pk(c2(self.k + 1));
        (big_p * big_p * (self.r4() - 8.0 * self.r1() - 8.0 * self.r2() - self.r3())).max(0.0)
    }
}

/// Exact variance of the number of critical `k`-simplices.
pub fn crit_variance(n: usize, k: usize, p: f64) -> Result<f64> {
    Ok(CritMomentTerms::new(n, k, p)?.variance())
}

/// Closed-form lower bound on the critical variance, clamped at zero.
pub fn crit_variance_lower(n: usize, k: usize, p: f64) -> Result<f64> {
    Ok(CritMomentTerms::new(n, k, p)?.variance_lower())
}

/// Smallest `n` in `from..=to` where [`crit_variance_lower`] is positive.
pub fn crit_variance_lower_threshold(
    k: usize,
    p: f64,
    from: usize,
    to: usize,
) -> Result<Option<usize>> {
    check_open_p(p)?;
    let positive =
        |n: usize| -> Result<bool> { Ok(CritMomentTerms::new(n, k, p)?.variance_lower() > 0.0) };
    let from = from.max(k + 1);
    if from > to || !positive(to)? {
        return Ok(None);
    }
    // The bracket is monotone for large n; bisect on the sign.
    let (mut lo, mut hi) = (from, to);
    if positive(lo)? {
        return Ok(Some(lo));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if positive(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

fn check_link(n: usize, t_size: usize, k: usize) -> Result<()> {
    if t_size == 0 {
        return Err(invalid("link base must be nonempty"));
    }
    if k + 1 + t_size > n {
        return Err(invalid(format!(
            "link simplex of size {} does not fit beside |t| = {t_size} in n = {n}",
            k + 1
        )));
    }
    Ok(())
}

/// `p^(C(k+1,2) + |t|(k+1))`: probability a given `(k+1)`-set is a link simplex.
fn link_prob(t_size: i64, k: i64, p: f64) -> f64 {
    powi(p, c2(k + 1) + t_size * (k + 1))
}

/// Mean number of `k`-simplices in the link of a fixed `t`.
pub fn link_mean(n: usize, t_size: usize, k: usize, p: f64) -> Result<f64> {
    check_link(n, t_size, k)?;
    check_closed_p(p)?;
    let (n, t, k) = (n as i64, t_size as i64, k as i64);
    Ok(binom(n - t, k + 1) * link_prob(t, k, p))
}

/// Covariance of link counts of dimensions `k` and `l`.
pub fn link_cov(n: usize, t_size: usize, k: usize, l: usize, p: f64) -> Result<f64> {
    check_link(n, t_size, k)?;
    check_link(n, t_size, l)?;
    check_closed_p(p)?;
    let (k, l) = (k.max(l) as i64, k.min(l) as i64);
    let (n, t) = (n as i64, t_size as i64);
    let mu = link_prob(t, k, p) * link_prob(t, l, p);
    let mut total = 0.0;
    for m in 1..=l + 1 {
        let count = binom(n - t, k + 1) * binom(k + 1, m) * binom(n - t - k - 1, l + 1 - m);
        // Joint probability divided by the product, minus one.
        let excess = if p == 0.0 {
            0.0
        } else {
            powi(p, -c2(m) - t * m) - 1.0
        };
        total += count * mu * excess;
    }
    Ok(total)
}

/// Single-overlap lower bound on [`link_cov`].
pub fn link_cov_lower(n: usize, t_size: usize, k: usize, l: usize, p: f64) -> Result<f64> {
    check_link(n, t_size, k)?;
    check_link(n, t_size, l)?;
    check_open_p(p)?;
    let (k, l) = (k.max(l) as i64, k.min(l) as i64);
    let (n, t) = (n as i64, t_size as i64);
    let mu = link_prob(t, k, p) * link_prob(t, l, p);
    Ok((k + 1) as f64 * binom(n - t, l + k + 1) * binom(l + k + 1, l) * mu * (powi(p, -t) - 1.0))
}

/// Mean number of cliques with `size` vertices.
pub fn clique_mean(n: usize, size: usize, p: f64) -> Result<f64> {
    if size == 0 || size > n {
        return Err(invalid(format!("clique size {size} outside 1..={n}")));
    }
    check_closed_p(p)?;
    Ok(binom(n as i64, size as i64) * powi(p, c2(size as i64)))
}

/// Covariance of the counts of `i`- and `j`-dimensional cliques.
pub fn clique_cov(n: usize, i: usize, j: usize, p: f64) -> Result<f64> {
    for dim in [i, j] {
        if dim == 0 || dim + 1 > n {
            return Err(invalid(format!(
                "clique dimension {dim} outside 1..={}",
                n as i64 - 1
            )));
        }
    }
    check_closed_p(p)?;
    let (n, i, j) = (n as i64, i as i64, j as i64);
    let e = c2(i + 1) + c2(j + 1);
    let mut total = 0.0;
    for m in 2..=(i + 1).min(j + 1) {
        let count = binom(n, i + 1) * binom(i + 1, m) * binom(n - i - 1, j + 1 - m);
        total += count * (powi(p, e - c2(m)) - powi(p, e));
    }
    Ok(total)
}

/// Bound `c1 c2 c3 sqrt(μ1 μ2 (1-μ1)(1-μ2))` on `E|X1 X2| E|X3|`-type
/// moments of standardized Bernoulli summands with `|X_i| <= c_i`.
pub fn moment_bound(mu1: f64, mu2: f64, c1: f64, c2: f64, c3: f64) -> Result<f64> {
    for mu in [mu1, mu2] {
        if !(0.0..=1.0).contains(&mu) {
            return Err(invalid(format!("Bernoulli mean {mu} outside [0, 1]")));
        }
    }
    if c1 < 0.0 || c2 < 0.0 || c3 < 0.0 {
        return Err(invalid("moment constants must be nonnegative"));
    }
    Ok(c1 * c2 * c3 * (mu1 * mu2 * (1.0 - mu1) * (1.0 - mu2)).sqrt())
}

/// Parameters of a statistic vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatParams {
    pub n: usize,
    pub p: f64,
    pub d: usize,
    /// Size of the link base `t = {1, ..., t_size}`; only used by link vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_size: Option<usize>,
}

impl StatParams {
    pub fn validate(&self, kind: StatisticKind) -> Result<()> {
        check_closed_p(self.p)?;
        if self.d == 0 {
            return Err(invalid("dimension d must be at least 1"));
        }
        match kind {
            StatisticKind::Critical | StatisticKind::Clique => {
                if self.d + 1 > self.n {
                    return Err(invalid(format!("d = {} needs n >= {}", self.d, self.d + 1)));
                }
            }
            StatisticKind::Link => {
                let t = self
                    .t_size
                    .ok_or_else(|| invalid("link vectors need t_size"))?;
                check_link(self.n, t, self.d - 1)?;
            }
        }
        Ok(())
    }
}

/// Where the entries of a [`MomentReport`] come from; mixed reports carry
/// the weakest source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    ExactOracle,
    Empirical,
}

/// Mean vector and covariance matrix of a statistic vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub kind: StatisticKind,
    pub params: StatParams,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

/// Largest `n` for which critical cross-covariances come from enumeration.
pub const ORACLE_CROSS_COV_CAP: usize = crate::graph::ENUMERATION_CAP;

/// Settings for critical cross-covariances that have no closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalConfig {
    pub replicates: usize,
    pub seed: u64,
}

impl Default for EmpiricalConfig {
    fn default() -> Self {
        EmpiricalConfig {
            replicates: 20_000,
            seed: 0,
        }
    }
}

/// Mean and covariance of the statistic vector, analytic where a closed form
/// exists. Critical cross-covariances (`d >= 2`) come from the exact oracle
/// for `n <= 6` and from simulation otherwise.
pub fn statistic_cov_matrix(kind: StatisticKind, params: &StatParams) -> Result<MomentReport> {
    statistic_cov_matrix_with(kind, params, EmpiricalConfig::default())
}

/// As [`statistic_cov_matrix`] with explicit simulation settings.
pub fn statistic_cov_matrix_with(
    kind: StatisticKind,
    params: &StatParams,
    empirical: EmpiricalConfig,
) -> Result<MomentReport> {
    params.validate(kind)?;
    let (n, p, d) = (params.n, params.p, params.d);
    let mut cov = vec![vec![0.0; d]; d];
    let mut mean = vec![0.0; d];
    let mut provenance = Provenance::Analytic;
    match kind {
        StatisticKind::Clique => {
            for a in 0..d {
                mean[a] = clique_mean(n, a + 2, p)?;
                for (b, c) in cov[a].iter_mut().enumerate() {
                    *c = clique_cov(n, a + 1, b + 1, p)?;
                }
            }
        }
        StatisticKind::Link => {
            let t = params.t_size.expect("validated");
            for a in 0..d {
                mean[a] = link_mean(n, t, a, p)?;
                for (b, c) in cov[a].iter_mut().enumerate() {
                    *c = link_cov(n, t, a, b, p)?;
                }
            }
        }
        StatisticKind::Critical => {
            for a in 0..d {
                mean[a] = crit_mean(n, a + 1, p)?;
                cov[a][a] = if p == 0.0 || p == 1.0 {
                    0.0
                } else {
                    crit_variance(n, a + 1, p)?
                };
            }
            if d >= 2 {
                let off = if n <= ORACLE_CROSS_COV_CAP {
                    provenance = Provenance::ExactOracle;
                    crate::oracle::exact_moments(kind, params)?.cov
                } else {
                    provenance = Provenance::Empirical;
                    let cfg = crate::montecarlo::MCConfig {
                        kind,
                        params: *params,
                        replicates: empirical.replicates,
                        master_seed: empirical.seed,
                        standardization: crate::montecarlo::Standardization::None,
                    };
                    let raw = crate::montecarlo::simulate_vectors(&cfg)?.raw;
                    let m = crate::montecarlo::empirical_cov(&raw)?;
                    (0..d)
                        .map(|a| (0..d).map(|b| m[(a, b)]).collect())
                        .collect()
                };
                for a in 0..d {
                    for b in 0..d {
                        if a != b {
                            cov[a][b] = off[a][b];
                        }
                    }
                }
            }
        }
    }
    Ok(MomentReport {
        kind,
        params: *params,
        mean,
        cov,
        provenance,
    })
}

/// Smallest eigenvalue of a symmetric matrix given as rows.
pub fn min_eigenvalue(cov: &[Vec<f64>]) -> f64 {
    let d = cov.len();
    if d == 0 {
        return 0.0;
    }
    let m = nalgebra::DMatrix::from_fn(d, d, |a, b| cov[a][b]);
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()) + 1e-15
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binom(5, 2), 10.0);
        assert_eq!(binom(5, -1), 0.0);
        assert_eq!(binom(-2, 1), 0.0);
        assert_eq!(binom(3, 4), 0.0);
        assert_eq!(binom(0, 0), 1.0);
        assert_eq!(powi(0.0, 0), 1.0);
        assert!(close(powi(0.5, 2000), 0.5f64.powi(2000), 1e-12));
    }

    #[test]
    fn crit_mean_examples() {
        assert!(close(crit_mean(3, 1, 0.5).unwrap(), 0.125, 1e-14));
        assert_eq!(crit_mean_bounds(3, 1, 0.5).unwrap(), (0.125, 2.0));
        assert_eq!(crit_mean(3, 1, 1.0).unwrap(), 0.0);
        assert!(crit_mean(3, 3, 0.5).is_err());
        assert!(crit_mean(3, 0, 0.5).is_err());
    }

    #[test]
    fn crit_variance_matches_enumeration() {
        // Exhaustive values over all graphs on n vertices.
        let cases = [
            (3, 1, 0.109375),
            (4, 1, 0.3349609375),
            (5, 1, 0.67034912109375),
            (5, 2, 0.08071517944335938),
            (6, 1, 1.1204185485839844),
            (6, 2, 0.25186437368392944),
            (4, 2, 0.015380859375),
            (5, 3, 0.0009756088256835938),
        ];
        for (n, k, v) in cases {
            let got = crit_variance(n, k, 0.5).unwrap();
            assert!(close(got, v, 1e-12), "n={n} k={k}: {got} vs {v}");
        }
    }

    #[test]
    fn crit_variance_vanishes_as_p_shrinks() {
        assert!(crit_variance(6, 1, 1e-7).unwrap() < 1e-5);
    }

    #[test]
    fn lower_bound_is_zero_at_moderate_n() {
        assert_eq!(crit_variance_lower(100, 1, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn link_and_clique_examples() {
        assert!(close(link_mean(4, 1, 0, 0.5).unwrap(), 1.5, 1e-14));
        assert!(close(link_cov(4, 1, 0, 0, 0.5).unwrap(), 0.75, 1e-14));
        for p in [0.2, 0.5, 0.9] {
            assert!(close(
                clique_cov(3, 1, 1, p).unwrap(),
                3.0 * p * (1.0 - p),
                1e-13
            ));
            assert!(close(
                clique_cov(3, 1, 2, p).unwrap(),
                3.0 * (p.powi(3) - p.powi(4)),
                1e-13
            ));
        }
        assert!(close(clique_mean(4, 3, 0.5).unwrap(), 0.5, 1e-14));
        assert!(clique_cov(3, 3, 1, 0.5).is_err());
    }

    #[test]
    fn moment_bound_example() {
        assert!(close(
            moment_bound(0.5, 0.5, 1.0, 1.0, 1.0).unwrap(),
            0.25,
            1e-14
        ));
        assert!(moment_bound(1.5, 0.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn analytic_reports() {
        let r = statistic_cov_matrix(
            StatisticKind::Critical,
            &StatParams {
                n: 3,
                p: 0.5,
                d: 1,
                t_size: None,
            },
        )
        .unwrap();
        assert_eq!(r.provenance, Provenance::Analytic);
        assert!(close(r.mean[0], 0.125, 1e-14) && close(r.cov[0][0], 0.109375, 1e-14));
        let r = statistic_cov_matrix(
            StatisticKind::Link,
            &StatParams {
                n: 4,
                p: 0.5,
                d: 1,
                t_size: Some(1),
            },
        )
        .unwrap();
        assert!(close(r.mean[0], 1.5, 1e-14) && close(r.cov[0][0], 0.75, 1e-14));
    }
}
