//! Seeded simulation of standardized count vectors and estimation of their
//! distance to the matching multivariate normal.
//!
//! Replicate `r` draws its graph from a ChaCha8 stream selected by
//! `(master_seed, r)`, so any subset of replicates can be regenerated alone
//! and half-runs concatenate to the full run.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundReport, SmoothnessClass};
use crate::error::{Error, Result};
use crate::graph::{clique_count, link_count, sample_gnp_with};
use crate::moments::{self, MomentReport, StatParams};
use crate::morse::critical_counts_formula;
use crate::StatisticKind;

/// How raw counts are centred and scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Standardization {
    /// Exact means and standard deviations.
    Analytic,
    /// Sample means and standard deviations.
    Empirical,
    /// Leave raw counts untouched.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub kind: StatisticKind,
    pub params: StatParams,
    pub replicates: usize,
    pub master_seed: u64,
    pub standardization: Standardization,
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate(self.kind)?;
        if self.replicates < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                got: self.replicates,
            });
        }
        Ok(())
    }
}

/// Generator for replicate `r`.
pub fn replicate_rng(master_seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(r);
    rng
}

/// Raw count vectors of replicates `range`, one row each.
pub fn simulate_raw(cfg: &MCConfig, range: Range<usize>) -> Result<DMatrix<f64>> {
    cfg.params.validate(cfg.kind)?;
    let params = cfg.params;
    let t = match cfg.kind {
        StatisticKind::Link => Some(crate::oracle::link_base(&params)?),
        _ => None,
    };
    let rows: Vec<Vec<f64>> = range
        .clone()
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>> {
            let mut rng = replicate_rng(cfg.master_seed, r as u64);
            let g = sample_gnp_with(&mut rng, params.n, params.p);
            let counts: Vec<u64> = match cfg.kind {
                StatisticKind::Critical => critical_counts_formula(&g, params.d)?.counts().to_vec(),
                StatisticKind::Clique => cfg
                    .kind
                    .sizes(params.d)
                    .map(|s| clique_count(&g, s))
                    .collect(),
                StatisticKind::Link => {
                    let t = t.as_ref().expect("link base");
                    cfg.kind
                        .sizes(params.d)
                        .map(|s| link_count(&g, t, s))
                        .collect::<Result<_>>()?
                }
            };
            Ok(counts.into_iter().map(|c| c as f64).collect())
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(range.len(), params.d, |i, j| rows[i][j]))
}

/// Simulated raw counts and their standardized version.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub raw: DMatrix<f64>,
    pub standardized: DMatrix<f64>,
    /// Centre subtracted from each column.
    pub center: Vec<f64>,
    /// Divisor applied to each column; zero-variance columns keep 1.
    pub scale: Vec<f64>,
}

pub fn simulate_vectors(cfg: &MCConfig) -> Result<Samples> {
    cfg.validate()?;
    let raw = simulate_raw(cfg, 0..cfg.replicates)?;
    standardize(cfg.kind, &cfg.params, cfg.standardization, raw)
}

/// Analytic mean and standard deviation of each component.
pub fn analytic_center_scale(
    kind: StatisticKind,
    params: &StatParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    params.validate(kind)?;
    let (n, p) = (params.n, params.p);
    let degenerate = p == 0.0 || p == 1.0;
    let mut center = Vec::new();
    let mut sd = Vec::new();
    for a in 0..params.d {
        let (m, v) = match kind {
            StatisticKind::Critical => (
                moments::crit_mean(n, a + 1, p)?,
                if degenerate {
                    0.0
                } else {
                    moments::crit_variance(n, a + 1, p)?
                },
            ),
            StatisticKind::Clique => (
                moments::clique_mean(n, a + 2, p)?,
                moments::clique_cov(n, a + 1, a + 1, p)?,
            ),
            StatisticKind::Link => {
                let t = params.t_size.expect("validated");
                (
                    moments::link_mean(n, t, a, p)?,
                    moments::link_cov(n, t, a, a, p)?,
                )
            }
        };
        center.push(m);
        sd.push(v.max(0.0).sqrt());
    }
    Ok((center, sd))
}

fn standardize(
    kind: StatisticKind,
    params: &StatParams,
    mode: Standardization,
    raw: DMatrix<f64>,
) -> Result<Samples> {
    let d = raw.ncols();
    let (center, sd) = match mode {
        Standardization::None => (vec![0.0; d], vec![1.0; d]),
        Standardization::Analytic => analytic_center_scale(kind, params)?,
        Standardization::Empirical => {
            let cov = empirical_cov(&raw)?;
            let center = (0..d).map(|j| raw.column(j).mean()).collect();
            (
                center,
                (0..d).map(|j| cov[(j, j)].max(0.0).sqrt()).collect(),
            )
        }
    };
    let scale: Vec<f64> = sd
        .into_iter()
        .map(|s| if s > 0.0 { s } else { 1.0 })
        .collect();
    let standardized =
        DMatrix::from_fn(raw.nrows(), d, |i, j| (raw[(i, j)] - center[j]) / scale[j]);
    Ok(Samples {
        raw,
        standardized,
        center,
        scale,
    })
}

/// Unbiased sample covariance of the rows.
pub fn empirical_cov(samples: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (rows, d) = samples.shape();
    if rows < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            got: rows,
        });
    }
    let means: Vec<f64> = (0..d).map(|j| samples.column(j).mean()).collect();
    let mut cov = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let s: f64 = (0..rows)
                .map(|i| (samples[(i, a)] - means[a]) * (samples[(i, b)] - means[b]))
                .sum();
            cov[(a, b)] = s / (rows - 1) as f64;
            cov[(b, a)] = cov[(a, b)];
        }
    }
    Ok(cov)
}

/// Symmetric PSD square root. Eigenvalues down to `-1e-9 · trace` are
/// treated as zero.
pub fn psd_sqrt(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = cov.nrows();
    if cov.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "covariance is {}x{}",
            d,
            cov.ncols()
        )));
    }
    let sym = (cov + cov.transpose()) * 0.5;
    let eig = sym.clone().symmetric_eigen();
    let tol = 1e-9 * sym.trace().abs();
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if d > 0 && min < -tol {
        return Err(Error::NotPsd(min));
    }
    let roots = DVector::from_iterator(d, eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()));
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose())
}

/// Rows `Σ^{1/2} Z` with `Z` standard normal.
pub fn mvn_samples(cov: &DMatrix<f64>, replicates: usize, seed: u64) -> Result<DMatrix<f64>> {
    let root = psd_sqrt(cov)?;
    let d = cov.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = DMatrix::from_fn(replicates, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    Ok(z * root)
}

/// `h(x) = g(⟨a, x⟩ + c)` with `g` the logistic function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeFunction {
    pub direction: Vec<f64>,
    pub offset: f64,
}

impl RidgeFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let u: f64 = self
            .direction
            .iter()
            .zip(x)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            + self.offset;
        logistic(u)
    }

    /// `max |∂_i ∂_j ∂_k h| = max|g'''| · ‖a‖_∞³` with `max|g'''| = 1/8`.
    pub fn third_derivative_bound(&self) -> f64 {
        let a = self.direction.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        a.powi(3) / 8.0
    }
}

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothFamily {
    pub functions: Vec<RidgeFunction>,
}

impl SmoothFamily {
    /// Directions `2·{±e_i, ±(e_i+e_j)/2}` and offsets `{-1, 0, 1}`; every
    /// member has `|h|_3 <= 1`.
    pub fn logistic_grid(d: usize) -> Self {
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for i in 0..d {
            for sign in [1.0, -1.0] {
                let mut a = vec![0.0; d];
                a[i] = 2.0 * sign;
                dirs.push(a);
            }
            for j in i + 1..d {
                for sign in [1.0, -1.0] {
                    let mut a = vec![0.0; d];
                    a[i] = sign;
                    a[j] = sign;
                    dirs.push(a);
                }
            }
        }
        let functions = dirs
            .into_iter()
            .flat_map(|a| {
                [-1.0, 0.0, 1.0].map(|c| RidgeFunction {
                    direction: a.clone(),
                    offset: c,
                })
            })
            .collect();
        SmoothFamily { functions }
    }

    /// Largest third-derivative bound over the family.
    pub fn certificate(&self) -> f64 {
        self.functions
            .iter()
            .map(RidgeFunction::third_derivative_bound)
            .fold(0.0, f64::max)
    }
}

/// A convex set from the finite test family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConvexSet {
    Whole,
    /// `{x : lo_i <= x_i <= hi_i}`; infinite endpoints allowed.
    Rectangle {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// `{x : ⟨normal, x⟩ <= offset}`.
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
    },
}

impl ConvexSet {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ConvexSet::Whole => true,
            ConvexSet::Rectangle { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *l <= *v && *v <= *h),
            ConvexSet::Halfspace { normal, offset } => {
                normal.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() <= *offset
            }
        }
    }
}

/// Number of seeded half-space directions in [`standard_convex_family`].
pub const HALFSPACE_DIRECTIONS: usize = 16;

fn deciles(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    (1..=9).map(|q| values[((q * n) / 10).min(n - 1)]).collect()
}

/// Lower and upper orthants with corners on the per-coordinate deciles of
/// `w` (the full grid for `d <= 3`, its diagonal beyond), plus half-spaces
/// along seeded random directions cut at the deciles of the projections.
pub fn standard_convex_family(w: &DMatrix<f64>, seed: u64) -> Vec<ConvexSet> {
    let d = w.ncols();
    if w.nrows() == 0 || d == 0 {
        return vec![ConvexSet::Whole];
    }
    let grids: Vec<Vec<f64>> = (0..d)
        .map(|j| deciles(w.column(j).iter().copied().collect()))
        .collect();
    let mut family = Vec::new();
    // Corners are mixed-radix numbers over the decile grids; above three
    // coordinates only corners with a common decile index are kept.
    let codes: Vec<Vec<usize>> = if d <= 3 {
        (0..9usize.pow(d as u32))
            .map(|code| (0..d).map(|j| code / 9usize.pow(j as u32) % 9).collect())
            .collect()
    } else {
        (0..9).map(|q| vec![q; d]).collect()
    };
    for code in codes {
        let corner: Vec<f64> = grids.iter().zip(&code).map(|(g, &q)| g[q]).collect();
        family.push(ConvexSet::Rectangle {
            lo: vec![f64::NEG_INFINITY; d],
            hi: corner.clone(),
        });
        family.push(ConvexSet::Rectangle {
            lo: corner,
            hi: vec![f64::INFINITY; d],
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..HALFSPACE_DIRECTIONS {
        let mut u: Vec<f64> = (0..d)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let norm = u
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
            .max(f64::MIN_POSITIVE);
        u.iter_mut().for_each(|x| *x /= norm);
        let proj: Vec<f64> = (0..w.nrows())
            .map(|i| (0..d).map(|j| u[j] * w[(i, j)]).sum())
            .collect();
        for offset in deciles(proj) {
            family.push(ConvexSet::Halfspace {
                normal: u.clone(),
                offset,
            });
        }
    }
    family
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub estimate: f64,
    pub stderr: f64,
    pub family: String,
    pub class: SmoothnessClass,
    /// Index of the family member attaining the maximum.
    pub witness: usize,
    pub bound_used: Option<BoundReport>,
}

fn check_columns(w: &DMatrix<f64>, z: &DMatrix<f64>) -> Result<()> {
    if w.ncols() != z.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {} columns",
            w.ncols(),
            z.ncols()
        )));
    }
    if w.nrows() < 2 || z.nrows() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            got: w.nrows().min(z.nrows()),
        });
    }
    Ok(())
}

fn mean_and_var(values: impl Iterator<Item = f64>) -> (f64, f64, usize) {
    let v: Vec<f64> = values.collect();
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var, n)
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

/// Max over the family of `|mean h(W) - mean h(Z)|`, with the stderr of the
/// maximising difference.
pub fn smooth_discrepancy(
    w: &DMatrix<f64>,
    z: &DMatrix<f64>,
    family: &SmoothFamily,
) -> Result<DiscrepancyReport> {
    check_columns(w, z)?;
    if family.functions.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let (wr, zr) = (rows(w), rows(z));
    let diffs: Vec<(f64, f64)> = family
        .functions
        .par_iter()
        .map(|h| {
            let (mw, vw, nw) = mean_and_var(wr.iter().map(|x| h.eval(x)));
            let (mz, vz, nz) = mean_and_var(zr.iter().map(|x| h.eval(x)));
            ((mw - mz).abs(), (vw / nw as f64 + vz / nz as f64).sqrt())
        })
        .collect();
    Ok(pick_max(
        diffs,
        "logistic ridge functions, |h|_3 <= 1",
        SmoothnessClass::Smooth,
    ))
}

/// As [`smooth_discrepancy`] with the Gaussian side integrated exactly:
/// `⟨a, Σ^{1/2} Z⟩` is `N(0, aᵀ Σ a)`, so each expectation is a 1-D integral.
pub fn smooth_discrepancy_gaussian(
    w: &DMatrix<f64>,
    cov: &DMatrix<f64>,
    family: &SmoothFamily,
) -> Result<DiscrepancyReport> {
    if cov.nrows() != w.ncols() || cov.ncols() != w.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "covariance does not match {} columns",
            w.ncols()
        )));
    }
    if w.nrows() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            got: w.nrows(),
        });
    }
    if family.functions.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let wr = rows(w);
    let diffs: Vec<(f64, f64)> = family
        .functions
        .par_iter()
        .map(|h| {
            let a = DVector::from_column_slice(&h.direction);
            let s = (a.transpose() * cov * &a)[(0, 0)].max(0.0).sqrt();
            let gauss = gaussian_expectation(|y| logistic(s * y + h.offset));
            let (mw, vw, nw) = mean_and_var(wr.iter().map(|x| h.eval(x)));
            ((mw - gauss).abs(), (vw / nw as f64).sqrt())
        })
        .collect();
    Ok(pick_max(
        diffs,
        "logistic ridge functions, |h|_3 <= 1, exact Gaussian side",
        SmoothnessClass::Smooth,
    ))
}

/// `E f(Y)` for standard normal `Y` by composite Simpson on `[-12, 12]`.
pub fn gaussian_expectation(f: impl Fn(f64) -> f64) -> f64 {
    const STEPS: usize = 4800;
    let (lo, hi) = (-12.0f64, 12.0f64);
    let h = (hi - lo) / STEPS as f64;
    let phi = |y: f64| (-0.5 * y * y).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut total = 0.0;
    for i in 0..=STEPS {
        let y = lo + i as f64 * h;
        let weight = if i == 0 || i == STEPS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        total += weight * f(y) * phi(y);
    }
    total * h / 3.0
}

fn pick_max(diffs: Vec<(f64, f64)>, family: &str, class: SmoothnessClass) -> DiscrepancyReport {
    let (witness, &(estimate, stderr)) = diffs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("family is nonempty");
    DiscrepancyReport {
        estimate,
        stderr,
        family: family.to_string(),
        class,
        witness,
        bound_used: None,
    }
}

/// Max over `family` of the difference in empirical frequencies.
pub fn convex_discrepancy(
    w: &DMatrix<f64>,
    z: &DMatrix<f64>,
    family: &[ConvexSet],
) -> Result<DiscrepancyReport> {
    check_columns(w, z)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let (wr, zr) = (rows(w), rows(z));
    let (nw, nz) = (wr.len() as f64, zr.len() as f64);
    let diffs: Vec<(f64, f64)> = family
        .par_iter()
        .map(|set| {
            let pw = wr.iter().filter(|x| set.contains(x)).count() as f64 / nw;
            let pz = zr.iter().filter(|x| set.contains(x)).count() as f64 / nz;
            (
                (pw - pz).abs(),
                (pw * (1.0 - pw) / nw + pz * (1.0 - pz) / nz).sqrt(),
            )
        })
        .collect();
    Ok(pick_max(
        diffs,
        "orthants at deciles and seeded half-spaces",
        SmoothnessClass::Convex,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "VACUOUS-PASS")]
    VacuousPass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::VacuousPass => "VACUOUS-PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Compare an estimate with a bound of the same smoothness class.
pub fn bound_check(report: &DiscrepancyReport, bound: &BoundReport) -> Verdict {
    debug_assert_eq!(report.class, bound.smoothness_class);
    if bound.vacuous {
        Verdict::VacuousPass
    } else if report.estimate <= bound.value + 3.0 * report.stderr {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Everything one simulation run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: MCConfig,
    pub moments: MomentReport,
    pub covariance: Vec<Vec<f64>>,
    pub bounds: Vec<BoundReport>,
    pub discrepancies: Vec<DiscrepancyReport>,
    pub verdicts: Vec<Verdict>,
    /// Bounds that could not be evaluated at these parameters.
    pub notes: Vec<String>,
}

/// Bounds matching a statistic vector: smooth first, then convex.
pub fn bounds_for(kind: StatisticKind, params: &StatParams) -> Result<(BoundReport, BoundReport)> {
    let (n, p, d) = (params.n, params.p, params.d);
    match kind {
        StatisticKind::Clique => {
            let b = bounds::clique_bound(n, d, p)?;
            Ok((b.smooth, b.convex))
        }
        StatisticKind::Link => {
            let b = bounds::link_bound(n, params.t_size.unwrap_or(1), d, p)?;
            Ok((b.smooth, b.convex))
        }
        StatisticKind::Critical => {
            let smooth = bounds::crit_bound(n, d, p)?;
            let convex = bounds::convex_report(&smooth, d);
            Ok((smooth, convex))
        }
    }
}

/// Simulate, estimate the covariance (analytic standardization uses the
/// exact correlation matrix, empirical uses the sample covariance of `W`),
/// draw the matching normal sample and compare against the bounds.
pub fn run_pipeline(cfg: &MCConfig) -> Result<RunReport> {
    cfg.validate()?;
    let samples = simulate_vectors(cfg)?;
    let d = cfg.params.d;
    let moments = match cfg.kind {
        StatisticKind::Critical if cfg.params.n > moments::ORACLE_CROSS_COV_CAP => MomentReport {
            kind: cfg.kind,
            params: cfg.params,
            mean: samples.center.clone(),
            cov: {
                let c = empirical_cov(&samples.raw)?;
                (0..d)
                    .map(|a| (0..d).map(|b| c[(a, b)]).collect())
                    .collect()
            },
            provenance: moments::Provenance::Empirical,
        },
        _ => moments::statistic_cov_matrix(cfg.kind, &cfg.params)?,
    };
    let cov = match cfg.standardization {
        Standardization::Analytic => DMatrix::from_fn(d, d, |a, b| {
            moments.cov[a][b] / (samples.scale[a] * samples.scale[b])
        }),
        _ => empirical_cov(&samples.standardized)?,
    };
    let z = mvn_samples(
        &cov,
        cfg.replicates,
        cfg.master_seed ^ 0x5851_F42D_4C95_7F2D,
    )?;
    let smooth = smooth_discrepancy(&samples.standardized, &z, &SmoothFamily::logistic_grid(d))?;
    let convex = convex_discrepancy(
        &samples.standardized,
        &z,
        &standard_convex_family(&samples.standardized, cfg.master_seed),
    )?;
    let mut discrepancies = vec![smooth, convex];
    let mut report_bounds = Vec::new();
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    match bounds_for(cfg.kind, &cfg.params) {
        Ok((sb, cb)) => {
            for (disc, b) in discrepancies.iter_mut().zip([sb, cb]) {
                verdicts.push(bound_check(disc, &b));
                disc.bound_used = Some(b.clone());
                report_bounds.push(b);
            }
        }
        Err(e) => notes.push(format!("no bound evaluated: {e}")),
    }
    Ok(RunReport {
        config: *cfg,
        moments,
        covariance: (0..d)
            .map(|a| (0..d).map(|b| cov[(a, b)]).collect())
            .collect(),
        bounds: report_bounds,
        discrepancies,
        verdicts,
        notes,
    })
}

/// Rows for a CSV dump: header then one line per replicate.
pub fn sample_table(kind: StatisticKind, samples: &Samples) -> (Vec<String>, Vec<Vec<f64>>) {
    let d = samples.raw.ncols();
    let mut header: Vec<String> = kind.sizes(d).map(|s| format!("T{s}")).collect();
    header.extend((1..=d).map(|j| format!("W{j}")));
    let body = (0..samples.raw.nrows())
        .map(|i| {
            samples
                .raw
                .row(i)
                .iter()
                .chain(samples.standardized.row(i).iter())
                .copied()
                .collect()
        })
        .collect();
    (header, body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(
        kind: StatisticKind,
        n: usize,
        p: f64,
        d: usize,
        reps: usize,
        mode: Standardization,
    ) -> MCConfig {
        MCConfig {
            kind,
            params: StatParams {
                n,
                p,
                d,
                t_size: (kind == StatisticKind::Link).then_some(1),
            },
            replicates: reps,
            master_seed: 7,
            standardization: mode,
        }
    }

    #[test]
    fn complete_graph_rows() {
        let s = simulate_vectors(&cfg(
            StatisticKind::Clique,
            10,
            1.0,
            2,
            5,
            Standardization::None,
        ))
        .unwrap();
        for i in 0..5 {
            assert_eq!(
                s.raw.row(i).iter().copied().collect::<Vec<_>>(),
                vec![45.0, 120.0]
            );
        }
    }

    #[test]
    fn determinism_and_merging() {
        let c = cfg(
            StatisticKind::Critical,
            12,
            0.5,
            2,
            40,
            Standardization::Analytic,
        );
        let a = simulate_vectors(&c).unwrap();
        assert_eq!(a, simulate_vectors(&c).unwrap());
        let first = simulate_raw(&c, 0..15).unwrap();
        let second = simulate_raw(&c, 15..40).unwrap();
        for i in 0..40 {
            let row = if i < 15 {
                first.row(i)
            } else {
                second.row(i - 15)
            };
            assert_eq!(row, a.raw.row(i));
        }
    }

    #[test]
    fn empirical_cov_basics() {
        let constant = DMatrix::from_element(10, 3, 2.5);
        assert_eq!(empirical_cov(&constant).unwrap(), DMatrix::zeros(3, 3));
        assert!(matches!(
            empirical_cov(&DMatrix::zeros(1, 2)),
            Err(Error::TooFewRows { .. })
        ));
    }

    #[test]
    fn degenerate_normals() {
        let rank_one = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let z = mvn_samples(&rank_one, 1000, 3).unwrap();
        for i in 0..1000 {
            assert!((z[(i, 0)] - z[(i, 1)]).abs() < 1e-12);
        }
        assert_eq!(
            mvn_samples(&DMatrix::zeros(2, 2), 10, 1).unwrap(),
            DMatrix::zeros(10, 2)
        );
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(mvn_samples(&bad, 10, 1), Err(Error::NotPsd(_))));
    }

    #[test]
    fn family_certificate() {
        for d in 1..=4 {
            let f = SmoothFamily::logistic_grid(d);
            assert!((f.certificate() - 1.0).abs() < 1e-15);
            assert_eq!(f.functions.len(), 3 * (2 * d + d * (d - 1)));
        }
    }

    #[test]
    fn identical_samples_have_zero_discrepancy() {
        let w = mvn_samples(&DMatrix::identity(2, 2), 500, 1).unwrap();
        assert_eq!(
            smooth_discrepancy(&w, &w, &SmoothFamily::logistic_grid(2))
                .unwrap()
                .estimate,
            0.0
        );
        assert_eq!(
            convex_discrepancy(&w, &w, &standard_convex_family(&w, 3))
                .unwrap()
                .estimate,
            0.0
        );
        let z = mvn_samples(&DMatrix::identity(2, 2), 500, 2).unwrap();
        assert_eq!(
            convex_discrepancy(&w, &z, &[ConvexSet::Whole])
                .unwrap()
                .estimate,
            0.0
        );
        assert!(matches!(
            convex_discrepancy(&w, &z, &[]),
            Err(Error::EmptyFamily)
        ));
        assert!(matches!(
            smooth_discrepancy(&w, &z, &SmoothFamily { functions: vec![] }),
            Err(Error::EmptyFamily)
        ));
    }

    #[test]
    fn gaussian_quadrature() {
        assert!((gaussian_expectation(|_| 1.0) - 1.0).abs() < 1e-12);
        assert!((gaussian_expectation(|y| y * y) - 1.0).abs() < 1e-12);
        assert!((gaussian_expectation(logistic) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn verdicts() {
        let report = |e: f64, s: f64| DiscrepancyReport {
            estimate: e,
            stderr: s,
            family: String::new(),
            class: SmoothnessClass::Smooth,
            witness: 0,
            bound_used: None,
        };
        let bound = |v: f64| BoundReport {
            name: "x".into(),
            value: v,
            rate_exponent: None,
            vacuous: v >= 2.0,
            params: Default::default(),
            smoothness_class: SmoothnessClass::Smooth,
        };
        assert_eq!(bound_check(&report(0.01, 0.0), &bound(0.5)), Verdict::Pass);
        assert_eq!(
            bound_check(&report(0.3, 0.0), &bound(12.0)),
            Verdict::VacuousPass
        );
        assert_eq!(bound_check(&report(0.5, 0.01), &bound(0.1)), Verdict::Fail);
    }
}
