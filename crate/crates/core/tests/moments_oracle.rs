use cliquenorm::moments::{
    clique_cov, clique_mean, crit_mean, crit_mean_bounds, crit_tail_bound, crit_variance,
    crit_variance_lower, link_cov, link_cov_lower, link_mean, min_eigenvalue, statistic_cov_matrix,
    CritMomentTerms, Provenance, StatParams,
};
use cliquenorm::oracle::{exact_distribution, exact_moments};
use cliquenorm::verify::rel_close;
use cliquenorm::StatisticKind;
use proptest::prelude::*;

#[test]
fn small_exact_values() {
    assert_eq!(crit_mean(3, 1, 0.5).unwrap(), 0.125);
    assert_eq!(link_mean(5, 2, 1, 0.5).unwrap(), 0.09375);
    assert_eq!(link_mean(4, 1, 0, 0.5).unwrap(), 1.5);
    assert_eq!(link_mean(6, 2, 1, 1.0).unwrap(), 6.0);
    assert_eq!(clique_mean(3, 2, 0.5).unwrap(), 1.5);
    assert_eq!(clique_mean(3, 3, 0.5).unwrap(), 0.125);
    assert!(rel_close(clique_cov(3, 1, 1, 0.5).unwrap(), 0.75, 1e-15));
}

#[test]
fn link_of_one_vertex_is_binomial() {
    let dist = exact_distribution(
        StatisticKind::Link,
        &StatParams {
            n: 3,
            p: 0.5,
            d: 1,
            t_size: Some(1),
        },
    )
    .unwrap();
    assert_eq!(dist.pmf(&[0]), 0.25);
    assert_eq!(dist.pmf(&[1]), 0.5);
    assert_eq!(dist.pmf(&[2]), 0.25);
}

#[test]
fn critical_pmf_on_three_vertices() {
    let dist = exact_distribution(
        StatisticKind::Critical,
        &StatParams {
            n: 3,
            p: 0.5,
            d: 1,
            t_size: None,
        },
    )
    .unwrap();
    assert_eq!(dist.pmf(&[0]), 0.875);
    assert_eq!(dist.pmf(&[1]), 0.125);
    let total: f64 = dist.probabilities.iter().sum();
    assert!((total - 1.0).abs() < 1e-15);
}

#[test]
fn vertex_statistics_vanish() {
    let t = CritMomentTerms::new(10, 1, 0.4).unwrap();
    assert_eq!(t.eta(1), 0.0);
    assert!(t.v4() >= 0.0);
}

#[test]
fn analytic_moments_match_enumeration_at_six_vertices() {
    for kind in [
        StatisticKind::Critical,
        StatisticKind::Clique,
        StatisticKind::Link,
    ] {
        let params = StatParams {
            n: 6,
            p: 0.35,
            d: 2,
            t_size: (kind == StatisticKind::Link).then_some(2),
        };
        let exact = exact_moments(kind, &params).unwrap();
        let analytic = statistic_cov_matrix(kind, &params).unwrap();
        assert_eq!(exact.provenance, Provenance::ExactOracle);
        for a in 0..2 {
            assert!(
                rel_close(analytic.mean[a], exact.mean[a], 1e-10),
                "{kind} mean {a}"
            );
            for b in 0..2 {
                assert!(
                    rel_close(analytic.cov[a][b], exact.cov[a][b], 1e-10),
                    "{kind} cov {a}{b}"
                );
            }
        }
    }
}

#[test]
fn critical_variance_grows_like_n_squared() {
    let ratios: Vec<f64> = [50usize, 100, 200]
        .iter()
        .map(|&n| crit_variance(n, 1, 0.5).unwrap() / (n * n) as f64)
        .collect();
    assert!(
        ratios.windows(2).all(|w| w[1] > w[0] && w[1] / w[0] < 1.1),
        "{ratios:?}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn crit_mean_within_elementary_bounds(n in 3usize..60, k in 1usize..4, p in 0.05..0.95f64) {
        prop_assume!(k < n);
        let m = crit_mean(n, k, p).unwrap();
        let (lo, hi) = crit_mean_bounds(n, k, p).unwrap();
        prop_assert!(lo <= m * (1.0 + 1e-12) && m <= hi * (1.0 + 1e-12), "{lo} <= {m} <= {hi}");
    }

    #[test]
    fn crit_variance_dominates_its_lower_bound(n in 3usize..80, k in 1usize..3, p in 0.05..0.95f64) {
        prop_assume!(k < n);
        let v = crit_variance(n, k, p).unwrap();
        prop_assert!(v >= -1e-9 * v.abs().max(1.0));
        prop_assert!(crit_variance_lower(n, k, p).unwrap() <= v * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn tail_bound_decreases_in_threshold(n in 5usize..60, k in 1usize..3, p in 0.05..0.95f64) {
        prop_assume!(k < n);
        let b: Vec<f64> = (1..=n - k).map(|t| crit_tail_bound(n, k, p, t).unwrap()).collect();
        prop_assert!(b.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn link_cov_dominates_lower(n in 3usize..40, t in 1usize..3, k in 0usize..4, l in 0usize..4, p in 0.05..0.95f64) {
        prop_assume!(k.max(l) + 1 + t <= n);
        let c = link_cov(n, t, k, l, p).unwrap();
        prop_assert!(link_cov_lower(n, t, k, l, p).unwrap() <= c * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn clique_covariance_is_psd(n in 3usize..40, d in 1usize..4, p in 0.05..0.95f64) {
        prop_assume!(d < n);
        let m = statistic_cov_matrix(StatisticKind::Clique, &StatParams { n, p, d, t_size: None }).unwrap();
        let scale = m.cov.iter().enumerate().map(|(i, r)| r[i]).fold(0.0, f64::max);
        prop_assert!(min_eigenvalue(&m.cov) >= -1e-9 * scale);
    }

    #[test]
    fn link_covariance_is_psd(n in 3usize..40, t in 1usize..3, d in 1usize..4, p in 0.05..0.95f64) {
        prop_assume!(t + d <= n);
        let m = statistic_cov_matrix(StatisticKind::Link, &StatParams { n, p, d, t_size: Some(t) }).unwrap();
        let scale = m.cov.iter().enumerate().map(|(i, r)| r[i]).fold(0.0, f64::max);
        prop_assert!(min_eigenvalue(&m.cov) >= -1e-9 * scale.max(1e-300));
    }

    #[test]
    fn clique_cov_is_symmetric(n in 3usize..30, i in 1usize..4, j in 1usize..4, p in 0.05..0.95f64) {
        prop_assume!(i.max(j) < n);
        prop_assert_eq!(clique_cov(n, i, j, p).unwrap(), clique_cov(n, j, i, p).unwrap());
    }
}

#[test]
fn infeasible_parameters_are_rejected() {
    assert!(crit_mean(3, 3, 0.5).is_err());
    assert!(crit_variance(5, 1, 1.5).is_err());
    assert!(StatParams {
        n: 4,
        p: 0.5,
        d: 2,
        t_size: Some(3)
    }
    .validate(StatisticKind::Link)
    .is_err());
    assert!(StatParams {
        n: 4,
        p: 0.5,
        d: 2,
        t_size: None
    }
    .validate(StatisticKind::Link)
    .is_err());
    assert!(StatParams {
        n: 4,
        p: -0.1,
        d: 1,
        t_size: None
    }
    .validate(StatisticKind::Clique)
    .is_err());
}
