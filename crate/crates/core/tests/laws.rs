use num_complex::Complex64;
use num_traits::ToPrimitive;

use rmt_lab::combinatorics::{gue_moment_exact, mixed_gue_moment_limit};
use rmt_lab::edge::edge_statistic_mc;
use rmt_lab::ensembles::{sample, EnsembleSpec, EntryLaw};
use rmt_lab::harer_zagier::lambda_max_tail_optimized;
use rmt_lab::parallel::{map_trials, mean_and_se};
use rmt_lab::paths::{dyson_crossing_check, dyson_trajectory};
use rmt_lab::spectral::{
    esd_histogram, hermitian_eigenvalues, resolvent_trace_variance, semicircle_cdf, semicircle_stieltjes,
    SpectralMeasure, DEFAULT_TOL,
};

const SEED: u64 = 7_331;

#[test]
fn goe_entry_variances() {
    let n = 8;
    let spec = EnsembleSpec::goe(n).with_normalization(rmt_lab::ensembles::Normalization::Unnormalized).with_seed(SEED);
    let draws = map_trials(4000, |t| {
        let m = sample(&spec, t)?.entries;
        Ok((m[(0, 0)].re, m[(0, 1)].re))
    })
    .unwrap();
    let var = |xs: Vec<f64>| xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
    let diag = var(draws.iter().map(|d| d.0).collect());
    let off = var(draws.iter().map(|d| d.1).collect());
    assert!((diag - 2.0).abs() < 0.15, "diag {diag}");
    assert!((off - 1.0).abs() < 0.08, "off {off}");
}

#[test]
fn gue_trace_of_square_at_fifty() {
    let spec = EnsembleSpec::gue(50).with_seed(SEED);
    let xs = map_trials(2000, |t| {
        let m = sample(&spec, t)?.entries;
        Ok(m.matmul(&m).trace().re / 50.0)
    })
    .unwrap();
    let (mean, se) = mean_and_se(&xs);
    assert!(((mean - 1.0) / se).abs() < 5.0, "mean {mean} se {se}");
}

#[test]
fn wigner_laws_follow_the_semicircle() {
    for law in [EntryLaw::Rademacher, EntryLaw::UniformSymmetric] {
        let m = sample(&EnsembleSpec::wigner(800, law).with_seed(SEED), 0).unwrap();
        let eigs = hermitian_eigenvalues(&m.entries, DEFAULT_TOL).unwrap();
        let h = esd_histogram(&eigs, 40, (-2.0, 2.0)).unwrap();
        assert!(h.l1_distance_to_cdf(semicircle_cdf) < 0.08, "{law:?}");
    }
}

#[test]
fn esd_at_three_thousand() {
    let m = sample(&EnsembleSpec::gue(3000).with_seed(SEED), 0).unwrap();
    let eigs = hermitian_eigenvalues(&m.entries, DEFAULT_TOL).unwrap();
    let h = esd_histogram(&eigs, 60, (-2.0, 2.0)).unwrap();
    assert!(h.l1_distance_to_cdf(semicircle_cdf) <= 0.05);
}

#[test]
fn resolvent_variance_shrinks_with_n() {
    let z = Complex64::new(0.0, 2.0);
    let small = resolvent_trace_variance(&EnsembleSpec::goe(50).with_seed(SEED), z, 400).unwrap();
    let big = resolvent_trace_variance(&EnsembleSpec::goe(100).with_seed(SEED), z, 400).unwrap();
    assert!(big.variance <= 0.02);
    // variance decays like N^{-2}
    let ratio = big.variance / small.variance;
    assert!(ratio > 0.1 && ratio < 0.5, "ratio {ratio}");
    assert!((small.mean - semicircle_stieltjes(z).unwrap()).norm() < 0.02);
}

#[test]
fn largest_eigenvalue_approaches_the_edge() {
    let mut gaps = Vec::new();
    for (n, trials) in [(50usize, 300usize), (200, 100)] {
        let s = edge_statistic_mc(&EnsembleSpec::gue(n).with_seed(SEED), trials).unwrap();
        let scale = (n as f64).cbrt().powi(2);
        gaps.push(s.iter().map(|v| (v / scale).abs()).sum::<f64>() / s.len() as f64);
    }
    assert!(gaps[1] < gaps[0], "{gaps:?}");
}

#[test]
fn tail_bound_dominates_frequency() {
    let s = edge_statistic_mc(&EnsembleSpec::gue(60).with_seed(SEED), 500).unwrap();
    for t in [0.5, 1.0, 2.0] {
        let p = s.iter().filter(|&&v| v >= t).count() as f64 / s.len() as f64;
        let bound = lambda_max_tail_optimized(t, 60).unwrap();
        assert!(p <= bound.at_n + 3.0 * (p * (1.0 - p) / 500.0).sqrt(), "t={t}");
    }
}

#[test]
fn dyson_paths_do_not_cross() {
    let traj = dyson_trajectory(&EnsembleSpec::gue(15).with_seed(SEED), 1500, 0.05, 0).unwrap();
    let check = dyson_crossing_check(&traj);
    assert_eq!(check.violations, 0);
    assert!(check.min_spacing > 0.0);
}

#[test]
fn exact_moments_match_relabeled_colors() {
    let a = mixed_gue_moment_limit(&[1, 1, 2, 2, 1, 2]);
    let b = mixed_gue_moment_limit(&['x', 'x', 'y', 'y', 'x', 'y']);
    let c = mixed_gue_moment_limit(&[2, 2, 1, 1, 2, 1]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn genus_coefficients_sum_to_pairing_count() {
    for m in (2..=16).step_by(2) {
        let total = gue_moment_exact(m).unwrap().total().to_u64().unwrap();
        let dfact: u64 = (1..m as u64).step_by(2).product();
        assert_eq!(total, dfact, "m={m}");
    }
}

#[test]
fn circular_measure_moments_vanish() {
    let m = SpectralMeasure::CircularUniform;
    for k in 1..6 {
        assert!(m.moment(k).unwrap().norm() < 1e-8);
    }
}

#[test]
fn stieltjes_maps_upper_half_plane_to_itself() {
    let mp = SpectralMeasure::marchenko_pastur(0.5).unwrap();
    for re in [-3.0, -1.0, 0.0, 0.7, 2.0, 4.0] {
        for im in [0.01, 0.3, 2.0] {
            let z = Complex64::new(re, im);
            assert!(semicircle_stieltjes(z).unwrap().im > 0.0);
            assert!(SpectralMeasure::Semicircle.stieltjes(z).unwrap().im > 0.0);
            assert!(mp.stieltjes(z).unwrap().im > 0.0);
        }
    }
}
