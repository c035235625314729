mod common;

use levy_nmf::experiments::{
    corrupt_impulsive, gen_fluorescence_mixture, gen_harmonic_spectrogram, gen_pas_observations,
    gen_sparse_factors, run_fluor_experiment, run_impulsive_bench, run_inpaint_experiment,
    BenchConfig, FluorescenceMixture, BENCH_ALGORITHMS, INPAINT_ALGORITHMS,
};
use levy_nmf::{FactorPair, NonnegMatrix};
use rand_distr::{Distribution, StandardNormal};

fn kurtosis(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let m2 = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2)
}

fn unit_scale_factors(rows: usize, cols: usize) -> FactorPair<f64> {
    FactorPair::new(
        NonnegMatrix::filled(rows, 1, 1.0).unwrap(),
        NonnegMatrix::filled(1, cols, 1.0).unwrap(),
    )
    .unwrap()
}

fn sorted(m: &NonnegMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.iter().collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn sparse_factor_entries_are_heavy_tailed() {
    let f: FactorPair<f64> = gen_sparse_factors(100, 100, 50, 3).unwrap();
    let entries: Vec<f64> = f.w().iter().chain(f.h().iter()).collect();
    assert!(entries.iter().all(|&v| v >= 0.0));
    let mut r = common::rng(4);
    let folded: Vec<f64> = (0..entries.len())
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut r);
            g.abs()
        })
        .collect();
    let (k_sparse, k_folded) = (kurtosis(&entries), kurtosis(&folded));
    assert!(k_sparse > 10.0 * k_folded, "{k_sparse} vs {k_folded}");
}

#[test]
fn half_stable_observations_have_levy_median() {
    let x = gen_pas_observations(&unit_scale_factors(100, 100), 0.5, 21).unwrap();
    let v = sorted(&x);
    assert!(v[0] > 0.0);
    let median = 0.5 * (v[4999] + v[5000]);
    assert!((median - 2.198).abs() < 0.15, "median {median}");
}

#[test]
fn smaller_alpha_is_more_impulsive() {
    let ratio = |alpha: f64| {
        let v = sorted(&gen_pas_observations(&unit_scale_factors(100, 100), alpha, 22).unwrap());
        v[9899] / v[4999]
    };
    assert!(ratio(0.1) > ratio(0.5));
}

#[test]
fn tenth_of_fifty_by_fifty_is_250_cells() {
    let x = gen_pas_observations(&gen_sparse_factors(50, 50, 5, 1).unwrap(), 0.5, 2).unwrap();
    let (_, mask) = corrupt_impulsive(&x, 0.1, 3).unwrap();
    assert_eq!(mask.iter().filter(|&m| m == 0.0).count(), 250);
    assert_eq!(mask.iter().filter(|&m| m == 1.0).count(), 2250);
}

#[test]
fn noiseless_fluorescence_mixture_has_rank_three() {
    let mix: FluorescenceMixture<f64> = gen_fluorescence_mixture(128, 60, 3, 5).unwrap();
    assert!(mix.x.iter().all(|v| v >= 0.0));
    let clean = mix.spectra.as_array().dot(mix.concentrations.as_array());
    let m = nalgebra::DMatrix::from_fn(clean.nrows(), clean.ncols(), |r, c| clean[[r, c]]);
    let mut sv = m.singular_values().as_slice().to_vec();
    sv.sort_by(|a, b| b.total_cmp(a));
    assert!(sv[2] > 1e-6 * sv[0]);
    assert!(sv[3] < 1e-10 * sv[0], "{:?}", &sv[..5]);
}

#[test]
fn bench_is_complete_and_deterministic() {
    let cfg = BenchConfig {
        alphas: vec![0.3, 0.5],
        rows: 12,
        cols: 10,
        rank: 2,
        iterations: 20,
        runs: 3,
        seed: 9,
    };
    let a = run_impulsive_bench(&cfg).unwrap();
    assert_eq!(a.len(), BENCH_ALGORITHMS.len() * 2 * 3);
    assert!(a.iter().all(|r| r.log_alpha_dispersion.is_finite() && r.log_kl.is_finite()));
    assert_eq!(a, run_impulsive_bench(&cfg).unwrap());
    let other = run_impulsive_bench(&BenchConfig { seed: 10, ..cfg }).unwrap();
    assert_ne!(a, other);
}

#[test]
fn clean_input_inpaints_better_than_corrupted() {
    let spec: NonnegMatrix<f64> = gen_harmonic_spectrogram(40, 3).unwrap();
    let clean = run_inpaint_experiment(&spec, 0.0, 8, 40, 1).unwrap();
    let dirty = run_inpaint_experiment(&spec, 0.1, 8, 40, 1).unwrap();
    assert_eq!(clean.corrupted, 0);
    assert_eq!(dirty.corrupted, spec.len() / 10);
    for alg in INPAINT_ALGORITHMS {
        assert!(clean.get(alg).unwrap() < dirty.get(alg).unwrap(), "{alg}");
    }
    assert_eq!(dirty.levy_estimate.dim(), spec.dim());
    assert_eq!(dirty, run_inpaint_experiment(&spec, 0.1, 8, 40, 1).unwrap());
}

#[test]
fn fluorescence_report_shape_and_range() {
    let a = run_fluor_experiment::<f64>(48, 30, 4, 10).unwrap();
    assert_eq!(a.correlations.len(), 3);
    for (_, per_source) in &a.correlations {
        assert_eq!(per_source.len(), 3);
        assert!(per_source.iter().all(|c| (-1.0..=1.0).contains(c)));
    }
    assert_eq!(a, run_fluor_experiment::<f64>(48, 30, 4, 10).unwrap());
}
