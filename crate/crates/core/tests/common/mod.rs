#![allow(dead_code)]

use levy_nmf::{FactorPair, NonnegMatrix};
use ndarray::Array2;
use levy_nmf::random::{seeded, SeededRng};
use rand::Rng;

pub fn rng(seed: u64) -> SeededRng {
    seeded(seed)
}

/// Kolmogorov-Smirnov distance between a sample and a continuous cdf.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn uniform_matrix(r: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> NonnegMatrix<f64> {
    NonnegMatrix::new(Array2::from_shape_fn((rows, cols), |_| r.random_range(lo..hi))).unwrap()
}

pub fn random_factors(r: &mut impl Rng, rows: usize, cols: usize, rank: usize) -> FactorPair<f64> {
    FactorPair::new(
        uniform_matrix(r, rows, rank, 0.1, 2.0),
        uniform_matrix(r, rank, cols, 0.1, 2.0),
    )
    .unwrap()
}

/// `X = (WH)²`, an exact Lévy fixed point for `factors`.
pub fn squared_product(factors: &FactorPair<f64>) -> NonnegMatrix<f64> {
    factors.product().map(|v| v * v).unwrap()
}

pub fn max_rel_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}
