mod common;

use common::{ks_one_sample, ks_two_sample, rng};
use levy_nmf::stable::{levy_cdf, levy_log_pdf, levy_pdf, sample_levy, sample_pas, scale_of_sum};
use levy_nmf::StableParams;
use proptest::prelude::*;

/// Composite Simpson over `t = ln x`, so the heavy right tail is covered.
fn log_grid_integral(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    let h = (b - a) / n as f64;
    let g = |t: f64| f(t.exp()) * t.exp();
    let mut acc = g(a) + g(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn pdf_integrates_to_one() {
    for sigma in [0.5, 1.0, 3.0] {
        let mass = log_grid_integral(|x| levy_pdf(x, sigma).unwrap(), 1e-6, 1e8, 20_000);
        assert!((0.999..=1.0).contains(&mass), "sigma={sigma}: mass {mass}");
    }
}

#[test]
fn cdf_derivative_is_pdf() {
    for sigma in [0.3f64, 1.0, 4.0] {
        for x in [0.05, 0.2, 1.0, 3.0, 10.0, 50.0] {
            let h = 1e-4 * x;
            let slope = (levy_cdf(x + h, sigma).unwrap() - levy_cdf(x - h, sigma).unwrap()) / (2.0 * h);
            let pdf = levy_pdf(x, sigma).unwrap();
            assert!((slope - pdf).abs() <= 1e-4 * pdf, "sigma={sigma} x={x}: {slope} vs {pdf}");
        }
    }
}

#[test]
fn levy_draws_follow_the_cdf() {
    let mut r = rng(11);
    let sigma = 2.5;
    let draws: Vec<f64> = (0..20_000).map(|_| sample_levy(sigma, &mut r)).collect();
    let d = ks_one_sample(&draws, |x| levy_cdf(x, sigma).unwrap());
    assert!(d < 0.015, "KS {d}");
}

#[test]
fn half_stable_draws_match_levy_draws() {
    let mut r = rng(12);
    let params = StableParams::new(0.5, 1.7).unwrap();
    let pas: Vec<f64> = (0..20_000).map(|_| sample_pas(params, &mut r)).collect();
    let d = ks_one_sample(&pas, |x| levy_cdf(x, 1.7).unwrap());
    assert!(d < 0.015, "KS {d}");
}

#[test]
fn sums_of_stable_draws_are_stable() {
    let mut r = rng(13);
    for alpha in [0.3, 0.5, 0.8] {
        let sigmas = [0.5, 1.0, 2.0];
        let combined = scale_of_sum(&sigmas, alpha).unwrap();
        let n = 20_000;
        let sums: Vec<f64> = (0..n)
            .map(|_| {
                sigmas
                    .iter()
                    .map(|&s| sample_pas(StableParams::new(alpha, s).unwrap(), &mut r))
                    .sum()
            })
            .collect();
        let direct: Vec<f64> = (0..n)
            .map(|_| sample_pas(StableParams::new(alpha, combined).unwrap(), &mut r))
            .collect();
        let d = ks_two_sample(&sums, &direct);
        assert!(d < 0.025, "alpha={alpha}: KS {d}");
    }
}

#[test]
fn extreme_alpha_draws_stay_finite_and_positive() {
    let mut r = rng(14);
    for alpha in [0.05, 0.95] {
        let p = StableParams::new(alpha, 1.0f64).unwrap();
        for _ in 0..2_000 {
            let v: f64 = sample_pas(p, &mut r);
            assert!(v.is_finite() && v > 0.0);
        }
    }
}

proptest! {
    #[test]
    fn cdf_is_a_distribution_function(sigma in 1e-3f64..1e3, a in 1e-4f64..1e4, b in 1e-4f64..1e4) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (fl, fh) = (levy_cdf(lo, sigma).unwrap(), levy_cdf(hi, sigma).unwrap());
        prop_assert!((0.0..=1.0).contains(&fl) && (0.0..=1.0).contains(&fh));
        prop_assert!(fl <= fh);
    }

    #[test]
    fn scale_family(sigma in 1e-2f64..1e2, x in 1e-2f64..1e2) {
        let scaled = levy_cdf(x, sigma).unwrap();
        let unit = levy_cdf(x / sigma, 1.0).unwrap();
        prop_assert!((scaled - unit).abs() <= 1e-12);
        let lp = levy_log_pdf(x, sigma).unwrap();
        let lp_unit = levy_log_pdf(x / sigma, 1.0).unwrap() - sigma.ln();
        prop_assert!((lp - lp_unit).abs() <= 1e-10 * (1.0 + lp.abs()));
    }

    #[test]
    fn combined_scale_is_homogeneous(
        sigmas in prop::collection::vec(1e-2f64..1e2, 1..6),
        alpha in 0.05f64..0.95,
        c in 1e-2f64..1e2,
    ) {
        let base = scale_of_sum(&sigmas, alpha).unwrap();
        let scaled: Vec<f64> = sigmas.iter().map(|s| s * c).collect();
        let got = scale_of_sum(&scaled, alpha).unwrap();
        prop_assert!((got - c * base).abs() <= 1e-9 * c * base);
        prop_assert!(base >= sigmas.iter().cloned().fold(0.0, f64::max) * (1.0 - 1e-12));
    }
}
