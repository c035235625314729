//! Positive α-stable laws with zero location and full skewness.
//!
//! The scale parameter follows the usual stable parametrization in which
//! independent sums combine as `σ^α = Σ σ_k^α`. At `α = ½` the law is the
//! Lévy distribution with the closed-form density
//! `√(σ/2π) x^{-3/2} exp(-σ/2x)`.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const U_CLAMP: f64 = 1e-12;
const E_FLOOR: f64 = 1e-300;

/// Shape and scale of a positive α-stable law (`0 < α < 1`, `σ > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams<S> {
    alpha: S,
    sigma: S,
}

impl<S: Scalar> StableParams<S> {
    pub fn new(alpha: S, sigma: S) -> Result<Self> {
        check_alpha(alpha)?;
        check_sigma(sigma)?;
        Ok(Self { alpha, sigma })
    }

    /// The Lévy law with scale `sigma`.
    pub fn levy(sigma: S) -> Result<Self> {
        Self::new(S::of(0.5), sigma)
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn sigma(&self) -> S {
        self.sigma
    }
}

pub(crate) fn check_alpha<S: Scalar>(alpha: S) -> Result<()> {
    if alpha > S::zero() && alpha < S::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn check_sigma<S: Scalar>(sigma: S) -> Result<()> {
    if sigma > S::zero() && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("scale must be positive and finite, got {sigma}")))
    }
}

/// Lévy density; exactly zero for `x <= 0`.
pub fn levy_pdf<S: Scalar>(x: S, sigma: S) -> Result<S> {
    check_sigma(sigma)?;
    if x <= S::zero() {
        return Ok(S::zero());
    }
    let two = S::of(2.0);
    Ok((sigma / (two * S::PI())).sqrt() * x.powf(S::of(-1.5)) * (-sigma / (two * x)).exp())
}

/// Natural log of the Lévy density, defined for `x > 0` only.
///
/// Stays finite far in the tail where [`levy_pdf`] underflows; likelihood
/// code must use this form.
pub fn levy_log_pdf<S: Scalar>(x: S, sigma: S) -> Result<S> {
    check_sigma(sigma)?;
    if !(x > S::zero()) {
        return Err(Error::domain(format!(
            "log-density is -inf outside the support, got x = {x}"
        )));
    }
    let half = S::of(0.5);
    let two = S::of(2.0);
    Ok(half * sigma.ln() - half * (two * S::PI()).ln() - S::of(1.5) * x.ln() - sigma / (two * x))
}

/// Lévy distribution function `erfc(√(σ/2x))`.
pub fn levy_cdf<S: Scalar>(x: S, sigma: S) -> Result<S> {
    check_sigma(sigma)?;
    if x <= S::zero() {
        return Ok(S::zero());
    }
    let arg = (sigma.as_f64() / (2.0 * x.as_f64())).sqrt();
    Ok(S::of(libm::erfc(arg)))
}

/// One Lévy draw `σ / Z²` with `Z` standard normal.
pub fn sample_levy<S: Scalar, R: Rng + ?Sized>(sigma: S, rng: &mut R) -> S {
    let z: f64 = StandardNormal.sample(rng);
    let value = sigma.as_f64() / (z * z);
    finite_positive(value)
}

/// One positive α-stable draw by Kanter's representation.
///
/// With `U` uniform on (0,1) and `E` unit exponential,
/// `(a(U)/E)^{(1-α)/α}` has Laplace transform `exp(-s^α)`, where
/// `a(u) = sin((1-α)πu) sin(απu)^{α/(1-α)} / sin(πu)^{1/(1-α)}`.
/// Multiplying by `σ cos(πα/2)^{-1/α}` gives scale `σ`, which at `α = ½`
/// reproduces the Lévy law `L(σ)` exactly.
pub fn sample_pas<S: Scalar, R: Rng + ?Sized>(params: StableParams<S>, rng: &mut R) -> S {
    let alpha = params.alpha.as_f64();
    let sigma = params.sigma.as_f64();
    let u = rng.random::<f64>().clamp(U_CLAMP, 1.0 - U_CLAMP);
    let e: f64 = Exp1.sample(rng);
    let e = e.max(E_FLOOR);
    let value = (kanter_log_a(alpha, u) - e.ln()) * (1.0 - alpha) / alpha + sigma.ln()
        - (std::f64::consts::FRAC_PI_2 * alpha).cos().ln() / alpha;
    finite_positive(value.exp())
}

/// `ln a(u)` for Kanter's function.
fn kanter_log_a(alpha: f64, u: f64) -> f64 {
    use std::f64::consts::PI;
    let beta = 1.0 - alpha;
    (beta * PI * u).sin().ln() + alpha / beta * (alpha * PI * u).sin().ln()
        - (PI * u).sin().ln() / beta
}

fn finite_positive<S: Scalar>(value: f64) -> S {
    let v = S::of(value);
    if v.is_finite() {
        v.max(S::min_positive_value())
    } else {
        S::max_value()
    }
}

/// Scale of a sum of independent positive α-stable variables: `(Σ σ_k^α)^{1/α}`.
pub fn scale_of_sum<S: Scalar>(sigmas: &[S], alpha: S) -> Result<S> {
    check_alpha(alpha)?;
    if sigmas.is_empty() {
        return Err(Error::domain("scale_of_sum needs at least one scale"));
    }
    for &s in sigmas {
        check_sigma(s)?;
    }
    let total: S = sigmas.iter().map(|s| s.powf(alpha)).sum();
    Ok(total.powf(alpha.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pdf_zero_off_support() {
        assert_eq!(levy_pdf(-1.0, 1.0).unwrap(), 0.0);
        assert_eq!(levy_pdf(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn pdf_at_one() {
        // √(1/2π)·e^{-1/2}
        let expected = (1.0 / (2.0 * std::f64::consts::PI)).sqrt() * (-0.5f64).exp();
        assert_relative_eq!(levy_pdf(1.0, 1.0).unwrap(), expected, max_relative = 1e-14);
        assert_relative_eq!(levy_pdf(1.0, 1.0).unwrap(), 0.241971, epsilon = 1e-6);
    }

    #[test]
    fn pdf_mode_is_sigma_over_three() {
        for &sigma in &[0.3, 1.0, 3.0, 12.0] {
            let mode: f64 = sigma / 3.0;
            let at = levy_pdf(mode, sigma).unwrap();
            for &d in &[1e-3, 1e-2, 1e-1] {
                assert!(at > levy_pdf(mode * (1.0 + d), sigma).unwrap());
                assert!(at > levy_pdf(mode * (1.0 - d), sigma).unwrap());
            }
        }
    }

    #[test]
    fn pdf_rejects_bad_sigma() {
        assert!(levy_pdf(1.0, 0.0).is_err());
        assert!(levy_pdf(1.0, -2.0).is_err());
        assert!(levy_cdf(1.0, 0.0).is_err());
        assert!(levy_log_pdf(1.0, -1.0).is_err());
    }

    #[test]
    fn log_pdf_values() {
        assert_relative_eq!(levy_log_pdf(1.0, 1.0).unwrap(), -1.418939, epsilon = 1e-6);
        assert_relative_eq!(
            levy_log_pdf(1.0, 3.0).unwrap(),
            levy_pdf(1.0f64, 3.0).unwrap().ln(),
            max_relative = 1e-12
        );
        let far = levy_log_pdf(1e6f64, 1.0).unwrap();
        assert!(far.is_finite());
        assert_relative_eq!(far, -21.6422, epsilon = 1e-3);
        assert!(levy_log_pdf(0.0, 1.0).is_err());
        assert!(levy_log_pdf(-3.0, 1.0).is_err());
    }

    #[test]
    fn log_pdf_matches_pdf() {
        for i in 0..40 {
            let x = 10f64.powf(-2.0 + i as f64 * 0.15);
            for &sigma in &[0.1, 1.0, 7.0] {
                let p = levy_pdf(x, sigma).unwrap();
                if p > 1e-300 {
                    assert_relative_eq!(
                        levy_log_pdf(x, sigma).unwrap().exp(),
                        p,
                        max_relative = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn cdf_values() {
        assert_eq!(levy_cdf(0.0, 5.0).unwrap(), 0.0);
        assert_eq!(levy_cdf(-1.0, 5.0).unwrap(), 0.0);
        assert_relative_eq!(levy_cdf(2.19811, 1.0).unwrap(), 0.5, epsilon = 1e-5);
        assert_relative_eq!(levy_cdf(2.19811 * 4.0, 4.0).unwrap(), 0.5, epsilon = 1e-5);
        assert!(levy_cdf(1e14, 1.0).unwrap() > 1.0 - 1e-6);
        assert!(levy_cdf(f64::MAX, 1.0).unwrap() == 1.0);
    }

    #[test]
    fn cdf_is_non_decreasing() {
        let mut prev = 0.0;
        for i in 0..200 {
            let x = 10f64.powf(-3.0 + i as f64 * 0.05);
            let c = levy_cdf(x, 1.0).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn erfc_accuracy_on_zero_to_six() {
        // Reference values of erfc from tables to 16 digits.
        let table = [
            (0.0, 1.0),
            (0.5, 0.4795001221869535),
            (1.0, 0.15729920705028513),
            (2.0, 0.004677734981047266),
            (3.0, 2.209049699858544e-5),
            (6.0, 2.1519736712498913e-17),
        ];
        for (x, want) in table {
            assert!((libm::erfc(x) - want).abs() < 1e-12, "erfc({x})");
        }
    }

    #[test]
    fn scale_of_sum_examples() {
        assert_relative_eq!(scale_of_sum(&[3.5], 0.3).unwrap(), 3.5, max_relative = 1e-14);
        assert_relative_eq!(scale_of_sum(&[1.0, 1.0], 0.5).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(scale_of_sum(&[4.0, 9.0], 0.5).unwrap(), 25.0, max_relative = 1e-14);
        assert!(scale_of_sum::<f64>(&[], 0.5).is_err());
        assert!(scale_of_sum(&[1.0, -1.0], 0.5).is_err());
        assert!(scale_of_sum(&[1.0], 1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(StableParams::new(0.5, 1.0).is_ok());
        assert!(StableParams::new(0.0, 1.0).is_err());
        assert!(StableParams::new(1.0, 1.0).is_err());
        assert!(StableParams::new(0.5, 0.0).is_err());
        assert_eq!(StableParams::<f32>::levy(2.0).unwrap().alpha(), 0.5);
    }

    #[test]
    fn draws_are_positive_and_seeded() {
        let mut a = crate::random::seeded(3);
        let mut b = crate::random::seeded(3);
        for &alpha in &[0.05, 0.1, 0.3, 0.5, 0.9] {
            let p = StableParams::new(alpha, 1.0).unwrap();
            for _ in 0..2000 {
                let x: f64 = sample_pas(p, &mut a);
                assert!(x > 0.0 && x.is_finite());
                assert_eq!(x, sample_pas(p, &mut b));
            }
        }
        for _ in 0..2000 {
            let x: f64 = sample_levy(1.0, &mut a);
            assert!(x > 0.0);
            assert_eq!(x, sample_levy(1.0, &mut b));
        }
    }

    #[test]
    fn f32_draws_track_f64() {
        let p64 = StableParams::new(0.4, 2.0).unwrap();
        let p32 = StableParams::new(0.4f32, 2.0f32).unwrap();
        let mut a = crate::random::seeded(11);
        let mut b = crate::random::seeded(11);
        for _ in 0..100 {
            let x: f64 = sample_pas(p64, &mut a);
            let y: f32 = sample_pas(p32, &mut b);
            assert_relative_eq!(x as f32, y, max_relative = 1e-4);
        }
    }
}
