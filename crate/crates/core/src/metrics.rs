//! Evaluation measures: generalized KL divergence, α-dispersion, log-KL and
//! Pearson correlation.
//!
//! The `*_log_fields` variants take fields given by their natural logarithm
//! and return the natural logarithm of the measure. They stay finite when the
//! fields themselves (e.g. `σ = (WH)^{1/α}` at small `α`) exceed the
//! floating point range.

use std::collections::BTreeMap;

use ndarray::{ArrayView2, Zip};

use crate::error::{ensure_same_dim, Error, Result};
use crate::matrix::NonnegMatrix;
use crate::scalar::Scalar;
use crate::stable::check_alpha;

/// A named metric value with the parameters it was computed at.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport<S> {
    pub name: String,
    pub value: S,
    pub params: BTreeMap<String, S>,
}

impl<S: Scalar> MetricReport<S> {
    pub fn new(name: impl Into<String>, value: S) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(format!("metric value {value} is not finite")));
        }
        Ok(Self {
            name: name.into(),
            value,
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, name: impl Into<String>, value: S) -> Self {
        self.params.insert(name.into(), value);
        self
    }
}

/// `Σ A log(A/B) − A + B` with both arguments floored at `ε` inside the log and `0 log 0 = 0`.
pub fn gkl_divergence<S: Scalar>(a: &NonnegMatrix<S>, b: &NonnegMatrix<S>, epsilon: S) -> Result<S> {
    ensure_same_dim("gkl_divergence", a.dim(), b.dim())?;
    let total = Zip::from(a.as_array())
        .and(b.as_array())
        .fold(S::zero(), |acc, &x, &y| {
            let log_term = if x > S::zero() {
                x * (x.max(epsilon) / y.max(epsilon)).ln()
            } else {
                S::zero()
            };
            acc + log_term - x + y
        });
    Ok(total.max(S::zero()))
}

/// `Σ |σ − σ̂|^{1/α}`.
pub fn alpha_dispersion<S: Scalar>(
    sigma: &NonnegMatrix<S>,
    sigma_hat: &NonnegMatrix<S>,
    alpha: S,
) -> Result<S> {
    check_alpha(alpha)?;
    ensure_same_dim("alpha_dispersion", sigma.dim(), sigma_hat.dim())?;
    let p = alpha.recip();
    Ok(Zip::from(sigma.as_array())
        .and(sigma_hat.as_array())
        .fold(S::zero(), |acc, &s, &h| acc + (s - h).abs().powf(p)))
}

/// Natural log of [`gkl_divergence`], floored at `ln ε`.
pub fn log_kl<S: Scalar>(a: &NonnegMatrix<S>, b: &NonnegMatrix<S>, epsilon: S) -> Result<S> {
    Ok(gkl_divergence(a, b, epsilon)?.max(epsilon).ln())
}

/// Pearson correlation coefficient.
pub fn correlation<S: Scalar>(a: &[S], b: &[S]) -> Result<S> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "correlation needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::domain("correlation needs at least two samples"));
    }
    let n = S::of(a.len() as f64);
    let mean_a = a.iter().copied().sum::<S>() / n;
    let mean_b = b.iter().copied().sum::<S>() / n;
    let (mut sab, mut saa, mut sbb) = (S::zero(), S::zero(), S::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if saa <= S::zero() || sbb <= S::zero() {
        return Err(Error::domain("correlation is undefined for a constant sequence"));
    }
    let r = sab / (saa.sqrt() * sbb.sqrt());
    Ok(r.max(-S::one()).min(S::one()))
}

/// Correlation of two matrices over their flattened entries.
pub fn matrix_correlation<S: Scalar>(a: &NonnegMatrix<S>, b: &NonnegMatrix<S>) -> Result<S> {
    ensure_same_dim("matrix_correlation", a.dim(), b.dim())?;
    let a: Vec<S> = a.iter().collect();
    let b: Vec<S> = b.iter().collect();
    correlation(&a, &b)
}

/// `ln Σ exp(v)`, or `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    let values: Vec<S> = values.into_iter().collect();
    let max = values.iter().copied().fold(S::neg_infinity(), S::max);
    if max == S::neg_infinity() {
        return max;
    }
    max + values.iter().map(|&v| (v - max).exp()).sum::<S>().ln()
}

/// `ln |e^a − e^b|`, `-inf` when equal.
fn log_abs_diff<S: Scalar>(a: S, b: S) -> S {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == lo {
        return S::neg_infinity();
    }
    hi + (-(lo - hi).exp_m1()).ln()
}

/// `ln Σ |σ − σ̂|^{1/α}` from `ln σ` and `ln σ̂`.
pub fn log_alpha_dispersion_log_fields<S: Scalar>(
    log_sigma: ArrayView2<'_, S>,
    log_sigma_hat: ArrayView2<'_, S>,
    alpha: S,
) -> Result<S> {
    check_alpha(alpha)?;
    ensure_same_dim("alpha dispersion (log fields)", log_sigma.dim(), log_sigma_hat.dim())?;
    let p = alpha.recip();
    Ok(log_sum_exp(
        Zip::from(log_sigma)
            .and(log_sigma_hat)
            .map_collect(|&a, &b| p * log_abs_diff(a, b)),
    ))
}

/// `ln gkl(A, B)` from `ln A` and `ln B`; every term of the divergence is
/// evaluated in log space.
pub fn log_gkl_log_fields<S: Scalar>(
    log_a: ArrayView2<'_, S>,
    log_b: ArrayView2<'_, S>,
) -> Result<S> {
    ensure_same_dim("gkl (log fields)", log_a.dim(), log_b.dim())?;
    let one = S::one();
    // For d = ln A − ln B the term A ln(A/B) − A + B equals
    // A (d − 1 + e^{−d}) when d ≥ 0 and B (d e^{d} − e^{d} + 1) otherwise.
    Ok(log_sum_exp(Zip::from(log_a).and(log_b).map_collect(|&la, &lb| {
        let d = la - lb;
        if d == S::zero() {
            return S::neg_infinity();
        }
        let (scale, g) = if d > S::zero() {
            (la, d - one + (-d).exp())
        } else {
            let e = d.exp();
            (lb, d * e - e + one)
        };
        if g > S::zero() {
            scale + g.ln()
        } else {
            S::neg_infinity()
        }
    })))
}
