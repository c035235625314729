//! Lévy NMF and baseline factorizations.
//!
//! The Lévy model treats each observation `X(f,t)` as a Lévy variable with
//! scale `σ(f,t) = [WH](f,t)²`. Maximizing the likelihood is minimizing
//!
//! ```text
//! C(W, H) = Σ [WH]² / X − 2 log [WH]
//! ```
//!
//! Two update schemes are provided. Both use the split-gradient ratios
//!
//! ```text
//! a_W = ([WH]^-1 Hᵀ) / (([WH] ⊙ X^-1) Hᵀ)
//! a_H = (Wᵀ [WH]^-1) / (Wᵀ ([WH] ⊙ X^-1))
//! ```
//!
//! The multiplicative rule applies `θ ← θ ⊙ a_θ`; the majorize-minimize rule
//! applies `θ ← θ ⊙ a_θ^½`, which never increases `C`.
//!
//! Euclidean, generalized-KL, Itakura-Saito and masked Itakura-Saito
//! factorizations fit `X ≈ WH` directly with their standard multiplicative
//! updates.

use std::fmt;

use ndarray::{Array2, Zip};
use rand::Rng;

use crate::error::{ensure_same_dim, Error, Result};
use crate::matrix::NonnegMatrix;
use crate::random::seeded;
use crate::scalar::Scalar;
use crate::stable::levy_log_pdf;

pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Relative cost change below which an opt-in early stop triggers.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Levy,
    Kl,
    Is,
    Euclidean,
    WeightedIs,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Levy => "levy",
            Model::Kl => "kl",
            Model::Is => "is",
            Model::Euclidean => "euclidean",
            Model::WeightedIs => "weighted-is",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unmasked baselines accepted by [`baseline_step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Kl,
    Is,
    Euclidean,
}

impl From<Baseline> for Model {
    fn from(b: Baseline) -> Self {
        match b {
            Baseline::Kl => Model::Kl,
            Baseline::Is => Model::Is,
            Baseline::Euclidean => Model::Euclidean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Multiplicative update `θ ← θ ⊙ a_θ`.
    Mur,
    /// Majorize-minimize update `θ ← θ ⊙ a_θ^½` (Lévy only).
    Mm,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Mur => "mur",
            Rule::Mm => "mm",
        })
    }
}

/// NMF factors `W` (F×K) and `H` (K×T).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair<S> {
    w: NonnegMatrix<S>,
    h: NonnegMatrix<S>,
}

impl<S: Scalar> FactorPair<S> {
    pub fn new(w: NonnegMatrix<S>, h: NonnegMatrix<S>) -> Result<Self> {
        if w.cols() != h.rows() {
            return Err(Error::Dimension {
                context: "inner dimension of W and H",
                expected: (w.rows(), w.cols()),
                found: (h.rows(), h.cols()),
            });
        }
        Ok(Self { w, h })
    }

    pub fn w(&self) -> &NonnegMatrix<S> {
        &self.w
    }

    pub fn h(&self) -> &NonnegMatrix<S> {
        &self.h
    }

    pub fn into_parts(self) -> (NonnegMatrix<S>, NonnegMatrix<S>) {
        (self.w, self.h)
    }

    pub fn rank(&self) -> usize {
        self.w.cols()
    }

    /// Shape `(F, T)` of the product.
    pub fn output_dim(&self) -> (usize, usize) {
        (self.w.rows(), self.h.cols())
    }

    /// The product `WH`.
    pub fn product(&self) -> NonnegMatrix<S> {
        NonnegMatrix::from_array_unchecked(self.w.as_array().dot(self.h.as_array()))
    }

    fn product_floored(&self, epsilon: S) -> Array2<S> {
        self.w.as_array().dot(self.h.as_array()).mapv(|v| v.max(epsilon))
    }
}

/// Settings for [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig<S> {
    pub model: Model,
    pub rule: Rule,
    pub rank: usize,
    pub iterations: usize,
    pub epsilon: S,
    pub seed: u64,
    /// Trusted-cell mask (1 = observed), required by [`Model::WeightedIs`] only.
    pub mask: Option<NonnegMatrix<S>>,
    /// Optional early stop on relative cost change; `None` runs every iteration.
    pub tolerance: Option<S>,
}

impl<S: Scalar> FitConfig<S> {
    pub fn new(model: Model, rank: usize, iterations: usize) -> Self {
        Self {
            model,
            rule: Rule::Mur,
            rank,
            iterations,
            epsilon: S::of(DEFAULT_EPSILON),
            seed: 0,
            mask: None,
            tolerance: None,
        }
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epsilon(mut self, epsilon: S) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_mask(mut self, mask: NonnegMatrix<S>) -> Self {
        self.mask = Some(mask);
        self
    }

    pub fn with_tolerance(mut self, tolerance: S) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    /// Checks the settings against data of shape `dim`.
    pub fn validate(&self, dim: (usize, usize)) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::config("rank must be at least 1"));
        }
        if self.iterations == 0 {
            return Err(Error::config("iterations must be at least 1"));
        }
        if !(self.epsilon > S::zero() && self.epsilon.is_finite()) {
            return Err(Error::config("epsilon must be positive"));
        }
        if self.rule == Rule::Mm && self.model != Model::Levy {
            return Err(Error::config(format!(
                "the mm rule is only defined for the levy model, not {}",
                self.model
            )));
        }
        match (&self.mask, self.model) {
            (Some(mask), Model::WeightedIs) => {
                if mask.dim() != dim {
                    return Err(Error::config(format!(
                        "mask is {:?} but data is {:?}",
                        mask.dim(),
                        dim
                    )));
                }
                if !mask.is_binary() {
                    return Err(Error::config("mask entries must be 0 or 1"));
                }
            }
            (None, Model::WeightedIs) => {
                return Err(Error::config("weighted-is requires a mask"))
            }
            (Some(_), model) => {
                return Err(Error::config(format!("a mask is only accepted by weighted-is, not {model}")))
            }
            (None, _) => {}
        }
        if let Some(tol) = self.tolerance {
            if !(tol >= S::zero()) {
                return Err(Error::config("tolerance must be nonnegative"));
            }
        }
        Ok(())
    }
}

/// Per-iteration cost values of one fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitTrace<S> {
    pub model: Model,
    pub rule: Rule,
    pub costs: Vec<S>,
}

/// Which factors a fit is allowed to change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Update {
    Both,
    /// Keep `W` fixed and update `H` only.
    OnlyH,
}

fn check_dims<S: Scalar>(x: &NonnegMatrix<S>, factors: &FactorPair<S>) -> Result<()> {
    ensure_same_dim("data vs factor product", factors.output_dim(), x.dim())
}

/// Lévy NMF cost `Σ [WH]²/max(X,ε) − 2 log max([WH],ε)`.
pub fn levy_cost<S: Scalar>(x: &NonnegMatrix<S>, factors: &FactorPair<S>, epsilon: S) -> Result<S> {
    check_dims(x, factors)?;
    let v = factors.product();
    Ok(cost_of(Model::Levy, x.as_array(), None, v.as_array(), epsilon))
}

/// Log-likelihood of `X` under independent Lévy laws with scale `[WH]²`.
///
/// Differs from `−½ levy_cost` by a constant that depends on `X` only.
pub fn log_likelihood<S: Scalar>(
    x: &NonnegMatrix<S>,
    factors: &FactorPair<S>,
    epsilon: S,
) -> Result<S> {
    check_dims(x, factors)?;
    let v = factors.product_floored(epsilon);
    let mut total = S::zero();
    for (&xv, &vv) in x.as_array().iter().zip(v.iter()) {
        total = total + levy_log_pdf(xv.max(epsilon), vv * vv)?;
    }
    Ok(total)
}

/// Cost minimized by `model`; for the baselines this is the divergence between `X` and `WH`.
pub fn model_cost<S: Scalar>(
    model: Model,
    x: &NonnegMatrix<S>,
    mask: Option<&NonnegMatrix<S>>,
    factors: &FactorPair<S>,
    epsilon: S,
) -> Result<S> {
    check_dims(x, factors)?;
    let mask = match (model, mask) {
        (Model::WeightedIs, None) => return Err(Error::config("weighted-is requires a mask")),
        (Model::WeightedIs, Some(m)) => {
            ensure_same_dim("mask vs data", x.dim(), m.dim())?;
            Some(m.as_array())
        }
        _ => None,
    };
    let v = factors.product();
    Ok(cost_of(model, x.as_array(), mask, v.as_array(), epsilon))
}

/// Model cost given the raw (unfloored) product `v = WH`.
fn cost_of<S: Scalar>(
    model: Model,
    x: &Array2<S>,
    mask: Option<&Array2<S>>,
    v: &Array2<S>,
    epsilon: S,
) -> S {
    let one = S::one();
    let two = S::of(2.0);
    let is_term = |xv: S, vv: S| {
        let r = xv.max(epsilon) / vv.max(epsilon);
        r - r.ln() - one
    };
    let pairs = Zip::from(x).and(v);
    match model {
        Model::Levy => pairs.fold(S::zero(), |acc, &xv, &vv| {
            acc + vv * vv / xv.max(epsilon) - two * vv.max(epsilon).ln()
        }),
        Model::Euclidean => pairs.fold(S::zero(), |acc, &a, &b| acc + (a - b) * (a - b)),
        Model::Kl => pairs.fold(S::zero(), |acc, &a, &b| {
            let log_term = if a > S::zero() {
                a * (a.max(epsilon) / b.max(epsilon)).ln()
            } else {
                S::zero()
            };
            acc + log_term - a + b
        }),
        Model::Is => pairs.fold(S::zero(), |acc, &a, &b| acc + is_term(a, b)),
        Model::WeightedIs => {
            let mask = mask.expect("weighted-is mask checked by caller");
            pairs
                .and(mask)
                .fold(S::zero(), |acc, &a, &b, &m| acc + m * is_term(a, b))
        }
    }
}

/// Elementwise fields `(P, Q)` whose products with `Hᵀ` (or `Wᵀ`) give the
/// numerator and denominator of the multiplicative ratio.
fn gradient_fields<S: Scalar>(
    model: Model,
    x: &Array2<S>,
    mask: Option<&Array2<S>>,
    v: &Array2<S>,
    epsilon: S,
) -> (Array2<S>, Array2<S>) {
    let one = S::one();
    match model {
        Model::Levy => (
            v.mapv(|vv| one / vv),
            Zip::from(v).and(x).map_collect(|&vv, &xv| vv / xv.max(epsilon)),
        ),
        Model::Euclidean => (x.clone(), v.clone()),
        Model::Kl => (
            Zip::from(x).and(v).map_collect(|&xv, &vv| xv / vv),
            Array2::from_elem(v.dim(), one),
        ),
        Model::Is => (
            Zip::from(x).and(v).map_collect(|&xv, &vv| xv / (vv * vv)),
            v.mapv(|vv| one / vv),
        ),
        Model::WeightedIs => {
            let mask = mask.expect("weighted-is mask checked by caller");
            (
                Zip::from(x)
                    .and(v)
                    .and(mask)
                    .map_collect(|&xv, &vv, &m| m * xv / (vv * vv)),
                Zip::from(v).and(mask).map_collect(|&vv, &m| m / vv),
            )
        }
    }
}

/// `θ ← max(θ ⊙ ratio^p, ε)` with `0/0 → 1` when both sides are below `ε`.
fn apply_ratio<S: Scalar>(
    factor: &mut Array2<S>,
    numerator: &Array2<S>,
    denominator: &Array2<S>,
    rule: Rule,
    epsilon: S,
) {
    Zip::from(factor)
        .and(numerator)
        .and(denominator)
        .for_each(|theta, &num, &den| {
            let ratio = if num < epsilon && den < epsilon {
                S::one()
            } else {
                num / den.max(epsilon)
            };
            let ratio = match rule {
                Rule::Mur => ratio,
                Rule::Mm => ratio.sqrt(),
            };
            *theta = (*theta * ratio).max(epsilon);
        });
}

/// Working copy of the factors used by the update loop.
struct Workspace<S> {
    w: Array2<S>,
    h: Array2<S>,
}

impl<S: Scalar> Workspace<S> {
    fn from_factors(factors: &FactorPair<S>) -> Self {
        Self {
            w: factors.w.as_array().to_owned(),
            h: factors.h.as_array().to_owned(),
        }
    }

    fn into_factors(self) -> FactorPair<S> {
        FactorPair {
            w: NonnegMatrix::from_array_unchecked(self.w),
            h: NonnegMatrix::from_array_unchecked(self.h),
        }
    }

    fn product(&self, epsilon: S) -> Array2<S> {
        self.w.dot(&self.h).mapv(|v| v.max(epsilon))
    }

    fn update_w(&mut self, model: Model, rule: Rule, x: &Array2<S>, mask: Option<&Array2<S>>, epsilon: S) {
        let v = self.product(epsilon);
        let (p, q) = gradient_fields(model, x, mask, &v, epsilon);
        let ht = self.h.t();
        let num = p.dot(&ht);
        let den = q.dot(&ht);
        apply_ratio(&mut self.w, &num, &den, rule, epsilon);
    }

    fn update_h(&mut self, model: Model, rule: Rule, x: &Array2<S>, mask: Option<&Array2<S>>, epsilon: S) {
        let v = self.product(epsilon);
        let (p, q) = gradient_fields(model, x, mask, &v, epsilon);
        let wt = self.w.t();
        let num = wt.dot(&p);
        let den = wt.dot(&q);
        apply_ratio(&mut self.h, &num, &den, rule, epsilon);
    }

    fn sweep(&mut self, model: Model, rule: Rule, x: &Array2<S>, mask: Option<&Array2<S>>, epsilon: S, update: Update) {
        if update == Update::Both {
            self.update_w(model, rule, x, mask, epsilon);
        }
        self.update_h(model, rule, x, mask, epsilon);
    }
}

fn step<S: Scalar>(
    model: Model,
    rule: Rule,
    x: &NonnegMatrix<S>,
    mask: Option<&NonnegMatrix<S>>,
    factors: &FactorPair<S>,
    epsilon: S,
) -> Result<FactorPair<S>> {
    check_dims(x, factors)?;
    let mut ws = Workspace::from_factors(factors);
    ws.sweep(
        model,
        rule,
        x.as_array(),
        mask.map(NonnegMatrix::as_array),
        epsilon,
        Update::Both,
    );
    Ok(ws.into_factors())
}

/// One multiplicative Lévy sweep: `W ← W ⊙ a_W`, then `H ← H ⊙ a_H` with the new `W`.
pub fn mur_step_levy<S: Scalar>(
    x: &NonnegMatrix<S>,
    factors: &FactorPair<S>,
    epsilon: S,
) -> Result<FactorPair<S>> {
    step(Model::Levy, Rule::Mur, x, None, factors, epsilon)
}

/// One majorize-minimize Lévy sweep: `W ← W ⊙ a_W^½`, then `H ← H ⊙ a_H^½`.
pub fn mm_step_levy<S: Scalar>(
    x: &NonnegMatrix<S>,
    factors: &FactorPair<S>,
    epsilon: S,
) -> Result<FactorPair<S>> {
    step(Model::Levy, Rule::Mm, x, None, factors, epsilon)
}

/// One standard multiplicative sweep of a baseline fitting `X ≈ WH`.
pub fn baseline_step<S: Scalar>(
    model: Baseline,
    x: &NonnegMatrix<S>,
    factors: &FactorPair<S>,
    epsilon: S,
) -> Result<FactorPair<S>> {
    step(model.into(), Rule::Mur, x, None, factors, epsilon)
}

/// One Itakura-Saito sweep in which cells with mask 0 are ignored.
pub fn weighted_is_step<S: Scalar>(
    x: &NonnegMatrix<S>,
    mask: &NonnegMatrix<S>,
    factors: &FactorPair<S>,
    epsilon: S,
) -> Result<FactorPair<S>> {
    ensure_same_dim("mask vs data", x.dim(), mask.dim())?;
    if !mask.is_binary() {
        return Err(Error::domain("mask entries must be 0 or 1"));
    }
    step(Model::WeightedIs, Rule::Mur, x, Some(mask), factors, epsilon)
}

/// Factors with i.i.d. entries uniform on `(ε, 1]`, drawn `W` first in row-major order.
pub fn init_factors<S: Scalar>(
    rows: usize,
    cols: usize,
    rank: usize,
    seed: u64,
    epsilon: S,
) -> Result<FactorPair<S>> {
    if rows == 0 || cols == 0 || rank == 0 {
        return Err(Error::domain("factor dimensions must be positive"));
    }
    let mut rng = seeded(seed);
    let eps = epsilon.as_f64();
    let mut draw = |_| {
        // 1 - U with U on [0,1) lies in (0,1]
        let u = 1.0 - rng.random::<f64>();
        S::of(eps + (1.0 - eps) * u).max(epsilon)
    };
    let w = Array2::from_shape_fn((rows, rank), &mut draw);
    let h = Array2::from_shape_fn((rank, cols), &mut draw);
    FactorPair::new(NonnegMatrix::new(w)?, NonnegMatrix::new(h)?)
}

/// Fits `config.model` to `x` from a seeded uniform initialization.
///
/// One iteration is a full `W` then `H` sweep; the trace holds the model cost
/// after each iteration.
pub fn fit<S: Scalar>(
    x: &NonnegMatrix<S>,
    config: &FitConfig<S>,
) -> Result<(FactorPair<S>, FitTrace<S>)> {
    config.validate(x.dim())?;
    let init = init_factors(x.rows(), x.cols(), config.rank, config.seed, config.epsilon)?;
    fit_from(x, config, init, Update::Both)
}

/// Like [`fit`] but starting from `init`, optionally keeping `W` fixed.
pub fn fit_from<S: Scalar>(
    x: &NonnegMatrix<S>,
    config: &FitConfig<S>,
    init: FactorPair<S>,
    update: Update,
) -> Result<(FactorPair<S>, FitTrace<S>)> {
    config.validate(x.dim())?;
    check_dims(x, &init)?;
    if init.rank() != config.rank {
        return Err(Error::config(format!(
            "initial factors have rank {} but the configuration asks for {}",
            init.rank(),
            config.rank
        )));
    }
    let eps = config.epsilon;
    let mask = config.mask.as_ref();
    let mut ws = Workspace::from_factors(&init);
    // Entries start at or above the floor.
    ws.w.mapv_inplace(|v| v.max(eps));
    ws.h.mapv_inplace(|v| v.max(eps));
    let mut costs: Vec<S> = Vec::with_capacity(config.iterations);
    for _ in 0..config.iterations {
        ws.sweep(
            config.model,
            config.rule,
            x.as_array(),
            mask.map(NonnegMatrix::as_array),
            eps,
            update,
        );
        let v = ws.w.dot(&ws.h);
        let cost = cost_of(config.model, x.as_array(), mask.map(NonnegMatrix::as_array), &v, eps);
        let stop = match (config.tolerance, costs.last()) {
            (Some(tol), Some(&prev)) => (prev - cost).abs() <= tol * prev.abs(),
            _ => false,
        };
        costs.push(cost);
        if stop {
            break;
        }
    }
    Ok((
        ws.into_factors(),
        FitTrace {
            model: config.model,
            rule: config.rule,
            costs,
        },
    ))
}
