//! Synthetic generators and the three evaluation pipelines: fitting
//! impulsive positive α-stable data, spectrogram inpainting under impulsive
//! corruption, and fluorescence-style unmixing.
//!
//! Every function is a deterministic function of its seed.

use std::fmt;

use ndarray::Array2;
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftNum;

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::metrics::{
    correlation, log_alpha_dispersion_log_fields, log_gkl_log_fields, log_kl, log_sum_exp,
    matrix_correlation,
};
use crate::nmf::{fit, fit_from, init_factors, FactorPair, FitConfig, Model, Rule, Update};
use crate::random::{child_seed, seeded};
use crate::scalar::Scalar;
use crate::signal::{stft_magnitude, AudioBuffer, StftConfig};
use crate::separation::{rank1_components, wiener_separate, ComponentSet};
use crate::stable::{check_alpha, sample_pas, StableParams};

/// A fitting algorithm as used by the experiment pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Levy(RuleTag),
    Kl,
    Is,
    Euclidean,
    /// Itakura-Saito NMF told which cells are corrupted.
    WeightedIs,
}

/// Totally ordered mirror of [`Rule`] for use in sort keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    Mur,
    Mm,
}

impl Algorithm {
    pub fn model(self) -> Model {
        match self {
            Algorithm::Levy(_) => Model::Levy,
            Algorithm::Kl => Model::Kl,
            Algorithm::Is => Model::Is,
            Algorithm::Euclidean => Model::Euclidean,
            Algorithm::WeightedIs => Model::WeightedIs,
        }
    }

    pub fn rule(self) -> Rule {
        match self {
            Algorithm::Levy(RuleTag::Mm) => Rule::Mm,
            _ => Rule::Mur,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Levy(RuleTag::Mm) => "levy-mm",
            Algorithm::Levy(RuleTag::Mur) => "levy-mur",
            Algorithm::Kl => "kl",
            Algorithm::Is => "is",
            Algorithm::Euclidean => "euclidean",
            Algorithm::WeightedIs => "weighted-is",
        }
    }

    fn config<S: Scalar>(self, rank: usize, iterations: usize, seed: u64) -> FitConfig<S> {
        FitConfig::new(self.model(), rank, iterations)
            .with_rule(self.rule())
            .with_seed(seed)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Factors whose entries are fourth powers of standard normal draws.
pub fn gen_sparse_factors<S: Scalar>(
    rows: usize,
    cols: usize,
    rank: usize,
    seed: u64,
) -> Result<FactorPair<S>> {
    if rows == 0 || cols == 0 || rank == 0 {
        return Err(Error::domain("factor dimensions must be positive"));
    }
    let mut rng = seeded(seed);
    let mut draw = |_| {
        let g: f64 = StandardNormal.sample(&mut rng);
        S::of(g.powi(4))
    };
    let w = Array2::from_shape_fn((rows, rank), &mut draw);
    let h = Array2::from_shape_fn((rank, cols), &mut draw);
    FactorPair::new(NonnegMatrix::new(w)?, NonnegMatrix::new(h)?)
}

/// `ln σ` for the field `σ = (WH)^{1/α}`.
fn log_scale_field<S: Scalar>(product: &NonnegMatrix<S>, alpha: S) -> Array2<S> {
    let inv = alpha.recip();
    product
        .as_array()
        .mapv(|v| v.max(S::min_positive_value()).ln() * inv)
}

/// Independent positive α-stable observations with scale `σ = (WH)^{1/α}`.
pub fn gen_pas_observations<S: Scalar>(
    factors: &FactorPair<S>,
    alpha: S,
    seed: u64,
) -> Result<NonnegMatrix<S>> {
    check_alpha(alpha)?;
    let log_sigma = log_scale_field(&factors.product(), alpha);
    let mut rng = seeded(seed);
    let data = log_sigma.mapv(|ls| {
        let sigma = S::of(ls.as_f64().exp().clamp(f64::MIN_POSITIVE, f64::MAX));
        let sigma = sigma.max(S::min_positive_value()).min(S::max_value());
        let params = StableParams::new(alpha, sigma).expect("validated alpha, clamped scale");
        sample_pas(params, &mut rng)
    });
    NonnegMatrix::new(data)
}

/// Replaces `⌊fraction·F·T⌋` cells chosen without replacement by
/// `100 · p95(X) · u` with `u ~ U(0.5, 1.5)`.
///
/// Returns the corrupted matrix and a mask holding 0 at corrupted cells.
pub fn corrupt_impulsive<S: Scalar>(
    x: &NonnegMatrix<S>,
    fraction: S,
    seed: u64,
) -> Result<(NonnegMatrix<S>, NonnegMatrix<S>)> {
    if !(fraction > S::zero() && fraction < S::one()) {
        return Err(Error::domain(format!("corruption fraction must lie in (0, 1), got {fraction}")));
    }
    let total = x.len();
    let count = (fraction.as_f64() * total as f64).floor() as usize;
    let mut level = S::of(100.0) * percentile(x.iter().collect(), 0.95);
    if level <= S::zero() {
        level = S::one();
    }
    let mut rng = seeded(seed);
    let cells = index::sample(&mut rng, total, count);
    let cols = x.cols();
    let mut data = x.as_array().clone();
    let mut mask = Array2::from_elem(x.dim(), S::one());
    for cell in cells.iter() {
        let u = S::of(rng.random_range(0.5..1.5));
        let at = [cell / cols, cell % cols];
        data[at] = level * u;
        mask[at] = S::zero();
    }
    Ok((NonnegMatrix::new(data)?, NonnegMatrix::new(mask)?))
}

/// Linearly interpolated percentile, `q` in `[0, 1]`.
fn percentile<S: Scalar>(mut values: Vec<S>, q: f64) -> S {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite entries"));
    let pos = q * (values.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = S::of(pos - lo as f64);
    values[lo] + (values[hi] - values[lo]) * frac
}

/// Settings of the impulsive-noise benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub alphas: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub iterations: usize,
    pub runs: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            alphas: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            rows: 50,
            cols: 50,
            rank: 5,
            iterations: 200,
            runs: 10,
            seed: 0,
        }
    }
}

/// Algorithms compared by [`run_impulsive_bench`], in output order.
pub const BENCH_ALGORITHMS: [Algorithm; 4] = [
    Algorithm::Levy(RuleTag::Mm),
    Algorithm::Kl,
    Algorithm::Is,
    Algorithm::Euclidean,
];

/// One fitted run of the impulsive benchmark.
///
/// Both metrics are natural logarithms: at small `α` the scale fields reach
/// magnitudes whose α-dispersion exceeds the floating point range.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub algorithm: Algorithm,
    pub alpha: f64,
    pub run_index: usize,
    /// `ln Σ |σ − σ̂|^{1/α}`.
    pub log_alpha_dispersion: f64,
    /// `ln KL(σ ‖ σ̂)`.
    pub log_kl: f64,
    /// Seed of the data generated for this run.
    pub seed: u64,
}

/// Fits every benchmark algorithm to `runs` synthetic data sets per `α` and
/// scores `σ̂ = (ŴĤ)^{1/α}` against the generating `σ = (W₀H₀)^{1/α}`.
///
/// Results are ordered by algorithm, then `α`, then run.
pub fn run_impulsive_bench(config: &BenchConfig) -> Result<Vec<BenchResult>> {
    if config.alphas.is_empty() || config.runs == 0 {
        return Err(Error::config("benchmark needs at least one alpha and one run"));
    }
    for &a in &config.alphas {
        check_alpha(a).map_err(|e| Error::config(e.to_string()))?;
    }
    let mut results = Vec::new();
    for (ai, &alpha) in config.alphas.iter().enumerate() {
        for run in 0..config.runs {
            let data_seed = child_seed(config.seed, ((ai as u64) << 32) | run as u64);
            let truth: FactorPair<f64> =
                gen_sparse_factors(config.rows, config.cols, config.rank, child_seed(data_seed, 1))?;
            let x = gen_pas_observations(&truth, alpha, child_seed(data_seed, 2))?;
            let log_sigma = log_scale_field(&truth.product(), alpha);
            for (k, &alg) in BENCH_ALGORITHMS.iter().enumerate() {
                let cfg = alg.config(config.rank, config.iterations, child_seed(data_seed, 10 + k as u64));
                let (est, _) = fit(&x, &cfg)?;
                let log_hat = log_scale_field(&est.product(), alpha);
                results.push(BenchResult {
                    algorithm: alg,
                    alpha,
                    run_index: run,
                    log_alpha_dispersion: log_alpha_dispersion_log_fields(
                        log_sigma.view(),
                        log_hat.view(),
                        alpha,
                    )?,
                    log_kl: log_gkl_log_fields(log_sigma.view(), log_hat.view())?,
                    seed: data_seed,
                });
            }
        }
    }
    results.sort_by(|a, b| {
        a.algorithm
            .cmp(&b.algorithm)
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.run_index.cmp(&b.run_index))
    });
    Ok(results)
}

/// Mean metrics of one (algorithm, α) cell of the benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub algorithm: Algorithm,
    pub alpha: f64,
    /// `ln` of the arithmetic mean α-dispersion over runs.
    pub log_mean_alpha_dispersion: f64,
    /// `ln` of the arithmetic mean KL divergence over runs.
    pub log_mean_kl: f64,
    pub runs: usize,
}

/// Averages benchmark results per (algorithm, α) in the linear domain.
pub fn summarize_bench(results: &[BenchResult]) -> Vec<BenchSummary> {
    let mut keys: Vec<(Algorithm, f64)> = results.iter().map(|r| (r.algorithm, r.alpha)).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    keys.dedup();
    keys.into_iter()
        .map(|(algorithm, alpha)| {
            let cell: Vec<&BenchResult> = results
                .iter()
                .filter(|r| r.algorithm == algorithm && r.alpha == alpha)
                .collect();
            let n = (cell.len() as f64).ln();
            BenchSummary {
                algorithm,
                alpha,
                log_mean_alpha_dispersion: log_sum_exp(cell.iter().map(|r| r.log_alpha_dispersion)) - n,
                log_mean_kl: log_sum_exp(cell.iter().map(|r| r.log_kl)) - n,
                runs: cell.len(),
            }
        })
        .collect()
}

/// Sample rate of the synthetic inpainting audio.
pub const SYNTH_RATE: u32 = 8000;

/// Synthetic plucked-string recording at [`SYNTH_RATE`]: 3 to 8 voices, each
/// a harmonic tone with decaying partials replayed at a few onsets under an
/// exponential release, over faint white noise. Peak amplitude is 0.9.
pub fn gen_harmonic_audio<S: Scalar>(samples: usize, seed: u64) -> Result<AudioBuffer<S>> {
    use std::f64::consts::TAU;
    if samples == 0 {
        return Err(Error::domain("audio length must be positive"));
    }
    let rate = f64::from(SYNTH_RATE);
    let nyquist = rate / 2.0;
    let mut rng = seeded(seed);
    let voices = rng.random_range(3..=8);
    let mut signal = vec![0.0f64; samples];
    for _ in 0..voices {
        // guitar range, roughly E2 to E5
        let f0: f64 = 82.4 * 2f64.powf(rng.random_range(0.0..3.0));
        let brightness: f64 = rng.random_range(0.5..0.85);
        let release: f64 = rng.random_range(0.25..1.2) * rate;
        let level: f64 = rng.random_range(0.3..1.0);
        let partials: Vec<(f64, f64, f64)> = (1..)
            .map(|h| h as f64 * f0)
            .take_while(|&f| f < nyquist * 0.95)
            .enumerate()
            .map(|(i, f)| {
                let amp = level * brightness.powi(i as i32) * rng.random_range(0.6..1.0);
                (f, amp, rng.random_range(0.0..TAU))
            })
            .collect();
        let notes = rng.random_range(1..=4);
        for _ in 0..notes {
            let onset = rng.random_range(0..samples);
            let end = samples.min(onset + (8.0 * release) as usize);
            for (n, out) in signal.iter_mut().enumerate().take(end).skip(onset) {
                let dt = (n - onset) as f64;
                let attack = (dt / (0.005 * rate)).min(1.0);
                let env = attack * (-dt / release).exp();
                let t = n as f64 / rate;
                let tone: f64 = partials
                    .iter()
                    .map(|&(f, amp, phase)| amp * (TAU * f * t + phase).sin())
                    .sum();
                *out += env * tone;
            }
        }
    }
    for out in signal.iter_mut() {
        let g: f64 = StandardNormal.sample(&mut rng);
        *out += 1e-3 * g;
    }
    let peak = signal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gain = if peak > 0.0 { 0.9 / peak } else { 1.0 };
    AudioBuffer::new(signal.into_iter().map(|v| S::of(v * gain)).collect(), SYNTH_RATE)
}

/// Magnitude spectrogram (125 ms Hann window, 75% overlap, 501 bins) of
/// [`gen_harmonic_audio`] with exactly `frames` columns.
pub fn gen_harmonic_spectrogram<S: Scalar + FftNum>(frames: usize, seed: u64) -> Result<NonnegMatrix<S>> {
    let stft = StftConfig::for_sample_rate(SYNTH_RATE)?;
    if frames == 0 {
        return Err(Error::domain("frame count must be positive"));
    }
    let samples = stft.window_len() + (frames - 1) * stft.hop();
    stft_magnitude(&gen_harmonic_audio::<S>(samples, seed)?, &stft)
}

/// Algorithms compared by [`run_inpaint_experiment`], in output order.
pub const INPAINT_ALGORITHMS: [Algorithm; 4] = [
    Algorithm::Levy(RuleTag::Mm),
    Algorithm::Kl,
    Algorithm::Is,
    Algorithm::WeightedIs,
];

#[derive(Debug, Clone, PartialEq)]
pub struct InpaintReport<S> {
    /// `(algorithm, ln KL(clean ‖ estimate))` in [`INPAINT_ALGORITHMS`] order.
    pub log_kl: Vec<(Algorithm, S)>,
    /// Lévy estimate `(ŴĤ)²` of the clean spectrogram.
    pub levy_estimate: NonnegMatrix<S>,
    /// Number of corrupted cells.
    pub corrupted: usize,
}

impl<S: Scalar> InpaintReport<S> {
    pub fn get(&self, algorithm: Algorithm) -> Option<S> {
        self.log_kl.iter().find(|(a, _)| *a == algorithm).map(|(_, v)| *v)
    }
}

/// Corrupts `spectrogram`, fits each algorithm blind (weighted IS gets the
/// true mask) and scores each clean-data estimate with log-KL.
///
/// A `fraction` of 0 skips corruption.
pub fn run_inpaint_experiment<S: Scalar>(
    spectrogram: &NonnegMatrix<S>,
    fraction: S,
    rank: usize,
    iterations: usize,
    seed: u64,
) -> Result<InpaintReport<S>> {
    let (corrupted, mask) = if fraction == S::zero() {
        (
            spectrogram.clone(),
            NonnegMatrix::filled(spectrogram.rows(), spectrogram.cols(), S::one())?,
        )
    } else {
        corrupt_impulsive(spectrogram, fraction, child_seed(seed, 0))?
    };
    let corrupted_cells = mask.iter().filter(|&m| m == S::zero()).count();
    let mut log_kl_values = Vec::with_capacity(INPAINT_ALGORITHMS.len());
    let mut levy_estimate = None;
    for (k, &alg) in INPAINT_ALGORITHMS.iter().enumerate() {
        let mut cfg = alg.config(rank, iterations, child_seed(seed, 1 + k as u64));
        if alg == Algorithm::WeightedIs {
            cfg = cfg.with_mask(mask.clone());
        }
        let (est, _) = fit(&corrupted, &cfg)?;
        let product = est.product();
        let estimate = match alg.model() {
            Model::Levy => product.map(|v| v * v)?,
            _ => product,
        };
        log_kl_values.push((alg, log_kl(spectrogram, &estimate, cfg.epsilon)?));
        if alg.model() == Model::Levy {
            levy_estimate = Some(estimate);
        }
    }
    Ok(InpaintReport {
        log_kl: log_kl_values,
        levy_estimate: levy_estimate.expect("levy is part of the inpainting set"),
        corrupted: corrupted_cells,
    })
}

/// A synthetic fluorescence data set `X = spectra · concentrations + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluorescenceMixture<S> {
    pub x: NonnegMatrix<S>,
    /// Pure spectra, one per column (F×K).
    pub spectra: NonnegMatrix<S>,
    /// Concentrations (K×T).
    pub concentrations: NonnegMatrix<S>,
}

/// Relative amplitude of the additive noise in [`gen_fluorescence_mixture`].
pub const FLUOR_NOISE: f64 = 0.01;

/// Pure spectra built from 1 to 3 Gaussian bumps, uniform concentrations,
/// and nonnegative half-normal noise whose scale is 1% of the mean signal level.
pub fn gen_fluorescence_mixture<S: Scalar>(
    rows: usize,
    cols: usize,
    components: usize,
    seed: u64,
) -> Result<FluorescenceMixture<S>> {
    if rows < 32 || components == 0 || cols < 3 * components {
        return Err(Error::domain(format!(
            "fluorescence mixture needs F >= 32 and T >= 3K, got F={rows}, T={cols}, K={components}"
        )));
    }
    let mut rng = seeded(seed);
    let f = rows as f64;
    let mut spectra = Array2::<f64>::zeros((rows, components));
    for k in 0..components {
        let bumps = rng.random_range(1..=3);
        // main peaks spread over the band so species are distinguishable
        let main = f * (k as f64 + rng.random_range(0.3..0.7)) / components as f64;
        for b in 0..bumps {
            let centre = if b == 0 {
                main
            } else {
                f * (k as f64 + rng.random_range(0.0..1.0)) / components as f64
            };
            let width = rng.random_range(f / 60.0..f / 20.0);
            let height = if b == 0 { 1.0 } else { rng.random_range(0.2..0.6) };
            for r in 0..rows {
                let d = (r as f64 - centre) / width;
                spectra[[r, k]] += height * (-0.5 * d * d).exp();
            }
        }
    }
    let concentrations = Array2::from_shape_fn((components, cols), |_| rng.random_range(0.05..1.0));
    let clean = spectra.dot(&concentrations);
    let scale = FLUOR_NOISE * clean.mean().unwrap_or(0.0);
    let x = clean.mapv(|v| {
        let g: f64 = StandardNormal.sample(&mut rng);
        S::of((v + scale * g.abs()).max(0.0))
    });
    Ok(FluorescenceMixture {
        x: NonnegMatrix::new(x)?,
        spectra: NonnegMatrix::new(spectra.mapv(S::of))?,
        concentrations: NonnegMatrix::new(concentrations.mapv(S::of))?,
    })
}

/// Algorithms compared by [`run_fluor_experiment`], in output order.
pub const FLUOR_ALGORITHMS: [Algorithm; 3] = [
    Algorithm::Euclidean,
    Algorithm::Kl,
    Algorithm::Levy(RuleTag::Mur),
];

pub const FLUOR_COMPONENTS: usize = 3;

/// Iterations used to learn the oracle concentrations.
pub const ORACLE_ITERATIONS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct FluorReport<S> {
    /// One row per algorithm in [`FLUOR_ALGORITHMS`] order; entry `k` is the
    /// correlation between estimated and oracle source `k`.
    pub correlations: Vec<(Algorithm, Vec<S>)>,
}

impl<S: Scalar> FluorReport<S> {
    pub fn get(&self, algorithm: Algorithm) -> Option<&[S]> {
        self.correlations
            .iter()
            .find(|(a, _)| *a == algorithm)
            .map(|(_, v)| v.as_slice())
    }

    pub fn mean(&self, algorithm: Algorithm) -> Option<S> {
        self.get(algorithm)
            .map(|v| v.iter().copied().sum::<S>() / S::of(v.len() as f64))
    }
}

/// Greedy matching of estimated columns to reference columns by largest
/// correlation; returns, for each reference column, the matched estimate column.
pub fn align_components<S: Scalar>(
    reference: &NonnegMatrix<S>,
    estimate: &NonnegMatrix<S>,
) -> Result<Vec<usize>> {
    let k = reference.cols();
    if estimate.cols() != k || estimate.rows() != reference.rows() {
        return Err(Error::domain("alignment needs matrices of equal shape"));
    }
    let column = |m: &NonnegMatrix<S>, j: usize| m.as_array().column(j).to_vec();
    let mut scores = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            // constant columns cannot be ranked; treat as uncorrelated
            let c = correlation(&column(reference, i), &column(estimate, j)).unwrap_or(S::zero());
            scores.push((c, i, j));
        }
    }
    Ok(greedy_match(k, scores))
}

fn greedy_match<S: Scalar>(k: usize, mut scores: Vec<(S, usize, usize)>) -> Vec<usize> {
    scores.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite").then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut assigned = vec![None; k];
    let mut used = vec![false; k];
    for (_, i, j) in scores {
        if assigned[i].is_none() && !used[j] {
            assigned[i] = Some(j);
            used[j] = true;
        }
    }
    assigned.into_iter().map(|a| a.expect("complete matching")).collect()
}

/// Unmixes a synthetic fluorescence data set with each algorithm and
/// correlates the Wiener-separated sources with oracle sources obtained from
/// the true spectra.
pub fn run_fluor_experiment<S: Scalar>(
    rows: usize,
    cols: usize,
    seed: u64,
    iterations: usize,
) -> Result<FluorReport<S>> {
    let k = FLUOR_COMPONENTS;
    let mix: FluorescenceMixture<S> = gen_fluorescence_mixture(rows, cols, k, child_seed(seed, 0))?;
    let eps = FitConfig::<S>::new(Model::Euclidean, k, 1).epsilon;

    let oracle_cfg = Algorithm::Euclidean.config::<S>(k, ORACLE_ITERATIONS, child_seed(seed, 1));
    let oracle_init = FactorPair::new(
        mix.spectra.clone(),
        init_factors(rows, cols, k, child_seed(seed, 1), eps)?.h().clone(),
    )?;
    let (oracle, _) = fit_from(&mix.x, &oracle_cfg, oracle_init, Update::OnlyH)?;
    let oracle_sources = wiener_separate(&mix.x, &rank1_components(&oracle), eps)?;

    let mut correlations = Vec::with_capacity(FLUOR_ALGORITHMS.len());
    for (i, &alg) in FLUOR_ALGORITHMS.iter().enumerate() {
        let cfg = alg.config::<S>(k, iterations, child_seed(seed, 2 + i as u64));
        let (est, _) = fit(&mix.x, &cfg)?;
        let order = align_components(&mix.spectra, est.w())?;
        let parts = rank1_components(&est);
        let aligned = ComponentSet::new(order.iter().map(|&j| parts.parts()[j].clone()).collect())?;
        let sources = wiener_separate(&mix.x, &aligned, eps)?;
        let per_source = sources
            .iter()
            .zip(&oracle_sources)
            .map(|(s, o)| matrix_correlation(s, o))
            .collect::<Result<Vec<S>>>()?;
        correlations.push((alg, per_source));
    }
    Ok(FluorReport { correlations })
}
