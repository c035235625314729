use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use levy_nmf::experiments::{
    gen_harmonic_spectrogram, run_fluor_experiment, run_impulsive_bench, run_inpaint_experiment,
    BenchConfig, FLUOR_ALGORITHMS,
};
use levy_nmf::nmf::{fit, FitConfig, Model, Rule};
use levy_nmf::separation::{rank1_components, wiener_separate};
use levy_nmf::signal::{read_matrix_csv, read_wav_mono, stft_magnitude, write_matrix_csv, StftConfig};
use levy_nmf::{Error, FactorPair, Result};

/// Lévy NMF fitting, separation and experiment pipelines.
#[derive(Debug, Parser)]
#[command(name = "levynmf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factorize a nonnegative CSV matrix.
    Fit(FitArgs),
    /// Split a matrix into rank-1 sources with Wiener masks.
    Separate(SeparateArgs),
    /// Impulsive-noise benchmark on synthetic α-stable data.
    BenchImpulsive(BenchArgs),
    /// Spectrogram restoration after impulsive corruption.
    Inpaint(InpaintArgs),
    /// Synthetic fluorescence unmixing.
    Fluor(FluorArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Levy,
    Kl,
    Is,
    #[value(alias = "euclidean")]
    Eu,
    /// Itakura-Saito with a `--mask` of trusted cells.
    #[value(name = "weighted-is")]
    WeightedIs,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Levy => Model::Levy,
            ModelArg::Kl => Model::Kl,
            ModelArg::Is => Model::Is,
            ModelArg::Eu => Model::Euclidean,
            ModelArg::WeightedIs => Model::WeightedIs,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Mur,
    Mm,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Mur => Rule::Mur,
            RuleArg::Mm => Rule::Mm,
        }
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "levy")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "mm")]
    rule: RuleArg,
    #[arg(long, default_value_t = 5)]
    rank: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// 0/1 matrix of trusted cells, for weighted-is.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long)]
    out_w: PathBuf,
    #[arg(long)]
    out_h: PathBuf,
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SeparateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    w: PathBuf,
    #[arg(long)]
    h: PathBuf,
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5")]
    alphas: Vec<f64>,
    #[arg(long, value_parser = parse_size, default_value = "50,50")]
    size: (usize, usize),
    #[arg(long, default_value_t = 5)]
    rank: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct InpaintArgs {
    /// WAV file or CSV spectrogram; a synthetic harmonic spectrogram when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    fraction: f64,
    #[arg(long, default_value_t = 30)]
    rank: usize,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Frames of the synthetic input.
    #[arg(long, default_value_t = 200)]
    frames: usize,
    /// Per-algorithm log-KL report.
    #[arg(long)]
    out: PathBuf,
    /// Restored Lévy spectrogram; defaults to `<out>` with a `_levy` suffix.
    #[arg(long)]
    out_restored: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FluorArgs {
    #[arg(long, value_parser = parse_size, default_value = "128,400")]
    size: (usize, usize),
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (f, t) = s
        .split_once(',')
        .ok_or_else(|| format!("expected F,T but got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(f)?, parse(t)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    eprintln!("config: {:?}", cli.command);
    let outcome = match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Separate(a) => cmd_separate(a),
        Command::BenchImpulsive(a) => cmd_bench(a),
        Command::Inpaint(a) => cmd_inpaint(a),
        Command::Fluor(a) => cmd_fluor(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn write_rows<R: Serialize>(path: &Path, rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut out = csv_writer(path)?;
    for row in rows {
        out.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let x = read_matrix_csv::<f64>(&a.input)?;
    let mut cfg = FitConfig::new(a.model.into(), a.rank, a.iters)
        .with_rule(a.rule.into())
        .with_seed(a.seed);
    if let Some(mask) = &a.mask {
        cfg = cfg.with_mask(read_matrix_csv(mask)?);
    }
    let (factors, trace) = fit(&x, &cfg)?;
    write_matrix_csv(factors.w(), &a.out_w)?;
    write_matrix_csv(factors.h(), &a.out_h)?;
    if let Some(path) = &a.trace {
        #[derive(Serialize)]
        struct Row {
            iteration: usize,
            cost: f64,
        }
        let rows = trace.costs.iter().enumerate().map(|(i, &cost)| Row { iteration: i + 1, cost });
        write_rows(path, rows)?;
    }
    eprintln!("final cost {:e}", trace.costs.last().copied().unwrap_or(f64::NAN));
    Ok(())
}

fn cmd_separate(a: &SeparateArgs) -> Result<()> {
    let x = read_matrix_csv::<f64>(&a.input)?;
    let factors = FactorPair::new(read_matrix_csv(&a.w)?, read_matrix_csv(&a.h)?)?;
    let sources = wiener_separate(&x, &rank1_components(&factors), 1e-12)?;
    let prefix = a.out_prefix.to_string_lossy();
    for (k, source) in sources.iter().enumerate() {
        write_matrix_csv(source, format!("{prefix}_{}.csv", k + 1))?;
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let config = BenchConfig {
        alphas: a.alphas.clone(),
        rows: a.size.0,
        cols: a.size.1,
        rank: a.rank,
        iterations: a.iters,
        runs: a.runs,
        seed: a.seed,
    };
    let results = run_impulsive_bench(&config)?;
    #[derive(Serialize)]
    struct Row {
        algorithm: &'static str,
        alpha: f64,
        run: usize,
        alpha_dispersion: f64,
        kl: f64,
        seed: u64,
    }
    write_rows(
        &a.out,
        results.iter().map(|r| Row {
            algorithm: r.algorithm.name(),
            alpha: r.alpha,
            run: r.run_index,
            alpha_dispersion: r.log_alpha_dispersion,
            kl: r.log_kl,
            seed: r.seed,
        }),
    )
}

fn cmd_inpaint(a: &InpaintArgs) -> Result<()> {
    if !(0.0..1.0).contains(&a.fraction) {
        return Err(Error::config(format!("fraction must lie in [0, 1), got {}", a.fraction)));
    }
    let spectrogram = match &a.input {
        None => gen_harmonic_spectrogram::<f64>(a.frames, a.seed)?,
        Some(path) if has_extension(path, "wav") => {
            let audio = read_wav_mono::<f64>(path)?;
            let stft = StftConfig::for_sample_rate(audio.sample_rate())?;
            stft_magnitude(&audio, &stft)?
        }
        Some(path) => read_matrix_csv(path)?,
    };
    let report = run_inpaint_experiment(&spectrogram, a.fraction, a.rank, a.iters, a.seed)?;
    #[derive(Serialize)]
    struct Row {
        algorithm: &'static str,
        log_kl: f64,
    }
    write_rows(
        &a.out,
        report.log_kl.iter().map(|&(alg, v)| Row { algorithm: alg.name(), log_kl: v }),
    )?;
    let restored = a.out_restored.clone().unwrap_or_else(|| suffixed(&a.out, "_levy"));
    write_matrix_csv(&report.levy_estimate, restored)?;
    eprintln!("corrupted cells: {}", report.corrupted);
    Ok(())
}

fn cmd_fluor(a: &FluorArgs) -> Result<()> {
    let report = run_fluor_experiment::<f64>(a.size.0, a.size.1, a.seed, a.iters)?;
    let mut out = csv_writer(&a.out)?;
    let sources = report.correlations.first().map_or(0, |(_, v)| v.len());
    let header = std::iter::once("algorithm".to_string()).chain((1..=sources).map(|k| format!("source_{k}")));
    out.write_record(header).map_err(|e| csv_error(&a.out, e))?;
    for alg in FLUOR_ALGORITHMS {
        let values = report.get(alg).unwrap_or_default();
        let record = std::iter::once(alg.name().to_string()).chain(values.iter().map(|v| format!("{v:e}")));
        out.write_record(record).map_err(|e| csv_error(&a.out, e))?;
    }
    out.flush().map_err(|e| Error::io(&a.out, e))
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

/// `dir/report.csv` + `_levy` → `dir/report_levy.csv`.
fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}
