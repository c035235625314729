//! Matrix CSV files, mono WAV ingestion and magnitude spectrograms.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use rustfft::num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::scalar::Scalar;

/// Mono audio with samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer<S> {
    samples: Vec<S>,
    sample_rate: u32,
}

impl<S: Scalar> AudioBuffer<S> {
    pub fn new(samples: Vec<S>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("audio buffer is empty"));
        }
        if sample_rate == 0 {
            return Err(Error::domain("sample rate must be positive"));
        }
        if let Some(i) = samples
            .iter()
            .position(|s| !(s.abs() <= S::one()))
        {
            return Err(Error::domain(format!(
                "sample {i} = {} is outside [-1, 1]",
                samples[i]
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[S] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// Periodic Hann, `w[n] = ½ − ½ cos(2πn/L)`.
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StftConfig {
    window_len: usize,
    hop: usize,
    window: Window,
}

impl StftConfig {
    pub fn new(window_len: usize, hop: usize) -> Result<Self> {
        if window_len == 0 || hop == 0 || hop > window_len {
            return Err(Error::config(format!(
                "need 0 < hop <= window_len, got hop {hop} and window {window_len}"
            )));
        }
        Ok(Self {
            window_len,
            hop,
            window: Window::Hann,
        })
    }

    /// 125 ms Hann window with 75% overlap; 1000/250 samples at 8 kHz.
    pub fn for_sample_rate(rate: u32) -> Result<Self> {
        let window = (0.125 * f64::from(rate)).round().max(1.0) as usize;
        let hop = (window as f64 / 4.0).round().max(1.0) as usize;
        Self::new(window, hop)
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Number of frames for a signal of `n` samples (no padding).
    pub fn frame_count(&self, n: usize) -> usize {
        if n < self.window_len {
            0
        } else {
            (n - self.window_len) / self.hop + 1
        }
    }

    pub fn bin_count(&self) -> usize {
        self.window_len / 2 + 1
    }
}

fn window_coefficients<S: Scalar>(config: &StftConfig) -> Vec<S> {
    let len = config.window_len as f64;
    match config.window {
        Window::Hann => (0..config.window_len)
            .map(|n| S::of(0.5 - 0.5 * (2.0 * std::f64::consts::PI * n as f64 / len).cos()))
            .collect(),
    }
}

/// Magnitude STFT: bins `0..=L/2` as rows, frames as columns.
///
/// Frame `t` covers samples `[t·hop, t·hop + L)`; there is no centering or
/// zero padding and the DFT size equals the window length `L`.
pub fn stft_magnitude<S: Scalar + FftNum>(
    audio: &AudioBuffer<S>,
    config: &StftConfig,
) -> Result<NonnegMatrix<S>> {
    let frames = config.frame_count(audio.len());
    if frames == 0 {
        return Err(Error::domain(format!(
            "audio has {} samples, shorter than one {}-sample window",
            audio.len(),
            config.window_len
        )));
    }
    let window = window_coefficients::<S>(config);
    let fft = FftPlanner::<S>::new().plan_fft_forward(config.window_len);
    let bins = config.bin_count();
    let mut out = Array2::<S>::zeros((bins, frames));
    let mut buffer = vec![Complex::new(S::zero(), S::zero()); config.window_len];
    for t in 0..frames {
        let start = t * config.hop;
        let frame = &audio.samples[start..start + config.window_len];
        for ((slot, &x), &w) in buffer.iter_mut().zip(frame).zip(&window) {
            *slot = Complex::new(x * w, S::zero());
        }
        fft.process(&mut buffer);
        for (f, value) in buffer.iter().take(bins).enumerate() {
            out[[f, t]] = value.norm();
        }
    }
    NonnegMatrix::new(out)
}

/// Reads a PCM16 or IEEE-float32 WAV file, averaging channels to mono.
pub fn read_wav_mono<S: Scalar>(path: impl AsRef<Path>) -> Result<AudioBuffer<S>> {
    let path = path.as_ref();
    let format_err = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    let reader = hound::WavReader::open(path).map_err(|e| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => format_err(format!("invalid WAV: {other}")),
    })?;
    let spec = reader.spec();
    let channels = usize::from(spec.channels);
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| f64::from(v) / 32768.0))
            .collect::<std::result::Result<_, _>>(),
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| f64::from(v).clamp(-1.0, 1.0)))
            .collect::<std::result::Result<_, _>>(),
        (format, bits) => {
            return Err(format_err(format!(
                "unsupported encoding {format:?} with {bits} bits; expected 16-bit PCM or 32-bit float"
            )))
        }
    }
    .map_err(|e| format_err(format!("corrupt or truncated sample data: {e}")))?;
    if !interleaved.len().is_multiple_of(channels) {
        return Err(format_err("sample data ends mid-frame".into()));
    }
    let mono: Vec<S> = interleaved
        .chunks_exact(channels)
        .map(|frame| S::of(frame.iter().sum::<f64>() / channels as f64))
        .collect();
    if mono.is_empty() {
        return Err(format_err("no audio samples".into()));
    }
    AudioBuffer::new(mono, spec.sample_rate)
}

/// Writes a 16-bit PCM mono WAV file.
pub fn write_wav_mono<S: Scalar>(path: impl AsRef<Path>, audio: &AudioBuffer<S>) -> Result<()> {
    let path = path.as_ref();
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: audio.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let to_err = |e: hound::Error| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::Format {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(to_err)?;
    for &s in &audio.samples {
        let v = (s.as_f64() * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer.write_sample(v).map_err(to_err)?;
    }
    writer.finalize().map_err(to_err)
}

/// Serializes a matrix as header-less CSV, one row per line, each value with
/// enough significant digits (17 for `f64`) to round-trip exactly.
pub fn matrix_to_csv<S: Scalar>(m: &NonnegMatrix<S>) -> String {
    let precision = S::ROUND_TRIP_DIGITS - 1;
    let mut out = String::new();
    for row in m.as_array().rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.*e}", precision, v);
        }
        out.push('\n');
    }
    out
}

/// Parses header-less CSV; row and column numbers in errors are 1-based.
pub fn matrix_from_csv<S: Scalar>(text: &str) -> Result<NonnegMatrix<S>> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.trim().is_empty() {
        return Err(Error::Parse {
            row: 0,
            col: 0,
            message: "empty matrix file".into(),
        });
    }
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, line) in body.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut count = 0;
        for (j, cell) in line.split(',').enumerate() {
            let parsed: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                row: i + 1,
                col: j + 1,
                message: format!("'{cell}' is not a number"),
            })?;
            if !(parsed.is_finite() && parsed >= 0.0) {
                return Err(Error::Parse {
                    row: i + 1,
                    col: j + 1,
                    message: format!("{cell} is not a finite nonnegative value"),
                });
            }
            values.push(S::of(parsed));
            count += 1;
        }
        match cols {
            None => cols = Some(count),
            Some(c) if c != count => {
                return Err(Error::Parse {
                    row: i + 1,
                    col: count.min(c) + 1,
                    message: format!("row has {count} values, expected {c}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    NonnegMatrix::from_shape_vec(rows, cols.unwrap_or(0), values)
}

pub fn write_matrix_csv<S: Scalar>(m: &NonnegMatrix<S>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, matrix_to_csv(m)).map_err(|e| Error::io(path, e))
}

pub fn read_matrix_csv<S: Scalar>(path: impl AsRef<Path>) -> Result<NonnegMatrix<S>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    matrix_from_csv(&text)
}
