//! Six-statistic spectral-statistical baseline over a scalar series.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub const MIN_SERIES_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsmFeatures {
    pub std_dev: f64,
    pub skewness: f64,
    /// Raw fourth standardized moment (a Gaussian gives 3).
    pub kurtosis: f64,
    pub peak_to_peak: f64,
    pub rms: f64,
    /// Magnitude-weighted mean frequency, DC bin excluded, in units of `sample_rate`.
    pub spectral_centroid: f64,
    /// Set when the series is constant; skewness and kurtosis are then 0.
    pub degenerate: bool,
}

impl SsmFeatures {
    pub const NAMES: [&'static str; 6] = [
        "std_dev",
        "skewness",
        "kurtosis",
        "peak_to_peak",
        "rms",
        "spectral_centroid",
    ];

    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.std_dev,
            self.skewness,
            self.kurtosis,
            self.peak_to_peak,
            self.rms,
            self.spectral_centroid,
        ]
    }
}

pub fn ssm_features(series: &[f64], sample_rate: f64) -> Result<SsmFeatures> {
    let n = series.len();
    if n < MIN_SERIES_LEN {
        return domain(format!(
            "series needs at least {MIN_SERIES_LEN} samples, got {n}"
        ));
    }
    if !(sample_rate > 0.0) || !sample_rate.is_finite() {
        return domain(format!("sample rate must be positive, got {sample_rate}"));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return domain("series contains non-finite values");
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    let std_dev = var.sqrt();
    let degenerate = std_dev == 0.0;
    let (skewness, kurtosis) = if degenerate {
        (0.0, 0.0)
    } else {
        let m3 = series
            .iter()
            .map(|x| ((x - mean) / std_dev).powi(3))
            .sum::<f64>()
            / nf;
        let m4 = series
            .iter()
            .map(|x| ((x - mean) / std_dev).powi(4))
            .sum::<f64>()
            / nf;
        (m3, m4)
    };
    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let rms = (series.iter().map(|x| x * x).sum::<f64>() / nf).sqrt();

    Ok(SsmFeatures {
        std_dev,
        skewness,
        kurtosis,
        peak_to_peak: hi - lo,
        rms,
        spectral_centroid: spectral_centroid(series, sample_rate),
        degenerate,
    })
}

/// `Σ f_k |X_k| / Σ |X_k|` over bins `1..=n/2`.
fn spectral_centroid(series: &[f64], sample_rate: f64) -> f64 {
    let n = series.len();
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let (mut num, mut den) = (0.0, 0.0);
    for (k, c) in buf.iter().enumerate().take(n / 2 + 1).skip(1) {
        let mag = c.norm();
        num += k as f64 * sample_rate / n as f64 * mag;
        den += mag;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}
