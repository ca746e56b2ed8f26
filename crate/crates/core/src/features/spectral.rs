//! Frequency-domain features: DFT helpers, four-subband magnitude statistics
//! and segment-averaged bicoherence.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::features::stats::mean;

pub fn dft(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    if !buf.is_empty() {
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    }
    buf
}

/// Inverse of [`dft`], returning the real part.
pub fn idft(spectrum: &[Complex64]) -> Vec<f64> {
    let mut buf = spectrum.to_vec();
    if buf.is_empty() {
        return Vec::new();
    }
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    let n = buf.len() as f64;
    buf.iter().map(|c| c.re / n).collect()
}

/// Magnitudes of the positive-frequency bins `1..=N/2`.
pub fn positive_magnitudes(x: &[f64]) -> Vec<f64> {
    let spec = dft(x);
    (1..=x.len() / 2).map(|k| spec[k].norm()).collect()
}

/// Half-open bin ranges of four contiguous subbands over `n_bins` bins.
/// Widths differ by at most one.
pub fn subband_bounds(n_bins: usize) -> [(usize, usize); 4] {
    let edge = |i: usize| i * n_bins / 4;
    [
        (edge(0), edge(1)),
        (edge(1), edge(2)),
        (edge(2), edge(3)),
        (edge(3), edge(4)),
    ]
}

/// Mean, variance and third central moment of each subband.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SubbandFeatures {
    pub means: [f64; 4],
    pub variances: [f64; 4],
    pub skewness: [f64; 4],
}

impl SubbandFeatures {
    pub fn to_vec(&self) -> Vec<f64> {
        self.means
            .iter()
            .chain(&self.variances)
            .chain(&self.skewness)
            .copied()
            .collect()
    }
}

pub fn subband_features(x: &[f64]) -> Result<SubbandFeatures> {
    if x.len() < 8 {
        return Err(Error::SeriesTooShort {
            required: 8,
            actual: x.len(),
        });
    }
    let mags = positive_magnitudes(x);
    let mut out = SubbandFeatures::default();
    for (b, (lo, hi)) in subband_bounds(mags.len()).into_iter().enumerate() {
        let band = &mags[lo..hi];
        let mu = mean(band);
        let n = band.len() as f64;
        out.means[b] = mu;
        out.variances[b] = band.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
        out.skewness[b] = band.iter().map(|v| (v - mu).powi(3)).sum::<f64>() / n;
    }
    Ok(out)
}

/// Segmentation for the direct bicoherence estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BicoherenceParams {
    pub seg_len: usize,
    pub n_seg: usize,
}

impl BicoherenceParams {
    pub const DEFAULT_SEG_LEN: usize = 128;

    /// `seg_len = 128` (or the largest power of two ≤ N when shorter) and as
    /// many whole segments as fit.
    pub fn for_len(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::SeriesTooShort {
                required: 4,
                actual: n,
            });
        }
        let pow2 = 1usize << (usize::BITS - 1 - n.leading_zeros());
        let seg_len = Self::DEFAULT_SEG_LEN.min(pow2);
        Ok(BicoherenceParams {
            seg_len,
            n_seg: n / seg_len,
        })
    }
}

/// Squared bicoherence `b²(f1, f2)` over the principal domain
/// `1 ≤ f2 ≤ f1`, `f1 + f2 ≤ seg_len / 2`, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BicoherenceSurface {
    nyquist: usize,
    values: Vec<f64>,
}

impl BicoherenceSurface {
    pub fn nyquist(&self) -> usize {
        self.nyquist
    }

    /// Iterates `(f1, f2)` over the principal domain in storage order.
    pub fn domain(nyquist: usize) -> impl Iterator<Item = (usize, usize)> {
        (1..=nyquist).flat_map(move |f1| (1..=f1.min(nyquist - f1)).map(move |f2| (f1, f2)))
    }

    pub fn get(&self, f1: usize, f2: usize) -> Option<f64> {
        Self::domain(self.nyquist)
            .position(|p| p == (f1, f2))
            .map(|i| self.values[i])
    }

    /// `(f1, f2, b²)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        Self::domain(self.nyquist)
            .zip(&self.values)
            .map(|((a, b), &v)| (a, b, v))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mean of `b = sqrt(b²)` over the domain.
    pub fn mean_magnitude(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().map(|v| v.sqrt()).sum::<f64>() / self.values.len() as f64
    }
}

pub fn bicoherence_surface(x: &[f64], params: BicoherenceParams) -> Result<BicoherenceSurface> {
    let BicoherenceParams { seg_len, n_seg } = params;
    if seg_len < 4 || !seg_len.is_power_of_two() {
        return Err(Error::invalid(format!(
            "segment length {seg_len} must be a power of two ≥ 4"
        )));
    }
    if n_seg == 0 || x.len() < seg_len * n_seg {
        return Err(Error::SeriesTooShort {
            required: seg_len * n_seg.max(1),
            actual: x.len(),
        });
    }
    let nyquist = seg_len / 2;
    let fft = FftPlanner::new().plan_fft_forward(seg_len);
    let spectra: Vec<Vec<Complex64>> = x
        .chunks_exact(seg_len)
        .take(n_seg)
        .map(|seg| {
            let mut buf: Vec<Complex64> = seg.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft.process(&mut buf);
            buf
        })
        .collect();
    let m = n_seg as f64;
    let values = BicoherenceSurface::domain(nyquist)
        .map(|(f1, f2)| {
            let mut triple = Complex64::new(0.0, 0.0);
            let mut pair_power = 0.0;
            let mut sum_power = 0.0;
            for s in &spectra {
                let pair = s[f1] * s[f2];
                triple += pair * s[f1 + f2].conj();
                pair_power += pair.norm_sqr();
                sum_power += s[f1 + f2].norm_sqr();
            }
            let num = (triple / m).norm_sqr();
            let den = (pair_power / m) * (sum_power / m);
            if den > 0.0 {
                (num / den).min(1.0)
            } else {
                0.0
            }
        })
        .collect();
    Ok(BicoherenceSurface { nyquist, values })
}

/// Scalar bicoherence: mean `b` over the principal domain.
pub fn bicoherence(x: &[f64], params: BicoherenceParams) -> Result<f64> {
    Ok(bicoherence_surface(x, params)?.mean_magnitude())
}
