//! Time-domain statistics of a real series: mean, central moments,
//! autocorrelation and value entropy.

use std::cmp::Ordering;

use crate::error::{Error, Result};

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

/// `(1/N) Σ (x_i − μ)^k` for `k ∈ {2, 3, 4}`.
pub fn central_moment(x: &[f64], k: u32) -> Result<f64> {
    if !(2..=4).contains(&k) {
        return Err(Error::invalid(format!("central moment order {k} not in 2..=4")));
    }
    if x.len() < 2 {
        return Err(Error::SeriesTooShort {
            required: 2,
            actual: x.len(),
        });
    }
    let mu = mean(x);
    let sum: f64 = x.iter().map(|v| (v - mu).powi(k as i32)).sum();
    Ok(sum / x.len() as f64)
}

/// Raw autocorrelation `R(k) = 1/(N−|k|) Σ s(i+|k|) s(i)` with no mean
/// removal or variance normalization.
pub fn autocorr(x: &[f64], lag: isize) -> Result<f64> {
    let k = lag.unsigned_abs();
    if k >= x.len() {
        return Err(Error::invalid(format!(
            "lag {lag} out of range for series of length {}",
            x.len()
        )));
    }
    let n = x.len() - k;
    let sum: f64 = x[k..].iter().zip(&x[..n]).map(|(a, b)| a * b).sum();
    Ok(sum / n as f64)
}

/// Shannon entropy (natural log) of the empirical distribution of distinct
/// values in `x`.
pub fn entropy(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut h = 0.0;
    let mut run = 1usize;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i].total_cmp(&sorted[i - 1]) == Ordering::Equal {
            run += 1;
        } else {
            let p = run as f64 / n;
            h -= p * p.ln();
            run = 1;
        }
    }
    h.max(0.0)
}

/// Entropy of a byte vector via a 256-bin histogram. Equals
/// [`entropy`] over the same values.
pub fn byte_entropy(bytes: &[u8]) -> f64 {
    if bytes.is_empty() {
        return 0.0;
    }
    let mut hist = [0usize; 256];
    for &b in bytes {
        hist[b as usize] += 1;
    }
    let n = bytes.len() as f64;
    let h: f64 = hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum();
    h.max(0.0)
}

pub fn distinct_count(x: &[f64]) -> usize {
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted.dedup_by(|a, b| a.total_cmp(b) == Ordering::Equal);
    sorted.len()
}
