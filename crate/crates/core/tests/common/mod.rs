//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::HashMap;

use codecid::features::chaotic::{Embedding, Neighbor};

/// Longest common substring by extending every start pair.
pub fn substring_oracle(a: &[u8], b: &[u8]) -> usize {
    let mut best = 0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            let mut k = 0;
            while i + k < a.len() && j + k < b.len() && a[i + k] == b[j + k] {
                k += 1;
            }
            best = best.max(k);
        }
    }
    best
}

/// Longest common subsequence from the recursive definition, memoized.
pub fn subsequence_oracle(a: &[u8], b: &[u8]) -> usize {
    fn go(a: &[u8], b: &[u8], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == a.len() || j == b.len() {
            return 0;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = if a[i] == b[j] {
            1 + go(a, b, i + 1, j + 1, memo)
        } else {
            go(a, b, i + 1, j, memo).max(go(a, b, i, j + 1, memo))
        };
        memo.insert((i, j), v);
        v
    }
    go(a, b, 0, 0, &mut HashMap::new())
}

fn is_subsequence(needle: &[u8], hay: &[u8]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|c| it.any(|h| h == c))
}

/// Exhaustive: the longest subsequence of the shorter input (all 2^n masks)
/// that is also a subsequence of the other. Only for short inputs.
pub fn subsequence_exhaustive(a: &[u8], b: &[u8]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    assert!(short.len() <= 16);
    let mut best = 0;
    let mut buf = Vec::with_capacity(short.len());
    for mask in 0u32..(1 << short.len()) {
        let ones = mask.count_ones() as usize;
        if ones <= best {
            continue;
        }
        buf.clear();
        buf.extend((0..short.len()).filter(|&k| mask >> k & 1 == 1).map(|k| short[k]));
        if is_subsequence(&buf, long) {
            best = ones;
        }
    }
    best
}

/// O(n²) nearest neighbours with the production rules: skip
/// `|i − j| ≤ exclusion` and zero distances, ties to the lowest index.
pub fn neighbors_oracle(emb: &Embedding<'_>, count: usize, exclusion: usize) -> Vec<Neighbor> {
    (0..count)
        .map(|i| {
            let mut best: Neighbor = None;
            for j in 0..count {
                if i.abs_diff(j) <= exclusion {
                    continue;
                }
                let d = emb.dist_sq(i, j);
                if d == 0.0 {
                    continue;
                }
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            best
        })
        .collect()
}

/// Solves the soft-margin SVM dual
/// `min ½ αᵀQα − Σα` s.t. `0 ≤ α ≤ C`, `yᵀα = 0` by accelerated projected
/// gradient. Projection onto the box ∩ hyperplane bisects the multiplier.
pub fn svm_dual_oracle(kernel: &[f64], y: &[f64], c: f64, iters: usize) -> Vec<f64> {
    let n = y.len();
    let q = |i: usize, j: usize| y[i] * y[j] * kernel[i * n + j];
    let lipschitz = (0..n)
        .map(|i| (0..n).map(|j| q(i, j).abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1e-12);
    let project = |v: &[f64]| -> Vec<f64> {
        let at = |lam: f64| -> (Vec<f64>, f64) {
            let a: Vec<f64> = v.iter().zip(y).map(|(vi, yi)| (vi - lam * yi).clamp(0.0, c)).collect();
            let s = a.iter().zip(y).map(|(ai, yi)| ai * yi).sum();
            (a, s)
        };
        // s(λ) is nonincreasing in λ
        let (mut lo, mut hi) = (-1.0, 1.0);
        while at(lo).1 < 0.0 {
            lo *= 2.0;
        }
        while at(hi).1 > 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if at(mid).1 > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(0.5 * (lo + hi)).0
    };
    let grad = |a: &[f64]| -> Vec<f64> { (0..n).map(|i| (0..n).map(|j| q(i, j) * a[j]).sum::<f64>() - 1.0).collect() };
    let mut x = vec![0.0; n];
    let mut z = x.clone();
    let mut t = 1.0f64;
    for _ in 0..iters {
        let g = grad(&z);
        let step: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - gi / lipschitz).collect();
        let x_next = project(&step);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = x_next
            .iter()
            .zip(&x)
            .map(|(xn, xo)| xn + (t - 1.0) / t_next * (xn - xo))
            .collect();
        x = x_next;
        t = t_next;
    }
    x
}

pub fn dual_objective(kernel: &[f64], y: &[f64], alpha: &[f64]) -> f64 {
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel[i * n + j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Bias for a dual solution: mean of `yᵢ − Σ αⱼyⱼKᵢⱼ` over free vectors,
/// falling back to the midpoint of the feasible interval.
pub fn svm_bias(kernel: &[f64], y: &[f64], alpha: &[f64], c: f64) -> f64 {
    let n = y.len();
    let f = |i: usize| (0..n).map(|j| alpha[j] * y[j] * kernel[i * n + j]).sum::<f64>();
    let tol = 1e-6 * c;
    let free: Vec<f64> = (0..n)
        .filter(|&i| alpha[i] > tol && alpha[i] < c - tol)
        .map(|i| y[i] - f(i))
        .collect();
    if !free.is_empty() {
        return free.iter().sum::<f64>() / free.len() as f64;
    }
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..n {
        let r = y[i] - f(i);
        let at_upper = alpha[i] >= c - tol;
        if (y[i] > 0.0) != at_upper {
            lo = lo.max(r);
        } else {
            hi = hi.min(r);
        }
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo,
        (false, true) => hi,
        _ => 0.0,
    }
}

pub fn logistic_map(n: usize, x0: f64) -> Vec<f64> {
    let mut x = x0;
    (0..n)
        .map(|_| {
            let v = x;
            x = 4.0 * x * (1.0 - x);
            v * 255.0
        })
        .collect()
}

pub fn sinusoid(n: usize, period: f64) -> Vec<f64> {
    (0..n)
        .map(|t| 127.5 + 127.5 * (std::f64::consts::TAU * t as f64 / period).sin())
        .collect()
}
