//! Delay embedding, false-nearest-neighbour statistics and the largest
//! Lyapunov exponent.
//!
//! Neighbour searches exclude temporally close points (`|n − m| ≤ T·D`) and
//! points at zero distance, so duplicated byte patterns never pair with
//! themselves.

use crate::error::{Error, Result};

pub const DEFAULT_DELAY: usize = 1;
pub const DEFAULT_FNN_TOLERANCE: f64 = 10.0;
pub const FNF_DIMS: std::ops::RangeInclusive<usize> = 3..=7;
pub const LYAPUNOV_DIMS: std::ops::RangeInclusive<usize> = 1..=11;
const MIN_LYAPUNOV_POINTS: usize = 16;

/// Delay-coordinate view `s[n] = [x(n), x(n+T), …, x(n+(D−1)T)]` over a series.
#[derive(Debug, Clone, Copy)]
pub struct Embedding<'a> {
    series: &'a [f64],
    dim: usize,
    delay: usize,
}

impl<'a> Embedding<'a> {
    pub fn new(series: &'a [f64], dim: usize, delay: usize) -> Result<Self> {
        if dim == 0 || delay == 0 {
            return Err(Error::invalid("embedding dimension and delay must be ≥ 1"));
        }
        let required = (dim - 1) * delay + 1;
        if series.len() < required {
            return Err(Error::SeriesTooShort {
                required,
                actual: series.len(),
            });
        }
        Ok(Embedding { series, dim, delay })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    /// `N − (D−1)·T`.
    pub fn len(&self) -> usize {
        self.series.len() - (self.dim - 1) * self.delay
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, n: usize) -> impl Iterator<Item = f64> + 'a {
        let (s, t) = (self.series, self.delay);
        (0..self.dim).map(move |k| s[n + k * t])
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|n| self.point(n).collect()).collect()
    }

    /// Squared Euclidean distance between points `n` and `m`.
    pub fn dist_sq(&self, n: usize, m: usize) -> f64 {
        let (s, t) = (self.series, self.delay);
        (0..self.dim)
            .map(|k| {
                let d = s[n + k * t] - s[m + k * t];
                d * d
            })
            .sum()
    }
}

pub fn embed(x: &[f64], dim: usize, delay: usize) -> Result<Embedding<'_>> {
    Embedding::new(x, dim, delay)
}

/// Nearest neighbour `(index, squared distance)` of a point.
pub type Neighbor = Option<(usize, f64)>;

/// Nearest neighbour of each of the first `count` embedded points among the
/// same `count` points, skipping candidates with `|i − j| ≤ exclusion` or zero
/// distance. Equal distances resolve to the lowest index.
///
/// Candidates are visited in order of their first coordinate, outward from
/// the query, stopping once that coordinate alone rules out a tie.
pub fn nearest_neighbors(emb: &Embedding<'_>, count: usize, exclusion: usize) -> Vec<Neighbor> {
    assert!(count <= emb.len());
    let s = emb.series;
    let t = emb.delay;
    let dim = emb.dim;
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]).then(a.cmp(&b)));
    let mut rank = vec![0usize; count];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let consider = |i: usize, j: usize, best: &mut (f64, usize)| {
        if i.abs_diff(j) <= exclusion {
            return;
        }
        let mut acc = 0.0;
        for k in 0..dim {
            let d = s[i + k * t] - s[j + k * t];
            acc += d * d;
            if acc > best.0 {
                return;
            }
        }
        if acc > 0.0 && (acc < best.0 || j < best.1) {
            *best = (acc, j);
        }
    };

    (0..count)
        .map(|i| {
            let mut best = (f64::INFINITY, usize::MAX);
            let r = rank[i];
            let x0 = s[i];
            for &j in &order[r + 1..] {
                let d = s[j] - x0;
                if d * d > best.0 {
                    break;
                }
                consider(i, j, &mut best);
            }
            for &j in order[..r].iter().rev() {
                let d = s[j] - x0;
                if d * d > best.0 {
                    break;
                }
                consider(i, j, &mut best);
            }
            (best.1 != usize::MAX).then_some((best.1, best.0))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FnnStats {
    /// Fraction of neighbour pairs that are false, in `[0, 1]`.
    pub fraction: f64,
    /// Mean dimension-`D` distance over false pairs (0 when none).
    pub mean_false_dist: f64,
    /// Root-mean-square neighbour distance over all pairs.
    pub rms: f64,
}

/// False-nearest-neighbour statistics at dimension `dim`. A pair is false when
/// `d_{D+1} / d_D > r_tol`, with `d_{D+1}² = d_D² + (x(n+DT) − x(m+DT))²`.
pub fn fnf(x: &[f64], dim: usize, delay: usize, r_tol: f64) -> Result<FnnStats> {
    if !(r_tol > 0.0) {
        return Err(Error::invalid(format!("tolerance {r_tol} must be positive")));
    }
    // Points whose (D+1)-th coordinate exists.
    let emb_next = Embedding::new(x, dim + 1, delay)?;
    let count = emb_next.len();
    if count < 2 {
        return Err(Error::SeriesTooShort {
            required: dim * delay + 2,
            actual: x.len(),
        });
    }
    let emb = Embedding::new(x, dim, delay)?;
    let neighbors = nearest_neighbors(&emb, count, delay * dim);
    Ok(fnf_from_neighbors(x, dim, delay, r_tol, &neighbors))
}

fn fnf_from_neighbors(x: &[f64], dim: usize, delay: usize, r_tol: f64, neighbors: &[Neighbor]) -> FnnStats {
    let shift = dim * delay;
    let (mut pairs, mut false_pairs) = (0usize, 0usize);
    let (mut sum_false, mut sum_sq) = (0.0, 0.0);
    for (i, nb) in neighbors.iter().enumerate() {
        let Some((j, d2)) = *nb else { continue };
        let extra = x[i + shift] - x[j + shift];
        let ratio = ((d2 + extra * extra) / d2).sqrt();
        pairs += 1;
        sum_sq += d2;
        if ratio > r_tol {
            false_pairs += 1;
            sum_false += d2.sqrt();
        }
    }
    if pairs == 0 {
        return FnnStats::default();
    }
    FnnStats {
        fraction: false_pairs as f64 / pairs as f64,
        mean_false_dist: if false_pairs > 0 {
            sum_false / false_pairs as f64
        } else {
            0.0
        },
        rms: (sum_sq / pairs as f64).sqrt(),
    }
}

/// Largest Lyapunov exponent estimate: the mean one-step log divergence
/// `ln(d(s(n+1), s(m+1)) / d(s(n), s(m)))` over nearest-neighbour pairs.
pub fn lyapunov(x: &[f64], dim: usize, delay: usize) -> Result<f64> {
    let emb = Embedding::new(x, dim, delay)?;
    if emb.len() < MIN_LYAPUNOV_POINTS {
        return Err(Error::SeriesTooShort {
            required: (dim - 1) * delay + MIN_LYAPUNOV_POINTS,
            actual: x.len(),
        });
    }
    let neighbors = nearest_neighbors(&emb, emb.len() - 1, delay * dim);
    lyapunov_from_neighbors(&emb, &neighbors)
}

fn lyapunov_from_neighbors(emb: &Embedding<'_>, neighbors: &[Neighbor]) -> Result<f64> {
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (i, nb) in neighbors.iter().enumerate() {
        let Some((j, d0)) = *nb else { continue };
        let d1 = emb.dist_sq(i + 1, j + 1);
        if d1 > 0.0 {
            sum += 0.5 * (d1 / d0).ln();
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(Error::DegenerateTrajectory);
    }
    Ok(sum / pairs as f64)
}

/// FNF, mean false distance and RMS for D = 3..=7, then LE for D = 1..=11.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChaoticFeatures {
    pub fnf: [f64; 5],
    pub mean_false_dist: [f64; 5],
    pub rms: [f64; 5],
    pub lyapunov: [f64; 11],
}

impl ChaoticFeatures {
    pub fn to_vec(&self) -> Vec<f64> {
        self.fnf
            .iter()
            .chain(&self.mean_false_dist)
            .chain(&self.rms)
            .chain(&self.lyapunov)
            .copied()
            .collect()
    }
}

/// Full chaotic feature block. A degenerate trajectory (no usable neighbour
/// pair) yields an exponent of 0 for that dimension.
pub fn chaotic_features(x: &[f64], delay: usize, r_tol: f64) -> Result<ChaoticFeatures> {
    if !(r_tol > 0.0) {
        return Err(Error::invalid(format!("tolerance {r_tol} must be positive")));
    }
    let mut out = ChaoticFeatures::default();
    for (li, d) in LYAPUNOV_DIMS.enumerate() {
        let emb = Embedding::new(x, d, delay)?;
        if emb.len() < MIN_LYAPUNOV_POINTS {
            return Err(Error::SeriesTooShort {
                required: (d - 1) * delay + MIN_LYAPUNOV_POINTS,
                actual: x.len(),
            });
        }
        // Both estimators search the first N − D·T points when T = 1.
        let lyap_count = emb.len() - 1;
        let fnf_slot = FNF_DIMS.contains(&d).then(|| d - FNF_DIMS.start());
        let neighbors = nearest_neighbors(&emb, lyap_count, delay * d);
        if let Some(fi) = fnf_slot {
            let fnf_count = x.len() - d * delay;
            let s = if fnf_count == lyap_count {
                fnf_from_neighbors(x, d, delay, r_tol, &neighbors)
            } else {
                fnf(x, d, delay, r_tol)?
            };
            out.fnf[fi] = s.fraction;
            out.mean_false_dist[fi] = s.mean_false_dist;
            out.rms[fi] = s.rms;
        }
        out.lyapunov[li] = match lyapunov_from_neighbors(&emb, &neighbors) {
            Ok(v) => v,
            Err(Error::DegenerateTrajectory) => 0.0,
            Err(e) => return Err(e),
        };
    }
    Ok(out)
}
