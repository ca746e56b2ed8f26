//! Plain-Rust demo operations; the `wasm_bindgen` layer only marshals these.

use std::f64::consts::TAU;

use codecid::corpus::ChunkParams;
use codecid::features::lcs::{lcs_cost_model, lcs_subsequence_len, lcs_substring_len};
use codecid::features::spectral::bicoherence_surface;
use codecid::features::BicoherenceParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcsLengths {
    pub substring: usize,
    pub subsequence: usize,
}

pub fn lcs_lengths(a: &[u8], b: &[u8]) -> LcsLengths {
    LcsLengths {
        substring: lcs_substring_len(a, b),
        subsequence: lcs_subsequence_len(a, b),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChunkPlan {
    pub packet_len: usize,
    pub chunk_len: usize,
    pub stride: usize,
    pub offsets: Vec<usize>,
    pub full_cells: u64,
    pub overlapped_cells: u64,
    pub ratio: f64,
}

pub fn chunk_plan(packet_len: usize, chunk_len: usize, overlap: f64) -> codecid::Result<ChunkPlan> {
    let params = ChunkParams::new(chunk_len, overlap)?;
    let n = params.count(packet_len)?;
    let cost = lcs_cost_model(packet_len, chunk_len, overlap)?;
    Ok(ChunkPlan {
        packet_len,
        chunk_len,
        stride: params.stride,
        offsets: (0..n).map(|i| i * params.stride).collect(),
        full_cells: cost.full_cells,
        overlapped_cells: cost.overlapped_cells,
        ratio: cost.ratio(),
    })
}

/// Three tones at `f1`, `f2` and `f1 + f2` (in bins of `seg_len`) mapped to
/// the byte range. With `coupled` the third phase is the sum of the first
/// two in every segment; otherwise all three are drawn independently.
pub fn triad_signal(coupled: bool, seg_len: usize, n_seg: usize, f1: usize, f2: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(seg_len * n_seg);
    for _ in 0..n_seg {
        let p1 = rng.random::<f64>() * TAU;
        let p2 = rng.random::<f64>() * TAU;
        let p3 = if coupled { p1 + p2 } else { rng.random::<f64>() * TAU };
        for n in 0..seg_len {
            let t = TAU * n as f64 / seg_len as f64;
            let s = (f1 as f64 * t + p1).cos() + (f2 as f64 * t + p2).cos() + ((f1 + f2) as f64 * t + p3).cos();
            out.push(127.5 + 40.0 * s);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BicoherenceMap {
    pub nyquist: usize,
    /// Row-major `nyquist × nyquist` grid of `b` indexed `[f1 - 1][f2 - 1]`;
    /// -1 outside the principal domain.
    pub grid: Vec<f64>,
    pub mean: f64,
    pub peak: (usize, usize, f64),
}

pub fn bicoherence_map(x: &[f64], seg_len: usize) -> codecid::Result<BicoherenceMap> {
    let params = BicoherenceParams {
        seg_len,
        n_seg: x.len() / seg_len.max(1),
    };
    let surface = bicoherence_surface(x, params)?;
    let nyq = surface.nyquist();
    let mut grid = vec![-1.0; nyq * nyq];
    let mut peak = (0, 0, -1.0);
    for (f1, f2, b2) in surface.iter() {
        let b = b2.sqrt();
        grid[(f1 - 1) * nyq + (f2 - 1)] = b;
        if b > peak.2 {
            peak = (f1, f2, b);
        }
    }
    Ok(BicoherenceMap {
        nyquist: nyq,
        grid,
        mean: surface.mean_magnitude(),
        peak,
    })
}
