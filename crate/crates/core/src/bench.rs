//! Wall-clock comparison of full-packet and overlapped-chunk LCS extraction.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::corpus::{ChunkParams, RepresentativeSet};
use crate::error::{Error, Result};
use crate::features::lcs::{lcs_cost_model, lcs_features_full, lcs_features_overlapped, SeqAggregate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub packet_len: usize,
    pub chunk_len: usize,
    pub overlap: f64,
    pub chunks: usize,
    pub packets: usize,
    pub representatives: usize,
    pub full_total_s: f64,
    pub overlapped_total_s: f64,
    pub full_ms_per_packet: f64,
    pub overlapped_ms_per_packet: f64,
    /// Measured `full / overlapped` time.
    pub speedup: f64,
    /// Predicted `packet_len² / (chunks · chunk_len²)`.
    pub analytic_ratio: f64,
}

/// Times both modes packet by packet, alternating which runs first so drift
/// and cache effects fall on both sides equally.
pub fn bench_lcs(packets: &[&[u8]], reps: &[RepresentativeSet], chunk: ChunkParams) -> Result<BenchReport> {
    let packet_len = packets
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::invalid("no packets to benchmark"))?;
    if let Some(p) = packets.iter().find(|p| p.len() != packet_len) {
        return Err(Error::invalid(format!(
            "packets differ in length ({} vs {packet_len})",
            p.len()
        )));
    }
    let cost = lcs_cost_model(packet_len, chunk.chunk_len, chunk.overlap())?;
    let (mut full, mut over) = (0.0f64, 0.0f64);
    let mut sink = 0.0;
    for (i, p) in packets.iter().enumerate() {
        for pass in 0..2 {
            let run_full = (i + pass) % 2 == 0;
            let t = Instant::now();
            let block = if run_full {
                lcs_features_full(p, reps)?
            } else {
                lcs_features_overlapped(p, reps, chunk, SeqAggregate::Sum, false)?
            };
            let dt = t.elapsed().as_secs_f64();
            sink += block.to_vec().iter().sum::<f64>();
            if run_full {
                full += dt;
            } else {
                over += dt;
            }
        }
    }
    std::hint::black_box(sink);
    let n = packets.len() as f64;
    Ok(BenchReport {
        packet_len,
        chunk_len: chunk.chunk_len,
        overlap: chunk.overlap(),
        chunks: cost.chunks,
        packets: packets.len(),
        representatives: reps.iter().map(RepresentativeSet::len).sum(),
        full_total_s: full,
        overlapped_total_s: over,
        full_ms_per_packet: full * 1e3 / n,
        overlapped_ms_per_packet: over * 1e3 / n,
        speedup: if over > 0.0 { full / over } else { f64::INFINITY },
        analytic_ratio: cost.ratio(),
    })
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "packet_len {}  chunk_len {}  overlap {}  chunks {}",
            self.packet_len, self.chunk_len, self.overlap, self.chunks
        )?;
        writeln!(f, "packets {}  representatives {}", self.packets, self.representatives)?;
        writeln!(
            f,
            "full        {:10.3} ms/packet  {:8.3} s total",
            self.full_ms_per_packet, self.full_total_s
        )?;
        writeln!(
            f,
            "overlapped  {:10.3} ms/packet  {:8.3} s total",
            self.overlapped_ms_per_packet, self.overlapped_total_s
        )?;
        write!(
            f,
            "speedup {:.2}x  (cell-count ratio {:.2})",
            self.speedup, self.analytic_ratio
        )
    }
}
