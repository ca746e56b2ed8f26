//! Longest common substring / subsequence lengths and the per-class LCS
//! feature block, in full-packet and overlapped-chunk modes.
//!
//! Substring lengths use the two-row dynamic program. Subsequence lengths
//! have a two-row reference DP ([`lcs_subsequence_len_dp`]) and a
//! bit-parallel production path ([`SubsequenceMatcher`]) that computes the
//! same DP 64 cells per word operation.

use crate::corpus::{ChunkParams, RepresentativeSet};
use crate::error::{Error, Result};

/// Length of the longest contiguous common run of `a` and `b`.
pub fn lcs_substring_len(a: &[u8], b: &[u8]) -> usize {
    let (outer, inner) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if inner.is_empty() {
        return 0;
    }
    if inner.len() < u16::MAX as usize {
        substring_rows::<u16>(outer, inner)
    } else {
        substring_rows::<u32>(outer, inner)
    }
}

trait Cell: Copy + Default + Ord {
    fn succ(self) -> Self;
    fn to_usize(self) -> usize;
}

impl Cell for u16 {
    #[inline(always)]
    fn succ(self) -> Self {
        self + 1
    }
    fn to_usize(self) -> usize {
        self as usize
    }
}

impl Cell for u32 {
    #[inline(always)]
    fn succ(self) -> Self {
        self + 1
    }
    fn to_usize(self) -> usize {
        self as usize
    }
}

// prev[j] / cur[j] hold the common-suffix length ending at (i, j - 1).
fn substring_rows<T: Cell>(outer: &[u8], inner: &[u8]) -> usize {
    let n = inner.len();
    let mut prev = vec![T::default(); n + 1];
    let mut cur = vec![T::default(); n + 1];
    let mut best = T::default();
    for &c in outer {
        let mut row_best = T::default();
        for ((out, &p), &d) in cur[1..].iter_mut().zip(&prev[..n]).zip(inner) {
            let v = if d == c { p.succ() } else { T::default() };
            *out = v;
            row_best = row_best.max(v);
        }
        best = best.max(row_best);
        std::mem::swap(&mut prev, &mut cur);
    }
    best.to_usize()
}

/// Reference two-row DP for the longest common subsequence length.
pub fn lcs_subsequence_len_dp(a: &[u8], b: &[u8]) -> usize {
    let (outer, inner) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let n = inner.len();
    let mut prev = vec![0u32; n + 1];
    let mut cur = vec![0u32; n + 1];
    for &c in outer {
        for j in 1..=n {
            cur[j] = if inner[j - 1] == c {
                prev[j - 1] + 1
            } else {
                prev[j].max(cur[j - 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n] as usize
}

/// Longest common subsequence length (bit-parallel).
pub fn lcs_subsequence_len(a: &[u8], b: &[u8]) -> usize {
    let (pattern, text) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    SubsequenceMatcher::new(pattern).lcs_len(text)
}

/// Precomputed match masks of one pattern for repeated bit-parallel LCS
/// queries against different texts.
///
/// Bit `i` of `V` tracks whether DP column `i` has not yet increased; each
/// text byte `c` applies `V ← (V + (V & M[c])) | (V & !M[c])`, and the LCS
/// length is the number of cleared bits.
#[derive(Debug, Clone)]
pub struct SubsequenceMatcher {
    len: usize,
    words: usize,
    masks: Vec<u64>,
}

impl SubsequenceMatcher {
    pub fn new(pattern: &[u8]) -> Self {
        let words = pattern.len().div_ceil(64);
        let mut masks = vec![0u64; 256 * words];
        for (i, &c) in pattern.iter().enumerate() {
            masks[c as usize * words + i / 64] |= 1u64 << (i % 64);
        }
        SubsequenceMatcher {
            len: pattern.len(),
            words,
            masks,
        }
    }

    pub fn pattern_len(&self) -> usize {
        self.len
    }

    pub fn lcs_len(&self, text: &[u8]) -> usize {
        if self.len == 0 || text.is_empty() {
            return 0;
        }
        let w = self.words;
        let mut v = vec![u64::MAX; w];
        for &c in text {
            let m = &self.masks[c as usize * w..(c as usize + 1) * w];
            let mut carry = 0u64;
            for (vk, &mk) in v.iter_mut().zip(m) {
                let u = *vk & mk;
                let (s1, c1) = vk.overflowing_add(u);
                let (s2, c2) = s1.overflowing_add(carry);
                carry = u64::from(c1 | c2);
                *vk = s2 | (*vk & !mk);
            }
        }
        let tail_bits = self.len % 64;
        let cleared: usize = v
            .iter()
            .enumerate()
            .map(|(k, &word)| {
                let valid = if k + 1 == w && tail_bits != 0 {
                    (1u64 << tail_bits) - 1
                } else {
                    u64::MAX
                };
                (!word & valid).count_ones() as usize
            })
            .sum();
        cleared
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LcsPair {
    pub substring_len: usize,
    pub subsequence_len: usize,
}

pub fn lcs_pair(a: &[u8], b: &[u8]) -> LcsPair {
    LcsPair {
        substring_len: lcs_substring_len(a, b),
        subsequence_len: lcs_subsequence_len(a, b),
    }
}

/// How per-chunk subsequence lengths combine in overlapped mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqAggregate {
    #[default]
    Sum,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum LcsMode {
    Full,
    Overlapped {
        chunk: ChunkParams,
        #[serde(default)]
        aggregate: SeqAggregate,
        /// Pair only the common prefix of chunk lists when a representative
        /// yields fewer chunks than the packet, instead of failing.
        #[serde(default)]
        truncate: bool,
    },
}

impl LcsMode {
    pub fn overlapped(chunk_len: usize, overlap: f64) -> Result<Self> {
        Ok(LcsMode::Overlapped {
            chunk: ChunkParams::new(chunk_len, overlap)?,
            aggregate: SeqAggregate::Sum,
            truncate: false,
        })
    }
}

/// Averaged `(substring, subsequence)` features against one class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassLcs {
    pub substring: f64,
    pub subsequence: f64,
}

/// One [`ClassLcs`] per class, in representative-set order.
#[derive(Debug, Clone, PartialEq)]
pub struct LcsFeatureBlock {
    pub classes: Vec<String>,
    pub values: Vec<ClassLcs>,
}

impl LcsFeatureBlock {
    pub fn to_vec(&self) -> Vec<f64> {
        self.values
            .iter()
            .flat_map(|v| [v.substring, v.subsequence])
            .collect()
    }
}

fn check_reps(reps: &[RepresentativeSet]) -> Result<()> {
    match reps.iter().find(|r| r.is_empty()) {
        Some(r) => Err(Error::EmptyRepresentatives(r.class_label.clone())),
        None => Ok(()),
    }
}

pub fn lcs_features_full(packet: &[u8], reps: &[RepresentativeSet]) -> Result<LcsFeatureBlock> {
    check_reps(reps)?;
    let matcher = SubsequenceMatcher::new(packet);
    let values = reps
        .iter()
        .map(|set| {
            let (mut sub, mut seq) = (0usize, 0usize);
            for r in &set.samples {
                sub += lcs_substring_len(packet, &r.bytes);
                seq += matcher.lcs_len(&r.bytes);
            }
            let n = set.len() as f64;
            ClassLcs {
                substring: sub as f64 / n,
                subsequence: seq as f64 / n,
            }
        })
        .collect();
    Ok(LcsFeatureBlock {
        classes: reps.iter().map(|r| r.class_label.clone()).collect(),
        values,
    })
}

/// Chunk-paired LCS features: chunk `i` of the packet is compared with chunk
/// `i` of each representative; the substring feature is the maximum over
/// chunks and the subsequence feature the sum (or mean) over chunks, then
/// both are averaged over the class's representatives.
pub fn lcs_features_overlapped(
    packet: &[u8],
    reps: &[RepresentativeSet],
    chunk: ChunkParams,
    aggregate: SeqAggregate,
    truncate: bool,
) -> Result<LcsFeatureBlock> {
    check_reps(reps)?;
    let packet_chunks = chunk.split(packet)?;
    let matchers: Vec<SubsequenceMatcher> = packet_chunks
        .iter()
        .map(|c| SubsequenceMatcher::new(c.bytes))
        .collect();
    let mut values = Vec::with_capacity(reps.len());
    for set in reps {
        let (mut sub_total, mut seq_total) = (0usize, 0.0f64);
        for r in &set.samples {
            let rep_chunks = chunk.split(&r.bytes)?;
            if rep_chunks.len() != packet_chunks.len() && !truncate {
                return Err(Error::ChunkCountMismatch {
                    packet: packet_chunks.len(),
                    representative: rep_chunks.len(),
                });
            }
            let (mut sub_max, mut seq_sum, mut pairs) = (0usize, 0usize, 0usize);
            for ((pc, m), rc) in packet_chunks.iter().zip(&matchers).zip(&rep_chunks) {
                sub_max = sub_max.max(lcs_substring_len(pc.bytes, rc.bytes));
                seq_sum += m.lcs_len(rc.bytes);
                pairs += 1;
            }
            sub_total += sub_max;
            seq_total += match aggregate {
                SeqAggregate::Sum => seq_sum as f64,
                SeqAggregate::Mean => seq_sum as f64 / pairs.max(1) as f64,
            };
        }
        let n = set.len() as f64;
        values.push(ClassLcs {
            substring: sub_total as f64 / n,
            subsequence: seq_total / n,
        });
    }
    Ok(LcsFeatureBlock {
        classes: reps.iter().map(|r| r.class_label.clone()).collect(),
        values,
    })
}

pub fn lcs_features(packet: &[u8], reps: &[RepresentativeSet], mode: &LcsMode) -> Result<LcsFeatureBlock> {
    match *mode {
        LcsMode::Full => lcs_features_full(packet, reps),
        LcsMode::Overlapped {
            chunk,
            aggregate,
            truncate,
        } => lcs_features_overlapped(packet, reps, chunk, aggregate, truncate),
    }
}

/// DP cell counts per packet–representative pair for both modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub full_cells: u64,
    pub overlapped_cells: u64,
    pub chunks: usize,
}

impl CostModel {
    /// `full_cells / overlapped_cells`.
    pub fn ratio(&self) -> f64 {
        self.full_cells as f64 / self.overlapped_cells as f64
    }
}

pub fn lcs_cost_model(packet_len: usize, chunk_len: usize, overlap: f64) -> Result<CostModel> {
    let params = ChunkParams::new(chunk_len, overlap)?;
    let chunks = params.count(packet_len)?;
    let full = (packet_len as u64).pow(2);
    let overlapped = chunks as u64 * (chunk_len as u64).pow(2);
    Ok(CostModel {
        full_cells: full,
        overlapped_cells: overlapped,
        chunks,
    })
}
