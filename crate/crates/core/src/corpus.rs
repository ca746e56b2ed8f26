//! Packet corpora: ingestion, fixed-length packetization, overlapped chunking,
//! representative selection and stratified train/test splitting.
//!
//! A corpus on disk is laid out as `<root>/<class_label>/*.bin`, one encoded
//! file per sample. Every file contributes exactly one packet, drawn from a
//! seeded choice among its full, non-overlapping `packet_len` windows.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::synth::ClassSpec;

/// A fixed-length byte vector cut from one encoded source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketRecord {
    pub bytes: Vec<u8>,
    pub label: String,
    pub source_id: String,
    pub offset: u64,
}

/// A borrowed window of a packet produced by [`chunk_overlapped`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chunk<'a> {
    pub bytes: &'a [u8],
    pub index: usize,
    pub offset: usize,
}

/// Validated chunking parameters: window length and the integral stride
/// `chunk_len * (1 - overlap)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkParams {
    pub chunk_len: usize,
    pub stride: usize,
}

impl ChunkParams {
    pub fn new(chunk_len: usize, overlap: f64) -> Result<Self> {
        if chunk_len == 0 {
            return Err(Error::invalid("chunk length must be at least 1"));
        }
        if !(0.0..1.0).contains(&overlap) {
            return Err(Error::invalid(format!("overlap {overlap} is outside [0, 1)")));
        }
        let exact = chunk_len as f64 * (1.0 - overlap);
        let stride = exact.round();
        if (exact - stride).abs() > 1e-9 || stride < 1.0 {
            return Err(Error::invalid(format!(
                "stride {exact} = {chunk_len} * (1 - {overlap}) is not a positive integer"
            )));
        }
        Ok(ChunkParams {
            chunk_len,
            stride: stride as usize,
        })
    }

    pub fn overlap(&self) -> f64 {
        1.0 - self.stride as f64 / self.chunk_len as f64
    }

    /// Number of chunks in a packet of `len` bytes, or an error when the
    /// window does not fit.
    pub fn count(&self, len: usize) -> Result<usize> {
        if self.chunk_len > len {
            return Err(Error::invalid(format!(
                "chunk length {} exceeds packet length {len}",
                self.chunk_len
            )));
        }
        Ok((len - self.chunk_len) / self.stride + 1)
    }

    pub fn split<'a>(&self, packet: &'a [u8]) -> Result<Vec<Chunk<'a>>> {
        let n = self.count(packet.len())?;
        Ok((0..n)
            .map(|index| {
                let offset = index * self.stride;
                Chunk {
                    bytes: &packet[offset..offset + self.chunk_len],
                    index,
                    offset,
                }
            })
            .collect())
    }
}

/// Cuts `raw` into `⌊len / packet_len⌋` consecutive packets; the trailing
/// remainder is dropped.
pub fn packetize<'a>(raw: &'a [u8], packet_len: usize, source_id: &str) -> Result<Vec<&'a [u8]>> {
    if packet_len == 0 {
        return Err(Error::invalid("packet length must be at least 1"));
    }
    if raw.len() < packet_len {
        return Err(Error::SourceTooShort {
            source_id: source_id.to_string(),
            len: raw.len(),
            packet_len,
        });
    }
    Ok(raw.chunks_exact(packet_len).collect())
}

pub fn chunk_overlapped(packet: &[u8], chunk_len: usize, overlap: f64) -> Result<Vec<Chunk<'_>>> {
    ChunkParams::new(chunk_len, overlap)?.split(packet)
}

/// One held-out representative packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSample {
    pub source_id: String,
    pub offset: u64,
    pub bytes: Vec<u8>,
}

/// Per-class representative packets used as LCS comparison targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativeSet {
    pub class_label: String,
    pub samples: Vec<RepSample>,
}

impl RepresentativeSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CorpusSplit {
    pub train: Vec<PacketRecord>,
    pub test: Vec<PacketRecord>,
    pub seed: u64,
}

/// A labelled packet collection. Packets flagged as representatives are
/// excluded from [`Corpus::split_train_test`].
#[derive(Debug, Clone)]
pub struct Corpus {
    packet_len: usize,
    classes: Vec<String>,
    packets: Vec<PacketRecord>,
    reserved: Vec<bool>,
}

impl Corpus {
    /// Builds a corpus, checking that every packet has `packet_len` bytes and a
    /// declared label. Classes are kept in sorted order.
    pub fn new(packet_len: usize, classes: Vec<String>, packets: Vec<PacketRecord>) -> Result<Self> {
        let mut classes = classes;
        classes.sort();
        classes.dedup();
        for p in &packets {
            if p.bytes.len() != packet_len {
                return Err(Error::invalid(format!(
                    "packet `{}` has {} bytes, expected {packet_len}",
                    p.source_id,
                    p.bytes.len()
                )));
            }
            if classes.binary_search(&p.label).is_err() {
                return Err(Error::invalid(format!(
                    "packet `{}` has undeclared label `{}`",
                    p.source_id, p.label
                )));
            }
        }
        let reserved = vec![false; packets.len()];
        Ok(Corpus {
            packet_len,
            classes,
            packets,
            reserved,
        })
    }

    /// Reads `<root>/<class>/*.bin`. Each file yields one packet chosen among
    /// its full windows with a seeded draw.
    pub fn load_dir(root: &Path, packet_len: usize, seed: u64) -> Result<Self> {
        let mut classes = Vec::new();
        let mut packets = Vec::new();
        let entries = fs::read_dir(root).map_err(|e| Error::io(root, e))?;
        let mut class_dirs: Vec<_> = entries
            .filter_map(|e| e.ok())
            .filter(|e| e.path().is_dir())
            .map(|e| e.path())
            .collect();
        class_dirs.sort();
        for dir in class_dirs {
            let label = dir
                .file_name()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::Format(format!("non-UTF-8 class directory {}", dir.display())))?
                .to_string();
            let mut files: Vec<_> = fs::read_dir(&dir)
                .map_err(|e| Error::io(&dir, e))?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "bin"))
                .collect();
            files.sort();
            for file in files {
                let name = file.file_name().and_then(|s| s.to_str()).unwrap_or_default();
                let source_id = format!("{label}/{name}");
                let raw = fs::read(&file).map_err(|e| Error::io(&file, e))?;
                let windows = packetize(&raw, packet_len, &source_id)?;
                let pick = rng::stream(seed, &source_id).random_range(0..windows.len());
                packets.push(PacketRecord {
                    bytes: windows[pick].to_vec(),
                    label: label.clone(),
                    source_id,
                    offset: (pick * packet_len) as u64,
                });
            }
            classes.push(label);
        }
        if classes.is_empty() {
            return Err(Error::Format(format!(
                "{}: no class directories found",
                root.display()
            )));
        }
        Corpus::new(packet_len, classes, packets)
    }

    pub fn packet_len(&self) -> usize {
        self.packet_len
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn packets(&self) -> &[PacketRecord] {
        &self.packets
    }

    pub fn is_reserved(&self, idx: usize) -> bool {
        self.reserved[idx]
    }

    fn class_indices(&self, label: &str) -> Vec<usize> {
        (0..self.packets.len())
            .filter(|&i| self.packets[i].label == label)
            .collect()
    }

    /// Draws `n` representatives for `class_label` from packets not yet
    /// reserved and flags them as reserved.
    pub fn select_representatives(
        &mut self,
        class_label: &str,
        n: usize,
        seed: u64,
    ) -> Result<RepresentativeSet> {
        if self.classes.iter().all(|c| c != class_label) {
            return Err(Error::invalid(format!("unknown class `{class_label}`")));
        }
        let mut pool: Vec<usize> = self
            .class_indices(class_label)
            .into_iter()
            .filter(|&i| !self.reserved[i])
            .collect();
        if pool.len() < n {
            return Err(Error::InsufficientSamples {
                class: class_label.to_string(),
                needed: n,
                available: pool.len(),
            });
        }
        let mut rng = rng::stream(seed, &format!("reps/{class_label}"));
        pool.shuffle(&mut rng);
        let mut picked = pool[..n].to_vec();
        picked.sort_unstable();
        let samples = picked
            .iter()
            .map(|&i| {
                self.reserved[i] = true;
                let p = &self.packets[i];
                RepSample {
                    source_id: p.source_id.clone(),
                    offset: p.offset,
                    bytes: p.bytes.clone(),
                }
            })
            .collect();
        Ok(RepresentativeSet {
            class_label: class_label.to_string(),
            samples,
        })
    }

    /// Representatives for every class, in class order.
    pub fn select_all_representatives(&mut self, n: usize, seed: u64) -> Result<Vec<RepresentativeSet>> {
        let classes = self.classes.clone();
        classes
            .iter()
            .map(|c| self.select_representatives(c, n, seed))
            .collect()
    }

    /// Flags packets whose source id appears in `reps`.
    pub fn reserve_sources<'a>(&mut self, source_ids: impl IntoIterator<Item = &'a str>) {
        let ids: std::collections::HashSet<&str> = source_ids.into_iter().collect();
        for (i, p) in self.packets.iter().enumerate() {
            if ids.contains(p.source_id.as_str()) {
                self.reserved[i] = true;
            }
        }
    }

    /// Packets that are not reserved as representatives, in corpus order.
    pub fn unreserved(&self) -> impl Iterator<Item = &PacketRecord> {
        self.packets
            .iter()
            .zip(&self.reserved)
            .filter(|(_, r)| !**r)
            .map(|(p, _)| p)
    }

    /// Stratified split of the unreserved packets. Each class contributes
    /// `round(n * fraction)` packets to train (at least one to each side).
    pub fn split_train_test(&self, fraction: f64, seed: u64) -> Result<CorpusSplit> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::invalid(format!("split fraction {fraction} outside (0, 1)")));
        }
        let mut train_idx = Vec::new();
        let mut test_idx = Vec::new();
        for class in &self.classes {
            let mut pool: Vec<usize> = self
                .class_indices(class)
                .into_iter()
                .filter(|&i| !self.reserved[i])
                .collect();
            if pool.len() < 2 {
                return Err(Error::InsufficientSamples {
                    class: class.clone(),
                    needed: 2,
                    available: pool.len(),
                });
            }
            pool.shuffle(&mut rng::stream(seed, &format!("split/{class}")));
            let n_train = ((pool.len() as f64 * fraction).round() as usize).clamp(1, pool.len() - 1);
            train_idx.extend_from_slice(&pool[..n_train]);
            test_idx.extend_from_slice(&pool[n_train..]);
        }
        train_idx.sort_unstable();
        test_idx.sort_unstable();
        Ok(CorpusSplit {
            train: train_idx.iter().map(|&i| self.packets[i].clone()).collect(),
            test: test_idx.iter().map(|&i| self.packets[i].clone()).collect(),
            seed,
        })
    }

    pub fn manifest(&self, seed: u64, generators: Option<&[ClassSpec]>) -> CorpusManifest {
        CorpusManifest {
            format: MANIFEST_FORMAT.to_string(),
            version: MANIFEST_VERSION,
            packet_len: self.packet_len,
            seed,
            classes: self.classes.clone(),
            generators: generators.map(|g| g.iter().map(|s| s.to_string()).collect()),
            packets: self
                .packets
                .iter()
                .zip(&self.reserved)
                .map(|(p, &r)| ManifestEntry {
                    source_id: p.source_id.clone(),
                    label: p.label.clone(),
                    offset: p.offset,
                    representative: r,
                })
                .collect(),
        }
    }

    /// Writes every packet as `<root>/<label>/<name>.bin`, where `name` is the
    /// last path component of the source id.
    pub fn write_dir(&self, root: &Path) -> Result<()> {
        for class in &self.classes {
            let dir = root.join(class);
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        for p in &self.packets {
            let name = p.source_id.rsplit('/').next().unwrap_or(&p.source_id);
            let path = root.join(&p.label).join(format!("{name}.bin"));
            fs::write(&path, &p.bytes).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

pub const MANIFEST_FORMAT: &str = "codecid-corpus";
pub const MANIFEST_VERSION: u32 = 1;

/// Versioned JSON description of a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub format: String,
    pub version: u32,
    pub packet_len: usize,
    pub seed: u64,
    pub classes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    pub packets: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub source_id: String,
    pub label: String,
    pub offset: u64,
    pub representative: bool,
}

impl CorpusManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: CorpusManifest = serde_json::from_str(text)?;
        if m.format != MANIFEST_FORMAT {
            return Err(Error::Format(format!("not a corpus manifest: `{}`", m.format)));
        }
        if m.version > MANIFEST_VERSION {
            return Err(Error::Format(format!("unsupported manifest version {}", m.version)));
        }
        Ok(m)
    }

    pub fn class_counts(&self) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        for p in &self.packets {
            *out.entry(p.label.as_str()).or_default() += 1;
        }
        out
    }
}
