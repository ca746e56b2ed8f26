//! Seeded synthetic byte-stream classes standing in for encoded audio.
//!
//! Each generator is a stationary process whose structural constants (symbol
//! permutation, frame header) are derived from the class label, so a class
//! keeps its identity across corpus seeds while the content varies.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, PacketRecord};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub enum ClassGenerator {
    /// I.i.d. uniform bytes.
    Uniform,
    /// I.i.d. bytes with Zipf-like rank probabilities `1 / rank^exponent`
    /// over a class-specific symbol permutation.
    Skewed { exponent: f64 },
    /// Frames of `frame_len` bytes starting with a class-specific
    /// `header_len`-byte sync pattern, uniform payload.
    Framed { frame_len: usize, header_len: usize },
    /// Runs of a repeated uniform byte with geometric lengths of the given mean.
    Runs { mean_run: f64 },
    /// Random walk on bytes with steps uniform in `[-step, step]`, wrapping.
    Walk { step: u8 },
}

impl fmt::Display for ClassGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassGenerator::Uniform => write!(f, "uniform"),
            ClassGenerator::Skewed { exponent } => write!(f, "skewed:{exponent}"),
            ClassGenerator::Framed {
                frame_len,
                header_len,
            } => write!(f, "framed:{frame_len}:{header_len}"),
            ClassGenerator::Runs { mean_run } => write!(f, "runs:{mean_run}"),
            ClassGenerator::Walk { step } => write!(f, "walk:{step}"),
        }
    }
}

impl FromStr for ClassGenerator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let bad = || Error::invalid(format!("bad generator `{s}`"));
        let num = |i: usize| -> Result<f64> {
            args.get(i).ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())
        };
        let gen = match (kind, args.len()) {
            ("uniform", 0) => ClassGenerator::Uniform,
            ("skewed", 1) => ClassGenerator::Skewed { exponent: num(0)? },
            ("framed", 2) => ClassGenerator::Framed {
                frame_len: num(0)? as usize,
                header_len: num(1)? as usize,
            },
            ("runs", 1) => ClassGenerator::Runs { mean_run: num(0)? },
            ("walk", 1) => ClassGenerator::Walk {
                step: u8::try_from(num(0)? as i64).map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        gen.validate()?;
        Ok(gen)
    }
}

impl ClassGenerator {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ClassGenerator::Uniform => true,
            ClassGenerator::Skewed { exponent } => exponent.is_finite() && exponent >= 0.0,
            ClassGenerator::Framed {
                frame_len,
                header_len,
            } => header_len >= 1 && frame_len > header_len,
            ClassGenerator::Runs { mean_run } => mean_run.is_finite() && mean_run >= 1.0,
            ClassGenerator::Walk { step } => step >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("generator parameters out of range: {self}")))
        }
    }

    fn generate(&self, key: u64, len: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let mut constants = rng::stream(key, "class-constants");
        match *self {
            ClassGenerator::Uniform => (0..len).map(|_| rng.random()).collect(),
            ClassGenerator::Skewed { exponent } => {
                let mut symbols: Vec<u8> = (0..=255).collect();
                symbols.shuffle(&mut constants);
                let mut cdf = Vec::with_capacity(256);
                let mut acc = 0.0;
                for rank in 1..=256 {
                    acc += 1.0 / (rank as f64).powf(exponent);
                    cdf.push(acc);
                }
                (0..len)
                    .map(|_| {
                        let u = rng.random::<f64>() * acc;
                        let r = cdf.partition_point(|&c| c < u).min(255);
                        symbols[r]
                    })
                    .collect()
            }
            ClassGenerator::Framed {
                frame_len,
                header_len,
            } => {
                let header: Vec<u8> = (0..header_len).map(|_| constants.random()).collect();
                let phase = rng.random_range(0..frame_len);
                (0..len)
                    .map(|i| {
                        let pos = (i + phase) % frame_len;
                        if pos < header_len {
                            header[pos]
                        } else {
                            rng.random()
                        }
                    })
                    .collect()
            }
            ClassGenerator::Runs { mean_run } => {
                let p_end = 1.0 / mean_run;
                let mut out = Vec::with_capacity(len);
                let mut current: u8 = rng.random();
                while out.len() < len {
                    out.push(current);
                    if rng.random::<f64>() < p_end {
                        current = rng.random();
                    }
                }
                out
            }
            ClassGenerator::Walk { step } => {
                let step = i16::from(step);
                let mut x: u8 = rng.random();
                (0..len)
                    .map(|_| {
                        let out = x;
                        let d = rng.random_range(-step..=step);
                        x = (i16::from(x) + d).rem_euclid(256) as u8;
                        out
                    })
                    .collect()
            }
        }
    }
}

/// A labelled generator, written `label=kind[:param...]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpec {
    pub label: String,
    pub generator: ClassGenerator,
}

impl ClassSpec {
    pub fn new(label: impl Into<String>, generator: ClassGenerator) -> Self {
        ClassSpec {
            label: label.into(),
            generator,
        }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.label, self.generator)
    }
}

impl FromStr for ClassSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (label, gen) = s
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("class spec `{s}` is not label=generator")))?;
        if label.is_empty() || label.contains(['/', '\\', ',']) {
            return Err(Error::invalid(format!("bad class label `{label}`")));
        }
        Ok(ClassSpec::new(label, gen.parse()?))
    }
}

/// Five mutually distinguishable classes. Two of them share frame geometry
/// and differ only in their sync pattern.
pub fn default_classes() -> Vec<ClassSpec> {
    [
        "framed-a=framed:64:6",
        "framed-b=framed:64:6",
        "runs=runs:3",
        "skewed=skewed:1.1",
        "walk=walk:12",
    ]
    .iter()
    .map(|s| s.parse().expect("built-in class spec"))
    .collect()
}

/// `n` distinct classes, cycling through generator families with varied
/// parameters.
pub fn numbered_classes(n: usize) -> Vec<ClassSpec> {
    (0..n)
        .map(|i| {
            let v = i / 5;
            let gen = match i % 5 {
                0 => ClassGenerator::Framed {
                    frame_len: 48 + 16 * v,
                    header_len: 4 + v % 3,
                },
                1 => ClassGenerator::Skewed {
                    exponent: 0.6 + 0.4 * v as f64,
                },
                2 => ClassGenerator::Runs {
                    mean_run: 2.0 + 2.0 * v as f64,
                },
                3 => ClassGenerator::Walk {
                    step: (6 + 10 * v).min(255) as u8,
                },
                _ => {
                    if v == 0 {
                        ClassGenerator::Uniform
                    } else {
                        ClassGenerator::Framed {
                            frame_len: 100 + 30 * v,
                            header_len: 2 + v,
                        }
                    }
                }
            };
            ClassSpec::new(format!("c{i:02}"), gen)
        })
        .collect()
}

/// Generates `packets_per_class` packets for each class. Source ids are
/// `<label>/<index>` with offset 0.
pub fn synth_corpus(
    classes: &[ClassSpec],
    packets_per_class: usize,
    packet_len: usize,
    seed: u64,
) -> Result<Corpus> {
    if classes.len() < 2 {
        return Err(Error::invalid("need ≥ 2 classes"));
    }
    if packet_len == 0 {
        return Err(Error::invalid("packet length must be at least 1"));
    }
    let mut labels: Vec<&str> = classes.iter().map(|c| c.label.as_str()).collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("duplicate class labels"));
    }
    let mut packets = Vec::with_capacity(classes.len() * packets_per_class);
    for spec in classes {
        spec.generator.validate()?;
        let key = rng::fnv1a(spec.label.as_bytes());
        let mut stream = rng::stream(seed, &format!("synth/{}", spec.label));
        for i in 0..packets_per_class {
            packets.push(PacketRecord {
                bytes: spec.generator.generate(key, packet_len, &mut stream),
                label: spec.label.clone(),
                source_id: format!("{}/{i:05}", spec.label),
                offset: 0,
            });
        }
    }
    Corpus::new(
        packet_len,
        classes.iter().map(|c| c.label.clone()).collect(),
        packets,
    )
}
