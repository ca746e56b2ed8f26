use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use codecid::bench::{bench_lcs as run_bench, BenchReport};
use codecid::classify::ClassifierKind;
use codecid::corpus::{ChunkParams, Corpus, PacketRecord, RepresentativeSet};
use codecid::features::lcs::SeqAggregate;
use codecid::features::{FeatureConfig, FeatureGroups, LcsMode};
use codecid::model::{train_model, Model, TrainConfig};
use codecid::pca::Retain;
use codecid::repfile::RepFile;
use codecid::synth::{default_classes, numbered_classes, synth_corpus, ClassSpec};
use codecid::table::{FeatureRow, FeatureTable};
use rayon::prelude::*;

use crate::{AggregateArg, BenchArgs, ClassifierArg, CliError, ExtractArgs, ModeArg, PredictArgs, RepsArgs, SynthArgs, TrainArgs};

type CliResult<T = ()> = Result<T, CliError>;

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|e| CliError::Data(codecid::Error::Io {
        path: path.to_path_buf(),
        source: e,
    }))
}

/// Where `extract` records its feature configuration next to the CSV.
pub fn config_sidecar(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

fn out_err(e: io::Error) -> CliError {
    CliError::Data(codecid::Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    })
}

pub fn synth(a: SynthArgs) -> CliResult {
    let classes: Vec<ClassSpec> = match (a.numbered, a.classes.is_empty()) {
        (Some(n), _) => numbered_classes(n),
        (None, true) => default_classes(),
        (None, false) => a.classes.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
    };
    let corpus = synth_corpus(&classes, a.packets_per_class, a.packet_len, a.seed)?;
    corpus.write_dir(&a.out)?;
    let manifest = corpus.manifest(a.seed, Some(&classes));
    write_file(&a.out.join("corpus.json"), manifest.to_json().as_bytes())?;
    let mut out = io::stdout().lock();
    for (label, n) in manifest.class_counts() {
        writeln!(out, "{label}\t{n}").map_err(out_err)?;
    }
    Ok(())
}

pub fn reps(a: RepsArgs) -> CliResult {
    let mut corpus = Corpus::load_dir(&a.corpus, a.packet_len, a.seed)?;
    let sets = corpus.select_all_representatives(a.n, a.seed)?;
    let file = RepFile {
        packet_len: a.packet_len,
        seed: a.seed,
        sets,
    };
    file.write(&a.out)?;
    let mut out = io::stdout().lock();
    for s in &file.sets {
        writeln!(out, "{}\t{}", s.class_label, s.len()).map_err(out_err)?;
    }
    Ok(())
}

fn lcs_mode(mode: ModeArg, chunk_len: usize, overlap: f64, agg: AggregateArg, truncate: bool) -> CliResult<LcsMode> {
    Ok(match mode {
        ModeArg::Full => LcsMode::Full,
        ModeArg::Overlapped => LcsMode::Overlapped {
            chunk: ChunkParams::new(chunk_len, overlap)?,
            aggregate: match agg {
                AggregateArg::Sum => SeqAggregate::Sum,
                AggregateArg::Mean => SeqAggregate::Mean,
            },
            truncate,
        },
    })
}

fn pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))
}

/// Feature rows for `packets` in input order, computed on `workers` threads.
fn extract_rows(
    config: &FeatureConfig,
    packets: &[&PacketRecord],
    reps: &[RepresentativeSet],
    workers: usize,
) -> CliResult<Vec<FeatureRow>> {
    let rows = pool(workers)?.install(|| {
        packets
            .par_iter()
            .map(|p| {
                Ok(FeatureRow {
                    source_id: p.source_id.clone(),
                    label: Some(p.label.clone()),
                    values: config.extract(&p.bytes, reps)?,
                })
            })
            .collect::<codecid::Result<Vec<_>>>()
    })?;
    Ok(rows)
}

/// Loads the corpus and representatives, reserving representative sources.
fn load_inputs(
    corpus_root: &Path,
    reps_path: Option<&Path>,
    groups: FeatureGroups,
    packet_len: usize,
    seed: u64,
) -> CliResult<(Corpus, Vec<RepresentativeSet>)> {
    let reps = match reps_path {
        Some(p) => Some(RepFile::read(p)?),
        None if groups.lcs => {
            return Err(CliError::Usage("the lcs feature group needs --reps".into()));
        }
        None => None,
    };
    if let Some(r) = &reps {
        if r.packet_len != packet_len {
            return Err(CliError::Data(codecid::Error::Schema(format!(
                "representatives were cut at {} bytes but packet length is {packet_len}",
                r.packet_len
            ))));
        }
    }
    let mut corpus = Corpus::load_dir(corpus_root, packet_len, seed)?;
    let sets = match reps {
        Some(r) => {
            corpus.reserve_sources(r.source_ids());
            r.sets
        }
        None => Vec::new(),
    };
    Ok((corpus, sets))
}

pub fn extract(a: ExtractArgs) -> CliResult {
    let groups = FeatureGroups::parse(&a.groups)?;
    let config = FeatureConfig {
        groups,
        delay: a.delay,
        fnn_tolerance: a.fnn_tolerance,
        lcs_mode: lcs_mode(a.mode, a.chunk_len, a.overlap, a.seq_aggregate, a.truncate_chunks)?,
    };
    let (corpus, reps) = load_inputs(&a.corpus, a.reps.as_deref(), groups, a.packet_len, a.seed)?;
    let classes: Vec<String> = reps.iter().map(|r| r.class_label.clone()).collect();
    let mut table = FeatureTable::new(config.names(&classes))?;
    let packets: Vec<&PacketRecord> = corpus.unreserved().collect();
    for row in extract_rows(&config, &packets, &reps, a.workers)? {
        table.push(row)?;
    }
    table.write(&a.out)?;
    let sidecar = serde_json::to_string_pretty(&config).map_err(|e| CliError::Data(e.into()))? + "\n";
    write_file(&config_sidecar(&a.out), sidecar.as_bytes())?;
    eprintln!("{} rows × {} features → {}", table.rows.len(), table.names.len(), a.out.display());
    Ok(())
}

pub fn train(a: TrainArgs) -> CliResult {
    let table = FeatureTable::read(&a.features)?;
    let kind = match a.classifier {
        ClassifierArg::Svm => ClassifierKind::Svm,
        ClassifierArg::Tree => ClassifierKind::Tree,
    };
    let features = match fs::read_to_string(config_sidecar(&a.features)) {
        Ok(text) => Some(serde_json::from_str::<FeatureConfig>(&text).map_err(|e| CliError::Data(e.into()))?),
        Err(_) => None,
    };
    let config = TrainConfig {
        grid: kind.default_grid(),
        folds: a.folds,
        seed: a.seed,
        train_fraction: a.train_fraction,
        retain: match a.components {
            Some(k) => Retain::Components(k),
            None => Retain::VarianceFraction(a.variance),
        },
    };
    let (model, report) = train_model(&table, features, &config)?;
    model.write(&a.out)?;

    let mut out = io::stdout().lock();
    let w = |out: &mut io::StdoutLock, s: String| writeln!(out, "{s}").map_err(out_err);
    w(&mut out, format!("train {}  test {}  components {}", model.train_ids.len(), model.test_ids.len(), model.n_components))?;
    w(&mut out, "params\tfold accuracies\tmean".into())?;
    for r in &model.cv.results {
        let folds: Vec<String> = r.fold_accuracies.iter().map(|v| format!("{v:.4}")).collect();
        w(&mut out, format!("{}\t{}\t{:.4}", describe(&r.params), folds.join(" "), r.mean_accuracy))?;
    }
    w(&mut out, format!("chosen\t{}", describe(&model.cv.best_params())))?;
    w(&mut out, format!("held-out evaluation\n{report}"))?;
    Ok(())
}

fn describe(p: &codecid::classify::ClassifierParams) -> String {
    use codecid::classify::ClassifierParams::*;
    match p {
        Tree(t) => format!("tree max_depth={} min_leaf={}", t.max_depth, t.min_leaf),
        Svm(s) => format!("svm C={} gamma={}", s.c, s.gamma),
    }
}

pub fn predict(a: PredictArgs) -> CliResult {
    let model = Model::read(&a.model)?;
    let mut table = match (&a.features, &a.corpus) {
        (Some(csv), _) => FeatureTable::read(csv)?,
        (None, Some(root)) => {
            let config = model.features.clone().ok_or_else(|| {
                CliError::Usage("model does not record its feature configuration; pass --features".into())
            })?;
            let reps_len = match &a.reps {
                Some(p) => Some(RepFile::read(p)?.packet_len),
                None => None,
            };
            let packet_len = reps_len.unwrap_or(a.packet_len);
            let (corpus, reps) = load_inputs(root, a.reps.as_deref(), config.groups, packet_len, a.seed)?;
            let classes: Vec<String> = reps.iter().map(|r| r.class_label.clone()).collect();
            let mut t = FeatureTable::new(config.names(&classes))?;
            let packets: Vec<&PacketRecord> = corpus.unreserved().collect();
            for row in extract_rows(&config, &packets, &reps, a.workers)? {
                t.push(row)?;
            }
            t
        }
        (None, None) => return Err(CliError::Usage("pass --features or --corpus".into())),
    };
    if a.holdout {
        let ids: HashSet<&str> = model.test_ids.iter().map(String::as_str).collect();
        table = table.filter_sources(&ids);
    }
    let preds = model.predict_table(&table)?;
    let mut out = io::stdout().lock();
    for p in &preds {
        writeln!(out, "{}\t{}\t{}", p.source_id, p.predicted, p.truth.as_deref().unwrap_or("")).map_err(out_err)?;
    }
    let known = !preds.is_empty() && preds.iter().all(|p| p.truth.as_ref().is_some_and(|t| model.classes.contains(t)));
    if known {
        let idx = |l: &str| model.classes.iter().position(|c| c == l).expect("known class");
        let truth: Vec<usize> = preds.iter().map(|p| idx(p.truth.as_deref().unwrap())).collect();
        let predicted: Vec<usize> = preds.iter().map(|p| idx(&p.predicted)).collect();
        let report = codecid::classify::evaluate(&truth, &predicted, &model.classes)?;
        writeln!(out, "\n{report}").map_err(out_err)?;
    }
    Ok(())
}

/// Benchmark packets and representatives for one packet length.
fn bench_inputs(
    packet_len: usize,
    n_packets: usize,
    seed: u64,
    reps: Option<&RepFile>,
) -> CliResult<(Vec<Vec<u8>>, Vec<RepresentativeSet>)> {
    let classes = default_classes();
    let per_class = n_packets.div_ceil(classes.len()) + 1;
    let mut corpus = synth_corpus(&classes, per_class, packet_len, seed)?;
    let synth_reps = corpus.select_all_representatives(1, seed)?;
    let pool: Vec<&PacketRecord> = corpus.unreserved().collect();
    // interleave classes so any prefix mixes them
    let mut packets = Vec::with_capacity(n_packets);
    for k in 0..per_class {
        for c in &classes {
            if let Some(p) = pool.iter().filter(|p| p.label == c.label).nth(k) {
                packets.push(p.bytes.clone());
            }
        }
    }
    packets.truncate(n_packets);
    let sets = match reps {
        None => synth_reps,
        Some(file) => {
            let mut sets = file.sets.clone();
            for s in &mut sets {
                for r in &mut s.samples {
                    if r.bytes.len() < packet_len {
                        return Err(CliError::Data(codecid::Error::Schema(format!(
                            "representative `{}` has {} bytes, fewer than {packet_len}",
                            r.source_id,
                            r.bytes.len()
                        ))));
                    }
                    r.bytes.truncate(packet_len);
                }
            }
            sets
        }
    };
    Ok((packets, sets))
}

pub fn bench_lcs(a: BenchArgs) -> CliResult {
    if a.n_packets == 0 {
        return Err(CliError::Usage("--packets must be at least 1".into()));
    }
    let chunk = ChunkParams::new(a.chunk_len, a.overlap)?;
    let reps = a.reps.as_deref().map(RepFile::read).transpose()?;
    let mut reports: Vec<BenchReport> = Vec::new();
    for &len in &a.packet_lens {
        let (packets, sets) = bench_inputs(len, a.n_packets, a.seed, reps.as_ref())?;
        let refs: Vec<&[u8]> = packets.iter().map(Vec::as_slice).collect();
        reports.push(run_bench(&refs, &sets, chunk)?);
    }
    let mut out = io::stdout().lock();
    if a.json {
        let text = serde_json::to_string_pretty(&reports).map_err(|e| CliError::Data(e.into()))?;
        writeln!(out, "{text}").map_err(out_err)?;
        return Ok(());
    }
    writeln!(
        out,
        "{:>10} {:>9} {:>7} {:>7} {:>10} {:>12} {:>10} {:>8} {:>8}",
        "packet_len", "chunk_len", "overlap", "packets", "mode", "ms/packet", "total_s", "speedup", "analytic"
    )
    .map_err(out_err)?;
    for r in &reports {
        for (mode, ms, total, speedup) in [
            ("full", r.full_ms_per_packet, r.full_total_s, 1.0),
            ("overlapped", r.overlapped_ms_per_packet, r.overlapped_total_s, r.speedup),
        ] {
            writeln!(
                out,
                "{:>10} {:>9} {:>7} {:>7} {:>10} {:>12.3} {:>10.3} {:>8.2} {:>8.2}",
                r.packet_len, r.chunk_len, r.overlap, r.packets, mode, ms, total, speedup, r.analytic_ratio
            )
            .map_err(out_err)?;
        }
    }
    Ok(())
}
