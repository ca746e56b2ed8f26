//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails. Run with `--nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use codecid::bench::bench_lcs;
use codecid::classify::{gram_matrix, rbf, smo_solve, svm_train, ClassifierKind, SvmParams};
use codecid::corpus::{ChunkParams, Corpus, RepresentativeSet};
use codecid::features::chaotic::{embed, fnf, lyapunov, nearest_neighbors, DEFAULT_FNN_TOLERANCE};
use codecid::features::lcs::{lcs_subsequence_len, lcs_substring_len, LcsMode};
use codecid::features::spectral::bicoherence_surface;
use codecid::features::stats::{autocorr, central_moment, distinct_count, entropy};
use codecid::features::{BicoherenceParams, FeatureConfig, FeatureGroups};
use codecid::model::{train_model, Model, TrainConfig};
use codecid::repfile::RepFile;
use codecid::synth::{default_classes, synth_corpus};
use codecid::table::{FeatureRow, FeatureTable};
use common::{dual_objective, logistic_map, neighbors_oracle, sinusoid, substring_oracle, subsequence_oracle, svm_bias, svm_dual_oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LCS_PAIRS: usize = 10_000;
const LCS_MAX_LEN: usize = 64;
const LCS_TIME_LIMIT: Duration = Duration::from_secs(60);

const FIDELITY_PACKETS_PER_CLASS: usize = 60;
const FIDELITY_PACKET_LEN: usize = 8192;
const FIDELITY_REPS: usize = 2;
const FIDELITY_MAX_GAP: f64 = 0.03;

const BENCH_PACKETS: usize = 50;
const BENCH_MIN_SPEEDUP: f64 = 3.0;
const BENCH_TIME_LIMIT: Duration = Duration::from_secs(600);

const BATTERY_PACKET_LEN: usize = 1024;
const BATTERY_MIN_ACCURACY: f64 = 0.90;
const BATTERY_TIME_LIMIT: Duration = Duration::from_secs(900);

const MOMENT_REL_TOL: f64 = 1e-9;
const BICOH_COUPLED_MIN: f64 = 0.9;
const BICOH_RANDOM_MAX: f64 = 0.3;

const LYAPUNOV_TOL: f64 = 0.15;
const SINE_FNF_MAX: f64 = 0.05;
const NOISE_FNF_MIN: f64 = 0.2;

const SVM_PROBLEMS: usize = 30;
const SVM_TOL: f64 = 1e-6;
const SVM_PROBE_MARGIN: f64 = 1e-3;

const SEED: u64 = 7;

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn record(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} [{id}] {name}: {detail}");
        if !ok {
            self.failures.push(format!("[{id}] {name}"));
        }
    }
}

#[test]
fn acceptance() {
    let mut out = Outcome { failures: Vec::new() };
    lcs_oracles(&mut out);
    chunking_fidelity(&mut out);
    speedup(&mut out);
    full_battery(&mut out);
    statistical_suite(&mut out);
    chaotic_checks(&mut out);
    svm_correctness(&mut out);
    determinism(&mut out);
    assert!(out.failures.is_empty(), "failed: {:?}", out.failures);
}

fn lcs_oracles(out: &mut Outcome) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for i in 0..LCS_PAIRS {
        // vary the alphabet so both sparse and dense match tables occur
        let alphabet: u16 = [2, 4, 16, 256][i % 4];
        let draw = |r: &mut ChaCha8Rng| -> Vec<u8> {
            let n = r.random_range(0..=LCS_MAX_LEN);
            (0..n).map(|_| r.random_range(0..alphabet) as u8).collect()
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        if lcs_substring_len(&a, &b) != substring_oracle(&a, &b) || lcs_subsequence_len(&a, &b) != subsequence_oracle(&a, &b) {
            mismatches += 1;
        }
    }
    let (s, q) = (lcs_substring_len(b"ABCBDCB", b"BDCABA"), lcs_subsequence_len(b"ABCBDCB", b"BDCABA"));
    let elapsed = start.elapsed();
    out.record(
        1,
        "LCS oracle equivalence",
        mismatches == 0 && s == 3 && q == 4 && elapsed < LCS_TIME_LIMIT,
        format!("{mismatches} mismatches over {LCS_PAIRS} pairs, worked example substring {s} subsequence {q}, {elapsed:.2?}"),
    );
}

/// Feature table for the unreserved packets of `corpus`.
fn extract_table(corpus: &Corpus, reps: &[RepresentativeSet], config: &FeatureConfig) -> FeatureTable {
    let classes: Vec<String> = reps.iter().map(|r| r.class_label.clone()).collect();
    let mut table = FeatureTable::new(config.names(&classes)).unwrap();
    for p in corpus.unreserved() {
        table
            .push(FeatureRow {
                source_id: p.source_id.clone(),
                label: Some(p.label.clone()),
                values: config.extract(&p.bytes, reps).unwrap(),
            })
            .unwrap();
    }
    table
}

fn svm_accuracy(table: &FeatureTable, config: Option<FeatureConfig>) -> f64 {
    let mut tc = TrainConfig::new(ClassifierKind::Svm.default_grid());
    tc.seed = SEED;
    train_model(table, config, &tc).unwrap().1.accuracy
}

fn chunking_fidelity(out: &mut Outcome) {
    let start = Instant::now();
    let mut corpus = synth_corpus(&default_classes(), FIDELITY_PACKETS_PER_CLASS, FIDELITY_PACKET_LEN, SEED).unwrap();
    let reps = corpus.select_all_representatives(FIDELITY_REPS, SEED).unwrap();
    let groups = FeatureGroups::parse("lcs").unwrap();
    let full = FeatureConfig {
        groups,
        ..FeatureConfig::default()
    };
    let overlapped = FeatureConfig {
        lcs_mode: LcsMode::overlapped(1024, 0.5).unwrap(),
        ..full.clone()
    };
    let acc_full = svm_accuracy(&extract_table(&corpus, &reps, &full), Some(full));
    let acc_over = svm_accuracy(&extract_table(&corpus, &reps, &overlapped), Some(overlapped));
    let gap = (acc_full - acc_over).abs();
    out.record(
        2,
        "overlapped chunking fidelity",
        gap <= FIDELITY_MAX_GAP,
        format!(
            "full {:.2}% vs overlapped {:.2}% (gap {:.2} pp, limit {:.0} pp), {:.1?}",
            acc_full * 100.0,
            acc_over * 100.0,
            gap * 100.0,
            FIDELITY_MAX_GAP * 100.0,
            start.elapsed()
        ),
    );
}

fn speedup(out: &mut Outcome) {
    let start = Instant::now();
    let classes = default_classes();
    let per_class = BENCH_PACKETS.div_ceil(classes.len()) + 1;
    let mut corpus = synth_corpus(&classes, per_class, 8192, SEED).unwrap();
    let reps = corpus.select_all_representatives(1, SEED).unwrap();
    let packets: Vec<&[u8]> = corpus.unreserved().map(|p| p.bytes.as_slice()).take(BENCH_PACKETS).collect();
    let report = bench_lcs(&packets, &reps, ChunkParams::new(1024, 0.5).unwrap()).unwrap();
    let elapsed = start.elapsed();
    out.record(
        3,
        "overlapped LCS speedup",
        report.packets >= BENCH_PACKETS && report.speedup >= BENCH_MIN_SPEEDUP && elapsed < BENCH_TIME_LIMIT,
        format!(
            "measured {:.2}x over {} packets (limit {BENCH_MIN_SPEEDUP}x), analytic cell ratio {:.2}, {elapsed:.1?}",
            report.speedup, report.packets, report.analytic_ratio
        ),
    );
}

fn full_battery(out: &mut Outcome) {
    let start = Instant::now();
    let mut corpus = synth_corpus(&default_classes(), 60, BATTERY_PACKET_LEN, SEED).unwrap();
    let reps = corpus.select_all_representatives(2, SEED).unwrap();
    let all = FeatureConfig::default();
    let stats = FeatureConfig {
        groups: FeatureGroups::parse("stats").unwrap(),
        ..FeatureConfig::default()
    };
    let acc_all = svm_accuracy(&extract_table(&corpus, &reps, &all), Some(all));
    let acc_stats = svm_accuracy(&extract_table(&corpus, &[], &stats), Some(stats));
    let elapsed = start.elapsed();
    out.record(
        4,
        "full battery + PCA + SVM",
        acc_all >= BATTERY_MIN_ACCURACY && acc_all >= acc_stats && elapsed < BATTERY_TIME_LIMIT,
        format!(
            "all groups {:.2}% vs stats only {:.2}% (floor {:.0}%), {elapsed:.1?}",
            acc_all * 100.0,
            acc_stats * 100.0,
            BATTERY_MIN_ACCURACY * 100.0
        ),
    );
}

fn statistical_suite(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut notes = Vec::new();

    let uniform: Vec<f64> = (0..256).map(f64::from).collect();
    let entropy_ok = entropy(&[3.0; 50]) == 0.0 && (entropy(&uniform) - 256f64.ln()).abs() < 1e-12 && {
        (0..500).all(|_| {
            let x: Vec<f64> = (0..rng.random_range(1..300)).map(|_| f64::from(rng.random::<u8>())).collect();
            let h = entropy(&x);
            h >= 0.0 && h <= (distinct_count(&x) as f64).ln() + 1e-12
        })
    };
    if !entropy_ok {
        notes.push("entropy bounds");
    }

    let x: Vec<f64> = (0..200).map(|_| f64::from(rng.random::<u8>())).collect();
    let ms = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
    let alt: Vec<f64> = (0..64).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let ac_ok = (autocorr(&x, 0).unwrap() - ms).abs() <= 1e-12 * ms
        && (0..=21).all(|k| autocorr(&[5.0; 64], k).unwrap() == 25.0)
        && (0..=21isize).all(|k| autocorr(&alt, k).unwrap() == if k % 2 == 0 { 1.0 } else { -1.0 })
        && (1..=21isize).all(|k| autocorr(&x, k).unwrap() == autocorr(&x, -k).unwrap());
    if !ac_ok {
        notes.push("autocorrelation identities");
    }

    let mut moments_ok = true;
    for _ in 0..200 {
        let x: Vec<f64> = (0..rng.random_range(2..200)).map(|_| f64::from(rng.random::<u8>())).collect();
        let shift = rng.random_range(-1e3..1e3);
        let scale = rng.random_range(0.01..100.0);
        let mu = x.iter().sum::<f64>() / x.len() as f64;
        let moved: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let scaled: Vec<f64> = x.iter().map(|v| v * scale).collect();
        for k in 2..=4u32 {
            let m = central_moment(&x, k).unwrap();
            let size = x.iter().map(|v| (v - mu).abs().powi(k as i32)).sum::<f64>() / x.len() as f64;
            let sk = scale.powi(k as i32);
            moments_ok &= (central_moment(&moved, k).unwrap() - m).abs() <= MOMENT_REL_TOL * size.max(1.0);
            moments_ok &= (central_moment(&scaled, k).unwrap() - m * sk).abs() <= MOMENT_REL_TOL * (size * sk).max(1e-300);
        }
    }
    if !moments_ok {
        notes.push("moment laws");
    }

    let bounded = (0..1000).all(|_| {
        let n = rng.random_range(64..=1024);
        let x: Vec<f64> = (0..n).map(|_| f64::from(rng.random::<u8>())).collect();
        let s = bicoherence_surface(&x, BicoherenceParams::for_len(n).unwrap()).unwrap();
        s.values().iter().all(|v| (0.0..=1.0).contains(v))
    });
    let params = BicoherenceParams { seg_len: 128, n_seg: 64 };
    let coupled = bicoherence_surface(&triad(true), params).unwrap().get(20, 13).unwrap().sqrt();
    let random = bicoherence_surface(&triad(false), params).unwrap().get(20, 13).unwrap().sqrt();
    if !bounded {
        notes.push("bicoherence range");
    }
    let triad_ok = coupled >= BICOH_COUPLED_MIN && random <= BICOH_RANDOM_MAX;
    if !triad_ok {
        notes.push("triad coupling");
    }
    out.record(
        5,
        "statistical feature suite",
        notes.is_empty(),
        format!("triad |b| coupled {coupled:.3} random {random:.3}; failing checks {notes:?}"),
    );
}

fn triad(coupled: bool) -> Vec<f64> {
    let (seg, n_seg, f1, f2) = (128usize, 64usize, 20.0, 13.0);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let tau = std::f64::consts::TAU;
    let mut x = Vec::with_capacity(seg * n_seg);
    for _ in 0..n_seg {
        let p1 = rng.random::<f64>() * tau;
        let p2 = rng.random::<f64>() * tau;
        let p3 = if coupled { p1 + p2 } else { rng.random::<f64>() * tau };
        for n in 0..seg {
            let t = tau * n as f64 / seg as f64;
            x.push(127.5 + 40.0 * ((f1 * t + p1).cos() + (f2 * t + p2).cos() + ((f1 + f2) * t + p3).cos()));
        }
    }
    x
}

fn chaotic_checks(out: &mut Outcome) {
    let le = lyapunov(&logistic_map(4096, 0.3), 1, 1).unwrap();
    let mut sine_max: f64 = 0.0;
    for period in [17.3, 37.3, 64.3] {
        let x = sinusoid(1024, period);
        for dim in 3..=7 {
            sine_max = sine_max.max(fnf(&x, dim, 1, DEFAULT_FNN_TOLERANCE).unwrap().fraction);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let noise: Vec<f64> = (0..1024).map(|_| rng.random::<f64>() * 255.0).collect();
    let noise_fnf = fnf(&noise, 3, 1, DEFAULT_FNN_TOLERANCE).unwrap().fraction;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut nn_mismatch = 0;
    for _ in 0..200 {
        let n = rng.random_range(20..=256);
        let x: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0u8..24))).collect();
        let dim = rng.random_range(1..6);
        let e = embed(&x, dim, 1).unwrap();
        for exclusion in [0, dim] {
            if nearest_neighbors(&e, e.len(), exclusion) != neighbors_oracle(&e, e.len(), exclusion) {
                nn_mismatch += 1;
            }
        }
    }
    out.record(
        6,
        "chaotic feature checks",
        (le - 2f64.ln()).abs() <= LYAPUNOV_TOL && sine_max <= SINE_FNF_MAX && noise_fnf >= NOISE_FNF_MIN && nn_mismatch == 0,
        format!(
            "logistic λ {le:.4} (ln 2 {:.4}), sinusoid max FNF {sine_max:.4}, noise FNF {noise_fnf:.4}, {nn_mismatch} neighbour mismatches",
            2f64.ln()
        ),
    );
}

fn svm_correctness(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let gamma = 0.5;
    let (mut probes, mut disagreements, mut worst_gap): (usize, usize, f64) = (0, 0, 0.0);
    let mut objective_ok = true;
    for t in 0..SVM_PROBLEMS {
        let n = rng.random_range(8..=40);
        let c = if t % 2 == 0 { 1.0 } else { 10.0 };
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            x.push(vec![s * 1.5 + rng.random_range(-1.0..1.0), rng.random_range(-1.5..1.5)]);
            y.push(s);
        }
        let k = gram_matrix(&x, gamma);
        let sol = smo_solve(&k, &y, c, SVM_TOL, 1_000_000).unwrap();
        worst_gap = worst_gap.max(sol.kkt_gap);
        let oracle = svm_dual_oracle(&k, &y, c, 20_000);
        let d_qp = dual_objective(&k, &y, &oracle);
        objective_ok &= (dual_objective(&k, &y, &sol.alpha) - d_qp).abs() <= 1e-4 * (1.0 + d_qp.abs());
        let b = svm_bias(&k, &y, &oracle, c);
        for _ in 0..100 {
            let p = [rng.random_range(-4.0..4.0), rng.random_range(-3.0..3.0)];
            let kern: Vec<f64> = x.iter().map(|xi| rbf(xi, &p, gamma)).collect();
            let f_smo = sol.alpha.iter().zip(&y).zip(&kern).map(|((a, yi), kv)| a * yi * kv).sum::<f64>() - sol.rho;
            let f_qp = oracle.iter().zip(&y).zip(&kern).map(|((a, yi), kv)| a * yi * kv).sum::<f64>() + b;
            if f_smo.abs() > SVM_PROBE_MARGIN {
                probes += 1;
                if (f_smo > 0.0) != (f_qp > 0.0) {
                    disagreements += 1;
                }
            }
        }
    }

    let mut x = Vec::new();
    let mut y = Vec::new();
    for c in 0..17 {
        for _ in 0..4 {
            x.push(vec![(c % 5) as f64 * 3.0 + rng.random::<f64>() * 0.2, (c / 5) as f64 * 3.0 + rng.random::<f64>() * 0.2]);
            y.push(c);
        }
    }
    let multi = svm_train(&x, &y, 17, SvmParams::new(10.0, 1.0)).unwrap();
    let machines = multi.machines.len();
    let multi_kkt = multi.machines.iter().all(|m| m.converged && m.kkt_gap <= multi.params.tol);
    out.record(
        7,
        "SVM correctness",
        disagreements == 0 && worst_gap <= SVM_TOL && objective_ok && machines == 136 && multi_kkt,
        format!(
            "{disagreements}/{probes} sign disagreements, worst KKT gap {worst_gap:.1e} (tol {SVM_TOL:.0e}), dual objective match {objective_ok}, 17 classes → {machines} machines"
        ),
    );
}

/// reps → extract → train → predict, returning every artifact as bytes.
fn pipeline(dir: &std::path::Path) -> (Vec<u8>, Vec<u8>, Vec<u8>, String) {
    let corpus_dir = dir.join("corpus");
    synth_corpus(&default_classes(), 16, 512, SEED).unwrap().write_dir(&corpus_dir).unwrap();

    let mut corpus = Corpus::load_dir(&corpus_dir, 512, SEED).unwrap();
    let sets = corpus.select_all_representatives(2, SEED).unwrap();
    let reps_path = dir.join("reps.bin");
    RepFile { packet_len: 512, seed: SEED, sets }.write(&reps_path).unwrap();

    let reps = RepFile::read(&reps_path).unwrap();
    let mut corpus = Corpus::load_dir(&corpus_dir, 512, SEED).unwrap();
    corpus.reserve_sources(reps.source_ids());
    let config = FeatureConfig {
        lcs_mode: LcsMode::overlapped(128, 0.5).unwrap(),
        ..FeatureConfig::default()
    };
    let csv_path = dir.join("features.csv");
    extract_table(&corpus, &reps.sets, &config).write(&csv_path).unwrap();

    let table = FeatureTable::read(&csv_path).unwrap();
    let mut tc = TrainConfig::new(ClassifierKind::Svm.default_grid());
    tc.seed = SEED;
    let model_path = dir.join("model.json");
    train_model(&table, Some(config), &tc).unwrap().0.write(&model_path).unwrap();

    let model = Model::read(&model_path).unwrap();
    let predictions: String = model
        .predict_table(&table)
        .unwrap()
        .iter()
        .map(|p| format!("{}\t{}\n", p.source_id, p.predicted))
        .collect();
    let read = |p: &str| std::fs::read(dir.join(p)).unwrap();
    (read("reps.bin"), read("features.csv"), read("model.json"), predictions)
}

fn determinism(out: &mut Outcome) {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = pipeline(a.path());
    let second = pipeline(b.path());
    let same = [first.0 == second.0, first.1 == second.1, first.2 == second.2, first.3 == second.3];
    out.record(
        8,
        "pipeline determinism",
        same.iter().all(|&s| s),
        format!(
            "identical reps/csv/model/predictions: {same:?} ({} csv bytes, {} model bytes)",
            first.1.len(),
            first.2.len()
        ),
    );
}
