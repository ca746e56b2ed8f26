//! `codecid`: corpus preparation, feature extraction, training, prediction and
//! the LCS benchmark.
//!
//! Exit status: 0 success, 1 usage error, 2 data error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(codecid::Error),
}

impl From<codecid::Error> for CliError {
    fn from(e: codecid::Error) -> Self {
        match e {
            codecid::Error::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Data(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "codecid", version, about = "Identify audio codecs from raw encoded bytes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a labelled synthetic corpus directory.
    Synth(SynthArgs),
    /// Draw per-class representative packets into a representative file.
    Reps(RepsArgs),
    /// Compute a feature table for every non-representative packet.
    Extract(ExtractArgs),
    /// Fit standardization, PCA and a cross-validated classifier.
    Train(TrainArgs),
    /// Label packets with a trained model.
    Predict(PredictArgs),
    /// Time full-packet against overlapped-chunk LCS extraction.
    BenchLcs(BenchArgs),
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Output corpus directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Class generators as `label=kind[:params]`; defaults to five built-in classes.
    #[arg(long = "class", value_name = "SPEC")]
    pub classes: Vec<String>,
    /// Use `n` generated classes `c00..` instead of explicit specs.
    #[arg(long, conflicts_with = "classes")]
    pub numbered: Option<usize>,
    #[arg(long, default_value_t = 60)]
    pub packets_per_class: usize,
    #[arg(long, default_value_t = 8192)]
    pub packet_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct RepsArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Representatives per class.
    #[arg(short, long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 8192)]
    pub packet_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    Overlapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AggregateArg {
    Sum,
    Mean,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Representative file; required when the lcs group is selected.
    #[arg(long)]
    pub reps: Option<PathBuf>,
    #[arg(long, default_value_t = 8192)]
    pub packet_len: usize,
    #[arg(long, default_value_t = 1024)]
    pub chunk_len: usize,
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    /// Comma-separated subset of stats,chaotic,lcs.
    #[arg(long, default_value = "stats,chaotic,lcs")]
    pub groups: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    /// How per-chunk subsequence lengths combine in overlapped mode.
    #[arg(long, value_enum, default_value_t = AggregateArg::Sum)]
    pub seq_aggregate: AggregateArg,
    /// Pair only the common chunk prefix when chunk counts differ.
    #[arg(long)]
    pub truncate_chunks: bool,
    /// Embedding delay for the chaotic features.
    #[arg(long, default_value_t = 1)]
    pub delay: usize,
    /// Distance-ratio threshold for false nearest neighbours.
    #[arg(long, default_value_t = 10.0)]
    pub fnn_tolerance: f64,
    /// Seed for choosing each file's packet window.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassifierArg {
    Svm,
    Tree,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Labelled feature CSV.
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long, value_enum, default_value_t = ClassifierArg::Svm)]
    pub classifier: ClassifierArg,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub train_fraction: f64,
    /// Keep the fewest components explaining this variance share.
    #[arg(long, default_value_t = 0.95, conflicts_with = "components")]
    pub variance: f64,
    /// Keep exactly this many components.
    #[arg(long)]
    pub components: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Feature CSV to classify.
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub features: Option<PathBuf>,
    /// Corpus directory to extract and classify.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Representative file for LCS features (corpus input).
    #[arg(long)]
    pub reps: Option<PathBuf>,
    /// Packet length for corpus input without representatives.
    #[arg(long, default_value_t = 8192)]
    pub packet_len: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Only classify the rows the model held out from training.
    #[arg(long)]
    pub holdout: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Representative file; its packets are cut to each packet length.
    /// Without it, one synthetic representative per built-in class is used.
    #[arg(long)]
    pub reps: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "8192")]
    pub packet_lens: Vec<usize>,
    #[arg(long, default_value_t = 1024)]
    pub chunk_len: usize,
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    #[arg(long = "packets", default_value_t = 50)]
    pub n_packets: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of a text table.
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Reps(a) => commands::reps(a),
        Command::Extract(a) => commands::extract(a),
        Command::Train(a) => commands::train(a),
        Command::Predict(a) => commands::predict(a),
        Command::BenchLcs(a) => commands::bench_lcs(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
