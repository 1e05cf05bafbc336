use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seqppi::scales::ScaleVariant;
use seqppi::sequences::UnknownResiduePolicy;

mod commands;

/// Sequence-based protein-protein interaction prediction.
#[derive(Debug, Parser)]
#[command(name = "seqppi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn a FASTA file and a pairs TSV into a feature CSV.
    Featurize(FeaturizeArgs),
    /// Partition labeled pairs into train and C1/C2/C3 test sets.
    Split(SplitArgs),
    /// Sample non-interacting pairs that are not in a pairs file.
    Negatives(NegativesArgs),
    /// Train a linear SVM on a feature CSV.
    Train(TrainArgs),
    /// Score the rows of a feature CSV with a trained model.
    Predict(PredictArgs),
    /// Evaluate a model on one or more labeled feature CSVs.
    Eval(EvalArgs),
    /// Stratified k-fold cross-validation on a feature CSV.
    Cv(CvArgs),
    /// Write the 20 x 14 physicochemical scale table as CSV.
    ExportScales(ExportScalesArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    /// The table exactly as printed
    Paper,
    /// Tyrosine's NCI and V entries swapped back
    Corrected,
}

impl From<VariantArg> for ScaleVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Paper => ScaleVariant::PaperVerbatim,
            VariantArg::Corrected => ScaleVariant::CorrectedY,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnknownArg {
    Error,
    Skip,
}

impl From<UnknownArg> for UnknownResiduePolicy {
    fn from(v: UnknownArg) -> Self {
        match v {
            UnknownArg::Error => UnknownResiduePolicy::Error,
            UnknownArg::Skip => UnknownResiduePolicy::Skip,
        }
    }
}

#[derive(Debug, Args)]
struct FeaturizeArgs {
    #[arg(long)]
    fasta: PathBuf,
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "paper")]
    scale_variant: VariantArg,
    /// What to do with residue letters outside the 20 standard amino acids.
    #[arg(long, value_enum, default_value = "error")]
    unknown_residue: UnknownArg,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    pairs: PathBuf,
    /// Directory for train.tsv, c1.tsv, c2.tsv, c3.tsv and report.json.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 4000)]
    train: usize,
    #[arg(long, default_value_t = 2000)]
    c1: usize,
    #[arg(long, default_value_t = 1500)]
    c2: usize,
    #[arg(long, default_value_t = 1500)]
    c3: usize,
    /// Positive:negative ratio applied to every set.
    #[arg(long, default_value = "1:1", value_parser = parse_ratio)]
    ratio: (usize, usize),
}

fn parse_ratio(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected POS:NEG, e.g. 1:1")?;
    let a: usize = a.parse().map_err(|_| format!("bad count {a:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("bad count {b:?}"))?;
    if a + b == 0 {
        return Err("ratio cannot be 0:0".into());
    }
    Ok((a, b))
}

#[derive(Debug, Args)]
struct NegativesArgs {
    /// Known pairs; none of them is sampled.
    #[arg(long)]
    pairs: PathBuf,
    /// Draw proteins from this FASTA instead of the endpoints of --pairs.
    #[arg(long)]
    fasta: Option<PathBuf>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SvmArgs {
    /// Soft-margin penalty.
    #[arg(long = "c", default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    /// Stop once the objective moves by less than tol times the objective at
    /// zero over an epoch.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Train on raw features instead of z-scored ones.
    #[arg(long)]
    no_standardize: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    svm: SvmArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// NAME=FEATURES.csv; repeat for several test sets.
    #[arg(long = "test", required = true, value_parser = parse_named)]
    tests: Vec<(String, PathBuf)>,
    /// JSON report path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_named(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err("expected NAME=PATH".into()),
    }
}

#[derive(Debug, Args)]
struct CvArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long)]
    seed: u64,
    /// JSON report path.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    svm: SvmArgs,
}

#[derive(Debug, Args)]
struct ExportScalesArgs {
    #[arg(long, value_enum, default_value = "paper")]
    scale_variant: VariantArg,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Featurize(a) => commands::featurize(a),
        Command::Split(a) => commands::split(a),
        Command::Negatives(a) => commands::negatives(a),
        Command::Train(a) => commands::train(a),
        Command::Predict(a) => commands::predict(a),
        Command::Eval(a) => commands::eval(a),
        Command::Cv(a) => commands::cv(a),
        Command::ExportScales(a) => commands::export_scales(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace(['\n', '\r'], " ");
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
