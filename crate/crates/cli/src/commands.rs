use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use seqppi::classifier::{train_model, LinearModel, SvmParams};
use seqppi::evaluation::{
    confusion, kfold_cv, metrics, render_cv, render_metrics_table, ConfusionMatrix, CvReport,
    MetricsReport,
};
use seqppi::features::{featurize_dataset, read_feature_csv, write_feature_csv, FeatureFile};
use seqppi::scales::{ScaleTable, ScaleVariant};
use seqppi::sequences::{
    parse_fasta, parse_pairs, write_pairs, InteractionRecord, Label, ProteinId, SequenceSet,
    UnknownResiduePolicy, UnorderedPair,
};
use seqppi::splitgen::{
    generate_split, sample_negatives, verify_split, LabelCounts, SplitCounts, SplitTargets,
    UniqueNodes, VerificationReport,
};
use seqppi::textfmt::{format_f64, Provenance};

use crate::{
    CvArgs, EvalArgs, ExportScalesArgs, FeaturizeArgs, NegativesArgs, PredictArgs, SplitArgs,
    SvmArgs, TrainArgs,
};

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

/// Writes a whole file through `body`, naming the path on failure.
fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(f);
    body(&mut w)
        .and_then(|_| w.flush())
        .with_context(|| format!("cannot write {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_file(path, |w| writeln!(w, "{text}"))
}

/// Tool, version, scale variant and seed; `None` fields are recorded as
/// `n/a` so every output carries all four keys.
fn provenance(variant: Option<ScaleVariant>, seed: Option<u64>) -> Provenance {
    let na = || "n/a".to_string();
    Provenance::new()
        .with("scale_variant", variant.map(|v| v.to_string()).unwrap_or_else(na))
        .with("seed", seed.map(|s| s.to_string()).unwrap_or_else(na))
}

fn comment_lines(p: &Provenance) -> Vec<String> {
    p.entries().iter().map(|(k, v)| format!("{k}={v}")).collect()
}

fn read_pairs(path: &Path) -> Result<Vec<InteractionRecord>> {
    parse_pairs(open(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_sequences(path: &Path, policy: UnknownResiduePolicy) -> Result<SequenceSet> {
    let seqs = parse_fasta(open(path)?, policy).with_context(|| format!("in {}", path.display()))?;
    Ok(SequenceSet::try_from(seqs)?)
}

fn read_features(path: &Path) -> Result<FeatureFile> {
    read_feature_csv(open(path)?).with_context(|| format!("in {}", path.display()))
}

fn svm_params(args: &SvmArgs, seed: u64) -> Result<SvmParams> {
    let params = SvmParams {
        c: args.c,
        epochs: args.epochs,
        tol: args.tol,
        seed,
    };
    params.validate()?;
    Ok(params)
}

fn svm_provenance(mut p: Provenance, params: &SvmParams, standardize: bool) -> Provenance {
    p.set("C", format_f64(params.c));
    p.set("epochs", params.epochs);
    p.set("tol", format_f64(params.tol));
    p.set("standardize", standardize);
    p
}

pub fn featurize(args: FeaturizeArgs) -> Result<()> {
    let policy: UnknownResiduePolicy = args.unknown_residue.into();
    let variant: ScaleVariant = args.scale_variant.into();
    let seqs = read_sequences(&args.fasta, policy)?;
    let records = read_pairs(&args.pairs)?;
    let table = ScaleTable::new(variant);
    let matrix = featurize_dataset(&records, &seqs, &table)?;
    let prov = provenance(Some(variant), None)
        .with("scale_checksum", hex::encode(table.checksum()))
        .with(
            "unknown_residue",
            match policy {
                UnknownResiduePolicy::Error => "error",
                UnknownResiduePolicy::Skip => "skip",
            },
        )
        .with("rows", matrix.len());
    write_file(&args.out, |w| write_feature_csv(w, &prov, &matrix))?;
    println!("wrote {} feature rows to {}", matrix.len(), args.out.display());
    Ok(())
}

#[derive(Serialize)]
struct SplitReport<'a> {
    provenance: &'a Provenance,
    targets: SplitCounts,
    counts: SplitCounts,
    unique_nodes: UniqueNodes,
    verification: &'a VerificationReport,
}

pub fn split(args: SplitArgs) -> Result<()> {
    let records = read_pairs(&args.pairs)?;
    let (pos, neg) = args.ratio;
    let targets = SplitTargets {
        train: LabelCounts::with_ratio(args.train, pos, neg),
        c1: LabelCounts::with_ratio(args.c1, pos, neg),
        c2: LabelCounts::with_ratio(args.c2, pos, neg),
        c3: LabelCounts::with_ratio(args.c3, pos, neg),
    };
    let result = generate_split(&records, &targets, args.seed)?;
    let report = verify_split(&result);
    if !report.passed() {
        bail!("generated split failed verification");
    }

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let prov = provenance(None, Some(args.seed)).with("ratio", format!("{pos}:{neg}"));
    for (name, set) in [
        ("train", &result.train_pairs),
        ("c1", &result.c1),
        ("c2", &result.c2),
        ("c3", &result.c3),
    ] {
        let comments = comment_lines(&prov.clone().with("set", name));
        let path = args.out_dir.join(format!("{name}.tsv"));
        write_file(&path, |w| write_pairs(w, &comments, set))?;
    }
    write_json(
        &args.out_dir.join("report.json"),
        &SplitReport {
            provenance: &prov,
            targets,
            counts: report.label_counts,
            unique_nodes: report.unique_nodes,
            verification: &report,
        },
    )?;
    println!("split seed {}: {}", args.seed, report.label_counts);
    Ok(())
}

pub fn negatives(args: NegativesArgs) -> Result<()> {
    let records = read_pairs(&args.pairs)?;
    let known: HashSet<UnorderedPair> = records.iter().map(InteractionRecord::pair).collect();
    let nodes: Vec<ProteinId> = match &args.fasta {
        Some(path) => read_sequences(path, UnknownResiduePolicy::Skip)?.ids().cloned().collect(),
        None => records.iter().flat_map(|r| [r.a.clone(), r.b.clone()]).collect(),
    };
    let sampled = sample_negatives(&nodes, &known, args.n, args.seed)?;
    let prov = provenance(None, Some(args.seed)).with("n", args.n);
    write_file(&args.out, |w| write_pairs(w, &comment_lines(&prov), &sampled))?;
    println!("wrote {} negative pairs to {}", sampled.len(), args.out.display());
    Ok(())
}

pub fn train(args: TrainArgs) -> Result<()> {
    let file = read_features(&args.features)?;
    let params = svm_params(&args.svm, args.seed)?;
    let model = train_model(&file.matrix, &params, !args.svm.no_standardize, file.scale_variant())?;
    write_file(&args.model, |w| model.save(w))?;
    println!("trained on {} rows; model written to {}", file.matrix.len(), args.model.display());
    Ok(())
}

fn load_model(path: &Path) -> Result<LinearModel> {
    LinearModel::load(open(path)?).with_context(|| format!("in {}", path.display()))
}

fn check_variant(model: &LinearModel, file: &FeatureFile, path: &Path) -> Result<()> {
    if model.scale_variant != file.scale_variant() {
        bail!(
            "{} was featurized with scale variant {} but the model uses {}",
            path.display(),
            file.scale_variant(),
            model.scale_variant
        );
    }
    Ok(())
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let file = read_features(&args.features)?;
    check_variant(&model, &file, &args.features)?;
    let mut lines = Vec::with_capacity(file.matrix.len());
    for (rec, v) in &file.matrix.rows {
        let d = model.decision(v.as_slice())?;
        let label = if d >= 0.0 { Label::Interacting } else { Label::NonInteracting };
        lines.push(format!("{}\t{}\t{}\t{}", rec.a, rec.b, format_f64(d), label.as_u8()));
    }
    let prov = provenance(Some(model.scale_variant), Some(model.params.seed));
    write_file(&args.out, |w| {
        prov.write_comments(w, "# ")?;
        for l in &lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    })?;
    println!("wrote {} predictions to {}", lines.len(), args.out.display());
    Ok(())
}

#[derive(Serialize)]
struct SetResult {
    name: String,
    rows: usize,
    confusion: ConfusionMatrix,
    metrics: MetricsReport,
}

#[derive(Serialize)]
struct EvalReport<'a> {
    provenance: &'a Provenance,
    mode: &'static str,
    sets: &'a [SetResult],
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let mut sets = Vec::new();
    for (name, path) in &args.tests {
        let file = read_features(path)?;
        check_variant(&model, &file, path)?;
        let preds = file
            .matrix
            .vectors()
            .map(|v| model.predict(v.as_slice()))
            .collect::<Result<Vec<_>, _>>()?;
        let truth: Vec<Label> = file.matrix.labels().collect();
        let cm = confusion(&preds, &truth).with_context(|| format!("evaluating {name}"))?;
        sets.push(SetResult {
            name: name.clone(),
            rows: truth.len(),
            confusion: cm,
            metrics: metrics(&cm),
        });
    }
    let prov = svm_provenance(
        provenance(Some(model.scale_variant), Some(model.params.seed)),
        &model.params,
        model.standardize,
    );
    write_json(&args.out, &EvalReport { provenance: &prov, mode: "held-out", sets: &sets })?;
    let rows: Vec<(String, MetricsReport)> = sets.iter().map(|s| (s.name.clone(), s.metrics)).collect();
    print!("{}", render_metrics_table(&rows));
    Ok(())
}

#[derive(Serialize)]
struct CvFile<'a> {
    provenance: &'a Provenance,
    mode: &'static str,
    #[serde(flatten)]
    report: &'a CvReport,
}

pub fn cv(args: CvArgs) -> Result<()> {
    let file = read_features(&args.features)?;
    let params = svm_params(&args.svm, args.seed)?;
    let standardize = !args.svm.no_standardize;
    let variant = file.scale_variant();
    let report = kfold_cv(&file.matrix, args.k, args.seed, &params, standardize, variant)?;
    let prov = svm_provenance(provenance(Some(variant), Some(args.seed)), &params, standardize)
        .with("k", args.k)
        .with("rows", file.matrix.len());
    write_json(&args.out, &CvFile { provenance: &prov, mode: "cross-validation", report: &report })?;
    print!("{}", render_cv(&report));
    Ok(())
}

pub fn export_scales(args: ExportScalesArgs) -> Result<()> {
    let variant: ScaleVariant = args.scale_variant.into();
    let table = ScaleTable::new(variant);
    let prov = provenance(Some(variant), None).with("scale_checksum", hex::encode(table.checksum()));
    let body = |w: &mut dyn Write| -> io::Result<()> {
        prov.write_comments(w, "# ")?;
        table.write_csv(w)
    };
    match &args.out {
        Some(path) => write_file(path, body),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).context("cannot write to standard output")
        }
    }
}
