//! Seeded stratified k-fold cross-validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{train_model, SvmParams};
use crate::features::FeatureMatrix;
use crate::scales::ScaleVariant;
use crate::sequences::Label;

use super::metrics::{confusion, metrics, ConfusionMatrix, MetricsReport};
use super::{EvalError, MetricSummary};

/// Splits row indices into `k` folds, each class dealt round-robin after a
/// seeded shuffle. Per class, fold sizes differ by at most one. Indices in
/// each fold are sorted.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidK { k, reason: "k must be at least 2".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0usize;
    for class in [Label::Interacting, Label::NonInteracting] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < k {
            return Err(EvalError::InvalidK {
                k,
                reason: format!(
                    "class {} has only {} rows",
                    class.as_u8(),
                    members.len()
                ),
            });
        }
        members.shuffle(&mut rng);
        for i in members {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for f in folds.iter_mut() {
        f.sort_unstable();
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
    /// Standardizer means fitted on this fold's training rows.
    pub standardizer_means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvSummary {
    pub precision: MetricSummary,
    pub recall: MetricSummary,
    pub accuracy: MetricSummary,
    pub f1: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    pub summary: CvSummary,
}

/// Runs stratified k-fold CV. Each fold fits its own standardizer and model
/// on the other `k − 1` folds only. Folds run in parallel; results are
/// reduced in fold order.
pub fn kfold_cv(
    matrix: &FeatureMatrix,
    k: usize,
    seed: u64,
    params: &SvmParams,
    standardize: bool,
    scale_variant: ScaleVariant,
) -> Result<CvReport, EvalError> {
    let labels: Vec<Label> = matrix.labels().collect();
    let folds = stratified_folds(&labels, k, seed)?;

    let results: Vec<FoldResult> = folds
        .par_iter()
        .enumerate()
        .map(|(fold, test_idx)| {
            let mut in_test = vec![false; matrix.len()];
            for &i in test_idx {
                in_test[i] = true;
            }
            let train_idx: Vec<usize> = (0..matrix.len()).filter(|&i| !in_test[i]).collect();
            let train = matrix.select(&train_idx);
            let test = matrix.select(test_idx);
            let model = train_model(&train, params, standardize, scale_variant)?;
            let preds = test
                .vectors()
                .map(|v| model.predict(v.as_slice()))
                .collect::<Result<Vec<_>, _>>()?;
            let truth: Vec<Label> = test.labels().collect();
            let cm = confusion(&preds, &truth)?;
            Ok(FoldResult {
                fold,
                train_rows: train_idx.len(),
                test_rows: test_idx.len(),
                confusion: cm,
                metrics: metrics(&cm),
                standardizer_means: model.standardizer.means().to_vec(),
            })
        })
        .collect::<Result<_, EvalError>>()?;

    let reports: Vec<MetricsReport> = results.iter().map(|r| r.metrics).collect();
    let summary = CvSummary {
        precision: MetricSummary::from_values(reports.iter().map(|m| m.precision)),
        recall: MetricSummary::from_values(reports.iter().map(|m| m.recall)),
        accuracy: MetricSummary::from_values(reports.iter().map(|m| m.accuracy)),
        f1: MetricSummary::from_values(reports.iter().map(|m| m.f1)),
    };
    Ok(CvReport {
        k,
        seed,
        folds: results,
        summary,
    })
}
