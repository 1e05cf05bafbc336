//! Confusion counts, metrics, cross-validation and reports.

mod cv;
mod metrics;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::classifier::ClassifierError;

pub use cv::{kfold_cv, stratified_folds, CvReport, CvSummary, FoldResult};
pub use metrics::{confusion, f1_score, metrics, ConfusionMatrix, MetricsReport};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{predictions} predictions but {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("nothing to evaluate")]
    Empty,
    #[error("cannot build {k} folds: {reason}")]
    InvalidK { k: usize, reason: String },
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
}

/// Mean and population standard deviation of one metric over folds, taken
/// over the folds where the metric is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSummary {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub defined: usize,
    pub undefined: usize,
}

impl MetricSummary {
    pub fn from_values<I: IntoIterator<Item = Option<f64>>>(values: I) -> Self {
        let mut defined = Vec::new();
        let mut undefined = 0;
        for v in values {
            match v {
                Some(x) => defined.push(x),
                None => undefined += 1,
            }
        }
        if defined.is_empty() {
            return MetricSummary { mean: None, std: None, defined: 0, undefined };
        }
        let n = defined.len() as f64;
        let mean = defined.iter().sum::<f64>() / n;
        let var = defined.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        MetricSummary {
            mean: Some(mean),
            std: Some(var.sqrt()),
            defined: defined.len(),
            undefined,
        }
    }
}

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.4}"),
        None => "undefined".to_string(),
    }
}

/// Fixed-width table of named metric rows.
pub fn render_metrics_table(rows: &[(String, MetricsReport)]) -> String {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>10}  {:>10}  {:>10}  {:>10}",
        "set", "precision", "recall", "accuracy", "f1"
    );
    for (name, m) in rows {
        let [p, r, a, f] = m.as_array().map(cell);
        let _ = writeln!(out, "{name:<width$}  {p:>10}  {r:>10}  {a:>10}  {f:>10}");
    }
    out
}

/// Human-readable cross-validation summary.
pub fn render_cv(report: &CvReport) -> String {
    let rows: Vec<(String, MetricsReport)> = report
        .folds
        .iter()
        .map(|f| (format!("fold {}", f.fold + 1), f.metrics))
        .collect();
    let mut out = render_metrics_table(&rows);
    let s = &report.summary;
    for (name, m) in [
        ("precision", s.precision),
        ("recall", s.recall),
        ("accuracy", s.accuracy),
        ("f1", s.f1),
    ] {
        let _ = writeln!(
            out,
            "{name}: mean {} std {} ({} of {} folds defined)",
            cell(m.mean),
            cell(m.std),
            m.defined,
            m.defined + m.undefined
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_skips_undefined() {
        let s = MetricSummary::from_values([Some(1.0), None, Some(0.0)]);
        assert_eq!(s.mean, Some(0.5));
        assert_eq!(s.std, Some(0.5));
        assert_eq!((s.defined, s.undefined), (2, 1));
        let none = MetricSummary::from_values([None, None]);
        assert_eq!(none.mean, None);
        assert_eq!(none.undefined, 2);
    }

    #[test]
    fn table_marks_undefined() {
        let m = metrics(&ConfusionMatrix { tp: 0, fp: 0, fn_: 1, tn: 1 });
        let t = render_metrics_table(&[("C1".into(), m)]);
        assert!(t.contains("undefined"));
        assert!(t.contains("0.5000"));
    }
}
