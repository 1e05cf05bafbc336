//! Trained linear model, prediction, and the plain-text model file.
//!
//! The model file is a versioned list of `key=value` lines. Vectors are
//! space-separated; every real is written with 17 significant digits so a
//! save/load cycle reproduces the parameters bit for bit. Lines starting with
//! `#` are comments.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::features::FeatureMatrix;
use crate::scales::ScaleVariant;
use crate::sequences::Label;
use crate::textfmt::{format_f64, TOOL_NAME, TOOL_VERSION};

use super::standardize::Standardizer;
use super::svm::{self, Samples, SvmParams};
use super::ClassifierError;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardizer: Standardizer,
    /// Whether features were z-scored before training. When false the
    /// standardizer is the identity.
    pub standardize: bool,
    pub params: SvmParams,
    pub scale_variant: ScaleVariant,
}

impl LinearModel {
    /// Fits the standardizer (if requested) and the SVM on raw rows.
    pub fn fit<R: AsRef<[f64]>>(
        rows: &[R],
        positive: &[bool],
        params: &SvmParams,
        standardize: bool,
        scale_variant: ScaleVariant,
    ) -> Result<Self, ClassifierError> {
        if rows.is_empty() {
            return Err(ClassifierError::EmptyMatrix);
        }
        let standardizer = if standardize {
            Standardizer::fit(rows)?
        } else {
            let dim = rows[0].as_ref().len();
            Standardizer::identity(dim)
        };
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| standardizer.apply(r.as_ref())).collect();
        let samples = Samples::new(&scaled, positive)?;
        let fit = svm::train(&samples, params)?;
        Ok(LinearModel {
            weights: fit.weights,
            bias: fit.bias,
            standardizer,
            standardize,
            params: *params,
            scale_variant,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `w · standardize(x) + b`.
    pub fn decision(&self, x: &[f64]) -> Result<f64, ClassifierError> {
        if x.len() != self.dim() {
            return Err(ClassifierError::ShapeMismatch(format!(
                "input has {} features, model expects {}",
                x.len(),
                self.dim()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(ClassifierError::NonFiniteInput);
        }
        let z = self.standardizer.apply(x);
        Ok(z.iter().zip(&self.weights).map(|(a, w)| a * w).sum::<f64>() + self.bias)
    }

    /// Predicted label; a decision value of exactly 0 counts as interacting.
    pub fn predict(&self, x: &[f64]) -> Result<Label, ClassifierError> {
        Ok(if self.decision(x)? >= 0.0 {
            Label::Interacting
        } else {
            Label::NonInteracting
        })
    }

    pub fn save<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let join = |v: &[f64]| v.iter().map(|x| format_f64(*x)).collect::<Vec<_>>().join(" ");
        writeln!(w, "# {TOOL_NAME} linear SVM model")?;
        writeln!(w, "format_version={MODEL_FORMAT_VERSION}")?;
        writeln!(w, "tool_version={TOOL_VERSION}")?;
        writeln!(w, "scale_variant={}", self.scale_variant)?;
        writeln!(w, "standardize={}", self.standardize)?;
        writeln!(w, "means={}", join(self.standardizer.means()))?;
        writeln!(w, "stds={}", join(self.standardizer.stds()))?;
        writeln!(w, "weights={}", join(&self.weights))?;
        writeln!(w, "bias={}", format_f64(self.bias))?;
        writeln!(w, "C={}", format_f64(self.params.c))?;
        writeln!(w, "epochs={}", self.params.epochs)?;
        writeln!(w, "tol={}", format_f64(self.params.tol))?;
        writeln!(w, "seed={}", self.params.seed)?;
        Ok(())
    }

    pub fn load<R: BufRead>(reader: R) -> Result<Self, ClassifierError> {
        let mut fields: HashMap<String, String> = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| ClassifierError::InvalidModel(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                ClassifierError::InvalidModel(format!("line {}: expected key=value", i + 1))
            })?;
            if fields.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(ClassifierError::InvalidModel(format!(
                    "line {}: duplicate key {:?}",
                    i + 1,
                    k.trim()
                )));
            }
        }

        let get = |key: &str| {
            fields
                .get(key)
                .map(String::as_str)
                .ok_or_else(|| ClassifierError::InvalidModel(format!("missing field {key:?}")))
        };
        let bad = |key: &str, v: &str| ClassifierError::InvalidModel(format!("bad value for {key}: {v:?}"));
        let real = |key: &str| -> Result<f64, ClassifierError> {
            let v = get(key)?;
            let x: f64 = v.parse().map_err(|_| bad(key, v))?;
            if !x.is_finite() {
                return Err(bad(key, v));
            }
            Ok(x)
        };
        let vector = |key: &str| -> Result<Vec<f64>, ClassifierError> {
            let v = get(key)?;
            v.split_whitespace()
                .map(|t| match t.parse::<f64>() {
                    Ok(x) if x.is_finite() => Ok(x),
                    _ => Err(bad(key, t)),
                })
                .collect()
        };

        let version = get("format_version")?;
        if version.parse::<u32>().ok() != Some(MODEL_FORMAT_VERSION) {
            return Err(ClassifierError::UnsupportedVersion(version.to_string()));
        }
        let scale_variant: ScaleVariant = get("scale_variant")?
            .parse()
            .map_err(|e: crate::scales::ScaleError| ClassifierError::InvalidModel(e.to_string()))?;
        let standardize = match get("standardize")? {
            "true" => true,
            "false" => false,
            other => return Err(bad("standardize", other)),
        };
        let weights = vector("weights")?;
        let standardizer = Standardizer::from_parts(vector("means")?, vector("stds")?)?;
        if weights.is_empty() || standardizer.dim() != weights.len() {
            return Err(ClassifierError::InvalidModel(format!(
                "{} weights but standardizer of dimension {}",
                weights.len(),
                standardizer.dim()
            )));
        }
        let epochs = get("epochs")?;
        let seed = get("seed")?;
        let params = SvmParams {
            c: real("C")?,
            epochs: epochs.parse().map_err(|_| bad("epochs", epochs))?,
            tol: real("tol")?,
            seed: seed.parse().map_err(|_| bad("seed", seed))?,
        };
        params
            .validate()
            .map_err(|e| ClassifierError::InvalidModel(e.to_string()))?;
        Ok(LinearModel {
            weights,
            bias: real("bias")?,
            standardizer,
            standardize,
            params,
            scale_variant,
        })
    }
}

/// Trains on a featurized dataset.
pub fn train_model(
    matrix: &FeatureMatrix,
    params: &SvmParams,
    standardize: bool,
    scale_variant: ScaleVariant,
) -> Result<LinearModel, ClassifierError> {
    let rows: Vec<&[f64]> = matrix.vectors().map(|v| v.as_slice()).collect();
    let positive: Vec<bool> = matrix.labels().map(Label::is_positive).collect();
    LinearModel::fit(&rows, &positive, params, standardize, scale_variant)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_model() -> LinearModel {
        let rows = vec![[0.0, 1.0], [1.0, 3.0], [2.0, -1.0], [3.5, 0.25]];
        let pos = [false, false, true, true];
        LinearModel::fit(&rows, &pos, &SvmParams::default(), true, ScaleVariant::CorrectedY).unwrap()
    }

    #[test]
    fn zero_weights_positive_bias_predicts_interacting() {
        let m = LinearModel {
            weights: vec![0.0; 3],
            bias: 0.5,
            standardizer: Standardizer::identity(3),
            standardize: false,
            params: SvmParams::default(),
            scale_variant: ScaleVariant::PaperVerbatim,
        };
        assert_eq!(m.predict(&[1e6, -3.0, 0.0]).unwrap(), Label::Interacting);
    }

    #[test]
    fn tie_goes_to_positive() {
        let m = LinearModel {
            weights: vec![1.0],
            bias: -2.0,
            standardizer: Standardizer::identity(1),
            standardize: false,
            params: SvmParams::default(),
            scale_variant: ScaleVariant::PaperVerbatim,
        };
        assert_eq!(m.decision(&[2.0]).unwrap(), 0.0);
        assert_eq!(m.predict(&[2.0]).unwrap(), Label::Interacting);
    }

    #[test]
    fn rejects_bad_input() {
        let m = toy_model();
        assert!(matches!(m.decision(&[f64::NAN, 0.0]), Err(ClassifierError::NonFiniteInput)));
        assert!(matches!(m.decision(&[0.0]), Err(ClassifierError::ShapeMismatch(_))));
    }

    #[test]
    fn save_load_is_bit_exact() {
        let m = toy_model();
        let mut buf = Vec::new();
        m.save(&mut buf).unwrap();
        let back = LinearModel::load(buf.as_slice()).unwrap();
        assert_eq!(back, m);
    }

    fn saved_text() -> String {
        let mut buf = Vec::new();
        toy_model().save(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn unknown_version_rejected() {
        let text = saved_text().replace("format_version=1", "format_version=7");
        assert!(matches!(
            LinearModel::load(text.as_bytes()),
            Err(ClassifierError::UnsupportedVersion(v)) if v == "7"
        ));
    }

    #[test]
    fn zero_std_rejected() {
        let text = saved_text();
        let stds_line = text.lines().find(|l| l.starts_with("stds=")).unwrap();
        let text = text.replace(stds_line, "stds=1.0 0.0");
        assert!(matches!(
            LinearModel::load(text.as_bytes()),
            Err(ClassifierError::InvalidModel(_))
        ));
    }

    #[test]
    fn truncated_file_rejected() {
        let text = saved_text();
        let cut: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        assert!(LinearModel::load(cut.as_bytes()).is_err());
        let text = text.replace("bias=", "bias=inf#");
        assert!(LinearModel::load(text.as_bytes()).is_err());
    }

    #[test]
    fn weight_count_must_match() {
        let text = saved_text();
        let w = text.lines().find(|l| l.starts_with("weights=")).unwrap();
        let text = text.replace(w, "weights=1.0");
        assert!(LinearModel::load(text.as_bytes()).is_err());
    }
}
