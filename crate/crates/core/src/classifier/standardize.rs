use super::ClassifierError;

/// Per-column z-scoring fitted on training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl Standardizer {
    /// Fits column means and population standard deviations. A column whose
    /// standard deviation is zero gets 1 instead, so it standardizes to 0.
    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, ClassifierError> {
        let first = rows.first().ok_or(ClassifierError::EmptyMatrix)?;
        let dim = first.as_ref().len();
        let mut means = vec![0.0; dim];
        for (k, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(ClassifierError::ShapeMismatch(format!(
                    "row {k} has {} features, expected {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(ClassifierError::NonFiniteFeature { row: k });
            }
            // running mean: exact on constant columns
            let count = (k + 1) as f64;
            for (m, x) in means.iter_mut().zip(row) {
                *m += (x - *m) / count;
            }
        }
        let n = rows.len() as f64;
        let mut stds = vec![0.0; dim];
        for row in rows {
            for ((s, x), m) in stds.iter_mut().zip(row.as_ref()).zip(&means) {
                *s += (x - m) * (x - m);
            }
        }
        for s in stds.iter_mut() {
            *s = (*s / n).sqrt();
            if *s == 0.0 {
                *s = 1.0;
            }
        }
        Ok(Standardizer { means, stds })
    }

    /// Pass-through standardizer (means 0, stds 1).
    pub fn identity(dim: usize) -> Self {
        Standardizer {
            means: vec![0.0; dim],
            stds: vec![1.0; dim],
        }
    }

    /// Rebuilds a standardizer from stored parameters, checking that every
    /// std is finite and strictly positive.
    pub fn from_parts(means: Vec<f64>, stds: Vec<f64>) -> Result<Self, ClassifierError> {
        if means.len() != stds.len() {
            return Err(ClassifierError::ShapeMismatch(format!(
                "{} means but {} stds",
                means.len(),
                stds.len()
            )));
        }
        if let Some(k) = stds.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(ClassifierError::InvalidModel(format!(
                "std[{k}] = {} is not a positive finite number",
                stds[k]
            )));
        }
        if means.iter().any(|m| !m.is_finite()) {
            return Err(ClassifierError::InvalidModel("non-finite mean".into()));
        }
        Ok(Standardizer { means, stds })
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((v, m), s)| (v - m) / s)
            .collect()
    }
}
