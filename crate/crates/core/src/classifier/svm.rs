//! Primal soft-margin linear SVM trained by stochastic subgradient descent.
//!
//! The objective is
//!
//! ```text
//! J(w, b) = ½‖w‖² + C · Σᵢ max(0, 1 − yᵢ(w·xᵢ + b))
//! ```
//!
//! which has the same minimizer as the Pegasos form
//! `λ/2 ‖w‖² + (1/n) Σᵢ hingeᵢ` with `λ = 1/(C·n)`. Each epoch visits the
//! samples in a freshly shuffled order drawn from a seeded ChaCha stream, takes
//! steps of size `η_t = 1/(λ(t+1))` on both `w` and the unregularized bias,
//! projects `w` back onto the ball `‖w‖ ≤ √(2·J(0, 0))` (the optimum lies
//! inside it), and folds `w` into a running uniform average.
//!
//! The reported model is an averaged `w` paired with the intercept that
//! minimizes `J` exactly for it ([`optimal_bias`]). Under this step schedule
//! the raw SGD bias takes steps of order `C·n` early on and is slow to
//! recover; the exact intercept is cheap to compute and never raises `J`.
//!
//! The running average can get transiently worse from one epoch to the next,
//! so the reported `w` only moves to it at an epoch end when that lowers `J`.
//! The per-epoch objective history is therefore non-increasing.
//!
//! Training stops after `epochs` passes, or earlier once the running average's
//! objective changes by less than `tol · J(0, 0)` over an epoch.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ClassifierError;

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    /// Regularization constant, must be > 0.
    pub c: f64,
    /// Upper bound on the number of passes over the data.
    pub epochs: usize,
    /// Relative stopping tolerance on the per-epoch objective change.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            epochs: 200,
            tol: 1e-6,
            seed: 42,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(ClassifierError::InvalidParams(format!(
                "C must be finite and > 0, got {}",
                self.c
            )));
        }
        if self.epochs == 0 {
            return Err(ClassifierError::InvalidParams("epochs must be >= 1".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(ClassifierError::InvalidParams(format!(
                "tolerance must be finite and >= 0, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Dense row-major design matrix with ±1 targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    dim: usize,
    data: Vec<f64>,
    targets: Vec<f64>,
}

impl Samples {
    /// Builds a sample set from rows and boolean labels (`true` is the
    /// positive class, mapped to +1).
    pub fn new<R: AsRef<[f64]>>(rows: &[R], positive: &[bool]) -> Result<Self, ClassifierError> {
        if rows.len() != positive.len() {
            return Err(ClassifierError::ShapeMismatch(format!(
                "{} rows but {} labels",
                rows.len(),
                positive.len()
            )));
        }
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(ClassifierError::ShapeMismatch(format!(
                    "row {i} has {} features, expected {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(ClassifierError::NonFiniteFeature { row: i });
            }
            data.extend_from_slice(row);
        }
        let targets = positive.iter().map(|&p| if p { 1.0 } else { -1.0 }).collect();
        Ok(Samples { dim, data, targets })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Target of sample `i`, either +1.0 or -1.0.
    pub fn target(&self, i: usize) -> f64 {
        self.targets[i]
    }

    /// Same samples with every target negated.
    pub fn with_flipped_labels(&self) -> Samples {
        Samples {
            dim: self.dim,
            data: self.data.clone(),
            targets: self.targets.iter().map(|t| -t).collect(),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Primal objective `½‖w‖² + C Σ hinge`.
pub fn objective(weights: &[f64], bias: f64, samples: &Samples, c: f64) -> f64 {
    let hinge: f64 = (0..samples.len())
        .map(|i| {
            let margin = samples.target(i) * (dot(weights, samples.row(i)) + bias);
            (1.0 - margin).max(0.0)
        })
        .sum();
    0.5 * dot(weights, weights) + c * hinge
}

/// Mean hinge loss over the samples.
pub fn mean_hinge_loss(weights: &[f64], bias: f64, samples: &Samples) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let total: f64 = (0..samples.len())
        .map(|i| (1.0 - samples.target(i) * (dot(weights, samples.row(i)) + bias)).max(0.0))
        .sum();
    total / samples.len() as f64
}

/// A subgradient of the primal objective with respect to `(w, b)`.
///
/// Samples sitting exactly on the margin contribute nothing; away from such
/// points this is the true gradient.
pub fn objective_subgradient(
    weights: &[f64],
    bias: f64,
    samples: &Samples,
    c: f64,
) -> (Vec<f64>, f64) {
    let mut grad_w = weights.to_vec();
    let mut grad_b = 0.0;
    for i in 0..samples.len() {
        let y = samples.target(i);
        let x = samples.row(i);
        if y * (dot(weights, x) + bias) < 1.0 {
            for (g, xi) in grad_w.iter_mut().zip(x) {
                *g -= c * y * xi;
            }
            grad_b -= c * y;
        }
    }
    (grad_w, grad_b)
}

/// Bias minimizing the objective for fixed weights.
///
/// For fixed `w` the hinge sum is piecewise linear in `b` with breakpoints
/// `yᵢ − w·xᵢ`, and every breakpoint raises the slope by exactly one starting
/// from `−P` (P = number of positives). The minimizers therefore form the
/// interval between the P-th and (P+1)-th smallest breakpoints; its midpoint
/// is returned.
pub fn optimal_bias(weights: &[f64], samples: &Samples) -> f64 {
    let mut breaks: Vec<f64> = (0..samples.len())
        .map(|i| samples.target(i) - dot(weights, samples.row(i)))
        .collect();
    let positives = (0..samples.len()).filter(|&i| samples.target(i) > 0.0).count();
    breaks.sort_by(f64::total_cmp);
    match positives {
        0 => breaks.first().map_or(0.0, |&q| q - 1.0),
        p if p == breaks.len() => breaks[p - 1] + 1.0,
        p => (breaks[p - 1] + breaks[p]) / 2.0,
    }
}

/// Result of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmFit {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub epochs_run: usize,
    /// Objective of the reported iterate at the end of every epoch;
    /// never increases.
    pub objective_history: Vec<f64>,
}

/// Trains a linear SVM on `samples`.
pub fn train(samples: &Samples, params: &SvmParams) -> Result<SvmFit, ClassifierError> {
    params.validate()?;
    let n = samples.len();
    if n < 2 {
        return Err(ClassifierError::TooFewSamples(n));
    }
    let positives = (0..n).filter(|&i| samples.target(i) > 0.0).count();
    if positives == 0 || positives == n {
        return Err(ClassifierError::SingleClass);
    }

    let dim = samples.dim();
    let lambda = 1.0 / (params.c * n as f64);
    let j0 = objective(&vec![0.0; dim], 0.0, samples, params.c);

    let radius = (2.0 * j0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..n).collect();

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut avg_w = vec![0.0; dim];
    let mut t: u64 = 0;

    let mut history = Vec::with_capacity(params.epochs);
    let mut prev = f64::INFINITY;
    let mut best = f64::INFINITY;
    let mut best_w = vec![0.0; dim];
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = 1.0 / (lambda * (t + 1) as f64);
            let y = samples.target(i);
            let x = samples.row(i);
            let margin = y * (dot(&w, x) + b);
            let shrink = 1.0 - eta * lambda;
            for wj in w.iter_mut() {
                *wj *= shrink;
            }
            if margin < 1.0 {
                for (wj, xj) in w.iter_mut().zip(x) {
                    *wj += eta * y * xj;
                }
                b += eta * y;
            }
            // the optimum satisfies ½‖w‖² ≤ J(0), so nothing outside that ball is worth visiting
            let norm = dot(&w, &w).sqrt();
            if norm > radius {
                let s = radius / norm;
                for wj in w.iter_mut() {
                    *wj *= s;
                }
            }
            t += 1;
            let step = 1.0 / t as f64;
            for (aj, wj) in avg_w.iter_mut().zip(&w) {
                *aj += (wj - *aj) * step;
            }
        }
        // the running average can transiently worsen; the reported iterate
        // only moves to it when that lowers the objective
        let candidate = objective(&avg_w, optimal_bias(&avg_w, samples), samples, params.c);
        if candidate <= best {
            best = candidate;
            best_w.copy_from_slice(&avg_w);
        }
        history.push(best);
        // converged once the running average itself stops moving
        if (prev - candidate).abs() < params.tol * j0 {
            break;
        }
        prev = candidate;
    }

    let bias = optimal_bias(&best_w, samples);
    Ok(SvmFit {
        weights: best_w,
        bias,
        epochs_run: history.len(),
        objective_history: history,
    })
}
