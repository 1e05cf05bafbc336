//! Soft-margin linear SVM on pair feature vectors.

mod model;
mod standardize;
pub mod svm;

pub use model::{train_model, LinearModel, MODEL_FORMAT_VERSION};
pub use standardize::Standardizer;
pub use svm::{Samples, SvmFit, SvmParams};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("invalid hyperparameters: {0}")]
    InvalidParams(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite feature value in row {row}")]
    NonFiniteFeature { row: usize },
    #[error("non-finite input vector")]
    NonFiniteInput,
    #[error("empty feature matrix")]
    EmptyMatrix,
    #[error("need at least 2 training rows, got {0}")]
    TooFewSamples(usize),
    #[error("training data contains a single class")]
    SingleClass,
    #[error("unsupported model format version {0:?}")]
    UnsupportedVersion(String),
    #[error("invalid model file: {0}")]
    InvalidModel(String),
}
