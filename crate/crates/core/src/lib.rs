//! Sequence-based protein-protein interaction prediction.
//!
//! Residues are mapped through a table of 14 physicochemical scales
//! ([`scales`]), averaged into protein and pair vectors ([`features`]), and
//! classified by a primal linear SVM ([`classifier`]). [`splitgen`] builds
//! train/test splits whose test pairs are graded by protein overlap with the
//! training set, and [`evaluation`] scores models on them.
//!
//! The guide in `book/` walks through each stage; its code listings run as
//! doc-tests of this crate.

pub mod classifier;
pub mod evaluation;
pub mod features;
pub mod scales;
pub mod sequences;
pub mod splitgen;
pub mod textfmt;

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $file:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        };
    }
    chapter!(introduction, "introduction.md");
    chapter!(features, "features.md");
    chapter!(classifier, "classifier.md");
    chapter!(splits, "splits.md");
    chapter!(evaluation, "evaluation.md");
    chapter!(cli, "cli.md");
}
