//! Per-residue physicochemical scale values.
//!
//! Fourteen scales for the 20 canonical amino acids: two hydrophobicity scales
//! (H11, H12), hydrophilicity (H2), net charge index of the side chain (NCI),
//! two polarity scales (P11, P12), polarizability (P2), solvent-accessible
//! surface area (SASA), side-chain volume (V), flexibility (F), accessibility
//! (A1), exposed surface (E), turns (T) and antigenic propensity (A2).
//!
//! The published table has an anomalous tyrosine row: its NCI and V entries
//! (117.3 and 0.024) look transposed relative to every other row. The
//! [`ScaleVariant::PaperVerbatim`] table keeps them as printed, since the
//! published worked example for `AYCRS` only reproduces with NCI(Y) = 117.3.
//! [`ScaleVariant::CorrectedY`] swaps the two.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::sequences::AminoAcid;

#[derive(Debug, Error, PartialEq)]
pub enum ScaleError {
    #[error("non-canonical residue {0:?} has no scale values")]
    UnknownResidue(char),
    #[error("unknown scale variant {0:?} (expected \"paper\" or \"corrected\")")]
    UnknownVariant(String),
}

pub const NUM_SCALES: usize = 14;

/// Scale identifiers in canonical order. This order is the component order
/// of every feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScaleId {
    H11,
    H12,
    H2,
    Nci,
    P11,
    P12,
    P2,
    Sasa,
    V,
    F,
    A1,
    E,
    T,
    A2,
}

impl ScaleId {
    pub const ALL: [ScaleId; NUM_SCALES] = [
        ScaleId::H11,
        ScaleId::H12,
        ScaleId::H2,
        ScaleId::Nci,
        ScaleId::P11,
        ScaleId::P12,
        ScaleId::P2,
        ScaleId::Sasa,
        ScaleId::V,
        ScaleId::F,
        ScaleId::A1,
        ScaleId::E,
        ScaleId::T,
        ScaleId::A2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short column name used in CSV headers.
    pub fn name(self) -> &'static str {
        [
            "H11", "H12", "H2", "NCI", "P11", "P12", "P2", "SASA", "V", "F", "A1", "E", "T", "A2",
        ][self.index()]
    }

    pub fn description(self) -> &'static str {
        match self {
            ScaleId::H11 => "hydrophobicity (first scale)",
            ScaleId::H12 => "hydrophobicity (second scale)",
            ScaleId::H2 => "hydrophilicity",
            ScaleId::Nci => "net charge index of the side chain",
            ScaleId::P11 => "polarity (first scale)",
            ScaleId::P12 => "polarity (second scale)",
            ScaleId::P2 => "polarizability",
            ScaleId::Sasa => "solvent-accessible surface area",
            ScaleId::V => "side-chain volume",
            ScaleId::F => "flexibility",
            ScaleId::A1 => "accessibility",
            ScaleId::E => "exposed surface",
            ScaleId::T => "turns",
            ScaleId::A2 => "antigenic propensity",
        }
    }
}

impl fmt::Display for ScaleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which version of the tyrosine row to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ScaleVariant {
    #[default]
    PaperVerbatim,
    CorrectedY,
}

impl ScaleVariant {
    /// Tag used on the command line and in output files.
    pub fn tag(self) -> &'static str {
        match self {
            ScaleVariant::PaperVerbatim => "paper",
            ScaleVariant::CorrectedY => "corrected",
        }
    }
}

impl fmt::Display for ScaleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ScaleVariant {
    type Err = ScaleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(ScaleVariant::PaperVerbatim),
            "corrected" => Ok(ScaleVariant::CorrectedY),
            other => Err(ScaleError::UnknownVariant(other.to_string())),
        }
    }
}

// Rows in AminoAcid::ALL order, columns in ScaleId::ALL order.
#[rustfmt::skip]
const PAPER_ROWS: [[f64; NUM_SCALES]; 20] = [
    //  H11    H12    H2     NCI     P11   P12    P2     SASA   V      F      A1    E     T      A2
    [ 0.62,  2.1, -0.5,  0.007,  8.1,  0.0,  0.046, 1.181,  27.5, -1.27, 0.49, 15.0, -0.8,  1.064], // A
    [ 0.29,  1.4, -1.0, -0.037,  5.5,  1.48, 0.128, 1.461,  44.6, -1.09, 0.26,  5.0,  0.83, 1.412], // C
    [-0.9,  10.0,  3.0, -0.024, 13.0, 40.7,  0.105, 1.587,  40.0,  1.42, 0.78, 50.0,  1.65, 0.866], // D
    [-0.74,  7.8,  3.0,  0.007, 12.3, 49.91, 0.151, 1.862,  62.0,  1.6,  0.84, 55.0, -0.92, 0.851], // E
    [ 1.19, -9.2, -2.5,  0.038,  5.2,  0.35, 0.29,  2.228, 115.5, -2.14, 0.42, 10.0,  0.18, 1.091], // F
    [ 0.48,  5.7,  0.0,  0.179,  9.0,  0.0,  0.0,   0.881,   0.0,  1.86, 0.48, 10.0, -0.55, 0.874], // G
    [-0.4,   2.1, -0.5, -0.011, 10.4,  3.53, 0.23,  2.025,  79.0, -0.82, 0.84, 56.0,  0.11, 1.105], // H
    [ 1.38, -8.0, -1.8,  0.022,  5.2,  0.15, 0.186, 1.81,   93.5, -2.89, 0.34, 13.0, -1.53, 1.152], // I
    [-1.5,   5.7,  3.0,  0.018, 11.3, 49.5,  0.219, 2.258, 100.0,  2.88, 0.97, 85.0, -1.06, 0.93 ], // K
    [ 1.06, -9.2, -1.8,  0.052,  4.9,  0.45, 0.186, 1.931,  93.5, -2.29, 0.4,  16.0, -1.01, 1.25 ], // L
    [ 0.64, -4.2, -1.3,  0.003,  5.7,  1.43, 0.221, 2.034,  94.1, -1.84, 0.48, 20.0, -1.48, 0.826], // M
    [-0.78,  7.0,  2.0,  0.005, 11.6,  3.38, 0.134, 1.655,  58.7,  1.77, 0.81, 49.0,  3.0,  0.776], // N
    [ 0.12,  2.1,  0.0,  0.240,  8.0,  0.0,  0.131, 1.468,  41.9,  0.52, 0.49, 15.0, -0.8,  1.064], // P
    [-0.85,  6.0,  0.2,  0.049, 10.5,  3.53, 0.18,  1.932,  80.7,  1.18, 0.84, 56.0,  0.11, 1.015], // Q
    [-2.53,  4.2,  3.0,  0.044, 10.5, 52.0,  0.291, 2.56,  105.0,  2.79, 0.95, 67.0, -1.15, 0.873], // R
    [-0.18,  6.5,  0.3,  0.005,  9.2,  1.67, 0.062, 1.298,  29.3,  3.0,  0.65, 32.0,  1.34, 1.012], // S
    [-0.05,  5.2, -0.4,  0.003,  8.6,  1.66, 0.108, 1.525,  51.3,  1.18, 0.7,  32.0,  0.27, 0.909], // T
    [ 1.08, -3.7, -1.5,  0.057,  5.9,  0.13, 0.14,  1.645,  71.5, -1.75, 0.36, 14.0, -0.83, 1.383], // V
    [ 0.81,-10.0, -3.4,  0.038,  5.4,  2.1,  0.409, 2.663, 145.5, -3.78, 0.51, 17.0, -0.97, 0.893], // W
    [ 0.26, -1.9, -2.3, 117.3,   6.2,  1.61, 0.298, 2.368,   0.024,-3.3, 0.76, 41.0, -0.29, 1.161], // Y
];

/// The 20 × 14 scale table for one [`ScaleVariant`]. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleTable {
    variant: ScaleVariant,
    rows: [[f64; NUM_SCALES]; 20],
}

impl ScaleTable {
    pub fn new(variant: ScaleVariant) -> Self {
        let mut rows = PAPER_ROWS;
        if variant == ScaleVariant::CorrectedY {
            let y = &mut rows[AminoAcid::Tyr.index()];
            y.swap(ScaleId::Nci.index(), ScaleId::V.index());
        }
        ScaleTable { variant, rows }
    }

    pub fn variant(&self) -> ScaleVariant {
        self.variant
    }

    pub fn value(&self, residue: AminoAcid, scale: ScaleId) -> f64 {
        self.rows[residue.index()][scale.index()]
    }

    /// All 14 values for one residue, in canonical scale order.
    pub fn row(&self, residue: AminoAcid) -> &[f64; NUM_SCALES] {
        &self.rows[residue.index()]
    }

    /// Looks up a value by one-letter residue code.
    pub fn lookup(&self, residue: char, scale: ScaleId) -> Result<f64, ScaleError> {
        let aa = u8::try_from(residue)
            .ok()
            .and_then(AminoAcid::from_code)
            .ok_or(ScaleError::UnknownResidue(residue))?;
        Ok(self.value(aa, scale))
    }

    /// SHA-256 over the little-endian bit patterns of every value, residues
    /// in alphabetical order and scales in canonical order.
    pub fn checksum(&self) -> [u8; 32] {
        let mut hasher = Sha256::new();
        for row in &self.rows {
            for v in row {
                hasher.update(v.to_bits().to_le_bytes());
            }
        }
        hasher.finalize().into()
    }

    /// Writes the table as CSV: header `AA,H11,...,A2`, then one row per
    /// residue in alphabetical order. Values use the shortest representation
    /// that round-trips.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "AA")?;
        for s in ScaleId::ALL {
            write!(w, ",{s}")?;
        }
        writeln!(w)?;
        for aa in AminoAcid::ALL {
            write!(w, "{aa}")?;
            for v in self.row(aa) {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

impl Default for ScaleTable {
    fn default() -> Self {
        ScaleTable::new(ScaleVariant::PaperVerbatim)
    }
}

pub fn scale_table(variant: ScaleVariant) -> ScaleTable {
    ScaleTable::new(variant)
}
