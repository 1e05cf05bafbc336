//! Mean-pooled physicochemical feature vectors for proteins and pairs.
//!
//! A protein becomes the per-scale arithmetic mean of its residues' scale
//! values. A pair becomes the component-wise mean of its two protein vectors,
//! so `(a, b)` and `(b, a)` featurize identically.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::ops::Index;

use thiserror::Error;

use crate::scales::{ScaleId, ScaleTable, ScaleVariant, NUM_SCALES};
use crate::sequences::{AminoAcid, InteractionRecord, Label, ProteinId, ProteinSequence, SequenceSet};
use crate::textfmt::{format_f64, Provenance};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("cannot featurize an empty sequence")]
    EmptySequence,
    #[error("record {index}: protein {id:?} not found in the sequence set")]
    UnresolvedId { id: String, index: usize },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Fourteen finite reals in canonical scale order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector([f64; NUM_SCALES]);

impl FeatureVector {
    pub fn new(values: [f64; NUM_SCALES]) -> Self {
        FeatureVector(values)
    }

    pub fn as_array(&self) -> &[f64; NUM_SCALES] {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, scale: ScaleId) -> f64 {
        self.0[scale.index()]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Index<ScaleId> for FeatureVector {
    type Output = f64;

    fn index(&self, scale: ScaleId) -> &f64 {
        &self.0[scale.index()]
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Mean scale vector of a residue string.
///
/// The mean is accumulated left to right as a running mean,
/// `m_k = m_{k-1} + (x_k - m_{k-1}) / k`, which is exact when every residue
/// is the same.
pub fn residues_vector(residues: &[AminoAcid], table: &ScaleTable) -> Result<FeatureVector, FeatureError> {
    if residues.is_empty() {
        return Err(FeatureError::EmptySequence);
    }
    let mut mean = [0.0f64; NUM_SCALES];
    for (k, &aa) in residues.iter().enumerate() {
        let count = (k + 1) as f64;
        for (m, v) in mean.iter_mut().zip(table.row(aa)) {
            *m += (v - *m) / count;
        }
    }
    Ok(FeatureVector(mean))
}

pub fn protein_vector(seq: &ProteinSequence, table: &ScaleTable) -> Result<FeatureVector, FeatureError> {
    residues_vector(seq.residues(), table)
}

/// Component-wise mean of two vectors.
pub fn pair_vector(v1: &FeatureVector, v2: &FeatureVector) -> FeatureVector {
    let mut out = [0.0; NUM_SCALES];
    for (k, o) in out.iter_mut().enumerate() {
        *o = (v1.0[k] + v2.0[k]) / 2.0;
    }
    FeatureVector(out)
}

/// One featurized pair per input record, input order preserved.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureMatrix {
    pub rows: Vec<(InteractionRecord, FeatureVector)>,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &FeatureVector> {
        self.rows.iter().map(|(_, v)| v)
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.rows.iter().map(|(r, _)| r.label)
    }

    /// Rows at the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

/// Featurizes every record. Protein vectors are computed once per distinct
/// protein in a sequential pass before the pair rows are assembled.
pub fn featurize_dataset(
    records: &[InteractionRecord],
    seqs: &SequenceSet,
    table: &ScaleTable,
) -> Result<FeatureMatrix, FeatureError> {
    let mut cache: HashMap<&ProteinId, FeatureVector> = HashMap::new();
    for (index, rec) in records.iter().enumerate() {
        for id in [&rec.a, &rec.b] {
            if cache.contains_key(id) {
                continue;
            }
            let seq = seqs.get(id.as_str()).ok_or_else(|| FeatureError::UnresolvedId {
                id: id.to_string(),
                index,
            })?;
            cache.insert(id, protein_vector(seq, table)?);
        }
    }
    let rows = records
        .iter()
        .map(|rec| {
            let v = pair_vector(&cache[&rec.a], &cache[&rec.b]);
            (rec.clone(), v)
        })
        .collect();
    Ok(FeatureMatrix { rows })
}

/// Column header of the feature CSV.
pub fn csv_header() -> String {
    let mut h = String::from("id_a,id_b,label");
    for s in ScaleId::ALL {
        h.push(',');
        h.push_str(s.name());
    }
    h
}

/// Writes `#` provenance lines, the header, and one line per row with 17
/// significant digits per value.
pub fn write_feature_csv<W: Write>(
    mut w: W,
    provenance: &Provenance,
    matrix: &FeatureMatrix,
) -> std::io::Result<()> {
    provenance.write_comments(&mut w, "# ")?;
    writeln!(w, "{}", csv_header())?;
    for (rec, v) in &matrix.rows {
        write!(w, "{},{},{}", rec.a, rec.b, rec.label.as_u8())?;
        for x in v.as_slice() {
            write!(w, ",{}", format_f64(*x))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// A feature CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureFile {
    pub provenance: Provenance,
    pub matrix: FeatureMatrix,
}

impl FeatureFile {
    /// Scale variant recorded in the file, defaulting to the verbatim table.
    pub fn scale_variant(&self) -> ScaleVariant {
        self.provenance
            .get("scale_variant")
            .and_then(|v| v.parse().ok())
            .unwrap_or_default()
    }
}

pub fn read_feature_csv<R: BufRead>(reader: R) -> Result<FeatureFile, FeatureError> {
    let mut provenance = Provenance::default();
    let mut rows = Vec::new();
    let mut saw_header = false;
    let header = csv_header();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        let err = |message: String| FeatureError::Csv {
            line: line_no,
            message,
        };
        if let Some(comment) = line.strip_prefix('#') {
            provenance.absorb_comment(comment.trim());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if line != header {
                return Err(err(format!("expected header {header:?}")));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 + NUM_SCALES {
            return Err(err(format!(
                "expected {} fields, found {}",
                3 + NUM_SCALES,
                fields.len()
            )));
        }
        let a = ProteinId::new(fields[0]).map_err(|e| err(e.to_string()))?;
        let b = ProteinId::new(fields[1]).map_err(|e| err(e.to_string()))?;
        let label = fields[2]
            .parse::<u8>()
            .ok()
            .and_then(Label::from_u8)
            .ok_or_else(|| err(format!("label must be 0 or 1, got {:?}", fields[2])))?;
        let mut values = [0.0; NUM_SCALES];
        for (k, field) in fields[3..].iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| err(format!("bad number {field:?}")))?;
            if !v.is_finite() {
                return Err(err(format!("non-finite value {field:?}")));
            }
            values[k] = v;
        }
        rows.push((InteractionRecord::new(a, b, label), FeatureVector(values)));
    }
    if !saw_header {
        return Err(FeatureError::Csv {
            line: 0,
            message: "missing header".into(),
        });
    }
    Ok(FeatureFile {
        provenance,
        matrix: FeatureMatrix { rows },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scales::ScaleVariant;
    use crate::sequences::{parse_fasta_str, parse_pairs_str, UnknownResiduePolicy};

    fn seq(id: &str, letters: &str) -> ProteinSequence {
        ProteinSequence::from_letters(id, letters).unwrap()
    }

    // Hand-computed from the table rows: H11 of AYCRS is -1.54/5, of HRS
    // -3.11/3.
    #[test]
    fn pair_h11_matches_hand_arithmetic() {
        let t = ScaleTable::default();
        let v1 = protein_vector(&seq("P1", "AYCRS"), &t).unwrap();
        let v2 = protein_vector(&seq("P2", "HRS"), &t).unwrap();
        let expected: f64 = ((-1.54 / 5.0) + (-3.11 / 3.0)) / 2.0;
        assert!((expected - -0.6723).abs() < 1e-3);
        assert!((pair_vector(&v1, &v2)[ScaleId::H11] - expected).abs() < 1e-12);
    }

    #[test]
    fn single_residue_is_the_table_row() {
        let t = ScaleTable::default();
        let a = protein_vector(&seq("x", "A"), &t).unwrap();
        let aaa = protein_vector(&seq("y", "AAA"), &t).unwrap();
        assert_eq!(a.as_array(), t.row(AminoAcid::Ala));
        assert_eq!(aaa.as_array(), t.row(AminoAcid::Ala));
    }

    #[test]
    fn empty_residues_rejected() {
        assert!(matches!(
            residues_vector(&[], &ScaleTable::default()),
            Err(FeatureError::EmptySequence)
        ));
    }

    #[test]
    fn pair_of_identical_vectors_is_identity() {
        let t = ScaleTable::default();
        let v = protein_vector(&seq("x", "WYKLMN"), &t).unwrap();
        assert_eq!(pair_vector(&v, &v), v);
    }

    #[test]
    fn dataset_rows_follow_input_order_and_symmetry() {
        let seqs: SequenceSet = parse_fasta_str(">P1\nAYCRS\n>P2\nHRS\n", UnknownResiduePolicy::Error)
            .unwrap()
            .try_into()
            .unwrap();
        let recs = parse_pairs_str("P1\tP2\t1\nP2\tP1\t1\n").unwrap();
        let m = featurize_dataset(&recs, &seqs, &ScaleTable::default()).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.rows[0].1, m.rows[1].1);
        assert_eq!(m.rows[1].0.a.as_str(), "P2");

        let empty = featurize_dataset(&[], &seqs, &ScaleTable::default()).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn unresolved_id_names_record() {
        let seqs: SequenceSet = vec![seq("P1", "A")].try_into().unwrap();
        let recs = parse_pairs_str("P1\tP1\t1\nP1\tQ9\t0\n").unwrap();
        let err = featurize_dataset(&recs, &seqs, &ScaleTable::default()).unwrap_err();
        assert!(matches!(err, FeatureError::UnresolvedId { ref id, index: 1 } if id == "Q9"));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let seqs: SequenceSet = vec![seq("P1", "AYCRS"), seq("P2", "HRS"), seq("P3", "GGWT")]
            .try_into()
            .unwrap();
        let recs = parse_pairs_str("P1\tP2\t1\nP3\tP1\t0\n").unwrap();
        let table = ScaleTable::new(ScaleVariant::CorrectedY);
        let m = featurize_dataset(&recs, &seqs, &table).unwrap();
        let prov = Provenance::new().with("scale_variant", "corrected");
        let mut buf = Vec::new();
        write_feature_csv(&mut buf, &prov, &m).unwrap();
        let back = read_feature_csv(buf.as_slice()).unwrap();
        assert_eq!(back.scale_variant(), ScaleVariant::CorrectedY);
        assert_eq!(back.matrix.len(), 2);
        for ((r1, v1), (r2, v2)) in m.rows.iter().zip(&back.matrix.rows) {
            assert_eq!(r1.a, r2.a);
            assert_eq!(r1.b, r2.b);
            assert_eq!(r1.label, r2.label);
            for (x, y) in v1.as_slice().iter().zip(v2.as_slice()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn csv_rejects_bad_rows() {
        let text = format!("{}\nP1,P2,1,1\n", csv_header());
        assert!(matches!(
            read_feature_csv(text.as_bytes()),
            Err(FeatureError::Csv { line: 2, .. })
        ));
        assert!(read_feature_csv("id,a\n".as_bytes()).is_err());
    }
}
