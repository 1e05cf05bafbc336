//! Protein sequences and labeled interaction pairs.
//!
//! Two plain-text carriers are supported:
//!
//! * FASTA, where the header token up to the first whitespace is the protein
//!   identifier and the body may span several lines;
//! * a strict three-column TSV of interaction pairs, `idA<TAB>idB<TAB>label`
//!   with label `0` or `1`, `#` comments and blank lines ignored.
//!
//! Both accept LF and CRLF line endings.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::{BufRead, Write};

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("line {line}: sequence data before any '>' header")]
    DataBeforeHeader { line: usize },
    #[error("line {line}: empty protein identifier")]
    EmptyId { line: usize },
    #[error("invalid protein identifier {0:?}: must be non-empty and contain no whitespace")]
    InvalidId(String),
    #[error("duplicate protein identifier {id:?} (line {line})")]
    DuplicateId { id: String, line: usize },
    #[error("line {line}: non-canonical residue {residue:?} in {id:?}")]
    UnknownResidue { id: String, residue: char, line: usize },
    #[error("record {id:?} has no residues")]
    EmptySequence { id: String },
    #[error("line {line}: expected 3 tab-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: label must be 0 or 1, got {value:?}")]
    BadLabel { line: usize, value: String },
    #[error("line {line}: {source}")]
    BadIdOnLine {
        line: usize,
        #[source]
        source: Box<SequenceError>,
    },
    #[error("line {line}: input is not valid UTF-8")]
    Utf8 { line: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The 20 canonical amino acids, in alphabetical order of one-letter code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AminoAcid {
    Ala,
    Cys,
    Asp,
    Glu,
    Phe,
    Gly,
    His,
    Ile,
    Lys,
    Leu,
    Met,
    Asn,
    Pro,
    Gln,
    Arg,
    Ser,
    Thr,
    Val,
    Trp,
    Tyr,
}

impl AminoAcid {
    pub const ALL: [AminoAcid; 20] = [
        AminoAcid::Ala,
        AminoAcid::Cys,
        AminoAcid::Asp,
        AminoAcid::Glu,
        AminoAcid::Phe,
        AminoAcid::Gly,
        AminoAcid::His,
        AminoAcid::Ile,
        AminoAcid::Lys,
        AminoAcid::Leu,
        AminoAcid::Met,
        AminoAcid::Asn,
        AminoAcid::Pro,
        AminoAcid::Gln,
        AminoAcid::Arg,
        AminoAcid::Ser,
        AminoAcid::Thr,
        AminoAcid::Val,
        AminoAcid::Trp,
        AminoAcid::Tyr,
    ];

    /// Parses a one-letter code. Lowercase is accepted.
    pub fn from_code(code: u8) -> Option<AminoAcid> {
        use AminoAcid::*;
        Some(match code.to_ascii_uppercase() {
            b'A' => Ala,
            b'C' => Cys,
            b'D' => Asp,
            b'E' => Glu,
            b'F' => Phe,
            b'G' => Gly,
            b'H' => His,
            b'I' => Ile,
            b'K' => Lys,
            b'L' => Leu,
            b'M' => Met,
            b'N' => Asn,
            b'P' => Pro,
            b'Q' => Gln,
            b'R' => Arg,
            b'S' => Ser,
            b'T' => Thr,
            b'V' => Val,
            b'W' => Trp,
            b'Y' => Tyr,
            _ => return None,
        })
    }

    pub fn code(self) -> char {
        b"ACDEFGHIKLMNPQRSTVWY"[self.index()] as char
    }

    /// Position in [`AminoAcid::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AminoAcid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Protein identifier: a non-empty token without whitespace. Comparison is
/// case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProteinId(String);

impl ProteinId {
    pub fn new(value: impl Into<String>) -> Result<Self, SequenceError> {
        let value = value.into();
        if value.is_empty() || value.chars().any(char::is_whitespace) {
            return Err(SequenceError::InvalidId(value));
        }
        Ok(ProteinId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ProteinId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for ProteinId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl std::str::FromStr for ProteinId {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProteinId::new(s)
    }
}

/// What to do with residues outside the 20-letter alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownResiduePolicy {
    #[default]
    Error,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProteinSequence {
    id: ProteinId,
    residues: Vec<AminoAcid>,
}

impl ProteinSequence {
    pub fn new(id: ProteinId, residues: Vec<AminoAcid>) -> Result<Self, SequenceError> {
        if residues.is_empty() {
            return Err(SequenceError::EmptySequence {
                id: id.to_string(),
            });
        }
        Ok(ProteinSequence { id, residues })
    }

    /// Builds a sequence from a string of one-letter codes, rejecting any
    /// non-canonical character.
    pub fn from_letters(id: &str, letters: &str) -> Result<Self, SequenceError> {
        let id = ProteinId::new(id)?;
        let residues = letters
            .bytes()
            .map(|b| {
                AminoAcid::from_code(b).ok_or_else(|| SequenceError::UnknownResidue {
                    id: id.to_string(),
                    residue: b as char,
                    line: 0,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ProteinSequence::new(id, residues)
    }

    pub fn id(&self) -> &ProteinId {
        &self.id
    }

    pub fn residues(&self) -> &[AminoAcid] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Residues as an uppercase one-letter string.
    pub fn letters(&self) -> String {
        self.residues.iter().map(|r| r.code()).collect()
    }
}

/// Sequences keyed by identifier, in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SequenceSet {
    by_id: IndexMap<ProteinId, ProteinSequence>,
}

impl SequenceSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a sequence, refusing duplicate identifiers.
    pub fn insert(&mut self, seq: ProteinSequence) -> Result<(), SequenceError> {
        if self.by_id.contains_key(seq.id()) {
            return Err(SequenceError::DuplicateId {
                id: seq.id().to_string(),
                line: 0,
            });
        }
        self.by_id.insert(seq.id().clone(), seq);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&ProteinSequence> {
        self.by_id.get(id)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProteinSequence> {
        self.by_id.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &ProteinId> {
        self.by_id.keys()
    }
}

impl TryFrom<Vec<ProteinSequence>> for SequenceSet {
    type Error = SequenceError;

    fn try_from(seqs: Vec<ProteinSequence>) -> Result<Self, Self::Error> {
        let mut set = SequenceSet::new();
        for s in seqs {
            set.insert(s)?;
        }
        Ok(set)
    }
}

fn trim_eol(line: &[u8]) -> &[u8] {
    let line = line.strip_suffix(b"\n").unwrap_or(line);
    line.strip_suffix(b"\r").unwrap_or(line)
}

struct PendingRecord {
    id: ProteinId,
    residues: Vec<AminoAcid>,
}

/// Parses a FASTA document.
pub fn parse_fasta<R: BufRead>(
    mut reader: R,
    policy: UnknownResiduePolicy,
) -> Result<Vec<ProteinSequence>, SequenceError> {
    let mut out: Vec<ProteinSequence> = Vec::new();
    let mut seen: std::collections::HashSet<ProteinId> = std::collections::HashSet::new();
    let mut current: Option<PendingRecord> = None;
    let mut buf = Vec::new();
    let mut line_no = 0usize;

    let finish = |rec: PendingRecord, out: &mut Vec<ProteinSequence>| {
        out.push(ProteinSequence::new(rec.id, rec.residues)?);
        Ok::<(), SequenceError>(())
    };

    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = trim_eol(&buf);

        if let Some(header) = line.strip_prefix(b">") {
            if let Some(rec) = current.take() {
                finish(rec, &mut out)?;
            }
            let header =
                std::str::from_utf8(header).map_err(|_| SequenceError::Utf8 { line: line_no })?;
            let token = header.split_whitespace().next().unwrap_or("");
            if token.is_empty() {
                return Err(SequenceError::EmptyId { line: line_no });
            }
            let id = ProteinId::new(token)?;
            if !seen.insert(id.clone()) {
                return Err(SequenceError::DuplicateId {
                    id: id.to_string(),
                    line: line_no,
                });
            }
            current = Some(PendingRecord {
                id,
                residues: Vec::new(),
            });
            continue;
        }

        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let Some(rec) = current.as_mut() else {
            return Err(SequenceError::DataBeforeHeader { line: line_no });
        };
        for &byte in line.iter().filter(|b| !b.is_ascii_whitespace()) {
            match AminoAcid::from_code(byte) {
                Some(aa) => rec.residues.push(aa),
                None => match policy {
                    UnknownResiduePolicy::Skip => {}
                    UnknownResiduePolicy::Error => {
                        return Err(SequenceError::UnknownResidue {
                            id: rec.id.to_string(),
                            residue: byte as char,
                            line: line_no,
                        })
                    }
                },
            }
        }
    }
    if let Some(rec) = current.take() {
        finish(rec, &mut out)?;
    }
    Ok(out)
}

/// Convenience wrapper over [`parse_fasta`] for in-memory text.
pub fn parse_fasta_str(
    text: &str,
    policy: UnknownResiduePolicy,
) -> Result<Vec<ProteinSequence>, SequenceError> {
    parse_fasta(text.as_bytes(), policy)
}

/// Writes sequences as FASTA with bodies wrapped at `width` residues.
pub fn write_fasta<W: Write>(
    mut w: W,
    seqs: &[ProteinSequence],
    width: usize,
) -> std::io::Result<()> {
    let width = width.max(1);
    for s in seqs {
        writeln!(w, ">{}", s.id())?;
        let letters = s.letters();
        for chunk in letters.as_bytes().chunks(width) {
            w.write_all(chunk)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Interaction label. `Interacting` is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    NonInteracting,
    Interacting,
}

impl Label {
    pub fn from_u8(v: u8) -> Option<Label> {
        match v {
            0 => Some(Label::NonInteracting),
            1 => Some(Label::Interacting),
            _ => None,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Label::NonInteracting => 0,
            Label::Interacting => 1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Interacting
    }
}

/// Unordered pair of protein identifiers with endpoints sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnorderedPair {
    lo: ProteinId,
    hi: ProteinId,
}

impl UnorderedPair {
    pub fn new(a: ProteinId, b: ProteinId) -> Self {
        if a <= b {
            UnorderedPair { lo: a, hi: b }
        } else {
            UnorderedPair { lo: b, hi: a }
        }
    }

    pub fn first(&self) -> &ProteinId {
        &self.lo
    }

    pub fn second(&self) -> &ProteinId {
        &self.hi
    }

    pub fn is_self_pair(&self) -> bool {
        self.lo == self.hi
    }
}

/// A labeled protein pair. Equality and hashing ignore endpoint order, so
/// `(a, b, l)` and `(b, a, l)` are the same record.
#[derive(Debug, Clone)]
pub struct InteractionRecord {
    pub a: ProteinId,
    pub b: ProteinId,
    pub label: Label,
}

impl InteractionRecord {
    pub fn new(a: ProteinId, b: ProteinId, label: Label) -> Self {
        InteractionRecord { a, b, label }
    }

    pub fn pair(&self) -> UnorderedPair {
        UnorderedPair::new(self.a.clone(), self.b.clone())
    }

    fn sorted(&self) -> (&ProteinId, &ProteinId) {
        if self.a <= self.b {
            (&self.a, &self.b)
        } else {
            (&self.b, &self.a)
        }
    }
}

impl PartialEq for InteractionRecord {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.sorted() == other.sorted()
    }
}

impl Eq for InteractionRecord {}

impl Hash for InteractionRecord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sorted().hash(state);
        self.label.hash(state);
    }
}

impl PartialOrd for InteractionRecord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InteractionRecord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sorted()
            .cmp(&other.sorted())
            .then(self.label.cmp(&other.label))
    }
}

/// Parses the pairs TSV format.
pub fn parse_pairs<R: BufRead>(mut reader: R) -> Result<Vec<InteractionRecord>, SequenceError> {
    let mut out = Vec::new();
    let mut buf = Vec::new();
    let mut line_no = 0usize;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(trim_eol(&buf))
            .map_err(|_| SequenceError::Utf8 { line: line_no })?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(SequenceError::FieldCount {
                line: line_no,
                found: fields.len(),
            });
        }
        let id = |s: &str| {
            ProteinId::new(s).map_err(|e| SequenceError::BadIdOnLine {
                line: line_no,
                source: Box::new(e),
            })
        };
        let a = id(fields[0])?;
        let b = id(fields[1])?;
        let label = match fields[2].trim() {
            "0" => Label::NonInteracting,
            "1" => Label::Interacting,
            other => {
                return Err(SequenceError::BadLabel {
                    line: line_no,
                    value: other.to_string(),
                })
            }
        };
        out.push(InteractionRecord::new(a, b, label));
    }
    Ok(out)
}

pub fn parse_pairs_str(text: &str) -> Result<Vec<InteractionRecord>, SequenceError> {
    parse_pairs(text.as_bytes())
}

/// Writes records in pairs-TSV form, preceded by optional `#` comment lines.
pub fn write_pairs<W: Write>(
    mut w: W,
    comments: &[String],
    records: &[InteractionRecord],
) -> std::io::Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    for r in records {
        writeln!(w, "{}\t{}\t{}", r.a, r.b, r.label.as_u8())?;
    }
    Ok(())
}
