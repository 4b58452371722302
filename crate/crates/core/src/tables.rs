//! Class tables for the shapes `(d1, d2)`, `(2, 2, d)` and `(2, 3, d)`.
//!
//! Each three-party row stores `k1`, `k2`, `k3` and `k_{1,2,3}` as affine
//! functions of `d` together with a representative in bracket notation. A row
//! exists at `d` exactly when every formula is non-negative there.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::document::TensorDocument;
use crate::error::{ClassificationGap, Error, Result};
use crate::field::Field;
use crate::invariants::{signature, InvariantSignature};
use crate::matrix::ExactMatrix;
use crate::tensor::{Shape, Tensor, TermList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel(pub usize);

impl Serialize for ClassLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .strip_prefix(['C', 'c'])
            .and_then(|n| n.parse().ok())
            .map(Self)
            .ok_or_else(|| Error::UnknownLabel(s.to_owned()))
    }
}

/// `slope * d + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Affine {
    pub slope: i64,
    pub offset: i64,
}

impl Affine {
    pub const fn new(slope: i64, offset: i64) -> Self {
        Self { slope, offset }
    }

    pub const fn constant(c: i64) -> Self {
        Self::new(0, c)
    }

    pub fn eval(self, d: usize) -> i64 {
        self.slope * d as i64 + self.offset
    }

    /// Smallest `d >= 0` from which the value stays non-negative.
    fn threshold(self) -> usize {
        match (self.slope, self.offset) {
            (_, o) if o >= 0 => 0,
            (s, o) if s > 0 => (-o + s - 1) as usize / s as usize,
            _ => usize::MAX,
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = match self.slope {
            0 => return write!(f, "{}", self.offset),
            1 => "d".to_owned(),
            s => format!("{s}d"),
        };
        match self.offset {
            0 => f.write_str(&lead),
            o if o > 0 => write!(f, "{lead}+{o}"),
            o => write!(f, "{lead}{o}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `(d1, d2)`, keyed on `k1` alone.
    Bipartite,
    /// `(2, 2, d)`.
    TwoTwoD,
    /// `(2, 3, d)`.
    TwoThreeD,
}

impl Family {
    pub fn of(shape: &Shape) -> Result<Self> {
        match shape.dims() {
            [_, _] => Ok(Self::Bipartite),
            [2, 2, d] if *d >= 2 => Ok(Self::TwoTwoD),
            [2, 3, d] if *d >= 2 => Ok(Self::TwoThreeD),
            _ => Err(Error::UnsupportedFamily(shape.to_string())),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Self::Bipartite => "bipartite",
            Self::TwoTwoD => "22d",
            Self::TwoThreeD => "23d",
        }
    }

    /// Shape of the family member with free dimension `d`.
    pub fn shape(self, d: usize) -> Result<Shape> {
        match self {
            Self::Bipartite => Shape::new(&[d, d]),
            Self::TwoTwoD => Shape::new(&[2, 2, d]),
            Self::TwoThreeD => Shape::new(&[2, 3, d]),
        }
    }

    /// Number of classes at `d` stated alongside the published tables.
    pub fn expected_count(self, shape: &Shape) -> usize {
        let d = *shape.dims().last().expect("nonempty shape");
        match self {
            Self::Bipartite => shape.dim(0).min(shape.dim(1)) + 1,
            Self::TwoTwoD => [7, 9, 10][d.clamp(2, 4) - 2],
            Self::TwoThreeD => [9, 17, 23, 25, 26][d.clamp(2, 6) - 2],
        }
    }

    /// Names of the invariants each formula describes.
    pub fn formula_names(self) -> &'static [&'static str] {
        match self {
            Self::Bipartite => &["k1"],
            _ => &["k1", "k2", "k3", "k123"],
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipartite" | "d1d2" => Ok(Self::Bipartite),
            "22d" => Ok(Self::TwoTwoD),
            "23d" => Ok(Self::TwoThreeD),
            _ => Err(Error::UnsupportedFamily(format!("family `{s}` (expected 22d, 23d or bipartite)"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bipartite => "(d1,d2)",
            Self::TwoTwoD => "(2,2,d)",
            Self::TwoThreeD => "(2,3,d)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub label: ClassLabel,
    pub family: Family,
    /// Affine in `d` (in `d1` for the bipartite family).
    pub formulas: Vec<Affine>,
    #[serde(serialize_with = "serialize_display")]
    pub representative: TermList,
    pub min_d: usize,
}

fn serialize_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl ClassEntry {
    fn new(label: usize, family: Family, formulas: Vec<Affine>, representative: &str) -> Self {
        let representative: TermList = representative.parse().expect("table representative parses");
        let threshold = formulas.iter().map(|f| f.threshold()).max().unwrap_or(0);
        let floor = if family == Family::Bipartite { 1 } else { 2 };
        Self { label: ClassLabel(label), family, formulas, representative, min_d: threshold.max(floor) }
    }

    /// Smallest `d` at which every formula is non-negative.
    pub fn formula_threshold(&self) -> usize {
        self.formulas.iter().map(|f| f.threshold()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, d: usize) -> Vec<i64> {
        self.formulas.iter().map(|f| f.eval(d)).collect()
    }

    /// The class key this entry predicts at `shape`.
    pub fn expected_key(&self, shape: &Shape) -> Vec<i64> {
        self.evaluate(free_dim(self.family, shape))
    }

    fn discard_reason(&self, shape: &Shape) -> Option<String> {
        if self.family == Family::Bipartite {
            return None;
        }
        let d = free_dim(self.family, shape);
        self.formulas
            .iter()
            .zip(self.family.formula_names())
            .find(|(f, _)| f.eval(d) < 0)
            .map(|(f, name)| format!("{name} = {f} = {} < 0", f.eval(d)))
    }

    pub fn is_valid_at(&self, shape: &Shape) -> bool {
        self.discard_reason(shape).is_none()
    }
}

fn free_dim(family: Family, shape: &Shape) -> usize {
    match family {
        Family::Bipartite => shape.dim(0),
        _ => shape.dim(2),
    }
}

type Row = (usize, i64, i64, Affine, Affine, &'static str);

const fn a(slope: i64, offset: i64) -> Affine {
    Affine::new(slope, offset)
}

#[rustfmt::skip]
const TABLE_22D: [Row; 10] = [
    (0, 2, 2, a(1, 0), a(4, 0), "0"),
    (1, 1, 1, a(1, -1), a(3, -2), "[1,1,1]"),
    (2, 0, 0, a(1, -1), a(3, -3), "[1,1,1]+[2,2,1]"),
    (3, 0, 1, a(1, -2), a(2, -1), "[1,1,1]+[2,1,2]"),
    (4, 1, 0, a(1, -2), a(2, -1), "[1,1,1]+[1,2,2]"),
    (5, 0, 0, a(1, -2), a(2, -3), "[1,1,1]+[1,2,2]+[2,1,2]"),
    (6, 0, 0, a(1, -2), a(2, -4), "[1,1,1]+[2,2,2]"),
    (7, 0, 0, a(1, -3), a(1, -2), "[1,1,1]+[1,2,2]+[2,2,3]"),
    (8, 0, 0, a(1, -3), a(1, -3), "[1,1,1]+[1,2,2]+[2,1,2]+[2,2,3]"),
    (9, 0, 0, a(1, -4), a(0, 0), "[1,1,1]+[1,2,2]+[2,1,3]+[2,2,4]"),
];

#[rustfmt::skip]
const TABLE_23D: [Row; 26] = [
    (0, 2, 3, a(1, 0), a(6, 0), "0"),
    (1, 1, 2, a(1, -1), a(5, -3), "[1,1,1]"),
    (2, 0, 1, a(1, -1), a(5, -5), "[1,1,1]+[2,2,1]"),
    (3, 0, 2, a(1, -2), a(4, -2), "[1,1,1]+[2,1,2]"),
    (4, 1, 1, a(1, -2), a(4, -3), "[1,1,1]+[1,2,2]"),
    (5, 0, 1, a(1, -2), a(4, -5), "[1,1,1]+[1,2,2]+[2,1,2]"),
    (6, 0, 1, a(1, -2), a(4, -6), "[1,1,1]+[2,2,2]"),
    (7, 0, 0, a(1, -2), a(4, -7), "[1,1,1]+[1,2,2]+[2,3,1]"),
    (8, 0, 0, a(1, -2), a(4, -8), "[1,1,1]+[1,2,2]+[2,2,1]+[2,3,2]"),
    (9, 1, 0, a(1, -3), a(3, -1), "[1,1,1]+[1,2,2]+[1,3,3]"),
    (10, 0, 1, a(1, -3), a(3, -4), "[1,1,1]+[1,2,2]+[2,1,3]"),
    (11, 0, 1, a(1, -3), a(3, -5), "[1,1,1]+[1,2,2]+[2,1,2]+[2,2,3]"),
    (12, 0, 0, a(1, -3), a(3, -5), "[1,1,1]+[1,2,2]+[1,3,3]+[2,1,2]"),
    (13, 0, 0, a(1, -3), a(3, -6), "[1,1,1]+[1,2,2]+[2,3,3]"),
    (14, 0, 0, a(1, -3), a(3, -7), "[1,1,1]+[1,2,2]+[1,3,3]+[2,1,2]+[2,2,3]"),
    (15, 0, 0, a(1, -3), a(3, -8), "[1,1,1]+[1,2,2]+[2,1,3]+[2,3,1]"),
    (16, 0, 0, a(1, -3), a(3, -9), "[1,1,1]+[1,2,2]+[2,2,2]+[2,3,3]"),
    (17, 0, 1, a(1, -4), a(2, -2), "[1,1,1]+[1,2,2]+[2,1,3]+[2,2,4]"),
    (18, 0, 0, a(1, -4), a(2, -3), "[1,1,1]+[1,2,2]+[1,3,3]+[2,3,4]"),
    (19, 0, 0, a(1, -4), a(2, -5), "[1,1,1]+[1,2,2]+[1,3,3]+[2,2,4]+[2,3,1]"),
    (20, 0, 0, a(1, -4), a(2, -6), "[1,1,1]+[1,2,2]+[2,2,3]+[2,3,4]"),
    (21, 0, 0, a(1, -4), a(2, -7), "[1,1,1]+[1,2,2]+[1,3,3]+[2,2,3]+[2,3,4]"),
    (22, 0, 0, a(1, -4), a(2, -8), "[1,1,1]+[1,2,2]+[1,3,3]+[2,1,2]+[2,2,3]+[2,3,4]"),
    (23, 0, 0, a(1, -5), a(1, -3), "[1,1,1]+[1,2,2]+[1,3,3]+[2,1,4]+[2,2,5]"),
    (24, 0, 0, a(1, -5), a(1, -5), "[1,1,1]+[1,2,2]+[1,3,3]+[2,1,3]+[2,2,4]+[2,3,5]"),
    (25, 0, 0, a(1, -6), a(0, 0), "[1,1,1]+[1,2,2]+[1,3,3]+[2,1,4]+[2,2,5]+[2,3,6]"),
];

/// Every row of a family, valid or not. The bipartite family depends on the
/// concrete shape through `min(d1, d2)`.
pub fn family_entries(family: Family, shape: &Shape) -> Vec<ClassEntry> {
    let rows: &[Row] = match family {
        Family::Bipartite => {
            let m = shape.dim(0).min(shape.dim(1));
            return (0..=m)
                .map(|l| {
                    let rep = if l == 0 {
                        "0".to_owned()
                    } else {
                        (1..=l).map(|j| format!("[{j},{j}]")).collect::<Vec<_>>().join("+")
                    };
                    ClassEntry::new(l, family, vec![Affine::new(1, -(l as i64))], &rep)
                })
                .collect();
        }
        Family::TwoTwoD => &TABLE_22D,
        Family::TwoThreeD => &TABLE_23D,
    };
    rows.iter()
        .map(|&(label, k1, k2, k3, k123, rep)| {
            ClassEntry::new(label, family, vec![Affine::constant(k1), Affine::constant(k2), k3, k123], rep)
        })
        .collect()
}

/// Valid entries of one family at one concrete shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTable {
    pub family: Family,
    #[serde(serialize_with = "serialize_display")]
    pub shape: Shape,
    pub entries: Vec<ClassEntry>,
}

impl ClassTable {
    pub fn lookup(&self, key: &[usize]) -> Option<&ClassEntry> {
        self.entries.iter().find(|e| {
            let expected = e.expected_key(&self.shape);
            expected.len() == key.len() && expected.iter().zip(key).all(|(&x, &y)| x == y as i64)
        })
    }

    pub fn entry(&self, label: ClassLabel) -> Option<&ClassEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

/// The class table for `shape`, filtered to the rows that exist there.
pub fn table_for(shape: &Shape) -> Result<ClassTable> {
    let family = Family::of(shape)?;
    let entries: Vec<ClassEntry> = family_entries(family, shape).into_iter().filter(|e| e.is_valid_at(shape)).collect();
    let mut seen: HashMap<Vec<i64>, ClassLabel> = HashMap::new();
    for e in &entries {
        if let Some(prev) = seen.insert(e.expected_key(shape), e.label) {
            return Err(Error::Internal(format!("classes {prev} and {} share a signature at {shape}", e.label)));
        }
    }
    Ok(ClassTable { family, shape: shape.clone(), entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: ClassLabel,
    pub signature: InvariantSignature,
}

/// Computes the signature of `v` and finds the unique matching class.
pub fn classify<F: Field>(v: &Tensor<F>) -> Result<Classification> {
    let table = table_for(v.shape())?;
    let sig = signature(v)?;
    match table.lookup(&sig.class_key()) {
        Some(e) => Ok(Classification { label: e.label, signature: sig }),
        None => Err(Error::ClassificationGap(Box::new(ClassificationGap {
            family: table.family.to_string(),
            signature: sig,
            document: TensorDocument::from_tensor(v).to_json(),
        }))),
    }
}

/// Builds the representative of `label` at `shape`, optionally in the given
/// local bases.
pub fn representative<F: Field>(
    label: ClassLabel,
    shape: &Shape,
    bases: Option<&[ExactMatrix<F>]>,
    ctx: &F::Ctx,
) -> Result<Tensor<F>> {
    let family = Family::of(shape)?;
    let m = shape.dim(0).min(shape.dim(1));
    if family == Family::Bipartite && label.0 > m {
        return Err(Error::Discarded {
            label: label.to_string(),
            d: shape.dim(0),
            reason: format!("l = {} exceeds min(d1,d2) = {m}", label.0),
        });
    }
    let entry = family_entries(family, shape)
        .into_iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::UnknownLabel(format!("{label} in family {family}")))?;
    if let Some(reason) = entry.discard_reason(shape) {
        return Err(Error::Discarded { label: label.to_string(), d: free_dim(family, shape), reason });
    }
    Tensor::from_terms(shape.clone(), &entry.representative, bases, ctx)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryCheck {
    #[serde(serialize_with = "serialize_display")]
    pub shape: Shape,
    pub label: ClassLabel,
    pub expected: Vec<i64>,
    pub computed: Vec<usize>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountCheck {
    #[serde(serialize_with = "serialize_display")]
    pub shape: Shape,
    pub valid_entries: usize,
    pub expected: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub family: Family,
    pub entries: Vec<EntryCheck>,
    pub counts: Vec<CountCheck>,
    pub pass: bool,
}

/// Rebuilds every valid representative in the standard basis over the
/// rationals and compares its computed invariants with the table formulas.
/// For the bipartite family every `(d1, d2)` pair from `d_range` is checked.
pub fn verify_tables(family: Family, d_range: &[usize]) -> Result<TableReport> {
    let shapes: Vec<Shape> = match family {
        Family::Bipartite => {
            d_range.iter().flat_map(|&a| d_range.iter().map(move |&b| Shape::new(&[a, b]))).collect::<Result<_>>()?
        }
        _ => d_range.iter().map(|&d| family.shape(d)).collect::<Result<_>>()?,
    };
    let mut entries = Vec::new();
    let mut counts = Vec::new();
    for shape in shapes {
        let table = table_for(&shape)?;
        let expected = family.expected_count(&shape);
        counts.push(CountCheck {
            shape: shape.clone(),
            valid_entries: table.entries.len(),
            expected,
            pass: table.entries.len() == expected,
        });
        for e in &table.entries {
            let v = Tensor::<crate::Rational>::from_terms(shape.clone(), &e.representative, None, &())?;
            let computed = signature(&v)?.class_key();
            let expected = e.expected_key(&shape);
            let pass = expected.iter().zip(&computed).all(|(&x, &y)| x == y as i64);
            entries.push(EntryCheck { shape: shape.clone(), label: e.label, expected, computed, pass });
        }
    }
    let pass = entries.iter().all(|c| c.pass) && counts.iter().all(|c| c.pass);
    Ok(TableReport { family, entries, counts, pass })
}
