//! JSON tensor documents.
//!
//! ```json
//! { "field": "rational", "dims": [2, 2, 2],
//!   "entries": ["1", "0", "0", "0", "0", "0", "0", "1"] }
//! { "field": "gf:7", "dims": [2, 2],
//!   "sparse": [{ "index": [0, 0], "value": "1" }, { "index": [1, 1], "value": "-1" }] }
//! ```
//!
//! Exactly one of `entries` (dense, row-major, last index fastest) and
//! `sparse` (0-based multi-indices, omitted coefficients are zero) is present.
//! Scalars are strings: `a`, `a/b`, and for `gaussian-rational` also
//! `a/b+c/di`. Unknown keys are rejected.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::tensor::{Shape, Tensor};

impl Serialize for FieldDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FieldDescriptor::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparseEntry {
    pub index: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDocument {
    pub field: FieldDescriptor,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparse: Option<Vec<SparseEntry>>,
}

impl TensorDocument {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Document(e.to_string()))
    }

    /// Dense document with canonical scalar strings.
    pub fn from_tensor<F: Field>(v: &Tensor<F>) -> Self {
        Self {
            field: F::descriptor(v.context()),
            dims: v.shape().dims().to_vec(),
            entries: Some(v.coeffs().iter().map(ToString::to_string).collect()),
            sparse: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Reads the coefficients in the field given by `ctx`, which may differ
    /// from the document's own field (integers and fractions are
    /// reinterpreted).
    pub fn to_tensor<F: Field>(&self, ctx: &F::Ctx) -> Result<Tensor<F>> {
        let shape = Shape::new(&self.dims)?;
        let scalar = |s: &str, at: String| F::parse_in(s, ctx).map_err(|e| Error::Document(format!("{at}: {e}")));
        let coeffs = match (&self.entries, &self.sparse) {
            (Some(dense), None) => {
                if dense.len() != shape.len() {
                    return Err(Error::Document(format!(
                        "entries: shape {shape} needs {} values, got {}",
                        shape.len(),
                        dense.len()
                    )));
                }
                dense.iter().enumerate().map(|(i, s)| scalar(s, format!("entries[{i}]"))).collect::<Result<Vec<_>>>()?
            }
            (None, Some(sparse)) => {
                let mut coeffs = vec![F::zero_in(ctx); shape.len()];
                let mut seen = HashSet::new();
                for (n, e) in sparse.iter().enumerate() {
                    let in_range =
                        e.index.len() == shape.arity() && e.index.iter().zip(shape.dims()).all(|(&i, &d)| i < d);
                    if !in_range {
                        return Err(Error::Document(format!(
                            "sparse[{n}].index {:?} out of range for shape {shape}",
                            e.index
                        )));
                    }
                    if !seen.insert(e.index.clone()) {
                        return Err(Error::Document(format!("sparse[{n}].index {:?} repeated", e.index)));
                    }
                    coeffs[shape.offset(&e.index)] = scalar(&e.value, format!("sparse[{n}].value"))?;
                }
                coeffs
            }
            (Some(_), Some(_)) => return Err(Error::Document("give either `entries` or `sparse`, not both".into())),
            (None, None) => return Err(Error::Document("missing `entries` or `sparse`".into())),
        };
        Tensor::new(shape, coeffs, ctx.clone())
    }
}

/// Runs `$body` with `$F` bound to the field type for `$desc` and `$ctx` to
/// its context. The enclosing function must return a `Result` whose error
/// converts from [`Error`](crate::Error).
#[macro_export]
macro_rules! with_field {
    ($desc:expr, |$ctx:ident : $F:ident| $body:expr) => {
        match $desc {
            $crate::FieldDescriptor::Rational => {
                type $F = $crate::Rational;
                let $ctx: () = ();
                $body
            }
            $crate::FieldDescriptor::Prime(p) => {
                type $F = $crate::Fp;
                let $ctx = $crate::Modulus::new(p)?;
                $body
            }
            $crate::FieldDescriptor::GaussianRational => {
                type $F = $crate::GaussianRational;
                let $ctx: () = ();
                $body
            }
        }
    };
}
