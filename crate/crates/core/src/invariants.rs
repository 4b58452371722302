//! Kernel-dimension invariants of a state.
//!
//! For a bipartition `(W, W')` of the factors, `k(v)` is the dimension of the
//! kernel of the flattening of `v` viewed as a map `W -> W'`. For three
//! parties the intersection invariant `k_{1,2,3}` is the kernel dimension of
//! the stacked system
//! `ker(f_{1,2} ⊗ id_3) ∩ ker(f_{1,3} ⊗ id_2) ∩ ker(f_{2,3} ⊗ id_1)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::ExactMatrix;
use crate::tensor::{FlatteningSpec, Shape, Tensor};

/// All kernel dimensions of a state.
///
/// `pairs` is `(k_{1,2}, k_{1,3}, k_{2,3})`, where `k_{i,j}` belongs to the
/// flattening with `W = V_i ⊗ V_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantSignature {
    pub dims: Vec<usize>,
    pub singles: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<usize>,
}

impl InvariantSignature {
    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    /// The values the class tables are keyed on: `(k1)` for two parties,
    /// `(k1, k2, k3, k_{1,2,3})` for three.
    pub fn class_key(&self) -> Vec<usize> {
        match self.triple {
            Some(t) => vec![self.singles[0], self.singles[1], self.singles[2], t],
            None => vec![self.singles[0]],
        }
    }

    /// Checks the rank dualities and the trivial bounds.
    pub fn check_consistency(&self) -> Result<()> {
        let d = &self.dims;
        let fail = |what: String| Err(Error::Internal(format!("{what} in signature {self}")));
        for (k, dim) in self.singles.iter().zip(d) {
            if k > dim {
                return fail(format!("k = {k} exceeds dimension {dim}"));
            }
        }
        match (d.len(), self.pairs, self.triple) {
            (2, None, None) => {
                if d[0] - self.singles[0] != d[1] - self.singles[1] {
                    return fail("d1 - k1 != d2 - k2".into());
                }
            }
            (3, Some([k12, k13, k23]), Some(t)) => {
                let s = &self.singles;
                let checks = [
                    (d[0] - s[0], d[1] * d[2], k23, "d1 - k1 != d2 d3 - k23"),
                    (d[1] - s[1], d[0] * d[2], k13, "d2 - k2 != d1 d3 - k13"),
                    (d[2] - s[2], d[0] * d[1], k12, "d3 - k3 != d1 d2 - k12"),
                ];
                for (lhs, w, k, msg) in checks {
                    if k > w || lhs != w - k {
                        return fail(msg.into());
                    }
                }
                if t > d.iter().product() {
                    return fail("k123 exceeds d1 d2 d3".into());
                }
            }
            _ => return fail("malformed signature".into()),
        }
        Ok(())
    }
}

impl fmt::Display for InvariantSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match (self.pairs, self.triple) {
            (Some(p), Some(t)) => write!(f, "({};{};{t})", join(&self.singles), join(&p)),
            _ => write!(f, "({})", join(&self.singles)),
        }
    }
}

/// `dim W - rank(flatten(v))`.
pub fn kernel_dim<F: Field>(v: &Tensor<F>, spec: &FlatteningSpec) -> Result<usize> {
    let m = v.flatten(spec)?;
    Ok(m.rows() - m.rank()?)
}

/// Stacked linear system whose kernel is `K_{1,2,3}(v)`.
///
/// Rows, in order: `Σ_{i,j} v_ijk w_ijl` for `(k, l)`, then
/// `Σ_{i,k} v_ijk w_ilk` for `(j, l)`, then `Σ_{j,k} v_ijk w_ljk` for `(i, l)`.
/// Columns index `w` exactly like tensor coefficients.
pub fn triple_constraint_matrix<F: Field>(v: &Tensor<F>) -> Result<ExactMatrix<F>> {
    let shape = v.shape();
    if shape.arity() != 3 {
        return Err(Error::Arity { expected: 3, got: shape.arity() });
    }
    let (d1, d2, d3) = (shape.dim(0), shape.dim(1), shape.dim(2));
    let ctx = v.context();
    let n = d1 * d2 * d3;
    let at = |i, j, k| shape.offset(&[i, j, k]);
    let mut m = ExactMatrix::zeros(d3 * d3 + d2 * d2 + d1 * d1, n, ctx);

    let mut row = 0;
    for k in 0..d3 {
        for l in 0..d3 {
            for i in 0..d1 {
                for j in 0..d2 {
                    m.set(row, at(i, j, l), v.get(&[i, j, k]).clone());
                }
            }
            row += 1;
        }
    }
    for j in 0..d2 {
        for l in 0..d2 {
            for i in 0..d1 {
                for k in 0..d3 {
                    m.set(row, at(i, l, k), v.get(&[i, j, k]).clone());
                }
            }
            row += 1;
        }
    }
    for i in 0..d1 {
        for l in 0..d1 {
            for j in 0..d2 {
                for k in 0..d3 {
                    m.set(row, at(l, j, k), v.get(&[i, j, k]).clone());
                }
            }
            row += 1;
        }
    }
    Ok(m)
}

pub fn triple_kernel_dim<F: Field>(v: &Tensor<F>) -> Result<usize> {
    let m = triple_constraint_matrix(v)?;
    Ok(m.cols() - m.rank()?)
}

/// Every kernel dimension of `v`, with the dualities verified.
pub fn signature<F: Field>(v: &Tensor<F>) -> Result<InvariantSignature> {
    let n = v.shape().arity();
    let singles = (0..n).map(|i| kernel_dim(v, &FlatteningSpec::single(i, n)?)).collect::<Result<Vec<_>>>()?;
    let (pairs, triple) = if n == 3 {
        let k = |a, b| kernel_dim(v, &FlatteningSpec::new(&[a, b], 3)?);
        (Some([k(0, 1)?, k(0, 2)?, k(1, 2)?]), Some(triple_kernel_dim(v)?))
    } else {
        (None, None)
    };
    let sig = InvariantSignature { dims: v.shape().dims().to_vec(), singles, pairs, triple };
    sig.check_consistency()?;
    Ok(sig)
}

/// One term `w ⊗ w'` of a general form; `w` is indexed over `W`, `w'` over
/// `W'`, both flattened row-major.
pub type FormTerm<F> = (Vec<F>, Vec<F>);

/// Rank factorization of the flattening: `v = Σ w_i ⊗ w'_i` with exactly
/// `dim W - k(v)` terms. The `w_i` are the pivot columns of the flattening
/// and the `w'_i` the nonzero rows of its reduced echelon form.
pub fn general_form_decomposition<F: Field>(v: &Tensor<F>, spec: &FlatteningSpec) -> Result<Vec<FormTerm<F>>> {
    let m = v.flatten(spec)?;
    let r = m.rref()?;
    Ok(r.pivots.iter().enumerate().map(|(i, &p)| (m.column(p), r.matrix.row(i).to_vec())).collect())
}

/// Multiplies out a general form back into a tensor.
pub fn reconstruct<F: Field>(
    terms: &[FormTerm<F>],
    shape: &Shape,
    spec: &FlatteningSpec,
    ctx: &F::Ctx,
) -> Result<Tensor<F>> {
    let rows: usize = spec.row_factors().iter().map(|&f| shape.dim(f)).product();
    let cols: usize = spec.col_factors().iter().map(|&f| shape.dim(f)).product();
    let mut m = ExactMatrix::<F>::zeros(rows, cols, ctx);
    for (w, w_prime) in terms {
        if w.len() != rows || w_prime.len() != cols {
            return Err(Error::Shape("general-form term has the wrong length".into()));
        }
        for (r, a) in w.iter().enumerate() {
            for (c, b) in w_prime.iter().enumerate() {
                let mut x = m.get(r, c).clone();
                x += &(a.clone() * b);
                m.set(r, c, x);
            }
        }
    }
    Tensor::unflatten(&m, spec, shape.clone())
}
