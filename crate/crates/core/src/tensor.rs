//! Dense two- and three-party tensors, their flattenings, and the local
//! (invertible, factor-wise) group action.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::ExactMatrix;

/// Local dimensions `(d1, ..., dn)` with `n` in `{2, 3}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if !(2..=3).contains(&dims.len()) {
            return Err(Error::Shape(format!("{} subsystems given; only 2 or 3 are supported", dims.len())));
        }
        if dims.contains(&0) {
            return Err(Error::Shape(format!("dimension 0 in {:?}", dims)));
        }
        Ok(Self(dims.to_vec()))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self, factor: usize) -> usize {
        self.0[factor]
    }

    pub fn len(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major offset, last index fastest.
    pub fn offset(&self, index: &[usize]) -> usize {
        index.iter().zip(&self.0).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn unravel(&self, mut offset: usize) -> Vec<usize> {
        let mut idx = vec![0; self.0.len()];
        for (slot, &d) in idx.iter_mut().zip(&self.0).rev() {
            *slot = offset % d;
            offset /= d;
        }
        idx
    }

    /// All multi-indices in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(|o| self.unravel(o))
    }

    fn sub_offset(&self, index: &[usize], factors: &[usize]) -> usize {
        factors.iter().fold(0, |acc, &f| acc * self.0[f] + index[f])
    }

    fn sub_len(&self, factors: &[usize]) -> usize {
        factors.iter().map(|&f| self.0[f]).product()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An ordered bipartition `(W, W')` of the tensor factors. Factor positions
/// are 0-based and kept in increasing order on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlatteningSpec {
    row_factors: Vec<usize>,
    col_factors: Vec<usize>,
}

impl FlatteningSpec {
    pub fn new(row_factors: &[usize], arity: usize) -> Result<Self> {
        let mut rows = row_factors.to_vec();
        rows.sort_unstable();
        rows.dedup();
        if rows.len() != row_factors.len() || rows.iter().any(|&f| f >= arity) {
            return Err(Error::Shape(format!("invalid row factors {row_factors:?} for {arity} subsystems")));
        }
        if rows.is_empty() || rows.len() == arity {
            return Err(Error::Shape("a flattening needs a nonempty proper subset of factors".into()));
        }
        let col_factors = (0..arity).filter(|f| !rows.contains(f)).collect();
        Ok(Self { row_factors: rows, col_factors })
    }

    /// `(V_i, rest)`.
    pub fn single(factor: usize, arity: usize) -> Result<Self> {
        Self::new(&[factor], arity)
    }

    pub fn row_factors(&self) -> &[usize] {
        &self.row_factors
    }

    pub fn col_factors(&self) -> &[usize] {
        &self.col_factors
    }

    pub fn arity(&self) -> usize {
        self.row_factors.len() + self.col_factors.len()
    }

    pub fn complement(&self) -> Self {
        Self { row_factors: self.col_factors.clone(), col_factors: self.row_factors.clone() }
    }

    /// All ordered bipartitions for `arity` factors, single factors first.
    pub fn all(arity: usize) -> Vec<Self> {
        let mut specs: Vec<Self> = (1..(1usize << arity) - 1)
            .map(|mask| {
                let rows: Vec<usize> = (0..arity).filter(|f| mask >> f & 1 == 1).collect();
                Self::new(&rows, arity).expect("proper nonempty subset")
            })
            .collect();
        specs.sort_by_key(|s| (s.row_factors.len(), s.row_factors.clone()));
        specs
    }

    fn check(&self, shape: &Shape) -> Result<()> {
        if self.arity() != shape.arity() {
            return Err(Error::Shape(format!("flattening {self} does not fit shape {shape}")));
        }
        Ok(())
    }
}

impl fmt::Display for FlatteningSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |fs: &[usize]| fs.iter().map(|x| format!("V{}", x + 1)).collect::<Vec<_>>().join("⊗");
        write!(f, "({}, {})", side(&self.row_factors), side(&self.col_factors))
    }
}

/// Sum of decomposable basis terms in bracket notation, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TermList(Vec<Vec<usize>>);

impl TermList {
    pub fn new(terms: Vec<Vec<usize>>) -> Self {
        Self(terms)
    }

    pub fn terms(&self) -> &[Vec<usize>] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Largest index used in `factor` (0 when empty).
    pub fn max_index(&self, factor: usize) -> usize {
        self.0.iter().map(|t| t[factor]).max().unwrap_or(0)
    }

    pub fn check(&self, shape: &Shape) -> Result<()> {
        for t in &self.0 {
            if t.len() != shape.arity() {
                return Err(Error::Shape(format!("term {t:?} has the wrong arity for {shape}")));
            }
            if t.iter().zip(shape.dims()).any(|(&j, &d)| j == 0 || j > d) {
                return Err(Error::Shape(format!("term {} out of range for shape {shape}", bracket(t))));
            }
        }
        Ok(())
    }
}

fn bracket(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for TermList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|t| bracket(t)).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for TermList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(Self::default());
        }
        s.split('+')
            .map(|term| {
                let inner = term
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| Error::Shape(format!("bad bracket term `{term}`")))?;
                inner
                    .split(',')
                    .map(|x| x.parse::<usize>().map_err(|_| Error::Shape(format!("bad index in `{term}`"))))
                    .collect()
            })
            .collect::<Result<_>>()
            .map(Self)
    }
}

/// Dense tensor with row-major coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor<F: Field> {
    shape: Shape,
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> Tensor<F> {
    pub fn new(shape: Shape, coeffs: Vec<F>, ctx: F::Ctx) -> Result<Self> {
        if coeffs.len() != shape.len() {
            return Err(Error::Shape(format!(
                "shape {shape} needs {} coefficients, got {}",
                shape.len(),
                coeffs.len()
            )));
        }
        if let Some(i) = coeffs.iter().position(|c| c.context() != ctx) {
            return Err(Error::FieldMismatch(format!("coefficient {i} is in a different field")));
        }
        Ok(Self { shape, coeffs, ctx })
    }

    pub fn zeros(shape: Shape, ctx: &F::Ctx) -> Self {
        let coeffs = vec![F::zero_in(ctx); shape.len()];
        Self { shape, coeffs, ctx: ctx.clone() }
    }

    pub fn from_ints(shape: Shape, values: &[i64], ctx: &F::Ctx) -> Result<Self> {
        let coeffs = values.iter().map(|&v| F::from_int(v, ctx)).collect();
        Self::new(shape, coeffs, ctx.clone())
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn context(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn get(&self, index: &[usize]) -> &F {
        &self.coeffs[self.shape.offset(index)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F::is_zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.clone() * c).collect();
        Self { shape: self.shape.clone(), coeffs, ctx: self.ctx.clone() }
    }

    /// Matrix of `w -> v ⊗ w*` for the bipartition: rows range over `W`,
    /// columns over `W'`, each multi-index flattened row-major.
    pub fn flatten(&self, spec: &FlatteningSpec) -> Result<ExactMatrix<F>> {
        spec.check(&self.shape)?;
        let rows = self.shape.sub_len(spec.row_factors());
        let cols = self.shape.sub_len(spec.col_factors());
        let mut m = ExactMatrix::zeros(rows, cols, &self.ctx);
        for (offset, idx) in self.shape.indices().enumerate() {
            let r = self.shape.sub_offset(&idx, spec.row_factors());
            let c = self.shape.sub_offset(&idx, spec.col_factors());
            m.set(r, c, self.coeffs[offset].clone());
        }
        Ok(m)
    }

    /// Inverse of [`Tensor::flatten`].
    pub fn unflatten(matrix: &ExactMatrix<F>, spec: &FlatteningSpec, shape: Shape) -> Result<Self> {
        spec.check(&shape)?;
        if matrix.rows() != shape.sub_len(spec.row_factors()) || matrix.cols() != shape.sub_len(spec.col_factors()) {
            return Err(Error::Shape(format!(
                "{}x{} matrix does not unflatten to {shape} under {spec}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let coeffs = shape
            .indices()
            .map(|idx| {
                let r = shape.sub_offset(&idx, spec.row_factors());
                let c = shape.sub_offset(&idx, spec.col_factors());
                matrix.get(r, c).clone()
            })
            .collect();
        Ok(Self { shape, coeffs, ctx: matrix.context().clone() })
    }

    /// `Σ u_{1,j1} ⊗ ... ⊗ u_{n,jn}` where `u_{i,j}` is column `j` of
    /// `bases[i]` (the standard basis when `bases` is `None`).
    pub fn from_terms(shape: Shape, terms: &TermList, bases: Option<&[ExactMatrix<F>]>, ctx: &F::Ctx) -> Result<Self> {
        terms.check(&shape)?;
        let mut v = Self::zeros(shape.clone(), ctx);
        let Some(bases) = bases else {
            for t in terms.terms() {
                let idx: Vec<usize> = t.iter().map(|j| j - 1).collect();
                let o = shape.offset(&idx);
                v.coeffs[o] += &F::one_in(ctx);
            }
            return Ok(v);
        };
        check_local_maps(&shape, bases, "basis")?;
        let columns: Vec<Vec<Vec<F>>> = bases.iter().map(|b| (0..b.cols()).map(|c| b.column(c)).collect()).collect();
        for t in terms.terms() {
            for (o, idx) in shape.indices().enumerate() {
                let mut prod = F::one_in(ctx);
                for (factor, (&i, &j)) in idx.iter().zip(t).enumerate() {
                    prod = prod * &columns[factor][j - 1][i];
                    if prod.is_zero() {
                        break;
                    }
                }
                v.coeffs[o] += &prod;
            }
        }
        Ok(v)
    }

    /// `(A1 ⊗ ... ⊗ An) v` for invertible `Ai`.
    pub fn apply_local(&self, maps: &[ExactMatrix<F>]) -> Result<Self> {
        check_local_maps(&self.shape, maps, "local map")?;
        let mut v = self.clone();
        for (factor, a) in maps.iter().enumerate() {
            v = v.mode_product(factor, a);
        }
        Ok(v)
    }

    fn mode_product(&self, factor: usize, a: &ExactMatrix<F>) -> Self {
        let coeffs = self
            .shape
            .indices()
            .map(|idx| {
                let mut acc = F::zero_in(&self.ctx);
                let mut src = idx.clone();
                for i in 0..self.shape.dim(factor) {
                    src[factor] = i;
                    let (x, y) = (a.get(idx[factor], i), self.get(&src));
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x.clone() * y);
                    }
                }
                acc
            })
            .collect();
        Self { shape: self.shape.clone(), coeffs, ctx: self.ctx.clone() }
    }
}

fn check_local_maps<F: Field>(shape: &Shape, maps: &[ExactMatrix<F>], what: &str) -> Result<()> {
    if maps.len() != shape.arity() {
        return Err(Error::Shape(format!("{} {what} matrices given for {} subsystems", maps.len(), shape.arity())));
    }
    for (i, (m, &d)) in maps.iter().zip(shape.dims()).enumerate() {
        if m.rows() != d || m.cols() != d {
            return Err(Error::Shape(format!("{what} {} is {}x{}, expected {d}x{d}", i + 1, m.rows(), m.cols())));
        }
        if m.rank()? != d {
            return Err(Error::Basis(format!("{what} {} is singular", i + 1)));
        }
    }
    Ok(())
}

/// Integer coefficients drawn uniformly from `[-bound, bound]`.
pub fn random_tensor<F: Field>(shape: Shape, bound: u32, seed: u64, ctx: &F::Ctx) -> Result<Tensor<F>> {
    if bound == 0 {
        return Err(Error::Precondition("random_tensor needs bound >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = i64::from(bound);
    let coeffs = (0..shape.len()).map(|_| F::from_int(rng.gen_range(-b..=b), ctx)).collect();
    Ok(Tensor { shape, coeffs, ctx: ctx.clone() })
}

/// Invertible `d x d` integer matrix by rejection sampling.
pub fn random_invertible<F: Field>(d: usize, bound: u32, seed: u64, ctx: &F::Ctx) -> Result<ExactMatrix<F>> {
    if d == 0 || bound == 0 {
        return Err(Error::Precondition("random_invertible needs d >= 1 and bound >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = i64::from(bound);
    loop {
        let values: Vec<i64> = (0..d * d).map(|_| rng.gen_range(-b..=b)).collect();
        let m = ExactMatrix::from_ints(d, d, &values, ctx)?;
        if m.rank()? == d {
            return Ok(m);
        }
    }
}
