//! Dense matrices over an exact field with row reduction, rank and kernels.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix. All entries live in the field described by `ctx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    ctx: F::Ctx,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref<F: Field> {
    pub matrix: ExactMatrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>, ctx: F::Ctx) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data, ctx })
    }

    pub fn zeros(rows: usize, cols: usize, ctx: &F::Ctx) -> Self {
        Self { rows, cols, data: vec![F::zero_in(ctx); rows * cols], ctx: ctx.clone() }
    }

    pub fn identity(n: usize, ctx: &F::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.data[i * n + i] = F::one_in(ctx);
        }
        m
    }

    pub fn from_ints(rows: usize, cols: usize, values: &[i64], ctx: &F::Ctx) -> Result<Self> {
        let data = values.iter().map(|&v| F::from_int(v, ctx)).collect();
        Self::new(rows, cols, data, ctx.clone())
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: &F::Ctx, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data, ctx: ctx.clone() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn context(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.ctx, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// Fails if any entry belongs to a different field than the matrix.
    pub fn check_field(&self) -> Result<()> {
        match self.data.iter().position(|x| x.context() != self.ctx) {
            None => Ok(()),
            Some(i) => Err(Error::FieldMismatch(format!(
                "entry ({}, {}) is in {} but the matrix is over {}",
                i / self.cols.max(1),
                i % self.cols.max(1),
                F::descriptor(&self.data[i].context()),
                F::descriptor(&self.ctx)
            ))),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, &self.ctx, |r, c| {
            dot(self.row(r), (0..rhs.rows).map(|k| rhs.get(k, c)), &self.ctx)
        }))
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} does not fit a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v.iter(), &self.ctx)).collect())
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first
    /// nonzero entry at or below the current pivot row.
    pub fn rref(&self) -> Result<Rref<F>> {
        self.check_field()?;
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        Ok(Rref { matrix: m, pivots })
    }

    /// Number of pivot columns of the echelon form.
    pub fn rank(&self) -> Result<usize> {
        self.check_field()?;
        let mut m = self.clone();
        Ok(m.eliminate(false).len())
    }

    /// Basis of `{w : M w = 0}`, one vector per free column in increasing
    /// column order, with a unit in that free column.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<F>>> {
        let Rref { matrix: r, pivots } = self.rref()?;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut w = vec![F::zero_in(&self.ctx); self.cols];
                w[free] = F::one_in(&self.ctx);
                for (i, &p) in pivots.iter().enumerate() {
                    w[p] = -r.get(i, free).clone();
                }
                w
            })
            .collect();
        Ok(basis)
    }

    pub fn inverse(&self) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Ok(None);
        }
        let n = self.rows;
        let augmented = Self::from_fn(n, 2 * n, &self.ctx, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                F::one_in(&self.ctx)
            } else {
                F::zero_in(&self.ctx)
            }
        });
        let Rref { matrix, pivots } = augmented.rref()?;
        if pivots.len() < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        Ok(Some(Self::from_fn(n, n, &self.ctx, |r, c| matrix.get(r, c + n).clone())))
    }

    /// In-place elimination; returns pivot columns. With `reduce` the result
    /// is the reduced form, otherwise only a row echelon form.
    fn eliminate(&mut self, reduce: bool) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(r) = (pr..rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(pr, r);
            if reduce {
                let inv = self.get(pr, c).inverse().expect("pivot is nonzero");
                for x in &mut self.data[pr * cols + c..(pr + 1) * cols] {
                    *x = x.clone() * &inv;
                }
            }
            let targets: Box<dyn Iterator<Item = usize>> =
                if reduce { Box::new((0..rows).filter(|&r| r != pr)) } else { Box::new(pr + 1..rows) };
            for r in targets {
                if self.get(r, c).is_zero() {
                    continue;
                }
                let factor = self.get(r, c).clone() / self.get(pr, c);
                let (pivot_row, target_row) = two_rows(&mut self.data, cols, pr, r);
                for (t, p) in target_row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !p.is_zero() {
                        *t -= &(factor.clone() * p);
                    }
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

fn two_rows<T>(data: &mut [T], cols: usize, a: usize, b: usize) -> (&[T], &mut [T]) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = data.split_at_mut(b * cols);
        (&lo[a * cols..(a + 1) * cols], &mut hi[..cols])
    } else {
        let (lo, hi) = data.split_at_mut(a * cols);
        (&hi[..cols], &mut lo[b * cols..(b + 1) * cols])
    }
}

fn dot<'a, F: Field>(a: &[F], b: impl Iterator<Item = &'a F>, ctx: &F::Ctx) -> F {
    let mut acc = F::zero_in(ctx);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x.clone() * y);
        }
    }
    acc
}

impl<F: Field> fmt::Display for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
