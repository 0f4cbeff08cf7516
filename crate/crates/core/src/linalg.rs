//! Dense matrices over a [`Ring`], and exact linear algebra over a field:
//! row reduction, rank, inverses and rank factorizations.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::{FieldElement, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<T: Ring> {
    ctx: T::Ctx,
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(ctx: &T::Ctx, rows: usize, cols: usize) -> Self {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![T::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &T::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = T::one(ctx);
        }
        m
    }

    pub fn from_rows(ctx: &T::Ctx, rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            ctx: ctx.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(ctx: &T::Ctx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &T)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, x)| ((k / cols, k % cols), x))
    }

    pub fn map<U: Ring>(&self, ctx: &U::Ctx, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            ctx: ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a.clone() * b.clone();
                        let cell = &mut out[(i, j)];
                        *cell = cell.clone() + prod;
                    }
                }
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += factor · row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for j in 0..self.cols {
            let v = self[(source, j)].clone();
            if !v.is_zero() {
                let cell = &mut self[(target, j)];
                *cell = cell.clone() + factor.clone() * v;
            }
        }
    }

    /// col[target] += factor · col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for i in 0..self.rows {
            let v = self[(i, source)].clone();
            if !v.is_zero() {
                let cell = &mut self[(i, target)];
                *cell = cell.clone() + v * factor.clone();
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, factor: &T) {
        for j in 0..self.cols {
            let cell = &mut self[(i, j)];
            *cell = cell.clone() * factor.clone();
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: &T) {
        for i in 0..self.rows {
            let cell = &mut self[(i, j)];
            *cell = cell.clone() * factor.clone();
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|((i, j), x)| i == j || x.is_zero())
    }
}

impl<T: Ring> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T: Ring> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

pub type FieldMatrix = Matrix<FieldElement>;

/// Reduced row echelon form and the pivot columns.
pub fn rref(a: &FieldMatrix) -> (FieldMatrix, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = m[(row, col)].inverse().expect("pivot is nonzero");
        m.scale_row(row, &inv);
        for i in 0..m.rows() {
            if i != row && !m[(i, col)].is_zero() {
                let f = -m[(i, col)].clone();
                m.add_row_multiple(i, row, &f);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub fn rank(a: &FieldMatrix) -> usize {
    rref(a).1.len()
}

/// Inverse of a square matrix, if it has one.
pub fn inverse(a: &FieldMatrix) -> Option<FieldMatrix> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of a non-square matrix");
    let ctx = *a.ctx();
    let aug = FieldMatrix::from_fn(&ctx, n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            ctx.one()
        } else {
            ctx.zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(FieldMatrix::from_fn(&ctx, n, n, |i, j| r[(i, n + j)].clone()))
}

/// `a = C·R` with `C` the pivot columns of `a` and `R` the nonzero rows of
/// its reduced echelon form.
pub fn rank_factorization(a: &FieldMatrix) -> (FieldMatrix, FieldMatrix) {
    let (r, pivots) = rref(a);
    let ctx = *a.ctx();
    let c = FieldMatrix::from_fn(&ctx, a.rows(), pivots.len(), |i, k| a[(i, pivots[k])].clone());
    let rr = FieldMatrix::from_fn(&ctx, pivots.len(), a.cols(), |k, j| r[(k, j)].clone());
    (c, rr)
}

/// A left inverse of a matrix with independent columns: `L·c = I`.
pub fn left_inverse(c: &FieldMatrix) -> FieldMatrix {
    let ctx = *c.ctx();
    let r = c.cols();
    // independent rows of c are the pivot columns of cᵀ
    let (_, rows) = rref(&c.transpose());
    assert_eq!(rows.len(), r, "columns are not independent");
    let square = FieldMatrix::from_fn(&ctx, r, r, |i, j| c[(rows[i], j)].clone());
    let inv = inverse(&square).expect("selected rows are independent");
    let mut out = FieldMatrix::zeros(&ctx, r, c.rows());
    for (k, &row) in rows.iter().enumerate() {
        for i in 0..r {
            out[(i, row)] = inv[(i, k)].clone();
        }
    }
    out
}

/// A right inverse of a reduced echelon matrix with no zero rows: `R·X = I`.
/// Uses the identity block sitting in the pivot columns.
pub fn right_inverse_rref(r: &FieldMatrix, pivots: &[usize]) -> FieldMatrix {
    let ctx = *r.ctx();
    let mut out = FieldMatrix::zeros(&ctx, r.cols(), r.rows());
    for (k, &p) in pivots.iter().enumerate() {
        out[(p, k)] = ctx.one();
    }
    out
}
