//! Dense complex matrices.
//!
//! Everything in the crate is carried by [`ComplexMatrix`], a row-major
//! `f64` complex matrix. Products skip zero entries of the left operand,
//! which keeps permutation-heavy chains linear in the number of non-zeros
//! while staying bitwise deterministic.

mod json;

pub use json::{format_f64, MatrixJson};

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute per-entry tolerance used for operator equality.
pub const EPSILON: f64 = 1e-10;

/// Default cap on the side length of any constructed operator.
pub const DEFAULT_MAX_DIM: usize = 1 << 14;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "BLOCKGATE_MAX_DIM";

pub type Complex = Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

/// Current size limit, honouring `BLOCKGATE_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

/// Fails with [`Error::SizeLimit`] when `side` exceeds [`max_dim`].
pub fn check_side(side: usize) -> Result<()> {
    let limit = max_dim();
    if side > limit {
        return Err(Error::SizeLimit { side, limit });
    }
    Ok(())
}

/// `base^exp` with the size guard applied to the result.
pub fn checked_side(base: usize, exp: usize) -> Result<usize> {
    let limit = max_dim();
    let exp32 = u32::try_from(exp).map_err(|_| Error::SizeLimit { side: usize::MAX, limit })?;
    let side = base
        .checked_pow(exp32)
        .ok_or(Error::SizeLimit { side: usize::MAX, limit })?;
    check_side(side)?;
    Ok(side)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::MalformedMatrix(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::MalformedMatrix(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: idx / cols, col: idx % cols });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::MalformedMatrix("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| Complex::new(x, 0.0))).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix from nested rows of complex numbers.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::MalformedMatrix("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Column vector holding `amplitudes`.
    pub fn column(amplitudes: &[Complex]) -> Result<Self> {
        Self::new(amplitudes.len(), 1, amplitudes.to_vec())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Complex> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Complex] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// The `side`×`side` block at block coordinates (`block_row`, `block_col`).
    pub fn block(&self, block_row: usize, block_col: usize, side: usize) -> ComplexMatrix {
        assert!(
            (block_row + 1) * side <= self.rows && (block_col + 1) * side <= self.cols,
            "block ({block_row}, {block_col}) of side {side} outside {}x{}",
            self.rows,
            self.cols
        );
        let mut out = Self::zeros(side, side);
        for r in 0..side {
            let src = (block_row * side + r) * self.cols + block_col * side;
            out.data[r * side..(r + 1) * side].copy_from_slice(&self.data[src..src + side]);
        }
        out
    }

    /// Assembles a `grid`×`grid` block matrix of equally sized square blocks.
    pub fn from_blocks<F>(grid: usize, side: usize, mut block: F) -> ComplexMatrix
    where
        F: FnMut(usize, usize) -> ComplexMatrix,
    {
        let n = grid * side;
        let mut out = Self::zeros(n, n);
        for bi in 0..grid {
            for bj in 0..grid {
                let b = block(bi, bj);
                assert_eq!((b.rows, b.cols), (side, side), "block ({bi}, {bj}) has wrong shape");
                for r in 0..side {
                    let dst = (bi * side + r) * n + bj * side;
                    out.data[dst..dst + side].copy_from_slice(b.row(r));
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex) -> ComplexMatrix {
        let data = self.data.iter().map(|&z| z * factor).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise equality within `tol`. Shape mismatch compares unequal.
    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (i..self.cols).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol)
            })
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|z| **z != ZERO).count()
    }

    fn same_shape(&self, other: &ComplexMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(())
    }

    fn mismatch(&self, other: &ComplexMatrix) -> Error {
        Error::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        if self.rows * self.cols > 256 {
            return write!(f, "  ... {} non-zero entries\n]", self.nonzero_count());
        }
        for r in 0..self.rows {
            write!(f, " ")?;
            for z in self.row(r) {
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a.get(i, j);
            if s == ZERO {
                continue;
            }
            for p in 0..b.rows {
                let dst = (i * b.rows + p) * cols + j * b.cols;
                for (o, &v) in out.data[dst..dst + b.cols].iter_mut().zip(b.row(p)) {
                    *o = s * v;
                }
            }
        }
    }
    out
}

/// `I_left ⊗ core ⊗ I_right`, written directly without intermediate products.
pub fn identity_sandwich(left: usize, core: &ComplexMatrix, right: usize) -> ComplexMatrix {
    assert!(left > 0 && right > 0, "identity factors must have positive size");
    if left == 1 && right == 1 {
        return core.clone();
    }
    let rows = left * core.rows * right;
    let cols = left * core.cols * right;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for l in 0..left {
        for i in 0..core.rows {
            for j in 0..core.cols {
                let v = core.get(i, j);
                if v == ZERO {
                    continue;
                }
                let r0 = (l * core.rows + i) * right;
                let c0 = (l * core.cols + j) * right;
                for t in 0..right {
                    out.data[(r0 + t) * cols + c0 + t] = v;
                }
            }
        }
    }
    out
}

/// Matrix product `a · b`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(a.mismatch(b));
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    let n = b.cols;
    for i in 0..a.rows {
        let dst = &mut out.data[i * n..(i + 1) * n];
        for (l, &s) in a.row(i).iter().enumerate() {
            if s == ZERO {
                continue;
            }
            for (o, &v) in dst.iter_mut().zip(b.row(l)) {
                *o += s * v;
            }
        }
    }
    Ok(out)
}

/// Conjugate transpose.
pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.data[j * a.rows + i] = a.data[i * a.cols + j].conj();
        }
    }
    out
}

/// Larger of `‖a·a† − I‖_max` and `‖a†·a − I‖_max`.
pub fn unitarity_deviation(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let ad = dagger(a);
    let id = ComplexMatrix::identity(a.rows);
    let left = matmul(a, &ad)?.max_abs_diff(&id)?;
    let right = matmul(&ad, a)?.max_abs_diff(&id)?;
    Ok(left.max(right))
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(unitarity_deviation(a)? <= tol)
}

pub fn trace(a: &ComplexMatrix) -> Result<Complex> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    Ok((0..a.rows).map(|i| a.get(i, i)).sum())
}

/// `Tr(a · b)` in O(n²) without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex> {
    if a.cols != b.rows || a.rows != b.cols {
        return Err(a.mismatch(b));
    }
    let mut acc = ZERO;
    for i in 0..a.rows {
        for (j, &v) in a.row(i).iter().enumerate() {
            if v != ZERO {
                acc += v * b.get(j, i);
            }
        }
    }
    Ok(acc)
}

/// Applies `a` to the column vector `v`.
pub fn matvec(a: &ComplexMatrix, v: &[Complex]) -> Result<Vec<Complex>> {
    if a.cols != v.len() {
        return Err(Error::DimensionMismatch {
            left_rows: a.rows,
            left_cols: a.cols,
            right_rows: v.len(),
            right_cols: 1,
        });
    }
    Ok((0..a.rows)
        .map(|i| a.row(i).iter().zip(v).map(|(x, y)| x * y).sum())
        .collect())
}
