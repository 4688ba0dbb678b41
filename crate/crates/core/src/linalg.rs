//! Small dense complex matrices and a QR factorization whose `R` factor has a
//! real, strictly positive diagonal.
//!
//! Storage is column-major: column `j` is the contiguous slice
//! `data[j * rows..(j + 1) * rows]`. Tall thin frames (d up to ~10^5 rows, a
//! handful of columns) are the main workload, so columns are the unit of work.

use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let b = rhs[(k, j)];
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let a = self.column(k);
                for (o, &x) in out.column_mut(j).iter_mut().zip(a) {
                    *o += x * b;
                }
            }
        }
        out
    }

    /// `self† * rhs` without materializing the adjoint.
    pub fn adjoint_matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, rhs.rows, "row counts differ");
        CMatrix::from_fn(self.cols, rhs.cols, |i, j| inner(self.column(i), rhs.column(j)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self† self − I‖_F`, the departure from orthonormal columns.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.adjoint_matmul(self);
        let mut acc = 0.0;
        for j in 0..g.cols {
            for i in 0..g.rows {
                let target = if i == j { 1.0 } else { 0.0 };
                acc += (g[(i, j)] - target).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[j * self.rows + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[j * self.rows + i]
    }
}

/// `⟨a|b⟩ = Σ conj(a_i) b_i`.
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    Complex64::new(re, im)
}

#[inline]
pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Thin QR factorization `A = Q R` for `rows ≥ cols`.
///
/// Classical Gram–Schmidt with one full reorthogonalization pass. Each
/// diagonal entry of `R` is the norm of the residual column, so it is real and
/// positive; this is the normalization under which `Q` of a Ginibre matrix is
/// Haar distributed.
pub fn qr(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let (m, n) = (a.rows(), a.cols());
    if n > m {
        return Err(Error::InvalidDimension(format!(
            "thin QR needs rows >= cols, got {m}x{n}"
        )));
    }
    let mut q = a.clone();
    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let (head, tail) = q.data.split_at_mut(j * m);
                let qk = &head[k * m..(k + 1) * m];
                let col = &mut tail[..m];
                let c = inner(qk, col);
                for (x, &y) in col.iter_mut().zip(qk) {
                    *x -= c * y;
                }
                r[(k, j)] += c;
            }
        }
        let norm = norm_sqr(q.column(j)).sqrt();
        let scale = a.column(j).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(norm > 1e-13 * scale.max(f64::MIN_POSITIVE)) {
            return Err(Error::Numeric(format!(
                "column {j} is numerically dependent on earlier columns"
            )));
        }
        for x in q.column_mut(j) {
            *x /= norm;
        }
        r[(j, j)] = Complex64::new(norm, 0.0);
    }
    Ok((q, r))
}

/// Orthonormalizes the columns in place; the QR `Q` factor without `R`.
pub fn orthonormalize_columns(a: CMatrix) -> Result<CMatrix> {
    qr(&a).map(|(q, _)| q)
}
