//! Dense complex linear algebra and 2x2 real utilities.
//!
//! Every matrix handled by the crate is small (order at most a few dozen),
//! dense and complex, so the only factorization offered is LU with partial
//! pivoting.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default relative pivot threshold for [`lu_det_solve`].
pub const EPS_PIVOT: f64 = 1e-13;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix from {} entries",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Returns a copy with column `k` replaced by `col`.
    pub fn with_column(&self, k: usize, col: &[Complex<T>]) -> Result<Self> {
        if k >= self.cols || col.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "replace column {k} of {}x{} with vector of length {}",
                self.rows,
                self.cols,
                col.len()
            )));
        }
        let mut m = self.clone();
        for (i, &c) in col.iter().enumerate() {
            m[(i, k)] = c;
        }
        Ok(m)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMatrix<T>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn matmul(&self, other: &CMatrix<T>) -> Result<CMatrix<T>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |s, z| s + z.norm()))
            .fold(T::zero(), T::max)
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Packed LU factorization `P·M = L·U` (unit lower `L`).
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
    odd_swaps: bool,
}

impl<T: Real> Lu<T> {
    /// Factors a square matrix. A pivot whose magnitude is at most
    /// `eps_pivot` times the largest initial absolute row sum aborts with
    /// [`Error::SingularMatrix`]; `eps_pivot = 0` only rejects exact zeros.
    pub fn factor(m: &CMatrix<T>, eps_pivot: T) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU of non-square {}x{} matrix",
                m.rows, m.cols
            )));
        }
        let n = m.rows;
        let threshold = eps_pivot * m.norm_inf();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd_swaps = false;

        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, T::neg_infinity()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmag > threshold) || pmag == T::zero() {
                return Err(Error::SingularMatrix { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd_swaps = !odd_swaps;
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor.re == T::zero() && factor.im == T::zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - factor * u;
                }
            }
        }
        Ok(Self { lu, perm, odd_swaps })
    }

    pub fn det(&self) -> Complex<T> {
        let prod = (0..self.lu.rows).fold(Complex::new(T::one(), T::zero()), |acc, i| {
            acc * self.lu[(i, i)]
        });
        if self.odd_swaps {
            -prod
        } else {
            prod
        }
    }

    pub fn solve(&self, rhs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.lu.rows;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for order {n}",
                rhs.len()
            )));
        }
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] = x[i] - self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] = x[i] - self.lu[(i, j)] * x[j];
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        Ok(x)
    }
}

/// Determinant and (optionally) the solution of `M x = rhs`.
pub fn lu_det_solve<T: Real>(
    m: &CMatrix<T>,
    rhs: Option<&[Complex<T>]>,
    eps_pivot: T,
) -> Result<(Complex<T>, Option<Vec<Complex<T>>>)> {
    if let Some(b) = rhs {
        if b.len() != m.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for order {}",
                b.len(),
                m.rows
            )));
        }
    }
    let lu = Lu::factor(m, eps_pivot)?;
    let sol = rhs.map(|b| lu.solve(b)).transpose()?;
    Ok((lu.det(), sol))
}

/// Determinant that never fails on square input: an exactly zero pivot
/// yields zero.
pub fn determinant<T: Real>(m: &CMatrix<T>) -> Result<Complex<T>> {
    match Lu::factor(m, T::zero()) {
        Ok(lu) => Ok(lu.det()),
        Err(Error::SingularMatrix { .. }) => Ok(Complex::new(T::zero(), T::zero())),
        Err(e) => Err(e),
    }
}

/// Definiteness class of a real symmetric 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Definiteness {
    PosDef,
    NegDef,
    Indef,
    NearSingular,
}

/// Real symmetric 2x2 matrix `[[alpha, beta], [beta, gamma]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sym2<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Real> Sym2<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::one())
    }

    /// `diag(1/g, g)`, the family used in the classical sufficient condition.
    pub fn diag_reciprocal(g: T) -> Self {
        Self::new(g.recip(), T::zero(), g)
    }

    pub fn det(&self) -> T {
        self.alpha * self.gamma - self.beta * self.beta
    }

    /// `|det − 1|` measured against the size of the cancelling products
    /// `|αγ| + β²`, floored at 1. Entries carrying relative rounding `ε`
    /// cannot do better than about `ε` here.
    pub fn unimodular_defect(&self) -> T {
        let terms = (self.alpha * self.gamma).abs() + self.beta * self.beta;
        (self.det() - T::one()).abs() / terms.max(T::one())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.alpha * s, self.beta * s, self.gamma * s)
    }

    /// Eigenvalues `(lo, hi)` in closed form.
    pub fn eigenvalues(&self) -> (T, T) {
        let two = T::lit(2.0);
        let mean = (self.alpha + self.gamma) / two;
        let rad = ((self.alpha - self.gamma) / two).hypot(self.beta);
        (mean - rad, mean + rad)
    }

    pub fn classify(&self, tol: T) -> Definiteness {
        let (lo, hi) = self.eigenvalues();
        let floor = tol * (T::one() + self.alpha.abs() + self.gamma.abs());
        if lo.abs().min(hi.abs()) <= floor {
            Definiteness::NearSingular
        } else if lo > T::zero() {
            Definiteness::PosDef
        } else if hi < T::zero() {
            Definiteness::NegDef
        } else {
            Definiteness::Indef
        }
    }

    pub fn norm_inf(&self) -> T {
        (self.alpha.abs() + self.beta.abs()).max(self.beta.abs() + self.gamma.abs())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.alpha - other.alpha)
            .abs()
            .max((self.beta - other.beta).abs())
            .max((self.gamma - other.gamma).abs())
    }

    pub fn to_mat2(&self) -> Mat2<T> {
        Mat2([[self.alpha, self.beta], [self.beta, self.gamma]])
    }
}

impl<T: Real> std::ops::Neg for Sym2<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.alpha, -self.beta, -self.gamma)
    }
}

/// Closed-form classification (free-function form).
pub fn sym2_classify<T: Real>(s: &Sym2<T>, tol: T) -> Definiteness {
    s.classify(tol)
}

/// Real 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn identity() -> Self {
        Mat2([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn j() -> Self {
        Mat2([[T::zero(), -T::one()], [T::one(), T::zero()]])
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: T) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    /// Solves `self · X = rhs`; `None` when `|det|` is at most
    /// `rel_tol · max_abs²`.
    pub fn solve(&self, rhs: &Mat2<T>, rel_tol: T) -> Option<Mat2<T>> {
        let det = self.det();
        let scale = self.max_abs();
        if !(det.abs() > rel_tol * scale * scale) {
            return None;
        }
        let m = &self.0;
        let inv = Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]).scale(det.recip());
        Some(inv * *rhs)
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Mat2<T>;

    fn mul(self, rhs: Mat2<T>) -> Mat2<T> {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[T::zero(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}
