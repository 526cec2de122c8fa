//! Schur–Cohn determinants `D_n = det L_n^±` and the root count they imply.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{determinant, CMatrix};
use crate::poly::{CoeffSeq, Poly};
use crate::scalar::Real;

/// Default relative degeneracy tolerance for `|D_n|`.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Sign choice in `L_n^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// `L_n^±` for the coefficient vector `a_0..a_d`:
///
/// ```text
/// [ tM_n        ± t(conj N_n) ]
/// [ ± N_n          conj M_n   ]
/// ```
///
/// with `M_n` upper-triangular Toeplitz on `a_d, a_{d-1}, ...` and `N_n`
/// upper-triangular Toeplitz on `a_0, a_1, ...`.
pub fn build_l_coeffs<T: Real>(a: &[Complex<T>], n: usize, sign: Sign) -> Result<CMatrix<T>> {
    let d = a.len().saturating_sub(1);
    if n < 1 || n > d {
        return Err(Error::IndexOutOfRange { index: n, lo: 1, hi: d });
    }
    let s: T = sign.value();
    let mut l = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in i..n {
            let m_ij = a[d - (j - i)];
            let n_ij = a[j - i];
            // tM_n
            l[(j, i)] = m_ij;
            // ± t(conj N_n)
            l[(j, n + i)] = n_ij.conj() * s;
            // ± N_n
            l[(n + i, j)] = n_ij * s;
            // conj M_n
            l[(n + i, n + j)] = m_ij.conj();
        }
    }
    Ok(l)
}

pub fn build_l<T: Real>(f: &Poly<T>, n: usize, sign: Sign) -> Result<CMatrix<T>> {
    build_l_coeffs(f.coeffs(), n, sign)
}

pub fn build_l_seq<T: Real>(seq: &CoeffSeq<T>, n: usize, sign: Sign) -> Result<CMatrix<T>> {
    build_l_coeffs(seq.values(), n, sign)
}

/// Hadamard bound `∏ ‖row_i(L_n^+)‖₂ >= |D_n|`, the reference magnitude for
/// the degeneracy gate. Row norms do not depend on the sign choice.
pub fn dn_scale<T: Real>(a: &[Complex<T>], n: usize) -> T {
    let d = a.len().saturating_sub(1);
    let n = n.min(d);
    // Row j (0-based) of the top half holds a_{d-j..=d} and conj a_{0..=j};
    // the bottom half holds the same multiset for row n-1-j.
    (0..n).fold(T::one(), |acc, j| {
        let top: T = a[d - j..=d].iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        let bottom: T = a[0..=j].iter().fold(T::zero(), |s, z| s + z.norm_sqr());
        acc * (top + bottom)
    })
}

/// Determinant sequence `D_0 = 1, D_1, ..., D_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurCohnSeq<T> {
    pub degree: usize,
    /// Real parts of the raw determinants; `d_values[0] = 1`.
    pub d_values: Vec<T>,
    /// `|Im det L_n^+|`, zero in exact arithmetic.
    pub imag_residuals: Vec<T>,
    pub scales: Vec<T>,
    /// Indices `n >= 1` with `|D_n| <= tol · scale_n`.
    pub degenerate: Vec<usize>,
}

impl<T: Real> SchurCohnSeq<T> {
    pub fn is_degenerate(&self) -> bool {
        !self.degenerate.is_empty()
    }

    /// Number of strict sign changes in `D_0..D_d`, ignoring the degeneracy
    /// gate.
    pub fn sign_changes(&self) -> usize {
        self.d_values
            .windows(2)
            .filter(|w| (w[0] < T::zero()) != (w[1] < T::zero()))
            .count()
    }

    pub fn all_positive(&self) -> bool {
        self.d_values.iter().all(|&x| x > T::zero())
    }
}

pub fn schur_cohn_sequence_coeffs<T: Real>(a: &[Complex<T>], tol: T) -> Result<SchurCohnSeq<T>> {
    let d = a.len().saturating_sub(1);
    if d < 1 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let mut d_values = vec![T::one()];
    let mut imag_residuals = vec![T::zero()];
    let mut scales = vec![T::one()];
    let mut degenerate = Vec::new();
    for n in 1..=d {
        let raw = determinant(&build_l_coeffs(a, n, Sign::Plus)?)?;
        let scale = dn_scale(a, n);
        if !(raw.re.abs() > tol * scale) {
            degenerate.push(n);
        }
        d_values.push(raw.re);
        imag_residuals.push(raw.im.abs());
        scales.push(scale);
    }
    Ok(SchurCohnSeq {
        degree: d,
        d_values,
        imag_residuals,
        scales,
        degenerate,
    })
}

pub fn schur_cohn_sequence<T: Real>(f: &Poly<T>, tol: T) -> Result<SchurCohnSeq<T>> {
    schur_cohn_sequence_coeffs(f.coeffs(), tol)
}

/// `(q, d - q)`: sign changes and the number of roots inside the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCount {
    pub q: usize,
    pub inside: usize,
}

pub fn count_inside<T: Real>(seq: &SchurCohnSeq<T>) -> Result<RootCount> {
    if seq.is_degenerate() {
        return Err(Error::DegenerateSequence {
            indices: seq.degenerate.clone(),
        });
    }
    let q = seq.sign_changes();
    Ok(RootCount {
        q,
        inside: seq.degree - q,
    })
}
