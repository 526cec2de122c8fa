//! Inverse problem: from a coefficient sequence `𝒞` to the Hamiltonian blocks
//! `H_1, ..., H_d`.
//!
//! Two independent constructions are provided. The *linear* path solves one
//! pair of `2n × 2n` systems per level and accumulates the 2x2 factors
//! `R_k`; the *inductive* path propagates a coefficient vector `Ω_n` through
//! dense recursion matrices and reads each block off four of its entries.
//! Agreement of the two is the main internal consistency check.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::{widen_tol, HamiltonianSeq};
use crate::linalg::{CMatrix, Lu, Mat2, Sym2, EPS_PIVOT};
use crate::poly::CoeffSeq;
use crate::schur_cohn::{build_l_seq, dn_scale, Sign};
use crate::scalar::{creal, cx, imag_unit, max_abs, Real};

/// Tolerances for the inverse constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseOptions<T> {
    /// `|D_n| <= degeneracy · ‖a‖₂^{2n}` is rejected.
    pub degeneracy: T,
    /// Relative breach allowed in the conjugate-paired halves of a solution.
    pub pairing: T,
    /// Relative asymmetry allowed in a linear-path block before symmetrizing.
    pub asymmetry: T,
    /// Gate on `|Re(ã·conj(i b̃))|` relative to `|ã|² + |b̃|²`.
    pub denominator: T,
}

impl<T: Real> Default for InverseOptions<T> {
    fn default() -> Self {
        InverseOptions {
            degeneracy: T::lit(1e-9),
            pairing: T::lit(1e-8),
            asymmetry: T::lit(1e-8),
            denominator: T::lit(1e-12),
        }
    }
}

/// The solutions of `L_n^± v = ∓(0, …, 2·conj C_L, 2·C_L, …, 0)` at one level.
/// Only the first halves are kept; the second halves are their reversed
/// conjugates.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSolution<T> {
    pub n: usize,
    pub zplus: Vec<Complex<T>>,
    pub zminus: Vec<Complex<T>>,
    /// `D_n` as computed from the factorization of `L_n^+`.
    pub d_n: T,
    /// Largest scaled residual `‖Lv - rhs‖∞ / (‖L‖∞‖v‖∞ + ‖rhs‖∞)` of the two solves.
    pub residual: T,
}

fn level_rhs<T: Real>(seq: &CoeffSeq<T>, n: usize, sign: Sign) -> Vec<Complex<T>> {
    let c_l = seq.c_top();
    let s: T = -sign.value::<T>();
    let mut rhs = vec![Complex::new(T::zero(), T::zero()); 2 * n];
    rhs[n - 1] = c_l.conj() * (T::lit(2.0) * s);
    rhs[n] = c_l * (T::lit(2.0) * s);
    rhs
}

fn check_dn<T: Real>(seq: &CoeffSeq<T>, n: usize, d_n: T, tol: T) -> Result<()> {
    if !(d_n.abs() > tol * dn_scale(seq.values(), n)) {
        return Err(Error::DegenerateDn {
            n,
            magnitude: d_n.abs().as_f64(),
        });
    }
    Ok(())
}

/// Full solution vector, its `D_n` and scaled residual.
fn solve_full<T: Real>(
    seq: &CoeffSeq<T>,
    n: usize,
    sign: Sign,
    opts: &InverseOptions<T>,
) -> Result<(Vec<Complex<T>>, T, T)> {
    let l = build_l_seq(seq, n, sign)?;
    let lu = match Lu::factor(&l, T::lit(EPS_PIVOT)) {
        Ok(lu) => lu,
        Err(Error::SingularMatrix { .. }) => {
            return Err(Error::DegenerateDn { n, magnitude: 0.0 })
        }
        Err(e) => return Err(e),
    };
    // det L_n^- = det L_n^+, so either sign gives D_n.
    let d_n = lu.det().re;
    check_dn(seq, n, d_n, opts.degeneracy)?;
    let rhs = level_rhs(seq, n, sign);
    let v = lu.solve(&rhs)?;

    let lv = l.mul_vec(&v)?;
    let res = lv
        .iter()
        .zip(&rhs)
        .fold(T::zero(), |m, (x, y)| m.max((*x - *y).norm()));
    let residual = res / (l.norm_inf() * max_abs(&v) + max_abs(&rhs));

    let vmax = max_abs(&v);
    let deviation = (0..n).fold(T::zero(), |m, i| m.max((v[n + i] - v[n - 1 - i].conj()).norm()));
    if deviation > opts.pairing * vmax {
        return Err(Error::ConjugatePairingViolation {
            n,
            deviation: (deviation / vmax).as_f64(),
        });
    }
    Ok((v, d_n, residual))
}

/// First-half unknowns `z_n^±(1..n)`.
pub fn solve_level_system<T: Real>(
    seq: &CoeffSeq<T>,
    n: usize,
    sign: Sign,
    opts: &InverseOptions<T>,
) -> Result<Vec<Complex<T>>> {
    let (mut v, _, _) = solve_full(seq, n, sign, opts)?;
    v.truncate(n);
    Ok(v)
}

pub fn solve_level<T: Real>(
    seq: &CoeffSeq<T>,
    n: usize,
    opts: &InverseOptions<T>,
) -> Result<LevelSolution<T>> {
    let (mut zp, d_n, rp) = solve_full(seq, n, Sign::Plus, opts)?;
    let (mut zm, _, rm) = solve_full(seq, n, Sign::Minus, opts)?;
    zp.truncate(n);
    zm.truncate(n);
    Ok(LevelSolution {
        n,
        zplus: zp,
        zminus: zm,
        d_n,
        residual: rp.max(rm),
    })
}

/// Output of the linear construction with its health metrics.
#[derive(Debug, Clone)]
pub struct LinearPath<T> {
    pub hseq: HamiltonianSeq<T>,
    pub levels: Vec<LevelSolution<T>>,
    /// `|H_12 - H_21| / ‖H‖` before symmetrizing, per block.
    pub asymmetry: Vec<T>,
}

/// `R_k = [[Re z⁺, Im z⁺], [-Im z⁻, Re z⁻]]` from the first unknowns.
fn r_factor<T: Real>(zp: Complex<T>, zm: Complex<T>) -> Mat2<T> {
    Mat2([[zp.re, zp.im], [-zm.im, zm.re]])
}

/// Solves `S·J·H = J'·S` for `H`, where `J' = -J`.
fn block_from_s<T: Real>(s: &Mat2<T>, n: usize, opts: &InverseOptions<T>) -> Result<(Sym2<T>, T)> {
    let j = Mat2::j();
    let x = s
        .solve(&(j.neg() * *s), T::lit(1e-13))
        .ok_or(Error::SingularS { n })?;
    // J^{-1} = -J
    let h = j.neg() * x;
    let m = h.0;
    let norm = h.max_abs();
    let asym = (m[0][1] - m[1][0]).abs() / norm;
    if asym > opts.asymmetry {
        return Err(Error::Asymmetric {
            n,
            residual: asym.as_f64(),
        });
    }
    let half = T::lit(0.5);
    Ok((Sym2::new(m[0][0], (m[0][1] + m[1][0]) * half, m[1][1]), asym))
}

pub fn hamiltonian_linear_detailed<T: Real>(
    seq: &CoeffSeq<T>,
    opts: &InverseOptions<T>,
) -> Result<LinearPath<T>> {
    let d = seq.degree();
    let mut s = Mat2::identity();
    let mut blocks = Vec::with_capacity(d);
    let mut levels = Vec::with_capacity(d);
    let mut asymmetry = Vec::with_capacity(d);
    for n in 1..=d {
        let level = solve_level(seq, n, opts)?;
        s = r_factor(level.zplus[0], level.zminus[0]) * s;
        // H depends on S only up to scale; keep the product normalized.
        let m = s.max_abs();
        if !(m > T::zero()) || !m.is_finite() {
            return Err(Error::SingularS { n });
        }
        s = s.scale(m.recip());
        let (h, asym) = block_from_s(&s, n, opts)?;
        blocks.push(h);
        asymmetry.push(asym);
        levels.push(level);
    }
    Ok(LinearPath {
        hseq: HamiltonianSeq::new(blocks)?,
        levels,
        asymmetry,
    })
}

pub fn hamiltonian_linear<T: Real>(
    seq: &CoeffSeq<T>,
    opts: &InverseOptions<T>,
) -> Result<HamiltonianSeq<T>> {
    hamiltonian_linear_detailed(seq, opts).map(|p| p.hseq)
}

/// Which entries of the coefficient vector determine the next block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionMode {
    /// `ã = Ω_n(1) + Ω_n(d-n+2)`, `b̃ = Ω_n(2(d-n+1)+1) + Ω_n(3(d-n+1)+1)`.
    #[default]
    Designated,
    /// Propagate once with a placeholder block, then read `Ω'(1)` and
    /// `Ω'(2(d-n)+1)`, which do not depend on the block used.
    Alternative,
}

/// Coefficient vector `Ω_n = (A**, J·conj A**, B**, J·conj B**)` of length
/// `4(d-n+1)`, where `J` reverses order.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaState<T> {
    pub n: usize,
    pub omega: Vec<Complex<T>>,
}

impl<T: Real> OmegaState<T> {
    pub fn block_len(&self) -> usize {
        self.omega.len() / 4
    }

    /// Block `i ∈ 0..4`.
    pub fn block(&self, i: usize) -> &[Complex<T>] {
        let m = self.block_len();
        &self.omega[i * m..(i + 1) * m]
    }

    /// Largest deviation of blocks 2 and 4 from the reversed conjugates of
    /// blocks 1 and 3, relative to `1 + max|Ω|`.
    pub fn redundancy_defect(&self) -> T {
        let mut dev = T::zero();
        for (x, y) in [(self.block(0), self.block(1)), (self.block(2), self.block(3))] {
            for (a, b) in x.iter().rev().zip(y) {
                dev = dev.max((a.conj() - *b).norm());
            }
        }
        dev / (T::one() + max_abs(&self.omega))
    }
}

fn initial_omega<T: Real>(seq: &CoeffSeq<T>) -> Vec<Complex<T>> {
    let half = T::lit(0.5);
    let a: Vec<Complex<T>> = seq.values().iter().map(|c| c * half).collect();
    let b: Vec<Complex<T>> = a.iter().map(|x| x * imag_unit::<T>()).collect();
    let mut out = Vec::with_capacity(4 * a.len());
    out.extend_from_slice(&a);
    out.extend(a.iter().rev().map(|x| x.conj()));
    out.extend_from_slice(&b);
    out.extend(b.iter().rev().map(|x| x.conj()));
    out
}

/// Recursion matrix `𝔓_k(H)` of order `4(k+1)`.
pub fn p_matrix<T: Real>(k: usize, h: &Sym2<T>) -> CMatrix<T> {
    let m = k + 1;
    let mut p = CMatrix::zeros(4 * m, 4 * m);
    let one = creal(T::one());
    for i in 0..m {
        // [I⁺ I⁻ 0 0] and [0 0 I⁺ I⁻]
        p[(i, i)] = one;
        p[(i + 1, m + i)] = one;
        p[(k + 2 + i, 2 * m + i)] = one;
        p[(k + 2 + i + 1, 3 * m + i)] = one;
    }
    let diag = cx(T::one(), -h.beta);
    let ia = cx(T::zero(), -h.alpha);
    let ig = cx(T::zero(), -h.gamma);
    let r3 = 2 * (k + 2);
    let r4 = r3 + k;
    for i in 0..k {
        // [(1-iβ)·[0 I_k], 0, (-iγ)·[0 I_k], 0]
        p[(r3 + i, i + 1)] = diag;
        p[(r3 + i, 2 * m + i + 1)] = ig;
        // [0, (-iα)·[I_k 0], 0, (1-iβ)·[I_k 0]]
        p[(r4 + i, m + i)] = ia;
        p[(r4 + i, 3 * m + i)] = diag;
    }
    p
}

/// `𝔔_k`: `4(k+1) × 4(k+2)`, folding adjacent blocks and padding with zeros.
pub fn q_matrix<T: Real>(k: usize) -> CMatrix<T> {
    let w = k + 2;
    let mut q = CMatrix::zeros(4 * (k + 1), 4 * w);
    let one = creal(T::one());
    for i in 0..w {
        q[(i, i)] = one;
        q[(i, w + i)] = one;
        q[(w + i, 2 * w + i)] = one;
        q[(w + i, 3 * w + i)] = one;
    }
    q
}

fn step_omega<T: Real>(omega: &[Complex<T>], k: usize, h: &Sym2<T>, level: usize) -> Result<Vec<Complex<T>>> {
    let rhs = q_matrix::<T>(k).mul_vec(omega)?;
    if k == 0 {
        return Ok(rhs);
    }
    let lu = Lu::factor(&p_matrix(k, h), T::lit(EPS_PIVOT)).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::SingularP { level },
        other => other,
    })?;
    lu.solve(&rhs)
}

fn block_from_ab<T: Real>(a: Complex<T>, b: Complex<T>, level: usize, tol: T) -> Result<Sym2<T>> {
    let w = a * (b * imag_unit::<T>()).conj();
    let den = w.re;
    if !(den.abs() >= tol * (a.norm_sqr() + b.norm_sqr())) || den == T::zero() {
        return Err(Error::ZeroDenominator {
            level,
            value: den.as_f64(),
        });
    }
    Ok(Sym2::new(b.norm_sqr() / den, w.im / den, a.norm_sqr() / den))
}

#[derive(Debug, Clone)]
pub struct InductivePath<T> {
    pub hseq: HamiltonianSeq<T>,
    /// `Ω_0, …, Ω_d`.
    pub omegas: Vec<OmegaState<T>>,
}

pub fn hamiltonian_inductive<T: Real>(
    seq: &CoeffSeq<T>,
    opts: &InverseOptions<T>,
    mode: SelectionMode,
) -> Result<InductivePath<T>> {
    let d = seq.degree();
    let mut omega = initial_omega(seq);
    let mut omegas = vec![OmegaState {
        n: 0,
        omega: omega.clone(),
    }];
    let mut blocks = Vec::with_capacity(d);
    // Rounding in Ω grows with the conditioning of the blocks already
    // applied, so the redundancy gate widens with it.
    let mut kappa = T::one();
    for n in 0..d {
        let level = n + 1;
        let k = d - level;
        let (a, b) = match mode {
            SelectionMode::Designated => {
                let m = d - n + 1;
                (omega[0] + omega[m], omega[2 * m] + omega[3 * m])
            }
            SelectionMode::Alternative => {
                let probe = step_omega(&omega, k, &Sym2::identity(), level)?;
                (probe[0], probe[2 * (k + 1)])
            }
        };
        let h = block_from_ab(a, b, level, opts.denominator)?;
        kappa = kappa.max(h.norm_inf() * h.norm_inf());
        omega = step_omega(&omega, k, &h, level)?;
        let state = OmegaState { n: level, omega };
        let defect = state.redundancy_defect();
        if defect > widen_tol(opts.pairing, kappa) {
            return Err(Error::ConjugatePairingViolation {
                n: level,
                deviation: defect.as_f64(),
            });
        }
        omega = state.omega.clone();
        omegas.push(state);
        blocks.push(h);
    }
    Ok(InductivePath {
        hseq: HamiltonianSeq::new(blocks)?,
        omegas,
    })
}

/// Per-block minimum eigenvalue of `D_{n-1}·D_n·H_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport<T> {
    pub min_eigenvalues: Vec<T>,
    pub pass: bool,
}

/// `d_values` is `D_0..D_d` with `D_0 = 1`.
pub fn check_scaled_positivity<T: Real>(d_values: &[T], hseq: &HamiltonianSeq<T>) -> Result<PositivityReport<T>> {
    let d = hseq.degree();
    if d_values.len() != d + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} determinants for {d} blocks",
            d_values.len()
        )));
    }
    let min_eigenvalues: Vec<T> = (1..=d)
        .map(|n| {
            hseq.block(n)
                .scale(d_values[n - 1] * d_values[n])
                .eigenvalues()
                .0
        })
        .collect();
    let pass = min_eigenvalues.iter().all(|&x| x > T::zero());
    Ok(PositivityReport {
        min_eigenvalues,
        pass,
    })
}

/// Both sides of an identity; the left side is computed in complex
/// arithmetic and should come out real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySides<T> {
    pub lhs: Complex<T>,
    pub rhs: T,
}

impl<T: Real> IdentitySides<T> {
    pub fn rel_error(&self) -> T {
        (self.lhs - creal(self.rhs)).norm() / self.rhs.abs().max(T::min_positive_value())
    }
}

fn gated_dets<T: Real>(seq: &CoeffSeq<T>, upto: usize, tol: T) -> Result<Vec<T>> {
    let mut out = vec![T::one()];
    for k in 1..=upto {
        let dk = crate::linalg::determinant(&build_l_seq(seq, k, Sign::Plus)?)?.re;
        check_dn(seq, k, dk, tol)?;
        out.push(dk);
    }
    Ok(out)
}

/// Cramer-type determinant identity:
///
/// `½(det L⁺[col 1 ← -2𝔠]·det L⁻[col 2n ← 2𝔠] + det L⁺[col 2n ← -2𝔠]·det L⁻[col 1 ← 2𝔠])`
/// equals `4|C_L|⁴ D_{n-2} D_n` for `n >= 2` and `-4|C_L|² D_1` for `n = 1`,
/// with `𝔠` carrying `conj C_L` and `C_L` at positions `n` and `n+1`.
pub fn cramer_identity<T: Real>(seq: &CoeffSeq<T>, n: usize, tol: T) -> Result<IdentitySides<T>> {
    let dets = gated_dets(seq, n, tol)?;
    let lp = build_l_seq(seq, n, Sign::Plus)?;
    let lm = build_l_seq(seq, n, Sign::Minus)?;
    let c_l = seq.c_top();
    let mut c = vec![Complex::new(T::zero(), T::zero()); 2 * n];
    c[n - 1] = c_l.conj();
    c[n] = c_l;
    let two = T::lit(2.0);
    let minus: Vec<_> = c.iter().map(|x| x * -two).collect();
    let plus: Vec<_> = c.iter().map(|x| x * two).collect();
    let det = |m: &CMatrix<T>, col: usize, v: &[Complex<T>]| -> Result<Complex<T>> {
        crate::linalg::determinant(&m.with_column(col, v)?)
    };
    let last = 2 * n - 1;
    let lhs = (det(&lp, 0, &minus)? * det(&lm, last, &plus)? + det(&lp, last, &minus)? * det(&lm, 0, &plus)?)
        * T::lit(0.5);
    let cl2 = c_l.norm_sqr();
    let rhs = if n == 1 {
        -T::lit(4.0) * cl2 * dets[1]
    } else {
        T::lit(4.0) * cl2 * cl2 * dets[n - 2] * dets[n]
    };
    Ok(IdentitySides { lhs, rhs })
}

/// `-∏_{k≤n} Re(z_k⁺(1)·conj z_k⁻(1)) = 2^{2n} |C_L|^{2(2n-1)} / (D_{n-1} D_n)`.
pub fn product_identity<T: Real>(
    seq: &CoeffSeq<T>,
    n: usize,
    opts: &InverseOptions<T>,
) -> Result<IdentitySides<T>> {
    let dets = gated_dets(seq, n, opts.degeneracy)?;
    let mut prod = T::one();
    for k in 1..=n {
        let level = solve_level(seq, k, opts)?;
        prod = prod * (level.zplus[0] * level.zminus[0].conj()).re;
    }
    let cl2 = seq.c_top().norm_sqr();
    let rhs = T::lit(2.0).powi(2 * n as i32) * cl2.powi(2 * n as i32 - 1) / (dets[n - 1] * dets[n]);
    Ok(IdentitySides {
        lhs: creal(-prod),
        rhs,
    })
}
