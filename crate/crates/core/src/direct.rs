//! Direct problem: from Hamiltonian blocks and a boundary vector `(A, B)` at
//! `t = L` to the exact piecewise solution of `-d/dt (A, B) = z·J·H(t)·(A, B)`.
//!
//! Over a piece of length `s` with constant `H` the propagator is
//! `cos(sz)·I + sin(sz)·JH`, because `(JH)² = -I` when `det H = 1`. Every entry
//! is a two-term exponential sum, so the whole solution is carried exactly
//! as [`ExpPoly`] values.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::hamiltonian::{HamiltonianSeq, UNIMODULAR_TOL};
use crate::linalg::{Definiteness, Sym2};
use crate::poly::{CoeffSeq, Poly};
use crate::scalar::{creal, cx, imag_unit, Real};

pub type CMat2<T> = [[Complex<T>; 2]; 2];

/// Tolerance for the joint-continuity and start-value checks.
pub const CONTINUITY_TOL: f64 = 1e-10;
pub const START_VALUE_TOL: f64 = 1e-12;
pub const PROPORTIONALITY_TOL: f64 = 1e-9;

/// Sample points in `z` used by the internal consistency checks.
pub fn default_z_grid<T: Real>() -> Vec<Complex<T>> {
    let l = T::lit;
    vec![
        cx(l(1.0), l(0.0)),
        cx(l(-1.0), l(0.0)),
        cx(l(0.0), l(1.0)),
        cx(l(0.0), l(-1.0)),
        cx(l(0.5), l(0.5)),
        cx(l(2.0), l(-1.0)),
    ]
}

/// 2x2 matrix of exponential sums.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpMat2<T>(pub [[ExpPoly<T>; 2]; 2]);

impl<T: Real> ExpMat2<T> {
    pub fn identity() -> Self {
        ExpMat2([
            [ExpPoly::one(), ExpPoly::zero()],
            [ExpPoly::zero(), ExpPoly::one()],
        ])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        ExpMat2([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn apply(&self, v: &[ExpPoly<T>; 2]) -> [ExpPoly<T>; 2] {
        let m = &self.0;
        [
            &(&m[0][0] * &v[0]) + &(&m[0][1] * &v[1]),
            &(&m[1][0] * &v[0]) + &(&m[1][1] * &v[1]),
        ]
    }

    pub fn det(&self) -> ExpPoly<T> {
        let m = &self.0;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    pub fn eval(&self, z: Complex<T>) -> CMat2<T> {
        let m = &self.0;
        [
            [m[0][0].eval(z), m[0][1].eval(z)],
            [m[1][0].eval(z), m[1][1].eval(z)],
        ]
    }
}

fn check_block<T: Real>(h: &Sym2<T>) -> Result<()> {
    if h.unimodular_defect() > T::lit(UNIMODULAR_TOL) {
        return Err(Error::NotUnimodular { det: h.det().as_f64() });
    }
    Ok(())
}

/// Propagator across one piece of length `r/2`:
/// `[[cos − β sin, −γ sin], [α sin, cos + β sin]]` at frequency `r/2`.
pub fn transfer_block<T: Real>(h: &Sym2<T>, r: usize) -> Result<ExpMat2<T>> {
    check_block(h)?;
    let m = r as i64;
    let c = ExpPoly::cos_half(m);
    let s = ExpPoly::sin_half(m);
    Ok(ExpMat2([
        [&c - &s.scale_real(h.beta), s.scale_real(-h.gamma)],
        [s.scale_real(h.alpha), &c + &s.scale_real(h.beta)],
    ]))
}

/// Symbolic product `T_1 ⋯ T_d`, the propagator from `t = L` back to `t = 0`.
pub fn transfer_product<T: Real>(hseq: &HamiltonianSeq<T>) -> Result<ExpMat2<T>> {
    let mut acc = ExpMat2::identity();
    for h in hseq.blocks() {
        acc = acc.mul(&transfer_block(h, hseq.r())?);
    }
    Ok(acc)
}

fn cmat_mul<T: Real>(a: &CMat2<T>, b: &CMat2<T>) -> CMat2<T> {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `cos(sz)·I + sin(sz)·JH` evaluated numerically.
fn propagator_at<T: Real>(h: &Sym2<T>, s: T, z: Complex<T>) -> CMat2<T> {
    let w = z * s;
    let (c, sn) = (w.cos(), w.sin());
    [
        [c - sn * h.beta, -sn * h.gamma],
        [sn * h.alpha, c + sn * h.beta],
    ]
}

/// Numerical transfer matrix `M(t, z)` with `(A, B)(t) = M(t, z)·(A, B)(L)`.
pub fn transfer_matrix_at<T: Real>(hseq: &HamiltonianSeq<T>, t: T, z: Complex<T>) -> Result<CMat2<T>> {
    let n = hseq.piece_of(t)?;
    let half_r = T::from_usize(hseq.r()).unwrap() * T::lit(0.5);
    let mut m = propagator_at(hseq.block(n), hseq.piece_end(n) - t, z);
    for k in n + 1..=hseq.degree() {
        m = cmat_mul(&m, &propagator_at(hseq.block(k), half_r, z));
    }
    Ok(m)
}

/// Coefficients of one piece: on `[r(n-1)/2, rn/2)`,
/// `A(t, z) = ½ Σ_μ [a(μ) e^{i(μ/2 − t)z} + conj(a(μ)) e^{−i(μ/2 − t)z}]`,
/// with `μ` in half-steps; likewise `B` with `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece<T> {
    pub a: ExpPoly<T>,
    pub b: ExpPoly<T>,
}

impl<T: Real> Piece<T> {
    fn half_sum(p: &ExpPoly<T>, t: T, z: Complex<T>) -> Complex<T> {
        let i = imag_unit::<T>();
        let x = |w: Complex<T>| (-i * w * t).exp() * p.eval(w);
        (x(z) + x(z.conj()).conj()) * T::lit(0.5)
    }

    pub fn eval(&self, t: T, z: Complex<T>) -> [Complex<T>; 2] {
        [Self::half_sum(&self.a, t, z), Self::half_sum(&self.b, t, z)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSolution<T> {
    pub hseq: HamiltonianSeq<T>,
    pub boundary: (T, T),
    /// `(A, B)` at the joints `t = rn/2`, `n = 0..=d`, as functions of `z`.
    pub joint_values: Vec<[ExpPoly<T>; 2]>,
    /// Piece coefficients, `pieces[n - 1]` for piece `n`.
    pub pieces: Vec<Piece<T>>,
}

impl<T: Real> PiecewiseSolution<T> {
    pub fn degree(&self) -> usize {
        self.hseq.degree()
    }

    /// `(A(t, z), B(t, z))` using piece `n`'s representation.
    pub fn eval_on_piece(&self, n: usize, t: T, z: Complex<T>) -> [Complex<T>; 2] {
        self.pieces[n - 1].eval(t, z)
    }

    pub fn eval(&self, t: T, z: Complex<T>) -> Result<[Complex<T>; 2]> {
        let n = self.hseq.piece_of(t)?;
        Ok(self.eval_on_piece(n, t, z))
    }

    /// `E(0, z) = A(0, z) − i·B(0, z)`.
    pub fn e0(&self) -> ExpPoly<T> {
        let v = &self.joint_values[0];
        &v[0] - &v[1].scale(imag_unit())
    }

    /// `E(t, z)` at any `t`.
    pub fn e_at(&self, t: T, z: Complex<T>) -> Result<Complex<T>> {
        let [a, b] = self.eval(t, z)?;
        Ok(a - imag_unit::<T>() * b)
    }
}

pub fn solve_direct<T: Real>(hseq: &HamiltonianSeq<T>, a: T, b: T) -> Result<PiecewiseSolution<T>> {
    if a == T::zero() && b == T::zero() {
        return Err(Error::ZeroBoundary);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput("non-finite boundary".into()));
    }
    let d = hseq.degree();
    let r = hseq.r();
    let mut joint_values = vec![[ExpPoly::constant(creal(a)), ExpPoly::constant(creal(b))]];
    for n in (1..=d).rev() {
        let tb = transfer_block(hseq.block(n), r)?;
        let next = tb.apply(joint_values.last().unwrap());
        joint_values.push(next);
    }
    joint_values.reverse();

    let i = imag_unit::<T>();
    let pieces = (1..=d)
        .map(|n| {
            let h = hseq.block(n);
            let [va, vb] = &joint_values[n];
            // (I − iJH)·V with JH = [[−β, −γ], [α, β]]
            let wa = &(va + &va.scale(i * h.beta)) + &vb.scale(i * h.gamma);
            let wb = &(vb - &vb.scale(i * h.beta)) - &va.scale(i * h.alpha);
            let shift = (r * n) as i64;
            Piece {
                a: wa.shift(shift),
                b: wb.shift(shift),
            }
        })
        .collect();

    let sol = PiecewiseSolution {
        hseq: hseq.clone(),
        boundary: (a, b),
        joint_values,
        pieces,
    };
    verify_solution(&sol)?;
    Ok(sol)
}

/// Joint continuity of the piece representations and `E(t, 0) = A − iB` at
/// every joint.
fn verify_solution<T: Real>(sol: &PiecewiseSolution<T>) -> Result<()> {
    let (a, b) = sol.boundary;
    let d = sol.degree();
    let big_l = T::from_usize(sol.hseq.half_length()).unwrap();
    let zero = Complex::new(T::zero(), T::zero());

    // Roundoff scale at joint n: the largest coefficient mass met while
    // propagating from L down to that joint, where the step into joint n
    // multiplies the mass at joint n + 1 by entries of size ‖H_{n+1}‖.
    // Cancellation can make the final coefficients much smaller than this.
    let mass = |n: usize| {
        let [va, vb] = &sol.joint_values[n];
        va.l1_norm() + vb.l1_norm()
    };
    let mut scales = vec![T::one(); d + 1];
    let mut running = T::one().max(mass(d));
    scales[d] = running;
    for n in (0..d).rev() {
        let step = (T::one() + sol.hseq.blocks()[n].norm_inf()) * mass(n + 1);
        running = running.max(step).max(mass(n));
        scales[n] = running;
    }

    for n in 0..=d {
        let t = sol.hseq.piece_start(n + 1);
        let [va, vb] = &sol.joint_values[n];
        let scale = scales[n];
        let mismatch = ((va.eval(zero) - creal(a)).norm() + (vb.eval(zero) - creal(b)).norm()) / scale;
        if mismatch > T::lit(START_VALUE_TOL) {
            return Err(Error::ContinuityViolation {
                joint: t.as_f64(),
                mismatch: mismatch.as_f64(),
            });
        }
    }

    for n in 1..=d {
        let piece = &sol.pieces[n - 1];
        let scale0 = (piece.a.l1_norm() + piece.b.l1_norm()).max(scales[n - 1]);
        for z in default_z_grid::<T>() {
            let growth = (z.im.abs() * big_l * T::lit(2.0)).exp();
            let scale = T::one() + scale0 * growth;
            // Piece n must reproduce the joint values at both of its ends.
            for (t, k) in [(sol.hseq.piece_start(n), n - 1), (sol.hseq.piece_end(n), n)] {
                let [pa, pb] = piece.eval(t, z);
                let [ja, jb] = &sol.joint_values[k];
                let mismatch = ((pa - ja.eval(z)).norm() + (pb - jb.eval(z)).norm()) / scale;
                if mismatch > T::lit(CONTINUITY_TOL) {
                    return Err(Error::ContinuityViolation {
                        joint: t.as_f64(),
                        mismatch: mismatch.as_f64(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegeneracyClass {
    FullDegree,
    PropTo1i,
    PropTo1minusI,
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport<T> {
    /// `∏ ½(I − iJH_n)·(A, B)`.
    pub vector: [Complex<T>; 2],
    pub class: DegeneracyClass,
}

/// Leading-coefficient vector of `(A, B)(0, ·)`. Its first component minus
/// `i` times the second is the top coefficient of `E(0, z)`, so
/// proportionality to `(1, −i)` or `(1, i)` means an end coefficient of
/// `E(0, z)` drops out.
pub fn degeneracy_test<T: Real>(hseq: &HamiltonianSeq<T>, a: T, b: T, tol: T) -> DegeneracyReport<T> {
    let i = imag_unit::<T>();
    let half = T::lit(0.5);
    let mut v = [creal(a), creal(b)];
    // Cancellation is judged against the largest intermediate vector rather
    // than the worst-case operator-norm product, which overshoots by many
    // orders of magnitude on ill-conditioned blocks.
    let mut bound = (a * a + b * b).sqrt();
    for h in hseq.blocks().iter().rev() {
        let x = (v[0] + i * (v[0] * h.beta + v[1] * h.gamma)) * half;
        let y = (v[1] - i * (v[0] * h.alpha + v[1] * h.beta)) * half;
        v = [x, y];
        bound = bound.max((x.norm_sqr() + y.norm_sqr()).sqrt());
    }
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let class = if norm <= tol * bound {
        DegeneracyClass::Zero
    } else if (v[1] - i * v[0]).norm() <= tol * norm {
        DegeneracyClass::PropTo1i
    } else if (v[1] + i * v[0]).norm() <= tol * norm {
        DegeneracyClass::PropTo1minusI
    } else {
        DegeneracyClass::FullDegree
    };
    DegeneracyReport { vector: v, class }
}

/// Coefficient sequence of `E(0, z)`; rejects off-lattice frequencies and
/// vanishing end coefficients.
pub fn extract_seq<T: Real>(sol: &PiecewiseSolution<T>, tol: T) -> Result<CoeffSeq<T>> {
    let e = sol.e0();
    let d = sol.degree();
    let big_l = sol.hseq.half_length() as i64;
    let r = sol.hseq.r() as i64;
    let norm = e.l1_norm();
    if norm == T::zero() {
        return Err(Error::DegenerateSpectrum("E(0, z) vanishes".into()));
    }
    for m in e.support() {
        let off = 2 * big_l - m;
        if off < 0 || off % (2 * r) != 0 || off / (2 * r) > d as i64 {
            return Err(Error::DegenerateSpectrum(format!(
                "frequency {}/2 is off the lattice",
                m
            )));
        }
    }
    let c: Vec<Complex<T>> = (0..=d as i64).map(|j| e.get(2 * (big_l - r * j))).collect();
    for (label, x) in [("C_L", c[0]), ("C_-L", c[d])] {
        if !(x.norm() > tol * norm) {
            return Err(Error::DegenerateSpectrum(format!(
                "end coefficient {label} = {x} vanishes"
            )));
        }
    }
    CoeffSeq::new(c, true)
}

/// `f` with `f(e^{−irz}) = e^{−irdz/2}·E(0, z)`.
pub fn extract_poly<T: Real>(sol: &PiecewiseSolution<T>, tol: T) -> Result<Poly<T>> {
    extract_seq(sol, tol)?.to_poly()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureCount {
    /// Number of negative definite blocks.
    pub q: usize,
    pub inside: usize,
    /// Number of definiteness changes between consecutive blocks, counting
    /// a leading negative block as one change from the positive start.
    pub flips: usize,
}

pub fn signature_count<T: Real>(hseq: &HamiltonianSeq<T>, tol: T) -> Result<SignatureCount> {
    let classes = hseq.definiteness(tol);
    let bad: Vec<usize> = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, Definiteness::NearSingular | Definiteness::Indef))
        .map(|(i, _)| i + 1)
        .collect();
    if !bad.is_empty() {
        return Err(Error::AmbiguousSignature { indices: bad });
    }
    let q = classes.iter().filter(|c| **c == Definiteness::NegDef).count();
    let mut prev = Definiteness::PosDef;
    let mut flips = 0;
    for c in classes {
        if c != prev {
            flips += 1;
        }
        prev = c;
    }
    Ok(SignatureCount {
        q,
        inside: hseq.degree() - q,
        flips,
    })
}

/// Largest scaled central-difference residual of
/// `d/dt (A, B) + z·J·H(t)·(A, B)` over the grid.
pub fn ode_residual<T: Real>(
    sol: &PiecewiseSolution<T>,
    t_grid: &[T],
    z_grid: &[Complex<T>],
    h: T,
) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::InvalidInput("step h must be positive".into()));
    }
    let joints = sol.hseq.joints();
    let two_h = h * T::lit(2.0);
    let mut worst = T::zero();
    for &t in t_grid {
        if joints.iter().any(|&j| (t - j).abs() < two_h) {
            return Err(Error::GridTouchesJoint { t: t.as_f64() });
        }
        let n = sol.hseq.piece_of(t)?;
        let blk = sol.hseq.block(n);
        for &z in z_grid {
            let [a, b] = sol.eval_on_piece(n, t, z);
            let [ap, bp] = sol.eval_on_piece(n, t + h, z);
            let [am, bm] = sol.eval_on_piece(n, t - h, z);
            let da = (ap - am) / two_h;
            let db = (bp - bm) / two_h;
            // J·H·(A, B) = (−βA − γB, αA + βB)
            let ja = -(a * blk.beta + b * blk.gamma);
            let jb = a * blk.alpha + b * blk.beta;
            let ra = da + z * ja;
            let rb = db + z * jb;
            let num = (ra.norm_sqr() + rb.norm_sqr()).sqrt();
            let den = T::one() + z.norm() * (a.norm_sqr() + b.norm_sqr()).sqrt();
            worst = worst.max(num / den);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::{hamiltonian_linear, InverseOptions};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn hs(blocks: Vec<Sym2<f64>>) -> HamiltonianSeq<f64> {
        HamiltonianSeq::new(blocks).unwrap()
    }

    #[test]
    fn rotation_block() {
        let t = transfer_block(&Sym2::<f64>::identity(), 2).unwrap();
        assert_eq!(t.0[0][0], ExpPoly::cos_half(2));
        assert_eq!(t.0[0][1], -ExpPoly::sin_half(2));
        assert_eq!(t.0[1][0], ExpPoly::sin_half(2));
        assert_eq!(t.det(), ExpPoly::one());
    }

    #[test]
    fn diagonal_block() {
        let h = Sym2::new(1.0 / 3.0, 0.0, 3.0);
        let t = transfer_block(&h, 2).unwrap();
        assert!(t.0[0][1].max_rel_diff(&ExpPoly::sin_half(2).scale_real(-3.0)) < 1e-16);
        assert!(t.0[1][0].max_rel_diff(&ExpPoly::sin_half(2).scale_real(1.0 / 3.0)) < 1e-16);
        assert!(t.det().clean(1e-15) == ExpPoly::one());
        assert!(matches!(
            transfer_block(&Sym2::new(2.0, 0.0, 2.0), 1),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn single_block_solution() {
        let h = hs(vec![Sym2::new(1.0 / 3.0, 0.0, 3.0)]);
        let sol = solve_direct(&h, 1.5, 0.0).unwrap();
        let [a0, b0] = &sol.joint_values[0];
        assert!(a0.max_rel_diff(&ExpPoly::cos_half(2).scale_real(1.5)) < 1e-15);
        assert!(b0.max_rel_diff(&ExpPoly::sin_half(2).scale_real(0.5)) < 1e-15);
        let expect = ExpPoly::from_terms([(2, c(0.5, 0.0)), (-2, c(1.0, 0.0))]);
        assert!(sol.e0().max_rel_diff(&expect) < 1e-15);
        let f = extract_poly(&sol, 1e-9).unwrap();
        assert!(f.max_rel_coeff_diff(&Poly::from_real(&[0.5, 1.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn identity_blocks_give_single_exponential() {
        let h = hs(vec![Sym2::identity(); 4]);
        let sol = solve_direct(&h, 1.0, 0.0).unwrap();
        let [a0, b0] = &sol.joint_values[0];
        // L = 2: A = cos 2z, B = sin 2z
        assert!(a0.max_rel_diff(&ExpPoly::cos_half(4)) < 1e-15);
        assert!(b0.max_rel_diff(&ExpPoly::sin_half(4)) < 1e-15);
        assert_eq!(sol.e0().clean(1e-15).support(), vec![-4]);
    }

    #[test]
    fn opposite_blocks_give_constant() {
        let h = hs(vec![Sym2::identity(), -Sym2::identity()]);
        let sol = solve_direct(&h, 1.0, 0.0).unwrap();
        assert!(sol.e0().max_rel_diff(&ExpPoly::one()) < 1e-15);
        assert!(matches!(extract_poly(&sol, 1e-9), Err(Error::DegenerateSpectrum(_))));
        let rep = degeneracy_test(&h, 1.0, 0.0, 1e-9);
        assert_eq!(rep.class, DegeneracyClass::Zero);
        let res = ode_residual(&sol, &[0.25, 0.75], &[c(0.0, 0.0)], 1e-5).unwrap();
        assert!(res < 1e-15);
    }

    #[test]
    fn degeneracy_classes() {
        let one = hs(vec![Sym2::identity()]);
        let rep = degeneracy_test(&one, 1.0, 0.0, 1e-9);
        assert_eq!(rep.class, DegeneracyClass::PropTo1minusI);
        assert!((rep.vector[0] - c(0.5, 0.0)).norm() < 1e-16);
        assert!((rep.vector[1] - c(0.0, -0.5)).norm() < 1e-16);

        let diag = hs(vec![
            Sym2::diag_reciprocal(2.0),
            Sym2::diag_reciprocal(0.7),
            Sym2::diag_reciprocal(1.3),
        ]);
        assert_eq!(degeneracy_test(&diag, 1.0, 0.0, 1e-9).class, DegeneracyClass::FullDegree);
    }

    #[test]
    fn zero_boundary_rejected() {
        let h = hs(vec![Sym2::identity()]);
        assert!(matches!(solve_direct(&h, 0.0, 0.0), Err(Error::ZeroBoundary)));
    }

    #[test]
    fn signature_of_quadratic() {
        let s = CoeffSeq::from_real(&[-0.8, -1.6, 1.0], true).unwrap();
        let h = hamiltonian_linear(&s, &InverseOptions::default()).unwrap();
        let sig = signature_count(&h, 1e-9).unwrap();
        assert_eq!(sig, SignatureCount { q: 1, inside: 1, flips: 1 });

        let amb = hs(vec![Sym2::new(1.0, 0.0, 1e-14)]);
        assert!(matches!(
            signature_count(&amb, 1e-9),
            Err(Error::AmbiguousSignature { .. })
        ));
    }

    #[test]
    fn ode_on_single_block() {
        let h = hs(vec![Sym2::new(1.0 / 3.0, 0.0, 3.0)]);
        let sol = solve_direct(&h, 1.5, 0.0).unwrap();
        let res = ode_residual(&sol, &[0.3, 0.5, 0.8], &[c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)], 1e-5)
            .unwrap();
        assert!(res < 1e-8, "{res}");
        assert!(matches!(
            ode_residual(&sol, &[1e-5], &[c(1.0, 0.0)], 1e-5),
            Err(Error::GridTouchesJoint { .. })
        ));
    }

    #[test]
    fn numeric_and_symbolic_transfer_agree() {
        let h = hs(vec![Sym2::new(2.0, 0.5, 0.625), Sym2::diag_reciprocal(3.0), Sym2::identity()]);
        let sym = transfer_product(&h).unwrap();
        for z in default_z_grid::<f64>() {
            let a = sym.eval(z);
            let b = transfer_matrix_at(&h, 0.0, z).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a[i][j] - b[i][j]).norm() < 1e-12 * (1.0 + b[i][j].norm()));
                }
            }
        }
    }
}
