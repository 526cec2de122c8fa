use crate::error::{Error, Result};
use crate::linalg::{Definiteness, Sym2};
use crate::poly::lattice;
use crate::scalar::Real;

/// Tolerance on `|det H_n - 1|` used when a sequence is consumed.
pub const UNIMODULAR_TOL: f64 = 1e-9;

/// `floor`, or `16·ε·kappa` when that is larger.
pub fn widen_tol<T: Real>(floor: T, kappa: T) -> T {
    floor.max(T::lit(16.0) * T::epsilon() * kappa)
}

/// Locally constant Hamiltonian: block `H_n` acts on `t ∈ [r(n-1)/2, rn/2)`,
/// so the pieces tile `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSeq<T> {
    d: usize,
    big_l: usize,
    r: usize,
    blocks: Vec<Sym2<T>>,
}

impl<T: Real> HamiltonianSeq<T> {
    pub fn new(blocks: Vec<Sym2<T>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidInput("at least one block required".into()));
        }
        for h in &blocks {
            if ![h.alpha, h.beta, h.gamma].iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidInput("non-finite block entry".into()));
            }
        }
        let d = blocks.len();
        let (big_l, r) = lattice(d);
        Ok(HamiltonianSeq { d, big_l, r, blocks })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn half_length(&self) -> usize {
        self.big_l
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[Sym2<T>] {
        &self.blocks
    }

    /// Block `H_n`, 1-based.
    pub fn block(&self, n: usize) -> &Sym2<T> {
        &self.blocks[n - 1]
    }

    /// Left endpoint `r(n-1)/2` of piece `n`.
    pub fn piece_start(&self, n: usize) -> T {
        T::from_usize(self.r * (n - 1)).unwrap() * T::lit(0.5)
    }

    pub fn piece_end(&self, n: usize) -> T {
        self.piece_start(n + 1)
    }

    /// Piece containing `t`; the right end `t = L` belongs to piece `d`.
    pub fn piece_of(&self, t: T) -> Result<usize> {
        let l = T::from_usize(self.big_l).unwrap();
        if !(t >= T::zero() && t <= l) {
            return Err(Error::InvalidInput(format!(
                "t = {t} outside [0, {}]",
                self.big_l
            )));
        }
        let step = T::from_usize(self.r).unwrap() * T::lit(0.5);
        let k = (t / step).floor().to_usize().unwrap_or(0);
        Ok((k + 1).min(self.d))
    }

    /// Joint positions `0, r/2, ..., L`.
    pub fn joints(&self) -> Vec<T> {
        (1..=self.d + 1).map(|n| self.piece_start(n)).collect()
    }

    pub fn max_det_defect(&self) -> T {
        self.blocks
            .iter()
            .fold(T::zero(), |m, h| m.max((h.det() - T::one()).abs()))
    }

    /// `max_n ‖H_n‖∞²`. A unimodular block has eigenvalues `λ, 1/λ`, so this
    /// tracks its condition number `λ²`.
    pub fn condition(&self) -> T {
        self.blocks
            .iter()
            .fold(T::one(), |m, h| m.max(h.norm_inf() * h.norm_inf()))
    }

    /// `floor`, or the rounding level `16·ε·κ` when that is larger.
    pub fn conditioned_tol(&self, floor: T) -> T {
        widen_tol(floor, self.condition())
    }

    /// Largest [`Sym2::unimodular_defect`] over the blocks.
    pub fn max_unimodular_defect(&self) -> T {
        self.blocks
            .iter()
            .fold(T::zero(), |m, h| m.max(h.unimodular_defect()))
    }

    /// Scale-aware check, see [`Sym2::unimodular_defect`].
    pub fn check_unimodular(&self, tol: T) -> Result<()> {
        for h in &self.blocks {
            if h.unimodular_defect() > tol {
                return Err(Error::NotUnimodular { det: h.det().as_f64() });
            }
        }
        Ok(())
    }

    /// Per-block definiteness. A unimodular block has eigenvalues `λ, 1/λ`
    /// and `αγ = 1 + β² ≥ 1`, so the sign of `α` settles it even when `λ` is
    /// so large that the small eigenvalue drowns in rounding. Blocks failing
    /// the unimodular check go through the eigenvalue classifier.
    pub fn definiteness(&self, tol: T) -> Vec<Definiteness> {
        self.blocks
            .iter()
            .map(|h| {
                if h.unimodular_defect() <= T::lit(UNIMODULAR_TOL) {
                    if h.alpha > T::zero() {
                        Definiteness::PosDef
                    } else {
                        Definiteness::NegDef
                    }
                } else {
                    h.classify(tol)
                }
            })
            .collect()
    }
}
