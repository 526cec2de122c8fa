//! Polynomials and locally constant Hamiltonians.
//!
//! A complex polynomial `f` of degree `d` with nonvanishing end coefficients
//! corresponds to an exponential polynomial `E(z)` and, when its Schur–Cohn
//! determinants `D_1..D_d` are nonzero, to `d` real symmetric unimodular 2x2
//! blocks `H_1..H_d`. The signs of the blocks count the roots of `f` inside
//! the unit circle. This crate computes both directions of that
//! correspondence and the checks that tie them together:
//!
//! * [`schur_cohn`]: `D_n`, root count from sign changes.
//! * [`inverse`]: `𝒞 → (H_n)` by two independent constructions.
//! * [`direct`]: `(H_n), (A, B) → E(0, z) → f`, degeneracy classes, ODE checks.
//! * [`poly::find_roots`]: an Aberth root finder used as an independent oracle.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`, which is what the tolerances are tuned for.

pub mod corpus;
pub mod direct;
pub mod error;
pub mod exppoly;
pub mod formats;
pub mod hamiltonian;
pub mod inverse;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod schur_cohn;

pub use direct::{
    degeneracy_test, extract_poly, extract_seq, ode_residual, signature_count, solve_direct,
    transfer_block, transfer_matrix_at, transfer_product, DegeneracyClass, DegeneracyReport,
    ExpMat2, PiecewiseSolution, SignatureCount,
};
pub use error::{Error, Result};
pub use exppoly::{ABPair, ExpPoly};
pub use hamiltonian::HamiltonianSeq;
pub use inverse::{
    check_scaled_positivity, cramer_identity, hamiltonian_inductive, hamiltonian_linear,
    hamiltonian_linear_detailed, product_identity, solve_level, solve_level_system, IdentitySides,
    InductivePath, InverseOptions, LevelSolution, LinearPath, OmegaState, PositivityReport,
    SelectionMode,
};
pub use linalg::{sym2_classify, CMatrix, Definiteness, Lu, Mat2, Sym2};
pub use poly::{find_roots, lattice, poly_to_seq, seq_to_poly, CoeffSeq, Poly, RootOptions, RootReport};
pub use scalar::Real;
pub use schur_cohn::{
    build_l, count_inside, schur_cohn_sequence, schur_cohn_sequence_coeffs, RootCount, SchurCohnSeq,
    Sign,
};

pub type C64 = num_complex::Complex<f64>;
pub type Poly64 = Poly<f64>;
pub type CoeffSeq64 = CoeffSeq<f64>;
pub type ExpPoly64 = ExpPoly<f64>;
pub type Sym2f64 = Sym2<f64>;
pub type HamiltonianSeq64 = HamiltonianSeq<f64>;
pub type PiecewiseSolution64 = PiecewiseSolution<f64>;
pub type Poly32 = Poly<f32>;
pub type HamiltonianSeq32 = HamiltonianSeq<f32>;
