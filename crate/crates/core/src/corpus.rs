//! Seeded generators for random test material.
//!
//! Every instance draws from its own ChaCha stream keyed by `(seed, index)`,
//! so instance `k` is the same whether a sweep runs serially or in parallel.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::hamiltonian::HamiltonianSeq;
use crate::linalg::Sym2;
use crate::poly::{CoeffSeq, Poly};
use crate::schur_cohn::{schur_cohn_sequence_coeffs, SchurCohnSeq};
use crate::scalar::{cx, Real};

/// Threshold `|D_n| > CORPUS_DN_THRESHOLD · ‖a‖₂^{2n}` for accepted sequences.
pub const CORPUS_DN_THRESHOLD: f64 = 1e-6;

/// Minimum distance of generated roots from the unit circle.
pub const ROOT_MARGIN: f64 = 0.05;

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_normal<T: Real, R: Rng>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    cx(T::lit(re), T::lit(im))
}

/// Polynomial of degree `d` whose roots sit at least `margin` away from the
/// unit circle: each root is inside with probability ½, radius uniform in
/// `[0.05, 1 - margin]` or `[1 + margin, 2.5]`, angle uniform.
pub fn random_poly_off_circle<T: Real, R: Rng>(rng: &mut R, d: usize, margin: f64) -> Result<Poly<T>> {
    let roots: Vec<Complex<T>> = (0..d)
        .map(|_| {
            let radius = if rng.random_bool(0.5) {
                rng.random_range(0.05..(1.0 - margin))
            } else {
                rng.random_range((1.0 + margin)..2.5)
            };
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let z = Complex::from_polar(radius, theta);
            cx(T::lit(z.re), T::lit(z.im))
        })
        .collect();
    let lead_angle = rng.random_range(0.0..std::f64::consts::TAU);
    let lead = Complex::from_polar(1.0, lead_angle);
    Poly::from_roots(&roots, cx(T::lit(lead.re), T::lit(lead.im)))
}

/// Polynomial with i.i.d. complex normal coefficients (no conditioning).
pub fn gaussian_poly<T: Real, R: Rng>(rng: &mut R, d: usize) -> Result<Poly<T>> {
    loop {
        let c: Vec<Complex<T>> = (0..=d).map(|_| complex_normal(rng)).collect();
        if let Ok(f) = Poly::new(c) {
            if f.degree() == d {
                return Ok(f);
            }
        }
    }
}

/// An accepted corpus sequence with its determinant data.
#[derive(Debug, Clone)]
pub struct GaussianCase<T> {
    pub seq: CoeffSeq<T>,
    pub dets: SchurCohnSeq<T>,
    /// Draws needed, including the accepted one.
    pub attempts: usize,
}

/// I.i.d. complex normal `𝒞`, resampled until every `|D_n|` clears
/// `threshold · ‖a‖₂^{2n}`.
pub fn gaussian_seq<T: Real, R: Rng>(rng: &mut R, d: usize, threshold: f64) -> Result<GaussianCase<T>> {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let c: Vec<Complex<T>> = (0..=d).map(|_| complex_normal(rng)).collect();
        let Ok(seq) = CoeffSeq::new(c, true) else {
            continue;
        };
        let dets = schur_cohn_sequence_coeffs(seq.values(), T::lit(threshold))?;
        if !dets.is_degenerate() {
            return Ok(GaussianCase { seq, dets, attempts });
        }
    }
}

/// Unimodular block `±R(θ)·diag(λ, 1/λ)·R(θ)ᵀ` with `λ ∈ [0.5, 2]`.
pub fn random_block<T: Real, R: Rng>(rng: &mut R) -> Sym2<T> {
    let lambda: f64 = rng.random_range(0.5..2.0);
    let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let (s, c) = theta.sin_cos();
    let mu = lambda.recip();
    let alpha = lambda * c * c + mu * s * s;
    let beta = (lambda - mu) * c * s;
    let gamma = lambda * s * s + mu * c * c;
    Sym2::new(T::lit(sign * alpha), T::lit(sign * beta), T::lit(sign * gamma))
}

pub fn random_hamiltonian<T: Real, R: Rng>(rng: &mut R, d: usize) -> Result<HamiltonianSeq<T>> {
    HamiltonianSeq::new((0..d).map(|_| random_block(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{find_roots, RootOptions};

    #[test]
    fn streams_are_reproducible() {
        let a: Poly<f64> = random_poly_off_circle(&mut instance_rng(7, 3), 5, ROOT_MARGIN).unwrap();
        let b: Poly<f64> = random_poly_off_circle(&mut instance_rng(7, 3), 5, ROOT_MARGIN).unwrap();
        let c: Poly<f64> = random_poly_off_circle(&mut instance_rng(7, 4), 5, ROOT_MARGIN).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn roots_respect_margin() {
        let mut rng = instance_rng(1, 0);
        for d in 1..=8 {
            let f: Poly<f64> = random_poly_off_circle(&mut rng, d, ROOT_MARGIN).unwrap();
            let rep = find_roots(&f, &RootOptions::default()).unwrap();
            assert!(rep.min_circle_distance > 0.049, "{}", rep.min_circle_distance);
        }
    }

    #[test]
    fn blocks_are_unimodular() {
        let mut rng = instance_rng(2, 0);
        for _ in 0..50 {
            let h: Sym2<f64> = random_block(&mut rng);
            assert!((h.det() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_cases_pass_gate() {
        let mut rng = instance_rng(3, 0);
        let case: GaussianCase<f64> = gaussian_seq(&mut rng, 6, CORPUS_DN_THRESHOLD).unwrap();
        assert!(case.attempts >= 1);
        assert_eq!(case.dets.d_values.len(), 7);
    }
}
