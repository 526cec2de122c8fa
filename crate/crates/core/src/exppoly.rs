//! Finite exponential sums `Σ c_m e^{i m z / 2}` on the half-step frequency
//! lattice.
//!
//! Indexing frequencies in half-steps lets both lattice parities (`r = 1` and
//! `r = 2`) live in one integer-indexed ring. Zero coefficients are pruned
//! exactly; numerical noise is kept so that cancellation can be inspected by
//! the caller, and [`ExpPoly::clean`] prunes it explicitly when wanted.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::poly::CoeffSeq;
use crate::scalar::{creal, cx, imag_unit, Real};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpPoly<T> {
    coeffs: BTreeMap<i64, Complex<T>>,
}

impl<T: Real> ExpPoly<T> {
    pub fn zero() -> Self {
        ExpPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::term(0, c)
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(T::one(), T::zero()))
    }

    /// `c · e^{i m z / 2}`.
    pub fn term(m: i64, c: Complex<T>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Complex<T>)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// `E(z) = Σ_j C_{L-rj} e^{i(L-rj)z}`, stored at half-step `2(L - rj)`.
    pub fn from_seq(seq: &CoeffSeq<T>) -> Self {
        let l = seq.half_length() as i64;
        let r = seq.r() as i64;
        Self::from_terms(
            seq.values()
                .iter()
                .enumerate()
                .map(|(j, &c)| (2 * (l - r * j as i64), c)),
        )
    }

    /// `cos(m z / 2)`.
    pub fn cos_half(m: i64) -> Self {
        let h = creal(T::lit(0.5));
        Self::term(m, h) + Self::term(-m, h)
    }

    /// `sin(m z / 2) = -(i/2)(e^{imz/2} - e^{-imz/2})`.
    pub fn sin_half(m: i64) -> Self {
        let h = cx(T::zero(), T::lit(-0.5));
        Self::term(m, h) + Self::term(-m, -h)
    }

    fn add_term(&mut self, m: i64, c: Complex<T>) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_insert_with(Complex::zero);
        *slot = *slot + c;
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, m: i64) -> Complex<T> {
        self.coeffs.get(&m).copied().unwrap_or_else(Complex::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.coeffs.iter().map(|(&m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sorted half-step indices carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn min_freq(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_freq(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_terms(self.iter().map(|(m, c)| (m, c * s)))
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(creal(s))
    }

    /// Multiply by `e^{i k z / 2}`.
    pub fn shift(&self, k: i64) -> Self {
        ExpPoly {
            coeffs: self.coeffs.iter().map(|(&m, &c)| (m + k, c)).collect(),
        }
    }

    /// `E^♯(z) = conj(E(conj z))`: `c_m ↦ conj(c_{-m})`.
    pub fn sharp(&self) -> Self {
        ExpPoly {
            coeffs: self.coeffs.iter().map(|(&m, &c)| (-m, c.conj())).collect(),
        }
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let half = T::lit(0.5);
        self.iter().fold(Complex::zero(), |acc, (m, c)| {
            let phase = imag_unit::<T>() * z * T::from_i64(m).unwrap() * half;
            acc + c * phase.exp()
        })
    }

    pub fn l1_norm(&self) -> T {
        self.coeffs.values().fold(T::zero(), |s, c| s + c.norm())
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.values().fold(T::zero(), |s, c| s.max(c.norm()))
    }

    /// Drop terms with `|c_m| <= tol · ‖coeffs‖₁`.
    pub fn clean(&self, tol: T) -> Self {
        let cut = tol * self.l1_norm();
        ExpPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > cut)
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    /// Largest `|c_{-m} - conj(c_m)|` relative to `‖coeffs‖₁`; zero for a
    /// function that is real on the real axis.
    pub fn real_symmetry_defect(&self) -> T {
        let diff = self - &self.sharp();
        let norm = self.l1_norm();
        if norm.is_zero() {
            T::zero()
        } else {
            diff.max_abs() / norm
        }
    }

    pub fn is_real_symmetric(&self, tol: T) -> bool {
        self.real_symmetry_defect() <= tol
    }

    /// `A = (E + E^♯)/2`, `B = (i/2)(E - E^♯)`.
    pub fn ab_split(&self) -> ABPair<T> {
        let sharp = self.sharp();
        let half = T::lit(0.5);
        let a = (self + &sharp).scale_real(half);
        let b = (self - &sharp).scale(cx(T::zero(), half));
        ABPair { a, b }
    }

    /// Largest coefficient difference relative to the larger ℓ1 norm.
    pub fn max_rel_diff(&self, other: &Self) -> T {
        let scale = self.l1_norm().max(other.l1_norm()).max(T::min_positive_value());
        (self - other).max_abs() / scale
    }
}

/// The real-symmetric pair with `E = A - iB` and `E^♯ = A + iB`.
#[derive(Debug, Clone, PartialEq)]
pub struct ABPair<T> {
    pub a: ExpPoly<T>,
    pub b: ExpPoly<T>,
}

impl<T: Real> ABPair<T> {
    pub fn e(&self) -> ExpPoly<T> {
        &self.a - &self.b.scale(imag_unit())
    }

    pub fn e_sharp(&self) -> ExpPoly<T> {
        &self.a + &self.b.scale(imag_unit())
    }
}

impl<'a, T: Real> Add<&'a ExpPoly<T>> for &'a ExpPoly<T> {
    type Output = ExpPoly<T>;
    fn add(self, rhs: &'a ExpPoly<T>) -> ExpPoly<T> {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m, c);
        }
        out
    }
}

impl<'a, T: Real> Sub<&'a ExpPoly<T>> for &'a ExpPoly<T> {
    type Output = ExpPoly<T>;
    fn sub(self, rhs: &'a ExpPoly<T>) -> ExpPoly<T> {
        let mut out = self.clone();
        for (m, c) in rhs.iter() {
            out.add_term(m, -c);
        }
        out
    }
}

impl<'a, T: Real> Mul<&'a ExpPoly<T>> for &'a ExpPoly<T> {
    type Output = ExpPoly<T>;
    fn mul(self, rhs: &'a ExpPoly<T>) -> ExpPoly<T> {
        let mut out = ExpPoly::zero();
        for (m1, c1) in self.iter() {
            for (m2, c2) in rhs.iter() {
                out.add_term(m1 + m2, c1 * c2);
            }
        }
        out
    }
}

impl<T: Real> Neg for &ExpPoly<T> {
    type Output = ExpPoly<T>;
    fn neg(self) -> ExpPoly<T> {
        self.scale_real(-T::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<T: Real> $tr<ExpPoly<T>> for ExpPoly<T> {
            type Output = ExpPoly<T>;
            fn $f(self, rhs: ExpPoly<T>) -> ExpPoly<T> {
                (&self).$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Real> Neg for ExpPoly<T> {
    type Output = ExpPoly<T>;
    fn neg(self) -> ExpPoly<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn from_seq_odd_and_even() {
        let s1 = CoeffSeq::from_real(&[0.5, 1.0], true).unwrap();
        let e1 = ExpPoly::from_seq(&s1);
        assert_eq!(e1, ExpPoly::from_terms([(2, c(0.5, 0.0)), (-2, c(1.0, 0.0))]));

        let s2 = CoeffSeq::from_real(&[-0.8, -1.6, 1.0], true).unwrap();
        let e2 = ExpPoly::from_seq(&s2);
        assert_eq!(e2.support(), vec![-2, 0, 2]);
        assert_eq!(e2.get(2), c(-0.8, 0.0));
        assert_eq!(e2.get(0), c(-1.6, 0.0));
        assert_eq!(e2.get(-2), c(1.0, 0.0));
    }

    #[test]
    fn from_seq_single_term() {
        let s = CoeffSeq::from_real(&[1.0, 0.0, 0.0, 0.0], false).unwrap();
        let e = ExpPoly::from_seq(&s);
        // d = 3: L = 3, stored at half-step 6.
        assert_eq!(e, ExpPoly::term(6, c(1.0, 0.0)));
    }

    #[test]
    fn ab_split_example() {
        let e = ExpPoly::from_terms([(2, c(0.5, 0.0)), (-2, c(1.0, 0.0))]);
        let ab = e.ab_split();
        assert_eq!(ab.a, ExpPoly::from_terms([(2, c(0.75, 0.0)), (-2, c(0.75, 0.0))]));
        // B = 0.5 sin z
        let expect_b = ExpPoly::sin_half(2).scale_real(0.5);
        assert!(ab.b.max_rel_diff(&expect_b) < 1e-16);
        assert_eq!(ab.e(), e);
        assert_eq!(ab.e_sharp(), e.sharp());
        for z in [c(0.3, 0.0), c(-1.2, 0.0), c(2.0, 0.0)] {
            assert!((ab.a.eval(z).re - 1.5 * z.re.cos()).abs() < 1e-14);
            assert!((ab.b.eval(z).re - 0.5 * z.re.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn ab_split_of_symmetric() {
        let e = ExpPoly::cos_half(2).scale_real(3.0);
        let ab = e.ab_split();
        assert_eq!(ab.a, e);
        assert!(ab.b.is_zero());
    }

    #[test]
    fn eval_basics() {
        assert_eq!(ExpPoly::term(2, c(1.0, 0.0)).eval(c(0.0, 0.0)), c(1.0, 0.0));
        let p = ExpPoly::term(1, c(1.0, 0.0)) * ExpPoly::term(-1, c(1.0, 0.0));
        assert_eq!(p, ExpPoly::one());
    }

    #[test]
    fn pythagoras_is_exact() {
        let cs = ExpPoly::<f64>::cos_half(1);
        let sn = ExpPoly::<f64>::sin_half(1);
        let s = &(&cs * &cs) + &(&sn * &sn);
        assert_eq!(s, ExpPoly::one());
    }

    #[test]
    fn convolution_example() {
        let e = ExpPoly::from_terms([(2, c(0.5, 0.0)), (-2, c(1.0, 0.0))]);
        let p = &e * &ExpPoly::term(2, c(2.0, 0.0));
        assert_eq!(p, ExpPoly::from_terms([(4, c(1.0, 0.0)), (0, c(2.0, 0.0))]));
    }

    #[test]
    fn clean_prunes_noise() {
        let p = ExpPoly::from_terms([(0, c(1.0, 0.0)), (4, c(1e-17, 0.0))]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.clean(1e-12), ExpPoly::one());
    }

    fn arb_exppoly() -> impl Strategy<Value = ExpPoly<f64>> {
        prop::collection::vec((-6i64..=6, -2.0f64..2.0, -2.0f64..2.0), 1..6)
            .prop_map(|v| ExpPoly::from_terms(v.into_iter().map(|(m, re, im)| (m, c(re, im)))))
    }

    proptest! {
        #[test]
        fn mul_is_pointwise(p in arb_exppoly(), q in arb_exppoly(),
                            zs in prop::collection::vec((-2.0f64..2.0, -1.0f64..1.0), 20)) {
            let pq = &p * &q;
            for (re, im) in zs {
                let z = c(re, im);
                let lhs = pq.eval(z);
                let rhs = p.eval(z) * q.eval(z);
                let scale = 1.0 + p.l1_norm() * q.l1_norm() * (im.abs() * 3.0).exp();
                prop_assert!((lhs - rhs).norm() <= 1e-10 * scale);
            }
        }

        #[test]
        fn ab_split_is_real_symmetric(e in arb_exppoly(), xs in prop::collection::vec(-4.0f64..4.0, 8)) {
            let ab = e.ab_split();
            prop_assert!(ab.a.is_real_symmetric(1e-15));
            prop_assert!(ab.b.is_real_symmetric(1e-15));
            prop_assert!(ab.e().max_rel_diff(&e) <= 1e-15);
            for x in xs {
                let z = c(x, 0.0);
                prop_assert!(ab.a.eval(z).im.abs() <= 1e-10 * (1.0 + ab.a.l1_norm()));
                prop_assert!(ab.b.eval(z).im.abs() <= 1e-10 * (1.0 + ab.b.l1_norm()));
            }
        }
    }
}
