//! Complex polynomials, the coefficient-sequence bridge to exponential
//! polynomials, and an Aberth–Ehrlich root finder used as an independent
//! oracle for root counts.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

/// Dense complex polynomial `a_0 + a_1 x + ... + a_d x^d`, ascending powers.
///
/// Trailing (highest-power) exact zeros are trimmed, so `a_d != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<Complex<T>>,
}

fn is_zero<T: Real>(z: &Complex<T>) -> bool {
    z.re == T::zero() && z.im == T::zero()
}

impl<T: Real> Poly<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Result<Self> {
        while coeffs.last().is_some_and(is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| creal(x)).collect())
    }

    /// Monic polynomial `∏ (x - ρ)` times `lead`.
    pub fn from_roots(roots: &[Complex<T>], lead: Complex<T>) -> Result<Self> {
        let mut c = vec![lead];
        for &rho in roots {
            let mut next = vec![Complex::new(T::zero(), T::zero()); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] = next[k + 1] + ck;
                next[k] = next[k] - ck * rho;
            }
            c = next;
        }
        Self::new(c)
    }

    /// `x^d`.
    pub fn monomial(d: usize) -> Self {
        let mut c = vec![Complex::new(T::zero(), T::zero()); d + 1];
        c[d] = creal(T::one());
        Self { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &a| acc * x + a)
    }

    pub fn derivative(&self) -> Vec<Complex<T>> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &a)| a * T::from_usize(k).unwrap())
            .collect()
    }

    pub fn l1_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |s, z| s + z.norm())
    }

    pub fn l2_norm(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |s, z| s + z.norm_sqr())
            .sqrt()
    }

    pub fn scale(&self, s: Complex<T>) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    /// `f^♯(x) = x^d · f̄(1/x)` with `f̄` the coefficient-conjugated polynomial,
    /// i.e. coefficients `conj(a_{d-k})`.
    /// The degree drops when `a_0 = 0`.
    pub fn sharp(&self) -> Self {
        let c = self.coeffs.iter().rev().map(|z| z.conj()).collect();
        Self::new(c).expect("nonzero polynomial has nonzero reversal")
    }

    /// Largest coefficient discrepancy relative to the largest coefficient of
    /// `self`. Polynomials of different degree compare with zero padding.
    pub fn max_rel_coeff_diff(&self, other: &Poly<T>) -> T {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(T::zero(), T::zero());
        let scale = crate::scalar::max_abs(&self.coeffs);
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = other.coeffs.get(k).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(T::zero(), T::max)
            / scale
    }

    /// Same as [`max_rel_coeff_diff`](Self::max_rel_coeff_diff) after
    /// rescaling `other` by the least-squares complex factor that best
    /// matches `self`.
    pub fn max_rel_coeff_diff_up_to_scale(&self, other: &Poly<T>) -> T {
        let zero = Complex::new(T::zero(), T::zero());
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Complex<T>], k: usize| v.get(k).copied().unwrap_or(zero);
        let (num, den) = (0..n).fold((zero, T::zero()), |(num, den), k| {
            let b = get(&other.coeffs, k);
            (num + b.conj() * get(&self.coeffs, k), den + b.norm_sqr())
        });
        if den == T::zero() {
            return T::infinity();
        }
        let lambda = num / den;
        let scaled: Vec<Complex<T>> = (0..n).map(|k| get(&other.coeffs, k) * lambda).collect();
        match Poly::new(scaled) {
            Ok(p) => self.max_rel_coeff_diff(&p),
            Err(_) => T::infinity(),
        }
    }
}

/// `(L, r)`: `(d/2, 1)` for even `d`, `(d, 2)` for odd `d`; always `2L = r d`.
pub fn lattice(d: usize) -> (usize, usize) {
    if d % 2 == 0 {
        (d / 2, 1)
    } else {
        (d, 2)
    }
}

/// Coefficient sequence `(C_L, C_{L-r}, ..., C_{-L})` of an exponential
/// polynomial `Σ_j C_{L-rj} e^{i(L-rj)z}`.
///
/// `c[j]` holds `C_{L-rj}`, which is also the coefficient `a_j` of the
/// associated polynomial `f_C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq<T> {
    d: usize,
    big_l: usize,
    r: usize,
    c: Vec<Complex<T>>,
}

impl<T: Real> CoeffSeq<T> {
    /// With `strict`, both end coefficients must be nonzero (required by
    /// the Hamiltonian constructions).
    pub fn new(c: Vec<Complex<T>>, strict: bool) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "coefficient sequence needs length d+1 >= 2, got {}",
                c.len()
            )));
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let d = c.len() - 1;
        if strict && (is_zero(&c[0]) || is_zero(&c[d])) {
            return Err(Error::ZeroEndCoefficient);
        }
        if c.iter().all(is_zero) {
            return Err(Error::ZeroPolynomial);
        }
        let (big_l, r) = lattice(d);
        Ok(Self { d, big_l, r, c })
    }

    pub fn from_real(c: &[T], strict: bool) -> Result<Self> {
        Self::new(c.iter().map(|&x| creal(x)).collect(), strict)
    }

    /// `a_k = C_{L-rk}`.
    pub fn from_poly(f: &Poly<T>, strict: bool) -> Result<Self> {
        Self::new(f.coeffs().to_vec(), strict)
    }

    pub fn to_poly(&self) -> Result<Poly<T>> {
        if is_zero(&self.c[self.d]) {
            return Err(Error::ZeroEndCoefficient);
        }
        Poly::new(self.c.clone())
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `L`.
    pub fn half_length(&self) -> usize {
        self.big_l
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.c
    }

    /// `C_L`.
    pub fn c_top(&self) -> Complex<T> {
        self.c[0]
    }

    /// `C_{-L}`.
    pub fn c_bottom(&self) -> Complex<T> {
        self.c[self.d]
    }

    /// Coefficient `C_k` at frequency `k`, zero off the lattice.
    pub fn coeff_at(&self, k: i64) -> Complex<T> {
        let top = self.big_l as i64;
        let r = self.r as i64;
        let off = top - k;
        if off < 0 || off % r != 0 || off / r > self.d as i64 {
            Complex::new(T::zero(), T::zero())
        } else {
            self.c[(off / r) as usize]
        }
    }

    /// `E_C(0) = Σ C_k`.
    pub fn e_at_zero(&self) -> Complex<T> {
        self.c
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |s, &z| s + z)
    }

    /// Rescales so that `E_C(0) = 1`, i.e. boundary `(A, B) = (1, 0)`.
    pub fn normalized(&self) -> Result<Self> {
        let e0 = self.e_at_zero();
        if e0.norm() == T::zero() {
            return Err(Error::DegenerateSpectrum("E(0) = 0, cannot normalize".into()));
        }
        let s = e0.inv();
        Self::new(self.c.iter().map(|&z| z * s).collect(), false)
    }
}

pub fn poly_to_seq<T: Real>(f: &Poly<T>, strict: bool) -> Result<CoeffSeq<T>> {
    CoeffSeq::from_poly(f, strict)
}

pub fn seq_to_poly<T: Real>(seq: &CoeffSeq<T>) -> Result<Poly<T>> {
    seq.to_poly()
}

/// Settings for [`find_roots`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Relative residual tolerance.
    pub tol: T,
    pub max_iter: usize,
    /// Roots with `||ρ| - 1| <= tol_circle` make the count ambiguous.
    pub tol_circle: T,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-12),
            max_iter: 500,
            tol_circle: T::lit(1e-7),
        }
    }
}

/// Root list with unit-circle counts.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport<T> {
    pub roots: Vec<Complex<T>>,
    pub inside: usize,
    pub outside: usize,
    /// Roots inside the guard band around `|z| = 1`.
    pub on_circle: usize,
    pub min_circle_distance: T,
}

impl<T: Real> RootReport<T> {
    pub fn on_circle_ambiguous(&self) -> bool {
        self.on_circle > 0
    }
}

fn scaled_residual<T: Real>(f: &Poly<T>, rho: Complex<T>, l1: T) -> T {
    let d = f.degree() as i32;
    f.eval(rho).norm() / (l1 * rho.norm().max(T::one()).powi(d))
}

/// Aberth–Ehrlich simultaneous iteration.
///
/// Exact zero roots (vanishing low coefficients) are split off first. The
/// rest start on a circle of radius `|a_0/a_d|^{1/d}` at equal angles
/// offset by 0.3 rad.
pub fn find_roots<T: Real>(f: &Poly<T>, opts: &RootOptions<T>) -> Result<RootReport<T>> {
    let d = f.degree();
    if d == 0 {
        return Err(Error::InvalidInput("degree-0 polynomial has no roots".into()));
    }
    let zeros_at_origin = f.coeffs().iter().take_while(|z| is_zero(z)).count();
    let reduced = Poly::new(f.coeffs()[zeros_at_origin..].to_vec())?;
    let mut roots = vec![Complex::new(T::zero(), T::zero()); zeros_at_origin];
    roots.extend(aberth(&reduced, opts)?);

    let l1 = f.l1_norm();
    let worst = roots
        .iter()
        .map(|&r| scaled_residual(f, r, l1))
        .fold(T::zero(), T::max);
    if !(worst <= opts.tol) {
        return Err(Error::NoConvergence {
            worst_residual: worst.as_f64(),
        });
    }

    let (mut inside, mut outside, mut on_circle) = (0, 0, 0);
    let mut min_dist = T::infinity();
    for r in &roots {
        let dist = (r.norm() - T::one()).abs();
        min_dist = min_dist.min(dist);
        if dist <= opts.tol_circle {
            on_circle += 1;
        } else if r.norm() < T::one() {
            inside += 1;
        } else {
            outside += 1;
        }
    }
    Ok(RootReport {
        roots,
        inside,
        outside,
        on_circle,
        min_circle_distance: min_dist,
    })
}

fn aberth<T: Real>(f: &Poly<T>, opts: &RootOptions<T>) -> Result<Vec<Complex<T>>> {
    let d = f.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = f.leading();
    let monic: Vec<Complex<T>> = f.coeffs().iter().map(|&a| a / lead).collect();
    let monic = Poly { coeffs: monic };
    if d == 1 {
        return Ok(vec![-monic.coeffs[0]]);
    }
    let deriv = Poly {
        coeffs: monic.derivative(),
    };
    let l1 = monic.l1_norm();

    let dt = T::from_usize(d).unwrap();
    let mut radius = monic.coeffs[0].norm().powf(dt.recip());
    if !(radius > T::zero()) || !radius.is_finite() {
        radius = T::one();
    }
    let offset = T::lit(0.3);
    let mut z: Vec<Complex<T>> = (0..d)
        .map(|k| {
            let theta = T::TAU() * T::from_usize(k).unwrap() / dt + offset;
            Complex::from_polar(radius, theta)
        })
        .collect();

    let mut polish = 0;
    for _ in 0..opts.max_iter {
        let mut max_step = T::zero();
        let updated: Vec<Complex<T>> = (0..d)
            .map(|k| {
                let fz = monic.eval(z[k]);
                if is_zero(&fz) {
                    return z[k];
                }
                let dfz = deriv.eval(z[k]);
                let repulsion = (0..d)
                    .filter(|&j| j != k)
                    .fold(Complex::new(T::zero(), T::zero()), |s, j| {
                        let diff = z[k] - z[j];
                        if is_zero(&diff) {
                            s
                        } else {
                            s + diff.inv()
                        }
                    });
                let ratio = if is_zero(&dfz) {
                    // stationary point: nudge off it
                    creal(radius.max(T::one()) * T::lit(1e-3))
                } else {
                    fz / dfz
                };
                let denom = creal(T::one()) - ratio * repulsion;
                let step = if is_zero(&denom) { ratio } else { ratio / denom };
                max_step = max_step.max(step.norm() / z[k].norm().max(T::one()));
                z[k] - step
            })
            .collect();
        z = updated;
        if z.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            break;
        }
        let converged = z
            .iter()
            .all(|&w| scaled_residual(&monic, w, l1) <= opts.tol);
        if converged && (max_step <= T::epsilon() * T::lit(64.0) || polish >= 3) {
            break;
        }
        if converged {
            polish += 1;
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn c(re: f64, im: f64) -> Complex<f64> {
        cx(re, im)
    }

    #[test]
    fn sharp_examples() {
        let x3 = Poly::<f64>::monomial(3);
        assert_eq!(x3.sharp(), Poly::from_real(&[1.0]).unwrap());

        let f = Poly::from_real(&[-0.8, -1.6, 1.0]).unwrap();
        assert_eq!(f.sharp(), Poly::from_real(&[1.0, -1.6, -0.8]).unwrap());

        let g = Poly::new(vec![c(2.0, 0.0), c(1.0, 1.0)]).unwrap();
        assert_eq!(g.sharp(), Poly::new(vec![c(1.0, -1.0), c(2.0, 0.0)]).unwrap());
    }

    #[test]
    fn seq_index_map() {
        let f = Poly::from_real(&[0.5, 1.0]).unwrap();
        let s = poly_to_seq(&f, true).unwrap();
        assert_eq!((s.half_length(), s.r()), (1, 2));
        assert_eq!(s.coeff_at(1), c(0.5, 0.0));
        assert_eq!(s.coeff_at(-1), c(1.0, 0.0));
        assert_eq!(s.coeff_at(0), c(0.0, 0.0));

        let f = Poly::from_real(&[-0.8, -1.6, 1.0]).unwrap();
        let s = poly_to_seq(&f, true).unwrap();
        assert_eq!((s.half_length(), s.r()), (1, 1));
        assert_eq!(
            [s.coeff_at(1), s.coeff_at(0), s.coeff_at(-1)],
            [c(-0.8, 0.0), c(-1.6, 0.0), c(1.0, 0.0)]
        );
        assert_eq!(seq_to_poly(&s).unwrap(), f);
    }

    #[test]
    fn strict_rejects_zero_end() {
        let f = Poly::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(poly_to_seq(&f, true).unwrap_err(), Error::ZeroEndCoefficient);
        assert!(poly_to_seq(&f, false).is_ok());
    }

    #[test]
    fn lattice_relation() {
        for d in 1..20 {
            let (l, r) = lattice(d);
            assert_eq!(2 * l, r * d);
        }
    }

    #[test]
    fn roots_double_zero() {
        let rep = find_roots(&Poly::<f64>::monomial(2), &RootOptions::default()).unwrap();
        assert_eq!((rep.inside, rep.outside), (2, 0));
    }

    #[test]
    fn roots_factored_quadratic() {
        let f = Poly::from_real(&[-0.8, -1.6, 1.0]).unwrap();
        let rep = find_roots(&f, &RootOptions::default()).unwrap();
        assert_eq!((rep.inside, rep.outside), (1, 1));
        let mut r: Vec<f64> = rep.roots.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 0.4).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn roots_linear() {
        let rho = Complex::from_polar(0.5, std::f64::consts::FRAC_PI_3);
        let f = Poly::new(vec![-rho, c(1.0, 0.0)]).unwrap();
        let rep = find_roots(&f, &RootOptions::default()).unwrap();
        assert_eq!(rep.inside, 1);
        assert!((rep.roots[0].norm() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn on_circle_flagged() {
        let f = Poly::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let rep = find_roots(&f, &RootOptions::default()).unwrap();
        assert!(rep.on_circle_ambiguous());
        assert_eq!(rep.on_circle, 2);
    }

    #[test]
    fn sharp_drops_degree_when_constant_vanishes() {
        let f = Poly::from_real(&[0.0, 2.0, 1.0]).unwrap();
        assert_eq!(f.sharp().degree(), 1);
    }

    #[test]
    fn normalized_sequence() {
        let s = CoeffSeq::new(vec![c(0.5, 1.0), c(2.0, -1.0)], true).unwrap();
        let n = s.normalized().unwrap();
        assert!((n.e_at_zero() - c(1.0, 0.0)).norm() < 1e-15);
    }
}
