//! JSON interchange shapes. Complex numbers are `[re, im]` pairs everywhere.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::hamiltonian::HamiltonianSeq;
use crate::linalg::Sym2;
use crate::poly::{CoeffSeq, Poly};
use crate::scalar::{cx, Real};

pub type Pair = [f64; 2];

pub fn to_pair<T: Real>(z: Complex<T>) -> Pair {
    [z.re.as_f64(), z.im.as_f64()]
}

pub fn from_pair<T: Real>(p: Pair) -> Complex<T> {
    cx(T::lit(p[0]), T::lit(p[1]))
}

/// `{"coeffs": [[re, im], ...]}`, ascending powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub coeffs: Vec<Pair>,
}

impl PolyJson {
    pub fn from_poly<T: Real>(f: &Poly<T>) -> Self {
        PolyJson {
            coeffs: f.coeffs().iter().map(|&z| to_pair(z)).collect(),
        }
    }

    pub fn to_poly<T: Real>(&self) -> Result<Poly<T>> {
        Poly::new(self.coeffs.iter().map(|&p| from_pair(p)).collect())
    }
}

/// `{"c": [[re, im], ...]}` listing `C_L, C_{L-r}, ..., C_{-L}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeqJson {
    pub c: Vec<Pair>,
}

impl SeqJson {
    pub fn from_seq<T: Real>(s: &CoeffSeq<T>) -> Self {
        SeqJson {
            c: s.values().iter().map(|&z| to_pair(z)).collect(),
        }
    }

    pub fn to_seq<T: Real>(&self, strict: bool) -> Result<CoeffSeq<T>> {
        CoeffSeq::new(self.c.iter().map(|&p| from_pair(p)).collect(), strict)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// `{"d": d, "r": r, "blocks": [{"alpha", "beta", "gamma"}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianJson {
    pub d: usize,
    pub r: usize,
    pub blocks: Vec<BlockJson>,
}

impl HamiltonianJson {
    pub fn from_seq<T: Real>(h: &HamiltonianSeq<T>) -> Self {
        HamiltonianJson {
            d: h.degree(),
            r: h.r(),
            blocks: h
                .blocks()
                .iter()
                .map(|b| BlockJson {
                    alpha: b.alpha.as_f64(),
                    beta: b.beta.as_f64(),
                    gamma: b.gamma.as_f64(),
                })
                .collect(),
        }
    }

    /// Rebuilds the sequence, checking that `d` and `r` agree with the blocks.
    pub fn to_seq<T: Real>(&self) -> Result<HamiltonianSeq<T>> {
        let seq = HamiltonianSeq::new(
            self.blocks
                .iter()
                .map(|b| Sym2::new(T::lit(b.alpha), T::lit(b.beta), T::lit(b.gamma)))
                .collect(),
        )?;
        if seq.degree() != self.d || seq.r() != self.r {
            return Err(Error::InvalidInput(format!(
                "header (d={}, r={}) disagrees with {} blocks (r={})",
                self.d,
                self.r,
                seq.degree(),
                seq.r()
            )));
        }
        Ok(seq)
    }
}

/// `{"half_step_coeffs": {"m": [re, im], ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpPolyJson {
    pub half_step_coeffs: BTreeMap<String, Pair>,
}

impl ExpPolyJson {
    pub fn from_exppoly<T: Real>(p: &ExpPoly<T>) -> Self {
        // JSON keys are strings; their (lexicographic) order is deterministic.
        ExpPolyJson {
            half_step_coeffs: p.iter().map(|(m, c)| (m.to_string(), to_pair(c))).collect(),
        }
    }

    pub fn to_exppoly<T: Real>(&self) -> Result<ExpPoly<T>> {
        let mut terms = Vec::with_capacity(self.half_step_coeffs.len());
        for (k, &v) in &self.half_step_coeffs {
            let m: i64 = k
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad frequency key {k:?}")))?;
            terms.push((m, from_pair::<T>(v)));
        }
        Ok(ExpPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_roundtrip() {
        let h = HamiltonianSeq::new(vec![Sym2::new(1.0 / 3.0, 0.0, 3.0), Sym2::identity()]).unwrap();
        let js = serde_json::to_string(&HamiltonianJson::from_seq(&h)).unwrap();
        let back: HamiltonianJson = serde_json::from_str(&js).unwrap();
        assert_eq!(back.to_seq::<f64>().unwrap(), h);

        let bad = HamiltonianJson { d: 3, ..back };
        assert!(bad.to_seq::<f64>().is_err());
    }

    #[test]
    fn poly_and_seq_shapes() {
        let f: Poly<f64> = serde_json::from_str::<PolyJson>(r#"{"coeffs": [[0.5, 0], [1, 0]]}"#)
            .unwrap()
            .to_poly()
            .unwrap();
        assert_eq!(f.degree(), 1);
        let s = SeqJson::from_seq(&CoeffSeq::from_poly(&f, true).unwrap());
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"c":[[0.5,0.0],[1.0,0.0]]}"#);
    }

    #[test]
    fn exppoly_roundtrip() {
        let p = ExpPoly::from_terms([(2, cx(0.5, 0.0)), (-2, cx(1.0, -1.0))]);
        let js = ExpPolyJson::from_exppoly(&p);
        assert_eq!(js.to_exppoly::<f64>().unwrap(), p);
        let bad: ExpPolyJson = serde_json::from_str(r#"{"half_step_coeffs": {"x": [1, 0]}}"#).unwrap();
        assert!(bad.to_exppoly::<f64>().is_err());
    }
}
