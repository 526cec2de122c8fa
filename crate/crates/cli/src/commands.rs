use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use qcs_core::corpus::{gaussian_seq, instance_rng, CORPUS_DN_THRESHOLD};
use qcs_core::formats::{to_pair, HamiltonianJson, Pair, PolyJson, SeqJson};
use qcs_core::hamiltonian::UNIMODULAR_TOL;
use qcs_core::linalg::determinant;
use qcs_core::schur_cohn::{build_l_seq, dn_scale};
use qcs_core::*;

use crate::{CoeffInput, ErrorBody, Emit, Failure, Method, Selection, Tolerances};

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit<T: Serialize>(value: &T, ok: bool) -> Result<Emit> {
    Ok(Emit {
        body: serde_json::to_string(value)?,
        ok,
    })
}

/// Raw coefficients `a_0..a_d` (equivalently `C_L..C_{-L}`).
fn load_coeffs(input: &CoeffInput) -> Result<Vec<C64>> {
    let raw: Vec<Pair> = match (&input.poly, &input.seq) {
        (Some(p), _) => read_json::<PolyJson>(p)?.coeffs,
        (None, Some(s)) => read_json::<SeqJson>(s)?.c,
        (None, None) => return Err(Failure::new("UsageError", "one of --poly or --seq is required").into()),
    };
    let c: Vec<C64> = raw.iter().map(|p| C64::new(p[0], p[1])).collect();
    if input.normalize {
        return Ok(CoeffSeq64::new(c, false)?.normalized()?.values().to_vec());
    }
    Ok(c)
}

fn load_poly(input: &CoeffInput) -> Result<Poly64> {
    Ok(Poly::new(load_coeffs(input)?)?)
}

fn load_seq(input: &CoeffInput) -> Result<CoeffSeq64> {
    Ok(CoeffSeq::new(load_coeffs(input)?, true)?)
}

fn load_hamiltonian(path: &Path) -> Result<HamiltonianSeq64> {
    Ok(read_json::<HamiltonianJson>(path)?.to_seq()?)
}

fn inverse_options(tol: &Tolerances) -> InverseOptions<f64> {
    InverseOptions {
        degeneracy: tol.tol_degeneracy,
        ..InverseOptions::default()
    }
}

fn selection_mode(s: Selection) -> SelectionMode {
    match s {
        Selection::Designated => SelectionMode::Designated,
        Selection::Alternative => SelectionMode::Alternative,
    }
}

/// Largest block difference, scaled by `1 + ‖H_n‖`.
fn scaled_block_diff(a: &HamiltonianSeq64, b: &HamiltonianSeq64) -> f64 {
    a.blocks()
        .iter()
        .zip(b.blocks())
        .map(|(x, y)| x.max_abs_diff(y) / (1.0 + x.norm_inf()))
        .fold(0.0, f64::max)
}

#[derive(Serialize)]
struct CountRootsOut {
    #[serde(rename = "D")]
    d: Vec<f64>,
    q: usize,
    inside: usize,
    degenerate: Vec<usize>,
}

pub fn count_roots(input: &CoeffInput, tol: &Tolerances) -> Result<Emit> {
    let f = load_poly(input)?;
    let seq = schur_cohn_sequence(&f, tol.tol_degeneracy)?;
    let count = count_inside(&seq)?;
    emit(
        &CountRootsOut {
            d: seq.d_values,
            q: count.q,
            inside: count.inside,
            degenerate: seq.degenerate,
        },
        true,
    )
}

#[derive(Serialize)]
struct BothOut {
    linear: HamiltonianJson,
    inductive: HamiltonianJson,
    /// `max_n |H_lin - H_ind| / (1 + ‖H_lin‖)`.
    max_scaled_diff: f64,
}

pub fn hamiltonian(input: &CoeffInput, method: Method, selection: Selection, tol: &Tolerances) -> Result<Emit> {
    let seq = load_seq(input)?;
    let opts = inverse_options(tol);
    let mode = selection_mode(selection);
    match method {
        Method::Linear => emit(&HamiltonianJson::from_seq(&hamiltonian_linear(&seq, &opts)?), true),
        Method::Inductive => emit(
            &HamiltonianJson::from_seq(&hamiltonian_inductive(&seq, &opts, mode)?.hseq),
            true,
        ),
        Method::Both => {
            let lin = hamiltonian_linear(&seq, &opts)?;
            let ind = hamiltonian_inductive(&seq, &opts, mode)?.hseq;
            emit(
                &BothOut {
                    max_scaled_diff: scaled_block_diff(&lin, &ind),
                    linear: HamiltonianJson::from_seq(&lin),
                    inductive: HamiltonianJson::from_seq(&ind),
                },
                true,
            )
        }
    }
}

#[derive(Serialize)]
struct ReconstructOut {
    class: DegeneracyClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly: Option<PolyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inside: Option<usize>,
    /// Changes of definiteness between consecutive blocks, for inspection.
    #[serde(skip_serializing_if = "Option::is_none")]
    flips: Option<usize>,
}

pub fn reconstruct(path: &Path, boundary: (f64, f64), tol: f64, normalize: bool) -> Result<Emit> {
    let h = load_hamiltonian(path)?;
    let (a, b) = boundary;
    if a == 0.0 && b == 0.0 {
        return Err(qcs_core::Error::ZeroBoundary.into());
    }
    let class = degeneracy_test(&h, a, b, tol).class;
    let mut out = ReconstructOut {
        class,
        poly: None,
        q: None,
        inside: None,
        flips: None,
    };
    // Degenerate classes are legitimate answers (constant or pure exponential
    // E), so they exit 0 without a polynomial.
    if class == DegeneracyClass::FullDegree {
        let sol = solve_direct(&h, a, b)?;
        let mut f = extract_poly(&sol, tol)?;
        if normalize {
            f = f.scale(C64::new(a, -b).inv())?;
        }
        let sig = signature_count(&h, tol)?;
        out.poly = Some(PolyJson::from_poly(&f));
        out.q = Some(sig.q);
        out.inside = Some(sig.inside);
        out.flips = Some(sig.flips);
    }
    emit(&out, true)
}

#[derive(Serialize)]
struct RoundtripOut {
    d: usize,
    /// Largest relative coefficient error with the boundary taken from E(0).
    max_coeff_error: f64,
    /// The same after the best complex rescaling.
    max_coeff_error_up_to_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

pub fn roundtrip(input: &CoeffInput, method: Method, tol: &Tolerances) -> Result<Emit> {
    let seq = load_seq(input)?;
    let f = seq.to_poly()?;
    let opts = inverse_options(tol);
    let mut paths = Vec::new();
    if method != Method::Inductive {
        paths.push(hamiltonian_linear(&seq, &opts)?);
    }
    if method != Method::Linear {
        paths.push(hamiltonian_inductive(&seq, &opts, SelectionMode::Designated)?.hseq);
    }
    let e0 = seq.e_at_zero();
    let (mut exact, mut scaled) = (0.0f64, 0.0f64);
    for h in &paths {
        let class = degeneracy_test(h, e0.re, -e0.im, tol.tol_proportionality).class;
        if class != DegeneracyClass::FullDegree {
            return Err(Failure::new("DegenerateSpectrum", format!("reconstruction has class {class:?}")).into());
        }
        let g = extract_poly(&solve_direct(h, e0.re, -e0.im)?, tol.tol_proportionality)?;
        exact = exact.max(f.max_rel_coeff_diff(&g));
        scaled = scaled.max(f.max_rel_coeff_diff_up_to_scale(&g));
    }
    let ok = scaled <= tol.tol_residual;
    let error = (!ok).then(|| {
        ErrorBody::new(
            "InvariantViolation",
            format!("coefficient error {scaled:e} exceeds {:e}", tol.tol_residual),
        )
    });
    emit(
        &RoundtripOut {
            d: seq.degree(),
            max_coeff_error: exact,
            max_coeff_error_up_to_scale: scaled,
            error,
        },
        ok,
    )
}

#[derive(Serialize)]
struct OracleOut {
    roots: Vec<Pair>,
    inside: usize,
    outside: usize,
    on_circle: usize,
    min_circle_distance: f64,
    ambiguous: bool,
}

pub fn oracle(input: &CoeffInput, tol_circle: f64) -> Result<Emit> {
    let f = load_poly(input)?;
    let opts = RootOptions {
        tol_circle,
        ..RootOptions::default()
    };
    let rep = find_roots(&f, &opts)?;
    emit(
        &OracleOut {
            roots: rep.roots.iter().map(|&z| to_pair(z)).collect(),
            inside: rep.inside,
            outside: rep.outside,
            on_circle: rep.on_circle,
            min_circle_distance: rep.min_circle_distance,
            ambiguous: rep.on_circle_ambiguous(),
        },
        true,
    )
}

#[derive(Serialize)]
struct IdentityRow {
    n: usize,
    #[serde(rename = "D")]
    d: f64,
    /// `|det L⁺ - det L⁻|` relative to `max(|det L⁺|, tol·scale)`.
    det_plus_minus: f64,
    cramer: IdentityOut,
    product: IdentityOut,
}

#[derive(Serialize)]
struct IdentityOut {
    lhs: Pair,
    rhs: f64,
    rel_error: f64,
}

impl From<IdentitySides<f64>> for IdentityOut {
    fn from(s: IdentitySides<f64>) -> Self {
        IdentityOut {
            lhs: to_pair(s.lhs),
            rhs: s.rhs,
            rel_error: s.rel_error(),
        }
    }
}

#[derive(Serialize)]
struct IdentitiesOut {
    rows: Vec<IdentityRow>,
    worst: BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

pub fn verify_identities(input: &CoeffInput, tol: &Tolerances) -> Result<Emit> {
    let seq = load_seq(input)?;
    let opts = inverse_options(tol);
    let mut rows = Vec::new();
    for n in 1..=seq.degree() {
        let plus = determinant(&build_l_seq(&seq, n, Sign::Plus)?)?;
        let minus = determinant(&build_l_seq(&seq, n, Sign::Minus)?)?;
        let floor = tol.tol_degeneracy * dn_scale(seq.values(), n);
        rows.push(IdentityRow {
            n,
            d: plus.re,
            det_plus_minus: (plus - minus).norm() / plus.norm().max(floor),
            cramer: cramer_identity(&seq, n, tol.tol_degeneracy)?.into(),
            product: product_identity(&seq, n, &opts)?.into(),
        });
    }
    let mut worst = BTreeMap::new();
    worst.insert("det_plus_minus", rows.iter().map(|r| r.det_plus_minus).fold(0.0, f64::max));
    worst.insert("cramer", rows.iter().map(|r| r.cramer.rel_error).fold(0.0, f64::max));
    worst.insert("product", rows.iter().map(|r| r.product.rel_error).fold(0.0, f64::max));
    let failing: Vec<&str> = worst
        .iter()
        .filter(|(_, &v)| !(v <= tol.tol_residual))
        .map(|(&k, _)| k)
        .collect();
    let ok = failing.is_empty();
    let error = (!ok).then(|| {
        ErrorBody::new(
            "InvariantViolation",
            format!("residuals above {:e}: {}", tol.tol_residual, failing.join(", ")),
        )
    });
    emit(&IdentitiesOut { rows, worst, error }, ok)
}

/// `start:end:count` with both endpoints included.
fn parse_grid(text: &str, flag: &str) -> Result<Vec<f64>> {
    let bad = || Failure::new("UsageError", format!("--{flag} expects start:end:count, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(bad().into());
    };
    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad().into());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
}

pub fn sample(path: &Path, boundary: (f64, f64), t_grid: &str, z_grid: &str) -> Result<Emit> {
    let h = load_hamiltonian(path)?;
    let ts = parse_grid(t_grid, "t")?;
    let xs = parse_grid(z_grid, "z-real")?;
    let sol = solve_direct(&h, boundary.0, boundary.1)?;
    let mut csv = String::from("t,x,A,B,|E|\n");
    for &t in &ts {
        for &x in &xs {
            let [a, b] = sol.eval(t, C64::new(x, 0.0))?;
            // A and B are real on the real axis; E = A - iB.
            let e = a - C64::i() * b;
            writeln!(csv, "{t},{x},{},{},{}", a.re, b.re, e.norm())?;
        }
    }
    Ok(Emit { body: csv, ok: true })
}

const INVARIANTS: [&str; 6] = [
    "root_count",
    "unimodular",
    "path_agreement",
    "positivity",
    "signature",
    "roundtrip",
];

/// Result of one invariant on one instance: `None` when skipped, otherwise
/// pass flag and measured value.
type Check = Option<(bool, f64)>;

struct Instance {
    d: usize,
    attempts: usize,
    checks: [Check; 6],
    /// Path difference and roundtrip error against the fixed `tol_residual`,
    /// without the conditioning allowance.
    strict: [bool; 2],
}

fn run_instance(seed: u64, index: usize, dmax: usize, tol: &Tolerances) -> Result<Instance> {
    let d = 1 + index % dmax;
    let mut rng = instance_rng(seed, index as u64);
    let case = gaussian_seq::<f64, _>(&mut rng, d, CORPUS_DN_THRESHOLD)?;
    let seq = &case.seq;
    let opts = inverse_options(tol);
    let f = seq.to_poly()?;
    let sc = count_inside(&case.dets)?;

    let root_count = {
        let rep = find_roots(&f, &RootOptions::default())?;
        (!rep.on_circle_ambiguous()).then(|| (rep.inside == sc.inside, rep.inside as f64 - sc.inside as f64))
    };

    let lin = hamiltonian_linear(seq, &opts)?;
    let defect = lin.max_unimodular_defect();
    let unimodular = Some((defect <= UNIMODULAR_TOL, defect));

    let path_agreement = Some(match hamiltonian_inductive(seq, &opts, SelectionMode::Designated) {
        Ok(ind) => {
            let diff = scaled_block_diff(&lin, &ind.hseq);
            (diff <= lin.conditioned_tol(tol.tol_residual), diff)
        }
        Err(_) => (false, f64::NAN),
    });

    let positivity = {
        let rep = check_scaled_positivity(&case.dets.d_values, &lin)?;
        let min = rep.min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        Some((rep.pass, min))
    };

    let signature = Some(match signature_count(&lin, tol.tol_degeneracy) {
        Ok(sig) => (sig.q == sc.q, sig.q as f64 - sc.q as f64),
        Err(_) => (false, f64::NAN),
    });

    let e0 = seq.e_at_zero();
    let roundtrip = Some(
        match solve_direct(&lin, e0.re, -e0.im).and_then(|s| extract_poly(&s, tol.tol_proportionality)) {
            Ok(g) => {
                let err = f.max_rel_coeff_diff_up_to_scale(&g);
                (err <= lin.conditioned_tol(tol.tol_residual), err)
            }
            Err(_) => (false, f64::NAN),
        },
    );

    let within = |c: Check| c.is_some_and(|(_, v)| v <= tol.tol_residual);
    Ok(Instance {
        d,
        attempts: case.attempts,
        strict: [within(path_agreement), within(roundtrip)],
        checks: [root_count, unimodular, path_agreement, positivity, signature, roundtrip],
    })
}

#[derive(Serialize, Default)]
struct Tally {
    pass: usize,
    fail: usize,
    skip: usize,
    /// Indices of failing instances.
    failures: Vec<usize>,
}

#[derive(Serialize)]
struct CorpusOut {
    seed: u64,
    count: usize,
    dmax: usize,
    /// Draws rejected by the determinant gate, per degree.
    rejected: BTreeMap<usize, usize>,
    invariants: BTreeMap<&'static str, Tally>,
    /// Instances whose path difference or roundtrip error exceeds the fixed
    /// `tol_residual`. Informational: the pass/fail counts above allow for
    /// the conditioning of the blocks.
    beyond_fixed_tol: BTreeMap<&'static str, Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
}

pub fn corpus(seed: u64, count: usize, dmax: usize, tol: &Tolerances) -> Result<Emit> {
    if dmax == 0 {
        return Err(Failure::new("UsageError", "--dmax must be at least 1").into());
    }
    // Each instance owns its RNG stream, so the parallel map is order-free;
    // collect() keeps index order.
    let results: Vec<Result<Instance>> = (0..count)
        .into_par_iter()
        .map(|k| run_instance(seed, k, dmax, tol))
        .collect();

    let mut invariants: BTreeMap<&'static str, Tally> =
        INVARIANTS.iter().map(|&name| (name, Tally::default())).collect();
    let mut rejected = BTreeMap::new();
    let mut beyond_fixed_tol: BTreeMap<&'static str, Vec<usize>> =
        [("path_agreement", Vec::new()), ("roundtrip", Vec::new())].into_iter().collect();
    let mut errors = Vec::new();
    for (k, res) in results.into_iter().enumerate() {
        let inst = match res {
            Ok(inst) => inst,
            Err(e) => {
                errors.push(format!("instance {k}: {e:#}"));
                for tally in invariants.values_mut() {
                    tally.fail += 1;
                    tally.failures.push(k);
                }
                continue;
            }
        };
        *rejected.entry(inst.d).or_insert(0) += inst.attempts - 1;
        for (name, within) in ["path_agreement", "roundtrip"].into_iter().zip(inst.strict) {
            if !within {
                beyond_fixed_tol.get_mut(name).expect("listed above").push(k);
            }
        }
        for (name, check) in INVARIANTS.iter().zip(inst.checks) {
            let tally = invariants.get_mut(name).expect("tally for every invariant");
            match check {
                None => tally.skip += 1,
                Some((true, _)) => tally.pass += 1,
                Some((false, _)) => {
                    tally.fail += 1;
                    tally.failures.push(k);
                }
            }
        }
    }

    let failing: Vec<&str> = invariants
        .iter()
        .filter(|(_, t)| t.fail > 0)
        .map(|(&k, _)| k)
        .collect();
    let ok = failing.is_empty();
    let error = (!ok).then(|| {
        let mut detail = format!("failing invariants: {}", failing.join(", "));
        if !errors.is_empty() {
            detail.push_str("; ");
            detail.push_str(&errors.join("; "));
        }
        ErrorBody::new("InvariantViolation", detail)
    });
    emit(
        &CorpusOut {
            seed,
            count,
            dmax,
            rejected,
            invariants,
            beyond_fixed_tol,
            error,
        },
        ok,
    )
}
