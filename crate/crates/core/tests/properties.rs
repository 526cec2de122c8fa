use num_complex::Complex;
use proptest::prelude::*;

use qcs_core::corpus::{gaussian_seq, instance_rng, random_hamiltonian, CORPUS_DN_THRESHOLD};
use qcs_core::*;

fn corpus_seq(seed: u64, d: usize) -> CoeffSeq64 {
    gaussian_seq(&mut instance_rng(seed, d as u64), d, CORPUS_DN_THRESHOLD)
        .unwrap()
        .seq
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn blocks_are_unimodular_and_definite(seed in any::<u64>(), d in 1usize..=8) {
        let seq = corpus_seq(seed, d);
        let h = hamiltonian_linear(&seq, &InverseOptions::default()).unwrap();
        prop_assert!(h.max_unimodular_defect() <= 1e-12);
        let dets = schur_cohn_sequence_coeffs(seq.values(), 1e-9).unwrap();
        for (n, class) in h.definiteness(1e-9).into_iter().enumerate() {
            let product = dets.d_values[n] * dets.d_values[n + 1];
            let expect = if product > 0.0 { Definiteness::PosDef } else { Definiteness::NegDef };
            prop_assert_eq!(class, expect);
        }
    }

    #[test]
    fn omega_blocks_are_halved_piece_coefficients(seed in any::<u64>(), d in 1usize..=7) {
        let seq = corpus_seq(seed, d);
        let ind = hamiltonian_inductive(&seq, &InverseOptions::default(), SelectionMode::Designated).unwrap();
        let e0 = seq.e_at_zero();
        let sol = solve_direct(&ind.hseq, e0.re, -e0.im).unwrap();
        let (big_l, r) = (seq.half_length() as i64, seq.r() as i64);
        // Rounding grows like ε·‖H‖² on ill-conditioned blocks, which the
        // corpus gate admits up to ‖H‖ near 1e5.
        let tol = ind.hseq.conditioned_tol(1e-8);
        for state in &ind.omegas[1..] {
            prop_assert!(state.redundancy_defect() <= tol);
            prop_assert!(ind.hseq.max_unimodular_defect() <= 1e-12);
            let piece = &sol.pieces[state.n - 1];
            let scale = 1.0 + piece.a.l1_norm() + piece.b.l1_norm();
            for (j, (a, b)) in state.block(0).iter().zip(state.block(2)).enumerate() {
                let mu = 2 * (big_l - r * j as i64);
                prop_assert!((*a * 2.0 - piece.a.get(mu)).norm() <= tol * scale);
                prop_assert!((*b * 2.0 - piece.b.get(mu)).norm() <= tol * scale);
            }
        }
    }

    #[test]
    fn direct_solution_invariants(seed in any::<u64>(), d in 1usize..=6,
                                  a in -2.0f64..2.0, b in -2.0f64..2.0) {
        prop_assume!(a.abs() + b.abs() > 1e-3);
        let h: HamiltonianSeq64 = random_hamiltonian(&mut instance_rng(seed, 0), d).unwrap();
        let sol = solve_direct(&h, a, b).unwrap();
        let big_l = h.half_length() as f64;
        let zero = Complex::new(0.0, 0.0);
        let x = |k: usize| Complex::new(k as f64 * 0.37 - 1.1, 0.0);

        // A, B real on the real axis at every joint
        for v in &sol.joint_values {
            prop_assert!(v[0].is_real_symmetric(1e-12) && v[1].is_real_symmetric(1e-12));
        }
        // E(t, 0) = A - iB along the whole interval
        for k in 0..=8 {
            let t = big_l * k as f64 / 8.0;
            let e = sol.e_at(t, zero).unwrap();
            prop_assert!((e - Complex::new(a, -b)).norm() <= 1e-9 * (1.0 + a.abs() + b.abs()));
        }
        // symbolic determinant collapses to the constant 1
        let det = transfer_product(&h).unwrap().det();
        prop_assert!(det.max_rel_diff(&ExpPoly::one()) <= 1e-12);
        // the piecewise representation agrees with direct numerical propagation
        for k in 0..6 {
            let t = big_l * (k as f64 + 0.5) / 6.0;
            let m = transfer_matrix_at(&h, t, x(k)).unwrap();
            let [pa, pb] = sol.eval(t, x(k)).unwrap();
            let na = m[0][0] * a + m[0][1] * b;
            let nb = m[1][0] * a + m[1][1] * b;
            prop_assert!((pa - na).norm() + (pb - nb).norm() <= 1e-9 * (1.0 + na.norm() + nb.norm()));
        }
    }

    #[test]
    fn full_degree_iff_extractable(seed in any::<u64>(), d in 1usize..=6, pattern in any::<u8>()) {
        // Mix random blocks with ±I blocks to hit the degenerate classes.
        let mut rng = instance_rng(seed, 1);
        let random: HamiltonianSeq64 = random_hamiltonian(&mut rng, d).unwrap();
        let blocks: Vec<Sym2f64> = (0..d)
            .map(|n| match (pattern >> (2 * (n % 4))) & 3 {
                0 => Sym2::identity(),
                1 => -Sym2::identity(),
                _ => random.blocks()[n],
            })
            .collect();
        let h = HamiltonianSeq::new(blocks).unwrap();
        let rep = degeneracy_test(&h, 1.0, 0.0, 1e-9);
        let sol = solve_direct(&h, 1.0, 0.0).unwrap();
        let extracted = extract_poly(&sol, 1e-9);
        prop_assert_eq!(rep.class == DegeneracyClass::FullDegree, extracted.is_ok());
    }

    #[test]
    fn roundtrip_reproduces_polynomial(seed in any::<u64>(), d in 1usize..=8) {
        let seq = corpus_seq(seed, d);
        let f = seq.to_poly().unwrap();
        let h = hamiltonian_linear(&seq, &InverseOptions::default()).unwrap();
        let e0 = seq.e_at_zero();
        let sol = solve_direct(&h, e0.re, -e0.im).unwrap();
        prop_assert_eq!(degeneracy_test(&h, e0.re, -e0.im, 1e-9).class, DegeneracyClass::FullDegree);
        let g = extract_poly(&sol, 1e-9).unwrap();
        prop_assert!(f.max_rel_coeff_diff_up_to_scale(&g) <= h.conditioned_tol(1e-8));
        // no real zeros of E(0, x), sampled over one period
        let e = sol.e0();
        let period = 2.0 * std::f64::consts::PI / seq.r() as f64;
        for k in 0..64 {
            let x = period * k as f64 / 64.0;
            prop_assert!(e.eval(Complex::new(x, 0.0)).norm() > 0.0);
        }
    }
}
