//! Property tests for the linear-algebra and Fock-space layers against the
//! reference implementations in `common`.

mod common;

use common::{leibniz_permanent, occupations, random_matrix, rng, transition_amplitude};
use num_complex::Complex64;
use photonmesh::fock::{
    amplitude_via_permanent, apply_linear, run_program, Block, BlockRole, NetworkProgram, OccupationVector,
    PhotonicState, Step,
};
use photonmesh::gates::realize;
use photonmesh::linalg::{
    check_unitary, creation_from_device, embed_block, equal_mod_global_phase, mzi_unitary, permanent, random_unitary,
    ComplexMatrix, MziSetting,
};
use proptest::prelude::*;
use rand::Rng;

fn random_state(m: usize, photons: usize, terms: usize, rng: &mut impl Rng) -> PhotonicState {
    let all = occupations(m, photons);
    let picked: Vec<(OccupationVector, Complex64)> = (0..terms)
        .map(|_| {
            let occ = all[rng.gen_range(0..all.len())].clone();
            (OccupationVector::new(occ), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    let mut state = PhotonicState::zero(m);
    for (occ, amp) in picked {
        state = state.add(&PhotonicState::basis(occ).scale(amp)).unwrap();
    }
    let norm = state.norm_sqr().sqrt();
    state.scale(Complex64::new(1.0 / norm, 0.0))
}

fn random_setting(rng: &mut impl Rng) -> MziSetting {
    MziSetting::relative(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permanent_matches_leibniz(n in 1usize..=6, seed: u64) {
        let m = random_matrix(n, &mut rng(seed));
        let fast = permanent(&m).unwrap();
        prop_assert!((fast - leibniz_permanent(&m)).norm() < 1e-10 * (1.0 + fast.norm()));
    }

    #[test]
    fn permanent_ignores_row_order(n in 2usize..=5, seed: u64) {
        let mut r = rng(seed);
        let m = random_matrix(n, &mut r);
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, j);
        let shuffled = &ComplexMatrix::permutation(&perm) * &m;
        prop_assert!((permanent(&m).unwrap() - permanent(&shuffled).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn linear_evolution_matches_first_quantized_amplitudes(m in 2usize..=5, photons in 1usize..=3, seed: u64) {
        let mut r = rng(seed);
        let t = random_unitary(m, &mut r);
        let input = occupations(m, photons);
        let occ = input[r.gen_range(0..input.len())].clone();
        let out = apply_linear(&PhotonicState::basis(OccupationVector::new(occ.clone())), &t).unwrap();
        for target in occupations(m, photons) {
            let oracle = transition_amplitude(&t, &occ, &target);
            let got = out.amplitude(&OccupationVector::new(target.clone()));
            prop_assert!((got - oracle).norm() < 1e-12, "{:?} -> {:?}", occ, target);
            let via = amplitude_via_permanent(&t, &OccupationVector::new(occ.clone()), &OccupationVector::new(target)).unwrap();
            prop_assert!((via - oracle).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_evolution_preserves_norm_and_photons(m in 2usize..=6, photons in 1usize..=3, seed: u64) {
        let mut r = rng(seed);
        let state = random_state(m, photons, 4, &mut r);
        let out = apply_linear(&state, &random_unitary(m, &mut r)).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(out.photon_numbers().iter().all(|&k| k == photons));
    }

    #[test]
    fn evolution_is_linear(m in 2usize..=4, seed: u64) {
        let mut r = rng(seed);
        let (a, b) = (random_state(m, 2, 3, &mut r), random_state(m, 2, 3, &mut r));
        let t = random_unitary(m, &mut r);
        let w = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let lhs = apply_linear(&a.add(&b.scale(w)).unwrap(), &t).unwrap();
        let rhs = apply_linear(&a, &t).unwrap().add(&apply_linear(&b, &t).unwrap().scale(w)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn sequential_layers_compose(m in 2usize..=5, seed: u64) {
        let mut r = rng(seed);
        let (t1, t2) = (random_unitary(m, &mut r), random_unitary(m, &mut r));
        let state = random_state(m, 2, 3, &mut r);
        let stepwise = apply_linear(&apply_linear(&state, &t1).unwrap(), &t2).unwrap();
        let fused = apply_linear(&state, &(&t1 * &t2)).unwrap();
        prop_assert!(stepwise.max_abs_diff(&fused) < 1e-12);
    }

    #[test]
    fn embedding_is_a_homomorphism(m in 2usize..=8, seed: u64) {
        let mut r = rng(seed);
        let top = r.gen_range(0..m - 1);
        let (a, b) = (random_unitary(2, &mut r), random_unitary(2, &mut r));
        let lhs = &embed_block(&a, top, m).unwrap() * &embed_block(&b, top, m).unwrap();
        prop_assert!(lhs.approx_eq(&embed_block(&(&a * &b), top, m).unwrap(), 1e-13));
        prop_assert!(check_unitary(&embed_block(&a, top, m).unwrap(), 1e-12).unwrap().is_unitary);
    }

    #[test]
    fn creation_transform_is_the_transpose(seed: u64) {
        let u = random_unitary(2, &mut rng(seed));
        prop_assert_eq!(creation_from_device(&u), u.transpose());
    }

    #[test]
    fn mzi_settings_are_unitary(seed: u64) {
        let s = random_setting(&mut rng(seed));
        prop_assert!(check_unitary(&mzi_unitary(&s), 1e-12).unwrap().is_unitary);
    }

    #[test]
    fn realize_is_exact(seed: u64) {
        let u = random_unitary(2, &mut rng(seed));
        let s = realize(&u).unwrap();
        prop_assert!(s.matrix().approx_eq(&u, 1e-10));
    }

    #[test]
    fn realize_recovers_plain_settings(seed: u64) {
        let u = mzi_unitary(&random_setting(&mut rng(seed)));
        let s = realize(&u).unwrap();
        prop_assert!(!s.is_extended());
        prop_assert!(s.matrix().approx_eq(&u, 1e-10));
    }

    #[test]
    fn global_phase_is_ignored_only_globally(seed: u64, phase in -3.0f64..3.0) {
        let mut r = rng(seed);
        let u = random_unitary(3, &mut r);
        let shifted = u.scale(Complex64::from_polar(1.0, phase));
        prop_assert!(equal_mod_global_phase(&u, &shifted, 1e-12).unwrap());
        prop_assume!(phase.abs() > 0.05);
        let mut rows: Vec<Vec<Complex64>> = (0..3).map(|i| u.row(i).to_vec()).collect();
        for z in &mut rows[0] {
            *z *= Complex64::from_polar(1.0, phase);
        }
        prop_assert!(!equal_mod_global_phase(&u, &ComplexMatrix::from_rows(rows), 1e-6).unwrap());
    }

    #[test]
    fn program_runs_concatenate(m in 3usize..=6, seed: u64) {
        let mut r = rng(seed);
        let mut random_program = |len: usize| {
            let mut p = NetworkProgram::new(m);
            for _ in 0..len {
                let top = r.gen_range(0..m - 1);
                if r.gen_bool(0.15) {
                    p.push_truncation(vec![top]).unwrap();
                } else {
                    p.push_block(Block::new(top, random_setting(&mut r), BlockRole::Rz)).unwrap();
                }
            }
            p
        };
        let (p1, p2) = (random_program(6), random_program(6));
        let state = PhotonicState::basis(OccupationVector::from_photons(m, &[1, 2]));
        let mut joined = p1.clone();
        joined.extend(&p2).unwrap();
        let whole = run_program(&joined, &state).unwrap();
        let parts = run_program(&p2, &run_program(&p1, &state).unwrap()).unwrap();
        prop_assert!(whole.max_abs_diff(&parts) < 1e-12);
        prop_assert!(whole.norm_sqr() <= 1.0 + 1e-12);
    }

    #[test]
    fn linear_product_matches_stepwise_run(m in 2usize..=5, seed: u64) {
        let mut r = rng(seed);
        let mut p = NetworkProgram::new(m);
        for _ in 0..5 {
            p.push_block(Block::new(r.gen_range(0..m - 1), random_setting(&mut r), BlockRole::Rz)).unwrap();
        }
        p.push(Step::Linear(random_unitary(m, &mut r))).unwrap();
        let state = random_state(m, 2, 2, &mut r);
        let fused = apply_linear(&state, &p.linear_product().unwrap()).unwrap();
        prop_assert!(run_program(&p, &state).unwrap().max_abs_diff(&fused) < 1e-12);
    }
}

#[test]
fn hong_ou_mandel_dip() {
    let bs = creation_from_device(&photonmesh::linalg::beam_splitter());
    let out = apply_linear(&PhotonicState::basis(OccupationVector::new(vec![1, 1])), &bs).unwrap();
    assert!(out.amplitude(&OccupationVector::new(vec![1, 1])).norm() < 1e-15);
    assert!((out.amplitude(&OccupationVector::new(vec![2, 0])).norm_sqr() - 0.5).abs() < 1e-14);
}
