//! Post-selected CZ and CNOT built from the 1/3-reflectivity MZIs.

use std::f64::consts::PI;

use super::{exact_block, real, GateDescriptor, Labeling};
use crate::fock::BlockRole;
use crate::linalg::{creation_from_device, embed_block, std_gates, ComplexMatrix, MziSetting};

/// `2·arcsin(1/√3)`, the internal phase of a 1/3-transmissivity MZI.
pub const R13_ANGLE: f64 = 1.230_959_417_340_774_7;

/// The three MZI matrices used by the post-selected CZ (device convention).
#[derive(Clone, Debug, PartialEq)]
pub struct R13Family {
    /// `(1/√3)[[−1, √2], [−√2, −1]]`
    pub r: ComplexMatrix,
    /// `(1/√3)[[−1, √2], [√2, 1]]`
    pub r_prime: ComplexMatrix,
    /// `X·R·X = (1/√3)[[−1, −√2], [√2, −1]]`
    pub r_dagger: ComplexMatrix,
    /// Canonical settings (θ₂ = φ₂ = 0), equal to the matrices up to a global phase.
    pub r_setting: MziSetting,
    pub r_prime_setting: MziSetting,
    pub r_dagger_setting: MziSetting,
}

pub fn r13_matrices() -> R13Family {
    let (a, b) = (1.0 / 3f64.sqrt(), 2f64.sqrt() / 3f64.sqrt());
    R13Family {
        r: ComplexMatrix::from_real_rows(&[&[-a, b], &[-b, -a]]),
        r_prime: ComplexMatrix::from_real_rows(&[&[-a, b], &[b, a]]),
        r_dagger: ComplexMatrix::from_real_rows(&[&[-a, -b], &[b, -a]]),
        r_setting: MziSetting::relative(R13_ANGLE, PI),
        r_prime_setting: MziSetting::relative(-R13_ANGLE, 0.0),
        r_dagger_setting: MziSetting::relative(-R13_ANGLE, PI),
    }
}

fn sixth(rows: [[f64; 6]; 6]) -> ComplexMatrix {
    let s = 1.0 / 3f64.sqrt();
    ComplexMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| real(x * s)).collect()).collect())
}

fn x_block(top: usize) -> crate::fock::Block {
    exact_block(top, &std_gates::pauli_x(), BlockRole::X)
}

/// Post-selected CZ on (aux₀, 0₀, 1₀, 0₁, 1₁, aux₁): one layer of three MZIs.
pub fn cz_ps_nonregular() -> GateDescriptor {
    let q = 2f64.sqrt();
    let matrix = sixth([
        [-1.0, q, 0.0, 0.0, 0.0, 0.0],
        [q, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, -q, 0.0, 0.0],
        [0.0, 0.0, q, -1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -1.0, -q],
        [0.0, 0.0, 0.0, 0.0, q, -1.0],
    ]);
    let r = r13_matrices();
    let blocks = vec![
        exact_block(0, &r.r_prime, BlockRole::R13Prime),
        exact_block(2, &r.r, BlockRole::R13),
        exact_block(4, &r.r, BlockRole::R13),
    ];
    GateDescriptor::new("CZ_ps_nonregular", 2, matrix, Labeling::NonRegular, blocks, true)
        .expect("non-regular CZ blocks")
}

fn cz_regular_matrix() -> ComplexMatrix {
    let q = 2f64.sqrt();
    sixth([
        [-1.0, q, 0.0, 0.0, 0.0, 0.0],
        [q, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0, -q, 0.0],
        [0.0, 0.0, 0.0, -1.0, 0.0, q],
        [0.0, 0.0, q, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -q, 0.0, -1.0],
    ])
}

/// Post-selected CZ on the regular labeling, compressed to three MZI layers:
/// `X` on `(aux₁, 0₁)`, then `R′`, `R`, `R†` side by side, then `X` again.
pub fn cz_ps_regular() -> GateDescriptor {
    let r = r13_matrices();
    let blocks = vec![
        x_block(3),
        exact_block(0, &r.r_prime, BlockRole::R13Prime),
        exact_block(2, &r.r, BlockRole::R13),
        exact_block(4, &r.r_dagger, BlockRole::R13Dagger),
        x_block(3),
    ];
    GateDescriptor::new("CZ_ps", 2, cz_regular_matrix(), Labeling::Regular, blocks, true).expect("regular CZ blocks")
}

/// Same gate as [`cz_ps_regular`], realized by relabeling the second qubit
/// with `SWAP₁ᴬ`, applying the non-regular layer, and relabeling back.
pub fn cz_ps_sandwich() -> GateDescriptor {
    let r = r13_matrices();
    let blocks = vec![
        x_block(3),
        x_block(4),
        exact_block(0, &r.r_prime, BlockRole::R13Prime),
        exact_block(2, &r.r, BlockRole::R13),
        exact_block(4, &r.r, BlockRole::R13),
        x_block(4),
        x_block(3),
    ];
    GateDescriptor::new("CZ_ps_sandwich", 2, cz_regular_matrix(), Labeling::Regular, blocks, true)
        .expect("sandwich CZ blocks")
}

/// Post-selected CNOT, `(1 ⊗ H) · CZ · (1 ⊗ H)` with the Hadamards on the
/// target's rails. Only [`Labeling::Regular`] and [`Labeling::NonRegular`]
/// are meaningful; other labelings panic.
pub fn cnot_ps(labeling: Labeling) -> GateDescriptor {
    let (cz, target_top, name) = match labeling {
        Labeling::Regular => (cz_ps_regular(), 4, "CNOT_ps"),
        Labeling::NonRegular => (cz_ps_nonregular(), 3, "CNOT_ps_nonregular"),
        other => panic!("CNOT is defined on two-qubit labelings, not {other:?}"),
    };
    let h = std_gates::hadamard();
    let h_creation = embed_block(&creation_from_device(&h), target_top, 6).expect("target rails in range");
    let matrix = &(&h_creation * &cz.matrix) * &h_creation;
    let hb = exact_block(target_top, &h, BlockRole::H);
    let mut blocks = vec![hb];
    blocks.extend(cz.blocks.iter().copied());
    blocks.push(hb);
    GateDescriptor::new(name, 2, matrix, labeling, blocks, true).expect("CNOT blocks")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        apply_linear, decode_qubits, prepare_computational_basis, project_qubit_structure, QubitLayout,
    };
    use crate::linalg::{check_unitary, equal_mod_global_phase, mzi_unitary};

    #[test]
    fn angle_constant() {
        assert!((R13_ANGLE - 2.0 * (1.0 / 3f64.sqrt()).asin()).abs() < 1e-15);
    }

    #[test]
    fn r13_settings_reproduce_matrices() {
        let r = r13_matrices();
        for (m, s) in [(&r.r, r.r_setting), (&r.r_prime, r.r_prime_setting), (&r.r_dagger, r.r_dagger_setting)] {
            assert!(equal_mod_global_phase(&mzi_unitary(&s), m, 1e-12).unwrap());
        }
        let x = std_gates::pauli_x();
        assert!((&(&x * &r.r) * &x).approx_eq(&r.r_dagger, 1e-15));
        // (−2·arcsin(1/√3), 0) gives R′, not R†
        let misprint = mzi_unitary(&MziSetting::relative(-R13_ANGLE, 0.0));
        assert!(!equal_mod_global_phase(&misprint, &r.r_dagger, 1e-6).unwrap());
    }

    #[test]
    fn cz_matrices() {
        let bar = cz_ps_nonregular();
        // third row, fourth column
        assert!((bar.matrix[(2, 3)].re + 2f64.sqrt() / 3f64.sqrt()).abs() < 1e-15);
        assert!(check_unitary(&bar.matrix, 1e-12).unwrap().is_unitary);
        let reg = cz_ps_regular();
        assert!(check_unitary(&reg.matrix, 1e-12).unwrap().is_unitary);
        // D from the relabeling (aux₁, 0₁, 1₁) ← (0₁, 1₁, aux₁)
        let d = ComplexMatrix::permutation(&[0, 1, 2, 5, 3, 4]);
        let conj = &(&d * &bar.matrix) * &d.transpose();
        assert!(conj.approx_eq(&reg.matrix, 1e-15));
    }

    #[test]
    fn cz_regular_is_not_plain_x_conjugation() {
        let x34 = embed_block(&std_gates::pauli_x(), 3, 6).unwrap();
        let conj = &(&x34 * &cz_ps_nonregular().matrix) * &x34;
        assert!(!conj.approx_eq(&cz_ps_regular().matrix, 1e-6));
        // they differ by a sign on mode 5 only
        let z5 = ComplexMatrix::diagonal(&[real(1.0), real(1.0), real(1.0), real(1.0), real(1.0), real(-1.0)]);
        assert!((&(&z5 * &conj) * &z5).approx_eq(&cz_ps_regular().matrix, 1e-15));
    }

    fn projected(gate: &GateDescriptor, layout: &QubitLayout, bits: &str) -> (Vec<num_complex::Complex64>, f64) {
        let s = prepare_computational_basis(bits, layout).unwrap();
        let out = apply_linear(&s, &gate.matrix).unwrap();
        let r = project_qubit_structure(&out, layout).unwrap();
        let p = r.success_probability;
        let amps = r.projected_state.terms().map(|(_, a)| *a).collect();
        let _ = decode_qubits(&r, layout).unwrap();
        (amps, p)
    }

    #[test]
    fn cz_basis_amplitudes() {
        for (gate, layout) in [
            (cz_ps_nonregular(), QubitLayout::non_regular_pair()),
            (cz_ps_regular(), QubitLayout::regular(2)),
            (cz_ps_sandwich(), QubitLayout::regular(2)),
        ] {
            for (bits, sign) in [("00", 1.0), ("01", 1.0), ("10", 1.0), ("11", -1.0)] {
                let (amps, p) = projected(&gate, &layout, bits);
                assert_eq!(amps.len(), 1);
                assert!((amps[0] - real(-sign / 3.0)).norm() < 1e-12, "{} {bits}", gate.name);
                assert!((p - 1.0 / 9.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cnot_truth_table() {
        let layout = QubitLayout::regular(2);
        let gate = cnot_ps(Labeling::Regular);
        for (input, output) in [("00", 0usize), ("01", 1), ("10", 3), ("11", 2)] {
            let s = prepare_computational_basis(input, &layout).unwrap();
            let r = project_qubit_structure(&apply_linear(&s, &gate.matrix).unwrap(), &layout).unwrap();
            assert!((r.success_probability - 1.0 / 9.0).abs() < 1e-12);
            let q = decode_qubits(&r, &layout).unwrap();
            assert!((q.amplitudes[output].norm() - 1.0).abs() < 1e-12, "{input}");
        }
    }

    #[test]
    fn nonregular_cnot_layers() {
        let layers = cnot_ps(Labeling::NonRegular).layers();
        let tops: Vec<Vec<usize>> = layers.iter().map(|l| l.iter().map(|b| b.top).collect()).collect();
        // R′ on the first qubit has no dependency and moves up front
        assert_eq!(tops, vec![vec![3, 0], vec![2, 4], vec![3]]);
        assert_eq!(layers[0][0].role, BlockRole::H);
    }

    #[test]
    fn compressed_cz_is_three_layers() {
        let tops: Vec<Vec<usize>> =
            cz_ps_regular().layers().iter().map(|l| l.iter().map(|b| b.top).collect()).collect();
        assert_eq!(tops, vec![vec![3, 0], vec![2, 4], vec![3]]);
    }
}
