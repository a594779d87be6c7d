//! Waveguide permutations built from MZIs in the cross (Pauli-X) setting.

use super::{exact_block, GateDescriptor, Labeling};
use crate::fock::{Block, BlockRole};
use crate::linalg::{std_gates, ComplexMatrix};

fn x_blocks(tops: &[usize]) -> Vec<Block> {
    let x = std_gates::pauli_x();
    tops.iter().map(|&t| exact_block(t, &x, BlockRole::X)).collect()
}

fn descriptor(name: &str, arity: usize, perm: &[usize], labeling: Labeling, tops: &[usize]) -> GateDescriptor {
    GateDescriptor::new(name, arity, ComplexMatrix::permutation(perm), labeling, x_blocks(tops), false)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// One MZI exchanging the two rails of a qubit.
pub fn x_swap() -> GateDescriptor {
    descriptor("X_swap", 1, &[1, 0], Labeling::Doublet, &[0])
}

/// Exchanges two dual-rail qubits without auxiliary modes, in three layers.
pub fn swap2_prime() -> GateDescriptor {
    descriptor("SWAP2p", 2, &[2, 3, 0, 1], Labeling::DualRail, &[1, 0, 2, 1])
}

/// Cycles (aux, rail 0, rail 1) so the auxiliary mode moves below the rails.
pub fn swap1_a() -> GateDescriptor {
    descriptor("SWAP1A", 0, &[1, 2, 0], Labeling::Regular, &[1, 0])
}

/// Exchanges two regular qubits including their auxiliary modes (13 MZIs).
pub fn swap2_a() -> GateDescriptor {
    let tops = [0, 2, 4, 1, 3, 0, 2, 4, 1, 3, 2, 1, 3];
    descriptor("SWAP2A", 2, &[3, 4, 5, 0, 1, 2], Labeling::Regular, &tops)
}

/// Reverses modes 1..=5 of two regular qubits, leaving both auxiliary
/// positions in place (10 MZIs).
///
/// On the qubit subspace this is a qubit exchange that also flips both
/// qubits' rails: `|ab⟩ → |b̄ā⟩`.
pub fn swap2() -> GateDescriptor {
    let tops = [2, 4, 1, 3, 2, 4, 1, 3, 2, 4];
    descriptor("SWAP2", 2, &[0, 5, 4, 3, 2, 1], Labeling::Regular, &tops)
}
