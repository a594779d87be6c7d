use serde::{Deserialize, Serialize};

use super::OccupationVector;
use crate::error::{Error, Result};

/// The three modes of one path-encoded qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitModes {
    pub aux: usize,
    pub zero: usize,
    pub one: usize,
}

/// Assignment of modes to qubits. The triplets partition `0..3n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitLayout {
    qubits: Vec<QubitModes>,
}

impl QubitLayout {
    /// Regular labeling: qubit `j` owns `(3j, 3j+1, 3j+2)` as (aux, rail 0, rail 1).
    pub fn regular(n: usize) -> Self {
        Self {
            qubits: (0..n).map(|j| QubitModes { aux: 3 * j, zero: 3 * j + 1, one: 3 * j + 2 }).collect(),
        }
    }

    /// Two qubits with mode order (aux₀, 0₀, 1₀, 0₁, 1₁, aux₁), the layout in
    /// which the post-selected CZ is a single layer of three blocks.
    pub fn non_regular_pair() -> Self {
        Self {
            qubits: vec![
                QubitModes { aux: 0, zero: 1, one: 2 },
                QubitModes { aux: 5, zero: 3, one: 4 },
            ],
        }
    }

    pub fn new(qubits: Vec<QubitModes>) -> Result<Self> {
        let m = 3 * qubits.len();
        let mut seen = vec![false; m];
        for q in &qubits {
            for mode in [q.aux, q.zero, q.one] {
                if mode >= m {
                    return Err(Error::InvalidLayout(format!("mode {mode} outside 0..{m}")));
                }
                if std::mem::replace(&mut seen[mode], true) {
                    return Err(Error::InvalidLayout(format!("mode {mode} assigned twice")));
                }
            }
        }
        Ok(Self { qubits })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits.len()
    }

    pub fn mode_count(&self) -> usize {
        3 * self.qubits.len()
    }

    pub fn qubits(&self) -> &[QubitModes] {
        &self.qubits
    }

    pub fn aux_modes(&self) -> Vec<usize> {
        self.qubits.iter().map(|q| q.aux).collect()
    }

    /// Logical bits of an occupation in the qubit subspace, `None` otherwise.
    pub fn bits_of(&self, occ: &OccupationVector) -> Option<Vec<bool>> {
        let c = occ.counts();
        if c.len() != self.mode_count() {
            return None;
        }
        self.qubits
            .iter()
            .map(|q| match (c[q.aux], c[q.zero], c[q.one]) {
                (0, 1, 0) => Some(false),
                (0, 0, 1) => Some(true),
                _ => None,
            })
            .collect()
    }
}
