//! Path-encoded photonic qubits on Mach-Zehnder interferometer meshes.
//!
//! Every qubit uses three waveguides (an auxiliary mode and two rails).
//! Single-qubit gates are single MZIs; two-qubit gates are post-selected
//! linear-optical CZ/CNOT networks that succeed with probability 1/9 each.
//!
//! * [`linalg`]: complex matrices, device matrices, permanents.
//! * [`fock`]: exact multi-photon states, linear evolution, post-selection.
//! * [`gates`]: the gate library with closed forms and MZI decompositions.
//! * [`compiler`]: circuits to network programs and mesh phase tables.
//! * [`analysis`]: feasibility studies and success-probability scans.

pub mod analysis;
pub mod compiler;
pub mod error;
pub mod fock;
pub mod gates;
pub mod linalg;
pub mod numfmt;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide;
