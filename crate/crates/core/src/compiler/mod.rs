//! From logical circuits to network programs and mesh phase tables.
//!
//! Qubit `q` starts on modes `(3q, 3q+1, 3q+2)`. Two-qubit gates need the
//! two qubits on neighbouring triplets; otherwise `SWAP₂` networks move the
//! second operand next to the first. `SWAP₂` also flips both qubits' rails,
//! so the compiler keeps a [`QubitFrame`] with every logical qubit's
//! position and rail flip, and compensates single-qubit and controlled gates
//! accordingly.

mod circuit;
mod mesh;

pub use circuit::{CircuitIR, Gate};
pub use mesh::{
    compressed_cz_template, enumerate_placements, nonregular_cz_template, place_in_mesh, slot_grid, MeshAssignment,
    PhaseRecord, Scheme, Slot, TruncationRecord,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    decode_qubits, prepare_computational_basis, project_qubit_structure, run_program, Block, NetworkProgram,
    QubitAmplitudes, QubitLayout,
};
use crate::gates::{cz_ps_regular, cz_ps_sandwich, exact_block, swap2, SingleQubitGate};
use crate::linalg::{std_gates, ComplexMatrix};

/// Which block set implements the regular post-selected CZ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CzForm {
    /// Three layers: `X`, `R′ R R†`, `X`.
    #[default]
    Compressed,
    /// Relabel with `SWAP₁ᴬ`, apply the non-regular layer, relabel back.
    SwapSandwich,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompileOptions {
    pub scheme: Scheme,
    pub allow_illegal_cascade: bool,
    pub cz_form: CzForm,
    /// Move routed qubits back after each gate so the final frame has every
    /// logical qubit on its own triplet again.
    pub restore_routing: bool,
    /// Emit truncation markers after post-selected gates. Turning this off
    /// exists to show what goes wrong without them.
    pub truncate_aux: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            scheme: Scheme::Clements,
            allow_illegal_cascade: false,
            cz_form: CzForm::Compressed,
            restore_routing: true,
            truncate_aux: true,
        }
    }
}

/// Unordered qubit pairs that already received a post-selected gate.
///
/// Pairs are recorded on the qubits' states: a logical `SWAP` gate exchanges
/// which labels the two states carry, routing swaps do not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CascadeLedger {
    pairs: BTreeSet<(usize, usize)>,
}

impl CascadeLedger {
    /// Records the pair; returns `false` if it was already present.
    pub fn record(&mut self, a: usize, b: usize) -> bool {
        self.pairs.insert((a.min(b), a.max(b)))
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Where each logical qubit sits and whether its rails are exchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitFrame {
    positions: Vec<usize>,
    flips: Vec<bool>,
}

impl QubitFrame {
    pub fn identity(n: usize) -> Self {
        Self { positions: (0..n).collect(), flips: vec![false; n] }
    }

    /// Physical triplet of each logical qubit.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Whether logical qubit `l`'s `|0⟩` sits on rail 1.
    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    pub fn is_identity(&self) -> bool {
        self.positions.iter().enumerate().all(|(l, &p)| l == p) && self.flips.iter().all(|f| !f)
    }

    fn occupant(&self, p: usize) -> usize {
        self.positions.iter().position(|&q| q == p).expect("every triplet holds a qubit")
    }

    /// Effect of a `SWAP₂` on triplets `(p, p + 1)`.
    pub fn apply_swap2(&mut self, p: usize) {
        let (a, b) = (self.occupant(p), self.occupant(p + 1));
        self.positions.swap(a, b);
        self.flips[a] = !self.flips[a];
        self.flips[b] = !self.flips[b];
    }

    /// Converts amplitudes indexed by physical triplets into logical order.
    pub fn decode(&self, physical: &QubitAmplitudes) -> QubitAmplitudes {
        let mut out = physical.permute_qubits(&self.positions);
        let n = self.flips.len();
        let mask = self.flips.iter().enumerate().fold(0usize, |m, (l, &f)| m | ((f as usize) << (n - 1 - l)));
        if mask != 0 {
            let mut flipped = out.amplitudes.clone();
            for (i, a) in out.amplitudes.iter().enumerate() {
                flipped[i ^ mask] = *a;
            }
            out.amplitudes = flipped;
        }
        out
    }
}

/// Output of [`compile_program`].
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledProgram {
    pub program: NetworkProgram,
    pub ledger: CascadeLedger,
    /// Frame after the last gate; identity when routing is restored and the
    /// circuit has no `SWAP` gates.
    pub frame: QubitFrame,
    /// Upper triplet of every `SWAP₂` inserted for routing, in order.
    pub routing_swaps: Vec<usize>,
    pub qubit_count: usize,
}

impl CompiledProgram {
    pub fn layout(&self) -> QubitLayout {
        QubitLayout::regular(self.qubit_count)
    }

    /// Runs the program on a logical basis state and decodes the result in
    /// logical order.
    pub fn simulate(&self, input_bits: &str) -> Result<QubitAmplitudes> {
        Ok(self.frame.decode(&self.simulate_physical(input_bits)?))
    }

    /// Like [`simulate`](Self::simulate) but without undoing the frame.
    pub fn simulate_physical(&self, input_bits: &str) -> Result<QubitAmplitudes> {
        let layout = self.layout();
        let input = prepare_computational_basis(input_bits, &layout)?;
        let out = run_program(&self.program, &input)?;
        decode_qubits(&project_qubit_structure(&out, &layout)?, &layout)
    }
}

/// A compiled circuit together with its mesh layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Compilation {
    pub compiled: CompiledProgram,
    pub mesh: MeshAssignment,
}

struct Emitter {
    opts: CompileOptions,
    program: NetworkProgram,
    frame: QubitFrame,
    carriers: Vec<usize>,
    ledger: CascadeLedger,
    routing_swaps: Vec<usize>,
}

impl Emitter {
    fn single(&mut self, gate: SingleQubitGate, qubit: usize) -> Result<()> {
        self.device(&gate.matrix(), gate, qubit)
    }

    fn device(&mut self, m: &ComplexMatrix, gate: SingleQubitGate, qubit: usize) -> Result<()> {
        let m = if self.frame.flips[qubit] {
            let x = std_gates::pauli_x();
            &(&x * m) * &x
        } else {
            m.clone()
        };
        let top = 3 * self.frame.positions[qubit] + 1;
        self.program.push_block(exact_block(top, &m, gate.role()))
    }

    fn offset_blocks(&mut self, blocks: &[Block], first_mode: usize) -> Result<()> {
        for b in blocks {
            self.program.push_block(Block { top: b.top + first_mode, ..*b })?;
        }
        Ok(())
    }

    fn swap2(&mut self, p: usize) -> Result<()> {
        self.offset_blocks(&swap2().blocks, 3 * p)?;
        self.frame.apply_swap2(p);
        Ok(())
    }

    /// Brings `b` next to `a`, returning the swaps performed.
    fn route(&mut self, a: usize, b: usize) -> Result<Vec<usize>> {
        let mut done = Vec::new();
        loop {
            let (pa, pb) = (self.frame.positions[a], self.frame.positions[b]);
            if pa.abs_diff(pb) == 1 {
                return Ok(done);
            }
            let p = if pb > pa { pb - 1 } else { pb };
            self.swap2(p)?;
            done.push(p);
        }
    }

    fn unroute(&mut self, swaps: &[usize]) -> Result<()> {
        for &p in swaps.iter().rev() {
            self.swap2(p)?;
        }
        Ok(())
    }

    fn check_cascade(&mut self, a: usize, b: usize) -> Result<()> {
        let (ca, cb) = (self.carriers[a], self.carriers[b]);
        if !self.ledger.record(ca, cb) && !self.opts.allow_illegal_cascade {
            return Err(Error::IllegalCascade { a: ca.min(cb), b: ca.max(cb) });
        }
        Ok(())
    }

    /// Post-selected CZ on adjacent qubits, with rail-flip corrections.
    fn cz_adjacent(&mut self, a: usize, b: usize) -> Result<()> {
        let (pa, pb) = (self.frame.positions[a], self.frame.positions[b]);
        let p = pa.min(pb);
        let blocks = match self.opts.cz_form {
            CzForm::Compressed => cz_ps_regular().blocks,
            CzForm::SwapSandwich => cz_ps_sandwich().blocks,
        };
        self.offset_blocks(&blocks, 3 * p)?;
        if self.opts.truncate_aux {
            self.program.push_truncation(vec![3 * p, 3 * p + 3])?;
        }
        // CZ on flipped rails acts as (Z^{f_b} ⊗ Z^{f_a}) · CZ up to a global sign
        let (fa, fb) = (self.frame.flips[a], self.frame.flips[b]);
        if fb {
            self.single(SingleQubitGate::Z, a)?;
        }
        if fa {
            self.single(SingleQubitGate::Z, b)?;
        }
        Ok(())
    }

    fn gate(&mut self, gate: Gate) -> Result<()> {
        match gate {
            Gate::Single { gate, qubit } => self.single(gate, qubit),
            Gate::Cz { a, b } => {
                self.check_cascade(a, b)?;
                let swaps = self.route(a, b)?;
                self.cz_adjacent(a, b)?;
                self.finish_routing(swaps)
            }
            Gate::Cnot { control, target } => {
                self.check_cascade(control, target)?;
                let swaps = self.route(control, target)?;
                self.single(SingleQubitGate::H, target)?;
                self.cz_adjacent(control, target)?;
                self.single(SingleQubitGate::H, target)?;
                self.finish_routing(swaps)
            }
            Gate::Swap { a, b } => {
                let swaps = self.route(a, b)?;
                let p = self.frame.positions[a].min(self.frame.positions[b]);
                self.offset_blocks(&swap2().blocks, 3 * p)?;
                // the states move, the labels stay: |x y⟩ → |ȳ x̄⟩
                let (fa, fb) = (self.frame.flips[a], self.frame.flips[b]);
                self.frame.flips[a] = !fb;
                self.frame.flips[b] = !fa;
                self.carriers.swap(a, b);
                self.finish_routing(swaps)
            }
        }
    }

    fn finish_routing(&mut self, swaps: Vec<usize>) -> Result<()> {
        self.routing_swaps.extend(&swaps);
        if self.opts.restore_routing {
            self.routing_swaps.extend(swaps.iter().rev());
            self.unroute(&swaps)?;
        }
        Ok(())
    }
}

/// Translates a circuit into a network program on `3n` modes.
pub fn compile_program(circuit: &CircuitIR, options: &CompileOptions) -> Result<CompiledProgram> {
    let n = circuit.qubit_count();
    let mut e = Emitter {
        opts: *options,
        program: NetworkProgram::new(3 * n),
        frame: QubitFrame::identity(n),
        carriers: (0..n).collect(),
        ledger: CascadeLedger::default(),
        routing_swaps: Vec::new(),
    };
    for &g in circuit.gates() {
        e.gate(g)?;
    }
    Ok(CompiledProgram {
        program: e.program,
        ledger: e.ledger,
        frame: e.frame,
        routing_swaps: e.routing_swaps,
        qubit_count: n,
    })
}

/// Compiles the circuit and places it on the mesh selected in `options`.
pub fn compile(circuit: &CircuitIR, options: &CompileOptions) -> Result<Compilation> {
    let compiled = compile_program(circuit, options)?;
    let m = compiled.program.mode_count();
    let mesh = place_in_mesh(&compiled.program, options.scheme, m)?;
    Ok(Compilation { compiled, mesh })
}

/// Three-qubit GHZ preparation where the last CNOT reaches qubit 2 through a
/// `SWAP₂` on triplets (1, 2) instead of acting on qubits (1, 2).
///
/// The returned frame records that logical qubits 1 and 2 end up exchanged
/// and rail-flipped.
pub fn compile_ghz_swap_variant() -> CompiledProgram {
    let mut c = CircuitIR::new(3).expect("three qubits");
    c.single(SingleQubitGate::H, 0).expect("valid gate");
    c.cnot(0, 1).expect("valid gate");
    c.cnot(0, 2).expect("valid gate");
    let opts = CompileOptions { restore_routing: false, ..CompileOptions::default() };
    compile_program(&c, &opts).expect("distinct pairs compile")
}

/// Compiles and runs `circuit` on the basis state `input_bits`, returning
/// logical-order amplitudes after post-selection.
pub fn simulate_circuit(circuit: &CircuitIR, input_bits: &str, options: &CompileOptions) -> Result<QubitAmplitudes> {
    compile_program(circuit, options)?.simulate(input_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Step;
    use crate::linalg::C0;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ghz(n: usize) -> Vec<Complex64> {
        let mut v = vec![C0; 1 << n];
        v[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        v[(1 << n) - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        v
    }

    #[test]
    fn bell_state() {
        let out = simulate_circuit(&CircuitIR::bell(), "00", &CompileOptions::default()).unwrap();
        assert!(out.fidelity(&ghz(2)) > 1.0 - 1e-12);
        assert!((out.success_probability - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_program_structure() {
        let c = compile_program(&CircuitIR::ghz_chain(3).unwrap(), &CompileOptions::default()).unwrap();
        let truncs: Vec<&Step> = c.program.steps().iter().filter(|s| matches!(s, Step::TruncateAux(_))).collect();
        assert_eq!(truncs, vec![&Step::TruncateAux(vec![0, 3]), &Step::TruncateAux(vec![3, 6])]);
        // H, then H + five CZ blocks + H per CNOT
        assert_eq!(c.program.blocks().count(), 1 + 2 * 7);
        assert!(c.frame.is_identity());
        assert_eq!(c.ledger.pairs().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn repeated_pair_is_rejected() {
        let mut c = CircuitIR::new(2).unwrap();
        c.cnot(0, 1).unwrap().cz(1, 0).unwrap();
        let err = compile_program(&c, &CompileOptions::default()).unwrap_err();
        assert_eq!(err, Error::IllegalCascade { a: 0, b: 1 });
        let opts = CompileOptions { allow_illegal_cascade: true, ..CompileOptions::default() };
        assert!(compile_program(&c, &opts).is_ok());
    }

    #[test]
    fn swap_variant_routing() {
        let c = compile_ghz_swap_variant();
        assert_eq!(c.routing_swaps, vec![1]);
        assert_eq!(c.frame.positions(), &[0, 2, 1]);
        assert_eq!(c.frame.flips(), &[false, true, true]);
        let logical = c.simulate("000").unwrap();
        assert!(logical.fidelity(&ghz(3)) > 1.0 - 1e-12);
        assert!((logical.success_probability - 1.0 / 81.0).abs() < 1e-12);
        // without un-mapping the amplitudes sit on |011⟩ and |100⟩
        let physical = c.simulate_physical("000").unwrap();
        assert!((physical.amplitudes[0b011].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((physical.amplitudes[0b100].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn routing_is_undone_by_default() {
        let mut c = CircuitIR::new(4).unwrap();
        c.single(SingleQubitGate::X, 0).unwrap().cnot(0, 3).unwrap();
        let compiled = compile_program(&c, &CompileOptions::default()).unwrap();
        assert_eq!(compiled.routing_swaps, vec![2, 1, 1, 2]);
        assert!(compiled.frame.is_identity());
        let out = compiled.simulate("0000").unwrap();
        assert!((out.amplitudes[0b1001].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn logical_swap_keeps_labels() {
        let mut c = CircuitIR::new(2).unwrap();
        c.single(SingleQubitGate::X, 0).unwrap().swap(0, 1).unwrap();
        let compiled = compile_program(&c, &CompileOptions::default()).unwrap();
        assert_eq!(compiled.frame.positions(), &[0, 1]);
        assert_eq!(compiled.frame.flips(), &[true, true]);
        let out = compiled.simulate("00").unwrap();
        assert!((out.amplitudes[0b01].norm() - 1.0).abs() < 1e-12);
        assert!((out.success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_circuit() {
        let mut c = CircuitIR::new(3).unwrap();
        c.single(SingleQubitGate::I, 1).unwrap();
        let out = simulate_circuit(&c, "101", &CompileOptions::default()).unwrap();
        assert!((out.amplitudes[0b101] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((out.success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cz_forms_agree() {
        let mut c = CircuitIR::new(2).unwrap();
        c.single(SingleQubitGate::H, 0).unwrap().single(SingleQubitGate::H, 1).unwrap().cz(0, 1).unwrap();
        let a = simulate_circuit(&c, "00", &CompileOptions::default()).unwrap();
        let opts = CompileOptions { cz_form: CzForm::SwapSandwich, scheme: Scheme::Reck, ..CompileOptions::default() };
        let b = simulate_circuit(&c, "00", &opts).unwrap();
        let overlap: Complex64 = a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        assert!(compile(&c, &opts).is_ok());
    }

    #[test]
    fn bell_fits_both_meshes() {
        for scheme in [Scheme::Clements, Scheme::Reck] {
            let opts = CompileOptions { scheme, ..CompileOptions::default() };
            let c = compile(&CircuitIR::bell(), &opts).unwrap();
            assert_eq!(c.mesh.used_slots(), c.compiled.program.blocks().count());
            assert_eq!(c.mesh.truncations.len(), 1);
        }
    }
}
