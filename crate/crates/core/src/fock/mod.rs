//! Multi-photon Fock states and their evolution through linear networks.
//!
//! States are sparse maps from occupation vectors to amplitudes in the
//! normalized occupation basis `|n⟩ = Π (a†_j)^{n_j} / √(n_j!) |Ω⟩`. Linear
//! layers are given as creation-operator transforms `a†_j → Σ_k T_jk a†_k`.
//! Nothing is ever renormalized: after truncation or projection the squared
//! norm is the success probability.

mod layout;
mod program;

pub use layout::{QubitLayout, QubitModes};
pub use program::{run_program, Block, BlockRole, NetworkProgram, Step};

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{permanent, ComplexMatrix, C0, C1};
use crate::numfmt::{chop, format_sig};

/// Amplitudes with modulus below this are dropped after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Photon counts per mode.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(Vec<u8>);

impl OccupationVector {
    pub fn new(counts: Vec<u8>) -> Self {
        Self(counts)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    /// Occupation with one photon in each listed mode (repeats add up).
    pub fn from_photons(modes: usize, photons: &[usize]) -> Self {
        let mut counts = vec![0u8; modes];
        for &p in photons {
            counts[p] += 1;
        }
        Self(counts)
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// Mode index of every photon, with multiplicity, in mode order.
    pub fn photon_modes(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(m, &c)| std::iter::repeat_n(m, c as usize)).collect()
    }

    fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&c| factorial(c)).product()
    }
}

impl fmt::Debug for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "⟩")
    }
}

fn factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

/// Sparse pure state of `mode_count` bosonic modes.
#[derive(Clone, PartialEq, Debug)]
pub struct PhotonicState {
    mode_count: usize,
    terms: BTreeMap<OccupationVector, Complex64>,
}

impl PhotonicState {
    /// The zero vector (not the vacuum).
    pub fn zero(mode_count: usize) -> Self {
        Self { mode_count, terms: BTreeMap::new() }
    }

    pub fn basis(occupation: OccupationVector) -> Self {
        Self::from_terms(occupation.modes(), [(occupation, C1)]).expect("consistent mode count")
    }

    pub fn from_terms(
        mode_count: usize,
        terms: impl IntoIterator<Item = (OccupationVector, Complex64)>,
    ) -> Result<Self> {
        let mut state = Self::zero(mode_count);
        for (occ, amp) in terms {
            if occ.modes() != mode_count {
                return Err(Error::DimensionMismatch { expected: mode_count, found: occ.modes() });
            }
            *state.terms.entry(occ).or_insert(C0) += amp;
        }
        state.prune();
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic occupation order.
    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Complex64 {
        self.terms.get(occ).copied().unwrap_or(C0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(Complex64::norm_sqr).sum()
    }

    /// Sorted distinct total photon numbers present.
    pub fn photon_numbers(&self) -> Vec<usize> {
        let mut n: Vec<usize> = self.terms.keys().map(OccupationVector::total).collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|a| *a *= s);
        out.prune();
        out
    }

    /// `self + other`; both must have the same mode count.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.mode_count != self.mode_count {
            return Err(Error::DimensionMismatch { expected: self.mode_count, found: other.mode_count });
        }
        Self::from_terms(
            self.mode_count,
            self.terms.iter().chain(other.terms.iter()).map(|(o, a)| (o.clone(), *a)),
        )
    }

    /// Largest amplitude difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max)
    }

    /// One line per term: comma-separated counts, real part, imaginary part,
    /// tab separated, 15 significant digits, lexicographic order. Parts below
    /// [`CHOP`](crate::numfmt::CHOP) print as `0`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (occ, amp) in &self.terms {
            let counts: Vec<String> = occ.counts().iter().map(u8::to_string).collect();
            out.push_str(&format!("{}\t{}\t{}\n", counts.join(","), format_sig(chop(amp.re)), format_sig(chop(amp.im))));
        }
        out
    }

    fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
    }
}

/// Evolves `state` through the creation-operator transform `t`.
///
/// Each basis term is expanded as a polynomial in creation operators, photon
/// by photon, and the monomials are converted back to the normalized basis.
pub fn apply_linear(state: &PhotonicState, t: &ComplexMatrix) -> Result<PhotonicState> {
    let m = state.mode_count;
    if t.rows() != m || t.cols() != m {
        return Err(Error::DimensionMismatch { expected: m, found: if t.rows() != m { t.rows() } else { t.cols() } });
    }
    let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
    for (occ, amp) in &state.terms {
        let mut poly: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
        poly.insert(vec![0; m], *amp / occ.factorial_product().sqrt());
        for j in occ.photon_modes() {
            let row = t.row(j);
            let mut next: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
            for (mono, coeff) in &poly {
                for (k, &tjk) in row.iter().enumerate() {
                    if tjk == C0 {
                        continue;
                    }
                    let mut key = mono.clone();
                    key[k] += 1;
                    *next.entry(key).or_insert(C0) += coeff * tjk;
                }
            }
            poly = next;
        }
        for (mono, coeff) in poly {
            let occ_out = OccupationVector(mono);
            let norm = occ_out.factorial_product().sqrt();
            *out.entry(occ_out).or_insert(C0) += coeff * norm;
        }
    }
    let mut result = PhotonicState { mode_count: m, terms: out };
    result.prune();
    Ok(result)
}

/// Transition amplitude `⟨output| T |input⟩` as a permanent of the
/// sub-matrix of `u` selected by the occupations (rows from the input,
/// columns from the output).
pub fn amplitude_via_permanent(
    u: &ComplexMatrix,
    input: &OccupationVector,
    output: &OccupationVector,
) -> Result<Complex64> {
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    for occ in [input, output] {
        if occ.modes() != u.rows() {
            return Err(Error::DimensionMismatch { expected: u.rows(), found: occ.modes() });
        }
    }
    if input.total() != output.total() {
        return Err(Error::PhotonNumberMismatch { input: input.total(), output: output.total() });
    }
    if input.total() == 0 {
        return Ok(C1);
    }
    let rows = input.photon_modes();
    let cols = output.photon_modes();
    let sub = ComplexMatrix::from_rows(
        rows.iter().map(|&r| cols.iter().map(|&c| u[(r, c)]).collect()).collect(),
    );
    let per = permanent(&sub)?;
    Ok(per / (input.factorial_product() * output.factorial_product()).sqrt())
}

/// Drops every term with a photon in any of `aux_modes`. No renormalization.
pub fn truncate_aux(state: &PhotonicState, aux_modes: &[usize]) -> Result<PhotonicState> {
    if let Some(&bad) = aux_modes.iter().find(|&&a| a >= state.mode_count) {
        return Err(Error::ModeOutOfRange { mode: bad, modes: state.mode_count });
    }
    let terms = state
        .terms
        .iter()
        .filter(|(occ, _)| aux_modes.iter().all(|&a| occ.0[a] == 0))
        .map(|(o, a)| (o.clone(), *a))
        .collect();
    Ok(PhotonicState { mode_count: state.mode_count, terms })
}

/// Projection onto the qubit subspace of a layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PostSelectionResult {
    pub projected_state: PhotonicState,
    pub success_probability: f64,
}

/// Keeps the terms with exactly one photon per qubit doublet and none in any
/// auxiliary mode.
pub fn project_qubit_structure(state: &PhotonicState, layout: &QubitLayout) -> Result<PostSelectionResult> {
    if state.mode_count != layout.mode_count() {
        return Err(Error::DimensionMismatch { expected: layout.mode_count(), found: state.mode_count });
    }
    let terms: BTreeMap<_, _> = state
        .terms
        .iter()
        .filter(|(occ, _)| layout.bits_of(occ).is_some())
        .map(|(o, a)| (o.clone(), *a))
        .collect();
    let projected_state = PhotonicState { mode_count: state.mode_count, terms };
    let success_probability = projected_state.norm_sqr();
    Ok(PostSelectionResult { projected_state, success_probability })
}

/// Conditional qubit state after post-selection.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitAmplitudes {
    /// `2^n` amplitudes, index bits ordered with qubit 0 most significant.
    pub amplitudes: Vec<Complex64>,
    pub success_probability: f64,
}

impl QubitAmplitudes {
    pub fn qubit_count(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    /// `|⟨target|self⟩|²` for a normalized target vector.
    pub fn fidelity(&self, target: &[Complex64]) -> f64 {
        self.amplitudes.iter().zip(target).map(|(a, t)| t.conj() * a).sum::<Complex64>().norm_sqr()
    }

    /// Same vector with indices relabeled: logical qubit `l` is read from
    /// position `positions[l]` of this vector.
    pub fn permute_qubits(&self, positions: &[usize]) -> Self {
        let n = self.qubit_count();
        let mut out = vec![C0; self.amplitudes.len()];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let mut logical = 0usize;
            for (l, &p) in positions.iter().enumerate() {
                let bit = (idx >> (n - 1 - p)) & 1;
                logical |= bit << (n - 1 - l);
            }
            out[logical] = *amp;
        }
        Self { amplitudes: out, success_probability: self.success_probability }
    }
}

/// Reads the projected state as a normalized `2^n` qubit vector.
pub fn decode_qubits(result: &PostSelectionResult, layout: &QubitLayout) -> Result<QubitAmplitudes> {
    let n = layout.qubit_count();
    let p = result.success_probability;
    if p <= 0.0 || result.projected_state.is_empty() {
        return Err(Error::EmptyProjection);
    }
    let mut amplitudes = vec![C0; 1 << n];
    for (occ, amp) in result.projected_state.terms() {
        let bits = layout.bits_of(occ).ok_or(Error::InvalidLayout(format!("term {occ:?} is outside the qubit subspace")))?;
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        amplitudes[index] = *amp / p.sqrt();
    }
    Ok(QubitAmplitudes { amplitudes, success_probability: p })
}

/// Encodes a `2^n` qubit vector (qubit 0 most significant) as a photonic
/// state on the layout.
pub fn encode_qubits(amplitudes: &[Complex64], layout: &QubitLayout) -> Result<PhotonicState> {
    let n = layout.qubit_count();
    if amplitudes.len() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: amplitudes.len() });
    }
    let mut terms = BTreeMap::new();
    for (i, &a) in amplitudes.iter().enumerate() {
        let photons: Vec<usize> = layout
            .qubits()
            .iter()
            .enumerate()
            .map(|(q, modes)| if (i >> (n - 1 - q)) & 1 == 1 { modes.one } else { modes.zero })
            .collect();
        terms.insert(OccupationVector::from_photons(layout.mode_count(), &photons), a);
    }
    let mut s = PhotonicState { mode_count: layout.mode_count(), terms };
    s.prune();
    Ok(s)
}

/// One photon per qubit in the rail selected by `bits` (`'0'`/`'1'`, qubit 0 first).
pub fn prepare_computational_basis(bits: &str, layout: &QubitLayout) -> Result<PhotonicState> {
    let parsed = parse_bits(bits)?;
    if parsed.len() != layout.qubit_count() {
        return Err(Error::BitCountMismatch { expected: layout.qubit_count(), found: parsed.len() });
    }
    let photons: Vec<usize> = layout
        .qubits()
        .iter()
        .zip(&parsed)
        .map(|(q, &b)| if b { q.one } else { q.zero })
        .collect();
    Ok(PhotonicState::basis(OccupationVector::from_photons(layout.mode_count(), &photons)))
}

pub(crate) fn parse_bits(bits: &str) -> Result<Vec<bool>> {
    bits.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidBits(bits.to_string())),
        })
        .collect()
}

/// Formats index `i` of an `n`-qubit vector as a bit string.
pub fn bitstring(i: usize, n: usize) -> String {
    (0..n).map(|q| if (i >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' }).collect()
}
