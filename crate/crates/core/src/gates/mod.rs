//! The photonic gate library.
//!
//! Single-qubit gates are one MZI on a qubit's rail doublet. Two-qubit gates
//! and swap networks are stored twice: as the closed-form creation-operator
//! matrix on their native modes and as a list of MZI blocks in application
//! order. Construction checks that the two agree.

mod swap;
mod two_qubit;

pub use swap::{swap1_a, swap2, swap2_a, swap2_prime, x_swap};
pub use two_qubit::{
    cnot_ps, cz_ps_nonregular, cz_ps_regular, cz_ps_sandwich, r13_matrices, R13Family, R13_ANGLE,
};

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{Block, BlockRole};
use crate::linalg::{equal_mod_global_phase, std_gates, ComplexMatrix, MziSetting, PHYSICS_TOL};

/// Single-qubit gates with a known MZI recipe. Rotations follow
/// `R_σ(δ) = exp(-i δ σ / 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingleQubitGate {
    I,
    X,
    Y,
    Z,
    H,
    T,
    Rz(f64),
    Rx(f64),
    Ry(f64),
}

impl SingleQubitGate {
    /// Parses a circuit symbol; rotations need an angle.
    pub fn from_symbol(symbol: &str, angle: Option<f64>) -> Result<Self> {
        let need = |a: Option<f64>| a.ok_or_else(|| Error::InvalidCircuit(format!("{symbol} needs an angle")));
        Ok(match symbol.to_ascii_uppercase().as_str() {
            "I" | "ID" => Self::I,
            "X" => Self::X,
            "Y" => Self::Y,
            "Z" => Self::Z,
            "H" => Self::H,
            "T" => Self::T,
            "RZ" => Self::Rz(need(angle)?),
            "RX" => Self::Rx(need(angle)?),
            "RY" => Self::Ry(need(angle)?),
            _ => return Err(Error::UnknownGate(symbol.to_string())),
        })
    }

    pub fn symbol(&self) -> &'static str {
        self.role().symbol()
    }

    pub fn role(&self) -> BlockRole {
        match self {
            Self::I => BlockRole::Identity,
            Self::X => BlockRole::X,
            Self::Y => BlockRole::Y,
            Self::Z => BlockRole::Z,
            Self::H => BlockRole::H,
            Self::T => BlockRole::T,
            Self::Rz(_) => BlockRole::Rz,
            Self::Rx(_) => BlockRole::Rx,
            Self::Ry(_) => BlockRole::Ry,
        }
    }

    /// Textbook 2x2 matrix acting on `(|0⟩, |1⟩)` amplitudes.
    pub fn matrix(&self) -> ComplexMatrix {
        match *self {
            Self::I => std_gates::identity(),
            Self::X => std_gates::pauli_x(),
            Self::Y => std_gates::pauli_y(),
            Self::Z => std_gates::pauli_z(),
            Self::H => std_gates::hadamard(),
            Self::T => std_gates::t_gate(),
            Self::Rz(d) => std_gates::rz(d),
            Self::Rx(d) => std_gates::rx(d),
            Self::Ry(d) => std_gates::ry(d),
        }
    }

    /// Table-style gates (no angle).
    pub fn fixed() -> [Self; 6] {
        [Self::I, Self::X, Self::Y, Self::Z, Self::H, Self::T]
    }
}

/// Canonical MZI setting of a single-qubit gate: relative phases from the
/// standard recipe, with `θ₂ = φ₂ = 0`. Equal to the gate up to a global phase.
///
/// | gate  | (θ₁−θ₂, φ₁−φ₂[, φ₃−φ₄]) |
/// |-------|--------------------------|
/// | I     | (π, π)                   |
/// | X     | (0, 0)                   |
/// | Y     | (0, π)                   |
/// | Z     | (π, 0)                   |
/// | H     | (π/2, 0)                 |
/// | T     | (π, 3π/4)                |
/// | Rz(δ) | (π, π−δ)                 |
/// | Rx(δ) | (π−δ, π/2, π/2)          |
/// | Ry(δ) | (π+δ, 0, π)              |
pub fn single_qubit_setting(gate: SingleQubitGate) -> MziSetting {
    match gate {
        SingleQubitGate::I => MziSetting::relative(PI, PI),
        SingleQubitGate::X => MziSetting::relative(0.0, 0.0),
        SingleQubitGate::Y => MziSetting::relative(0.0, PI),
        SingleQubitGate::Z => MziSetting::relative(PI, 0.0),
        SingleQubitGate::H => MziSetting::relative(FRAC_PI_2, 0.0),
        SingleQubitGate::T => MziSetting::relative(PI, 3.0 * PI / 4.0),
        SingleQubitGate::Rz(d) => MziSetting::relative(PI, PI - d),
        SingleQubitGate::Rx(d) => MziSetting::relative_extended(PI - d, FRAC_PI_2, FRAC_PI_2),
        SingleQubitGate::Ry(d) => MziSetting::relative_extended(PI + d, 0.0, PI),
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

const REALIZE_EPS: f64 = 1e-12;

/// MZI setting whose device matrix equals `target` exactly, global phase
/// included.
///
/// A plain MZI is used whenever one exists. Otherwise the output phase pair
/// is added (`φ₄ = 0`). Relative phases are wrapped into `(-π, π]`; the
/// global phase is carried by a common shift of `θ₁` and `θ₂`.
pub fn realize(target: &ComplexMatrix) -> Result<MziSetting> {
    if target.rows() != 2 || target.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: target.rows() });
    }
    let (a, b, c, d) = (target[(0, 0)], target[(0, 1)], target[(1, 0)], target[(1, 1)]);
    // target = diag(e^{iφ3}, e^{iφ4}) · P · [[e^{iΔφ} s, co], [e^{iΔφ} co, -s]],
    // with P = i e^{i(Δθ/2 + t)} when θ₁ = Δθ + t, θ₂ = t, φ₂ = 0.
    let (s, co, arg_p, dphi, out) = if b.norm() < REALIZE_EPS {
        let arg_p = (-d).arg();
        (1.0, 0.0, arg_p, a.arg() - arg_p, None)
    } else if a.norm() < REALIZE_EPS {
        (0.0, 1.0, b.arg(), c.arg() - b.arg(), None)
    } else {
        let r = b / (-d);
        if r.im.abs() <= REALIZE_EPS * r.norm() {
            let s = a.norm() * r.re.signum();
            let arg_p = b.arg();
            let sign_phase = if s < 0.0 { PI } else { 0.0 };
            (s, b.norm(), arg_p, a.arg() - arg_p - sign_phase, None)
        } else {
            let arg_p = (-d).arg();
            (a.norm(), b.norm(), arg_p, a.arg() - b.arg(), Some(b.arg() - arg_p))
        }
    };
    let dtheta = 2.0 * s.atan2(co);
    let t = wrap_angle(arg_p - FRAC_PI_2 - dtheta / 2.0);
    let setting = MziSetting {
        theta1: dtheta + t,
        theta2: t,
        phi1: wrap_angle(dphi),
        phi2: 0.0,
        output: out.map(|o| (wrap_angle(o), 0.0)),
    };
    if setting.matrix().approx_eq(target, 1e-10) {
        Ok(setting)
    } else {
        Err(Error::Unrealizable)
    }
}

/// Block reproducing the device matrix `target` exactly on `(top, top + 1)`.
pub(crate) fn exact_block(top: usize, target: &ComplexMatrix, role: BlockRole) -> Block {
    Block::new(top, realize(target).expect("library matrices are unitary 2x2"), role)
}

/// Which mode order a descriptor's matrix refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Labeling {
    /// The two rails of one qubit.
    Doublet,
    /// Rails of two qubits without auxiliary modes.
    DualRail,
    /// (aux, rail 0, rail 1) per qubit.
    Regular,
    /// (aux₀, 0₀, 1₀, 0₁, 1₁, aux₁).
    NonRegular,
}

/// A gate with its closed-form matrix and MZI decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct GateDescriptor {
    pub name: String,
    /// Number of qubits acted on (0 for pure waveguide permutations).
    pub arity: usize,
    /// Creation-operator transform on the native modes.
    pub matrix: ComplexMatrix,
    pub labeling: Labeling,
    /// MZI blocks in application order, modes relative to the native set.
    pub blocks: Vec<Block>,
    /// Whether auxiliary modes must be truncated after the gate.
    pub truncate_after: bool,
}

impl GateDescriptor {
    /// Builds a descriptor and checks that its blocks reproduce `matrix`
    /// modulo a global phase.
    pub fn new(
        name: &str,
        arity: usize,
        matrix: ComplexMatrix,
        labeling: Labeling,
        blocks: Vec<Block>,
        truncate_after: bool,
    ) -> Result<Self> {
        let d = Self { name: name.to_string(), arity, matrix, labeling, blocks, truncate_after };
        if !equal_mod_global_phase(&d.block_product()?, &d.matrix, PHYSICS_TOL)? {
            return Err(Error::InvalidCircuit(format!("blocks of {name} do not reproduce its matrix")));
        }
        Ok(d)
    }

    pub fn mode_count(&self) -> usize {
        self.matrix.rows()
    }

    /// Product of the embedded block transforms in application order.
    pub fn block_product(&self) -> Result<ComplexMatrix> {
        let m = self.mode_count();
        let mut total = ComplexMatrix::identity(m);
        for b in &self.blocks {
            total = &total * &b.embedded(m)?;
        }
        Ok(total)
    }

    /// Blocks grouped into layers of mutually disjoint blocks, greedily.
    pub fn layers(&self) -> Vec<Vec<Block>> {
        let mut depth = vec![0usize; self.mode_count()];
        let mut layers: Vec<Vec<Block>> = Vec::new();
        for b in &self.blocks {
            let l = depth[b.top].max(depth[b.top + 1]);
            if layers.len() <= l {
                layers.push(Vec::new());
            }
            layers[l].push(*b);
            depth[b.top] = l + 1;
            depth[b.top + 1] = l + 1;
        }
        layers
    }
}

impl fmt::Display for GateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} modes, {} blocks)", self.name, self.mode_count(), self.blocks.len())
    }
}

/// Descriptor of a single-qubit gate on its doublet.
pub fn single_qubit_descriptor(gate: SingleQubitGate) -> GateDescriptor {
    let device = gate.matrix();
    let block = exact_block(0, &device, gate.role());
    GateDescriptor::new(
        gate.symbol(),
        1,
        crate::linalg::creation_from_device(&device),
        Labeling::Doublet,
        vec![block],
        false,
    )
    .expect("single-qubit block reproduces its gate")
}

/// Every descriptor in the library, in a fixed order.
pub fn library() -> Vec<GateDescriptor> {
    let mut all: Vec<GateDescriptor> = SingleQubitGate::fixed().into_iter().map(single_qubit_descriptor).collect();
    let r = r13_matrices();
    for (name, m, role) in [
        ("R13", &r.r, BlockRole::R13),
        ("R13p", &r.r_prime, BlockRole::R13Prime),
        ("R13d", &r.r_dagger, BlockRole::R13Dagger),
    ] {
        let block = exact_block(0, m, role);
        all.push(
            GateDescriptor::new(name, 0, crate::linalg::creation_from_device(m), Labeling::Doublet, vec![block], false)
                .expect("R13 blocks are exact"),
        );
    }
    all.extend([
        cz_ps_nonregular(),
        cz_ps_regular(),
        cz_ps_sandwich(),
        cnot_ps(Labeling::NonRegular),
        cnot_ps(Labeling::Regular),
        x_swap(),
        swap2_prime(),
        swap1_a(),
        swap2_a(),
        swap2(),
    ]);
    all
}

/// Looks up a descriptor by name (case-insensitive).
pub fn find(name: &str) -> Option<GateDescriptor> {
    library().into_iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
