//! Dense complex matrices and the optical device matrices built from them.
//!
//! Device matrices (`beam_splitter`, `phase_shifter`, `mzi_unitary`) act on
//! single-photon amplitude vectors. The Fock engine works with the
//! creation-operator transform instead; [`creation_from_device`] converts.

mod permanent;

pub use permanent::{permanent, PERMANENT_CAP};

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Default tolerance for physics comparisons.
pub const PHYSICS_TOL: f64 = 1e-9;
/// Default tolerance for exact construction identities.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![C0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C1;
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Builds a matrix from real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Permutation matrix with a 1 at `(i, perm[i])`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len(), perm.len());
        for (i, &j) in perm.iter().enumerate() {
            m[(i, j)] = C1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|z| *z = z.conj());
        t
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = self[(i, j)] * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> =
                self.row(i).iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Lossy or lossless beam splitter `[[t, i r], [i r, t]]`.
pub fn bs_general(t: f64, r: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(vec![
        vec![Complex64::new(t, 0.0), Complex64::new(0.0, r)],
        vec![Complex64::new(0.0, r), Complex64::new(t, 0.0)],
    ])
}

/// Balanced 50:50 beam splitter.
pub fn beam_splitter() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    bs_general(s, s)
}

/// `diag(e^{iθ₁}, e^{iθ₂})`.
pub fn phase_shifter(theta1: f64, theta2: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex64::cis(theta1), Complex64::cis(theta2)])
}

/// Phases of a Mach-Zehnder interferometer.
///
/// `theta` sits between the two beam splitters, `phi` at the input. The
/// optional output pair `phi3`/`phi4` turns the device into an extended MZI.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MziSetting {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<(f64, f64)>,
}

impl MziSetting {
    /// Setting with `θ₂ = φ₂ = 0` and the given relative phases.
    pub fn relative(delta_theta: f64, delta_phi: f64) -> Self {
        Self { theta1: delta_theta, theta2: 0.0, phi1: delta_phi, phi2: 0.0, output: None }
    }

    /// Extended setting with output phases `(Δφ_out, 0)`.
    pub fn relative_extended(delta_theta: f64, delta_phi: f64, delta_out: f64) -> Self {
        Self { output: Some((delta_out, 0.0)), ..Self::relative(delta_theta, delta_phi) }
    }

    pub fn delta_theta(&self) -> f64 {
        self.theta1 - self.theta2
    }

    pub fn delta_phi(&self) -> f64 {
        self.phi1 - self.phi2
    }

    pub fn delta_out(&self) -> Option<f64> {
        self.output.map(|(a, b)| a - b)
    }

    pub fn is_extended(&self) -> bool {
        self.output.is_some()
    }

    /// Device matrix of this setting, extended or not.
    pub fn matrix(&self) -> ComplexMatrix {
        match self.output {
            Some(_) => extended_mzi_unitary(self),
            None => mzi_unitary(self),
        }
    }
}

/// `BS · PS(θ₁, θ₂) · BS · PS(φ₁, φ₂)`, ignoring any output phases.
pub fn mzi_unitary(s: &MziSetting) -> ComplexMatrix {
    let bs = beam_splitter();
    let inner = &phase_shifter(s.theta1, s.theta2) * &(&bs * &phase_shifter(s.phi1, s.phi2));
    &bs * &inner
}

/// `PS(φ₃, φ₄) · mzi_unitary(s)`; output phases default to zero.
pub fn extended_mzi_unitary(s: &MziSetting) -> ComplexMatrix {
    let (p3, p4) = s.output.unwrap_or((0.0, 0.0));
    &phase_shifter(p3, p4) * &mzi_unitary(s)
}

/// Writes a 2x2 `block` on modes `(top, top + 1)` of an `m`-mode identity.
/// Mode indices are 0-based.
pub fn embed_block(block: &ComplexMatrix, top: usize, m: usize) -> Result<ComplexMatrix> {
    if block.rows() != 2 || block.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: block.rows().max(block.cols()) });
    }
    if top + 1 >= m {
        return Err(Error::ModeOutOfRange { mode: top + 1, modes: m });
    }
    let mut out = ComplexMatrix::identity(m);
    for i in 0..2 {
        for j in 0..2 {
            out[(top + i, top + j)] = block[(i, j)];
        }
    }
    Ok(out)
}

/// Converts a device (amplitude) matrix `D` into the creation-operator
/// transform `a†_j → Σ_k T_jk a†_k` used by the Fock engine: `T = Dᵀ`.
///
/// A photon in mode `j` ends in mode `k` with amplitude `D_kj`, so the
/// transpose is exact for any matrix. For real orthogonal `D` it coincides
/// with `D⁻¹`.
pub fn creation_from_device(d: &ComplexMatrix) -> ComplexMatrix {
    d.transpose()
}

/// Result of [`check_unitary`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitarityReport {
    pub max_deviation: f64,
    pub is_unitary: bool,
}

/// Haar-random `m × m` unitary: Gram-Schmidt on the columns of a complex
/// Gaussian matrix. The implied triangular factor has a positive diagonal,
/// which is what makes the result Haar distributed.
pub fn random_unitary<R: rand::Rng + ?Sized>(m: usize, rng: &mut R) -> ComplexMatrix {
    let mut gauss = || {
        // Box-Muller
        let (u1, u2): (f64, f64) = (rng.gen_range(f64::EPSILON..1.0), rng.gen());
        let r = (-2.0 * u1.ln()).sqrt();
        Complex64::from_polar(r, 2.0 * std::f64::consts::PI * u2)
    };
    let mut cols: Vec<Vec<Complex64>> = (0..m).map(|_| (0..m).map(|_| gauss()).collect()).collect();
    for j in 0..m {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let (q, v) = (&done[k], &mut rest[0]);
            let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in v.iter_mut().zip(q) {
                *x -= proj * a;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(m, m);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Entry-wise deviation of `U†U` from the identity.
pub fn check_unitary(m: &ComplexMatrix, tol: f64) -> Result<UnitarityReport> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let g = &m.adjoint() * m;
    let max_deviation = g.max_abs_diff(&ComplexMatrix::identity(m.rows()))?;
    Ok(UnitarityReport { max_deviation, is_unitary: max_deviation <= tol })
}

/// Whether `a = e^{iγ} b` entry-wise within `tol`.
///
/// `γ` is taken from the entry where `|a| + |b|` is largest (first such entry
/// in row-major order), which keeps the test symmetric in its arguments.
pub fn equal_mod_global_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool> {
    a.check_same_shape(b)?;
    let pivot = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.norm() + y.norm())
        .enumerate()
        .fold((0, -1.0), |best, (i, w)| if w > best.1 { (i, w) } else { best })
        .0;
    let (pa, pb) = (a.entries()[pivot], b.entries()[pivot]);
    let phase = if pa.norm() > 0.0 && pb.norm() > 0.0 {
        Complex64::cis(pa.arg() - pb.arg())
    } else {
        C1
    };
    Ok(a.max_abs_diff(&b.scale(phase))? <= tol)
}

/// Pauli and Clifford+T matrices used throughout.
pub mod std_gates {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![C0, -CI], vec![CI, C0]])
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    pub fn hadamard() -> ComplexMatrix {
        let s = FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]])
    }

    pub fn t_gate() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[C1, Complex64::cis(FRAC_PI_4)])
    }

    /// `exp(-i δ X / 2)`.
    pub fn rx(delta: f64) -> ComplexMatrix {
        let (c, s) = ((delta / 2.0).cos(), (delta / 2.0).sin());
        ComplexMatrix::from_rows(vec![
            vec![Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            vec![Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ])
    }

    /// `exp(-i δ Y / 2)`.
    pub fn ry(delta: f64) -> ComplexMatrix {
        let (c, s) = ((delta / 2.0).cos(), (delta / 2.0).sin());
        ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]])
    }

    /// `exp(-i δ Z / 2)`.
    pub fn rz(delta: f64) -> ComplexMatrix {
        ComplexMatrix::diagonal(&[Complex64::cis(-delta / 2.0), Complex64::cis(delta / 2.0)])
    }

    /// Two-qubit CZ in the basis `|q0 q1⟩`, `q0` most significant.
    pub fn cz() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[C1, C1, C1, -C1])
    }

    /// CNOT with `q0` as control.
    pub fn cnot() -> ComplexMatrix {
        ComplexMatrix::permutation(&[0, 1, 3, 2])
    }

    pub fn swap() -> ComplexMatrix {
        ComplexMatrix::permutation(&[0, 2, 1, 3])
    }
}
