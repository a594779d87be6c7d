//! Reference implementations shared by the integration tests. None of them
//! call into the library's numerics.

#![allow(dead_code)]

use num_complex::Complex64;
use photonmesh::linalg::ComplexMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_rows(
        (0..n).map(|_| (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).collect(),
    )
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Permanent as the plain sum over permutations.
pub fn leibniz_permanent(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    permutations(n).iter().map(|p| (0..n).map(|i| m[(i, p[i])]).product::<Complex64>()).sum()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `⟨out| T |in⟩` from the first-quantized formula with a Leibniz permanent.
pub fn transition_amplitude(t: &ComplexMatrix, input: &[u8], output: &[u8]) -> Complex64 {
    let expand = |occ: &[u8]| -> Vec<usize> { occ.iter().enumerate().flat_map(|(j, &k)| vec![j; k as usize]).collect() };
    let (rows, cols) = (expand(input), expand(output));
    if rows.len() != cols.len() {
        return Complex64::new(0.0, 0.0);
    }
    let sub = ComplexMatrix::from_rows(rows.iter().map(|&r| cols.iter().map(|&c| t[(r, c)]).collect()).collect());
    let norm: f64 = input.iter().chain(output).map(|&k| factorial(k as usize)).product();
    leibniz_permanent(&sub) / norm.sqrt()
}

/// Every occupation of `m` modes with exactly `n` photons.
pub fn occupations(m: usize, n: usize) -> Vec<Vec<u8>> {
    if m == 1 {
        return vec![vec![n as u8]];
    }
    (0..=n)
        .flat_map(|k| {
            occupations(m - 1, n - k).into_iter().map(move |mut rest| {
                rest.insert(0, k as u8);
                rest
            })
        })
        .collect()
}

/// Dense state vector over `n` qubits, qubit 0 the most significant bit.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl Dense {
    pub fn basis(bits: &str) -> Self {
        let n = bits.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[usize::from_str_radix(bits, 2).unwrap()] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    fn bit(&self, idx: usize, q: usize) -> usize {
        (idx >> (self.n - 1 - q)) & 1
    }

    /// `u` given as `[[u00, u01], [u10, u11]]` acting on column vectors.
    pub fn one(&mut self, u: [[Complex64; 2]; 2], q: usize) {
        let mask = 1 << (self.n - 1 - q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mask]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | mask] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        for i in 0..self.amps.len() {
            if self.bit(i, a) == 1 && self.bit(i, b) == 1 {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let mask = 1 << (self.n - 1 - t);
        for i in 0..self.amps.len() {
            if self.bit(i, c) == 1 && i & mask == 0 {
                self.amps.swap(i, i | mask);
            }
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (1 << (self.n - 1 - a), 1 << (self.n - 1 - b));
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, (i & !ma) | mb);
            }
        }
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap(&self, other: &[Complex64]) -> f64 {
        self.amps.iter().zip(other).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Textbook matrices written out independently of the library.
pub mod textbook {
    use super::c;
    use num_complex::Complex64;

    pub type M2 = [[Complex64; 2]; 2];

    pub fn x() -> M2 {
        [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
    }
    pub fn y() -> M2 {
        [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]
    }
    pub fn z() -> M2 {
        [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
    }
    pub fn h() -> M2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
    }
    pub fn t() -> M2 {
        [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]]
    }
    pub fn rz(d: f64) -> M2 {
        [[Complex64::from_polar(1.0, -d / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, d / 2.0)]]
    }
    pub fn rx(d: f64) -> M2 {
        let (co, s) = ((d / 2.0).cos(), (d / 2.0).sin());
        [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
    }
    pub fn ry(d: f64) -> M2 {
        let (co, s) = ((d / 2.0).cos(), (d / 2.0).sin());
        [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
    }
}
