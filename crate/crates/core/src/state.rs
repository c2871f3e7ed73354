//! Dense n-qubit statevectors, graph-state preparation and local unitaries.
//!
//! Bit order: qubit 1 is the most significant bit of a basis index, so
//! `|q1 q2 ... qn>` sits at index `q1·2^(n-1) + ... + qn`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

pub type C64 = Complex64;

/// Tolerance on the Euclidean norm of a state.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("qubit count {0} outside 1..={MAX_VERTICES}")]
    QubitCount(usize),
    #[error("amplitude vector length {0} is not a power of two")]
    Length(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("qubit {qubit} out of range 1..={n}")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    SameQubit(usize),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),
}

/// Unit-norm amplitude vector of length `2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalised.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self, StateError> {
        let n = qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(Self { n, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self, StateError> {
        let n = qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(StateError::NotNormalized(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self, StateError> {
        check_qubits(n)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        *amps.get_mut(index).ok_or(StateError::Length(index))? = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// `|+>^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self, StateError> {
        check_qubits(n)?;
        let amp = (0.5f64).powf(n as f64 / 2.0);
        Ok(Self {
            n,
            amps: vec![C64::new(amp, 0.0); 1 << n],
        })
    }

    /// `∏_{{i,j}∈E} CZ_ij |+>^{⊗n}`.
    pub fn graph_state(g: &Graph) -> Result<Self, StateError> {
        let mut s = Self::plus(g.n())?;
        for (i, j) in g.edges() {
            s.cz_in_place(i, j)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Controlled-Z between qubits `i` and `j`.
    pub fn apply_cz(&self, i: usize, j: usize) -> Result<Self, StateError> {
        let mut out = self.clone();
        out.cz_in_place(i, j)?;
        Ok(out)
    }

    pub fn apply_local_unitary(&self, u: &LocalUnitary) -> Result<Self, StateError> {
        let mut out = self.clone();
        out.unitary_in_place(u)?;
        Ok(out)
    }

    /// The local Clifford `exp(-iπ/4 X_a) ∏_{b∈N_a} exp(iπ/4 Z_b)` that maps
    /// `|G>` to the graph state of the local complement of `G` at `a`, up to
    /// a global phase.
    pub fn apply_lc_unitary(&self, g: &Graph, a: usize) -> Result<Self, StateError> {
        if g.n() != self.n {
            return Err(StateError::DimensionMismatch(g.n(), self.n));
        }
        let nbrs = g.neighbors(a).map_err(|_| StateError::QubitOutOfRange { qubit: a, n: self.n })?;
        let mut out = self.clone();
        for b in nbrs {
            out.unitary_in_place(&LocalUnitary::sqrt_z(b))?;
        }
        out.unitary_in_place(&LocalUnitary::sqrt_x_inverse(a))?;
        Ok(out)
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner_product(&self, other: &Self) -> Result<C64, StateError> {
        if self.n != other.n {
            return Err(StateError::DimensionMismatch(self.n, other.n));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64, StateError> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// `<s| X_a ∏_{b∈N_a} Z_b |s>`; equals 1 exactly when `s` is the graph
    /// state of `g`.
    pub fn stabilizer_expectation(&self, g: &Graph, a: usize) -> Result<C64, StateError> {
        if g.n() != self.n {
            return Err(StateError::DimensionMismatch(g.n(), self.n));
        }
        let zmask = g
            .neighbors(a)
            .map_err(|_| StateError::QubitOutOfRange { qubit: a, n: self.n })?
            .into_iter()
            .fold(0usize, |m, b| m | self.bit(b));
        let xbit = self.bit(a);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(i, amp)| {
                // a ∉ N_a, so the Z signs of i and i ^ xbit agree
                let sign = if (i & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                amp.conj() * self.amps[i ^ xbit] * sign
            })
            .sum())
    }

    /// Relabels qubits: qubit `q` of `self` becomes qubit `perm[q - 1]` of the result.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self, StateError> {
        if perm.len() != self.n {
            return Err(StateError::DimensionMismatch(perm.len(), self.n));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (i, &amp) in self.amps.iter().enumerate() {
            let mut j = 0;
            for (q, &target) in perm.iter().enumerate() {
                if i & self.bit(q + 1) != 0 {
                    j |= self.bit(target);
                }
            }
            out[j] = amp;
        }
        Ok(Self { n: self.n, amps: out })
    }

    /// Single-qubit bitmask for 1-indexed qubit `q`.
    pub(crate) fn bit(&self, q: usize) -> usize {
        1 << (self.n - q)
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<(), StateError> {
        if q == 0 || q > self.n {
            Err(StateError::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    fn cz_in_place(&mut self, i: usize, j: usize) -> Result<(), StateError> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(StateError::SameQubit(i));
        }
        let mask = self.bit(i) | self.bit(j);
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            if idx & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    fn unitary_in_place(&mut self, u: &LocalUnitary) -> Result<(), StateError> {
        self.check_qubit(u.qubit)?;
        let bit = self.bit(u.qubit);
        let [[m00, m01], [m10, m11]] = u.matrix;
        for idx in 0..self.amps.len() {
            if idx & bit != 0 {
                continue;
            }
            let a0 = self.amps[idx];
            let a1 = self.amps[idx | bit];
            self.amps[idx] = m00 * a0 + m01 * a1;
            self.amps[idx | bit] = m10 * a0 + m11 * a1;
        }
        Ok(())
    }

    /// JSON dump with the bit-order convention in the header.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump<'a> {
            qubits: usize,
            bit_order: &'a str,
            amplitudes: Vec<[f64; 2]>,
        }
        serde_json::to_value(Dump {
            qubits: self.n,
            bit_order: "qubit 1 is the most significant bit of the basis index",
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        })
        .expect("plain data serializes")
    }
}

fn check_qubits(n: usize) -> Result<(), StateError> {
    if n == 0 || n > MAX_VERTICES {
        Err(StateError::QubitCount(n))
    } else {
        Ok(())
    }
}

fn qubits_for_len(len: usize) -> Result<usize, StateError> {
    if len < 2 || !len.is_power_of_two() {
        return Err(StateError::Length(len));
    }
    let n = len.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

/// A 2×2 unitary acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary {
    pub qubit: usize,
    pub matrix: [[C64; 2]; 2],
}

impl LocalUnitary {
    /// Checks `U†U = I` to 1e-12.
    pub fn new(qubit: usize, matrix: [[C64; 2]; 2]) -> Result<Self, StateError> {
        let dev = unitarity_deviation(&matrix);
        if dev > 1e-12 {
            return Err(StateError::NotUnitary(dev));
        }
        Ok(Self { qubit, matrix })
    }

    pub fn identity(qubit: usize) -> Self {
        Self::diag(qubit, C64::new(1.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn pauli_x(qubit: usize) -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self { qubit, matrix: [[o, l], [l, o]] }
    }

    pub fn pauli_z(qubit: usize) -> Self {
        Self::diag(qubit, C64::new(1.0, 0.0), C64::new(-1.0, 0.0))
    }

    pub fn hadamard(qubit: usize) -> Self {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self { qubit, matrix: [[h, h], [h, -h]] }
    }

    /// `exp(-iπ/4 σ_x) = (I - iX)/√2`.
    pub fn sqrt_x_inverse(qubit: usize) -> Self {
        let c = C64::new(FRAC_1_SQRT_2, 0.0);
        let s = C64::new(0.0, -FRAC_1_SQRT_2);
        Self { qubit, matrix: [[c, s], [s, c]] }
    }

    /// `exp(iπ/4 σ_z) = diag(e^{iπ/4}, e^{-iπ/4})`.
    pub fn sqrt_z(qubit: usize) -> Self {
        Self::diag(
            qubit,
            C64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            C64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        )
    }

    /// Haar-random element of U(2): a uniform point on S³ gives the SU(2)
    /// part, times a uniform global phase.
    pub fn random<R: Rng + ?Sized>(qubit: usize, rng: &mut R) -> Self {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let a = C64::new(v[0], v[1]) / norm;
        let b = C64::new(v[2], v[3]) / norm;
        let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        Self {
            qubit,
            matrix: [[phase * a, -phase * b.conj()], [phase * b, phase * a.conj()]],
        }
    }

    fn diag(qubit: usize, d0: C64, d1: C64) -> Self {
        let o = C64::new(0.0, 0.0);
        Self { qubit, matrix: [[d0, o], [o, d1]] }
    }
}

fn unitarity_deviation(m: &[[C64; 2]; 2]) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let entry: C64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((entry - target).norm());
        }
    }
    dev
}
