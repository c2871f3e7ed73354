//! Reduced density matrices of qubit subsets and their purities.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use thiserror::Error;

use crate::state::{StateVector, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("qubit subset is empty")]
    Empty,
    #[error("qubit {qubit} out of range 1..={n}")]
    OutOfRange { qubit: usize, n: usize },
    #[error("subset is defined on {subset} qubits but the state has {state}")]
    SizeMismatch { subset: usize, state: usize },
    #[error("density matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace {0} differs from 1")]
    BadTrace(f64),
}

/// A nonempty subset of the qubits `{1, ..., n}`, stored as a bitmask with
/// qubit 1 in bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitSubset {
    n: usize,
    mask: u32,
}

impl QubitSubset {
    pub fn new(n: usize, members: &[usize]) -> Result<Self, ReductionError> {
        let mut mask = 0u32;
        for &q in members {
            if q == 0 || q > n {
                return Err(ReductionError::OutOfRange { qubit: q, n });
            }
            mask |= 1 << (q - 1);
        }
        Self::from_mask(n, mask)
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<Self, ReductionError> {
        if mask == 0 {
            return Err(ReductionError::Empty);
        }
        if n < 32 && mask >> n != 0 {
            let qubit = 32 - mask.leading_zeros() as usize;
            return Err(ReductionError::OutOfRange { qubit, n });
        }
        Ok(Self { n, mask })
    }

    /// All qubits.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            mask: ((1u64 << n) - 1) as u32,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_proper(&self) -> bool {
        self.len() < self.n
    }

    pub fn contains(&self, q: usize) -> bool {
        q >= 1 && q <= self.n && self.mask >> (q - 1) & 1 == 1
    }

    /// Members ascending, 1-indexed.
    pub fn members(&self) -> Vec<usize> {
        (1..=self.n).filter(|&q| self.contains(q)).collect()
    }

    /// The complementary subset, or `None` when `self` holds every qubit.
    pub fn complement(&self) -> Option<Self> {
        let rest = Self::full(self.n).mask & !self.mask;
        (rest != 0).then_some(Self { n: self.n, mask: rest })
    }
}

/// Every nonempty proper subset of `n` qubits, in increasing mask order.
pub fn proper_subsets(n: usize) -> impl Iterator<Item = QubitSubset> {
    let full = (1u64 << n) - 1;
    (1..full).map(move |m| QubitSubset { n, mask: m as u32 })
}

/// Hermitian `2^k × 2^k` matrix on the kept qubits. Row/column index bits
/// follow the kept qubits in ascending order, lowest qubit most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    k: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim() + j]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev = 0.0f64;
        for i in 0..d {
            for j in i..d {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| self.get(i, j));
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `Tr ρ²`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> Result<f64, ReductionError> {
        let herm = self.hermiticity_deviation();
        if herm > 1e-12 {
            return Err(ReductionError::NotHermitian(herm));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > 1e-12 {
            return Err(ReductionError::BadTrace(tr.re));
        }
        Ok(self.entries.iter().map(|e| e.norm_sqr()).sum())
    }
}

/// Same as [`DensityMatrix::purity`], as a free function.
pub fn purity(rho: &DensityMatrix) -> Result<f64, ReductionError> {
    rho.purity()
}

fn check_subset(s: &StateVector, keep: &QubitSubset) -> Result<(), ReductionError> {
    if keep.n() != s.n() {
        return Err(ReductionError::SizeMismatch {
            subset: keep.n(),
            state: s.n(),
        });
    }
    Ok(())
}

/// Reshapes the amplitudes into a `2^|keep| × 2^(n-|keep|)` matrix, row
/// index from the kept qubits and column index from the rest.
fn bipartite_matrix(s: &StateVector, keep: &QubitSubset) -> (usize, usize, Vec<C64>) {
    let n = s.n();
    let k = keep.len();
    let rows = 1 << k;
    let cols = 1 << (n - k);
    let mut m = vec![C64::new(0.0, 0.0); rows * cols];
    for (idx, &amp) in s.amplitudes().iter().enumerate() {
        let (mut r, mut c) = (0usize, 0usize);
        for q in 1..=n {
            let b = idx >> (n - q) & 1;
            if keep.contains(q) {
                r = r << 1 | b;
            } else {
                c = c << 1 | b;
            }
        }
        m[r * cols + c] = amp;
    }
    (rows, cols, m)
}

/// `ρ_keep = Tr_{rest} |s><s|`.
pub fn reduce(s: &StateVector, keep: &QubitSubset) -> Result<DensityMatrix, ReductionError> {
    check_subset(s, keep)?;
    let (rows, cols, m) = bipartite_matrix(s, keep);
    let mut entries = vec![C64::new(0.0, 0.0); rows * rows];
    for i in 0..rows {
        for j in i..rows {
            let v: C64 = (0..cols).map(|c| m[i * cols + c] * m[j * cols + c].conj()).sum();
            entries[i * rows + j] = v;
            entries[j * rows + i] = v.conj();
        }
    }
    Ok(DensityMatrix { k: keep.len(), entries })
}

/// `Tr ρ_keep²` without storing `ρ`. Works on whichever side of the cut is
/// smaller; a pure state has equal purities on both sides.
pub fn subset_purity(s: &StateVector, keep: &QubitSubset) -> Result<f64, ReductionError> {
    check_subset(s, keep)?;
    let side = match keep.complement() {
        Some(rest) if rest.len() < keep.len() => rest,
        Some(_) => *keep,
        None => return Ok(s.norm().powi(4)),
    };
    let (rows, cols, m) = bipartite_matrix(s, &side);
    let mut total = 0.0;
    for i in 0..rows {
        for j in i..rows {
            let v: C64 = (0..cols).map(|c| m[i * cols + c] * m[j * cols + c].conj()).sum();
            total += if i == j { v.norm_sqr() } else { 2.0 * v.norm_sqr() };
        }
    }
    Ok(total)
}

/// `Σ_α Tr ρ_α²` over all `2^n - 2` nonempty proper subsets.
///
/// Only subsets with at most `n/2` members are evaluated; each stands in for
/// its complement as well. When `n` is even, the size-`n/2` layer is paired
/// up by keeping the member of each pair that contains qubit 1.
pub fn purity_sum(s: &StateVector) -> Result<f64, ReductionError> {
    let n = s.n();
    let half = n / 2;
    let reps: Vec<QubitSubset> = proper_subsets(n)
        .filter(|a| {
            let k = a.len();
            k < n - k || (k == n - k && a.contains(1))
        })
        .collect();
    debug_assert!(reps.iter().all(|a| a.len() <= half));
    let values: Vec<f64> = reps
        .par_iter()
        .map(|a| subset_purity(s, a))
        .collect::<Result<_, _>>()?;
    // fixed-order fold keeps the sum bit-reproducible across thread counts
    Ok(2.0 * values.iter().sum::<f64>())
}

/// Straight sum over every nonempty proper subset, no symmetry shortcut.
pub fn purity_sum_exhaustive(s: &StateVector) -> Result<f64, ReductionError> {
    proper_subsets(s.n()).map(|a| subset_purity(s, &a)).sum()
}
