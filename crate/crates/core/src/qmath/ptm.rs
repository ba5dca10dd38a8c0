//! Pauli transfer matrices: the real-matrix picture of qubit channels.
//!
//! For an `n`-qubit channel `Φ`, the transfer matrix has entries
//! `R[i,j] = tr(P_i · Φ(P_j)) / 2ⁿ` over the Pauli strings `P_i`, ordered
//! lexicographically in the letters `I, X, Y, Z` with the first qubit as the
//! most significant digit. States map to real Pauli vectors
//! `x_i = tr(P_i ρ)` and channels act by ordinary matrix multiplication,
//! which makes gate-level comparisons (ideal vs. noisy cycle) plain linear
//! algebra over ℝ.

use alloc::vec::Vec;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::channel::QuantumChannel;
use super::state::DensityMatrix;
use crate::error::{Error, Result};

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

/// One single-qubit Pauli matrix by index 0..4 = I, X, Y, Z.
fn pauli_1q(index: usize) -> ComplexMatrix {
    let c = Complex64::new;
    let entries = match index {
        0 => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        1 => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        2 => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        3 => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        _ => unreachable!("Pauli index must be in 0..4"),
    };
    ComplexMatrix::from_entries(2, 2, entries.to_vec()).expect("2x2 literal")
}

/// The `n`-qubit Pauli string for a base-4 index (first qubit most
/// significant).
pub fn pauli_string(qubits: usize, index: usize) -> ComplexMatrix {
    debug_assert!(index < 4usize.pow(qubits as u32));
    let mut digits = Vec::with_capacity(qubits);
    let mut rem = index;
    for _ in 0..qubits {
        digits.push(rem % 4);
        rem /= 4;
    }
    digits.reverse();
    let mut out = ComplexMatrix::identity(1);
    for d in digits {
        out = out.kron(&pauli_1q(d));
    }
    out
}

/// The human-readable letters of a Pauli string index, e.g. `"XZ"`.
pub fn pauli_label(qubits: usize, index: usize) -> alloc::string::String {
    let mut letters = Vec::with_capacity(qubits);
    let mut rem = index;
    for _ in 0..qubits {
        letters.push(PAULI_LETTERS[rem % 4]);
        rem /= 4;
    }
    letters.iter().rev().collect()
}

/// A real `4ⁿ × 4ⁿ` transfer matrix for an `n`-qubit channel.
#[derive(Debug, Clone)]
pub struct PauliTransferMatrix {
    qubits: usize,
    entries: Vec<f64>,
}

impl PauliTransferMatrix {
    /// Builds the transfer matrix of a channel whose input and output are
    /// the same `n`-qubit space (dimension `2ⁿ` each).
    pub fn from_channel(channel: &QuantumChannel) -> Result<Self> {
        let d = channel.input().dim();
        if channel.output().dim() != d {
            return Err(Error::DimensionMismatch {
                context: "PauliTransferMatrix::from_channel",
                expected: d,
                got: channel.output().dim(),
            });
        }
        let qubits = d.trailing_zeros() as usize;
        if d != (1usize << qubits) || !d.is_power_of_two() {
            return Err(Error::InvalidParameter {
                name: "channel",
                message: alloc::format!("dimension {d} is not a power of two"),
            });
        }
        let size = 4usize.pow(qubits as u32);
        let mut entries = alloc::vec![0.0f64; size * size];
        let mut worst_im = 0.0f64;
        for j in 0..size {
            let p_j = pauli_string(qubits, j);
            // Φ(P_j) = Σ K P_j K†, applied to the operator directly.
            let mut image = ComplexMatrix::zeros(d, d);
            for k in channel.kraus() {
                image = image.add(&k.mul(&p_j)?.mul(&k.adjoint())?)?;
            }
            for i in 0..size {
                let p_i = pauli_string(qubits, i);
                let tr = p_i.mul(&image)?.trace()?;
                worst_im = worst_im.max(tr.im.abs());
                entries[i * size + j] = tr.re / d as f64;
            }
        }
        if worst_im > 1e-9 {
            return Err(Error::InvariantViolated {
                what: "transfer matrix entries are real",
                deviation: worst_im,
            });
        }
        Ok(PauliTransferMatrix { qubits, entries })
    }

    /// Transfer matrix of a unitary acting on `n` qubits.
    pub fn from_unitary(qubits: usize, u: ComplexMatrix) -> Result<Self> {
        let labels: Vec<alloc::string::String> =
            (0..qubits).map(|i| alloc::format!("q{i}")).collect();
        let factors: Vec<(&str, usize)> = labels.iter().map(|l| (l.as_str(), 2)).collect();
        let space = super::space::HilbertSpace::from_factors(&factors)?;
        let ch = QuantumChannel::unitary(space, u)?;
        PauliTransferMatrix::from_channel(&ch)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Side length `4ⁿ`.
    pub fn dim(&self) -> usize {
        4usize.pow(self.qubits as u32)
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    /// Applies the transfer matrix to a Pauli vector.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                context: "PauliTransferMatrix::apply",
                expected: n,
                got: x.len(),
            });
        }
        let mut out = alloc::vec![0.0f64; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.entries[i * n + j] * x[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Matrix product `self · earlier`: the transfer matrix of "run
    /// `earlier`, then `self`".
    pub fn compose(&self, earlier: &PauliTransferMatrix) -> Result<PauliTransferMatrix> {
        if self.qubits != earlier.qubits {
            return Err(Error::DimensionMismatch {
                context: "PauliTransferMatrix::compose",
                expected: self.dim(),
                got: earlier.dim(),
            });
        }
        let n = self.dim();
        let mut entries = alloc::vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += self.entries[i * n + l] * earlier.entries[l * n + j];
                }
                entries[i * n + j] = acc;
            }
        }
        Ok(PauliTransferMatrix {
            qubits: self.qubits,
            entries,
        })
    }

    /// Largest entrywise difference from another transfer matrix.
    pub fn max_abs_diff(&self, other: &PauliTransferMatrix) -> Result<f64> {
        if self.qubits != other.qubits {
            return Err(Error::DimensionMismatch {
                context: "PauliTransferMatrix::max_abs_diff",
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// The Pauli vector `x_i = tr(P_i ρ)` of an `n`-qubit state. The state's
/// factors must all be qubits; they are read in their current order with the
/// first factor most significant.
pub fn pauli_vector(state: &DensityMatrix) -> Result<Vec<f64>> {
    let d = state.space().dim();
    let qubits = d.trailing_zeros() as usize;
    if d != (1usize << qubits) || state.space().factors().any(|(_, fd)| fd != 2) {
        return Err(Error::InvalidParameter {
            name: "state",
            message: alloc::string::String::from("Pauli vectors need an all-qubit space"),
        });
    }
    let size = 4usize.pow(qubits as u32);
    let mut x = alloc::vec![0.0f64; size];
    for (i, slot) in x.iter_mut().enumerate() {
        let p = pauli_string(qubits, i);
        let tr = state.expectation(&p)?;
        if tr.im.abs() > 1e-9 {
            return Err(Error::InvariantViolated {
                what: "Pauli expectation is real",
                deviation: tr.im.abs(),
            });
        }
        *slot = tr.re;
    }
    Ok(x)
}

/// Rebuilds the operator `ρ = Σ_i x_i P_i / 2ⁿ` from a Pauli vector.
pub fn from_pauli_vector(qubits: usize, x: &[f64]) -> Result<ComplexMatrix> {
    let size = 4usize.pow(qubits as u32);
    if x.len() != size {
        return Err(Error::DimensionMismatch {
            context: "from_pauli_vector",
            expected: size,
            got: x.len(),
        });
    }
    let d = 1usize << qubits;
    let mut out = ComplexMatrix::zeros(d, d);
    for (i, &xi) in x.iter().enumerate() {
        let p = pauli_string(qubits, i).scale(Complex64::new(xi / d as f64, 0.0));
        out = out.add(&p)?;
    }
    Ok(out)
}
