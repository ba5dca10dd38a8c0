//! Dense complex matrices.
//!
//! All quantum objects in this crate (states, Kraus operators, propagators)
//! are stored as dense row-major matrices of `Complex64`. Hilbert-space
//! dimensions stay small (a spin plus at most seven photon qubits, dim 256),
//! so dense O(n³) algebra is both simple and fast enough.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use crate::error::{Error, Result};

/// Dense complex matrix with row-major storage: entry `(i, j)` lives at
/// `entries[i * cols + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::zero(); rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from an explicit row-major entry vector.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "ComplexMatrix::from_entries",
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Build from a generator `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Column vector from a slice.
    pub fn column(v: &[Complex64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
    }

    /// Rank-one outer product |u⟩⟨v| (conjugates `v`).
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
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

    /// Raw row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.cols + j] = value;
    }

    /// Matrix sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "ComplexMatrix::add")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Matrix difference `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "ComplexMatrix::sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "ComplexMatrix::mul",
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == Complex64::zero() {
                    continue;
                }
                let row_out = i * other.cols;
                let row_b = k * other.cols;
                for j in 0..other.cols {
                    out.entries[row_out + j] += a * other.entries[row_b + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                context: "ComplexMatrix::mul_vec",
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![Complex64::zero(); self.rows];
        for i in 0..self.rows {
            let row = i * self.cols;
            let mut acc = Complex64::zero();
            for j in 0..self.cols {
                acc += self.entries[row + j] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    ///
    /// Index convention: `(self ⊗ other)[(i1, i2), (j1, j2)] =
    /// self[i1, j1] * other[i2, j2]` with the first factor most significant,
    /// matching the row-major composite indexing used by `HilbertSpace`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.entries[i1 * self.cols + j1];
                if a == Complex64::zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    let out_row = (i1 * other.rows + i2) * cols + j1 * other.cols;
                    let b_row = i2 * other.cols;
                    for j2 in 0..other.cols {
                        out.entries[out_row + j2] = a * other.entries[b_row + j2];
                    }
                }
            }
        }
        out
    }

    /// Trace (sum of diagonal entries). Errors on non-square input.
    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                context: "ComplexMatrix::trace",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut t = Complex64::zero();
        for i in 0..self.rows {
            t += self.entries[i * self.cols + i];
        }
        Ok(t)
    }

    /// Largest entrywise absolute deviation between two equal-shaped matrices.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other, "ComplexMatrix::max_abs_diff")?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest deviation from hermiticity, `max |A - A†|`.
    pub fn hermiticity_defect(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                context: "ComplexMatrix::hermiticity_defect",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        Ok(worst)
    }

    /// True when the matrix is Hermitian within `tol` (entrywise).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        matches!(self.hermiticity_defect(), Ok(d) if d <= tol)
    }

    /// Matrix exponential `exp(scale * self)`.
    ///
    /// Hermitian inputs (the generic case here: Hamiltonians) go through the
    /// eigendecomposition, which is exact for any `scale` including the
    /// imaginary time steps used for propagators. Non-Hermitian inputs fall
    /// back to scaling-and-squaring with a Taylor series.
    pub fn expm(&self, scale: Complex64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                context: "ComplexMatrix::expm",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let scale_tol = 1e-12 * (1.0 + self.max_abs());
        if self.is_hermitian(scale_tol) {
            let (eigenvalues, vectors) = self.eigh()?;
            // exp(scale·A) = V diag(exp(scale·λ)) V†
            let mut diag = Self::zeros(self.rows, self.rows);
            for (i, lambda) in eigenvalues.iter().enumerate() {
                diag.set(i, i, (scale * lambda).exp());
            }
            return vectors.mul(&diag)?.mul(&vectors.adjoint());
        }

        // Scaling and squaring with a plain Taylor series: scale the matrix
        // below unit norm, sum the series to machine precision, square back.
        let m = self.scale(scale);
        let norm = m.max_abs() * self.rows as f64; // crude upper bound on the 2-norm
        let squarings = if norm > 0.5 {
            ((norm / 0.5).log2().ceil() as u32).min(60)
        } else {
            0
        };
        let t = m.scale(Complex64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));
        let mut sum = Self::identity(self.rows);
        let mut term = Self::identity(self.rows);
        for k in 1..=80 {
            term = term.mul(&t)?.scale(Complex64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term)?;
            if term.max_abs() < 1e-18 * (1.0 + sum.max_abs()) {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum)?;
        }
        Ok(sum)
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }
}
