//! Hermitian eigendecomposition via the cyclic Jacobi method.
//!
//! Jacobi iteration is slower than Householder + QR for large matrices but is
//! simple, numerically robust, and returns orthonormal eigenvectors directly.
//! The matrices diagonalized here (density matrices, Choi matrices, quadrature
//! companion matrices) stay at dimension ≤ 256, where Jacobi is entirely
//! adequate.

use alloc::vec::Vec;
#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

impl ComplexMatrix {
    /// Eigendecomposition of a Hermitian matrix.
    ///
    /// Returns eigenvalues in ascending order and a unitary matrix whose
    /// columns are the matching orthonormal eigenvectors, so that
    /// `A · V = V · diag(λ)`. The input is symmetrized as `(A + A†)/2`
    /// before iterating, so tiny hermiticity defects from accumulated
    /// rounding are tolerated.
    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                context: "ComplexMatrix::eigh",
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let n = self.rows();
        if n == 0 {
            return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
        }

        let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        });
        let mut v = ComplexMatrix::identity(n);
        let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
        let tol = 1e-14 * scale;

        for _sweep in 0..60 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if off.sqrt() <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    let b = apq.norm();
                    if b <= tol / (n as f64) {
                        continue;
                    }
                    // Phase that makes the pivot real, then a real Jacobi
                    // rotation angle that annihilates it.
                    let phase = apq / b; // e^{iφ}
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let tau = (aqq - app) / (2.0 * b);
                    // Small-magnitude root of t² − 2τt − 1 = 0, which makes
                    // the rotated (p,q) entry vanish for this J convention.
                    let t = if tau >= 0.0 {
                        -1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let sp = phase * s; // s·e^{iφ}
                    let spc = phase.conj() * s; // s·e^{-iφ}

                    // Right-multiply columns p, q by the plane rotation.
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, akp * c + akq * spc);
                        a.set(k, q, akq * c - akp * sp);
                    }
                    // Left-multiply rows p, q by its adjoint.
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, apk * c + aqk * sp);
                        a.set(q, k, aqk * c - apk * spc);
                    }
                    // Accumulate the eigenvector rotation.
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, vkp * c + vkq * spc);
                        v.set(k, q, vkq * c - vkp * sp);
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let eigenvalues: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        order.sort_by(|&i, &j| {
            eigenvalues[i]
                .partial_cmp(&eigenvalues[j])
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let sorted_values: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let sorted_vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
        Ok((sorted_values, sorted_vectors))
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (values, _) = self.eigh()?;
        values
            .first()
            .copied()
            .ok_or_else(|| Error::BadData(alloc::string::String::from("empty matrix")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_decomposition(a: &ComplexMatrix) {
        let (values, v) = a.eigh().unwrap();
        let n = a.rows();
        // A · V == V · diag(λ)
        let av = a.mul(&v).unwrap();
        let mut vd = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                vd.set(i, j, v.get(i, j) * values[j]);
            }
        }
        assert!(av.max_abs_diff(&vd).unwrap() < 1e-10 * (1.0 + a.max_abs()));
        // Orthonormal columns.
        let gram = v.adjoint().mul(&v).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)).unwrap() < 1e-11);
        // Sorted ascending.
        for w in values.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let sx = ComplexMatrix::from_entries(
            2,
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let (values, _) = sx.eigh().unwrap();
        assert_abs_diff_eq!(values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(values[1], 1.0, epsilon = 1e-14);
        check_decomposition(&sx);
    }

    #[test]
    fn pauli_y_eigenvalues() {
        let sy = ComplexMatrix::from_entries(
            2,
            2,
            vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        )
        .unwrap();
        let (values, _) = sy.eigh().unwrap();
        assert_abs_diff_eq!(values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(values[1], 1.0, epsilon = 1e-14);
        check_decomposition(&sy);
    }

    #[test]
    fn random_hermitian_matrices_decompose() {
        // Deterministic pseudo-random Hermitian matrices of several sizes.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [2usize, 3, 5, 8, 16] {
            let g = ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()));
            let h = g.add(&g.adjoint()).unwrap().scale(c(0.5, 0.0));
            check_decomposition(&h);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // 4x4 with a doubly degenerate eigenvalue.
        let a = ComplexMatrix::identity(4);
        check_decomposition(&a);
        let (values, _) = a.eigh().unwrap();
        for v in values {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn trace_matches_eigenvalue_sum() {
        let a = ComplexMatrix::from_entries(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(-1.0, 0.0),
                c(0.3, 0.0),
                c(0.0, 0.5),
                c(0.3, 0.0),
                c(0.5, 0.0),
            ],
        )
        .unwrap();
        check_decomposition(&a);
        let (values, _) = a.eigh().unwrap();
        let sum: f64 = values.iter().sum();
        assert_abs_diff_eq!(sum, a.trace().unwrap().re, epsilon = 1e-12);
    }
}
