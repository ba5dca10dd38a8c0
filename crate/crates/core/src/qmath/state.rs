//! Density matrices over labeled tensor-product spaces.

use alloc::vec::Vec;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::space::HilbertSpace;
use crate::error::{Error, Result};

/// Whether a state's trace is pinned to one or merely bounded by one.
///
/// Conditioning on a measurement outcome produces a subnormalized state whose
/// trace is the outcome probability; carrying that trace instead of
/// renormalizing on the spot lets sequential conditional probabilities
/// multiply naturally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Trace equals one.
    Normalized,
    /// Trace in `[0, 1]`: the state is weighted by an event probability.
    Conditioned,
}

/// A positive-semidefinite operator on a [`HilbertSpace`], with its trace
/// tracked by a [`Normalization`] flag.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: ComplexMatrix,
    norm: Normalization,
}

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

impl DensityMatrix {
    /// Wraps a matrix after checking shape, hermiticity, and trace.
    ///
    /// Positivity is *not* checked here (it costs an eigendecomposition);
    /// call [`check_positive`](Self::check_positive) when it matters.
    pub fn new(space: HilbertSpace, matrix: ComplexMatrix, norm: Normalization) -> Result<Self> {
        let d = space.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch {
                context: "DensityMatrix::new",
                expected: d,
                got: matrix.rows().max(matrix.cols()),
            });
        }
        let scale = 1.0 + matrix.max_abs();
        let defect = matrix.hermiticity_defect()?;
        if defect > HERMITICITY_TOL * scale {
            return Err(Error::InvariantViolated {
                what: "density matrix hermiticity",
                deviation: defect,
            });
        }
        let tr = matrix.trace()?;
        if tr.im.abs() > TRACE_TOL * scale {
            return Err(Error::InvariantViolated {
                what: "density matrix trace is real",
                deviation: tr.im.abs(),
            });
        }
        let bad = match norm {
            Normalization::Normalized => (tr.re - 1.0).abs() > TRACE_TOL,
            Normalization::Conditioned => tr.re < -TRACE_TOL || tr.re > 1.0 + TRACE_TOL,
        };
        if bad {
            return Err(Error::InvariantViolated {
                what: "density matrix trace",
                deviation: (tr.re - 1.0).abs(),
            });
        }
        Ok(DensityMatrix {
            space,
            matrix,
            norm,
        })
    }

    /// The pure state `|ψ⟩⟨ψ|` from a column vector, normalizing it first.
    pub fn from_pure(space: HilbertSpace, ket: &ComplexMatrix) -> Result<Self> {
        if ket.rows() != space.dim() || ket.cols() != 1 {
            return Err(Error::DimensionMismatch {
                context: "DensityMatrix::from_pure",
                expected: space.dim(),
                got: ket.rows(),
            });
        }
        let norm = ket.frobenius_norm();
        if norm <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "ket",
                message: alloc::string::String::from("zero vector cannot be normalized"),
            });
        }
        let ket = ket.scale(Complex64::new(1.0 / norm, 0.0));
        let matrix = ComplexMatrix::outer(ket.entries(), ket.entries());
        DensityMatrix::new(space, matrix, Normalization::Normalized)
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.dim();
        let matrix = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        DensityMatrix {
            space,
            matrix,
            norm: Normalization::Normalized,
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn normalization(&self) -> Normalization {
        self.norm
    }

    /// The trace; for conditioned states this is the accumulated event
    /// probability.
    pub fn probability(&self) -> f64 {
        self.matrix.trace().expect("square by construction").re
    }

    /// `tr(ρ·O)` for an operator on the same space.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        self.matrix.mul(op)?.trace()
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalized pure target state.
    pub fn fidelity_with_pure(&self, ket: &ComplexMatrix) -> Result<f64> {
        if ket.rows() != self.space.dim() || ket.cols() != 1 {
            return Err(Error::DimensionMismatch {
                context: "DensityMatrix::fidelity_with_pure",
                expected: self.space.dim(),
                got: ket.rows(),
            });
        }
        let rho_ket = self.matrix.mul(ket)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..ket.rows() {
            acc += ket.get(i, 0).conj() * rho_ket.get(i, 0);
        }
        Ok(acc.re)
    }

    /// Traces out every factor *not* listed, keeping the listed factors in
    /// their current order. An empty keep-list performs the full trace and
    /// returns a 1×1 matrix on the empty space.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let mut keep_positions: Vec<usize> = Vec::with_capacity(keep.len());
        for label in keep {
            let p = self.space.position(label)?;
            if keep_positions.contains(&p) {
                return Err(Error::DuplicateLabel {
                    label: alloc::string::ToString::to_string(label),
                });
            }
            keep_positions.push(p);
        }
        keep_positions.sort_unstable();
        let all: Vec<(&str, usize)> = self.space.factors().collect();
        let kept: Vec<(&str, usize)> = keep_positions.iter().map(|&p| all[p]).collect();
        let traced: Vec<usize> = (0..all.len())
            .filter(|p| !keep_positions.contains(p))
            .collect();
        let out_space = HilbertSpace::from_factors(&kept)?;
        let d_out = out_space.dim();
        let d_tr: usize = traced.iter().map(|&p| all[p].1).product();

        let mut out = ComplexMatrix::zeros(d_out, d_out);
        let mut row_digits = alloc::vec![0usize; all.len()];
        let mut col_digits = alloc::vec![0usize; all.len()];
        for i in 0..d_out {
            let i_digits = out_space.unravel(i);
            for j in 0..d_out {
                let j_digits = out_space.unravel(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..d_tr {
                    // Scatter kept and traced digits into full-index slots.
                    let mut rem = t;
                    for &p in traced.iter().rev() {
                        let d = all[p].1;
                        row_digits[p] = rem % d;
                        col_digits[p] = rem % d;
                        rem /= d;
                    }
                    for (k, &p) in keep_positions.iter().enumerate() {
                        row_digits[p] = i_digits[k];
                        col_digits[p] = j_digits[k];
                    }
                    acc += self
                        .matrix
                        .get(self.space.ravel(&row_digits), self.space.ravel(&col_digits));
                }
                out.set(i, j, acc);
            }
        }
        Ok(DensityMatrix {
            space: out_space,
            matrix: out,
            norm: self.norm,
        })
    }

    /// Projects one factor onto a (normalized) ket and removes it.
    ///
    /// Returns the subnormalized remainder (flagged
    /// [`Conditioned`](Normalization::Conditioned), its trace being the joint
    /// probability of the outcome) together with the conditional probability
    /// of this projection given the input's own normalization.
    pub fn condition_on(&self, label: &str, ket: &ComplexMatrix) -> Result<(DensityMatrix, f64)> {
        let p = self.space.position(label)?;
        let d_f = self.space.dim_of(label)?;
        if ket.rows() != d_f || ket.cols() != 1 {
            return Err(Error::DimensionMismatch {
                context: "DensityMatrix::condition_on",
                expected: d_f,
                got: ket.rows(),
            });
        }
        let norm = ket.frobenius_norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "ket",
                message: alloc::string::String::from("projection ket must be normalized"),
            });
        }
        let (out_space, _) = self.space.without(label)?;
        let d_out = out_space.dim().max(1);
        let n_f = self.space.len();
        let mut out = ComplexMatrix::zeros(d_out, d_out);
        let mut row_digits = alloc::vec![0usize; n_f];
        let mut col_digits = alloc::vec![0usize; n_f];
        for i in 0..d_out {
            let i_digits = out_space.unravel(i);
            for j in 0..d_out {
                let j_digits = out_space.unravel(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..d_f {
                    for b in 0..d_f {
                        let mut ki = 0;
                        for slot in 0..n_f {
                            if slot == p {
                                row_digits[slot] = a;
                                col_digits[slot] = b;
                            } else {
                                row_digits[slot] = i_digits[ki];
                                col_digits[slot] = j_digits[ki];
                                ki += 1;
                            }
                        }
                        acc += ket.get(a, 0).conj()
                            * ket.get(b, 0)
                            * self.matrix.get(
                                self.space.ravel(&row_digits),
                                self.space.ravel(&col_digits),
                            );
                    }
                }
                out.set(i, j, acc);
            }
        }
        let joint = out.trace()?.re;
        let prior = self.probability();
        let conditional = if prior > 0.0 { joint / prior } else { 0.0 };
        let state = DensityMatrix {
            space: out_space,
            matrix: out,
            norm: Normalization::Conditioned,
        };
        Ok((state, conditional))
    }

    /// Reorders factors; `order` must list every current label exactly once.
    pub fn permute(&self, order: &[&str]) -> Result<DensityMatrix> {
        if order.len() != self.space.len() {
            return Err(Error::DimensionMismatch {
                context: "DensityMatrix::permute",
                expected: self.space.len(),
                got: order.len(),
            });
        }
        let mut old_pos: Vec<usize> = Vec::with_capacity(order.len());
        for label in order {
            let p = self.space.position(label)?;
            if old_pos.contains(&p) {
                return Err(Error::DuplicateLabel {
                    label: alloc::string::ToString::to_string(label),
                });
            }
            old_pos.push(p);
        }
        let all: Vec<(&str, usize)> = self.space.factors().collect();
        let new_factors: Vec<(&str, usize)> = old_pos.iter().map(|&p| all[p]).collect();
        let new_space = HilbertSpace::from_factors(&new_factors)?;
        let d = new_space.dim();
        let n = order.len();
        let mut out = ComplexMatrix::zeros(d, d);
        let mut row_digits = alloc::vec![0usize; n];
        let mut col_digits = alloc::vec![0usize; n];
        for i in 0..d {
            let i_digits = new_space.unravel(i);
            for j in 0..d {
                let j_digits = new_space.unravel(j);
                for k in 0..n {
                    row_digits[old_pos[k]] = i_digits[k];
                    col_digits[old_pos[k]] = j_digits[k];
                }
                out.set(
                    i,
                    j,
                    self.matrix
                        .get(self.space.ravel(&row_digits), self.space.ravel(&col_digits)),
                );
            }
        }
        Ok(DensityMatrix {
            space: new_space,
            matrix: out,
            norm: self.norm,
        })
    }

    /// Divides by the trace and flags the result as normalized.
    pub fn renormalized(&self) -> Result<DensityMatrix> {
        let tr = self.probability();
        if tr <= 0.0 {
            return Err(Error::InvariantViolated {
                what: "renormalization of a zero-probability state",
                deviation: tr,
            });
        }
        DensityMatrix::new(
            self.space.clone(),
            self.matrix.scale(Complex64::new(1.0 / tr, 0.0)),
            Normalization::Normalized,
        )
    }

    /// Errors unless the smallest eigenvalue is above `-tol`.
    pub fn check_positive(&self, tol: f64) -> Result<()> {
        let min = self.matrix.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::InvariantViolated {
                what: "density matrix positivity",
                deviation: -min,
            });
        }
        Ok(())
    }
}

/// `⟨ψ|ρ|ψ⟩`: overlap of a state with a normalized pure target.
///
/// Free-function spelling of
/// [`DensityMatrix::fidelity_with_pure`]; linear in `rho`.
pub fn state_fidelity(rho: &DensityMatrix, psi: &ComplexMatrix) -> Result<f64> {
    rho.fidelity_with_pure(psi)
}
