//! Quasi-static Overhauser-field quadrature grid.
//!
//! The nuclear-spin bath shifts the spin splitting by a random, shot-frozen
//! detuning. Averaging any observable over a zero-mean Gaussian detuning with
//! angular-frequency std `σ_ω = √2/T₂*` produces exactly the Gaussian
//! coherence envelope `e^{−(t/T₂*)²}`, so the bath is represented by a
//! Gauss–Hermite quadrature rule: evolve once per node, then weight-sum.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qmath::ComplexMatrix;

/// Gauss–Hermite nodes (frequency detunings, GHz) and probability weights.
#[derive(Debug, Clone, PartialEq)]
pub struct OverhauserGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl OverhauserGrid {
    /// Builds a grid after checking normalization and symmetry.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidParameter {
                name: "nodes",
                message: alloc::format!(
                    "need equally many nodes and weights, ≥ 1 (got {} / {})",
                    nodes.len(),
                    weights.len()
                ),
            });
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidParameter {
                name: "weights",
                message: alloc::string::String::from("weights must be non-negative"),
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvariantViolated {
                what: "Overhauser grid weight normalization",
                deviation: (total - 1.0).abs(),
            });
        }
        let scale = nodes.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let n = nodes.len();
        let tol = 1e-9 * (1.0 + scale);
        for i in 0..n.div_ceil(2) {
            // Pairs must mirror; for odd n the middle pairs with itself,
            // forcing it to zero.
            if (nodes[i] + nodes[n - 1 - i]).abs() > tol {
                return Err(Error::InvariantViolated {
                    what: "Overhauser grid symmetry about zero",
                    deviation: (nodes[i] + nodes[n - 1 - i]).abs(),
                });
            }
        }
        Ok(OverhauserGrid { nodes, weights })
    }

    /// The single-node grid at δ = 0: the dephasing-free limit.
    pub fn delta_free() -> Self {
        OverhauserGrid {
            nodes: alloc::vec![0.0],
            weights: alloc::vec![1.0],
        }
    }

    /// Node detunings in GHz, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Probability weights, matching [`nodes`](Self::nodes) by index.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True for an empty grid (never constructible through `new`).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(node, weight)` pairs in ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Weighted second moment `Σ w·δ²` in GHz².
    pub fn second_moment(&self) -> f64 {
        self.iter().map(|(x, w)| w * x * x).sum()
    }
}

/// Gauss–Hermite grid for a zero-mean Gaussian angular-frequency
/// distribution with std `σ_ω = √2/t2` (so that the averaged coherence
/// decays as `e^{−(t/t2)²}`). Nodes are returned as ordinary frequencies in
/// GHz, i.e. `σ_ω/2π`-scaled.
pub fn sample_overhauser(t2: f64, n_nodes: usize) -> Result<OverhauserGrid> {
    if !(t2 > 0.0) || !t2.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t2",
            message: alloc::format!("dephasing time must be positive, got {t2}"),
        });
    }
    if n_nodes < 1 {
        return Err(Error::InvalidParameter {
            name: "n_nodes",
            message: alloc::string::String::from("need at least one node"),
        });
    }
    if n_nodes == 1 {
        return Ok(OverhauserGrid::delta_free());
    }

    // Golub–Welsch: the Hermite nodes are the eigenvalues of the symmetric
    // tridiagonal Jacobi matrix with zero diagonal and off-diagonal
    // β_k = √(k/2); each weight is the squared first component of the
    // corresponding normalized eigenvector.
    let n = n_nodes;
    let jacobi = ComplexMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            Complex64::new(((j) as f64 / 2.0).sqrt(), 0.0)
        } else if i == j + 1 {
            Complex64::new(((i) as f64 / 2.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let (mut xs, vecs) = jacobi.eigh()?;
    let mut ws: Vec<f64> = (0..n).map(|k| vecs.get(0, k).norm_sqr()).collect();

    // Enforce the exact ±pair symmetry of the Hermite rule: eigenvalues come
    // back sorted, so node i pairs with node n−1−i. Averaging scrubs the
    // solver's last-digit asymmetry (and pins the middle node of odd rules
    // to exactly zero).
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (xs[i] - xs[j]);
        xs[i] = x;
        xs[j] = -x;
        let w = 0.5 * (ws[i] + ws[j]);
        ws[i] = w;
        ws[j] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    let wsum: f64 = ws.iter().sum();
    for w in &mut ws {
        *w /= wsum;
    }

    // Physical scaling: the Gaussian variable is δ_ω = √2·σ_ω·x with
    // x the standard Hermite abscissa; convert to ordinary frequency.
    let sigma_f = core::f64::consts::SQRT_2 / (2.0 * core::f64::consts::PI * t2);
    let scale = core::f64::consts::SQRT_2 * sigma_f;
    let nodes: Vec<f64> = xs.iter().map(|&x| x * scale).collect();
    OverhauserGrid::new(nodes, ws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn single_node_is_delta_free() {
        let g = sample_overhauser(4.8, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.weights()[0], 1.0);
    }

    #[test]
    fn weights_normalize_for_any_size() {
        for n in [2, 3, 8, 15, 32, 64] {
            let g = sample_overhauser(4.8, n).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn second_moment_matches_angular_variance() {
        // Σ w·(2πδ)² must equal σ_ω² = 2/t2²; the Gauss–Hermite rule
        // integrates x² exactly for every n ≥ 2.
        let t2 = 4.8;
        let target = 2.0 / (t2 * t2);
        for n in [8, 16, 32] {
            let g = sample_overhauser(t2, n).unwrap();
            let two_pi = 2.0 * core::f64::consts::PI;
            let moment: f64 = g.iter().map(|(x, w)| w * (two_pi * x).powi(2)).sum();
            assert_relative_eq!(moment, target, max_relative = 1e-3);
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let g = sample_overhauser(1.0, 17).unwrap();
        let n = g.len();
        for i in 0..n / 2 {
            assert_abs_diff_eq!(g.nodes()[i], -g.nodes()[n - 1 - i], epsilon = 1e-15);
        }
        assert_eq!(g.nodes()[n / 2], 0.0);
        for w in g.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn characteristic_function_reproduces_gaussian_envelope() {
        // ⟨cos(2πδt)⟩ over the grid = e^{−(t/t2)²}; 32 nodes hold this to
        // well below 1e-6 out to t = 2·t2.
        let t2 = 4.8;
        let g = sample_overhauser(t2, 32).unwrap();
        for step in 0..=20 {
            let t = 2.0 * t2 * (step as f64) / 20.0;
            let avg: f64 = g
                .iter()
                .map(|(x, w)| w * (2.0 * core::f64::consts::PI * x * t).cos())
                .sum();
            assert_abs_diff_eq!(avg, (-(t / t2).powi(2)).exp(), epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(sample_overhauser(0.0, 8).is_err());
        assert!(sample_overhauser(-1.0, 8).is_err());
        assert!(sample_overhauser(4.8, 0).is_err());
        assert!(OverhauserGrid::new(alloc::vec![0.1], alloc::vec![1.0]).is_err());
        assert!(OverhauserGrid::new(alloc::vec![-0.1, 0.1], alloc::vec![0.7, 0.2]).is_err());
    }
}
