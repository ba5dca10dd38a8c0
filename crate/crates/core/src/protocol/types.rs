//! Result types of the generation sequence and engine configuration.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qmath::ComplexMatrix;
use crate::trion::{
    photon_a, photon_d, photon_h, photon_l, photon_r, photon_v, EMISSION_STEPS,
};

/// A polarization measurement basis for one photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementBasis {
    /// Circular: right / left.
    RL,
    /// Linear horizontal / vertical.
    HV,
    /// Diagonal / antidiagonal.
    DA,
}

impl MeasurementBasis {
    /// The two orthonormal projection kets of this basis, in label order.
    pub fn kets(&self) -> [ComplexMatrix; 2] {
        match self {
            MeasurementBasis::RL => [photon_r(), photon_l()],
            MeasurementBasis::HV => [photon_h(), photon_v()],
            MeasurementBasis::DA => [photon_d(), photon_a()],
        }
    }

    /// Outcome labels in the same order as [`kets`](Self::kets).
    pub fn labels(&self) -> [&'static str; 2] {
        match self {
            MeasurementBasis::RL => ["R", "L"],
            MeasurementBasis::HV => ["H", "V"],
            MeasurementBasis::DA => ["D", "A"],
        }
    }
}

/// Which pulse spacing the three-pulse correlation run uses for its second
/// gap: equal to the first (both a quarter period) or twice it (a half
/// period). The first selects linear photon-2 readout, the second circular,
/// matching the two published truth tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthTableMode {
    /// t₂₃ = t₁₂: photon #2 read in H/V, photon #3 in R/L.
    T23EqualsT12,
    /// t₂₃ = 2·t₁₂: both photons read in R/L.
    T23EqualsTwiceT12,
}

impl TruthTableMode {
    /// Basis used for photon #2 under this mode.
    pub fn photon2_basis(&self) -> MeasurementBasis {
        match self {
            TruthTableMode::T23EqualsT12 => MeasurementBasis::HV,
            TruthTableMode::T23EqualsTwiceT12 => MeasurementBasis::RL,
        }
    }
}

/// Conditional probabilities of photon #2 outcomes given photon #3
/// outcomes, with photon #1 projected onto R.
///
/// Columns are indexed by the photon-#3 outcome and each column is
/// normalized: `probabilities[row][col] = P(row₂ | col₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    pub row_labels: [&'static str; 2],
    pub col_labels: [&'static str; 2],
    pub probabilities: [[f64; 2]; 2],
    pub uncertainties: Option<[[f64; 2]; 2]>,
    pub condition: &'static str,
}

impl TruthTable {
    /// Builds a table, checking that probabilities lie in `[0, 1]`, that
    /// each column sums to 1 within 1e-9, and that any uncertainties are
    /// non-negative.
    pub fn new(
        row_labels: [&'static str; 2],
        col_labels: [&'static str; 2],
        probabilities: [[f64; 2]; 2],
        uncertainties: Option<[[f64; 2]; 2]>,
        condition: &'static str,
    ) -> Result<Self> {
        for row in &probabilities {
            for &p in row {
                if !(0.0..=1.0 + 1e-12).contains(&p) {
                    return Err(Error::InvalidParameter {
                        name: "probabilities",
                        message: alloc::format!("conditional probability {p} outside [0, 1]"),
                    });
                }
            }
        }
        for col in 0..2 {
            let sum = probabilities[0][col] + probabilities[1][col];
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvariantViolated {
                    what: "truth-table column normalization",
                    deviation: (sum - 1.0).abs(),
                });
            }
        }
        if let Some(errs) = &uncertainties {
            if errs.iter().flatten().any(|&e| !(e >= 0.0)) {
                return Err(Error::InvalidParameter {
                    name: "uncertainties",
                    message: alloc::string::String::from("uncertainties must be ≥ 0"),
                });
            }
        }
        Ok(TruthTable {
            row_labels,
            col_labels,
            probabilities,
            uncertainties,
            condition,
        })
    }

    /// `P(row₂ | col₃)` by outcome indices.
    pub fn prob(&self, row: usize, col: usize) -> f64 {
        self.probabilities[row][col]
    }
}

/// Fidelity against the ideal cluster state as the string grows.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityCurve {
    /// Human-readable scenario tag, e.g. `"epsilon=0.20"`.
    pub scenario: String,
    pub entries: Vec<FidelityEntry>,
}

/// One point of a [`FidelityCurve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityEntry {
    /// Spin plus photons: `k + 1` for a `k`-photon state.
    pub total_qubits: usize,
    pub fidelity: f64,
    /// Hash of the device parameters that produced this point, for
    /// auditing sweep outputs.
    pub params_hash: u64,
}

/// How the emission-time integral is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmissionMode {
    /// Simpson quadrature of the decay-time density over the
    /// post-selection window.
    Windowed { steps: usize },
    /// Decay treated as instantaneous with unit capture — the ideal limit
    /// used for fidelity targets.
    Instant,
}

impl Default for EmissionMode {
    fn default() -> Self {
        EmissionMode::Windowed {
            steps: EMISSION_STEPS,
        }
    }
}

/// Numerical controls of the sequence engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineSettings {
    /// Gauss–Hermite node count of the quasi-static Overhauser average.
    pub overhauser_nodes: usize,
    pub emission: EmissionMode,
}

impl Default for EngineSettings {
    fn default() -> Self {
        EngineSettings {
            overhauser_nodes: 32,
            emission: EmissionMode::default(),
        }
    }
}

impl EngineSettings {
    /// The dephasing-free, instant-emission limit that defines fidelity
    /// targets.
    pub fn ideal() -> Self {
        EngineSettings {
            overhauser_nodes: 1,
            emission: EmissionMode::Instant,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bases_are_orthonormal_pairs() {
        for basis in [
            MeasurementBasis::RL,
            MeasurementBasis::HV,
            MeasurementBasis::DA,
        ] {
            let [a, b] = basis.kets();
            let overlap = a.adjoint().mul(&b).unwrap().get(0, 0).norm();
            assert_abs_diff_eq!(overlap, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(a.frobenius_norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(b.frobenius_norm(), 1.0, epsilon = 1e-12);
            assert_eq!(basis.labels().len(), 2);
        }
    }

    #[test]
    fn truth_table_invariants() {
        let ok = TruthTable::new(
            ["H", "V"],
            ["R", "L"],
            [[0.28, 0.68], [0.72, 0.32]],
            None,
            "photon #1 projected onto R",
        )
        .unwrap();
        assert_abs_diff_eq!(ok.prob(1, 0), 0.72, epsilon = 1e-12);
        // A column not summing to 1 is rejected.
        assert!(TruthTable::new(
            ["H", "V"],
            ["R", "L"],
            [[0.3, 0.68], [0.72, 0.32]],
            None,
            "",
        )
        .is_err());
        // Probabilities outside [0, 1] are rejected.
        assert!(TruthTable::new(
            ["H", "V"],
            ["R", "L"],
            [[-0.1, 0.68], [1.1, 0.32]],
            None,
            "",
        )
        .is_err());
        // Negative uncertainties are rejected.
        assert!(TruthTable::new(
            ["H", "V"],
            ["R", "L"],
            [[0.28, 0.68], [0.72, 0.32]],
            Some([[0.1, -0.2], [0.1, 0.1]]),
            "",
        )
        .is_err());
    }

    #[test]
    fn default_settings_match_documented_values() {
        let s = EngineSettings::default();
        assert_eq!(s.overhauser_nodes, 32);
        assert_eq!(s.emission, EmissionMode::Windowed { steps: 64 });
        let ideal = EngineSettings::ideal();
        assert_eq!(ideal.overhauser_nodes, 1);
        assert_eq!(ideal.emission, EmissionMode::Instant);
    }
}
