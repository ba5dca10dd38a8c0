//! Coincidence-count reduction: raw two-photon counts → conditional
//! truth tables with binomial uncertainties.
//!
//! Counts are organized as photon #2 measured in a chosen basis (rows)
//! against photon #3 measured in the circular basis (columns), with photon
//! #1 already projected onto R as the heralding step. Conditioning on the
//! photon-#3 column converts raw counts into the conditional probabilities
//! that the fidelity bounds consume.

#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use crate::error::{Error, Result};
use crate::protocol::{MeasurementBasis, TruthTable};

/// Raw two-photon coincidence counts.
///
/// `counts[row][col]` is the number of coincidences with photon #2 in the
/// `row`-th outcome of `basis2` (label order of
/// [`MeasurementBasis::labels`]) and photon #3 in the `col`-th outcome of
/// the circular basis (R, then L).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoincidenceCounts {
    /// Measurement basis of photon #2 (rows).
    pub basis2: MeasurementBasis,
    /// Coincidence counts, rows by photon-#2 outcome, columns by
    /// photon-#3 outcome in (R, L) order.
    pub counts: [[u64; 2]; 2],
}

impl CoincidenceCounts {
    /// Builds a count table; at least one coincidence must be present.
    pub fn new(basis2: MeasurementBasis, counts: [[u64; 2]; 2]) -> Result<Self> {
        let total: u64 = counts.iter().flatten().sum();
        if total == 0 {
            return Err(Error::BadData(alloc::string::String::from(
                "coincidence table contains no counts",
            )));
        }
        Ok(CoincidenceCounts { basis2, counts })
    }

    /// Total number of recorded coincidences.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Conditions on the photon-#3 outcome: each column is normalized to
    /// its own total, giving `P(outcome₂ | outcome₃)` with the binomial
    /// standard error `√(p(1−p)/n_col)`.
    pub fn conditional_probs(&self) -> Result<TruthTable> {
        let mut probabilities = [[0.0; 2]; 2];
        let mut uncertainties = [[0.0; 2]; 2];
        for col in 0..2 {
            let n_col = self.counts[0][col] + self.counts[1][col];
            if n_col == 0 {
                let tag = MeasurementBasis::RL.labels()[col];
                return Err(Error::BadData(alloc::format!(
                    "no coincidences with photon #3 in {tag}; cannot condition on it"
                )));
            }
            for row in 0..2 {
                let p = self.counts[row][col] as f64 / n_col as f64;
                probabilities[row][col] = p;
                uncertainties[row][col] = (p * (1.0 - p) / n_col as f64).sqrt();
            }
        }
        TruthTable::new(
            self.basis2.labels(),
            MeasurementBasis::RL.labels(),
            probabilities,
            Some(uncertainties),
            "photon #1 projected onto R",
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn conditioning_normalizes_each_column() {
        // Rows (H, V); columns (R, L). 100 counts in each column.
        let counts = CoincidenceCounts::new(
            MeasurementBasis::HV,
            [[28, 68], [72, 32]],
        )
        .unwrap();
        assert_eq!(counts.total(), 200);
        let table = counts.conditional_probs().unwrap();
        assert_eq!(table.row_labels, ["H", "V"]);
        assert_eq!(table.col_labels, ["R", "L"]);
        assert_relative_eq!(table.prob(0, 0), 0.28, max_relative = 1e-12);
        assert_relative_eq!(table.prob(1, 0), 0.72, max_relative = 1e-12);
        assert_relative_eq!(table.prob(0, 1), 0.68, max_relative = 1e-12);
        assert_relative_eq!(table.prob(1, 1), 0.32, max_relative = 1e-12);
        for col in 0..2 {
            let sum: f64 = (0..2).map(|row| table.prob(row, col)).sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-15);
        }
        let sigma = table.uncertainties.unwrap();
        // Within a column both rows share p(1−p); columns differ.
        let expected = [(0.28f64 * 0.72 / 100.0).sqrt(), (0.68f64 * 0.32 / 100.0).sqrt()];
        for col in 0..2 {
            for row in 0..2 {
                assert_relative_eq!(sigma[row][col], expected[col], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_column_has_zero_binomial_error() {
        let counts =
            CoincidenceCounts::new(MeasurementBasis::RL, [[0, 50], [40, 0]]).unwrap();
        let table = counts.conditional_probs().unwrap();
        assert_eq!(table.prob(0, 0), 0.0);
        assert_eq!(table.prob(1, 0), 1.0);
        let sigma = table.uncertainties.unwrap();
        assert_eq!(sigma[0][0], 0.0);
        assert_eq!(sigma[1][0], 0.0);
    }

    #[test]
    fn empty_tables_and_columns_are_rejected() {
        assert!(CoincidenceCounts::new(MeasurementBasis::HV, [[0, 0], [0, 0]]).is_err());
        let lopsided =
            CoincidenceCounts::new(MeasurementBasis::HV, [[0, 10], [0, 20]]).unwrap();
        let err = lopsided.conditional_probs().unwrap_err();
        assert!(alloc::format!("{err}").contains('R'));
    }
}
