//! CSV input readers: time series, frequency-vs-field points, and
//! coincidence counts. Malformed files are reported with row numbers and
//! column names as configuration-class errors (exit code 2).

use std::path::Path;

use serde::Deserialize;
use trion_core::analysis::{CoincidenceCounts, FrequencyPoint, TimeSeries};
use trion_core::protocol::MeasurementBasis;

use crate::CliError;

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>, CliError> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn row_err(path: &Path, row: usize, msg: impl std::fmt::Display) -> CliError {
    // +2: one for the header line, one for 1-based numbering.
    CliError::Config(format!("{}:{}: {msg}", path.display(), row + 2))
}

/// Enforces the all-or-none convention for an optional per-row column.
fn collect_optional(
    path: &Path,
    column: &str,
    raw: Vec<Option<f64>>,
) -> Result<Option<Vec<f64>>, CliError> {
    let present = raw.iter().filter(|v| v.is_some()).count();
    if present == 0 {
        return Ok(None);
    }
    if present < raw.len() {
        let row = raw.iter().position(|v| v.is_none()).unwrap_or(0);
        return Err(row_err(
            path,
            row,
            format!("column `{column}` must be filled for every row or no row"),
        ));
    }
    Ok(Some(raw.into_iter().map(|v| v.unwrap_or(0.0)).collect()))
}

#[derive(Debug, Deserialize)]
struct SeriesRow {
    time_ns: f64,
    dcp: f64,
    #[serde(default)]
    err: Option<f64>,
}

/// Reads a polarization time series (columns `time_ns, dcp, err`; the
/// `err` column is optional).
pub fn read_time_series(path: &Path) -> Result<TimeSeries, CliError> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut errs = Vec::new();
    for record in reader(path)?.deserialize::<SeriesRow>() {
        let row = record.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        times.push(row.time_ns);
        values.push(row.dcp);
        errs.push(row.err);
    }
    let errs = collect_optional(path, "err", errs)?;
    TimeSeries::new(times, values, errs)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
struct FrequencyRow {
    b_field_t: f64,
    frequency_ghz: f64,
    #[serde(default)]
    err: Option<f64>,
}

/// Reads frequency-vs-field points (columns `b_field_t, frequency_ghz,
/// err`; the `err` column is optional).
pub fn read_frequency_points(path: &Path) -> Result<Vec<FrequencyPoint>, CliError> {
    let mut points = Vec::new();
    for record in reader(path)?.deserialize::<FrequencyRow>() {
        let row = record.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        points.push(FrequencyPoint {
            b_field: row.b_field_t,
            frequency: row.frequency_ghz,
            uncertainty: row.err,
        });
    }
    if points.is_empty() {
        return Err(CliError::Config(format!(
            "{}: no frequency points found",
            path.display()
        )));
    }
    Ok(points)
}

#[derive(Debug, Deserialize)]
struct CountsRow {
    basis2: String,
    basis3: String,
    outcome2: String,
    outcome3: String,
    count: u64,
}

fn outcome_index(basis: MeasurementBasis, outcome: &str) -> Option<usize> {
    basis.labels().iter().position(|l| *l == outcome)
}

/// Reads three-photon coincidence counts (columns `basis2, basis3,
/// outcome2, outcome3, count`) into the circular-basis and linear-basis
/// tables; duplicate outcome rows accumulate.
pub fn read_counts(path: &Path) -> Result<(CoincidenceCounts, CoincidenceCounts), CliError> {
    let mut circular = [[0u64; 2]; 2];
    let mut linear = [[0u64; 2]; 2];
    for (i, record) in reader(path)?.deserialize::<CountsRow>().enumerate() {
        let row = record.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if row.basis3 != "RL" {
            return Err(row_err(
                path,
                i,
                format!("basis3 must be RL (photon #3 is always read circularly), got {}", row.basis3),
            ));
        }
        let (basis2, table) = match row.basis2.as_str() {
            "RL" => (MeasurementBasis::RL, &mut circular),
            "HV" => (MeasurementBasis::HV, &mut linear),
            other => {
                return Err(row_err(path, i, format!("basis2 must be RL or HV, got {other}")));
            }
        };
        let r = outcome_index(basis2, &row.outcome2).ok_or_else(|| {
            row_err(
                path,
                i,
                format!("outcome2 `{}` is not a {:?} outcome", row.outcome2, basis2),
            )
        })?;
        let c = outcome_index(MeasurementBasis::RL, &row.outcome3).ok_or_else(|| {
            row_err(path, i, format!("outcome3 must be R or L, got {}", row.outcome3))
        })?;
        table[r][c] += row.count;
    }
    let build = |basis, counts, tag: &str| {
        CoincidenceCounts::new(basis, counts)
            .map_err(|e| CliError::Config(format!("{}: {tag} table: {e}", path.display())))
    };
    Ok((
        build(MeasurementBasis::RL, circular, "circular")?,
        build(MeasurementBasis::HV, linear, "linear")?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn series_reader_accepts_two_and_three_column_files() {
        let bare = temp_csv("time_ns,dcp\n0.0,1.0\n0.5,0.8\n");
        let s = read_time_series(bare.path()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.uncertainties.is_none());

        let with_err = temp_csv("time_ns,dcp,err\n0.0,1.0,0.02\n0.5,0.8,0.02\n");
        let s = read_time_series(with_err.path()).unwrap();
        assert_eq!(s.uncertainties.as_ref().map(Vec::len), Some(2));
    }

    #[test]
    fn series_reader_rejects_partial_err_column() {
        let mixed = temp_csv("time_ns,dcp,err\n0.0,1.0,0.02\n0.5,0.8,\n");
        let err = read_time_series(mixed.path()).unwrap_err();
        assert!(format!("{err}").contains("err"), "{err}");
    }

    #[test]
    fn counts_reader_builds_both_tables() {
        let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/measured_counts.csv");
        let (circular, linear) = read_counts(Path::new(shipped)).unwrap();
        assert_eq!(circular.total(), 200);
        assert_eq!(linear.total(), 200);
        // Circular rows are (R, L): 95 of 100 photon-#2 L given photon-#3 R.
        assert_eq!(circular.counts[1][0], 95);
        assert_eq!(linear.counts[1][0], 72);
    }

    #[test]
    fn counts_reader_rejects_bad_labels() {
        let bad = temp_csv("basis2,basis3,outcome2,outcome3,count\nDA,RL,D,R,5\n");
        assert!(matches!(read_counts(bad.path()), Err(CliError::Config(_))));
        let bad3 = temp_csv("basis2,basis3,outcome2,outcome3,count\nRL,HV,R,H,5\n");
        let err = read_counts(bad3.path()).unwrap_err();
        assert!(format!("{err}").contains("basis3"), "{err}");
    }

    #[test]
    fn frequency_reader_round_trips() {
        let f = temp_csv("b_field_t,frequency_ghz,err\n0.5,1.603,0.01\n0.25,0.801,0.01\n");
        let pts = read_frequency_points(f.path()).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].b_field, 0.5);
        assert_eq!(pts[0].uncertainty, Some(0.01));
    }
}
