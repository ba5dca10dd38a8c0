//! Output emission: schema-stable CSVs, JSON sidecars, and the scenario
//! metadata record. All floats are written with fixed formatting so that
//! identical runs produce byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use trion_core::protocol::TruthTable;

use crate::CliError;

/// Identifier of the systematic-error mapping used by sweeps, recorded in
/// every metadata sidecar so alternative mappings stay comparable.
pub const EPSILON_MAPPING: &str =
    "pulse Jones vector rotated by eps*45deg; B scaled by (1+eps); both T2* scaled by (1-eps)";

/// Fixed-precision float formatting shared by every CSV writer.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.9}")
}

/// SHA-256 of raw bytes, hex-encoded — the content hash recorded for
/// configs and data inputs.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes a file, mapping IO failures to runtime errors.
pub fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Creates the output directory (and parents) if missing.
pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

/// One point of the scenario fidelity/capture table.
pub struct CurvePoint {
    pub total_qubits: usize,
    pub fidelity: f64,
    pub capture_probability: f64,
}

/// CSV with header `total_qubits,fidelity,capture_probability`.
pub fn fidelity_curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("total_qubits,fidelity,capture_probability\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            p.total_qubits,
            fmt_f(p.fidelity),
            fmt_f(p.capture_probability)
        ));
    }
    out
}

/// CSV with header `outcome2,outcome3,probability`, rows in row-major
/// order of the table.
pub fn truth_table_csv(table: &TruthTable) -> String {
    let mut out = String::from("outcome2,outcome3,probability\n");
    for (r, row_label) in table.row_labels.iter().enumerate() {
        for (c, col_label) in table.col_labels.iter().enumerate() {
            out.push_str(&format!("{row_label},{col_label},{}\n", fmt_f(table.prob(r, c))));
        }
    }
    out
}

/// One row of the merged sweep band.
pub struct BandRow {
    pub epsilon: f64,
    pub total_qubits: usize,
    pub fidelity: f64,
}

/// CSV with header `epsilon,total_qubits,fidelity`, rows sorted by
/// (ε, qubit count) so assembly order cannot leak into the file.
pub fn band_csv(mut rows: Vec<BandRow>) -> String {
    rows.sort_by(|a, b| {
        a.epsilon
            .total_cmp(&b.epsilon)
            .then(a.total_qubits.cmp(&b.total_qubits))
    });
    let mut out = String::from("epsilon,total_qubits,fidelity\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f(r.epsilon),
            r.total_qubits,
            fmt_f(r.fidelity)
        ));
    }
    out
}

/// Per-curve CSV with header `total_qubits,fidelity`.
pub fn curve_csv(entries: &[(usize, f64)]) -> String {
    let mut out = String::from("total_qubits,fidelity\n");
    for (q, f) in entries {
        out.push_str(&format!("{q},{}\n", fmt_f(*f)));
    }
    out
}

/// Derived quantities echoed for auditing: everything downstream of the
/// config that the simulation actually uses.
#[derive(Debug, Serialize)]
pub struct DerivedValues {
    pub b_field_mt: f64,
    pub larmor_ground_ghz: f64,
    pub larmor_excited_ghz: f64,
    pub quarter_period_ns: f64,
    pub hole_period_ns: f64,
    pub capture_probability: f64,
    pub params_hash: String,
}

/// The metadata sidecar written next to every scenario output set.
#[derive(Debug, Serialize)]
pub struct Metadata {
    pub label: String,
    pub tool_version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub overhauser_nodes: usize,
    pub emission_quadrature_steps: Option<usize>,
    pub epsilon_mapping: String,
    pub derived: DerivedValues,
    pub files: Vec<String>,
    /// Named invariant checks performed during the run.
    pub checks: Vec<CheckResult>,
}

/// Outcome of one post-run invariant check.
#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
}

/// Serializes the metadata sidecar (struct field order is fixed, so the
/// bytes are deterministic) and writes it into `dir`.
pub fn write_metadata(dir: &Path, prefix: &str, meta: &Metadata) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{prefix}_metadata.json"));
    let body = serde_json::to_string_pretty(meta)
        .map_err(|e| CliError::Runtime(format!("metadata serialization failed: {e}")))?;
    write_file(&path, &format!("{body}\n"))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_have_fixed_width() {
        assert_eq!(fmt_f(0.5), "0.500000000");
        assert_eq!(fmt_f(1.0 / 3.0), "0.333333333");
    }

    #[test]
    fn band_rows_are_sorted_canonically() {
        let csv = band_csv(vec![
            BandRow { epsilon: 0.2, total_qubits: 2, fidelity: 0.5 },
            BandRow { epsilon: 0.0, total_qubits: 3, fidelity: 0.7 },
            BandRow { epsilon: 0.0, total_qubits: 2, fidelity: 0.8 },
        ]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "epsilon,total_qubits,fidelity");
        assert!(lines[1].starts_with("0.000000000,2"));
        assert!(lines[2].starts_with("0.000000000,3"));
        assert!(lines[3].starts_with("0.200000000,2"));
    }

    #[test]
    fn content_hash_is_stable() {
        assert_eq!(
            content_hash(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
