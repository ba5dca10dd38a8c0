//! Scenario configuration: JSON with explicit unit suffixes in the field
//! names, validated with field-path diagnostics before anything runs.

use serde::{Deserialize, Serialize};
use trion_core::protocol::{EmissionMode, EngineSettings, PulseSchedule, MAX_PHOTONS};
use trion_core::trion::{derived_b_field, jones_h_rotated, DeviceParams, DEFAULT_T12_NS};

/// One complete scenario: device, schedule, numerics, and sweep plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Scenario tag used in output file names and metadata.
    pub label: String,
    pub device: DeviceConfig,
    /// Pulse timing; defaults to quarter-period spacing.
    #[serde(default)]
    pub schedule: ScheduleConfig,
    /// Gauss–Hermite node count of the quasi-static bath average.
    pub overhauser_nodes: usize,
    /// Simpson steps of the emission-window quadrature; `null` treats the
    /// decay as instantaneous (the ideal limit).
    pub emission_quadrature_steps: Option<usize>,
    /// Photon counts to evaluate for the fidelity/capture outputs.
    pub k_values: Vec<usize>,
    /// Optional systematic-error sweep plan (required by `sweep`).
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    /// Seed recorded in the metadata and used by any resampling step.
    pub seed: u64,
    /// Output file-name prefix; defaults to the label.
    #[serde(default)]
    pub output_prefix: Option<String>,
}

/// Device parameters with explicit units in the field names.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    /// Landé g-factor of the resident (ground) spin.
    pub g_ground: f64,
    /// g-factor of the unpaired excited-state spin.
    pub g_excited: f64,
    /// Ground-spin inhomogeneous dephasing time, ns.
    pub t2_ground_ns: f64,
    /// Excited-doublet dephasing time, ns.
    pub t2_excited_ns: f64,
    /// Radiative lifetime, ns.
    pub t_rad_ns: f64,
    /// In-plane field in millitesla; `null` derives the field that makes
    /// the default 2.08 ns pulse spacing exactly a quarter hole period.
    #[serde(rename = "b_field_mT")]
    pub b_field_mt: Option<f64>,
    /// Post-selection window, ns.
    pub window_ns: f64,
    /// Rotation of the excitation-pulse polarization away from H, degrees.
    pub pulse_rotation_deg: f64,
    /// Initial degree of circular polarization, in (0, 1].
    pub p0: f64,
}

/// Pulse-timing plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    /// Every gap is the ground-spin quarter precession period.
    QuarterPeriod,
    /// Explicit pulse gaps in ns; `k` photons consume the first `k` gaps.
    Gaps { gaps_ns: Vec<f64> },
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig::QuarterPeriod
    }
}

/// Systematic-error sweep plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Error fractions ε, each in [0, 1).
    pub epsilons: Vec<f64>,
    /// Largest photon count per curve.
    pub k_max: usize,
}

impl ScenarioConfig {
    /// Parses and validates a config from raw JSON bytes; error messages
    /// are prefixed with the offending field path.
    pub fn from_json(bytes: &[u8]) -> Result<Self, String> {
        let cfg: ScenarioConfig =
            serde_json::from_slice(bytes).map_err(|e| format!("config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-by-field validation with path-prefixed diagnostics.
    pub fn validate(&self) -> Result<(), String> {
        if self.label.is_empty() {
            return Err("label: must be non-empty".into());
        }
        let d = &self.device;
        for (path, value) in [
            ("device.t2_ground_ns", d.t2_ground_ns),
            ("device.t2_excited_ns", d.t2_excited_ns),
            ("device.t_rad_ns", d.t_rad_ns),
            ("device.window_ns", d.window_ns),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(format!("{path}: must be a positive time, got {value}"));
            }
        }
        if !d.g_ground.is_finite() || !d.g_excited.is_finite() {
            return Err("device.g_ground/g_excited: must be finite".into());
        }
        if let Some(b) = d.b_field_mt {
            // Strictly positive: the pulse schedule and truth-table gaps
            // are tied to the precession period, which diverges at B = 0.
            if !(b > 0.0) || !b.is_finite() {
                return Err(format!("device.b_field_mT: must be > 0, got {b}"));
            }
        }
        if !d.pulse_rotation_deg.is_finite() {
            return Err(format!(
                "device.pulse_rotation_deg: must be finite, got {}",
                d.pulse_rotation_deg
            ));
        }
        if !(d.p0 > 0.0 && d.p0 <= 1.0) {
            return Err(format!("device.p0: must lie in (0, 1], got {}", d.p0));
        }
        if self.overhauser_nodes == 0 || self.overhauser_nodes > 512 {
            return Err(format!(
                "overhauser_nodes: must lie in 1..=512, got {}",
                self.overhauser_nodes
            ));
        }
        if let Some(steps) = self.emission_quadrature_steps {
            if steps < 2 || steps % 2 != 0 {
                return Err(format!(
                    "emission_quadrature_steps: Simpson quadrature needs an even count ≥ 2, got {steps}"
                ));
            }
        }
        if self.k_values.is_empty() {
            return Err("k_values: must list at least one photon count".into());
        }
        for &k in &self.k_values {
            if k == 0 || k > MAX_PHOTONS {
                return Err(format!(
                    "k_values: photon counts must lie in 1..={MAX_PHOTONS}, got {k}"
                ));
            }
        }
        if let ScheduleConfig::Gaps { gaps_ns } = &self.schedule {
            let needed = self.k_values.iter().copied().max().unwrap_or(0);
            if gaps_ns.len() < needed {
                return Err(format!(
                    "schedule.gaps_ns: {needed} photons need {needed} gaps, got {}",
                    gaps_ns.len()
                ));
            }
            for (i, &g) in gaps_ns.iter().enumerate() {
                if !(g > 0.0) || !g.is_finite() {
                    return Err(format!(
                        "schedule.gaps_ns[{i}]: must be a positive time, got {g}"
                    ));
                }
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.epsilons.is_empty() {
                return Err("sweep.epsilons: must be non-empty".into());
            }
            for (i, &e) in sweep.epsilons.iter().enumerate() {
                if !(0.0..1.0).contains(&e) {
                    return Err(format!(
                        "sweep.epsilons[{i}]: error fraction must lie in [0, 1), got {e}"
                    ));
                }
                if sweep.epsilons[..i].contains(&e) {
                    return Err(format!("sweep.epsilons[{i}]: duplicate value {e}"));
                }
            }
            if sweep.k_max == 0 || sweep.k_max > MAX_PHOTONS {
                return Err(format!(
                    "sweep.k_max: must lie in 1..={MAX_PHOTONS}, got {}",
                    sweep.k_max
                ));
            }
        }
        // Backstop: the assembled physical parameters must satisfy every
        // invariant the simulation itself checks.
        self.device_params()
            .validate()
            .map_err(|e| format!("device: {e}"))?;
        Ok(())
    }

    /// The physical parameter set this config describes (fields in tesla,
    /// times in ns, Jones vector from the rotation angle).
    pub fn device_params(&self) -> DeviceParams {
        let d = &self.device;
        let b_field = match d.b_field_mt {
            Some(mt) => mt * 1e-3,
            None => derived_b_field(d.g_ground, DEFAULT_T12_NS),
        };
        DeviceParams {
            g_ground: d.g_ground,
            g_excited: d.g_excited,
            t2_ground: d.t2_ground_ns,
            t2_excited: d.t2_excited_ns,
            t_rad: d.t_rad_ns,
            b_field,
            window: d.window_ns,
            pulse_polarization: jones_h_rotated(d.pulse_rotation_deg.to_radians()),
            p0: d.p0,
        }
    }

    /// The numerical engine settings this config describes.
    pub fn engine_settings(&self) -> EngineSettings {
        EngineSettings {
            overhauser_nodes: self.overhauser_nodes,
            emission: match self.emission_quadrature_steps {
                Some(steps) => EmissionMode::Windowed { steps },
                None => EmissionMode::Instant,
            },
        }
    }

    /// The pulse schedule for a `k`-photon run (`k + 1` pulses).
    pub fn schedule_for(
        &self,
        params: &DeviceParams,
        k: usize,
    ) -> trion_core::Result<PulseSchedule> {
        match &self.schedule {
            ScheduleConfig::QuarterPeriod => PulseSchedule::quarter_period(params, k + 1),
            ScheduleConfig::Gaps { gaps_ns } => PulseSchedule::from_gaps(&gaps_ns[..k]),
        }
    }

    /// Output file-name prefix: the explicit override or the label.
    pub fn prefix(&self) -> &str {
        self.output_prefix.as_deref().unwrap_or(&self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline_json() -> String {
        std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../configs/baseline.json"
        ))
        .unwrap()
    }

    #[test]
    fn shipped_baseline_parses_and_matches_library_defaults() {
        let cfg = ScenarioConfig::from_json(baseline_json().as_bytes()).unwrap();
        assert_eq!(cfg.label, "baseline");
        let p = cfg.device_params();
        let lib = DeviceParams::baseline();
        assert_eq!(p.g_ground, lib.g_ground);
        assert_eq!(p.t2_ground, lib.t2_ground);
        assert_eq!(p.t_rad, lib.t_rad);
        assert!((p.b_field - lib.b_field).abs() < 1e-15);
        assert_eq!(p.pulse_polarization, lib.pulse_polarization);
    }

    #[test]
    fn config_round_trips_through_serialization() {
        let cfg = ScenarioConfig::from_json(baseline_json().as_bytes()).unwrap();
        let again =
            ScenarioConfig::from_json(serde_json::to_string(&cfg).unwrap().as_bytes()).unwrap();
        assert_eq!(serde_json::to_string(&cfg).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn unknown_fields_are_rejected_with_their_name() {
        let err = ScenarioConfig::from_json(br#"{"label":"x","typo_field":1}"#).unwrap_err();
        assert!(err.contains("typo_field"), "{err}");
    }

    #[test]
    fn diagnostics_carry_field_paths() {
        let mut cfg = ScenarioConfig::from_json(baseline_json().as_bytes()).unwrap();
        cfg.device.t_rad_ns = -1.0;
        let err = cfg.validate().unwrap_err();
        assert!(err.starts_with("device.t_rad_ns:"), "{err}");

        let mut cfg = ScenarioConfig::from_json(baseline_json().as_bytes()).unwrap();
        cfg.overhauser_nodes = 0;
        assert!(cfg.validate().unwrap_err().starts_with("overhauser_nodes:"));

        let mut cfg = ScenarioConfig::from_json(baseline_json().as_bytes()).unwrap();
        cfg.emission_quadrature_steps = Some(3);
        assert!(cfg
            .validate()
            .unwrap_err()
            .starts_with("emission_quadrature_steps:"));

        let mut cfg = ScenarioConfig::from_json(baseline_json().as_bytes()).unwrap();
        cfg.sweep = Some(SweepConfig {
            epsilons: vec![0.1, 0.1],
            k_max: 2,
        });
        assert!(cfg.validate().unwrap_err().starts_with("sweep.epsilons[1]:"));
    }

    #[test]
    fn explicit_gaps_must_cover_the_largest_k() {
        let mut cfg = ScenarioConfig::from_json(baseline_json().as_bytes()).unwrap();
        cfg.schedule = ScheduleConfig::Gaps {
            gaps_ns: vec![2.08],
        };
        // Baseline asks for k up to 3 photons → needs 3 gaps.
        let err = cfg.validate().unwrap_err();
        assert!(err.starts_with("schedule.gaps_ns:"), "{err}");
    }
}
