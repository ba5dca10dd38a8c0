//! The sequence engine: composes one-cycle channels into spin–photon
//! register states and their figures of merit.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use super::schedule::PulseSchedule;
use super::types::{
    EmissionMode, EngineSettings, FidelityCurve, FidelityEntry, MeasurementBasis, TruthTable,
    TruthTableMode,
};
use crate::error::{Error, Result};
use crate::qmath::{
    ComplexMatrix, DensityMatrix, HilbertSpace, Normalization, PauliTransferMatrix,
    QuantumChannel, TracePreservation,
};
use crate::trion::{
    decay_isometry, dot_propagator, doublet_propagator, emission_weights, excitation_unitary,
    jones_h, jones_h_rotated, larmor_frequency, photon_h, photon_r, photon_v, sample_overhauser,
    DeviceParams, OverhauserGrid,
};

/// Label of the resident-spin qubit in engine outputs.
pub const SPIN_LABEL: &str = "spin";

/// Label of the photon emitted by a single [`Engine::cycle_channel`].
pub const CYCLE_PHOTON_LABEL: &str = "photon";

/// Largest supported photon number: an 8-qubit register (spin + 7 photons,
/// a 256×256 density matrix) keeps the dense representation comfortably in
/// memory while covering every published operating point.
pub const MAX_PHOTONS: usize = 7;

/// The spin qubit space.
fn spin_space() -> HilbertSpace {
    HilbertSpace::single(SPIN_LABEL, 2).expect("static dims")
}

/// Spin ⊗ one fresh photon, the output of a single cycle.
fn spin_photon_space() -> HilbertSpace {
    HilbertSpace::from_factors(&[(SPIN_LABEL, 2), (CYCLE_PHOTON_LABEL, 2)]).expect("static dims")
}

/// Decay restricted to the register: T↑ → |⇑⟩⊗|R⟩, T↓ → |⇓⟩⊗|L⟩ as a
/// 4×4 map from the four-level dot onto spin ⊗ photon (the top block of
/// the full decay isometry — trion population always lands in the ground
/// doublet).
fn decay_to_register() -> ComplexMatrix {
    let d = decay_isometry();
    ComplexMatrix::from_fn(4, 4, |i, j| d.get(i, j))
}

/// Embedding of the spin qubit into the four-level dot: `[I₂; 0]`.
fn spin_embedding() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 2, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// The H↔V exchange written in the circular basis, `i(|R⟩⟨L| − |L⟩⟨R|)`:
/// Hermitian, unitary, and an involution.
fn hv_flip() -> ComplexMatrix {
    ComplexMatrix::from_entries(
        2,
        2,
        alloc::vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .expect("static dims")
}

/// Stable FNV-1a hash of the physical parameters, for tagging sweep
/// outputs with the exact operating point that produced them.
pub fn params_hash(p: &DeviceParams) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    // `v + 0.0` folds -0.0 into +0.0 so physically identical parameter sets
    // (e.g. a zero-angle polarization rotation) hash identically.
    let mut eat = |v: f64| {
        for byte in (v + 0.0).to_bits().to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    for v in [
        p.g_ground,
        p.g_excited,
        p.t2_ground,
        p.t2_excited,
        p.t_rad,
        p.b_field,
        p.window,
        p.p0,
    ] {
        eat(v);
    }
    for j in p.pulse_polarization {
        eat(j.re);
        eat(j.im);
    }
    h
}

/// The documented systematic-error model: rotate the pulse polarization by
/// `ε·45°`, scale the field by `(1+ε)`, and shrink both dephasing times by
/// `(1−ε)`. Each resource is fully lost at ε = 1.
pub fn apply_error_model(p: &DeviceParams, epsilon: f64) -> DeviceParams {
    DeviceParams {
        pulse_polarization: jones_h_rotated(epsilon * core::f64::consts::FRAC_PI_4),
        b_field: p.b_field * (1.0 + epsilon),
        t2_ground: p.t2_ground * (1.0 - epsilon),
        t2_excited: p.t2_excited * (1.0 - epsilon),
        ..p.clone()
    }
}

/// Simulator of the full generation sequence at one operating point.
///
/// The engine holds the device parameters, the numerical settings, and the
/// pre-sampled Overhauser grid. All observables are averages over that
/// frozen-detuning grid: each node sees a fully coherent sequence, and the
/// weighted mixture reproduces quasi-static Gaussian dephasing.
#[derive(Debug, Clone)]
pub struct Engine {
    params: DeviceParams,
    settings: EngineSettings,
    grid: OverhauserGrid,
}

impl Engine {
    /// Engine with default numerical settings (32 Overhauser nodes,
    /// 64-step emission quadrature).
    pub fn new(params: DeviceParams) -> Result<Self> {
        Engine::with_settings(params, EngineSettings::default())
    }

    pub fn with_settings(params: DeviceParams, settings: EngineSettings) -> Result<Self> {
        params.validate()?;
        if let EmissionMode::Windowed { steps } = settings.emission {
            // Surface bad quadrature settings at construction time.
            emission_weights(params.window, params.t_rad, steps)?;
        }
        let grid = sample_overhauser(params.t2_ground, settings.overhauser_nodes)?;
        Ok(Engine {
            params,
            settings,
            grid,
        })
    }

    pub fn params(&self) -> &DeviceParams {
        &self.params
    }

    pub fn settings(&self) -> &EngineSettings {
        &self.settings
    }

    pub fn grid(&self) -> &OverhauserGrid {
        &self.grid
    }

    /// Kraus family of one cycle at a fixed Overhauser detuning.
    ///
    /// `gap_after = Some(gap)`: after each candidate decay time τ the spin
    /// precesses for the remaining `gap − τ`. `None`: the sequence ends at
    /// the decay (the register is complete; nothing evolves the spin before
    /// its hypothetical next pulse).
    fn cycle_kraus(&self, gap_after: Option<f64>, node: f64) -> Result<Vec<ComplexMatrix>> {
        let p = &self.params;
        if let Some(gap) = gap_after {
            let min_gap = match self.settings.emission {
                EmissionMode::Windowed { .. } => p.window,
                EmissionMode::Instant => 0.0,
            };
            if gap < min_gap - 1e-9 {
                return Err(Error::InvalidParameter {
                    name: "gap",
                    message: alloc::format!(
                        "pulse gap {gap} ns must cover the {min_gap} ns emission window"
                    ),
                });
            }
        }
        let f_g = larmor_frequency(p.g_ground, p.b_field)? + node;
        let f_e =
            larmor_frequency(p.g_excited, p.b_field)? + node * p.t2_ground / p.t2_excited;
        let weights = match self.settings.emission {
            EmissionMode::Windowed { steps } => emission_weights(p.window, p.t_rad, steps)?,
            EmissionMode::Instant => alloc::vec![(0.0, 1.0)],
        };
        let u_x = excitation_unitary(p);
        let decay = decay_to_register();
        let embed = spin_embedding();
        let i2 = ComplexMatrix::identity(2);
        let mut kraus = Vec::with_capacity(weights.len());
        for (tau, w) in weights {
            // The τ-propagator's ground block never survives the decay
            // projector, so only the trion block matters here.
            let pre = decay
                .mul(&dot_propagator(f_g, f_e, tau))?
                .mul(&u_x)?
                .mul(&embed)?;
            let full = match gap_after {
                Some(gap) => doublet_propagator(f_g, gap - tau).kron(&i2).mul(&pre)?,
                None => pre,
            };
            kraus.push(full.scale(Complex64::new(w.sqrt(), 0.0)));
        }
        Ok(kraus)
    }

    fn cycle(&self, gap_after: Option<f64>, node: f64) -> Result<QuantumChannel> {
        QuantumChannel::new(
            spin_space(),
            spin_photon_space(),
            self.cycle_kraus(gap_after, node)?,
            TracePreservation::NonIncreasing,
        )
    }

    /// One full protocol cycle at Overhauser detuning `node`: excitation,
    /// windowed emission (captured branch only), and free precession for
    /// the remainder of `gap`.
    ///
    /// The channel maps the spin qubit to spin ⊗ one photon and is
    /// trace-non-increasing: its missing weight is the probability that no
    /// photon was captured (which post-selection discards).
    pub fn cycle_channel(&self, gap: f64, node: f64) -> Result<QuantumChannel> {
        self.cycle(Some(gap), node)
    }

    /// The last cycle of a sequence: identical to
    /// [`cycle_channel`](Self::cycle_channel) but with no precession after
    /// the decay, since nothing follows the final emission.
    pub fn emission_terminated_cycle(&self, node: f64) -> Result<QuantumChannel> {
        self.cycle(None, node)
    }

    /// The joint spin ⊗ k-photon state after a full sequence, with the
    /// sequence capture probability.
    ///
    /// The spin starts maximally mixed; the first pulse's photon is
    /// projected onto R (heralding |⇑⟩ at the emission instant), and each
    /// later pulse appends one register photon, labeled `ph2 … ph{k+1}` in
    /// chronological order after the heralding photon. The returned state
    /// is averaged over the Overhauser grid and renormalized; the second
    /// value is the joint probability of the herald and all k captures.
    pub fn k_photon_state(
        &self,
        k: usize,
        schedule: &PulseSchedule,
    ) -> Result<(DensityMatrix, f64)> {
        if k > MAX_PHOTONS {
            return Err(Error::InvalidParameter {
                name: "k",
                message: alloc::format!(
                    "{k} photons exceed the {MAX_PHOTONS}-photon register budget"
                ),
            });
        }
        if schedule.photons() != k {
            return Err(Error::InvalidParameter {
                name: "schedule",
                message: alloc::format!(
                    "{} photons need {} pulses, schedule has {}",
                    k,
                    k + 1,
                    schedule.pulses()
                ),
            });
        }
        let gaps = schedule.gaps();
        let labels: Vec<String> = (0..k).map(|j| alloc::format!("ph{}", j + 2)).collect();
        let mut chrono: Vec<&str> = alloc::vec![SPIN_LABEL];
        chrono.extend(labels.iter().map(String::as_str));
        let mut final_space = spin_space();
        for label in &labels {
            final_space = final_space.tensor(&HilbertSpace::single(label, 2)?)?;
        }
        let dim = final_space.dim();
        let mut total = ComplexMatrix::zeros(dim, dim);
        let r_ket = photon_r();
        for (node, weight) in self.grid.iter() {
            // Initialization: pulse, emission, heralding projection onto R.
            let init_gap = if k == 0 { None } else { Some(gaps[0]) };
            let after_init = self
                .cycle(init_gap, node)?
                .apply(&DensityMatrix::maximally_mixed(spin_space()))?;
            let (mut state, _) = after_init.condition_on(CYCLE_PHOTON_LABEL, &r_ket)?;
            for (j, label) in labels.iter().enumerate() {
                let gap_after = if j + 1 < k { Some(gaps[j + 1]) } else { None };
                let out_space =
                    HilbertSpace::from_factors(&[(SPIN_LABEL, 2), (label.as_str(), 2)])?;
                let ch = self
                    .cycle(gap_after, node)?
                    .relabeled(spin_space(), out_space)?;
                state = ch.apply_to_factor(&state)?;
            }
            let ordered = state.permute(&chrono)?;
            total = total.add(&ordered.matrix().scale(Complex64::new(weight, 0.0)))?;
        }
        let capture = total.trace()?.re;
        if capture < 1e-12 {
            return Err(Error::InvariantViolated {
                what: "sequence capture probability is positive",
                deviation: capture,
            });
        }
        let rho = DensityMatrix::new(
            final_space,
            total.scale(Complex64::new(1.0 / capture, 0.0)),
            Normalization::Normalized,
        )?;
        Ok((rho, capture))
    }

    /// Conditional photon-2-given-photon-3 probabilities from a three-pulse
    /// run, with photon #1 projected onto R.
    ///
    /// The first gap is a quarter period; the second is set by `mode`,
    /// which also fixes the photon-2 readout basis. Photon #3 is always
    /// read in R/L and the spin is traced out.
    pub fn truth_table(&self, mode: TruthTableMode) -> Result<TruthTable> {
        let t12 = self.params.quarter_period()?;
        let gaps = match mode {
            TruthTableMode::T23EqualsT12 => [t12, t12],
            TruthTableMode::T23EqualsTwiceT12 => [t12, 2.0 * t12],
        };
        let schedule = PulseSchedule::from_gaps(&gaps)?;
        let (rho, _) = self.k_photon_state(2, &schedule)?;
        let photons = rho.partial_trace(&["ph2", "ph3"])?;
        let basis2 = mode.photon2_basis();
        let basis3 = MeasurementBasis::RL;
        let kets2 = basis2.kets();
        let kets3 = basis3.kets();
        let mut joint = [[0.0f64; 2]; 2];
        for (i, k2) in kets2.iter().enumerate() {
            for (j, k3) in kets3.iter().enumerate() {
                joint[i][j] = photons.fidelity_with_pure(&k2.kron(k3))?;
            }
        }
        let mut probabilities = [[0.0f64; 2]; 2];
        for col in 0..2 {
            let sum = joint[0][col] + joint[1][col];
            if sum < 1e-12 {
                return Err(Error::InvariantViolated {
                    what: "photon-#3 outcome has nonzero probability",
                    deviation: sum,
                });
            }
            for row in 0..2 {
                probabilities[row][col] = (joint[row][col] / sum).clamp(0.0, 1.0);
            }
        }
        TruthTable::new(
            basis2.labels(),
            basis3.labels(),
            probabilities,
            None,
            "photon #1 projected onto R",
        )
    }

    /// Pauli transfer matrix of one quarter-period cycle as a two-qubit map
    /// on spin ⊗ photon.
    ///
    /// The fresh photon enters in |H⟩ by convention; the input |V⟩ slice is
    /// completed with an H↔V flip on the output so the embedded map is a
    /// genuine two-qubit channel whose |H⟩ slice acts exactly like
    /// [`cycle_channel`](Self::cycle_channel). The map is averaged over the
    /// Overhauser grid and renormalized by the captured weight, so for the
    /// saturated protocol pulse its first row is the trace-preserving
    /// signature `(1, 0, …, 0)`.
    pub fn cycle_ptm(&self) -> Result<PauliTransferMatrix> {
        let gap = self.params.quarter_period()?;
        let i2 = ComplexMatrix::identity(2);
        let lift_h = i2.kron(&photon_h().adjoint());
        let lift_v = i2.kron(&photon_v().adjoint());
        let flip = i2.kron(&hv_flip());
        let mut kraus = Vec::new();
        for (node, w) in self.grid.iter() {
            let root_w = Complex64::new(w.sqrt(), 0.0);
            for k in self.cycle_kraus(Some(gap), node)? {
                let embedded = k.mul(&lift_h)?.add(&flip.mul(&k)?.mul(&lift_v)?)?;
                kraus.push(embedded.scale(root_w));
            }
        }
        let space = spin_photon_space();
        let raw = QuantumChannel::new(
            space.clone(),
            space.clone(),
            kraus,
            TracePreservation::NonIncreasing,
        )?;
        // Renormalize by the captured weight (the largest eigenvalue of
        // Σ K†K) so the post-selected map reads as trace-preserving.
        let sum = ComplexMatrix::identity(4).sub(&raw.kraus_deficit()?)?;
        let (vals, _) = sum.eigh()?;
        let captured = vals[3];
        if captured < 1e-12 {
            return Err(Error::InvariantViolated {
                what: "cycle capture probability is positive",
                deviation: captured,
            });
        }
        let scale = Complex64::new(1.0 / captured.sqrt(), 0.0);
        let renormalized: Vec<ComplexMatrix> =
            raw.kraus().iter().map(|k| k.scale(scale)).collect();
        let channel = QuantumChannel::new(
            space.clone(),
            space,
            renormalized,
            TracePreservation::NonIncreasing,
        )?;
        PauliTransferMatrix::from_channel(&channel)
    }

    /// The pure state the sequence would produce with dephasing off,
    /// instant emission, an exact H pulse, and the given schedule.
    fn ideal_target(&self, k: usize, schedule: &PulseSchedule) -> Result<DensityMatrix> {
        let p_ideal = DeviceParams {
            pulse_polarization: jones_h(),
            ..self.params.clone()
        };
        let ideal = Engine::with_settings(p_ideal, EngineSettings::ideal())?;
        let (rho, _) = ideal.k_photon_state(k, schedule)?;
        let purity = rho.matrix().mul(rho.matrix())?.trace()?.re;
        if (purity - 1.0).abs() > 1e-9 {
            return Err(Error::InvariantViolated {
                what: "ideal target state is pure",
                deviation: (purity - 1.0).abs(),
            });
        }
        Ok(rho)
    }

    /// Fidelity of the k-photon state against the ideal cluster-state
    /// target, on a quarter-period schedule.
    pub fn cluster_fidelity(&self, k: usize) -> Result<f64> {
        let schedule = PulseSchedule::quarter_period(&self.params, k + 1)?;
        let target = self.ideal_target(k, &schedule)?;
        let (rho, _) = self.k_photon_state(k, &schedule)?;
        fidelity_against_pure(&target, &rho)
    }

    /// Fidelity curves under the documented systematic-error model, one
    /// curve per ε, each with entries for k = 1 … `k_max` photons.
    ///
    /// The schedule and the fidelity target stay pinned to the unperturbed
    /// parameters: the error model describes a miscalibrated machine still
    /// aiming at the original cluster state.
    pub fn error_sweep(&self, epsilons: &[f64], k_max: usize) -> Result<Vec<FidelityCurve>> {
        if k_max == 0 || k_max > MAX_PHOTONS {
            return Err(Error::InvalidParameter {
                name: "k_max",
                message: alloc::format!("k_max must be in 1..={MAX_PHOTONS}, got {k_max}"),
            });
        }
        for &eps in epsilons {
            if !(0.0..1.0).contains(&eps) {
                return Err(Error::InvalidParameter {
                    name: "epsilons",
                    message: alloc::format!("error fraction {eps} outside [0, 1)"),
                });
            }
        }
        let mut schedules = Vec::with_capacity(k_max);
        let mut targets = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let schedule = PulseSchedule::quarter_period(&self.params, k + 1)?;
            targets.push(self.ideal_target(k, &schedule)?);
            schedules.push(schedule);
        }
        let mut curves = Vec::with_capacity(epsilons.len());
        for &eps in epsilons {
            let p_eps = apply_error_model(&self.params, eps);
            let hash = params_hash(&p_eps);
            let engine = Engine::with_settings(p_eps, self.settings)?;
            let mut entries = Vec::with_capacity(k_max);
            for k in 1..=k_max {
                let (rho, _) = engine.k_photon_state(k, &schedules[k - 1])?;
                entries.push(FidelityEntry {
                    total_qubits: k + 1,
                    fidelity: fidelity_against_pure(&targets[k - 1], &rho)?,
                    params_hash: hash,
                });
            }
            curves.push(FidelityCurve {
                scenario: alloc::format!("epsilon={eps:.2}"),
                entries,
            });
        }
        Ok(curves)
    }
}

/// `tr(ρ_target · ρ)` for a pure (rank-one) target density matrix.
fn fidelity_against_pure(target: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    let f = target.matrix().mul(rho.matrix())?.trace()?.re;
    Ok(f.clamp(0.0, 1.0))
}
