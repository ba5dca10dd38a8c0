//! Hamiltonians and quantum channels of the X⁺ four-level system.
//!
//! Unit conventions: times in ns, frequencies in GHz, fields in tesla.
//! Hamiltonians are returned in units of `h·GHz`, so the propagator over
//! `t` ns is `exp(−i·2π·H·t)`.
//!
//! Spin rotation convention: an in-plane field precesses each doublet under
//! `H = ½·f·σy`, i.e. `U(t) = exp(−iπ f t σy)` is the *real* rotation
//! `[[cos θ, −sin θ], [sin θ, cos θ]]` with `θ = π f t`. A quarter period
//! thus maps |⇑⟩ → (|⇑⟩+|⇓⟩)/√2 exactly. Combined with the photon phase
//! conventions in [`levels`](super::levels) this reproduces the protocol's
//! textbook two- and three-qubit states literally.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use super::constants::MU_B_OVER_H_GHZ_PER_T;
use super::grid::OverhauserGrid;
use super::levels::{Level, LEVEL_DIM};
use super::params::DeviceParams;
use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, HilbertSpace, QuantumChannel, TracePreservation};

/// Default number of Simpson steps for the emission-time quadrature.
pub const EMISSION_STEPS: usize = 64;

/// Label of the four-level dot factor used by this module's channels.
pub const DOT_LABEL: &str = "dot";

/// Label of the emitted-photon factor.
pub const PHOTON_LABEL: &str = "photon";

/// Larmor frequency `f_L = g·μ_B·b/h` in GHz.
pub fn larmor_frequency(g: f64, b: f64) -> Result<f64> {
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::InvalidParameter {
            name: "b",
            message: alloc::format!("magnetic field must be ≥ 0 tesla, got {b}"),
        });
    }
    Ok(g * MU_B_OVER_H_GHZ_PER_T * b)
}

/// The four-level space on the [`DOT_LABEL`] factor.
pub(crate) fn dot_space() -> HilbertSpace {
    HilbertSpace::single(DOT_LABEL, LEVEL_DIM).expect("static dims")
}

/// Dot ⊗ photon, the output space of emission.
pub(crate) fn dot_photon_space() -> HilbertSpace {
    HilbertSpace::from_factors(&[(DOT_LABEL, LEVEL_DIM), (PHOTON_LABEL, 2)]).expect("static dims")
}

/// The real rotation `exp(−iθσy) = [[cos θ, −sin θ], [sin θ, cos θ]]`.
pub(crate) fn rotation_y(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_entries(
        2,
        2,
        alloc::vec![
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
    )
    .expect("static dims")
}

/// Doublet propagator over `t` ns at total frequency `f` GHz.
pub(crate) fn doublet_propagator(f: f64, t: f64) -> ComplexMatrix {
    rotation_y(core::f64::consts::PI * f * t)
}

/// Block-diagonal 4×4 propagator: ground doublet at `f_ground`, trion
/// doublet at `f_excited`, over `t` ns.
pub(crate) fn dot_propagator(f_ground: f64, f_excited: f64, t: f64) -> ComplexMatrix {
    let g = doublet_propagator(f_ground, t);
    let e = doublet_propagator(f_excited, t);
    ComplexMatrix::from_fn(LEVEL_DIM, LEVEL_DIM, |i, j| match (i / 2, j / 2) {
        (0, 0) => g.get(i, j),
        (1, 1) => e.get(i - 2, j - 2),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// Zeeman Hamiltonians `(ground, excited)` as 2×2 Hermitian matrices in
/// units of `h·GHz`: `H = ½·f_L·σy` on each doublet.
pub fn build_hamiltonians(p: &DeviceParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let half_sigma_y = |f: f64| {
        ComplexMatrix::from_entries(
            2,
            2,
            alloc::vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -0.5 * f),
                Complex64::new(0.0, 0.5 * f),
                Complex64::new(0.0, 0.0),
            ],
        )
        .expect("static dims")
    };
    let f_g = larmor_frequency(p.g_ground, p.b_field)?;
    let f_e = larmor_frequency(p.g_excited, p.b_field)?;
    Ok((half_sigma_y(f_g), half_sigma_y(f_e)))
}

/// Spin-selective saturated π-pulse with the device's Jones vector.
///
/// Each circular component drives one selection-rule branch: a nonzero
/// amplitude `j` transfers its ground level fully into its trion level with
/// phase `j/|j|` (and returns trion population to ground with the conjugate
/// phase, completing the unitary); an exactly zero component leaves its
/// branch untouched. Pulse amplitudes beyond the phase never enter: the
/// pulse is saturated by assumption.
pub fn excitation_map(p: &DeviceParams) -> Result<QuantumChannel> {
    p.validate()?;
    QuantumChannel::unitary(dot_space(), excitation_unitary(p))
}

/// The 4×4 unitary of [`excitation_map`], for callers that compose raw
/// matrices. Assumes `p` already validated.
pub(crate) fn excitation_unitary(p: &DeviceParams) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(LEVEL_DIM);
    let branches = [
        (Level::HoleUp, Level::TrionUp, p.pulse_polarization[0]),
        (Level::HoleDown, Level::TrionDown, p.pulse_polarization[1]),
    ];
    for (ground, trion, jones) in branches {
        if jones.norm() < 1e-12 {
            continue;
        }
        let phase = jones / jones.norm();
        let (g, e) = (ground.index(), trion.index());
        u.set(g, g, Complex64::new(0.0, 0.0));
        u.set(e, e, Complex64::new(0.0, 0.0));
        u.set(e, g, phase);
        u.set(g, e, -phase.conj());
    }
    u
}

/// Simpson quadrature of the decay-time density over `[0, window]`:
/// `(τ_i, w_i)` with `Σ w_i = 1 − e^{−window/t_rad}` up to O(h⁴).
pub(crate) fn emission_weights(
    window: f64,
    t_rad: f64,
    steps: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(window > 0.0) || !window.is_finite() {
        return Err(Error::InvalidParameter {
            name: "window",
            message: alloc::format!("post-selection window must be positive, got {window}"),
        });
    }
    if steps < 2 || steps % 2 != 0 {
        return Err(Error::InvalidParameter {
            name: "steps",
            message: alloc::format!("Simpson rule needs an even step count ≥ 2, got {steps}"),
        });
    }
    let h = window / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let coeff = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let tau = i as f64 * h;
        let pdf = (-tau / t_rad).exp() / t_rad;
        out.push((tau, coeff * h / 3.0 * pdf));
    }
    Ok(out)
}

/// The decay isometry on captured branches: T↑ → |⇑⟩⊗|R⟩, T↓ → |⇓⟩⊗|L⟩,
/// ground levels annihilated (they cannot emit).
pub(crate) fn decay_isometry() -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(2 * LEVEL_DIM, LEVEL_DIM);
    // Composite output index = dot·2 + photon, with R = 0, L = 1.
    d.set(Level::HoleUp.index() * 2, Level::TrionUp.index(), Complex64::new(1.0, 0.0));
    d.set(
        Level::HoleDown.index() * 2 + 1,
        Level::TrionDown.index(),
        Complex64::new(1.0, 0.0),
    );
    d
}

/// Kraus operator carrying non-emitting ground amplitudes into the enlarged
/// space, with the (never-populated) photon slot parked in |H⟩.
pub(crate) fn ground_passthrough() -> ComplexMatrix {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut k = ComplexMatrix::zeros(2 * LEVEL_DIM, LEVEL_DIM);
    for level in [Level::HoleUp, Level::HoleDown] {
        let g = level.index();
        k.set(g * 2, g, Complex64::new(s, 0.0));
        k.set(g * 2 + 1, g, Complex64::new(s, 0.0));
    }
    k
}

/// Time-integrated, post-selected emission with the default quadrature.
///
/// See [`emission_map_with_steps`] for the contract.
pub fn emission_map(p: &DeviceParams) -> Result<QuantumChannel> {
    emission_map_with_steps(p, EMISSION_STEPS)
}

/// Conditional map for "a photon was captured within the post-selection
/// window", resolved by Simpson quadrature over the emission time τ.
///
/// For each τ the trion doublet precesses for τ at its bare Larmor
/// frequency, then decays through the selection rules; the branch weight is
/// `(1/t_rad)·e^{−τ/t_rad}·dτ`. The total captured probability is
/// `1 − e^{−window/t_rad}`. Ground amplitudes pass through unchanged in a
/// separate Kraus operator (no photon is emitted; coherence with captured
/// branches is physically destroyed by the photon's presence). The channel
/// is trace-non-increasing; the deficit is `e^{−window/t_rad}` times the
/// identity on the trion subspace.
pub fn emission_map_with_steps(p: &DeviceParams, steps: usize) -> Result<QuantumChannel> {
    p.validate()?;
    let weights = emission_weights(p.window, p.t_rad, steps)?;
    let f_e = larmor_frequency(p.g_excited, p.b_field)?;
    let d = decay_isometry();
    let mut kraus = Vec::with_capacity(weights.len() + 1);
    kraus.push(ground_passthrough());
    for (tau, w) in weights {
        let u = dot_propagator(0.0, f_e, tau);
        let k = d.mul(&u)?.scale(Complex64::new(w.sqrt(), 0.0));
        kraus.push(k);
    }
    QuantumChannel::new(
        dot_space(),
        dot_photon_space(),
        kraus,
        TracePreservation::NonIncreasing,
    )
}

/// Analytic capture probability `1 − e^{−window/t_rad}` of one emission.
pub fn capture_probability(p: &DeviceParams) -> f64 {
    1.0 - (-p.window / p.t_rad).exp()
}

/// Precession of both doublets for `duration` ns, averaged over the
/// quasi-static Overhauser grid.
///
/// Each node δ (GHz) shifts the ground Larmor frequency to `f_g + δ` and
/// the excited frequency to `f_e + δ·(t2_ground/t2_excited)`: one shared
/// bath variable, scaled so each doublet sees its own dephasing time. In
/// the fine-grid limit the ground coherence decays by exactly
/// `e^{−(duration/t2_ground)²}`.
pub fn ground_precession_map(
    p: &DeviceParams,
    duration: f64,
    grid: &OverhauserGrid,
) -> Result<QuantumChannel> {
    p.validate()?;
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::InvalidParameter {
            name: "duration",
            message: alloc::format!("duration must be ≥ 0 ns, got {duration}"),
        });
    }
    let f_g = larmor_frequency(p.g_ground, p.b_field)?;
    let f_e = larmor_frequency(p.g_excited, p.b_field)?;
    let scale = p.t2_ground / p.t2_excited;
    let kraus: Vec<ComplexMatrix> = grid
        .iter()
        .map(|(delta, w)| {
            dot_propagator(f_g + delta, f_e + delta * scale, duration)
                .scale(Complex64::new(w.sqrt(), 0.0))
        })
        .collect();
    QuantumChannel::new(
        dot_space(),
        dot_space(),
        kraus,
        TracePreservation::Preserving,
    )
}
