//! The X⁺ trion four-level system: parameters, level structure, and the
//! quantum channels making up one emission cycle.
//!
//! A positively charged quantum dot holds a resident heavy hole whose
//! pseudo-spin (|⇑⟩, |⇓⟩) is the stationary qubit. Resonant excitation
//! promotes it to a positive trion (two holes in a singlet plus one
//! electron), whose states |T↑⟩, |T↓⟩ are labeled by the electron spin.
//! Optical selection rules connect ⇑ ↔ T↑ via σ⁺ (R) photons and
//! ⇓ ↔ T↓ via σ⁻ (L) photons only, so radiative decay writes the spin
//! state onto the emitted photon's circular polarization.
//!
//! An in-plane magnetic field precesses both doublets at their Larmor
//! frequencies, and the slowly fluctuating nuclear Overhauser field adds a
//! quasi-static random detuning that dephases freely precessing spins with
//! a Gaussian envelope. The module exposes each physical step as a
//! [`QuantumChannel`](crate::qmath::QuantumChannel) on the labeled
//! four-level factor `"dot"` so the protocol layer can compose them.

mod constants;
mod grid;
mod levels;
mod maps;
mod params;

pub use constants::{PhysicalConstants, MU_B, MU_B_OVER_H_GHZ_PER_T, PLANCK_H};
pub use grid::{sample_overhauser, OverhauserGrid};
pub use levels::{
    photon_a, photon_d, photon_h, photon_l, photon_r, photon_v, Level, LEVEL_DIM,
};
pub use maps::{
    build_hamiltonians, capture_probability, emission_map, emission_map_with_steps,
    excitation_map, ground_precession_map, larmor_frequency, DOT_LABEL, EMISSION_STEPS,
    PHOTON_LABEL,
};
pub use params::{
    derived_b_field, jones_h, jones_h_rotated, jones_r, DeviceParams, DEFAULT_T12_NS,
    DEFAULT_WINDOW_NS,
};

pub(crate) use maps::{
    decay_isometry, dot_propagator, doublet_propagator, emission_weights, excitation_unitary,
};
