//! The photon-generation sequence: repeated excite–emit–precess cycles
//! that knit emitted photons into a linear cluster state.
//!
//! Each cycle applies a saturated H-polarized pulse, collects the photon
//! whose circular polarization is entangled with the spin through the
//! selection rules, and lets the spin precess a quarter Larmor period —
//! the Hadamard-like rotation between emissions. The first pulse only
//! initializes: detecting its photon in R heralds the spin in |⇑⟩. The
//! [`Engine`] composes the per-cycle channels from the
//! [`trion`](crate::trion) module into joint register states, conditional
//! truth tables, per-cycle Pauli transfer matrices, and fidelity curves
//! under a documented systematic-error model.

mod engine;
mod schedule;
mod types;

pub use engine::{
    apply_error_model, params_hash, Engine, CYCLE_PHOTON_LABEL, MAX_PHOTONS, SPIN_LABEL,
};
pub use schedule::PulseSchedule;
pub use types::{
    EmissionMode, EngineSettings, FidelityCurve, FidelityEntry, MeasurementBasis, TruthTable,
    TruthTableMode,
};
