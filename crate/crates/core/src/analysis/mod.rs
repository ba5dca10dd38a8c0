//! Analysis toolkit: time-resolved polarization traces, damped-cosine
//! fits, g-factor extraction, coincidence-count reduction, and the
//! truth-table fidelity bounds.
//!
//! The flow mirrors a measurement campaign: [`simulate_dcp`] produces the
//! degree-of-circular-polarization trace an experiment would record,
//! [`fit_dcp`] extracts (P₀, T₂*, f_L) from it, [`fit_gfactor`] turns
//! frequency-vs-field points into a g-factor, and
//! [`CoincidenceCounts`] → [`fidelity_bounds`] reduces three-photon
//! correlation counts to the five fidelity figures of merit.

mod bounds;
mod counts;
mod fit;
mod gfactor;
mod series;

pub use bounds::{fidelity_bounds, fidelity_bounds_monte_carlo, Estimate, FidelityReport};
pub use counts::CoincidenceCounts;
pub use fit::{fit_dcp, fit_dcp_fixed_frequency, initial_guess, DcpFit};
pub use gfactor::{fit_gfactor, FrequencyPoint, GFactorFit};
pub use series::{dominant_frequency, power_at, simulate_dcp, TimeSeries};
