//! Simulation and analysis of sequential spin–photon cluster-state
//! generation from a quantum-dot trion.
//!
//! The crate models a charged quantum dot driven by a periodic pulse train:
//! each cycle resonantly excites a trion, collects the emitted photon whose
//! polarization is entangled with the dot spin, and lets the spin precess a
//! quarter of a Larmor period before the next pulse. Repeating the cycle
//! knits the emitted photons into a linear cluster state.
//!
//! Layout:
//! - [`qmath`]: dense complex linear algebra, labeled tensor spaces, density
//!   matrices, Kraus channels, Pauli transfer matrices.
//! - [`trion`]: device parameters and the physical maps of one emission
//!   cycle (excitation, radiative decay, Larmor precession, nuclear-spin
//!   dephasing).
//! - [`protocol`]: the cycle loop — multi-photon state generation, truth
//!   tables, transfer-matrix views, and cluster-state fidelity curves.
//! - [`analysis`]: fitting and error propagation for the observables an
//!   experiment actually records (dephasing curves, g-factors, coincidence
//!   tables, fidelity bounds).
//!
//! The crate is `no_std` (with `alloc`) so the simulation core can run in
//! embedded or WASM contexts; file formats, parallel sweeps, and the
//! command-line interface live in the companion binary crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod protocol;
pub mod qmath;
pub mod trion;

pub use error::{Error, Result};
