//! Pulse timing for the generation sequence.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::trion::DeviceParams;

/// The timestamps (ns) of the excitation pulses.
///
/// A sequence with `n` pulses produces `n − 1` stored photons: the first
/// pulse initializes the spin (its photon is projected onto R and
/// discarded), and each later pulse adds one photon to the register. Pulse
/// gaps are the free-precession intervals; in the standard protocol every
/// gap is a quarter of the hole's Larmor period.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    times: Vec<f64>,
}

impl PulseSchedule {
    /// Builds a schedule from absolute pulse times, which must be finite
    /// and strictly increasing.
    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidParameter {
                name: "times",
                message: alloc::string::String::from("a schedule needs at least one pulse"),
            });
        }
        for pair in times.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::InvalidParameter {
                    name: "times",
                    message: alloc::format!(
                        "pulse times must be strictly increasing, got {} then {}",
                        pair[0],
                        pair[1]
                    ),
                });
            }
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "times",
                message: alloc::string::String::from("pulse times must be finite"),
            });
        }
        Ok(PulseSchedule { times })
    }

    /// Builds a schedule from the gap lengths, with the first pulse at 0.
    pub fn from_gaps(gaps: &[f64]) -> Result<Self> {
        let mut times = Vec::with_capacity(gaps.len() + 1);
        let mut t = 0.0;
        times.push(t);
        for &g in gaps {
            t += g;
            times.push(t);
        }
        // The strict-increase check in from_times rejects non-positive
        // gaps (and NaN) uniformly.
        PulseSchedule::from_times(times)
    }

    /// `pulses` equally spaced pulses separated by `gap` ns.
    pub fn uniform(pulses: usize, gap: f64) -> Result<Self> {
        if pulses == 0 {
            return Err(Error::InvalidParameter {
                name: "pulses",
                message: alloc::string::String::from("a schedule needs at least one pulse"),
            });
        }
        PulseSchedule::from_times((0..pulses).map(|i| i as f64 * gap).collect())
    }

    /// `pulses` pulses spaced by the quarter Larmor period of `p`'s hole.
    pub fn quarter_period(p: &DeviceParams, pulses: usize) -> Result<Self> {
        PulseSchedule::uniform(pulses, p.quarter_period()?)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// The gaps between consecutive pulses, in order.
    pub fn gaps(&self) -> Vec<f64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn pulses(&self) -> usize {
        self.times.len()
    }

    /// Stored photons this schedule produces: one fewer than the pulses.
    pub fn photons(&self) -> usize {
        self.times.len() - 1
    }
}
