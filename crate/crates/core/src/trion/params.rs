//! Device parameters for the positively charged trion (X⁺) system.

use num_complex::Complex64;
#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use super::constants::MU_B_OVER_H_GHZ_PER_T;
use crate::error::{Error, Result};

/// Default post-selection window in ns.
pub const DEFAULT_WINDOW_NS: f64 = 0.3;

/// Default pulse spacing in ns; the default field is derived from it so that
/// it is exactly a quarter of the hole precession period.
pub const DEFAULT_T12_NS: f64 = 2.08;

/// All physical knobs of one device/measurement configuration.
///
/// Times are in ns, fields in tesla, frequencies in GHz. The pulse
/// polarization is a Jones vector in the circular (R, L) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceParams {
    /// Landé g-factor of the resident (ground) spin.
    pub g_ground: f64,
    /// g-factor of the unpaired excited-state spin.
    pub g_excited: f64,
    /// Gaussian inhomogeneous dephasing time T₂* of the ground spin, ns.
    pub t2_ground: f64,
    /// Dephasing time of the excited doublet, ns.
    pub t2_excited: f64,
    /// Radiative lifetime, ns.
    pub t_rad: f64,
    /// In-plane (Voigt) magnetic field, tesla.
    pub b_field: f64,
    /// Post-selection window for photon capture, ns.
    pub window: f64,
    /// Excitation-pulse Jones vector, components on (R, L), unit norm.
    pub pulse_polarization: [Complex64; 2],
    /// Initial degree of circular polarization (DCP amplitude), in (0, 1].
    pub p0: f64,
}

/// The Jones vector of an H-polarized pulse: H = (R + L)/√2.
pub fn jones_h() -> [Complex64; 2] {
    let a = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    [a, a]
}

/// The Jones vector of an R-polarized pulse.
pub fn jones_r() -> [Complex64; 2] {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
}

/// H rotated by `theta` radians about the optical axis.
///
/// A physical rotation of the polarization plane is diagonal in the circular
/// basis: R picks up `e^{+iθ}` and L picks up `e^{−iθ}`, so a rotated linear
/// pulse differs from H only by the relative phase `2θ` between its two
/// selection-rule amplitudes.
pub fn jones_h_rotated(theta: f64) -> [Complex64; 2] {
    let a = Complex64::from_polar(core::f64::consts::FRAC_1_SQRT_2, theta);
    let b = Complex64::from_polar(core::f64::consts::FRAC_1_SQRT_2, -theta);
    [a, b]
}

impl DeviceParams {
    /// The measured device: hole g-factor 0.229, electron 0.096, ground
    /// T₂* 4.8 ns, excited 0.8 ns, radiative lifetime 0.8 ns, 300 ps
    /// post-selection window, H-polarized pulses, and the field that makes
    /// the default 2.08 ns pulse spacing exactly a quarter hole period
    /// (≈ 37.5 mT).
    pub fn baseline() -> Self {
        DeviceParams {
            g_ground: 0.229,
            g_excited: 0.096,
            t2_ground: 4.8,
            t2_excited: 0.8,
            t_rad: 0.8,
            b_field: derived_b_field(0.229, DEFAULT_T12_NS),
            window: DEFAULT_WINDOW_NS,
            pulse_polarization: jones_h(),
            p0: 1.0,
        }
    }

    /// The projected improved device: Purcell-shortened lifetime (200 ps)
    /// and extended ground coherence (10 ns); all else as baseline.
    pub fn improved() -> Self {
        DeviceParams {
            t_rad: 0.2,
            t2_ground: 10.0,
            ..DeviceParams::baseline()
        }
    }

    /// Checks every invariant; other operations assume a validated value.
    pub fn validate(&self) -> Result<()> {
        let positive_times = [
            ("t2_ground", self.t2_ground),
            ("t2_excited", self.t2_excited),
            ("t_rad", self.t_rad),
            ("window", self.window),
        ];
        for (name, value) in positive_times {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    message: alloc::format!("must be a positive time in ns, got {value}"),
                });
            }
        }
        if !(self.b_field >= 0.0) || !self.b_field.is_finite() {
            return Err(Error::InvalidParameter {
                name: "b_field",
                message: alloc::format!("must be ≥ 0 tesla, got {}", self.b_field),
            });
        }
        let norm = (self.pulse_polarization[0].norm_sqr()
            + self.pulse_polarization[1].norm_sqr())
        .sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter {
                name: "pulse_polarization",
                message: alloc::format!("Jones vector must have unit norm, got {norm}"),
            });
        }
        if !(self.p0 > 0.0 && self.p0 <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "p0",
                message: alloc::format!("must lie in (0, 1], got {}", self.p0),
            });
        }
        if !self.g_ground.is_finite() || !self.g_excited.is_finite() {
            return Err(Error::InvalidParameter {
                name: "g_factor",
                message: alloc::string::String::from("g-factors must be finite"),
            });
        }
        Ok(())
    }

    /// The ground-spin quarter precession period `1/(4·f_L)` in ns; errors
    /// when the field (hence the frequency) is zero.
    pub fn quarter_period(&self) -> Result<f64> {
        let f = super::larmor_frequency(self.g_ground, self.b_field)?;
        if f <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "b_field",
                message: alloc::string::String::from(
                    "quarter period undefined at zero Larmor frequency",
                ),
            });
        }
        Ok(1.0 / (4.0 * f))
    }
}

/// The field (tesla) that makes `quarter_ns` exactly a quarter of the
/// precession period for a spin with g-factor `g`: `b = h/(4·g·μ_B·t)`.
pub fn derived_b_field(g: f64, quarter_ns: f64) -> f64 {
    1.0 / (4.0 * g * MU_B_OVER_H_GHZ_PER_T * quarter_ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trion::larmor_frequency;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn baseline_validates_and_matches_quarter_period() {
        let p = DeviceParams::baseline();
        p.validate().unwrap();
        // The derived field puts the hole period at exactly 4·2.08 ns.
        let f = larmor_frequency(p.g_ground, p.b_field).unwrap();
        assert_relative_eq!(1.0 / f, 4.0 * DEFAULT_T12_NS, max_relative = 1e-12);
        assert_relative_eq!(p.quarter_period().unwrap(), DEFAULT_T12_NS, max_relative = 1e-12);
        // ≈ 37.5 mT as quoted for the tuned field.
        assert_abs_diff_eq!(p.b_field, 0.0375, epsilon = 1e-4);
    }

    #[test]
    fn improved_changes_only_lifetime_and_coherence() {
        let b = DeviceParams::baseline();
        let i = DeviceParams::improved();
        i.validate().unwrap();
        assert_eq!(i.t_rad, 0.2);
        assert_eq!(i.t2_ground, 10.0);
        assert_eq!(i.t2_excited, b.t2_excited);
        assert_eq!(i.b_field, b.b_field);
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut p = DeviceParams::baseline();
        p.t_rad = 0.0;
        assert!(p.validate().is_err());

        let mut p = DeviceParams::baseline();
        p.b_field = -0.1;
        assert!(p.validate().is_err());

        let mut p = DeviceParams::baseline();
        p.pulse_polarization = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(p.validate().is_err());

        let mut p = DeviceParams::baseline();
        p.p0 = 0.0;
        assert!(p.validate().is_err());
        p.p0 = 1.5;
        assert!(p.validate().is_err());
    }

    #[test]
    fn rotated_jones_vector_is_unit_norm_with_relative_phase() {
        let theta = 0.3;
        let [r, l] = jones_h_rotated(theta);
        assert_abs_diff_eq!(r.norm_sqr() + l.norm_sqr(), 1.0, epsilon = 1e-12);
        let rel = (r / l).arg();
        assert_abs_diff_eq!(rel, 2.0 * theta, epsilon = 1e-12);
    }
}
