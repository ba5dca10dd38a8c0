//! Physical constants (CODATA 2018), pinned in one place so every numeric
//! result is reproducible bit-for-bit.

/// Fundamental constants used by the device model.
///
/// Only the ratio `μ_B/h` enters the dynamics (through the Larmor frequency
/// `f_L = g·μ_B·B/h`), but the raw SI values are kept so unit conversions
/// stay auditable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Bohr magneton in J/T.
    pub mu_b: f64,
    /// Planck constant in J·s.
    pub h: f64,
    /// Reduced Planck constant in J·s; exactly `h / 2π` in double precision.
    pub hbar: f64,
}

/// Bohr magneton, CODATA 2018, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;

/// Planck constant, exact SI definition, J·s.
pub const PLANCK_H: f64 = 6.626_070_15e-34;

/// `μ_B/h` in GHz/T: multiplying by a g-factor and a field in tesla gives a
/// Larmor frequency directly in GHz.
pub const MU_B_OVER_H_GHZ_PER_T: f64 = MU_B / PLANCK_H * 1e-9;

impl PhysicalConstants {
    /// The CODATA-2018 values used throughout.
    pub const fn codata2018() -> Self {
        PhysicalConstants {
            mu_b: MU_B,
            h: PLANCK_H,
            hbar: PLANCK_H / (2.0 * core::f64::consts::PI),
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants::codata2018()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hbar_is_h_over_two_pi() {
        let c = PhysicalConstants::codata2018();
        assert_eq!(c.hbar, c.h / (2.0 * core::f64::consts::PI));
    }

    #[test]
    fn ghz_per_tesla_ratio() {
        // μ_B/h = 13.996 244 9361 GHz/T to the printed CODATA precision.
        assert_relative_eq!(MU_B_OVER_H_GHZ_PER_T, 13.996_244_936_1, max_relative = 1e-10);
    }
}
