//! The four-level X⁺ basis and the photon polarization kets.
//!
//! Level order is fixed: ground hole up ⇑, ground hole down ⇓, trion with
//! electron up T↑ (= |⇑⇓↑⟩), trion with electron down T↓. The optical
//! selection rules connect ⇑ ↔ T↑ via R-polarized light and ⇓ ↔ T↓ via L.
//!
//! Photon phase conventions (fixed here once, used everywhere):
//! the photon qubit basis is circular, index 0 = R and index 1 = L, with the
//! linear basis defined by H = (R + L)/√2 and V = i(R − L)/√2 and the
//! diagonal basis by D = (H + V)/√2, A = (H − V)/√2. Together with the
//! quarter-period spin rotation convention in
//! [`build_hamiltonians`](super::build_hamiltonians), these signs reproduce
//! the protocol's two- and three-qubit states literally, phases included.

use num_complex::Complex64;

use crate::qmath::ComplexMatrix;

/// Dimension of the dot's modeled level space.
pub const LEVEL_DIM: usize = 4;

/// One of the four modeled levels, in fixed basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Ground hole spin up, |⇑⟩.
    HoleUp,
    /// Ground hole spin down, |⇓⟩.
    HoleDown,
    /// Trion with unpaired electron up, |⇑⇓↑⟩, written T↑.
    TrionUp,
    /// Trion with unpaired electron down, written T↓.
    TrionDown,
}

impl Level {
    /// All levels in basis order.
    pub const ALL: [Level; LEVEL_DIM] = [
        Level::HoleUp,
        Level::HoleDown,
        Level::TrionUp,
        Level::TrionDown,
    ];

    /// Position in the fixed basis order.
    pub const fn index(self) -> usize {
        match self {
            Level::HoleUp => 0,
            Level::HoleDown => 1,
            Level::TrionUp => 2,
            Level::TrionDown => 3,
        }
    }

    /// Human-readable label.
    pub const fn label(self) -> &'static str {
        match self {
            Level::HoleUp => "⇑",
            Level::HoleDown => "⇓",
            Level::TrionUp => "T↑",
            Level::TrionDown => "T↓",
        }
    }

    /// True for the two ground (hole) levels.
    pub const fn is_ground(self) -> bool {
        matches!(self, Level::HoleUp | Level::HoleDown)
    }
}

fn ket2(a: Complex64, b: Complex64) -> ComplexMatrix {
    ComplexMatrix::column(&[a, b])
}

/// |R⟩ as a photon-qubit column.
pub fn photon_r() -> ComplexMatrix {
    ket2(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
}

/// |L⟩ as a photon-qubit column.
pub fn photon_l() -> ComplexMatrix {
    ket2(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
}

/// |H⟩ = (|R⟩ + |L⟩)/√2.
pub fn photon_h() -> ComplexMatrix {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    ket2(Complex64::new(s, 0.0), Complex64::new(s, 0.0))
}

/// |V⟩ = i(|R⟩ − |L⟩)/√2.
pub fn photon_v() -> ComplexMatrix {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    ket2(Complex64::new(0.0, s), Complex64::new(0.0, -s))
}

/// |D⟩ = (|H⟩ + |V⟩)/√2.
pub fn photon_d() -> ComplexMatrix {
    ket2(Complex64::new(0.5, 0.5), Complex64::new(0.5, -0.5))
}

/// |A⟩ = (|H⟩ − |V⟩)/√2.
pub fn photon_a() -> ComplexMatrix {
    ket2(Complex64::new(0.5, -0.5), Complex64::new(0.5, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
        a.get(0, 0).conj() * b.get(0, 0) + a.get(1, 0).conj() * b.get(1, 0)
    }

    #[test]
    fn level_indices_are_fixed() {
        for (i, level) in Level::ALL.iter().enumerate() {
            assert_eq!(level.index(), i);
        }
        assert!(Level::HoleUp.is_ground());
        assert!(!Level::TrionDown.is_ground());
    }

    #[test]
    fn photon_bases_are_orthonormal() {
        let pairs = [
            (photon_r(), photon_l()),
            (photon_h(), photon_v()),
            (photon_d(), photon_a()),
        ];
        for (a, b) in &pairs {
            assert_abs_diff_eq!(overlap(a, a).re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(overlap(b, b).re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(overlap(a, b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn linear_basis_phase_convention() {
        // H − iV = √2·R and H + iV = √2·L under V = i(R−L)/√2.
        let h = photon_h();
        let v = photon_v();
        let i = Complex64::new(0.0, 1.0);
        let s = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let r = h.sub(&v.scale(i)).unwrap().scale(s);
        assert!(r.max_abs_diff(&photon_r()).unwrap() < 1e-12);
        let l = h.add(&v.scale(i)).unwrap().scale(s);
        assert!(l.max_abs_diff(&photon_l()).unwrap() < 1e-12);
    }
}
