//! g-factor extraction from Larmor frequency vs. magnetic field data.
//!
//! The Larmor frequency is linear in field, `f_L = g·μ_B·B/h`, with no
//! intercept, so the estimator is a one-parameter least-squares slope
//! (inverse-variance weighted when the points carry uncertainties).

use alloc::vec::Vec;
#[allow(unused_imports)] // float math from libm; under test std shadows it
use num_traits::Float;

use crate::error::{Error, Result};
use crate::trion::MU_B_OVER_H_GHZ_PER_T;

/// One measured oscillation frequency at a given magnetic field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    /// Applied in-plane magnetic field, tesla.
    pub b_field: f64,
    /// Fitted Larmor frequency, GHz.
    pub frequency: f64,
    /// Optional 1σ uncertainty of the frequency, GHz.
    pub uncertainty: Option<f64>,
}

/// Result of the zero-intercept linear fit `f_L = (g·μ_B/h)·B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GFactorFit {
    /// Landé g-factor (dimensionless, sign-insensitive magnitude).
    pub g: f64,
    /// 1σ standard error of `g`.
    pub g_err: f64,
}

/// Fits the g-factor from frequency-vs-field points.
///
/// With uncertainties on every point the fit is inverse-variance weighted
/// and the error comes from the weight sum; without any uncertainties the
/// error is scaled from the residual scatter (zero for a single point or an
/// exact line). Mixing points with and without uncertainties is rejected.
pub fn fit_gfactor(points: &[FrequencyPoint]) -> Result<GFactorFit> {
    if points.is_empty() {
        return Err(Error::BadData(alloc::string::String::from(
            "need at least one frequency point to fit a g-factor",
        )));
    }
    let mut any_sigma = false;
    let mut all_sigma = true;
    for (i, pt) in points.iter().enumerate() {
        if !pt.b_field.is_finite() || pt.b_field < 0.0 {
            return Err(Error::BadData(alloc::format!(
                "point {i}: field must be finite and ≥ 0 T, got {}",
                pt.b_field
            )));
        }
        if !pt.frequency.is_finite() {
            return Err(Error::BadData(alloc::format!(
                "point {i}: frequency must be finite, got {}",
                pt.frequency
            )));
        }
        match pt.uncertainty {
            Some(s) if !(s > 0.0) || !s.is_finite() => {
                return Err(Error::BadData(alloc::format!(
                    "point {i}: uncertainty must be positive and finite, got {s}"
                )));
            }
            Some(_) => any_sigma = true,
            None => all_sigma = false,
        }
    }
    if any_sigma && !all_sigma {
        return Err(Error::BadData(alloc::string::String::from(
            "uncertainties must be given for all points or none",
        )));
    }
    if points.iter().all(|pt| pt.b_field == 0.0) {
        return Err(Error::BadData(alloc::string::String::from(
            "all fields are zero; the slope is unconstrained",
        )));
    }

    let weights: Vec<f64> = points
        .iter()
        .map(|pt| match pt.uncertainty {
            Some(s) => 1.0 / (s * s),
            None => 1.0,
        })
        .collect();
    let swbf: f64 = points
        .iter()
        .zip(&weights)
        .map(|(pt, &w)| w * pt.b_field * pt.frequency)
        .sum();
    let swbb: f64 = points
        .iter()
        .zip(&weights)
        .map(|(pt, &w)| w * pt.b_field * pt.b_field)
        .sum();
    let slope = swbf / swbb;

    let slope_var = if all_sigma {
        1.0 / swbb
    } else {
        // Scale from the residual scatter (unbiased by the one fitted
        // parameter); a single point or an exact line has zero variance.
        let rss: f64 = points
            .iter()
            .map(|pt| {
                let r = pt.frequency - slope * pt.b_field;
                r * r
            })
            .sum();
        if points.len() > 1 {
            (rss / (points.len() - 1) as f64) / swbb
        } else {
            0.0
        }
    };

    Ok(GFactorFit {
        g: slope / MU_B_OVER_H_GHZ_PER_T,
        g_err: slope_var.sqrt() / MU_B_OVER_H_GHZ_PER_T,
    })
}
