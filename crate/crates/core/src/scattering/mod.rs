//! Regularized model traces `Φ`, `Υ`, the relative scattering determinant in
//! its zeta-ratio and Hadamard forms, the Laplacian determinant, and the
//! smoothed wave trace of the cylinder.
//!
//! Undetermined exponential-polynomial factors are set to one. Comparisons
//! between forms go through third log-derivatives, which annihilate them.

mod horn;
mod models;
mod tau;
mod wave;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use horn::{phi_horn, phi_horn_quadrature, upsilon_horn};
pub use models::{
    funnel_per_image_residual, funnel_per_image_sum, phi_cylinder, phi_funnel, phi_ups_relation_residual,
    upsilon_cylinder, upsilon_funnel,
};
pub use tau::{
    det_laplacian_l2, det_laplacian_log, det_laplacian_log_derivative, tau_hadamard, tau_hadamard_log_derivative,
    tau_zratio, tau_zratio_log_derivative, SurfaceZeta,
};
pub use wave::{wave_trace, wave_trace_residual, GaussianTest, WaveTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelTraceReport {
    pub s: Complex64,
    pub value: Complex64,
    pub method: TraceMethod,
    pub error_estimate: f64,
}

impl ModelTraceReport {
    pub fn closed_form(s: Complex64, value: Complex64) -> Self {
        ModelTraceReport { s, value, method: TraceMethod::ClosedForm, error_estimate: 0.0 }
    }
}

/// An undetermined polynomial factor in the exponent, by degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialAmbiguity {
    pub degree_bound: u8,
    pub description: String,
}

impl PolynomialAmbiguity {
    pub fn new(degree_bound: u8, description: impl Into<String>) -> Result<Self> {
        if ![0, 1, 2, 4].contains(&degree_bound) {
            return Err(Error::DomainError(format!("degree bound {degree_bound} not in {{0, 1, 2, 4}}")));
        }
        Ok(PolynomialAmbiguity { degree_bound, description: description.into() })
    }

    /// Lowest log-derivative order that removes the ambiguity.
    pub fn annihilating_order(&self) -> u32 {
        self.degree_bound as u32 + 1
    }

    /// The zeta ratio form of `log τ`: a constant plus a linear term.
    pub fn tau_zratio() -> Self {
        PolynomialAmbiguity {
            degree_bound: 1,
            description: "constant c and the -n_C log 4 s term of the zeta ratio".into(),
        }
    }

    /// The Hadamard form of `log τ`, after the order-two refinement.
    pub fn tau_hadamard() -> Self {
        PolynomialAmbiguity { degree_bound: 2, description: "exponent h(s) of the Hadamard form".into() }
    }

    /// The Hadamard exponent before any growth refinement.
    pub fn tau_hadamard_coarse() -> Self {
        PolynomialAmbiguity { degree_bound: 4, description: "exponent h(s) before the order-two refinement".into() }
    }

    /// `Z_X = e^{q} Z_∞ P_X / Γ-factors`.
    pub fn zeta_factorization() -> Self {
        PolynomialAmbiguity { degree_bound: 2, description: "polynomial q(s) in the factorization of Z_X".into() }
    }

    /// `(s - 1/2)^{n_C/2} D_X = e^{q₁} P_X`, with the constants E and F.
    pub fn determinant() -> Self {
        PolynomialAmbiguity {
            degree_bound: 2,
            description: "polynomial q₁(s) and constants E, F of the determinant".into(),
        }
    }

    pub fn constant() -> Self {
        PolynomialAmbiguity { degree_bound: 0, description: "additive constant".into() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambiguity_degrees() {
        assert!(PolynomialAmbiguity::new(3, "x").is_err());
        for d in [0, 1, 2, 4] {
            assert_eq!(PolynomialAmbiguity::new(d, "x").unwrap().annihilating_order(), d as u32 + 1);
        }
        assert_eq!(PolynomialAmbiguity::tau_hadamard().annihilating_order(), 3);
        assert_eq!(PolynomialAmbiguity::tau_hadamard_coarse().degree_bound, 4);
    }
}
