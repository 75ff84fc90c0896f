//! Centralized numerical tolerances.

use serde::{Deserialize, Serialize};

/// One knob set for every validation in the crate.
///
/// `herm`, `psd`, `tr` gate density-matrix validation, `eig` bounds the
/// accepted eigenpair residual, and `zero` is the relative threshold that
/// classifies a Lindbladian eigenvalue as peripheral (`|Re λ| < zero·‖L‖`).
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub tr: f64,
    pub eig: f64,
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { herm: 1e-10, psd: 1e-10, tr: 1e-10, eig: 1e-8, zero: 1e-9 }
    }
}
