//! Closed-form evaluation of the quantitative Zeno/decay bounds, as pure
//! scalar functions with validated hypothesis logs.
//!
//! Every evaluator returns a [`BoundReport`]: the value is always computed
//! (for diagnostics), and any failed hypothesis flips `hypotheses_ok` so the
//! caller knows the number is non-binding rather than being refused outright.

mod formulas;
mod telescope;

pub use formulas::{
    beta_lower, commutator_power_norm_bound, ctsfinal_bound, discretefinal_bound, epow,
    epsilongeneral_bound, epsultimate_bound, hsandwich_bound, log_eps, phi_k_bound,
    zfromdecay_bound, zvscmlsi_cap, DecayKind,
};
pub use telescope::telescoping_check;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One logged hypothesis: the condition as text plus its two sides.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hypothesis {
    pub condition: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Result of a bound evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub hypotheses_ok: bool,
    pub hypothesis_log: Vec<Hypothesis>,
    pub inputs_echo: BTreeMap<String, f64>,
}

impl BoundReport {
    pub(crate) fn new(value: f64) -> Self {
        BoundReport {
            value,
            hypotheses_ok: true,
            hypothesis_log: Vec::new(),
            inputs_echo: BTreeMap::new(),
        }
    }

    pub(crate) fn log_ge(&mut self, condition: &str, lhs: f64, rhs: f64) {
        let ok = lhs >= rhs;
        self.hypothesis_log.push(Hypothesis { condition: condition.into(), lhs, rhs, ok });
        self.hypotheses_ok &= ok;
    }

    pub(crate) fn fail(&mut self, condition: &str, lhs: f64, rhs: f64) {
        self.hypothesis_log.push(Hypothesis { condition: condition.into(), lhs, rhs, ok: false });
        self.hypotheses_ok = false;
    }

    pub(crate) fn echo(&mut self, name: &str, value: f64) {
        self.inputs_echo.insert(name.into(), value);
    }
}
