//! JSON model files describing a [`LindbladSpec`].
//!
//! Schema:
//! ```json
//! {
//!   "factors": [2, 2],
//!   "hamiltonian_terms": [{"pauli_string": "ZX", "coefficient": 0.5}],
//!   "stochastic": [
//!     {"kind": "replace", "target": [0], "weight": 1.0},
//!     {"kind": "dephase", "target": "ZI", "weight": 0.5},
//!     {"kind": "gksl", "target": [[["XI", [0.5, 0.0]], ["YI", [0.0, 0.5]]]], "weight": 1.0}
//!   ]
//! }
//! ```
//! Pauli strings use one of `I,X,Y,Z` per factor. A `replace` target lists
//! factor indices, a `dephase` target is the conjugating Pauli string (which
//! must square to the identity), and each `gksl` jump operator is a list of
//! `[pauli_string, [re, im]]` weighted terms.

use super::generators::{dephasing_generator, gksl_dissipator, replacement_generator, replacement_projector};
use super::LindbladSpec;
use crate::opalg::{pauli_string, HilbertSpace, OperatorMatrix, Superoperator};
use crate::{C64, Error, Result, Tolerances};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct HamiltonianTerm {
    pub pauli_string: String,
    pub coefficient: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StochasticTerm {
    pub kind: String,
    pub target: serde_json::Value,
    pub weight: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ModelFile {
    pub factors: Vec<usize>,
    pub hamiltonian_terms: Vec<HamiltonianTerm>,
    pub stochastic: Vec<StochasticTerm>,
}

impl ModelFile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model JSON never fails")
    }

    pub fn build(&self, tol: &Tolerances) -> Result<LindbladSpec> {
        let space = HilbertSpace::new(self.factors.clone())?;
        if self.factors.iter().any(|&d| d != 2) {
            return Err(Error::Model("Pauli-string models require qubit factors".into()));
        }
        let n = self.factors.len();
        let mut h = OperatorMatrix::zeros(&space);
        for term in &self.hamiltonian_terms {
            if term.pauli_string.chars().count() != n {
                return Err(Error::Model(format!(
                    "Pauli string '{}' length does not match {n} factors",
                    term.pauli_string
                )));
            }
            let op = pauli_string(&term.pauli_string)?;
            h = h.add(&op.scale(C64::new(term.coefficient, 0.0)))?;
        }
        let mut stoch = Vec::new();
        for term in &self.stochastic {
            let s: Superoperator = match term.kind.as_str() {
                "replace" => {
                    let targets: Vec<usize> = serde_json::from_value(term.target.clone())
                        .map_err(|e| Error::Model(format!("replace target: {e}")))?;
                    let e = replacement_projector(&space, &targets)?;
                    replacement_generator(&e, tol)?
                }
                "dephase" => {
                    let ps: String = serde_json::from_value(term.target.clone())
                        .map_err(|e| Error::Model(format!("dephase target: {e}")))?;
                    if ps.chars().count() != n {
                        return Err(Error::Model(format!(
                            "dephase Pauli string '{ps}' length does not match {n} factors"
                        )));
                    }
                    dephasing_generator(&pauli_string(&ps)?, tol)?
                }
                "gksl" => {
                    type JumpSpec = Vec<Vec<(String, [f64; 2])>>;
                    let jumps_spec: JumpSpec = serde_json::from_value(term.target.clone())
                        .map_err(|e| Error::Model(format!("gksl target: {e}")))?;
                    let mut jumps = Vec::new();
                    for jump in jumps_spec {
                        let mut op = OperatorMatrix::zeros(&space);
                        for (ps, [re, im]) in jump {
                            if ps.chars().count() != n {
                                return Err(Error::Model(format!(
                                    "gksl Pauli string '{ps}' length does not match {n} factors"
                                )));
                            }
                            op = op.add(&pauli_string(&ps)?.scale(C64::new(re, im)))?;
                        }
                        jumps.push(op);
                    }
                    gksl_dissipator(&jumps)?
                }
                other => return Err(Error::Model(format!("unknown stochastic kind '{other}'"))),
            };
            stoch.push((s, term.weight));
        }
        LindbladSpec::new(space, h, stoch, tol)
    }
}
