//! Desk-scale model builders, parameter sweeps, deficit measurements, and
//! numeric verifiers for the decay inequalities.

mod sweep;
mod verify;

pub use sweep::{initial_deficit, sweep, Metric, SweepAxis, SweepResult, SweepRow};
pub use verify::{estimate_lambda_tau, verify_revclsi, LambdaTauEstimate, RevClsiPoint};

use crate::opalg::{pauli, HilbertSpace, OperatorMatrix, Superoperator};
use crate::semigroup::{
    dephasing_generator, hamiltonian_part, replacement_generator, replacement_projector,
    LindbladSpec,
};
use crate::{C64, Error, Result, Tolerances};

/// Nearest-neighbor XX+YY chain with replacement noise on the first qubit:
/// `H = 2π Σ_j (X_j X_{j+1} + Y_j Y_{j+1})`, `S = Id − (1/2 ⊗ tr_1)`, weight γ.
pub fn build_chain(n: usize, gamma: f64, tol: &Tolerances) -> Result<LindbladSpec> {
    if !(2..=5).contains(&n) {
        return Err(Error::Domain(format!("chain length {n} outside 2..=5")));
    }
    let space = HilbertSpace::qubits(n)?;
    let mut h = OperatorMatrix::zeros(&space);
    for j in 0..n - 1 {
        for p in [pauli::x(), pauli::y()] {
            let a = OperatorMatrix::embed_at(&space, j, &p)?;
            let b = OperatorMatrix::embed_at(&space, j + 1, &p)?;
            h = h.add(&a.mul(&b)?)?;
        }
    }
    let h = h.scale(C64::new(2.0 * std::f64::consts::PI, 0.0));
    let e0 = replacement_projector(&space, &[0])?;
    let s = replacement_generator(&e0, tol)?;
    LindbladSpec::new(space, h, vec![(s, gamma)], tol)
}

/// Two-qubit interaction `H = Z⊗X/2` with replacement noise on qubit A.
pub fn build_two_qubit(gamma: f64, tol: &Tolerances) -> Result<LindbladSpec> {
    let space = HilbertSpace::qubits(2)?;
    let h = crate::opalg::pauli_string("ZX")?.scale(C64::new(0.5, 0.0));
    let e0 = replacement_projector(&space, &[0])?;
    let s = replacement_generator(&e0, tol)?;
    LindbladSpec::new(space, h, vec![(s, gamma)], tol)
}

/// Single-qubit dephasing + basis drift: `L(ρ) = i[X,ρ] + γ(ρ − ZρZ)`.
pub fn build_basis_drift(gamma: f64, tol: &Tolerances) -> Result<LindbladSpec> {
    let space = HilbertSpace::qubits(1)?;
    let h = OperatorMatrix::new(space.clone(), pauli::x())?;
    let s = dephasing_generator(&OperatorMatrix::new(space.clone(), pauli::z())?, tol)?;
    LindbladSpec::new(space, h, vec![(s, gamma)], tol)
}

/// Interrupted two-qubit rotation `Φ_(k) = (E₀ ∘ Φ_{ZX(π/2k)})^k ∘ E₀`.
pub fn build_phi_k(k: usize) -> Result<Superoperator> {
    if k < 1 {
        return Err(Error::Domain("k >= 1 required".into()));
    }
    let space = HilbertSpace::qubits(2)?;
    let e0 = replacement_projector(&space, &[0])?;
    let h = crate::opalg::pauli_string("ZX")?.scale(C64::new(0.5, 0.0));
    let hsup = hamiltonian_part(&h)?;
    let theta = std::f64::consts::FRAC_PI_2 / k as f64;
    let rot = crate::opalg::matrix_exp(&hsup.matrix().mapv(|z| z * C64::new(-theta, 0.0)))?;
    let step = e0.compose(&Superoperator::endo(&space, rot)?)?;
    let mut acc = e0.clone();
    for _ in 0..k {
        acc = step.compose(&acc)?;
    }
    Ok(acc)
}

/// The replacement projector used by the two-qubit family, `E₀ = (1/2)⊗tr_A`.
pub fn two_qubit_e0() -> Result<Superoperator> {
    replacement_projector(&HilbertSpace::qubits(2)?, &[0])
}
