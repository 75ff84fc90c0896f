//! Zeno generators, rotated projectors and projection chains.

use crate::opalg::{matrix_exp, OperatorMatrix, Superoperator};
use crate::{C64, Error, Result};

/// Zeno generator `E₀ ∘ L ∘ E₀`.
pub fn zeno_generator(e0: &Superoperator, l: &Superoperator) -> Result<Superoperator> {
    let dev = e0.idempotency_deviation();
    if dev > 1e-8 * e0.frobenius().max(1.0) {
        return Err(Error::NotProjector(format!("idempotency deviation {dev:.3e}")));
    }
    e0.compose(l)?.compose(e0)
}

/// Zeno dynamics channel `exp(−t·E₀LE₀) ∘ E₀`.
pub fn zeno_limit_channel(e0: &Superoperator, l: &Superoperator, t: f64) -> Result<Superoperator> {
    let gen = zeno_generator(e0, l)?;
    let phi = matrix_exp(&gen.matrix().mapv(|z| z * C64::new(-t, 0.0)))?;
    Superoperator::endo(e0.in_space(), phi)?.compose(e0)
}

/// Conjugated projector `E_t = R_{exp(−iHt)} ∘ E₀ ∘ R_{exp(iHt)}`.
pub fn rotated_projector(e0: &Superoperator, h: &OperatorMatrix, t: f64) -> Result<Superoperator> {
    let dev = e0.idempotency_deviation();
    if dev > 1e-8 * e0.frobenius().max(1.0) {
        return Err(Error::NotProjector(format!("idempotency deviation {dev:.3e}")));
    }
    let u = matrix_exp(&h.matrix().mapv(|z| z * C64::new(0.0, -t)))?;
    let u_op = OperatorMatrix::new(h.space().clone(), u)?;
    let rot = Superoperator::conjugation(&u_op)?;
    let rot_back = Superoperator::conjugation(&u_op.adjoint())?;
    rot.compose(e0)?.compose(&rot_back)
}

/// Composed chain `E_t E_{t−t/k} … E_{t/k} E₀` (k+1 projector factors).
pub fn projection_chain(
    e0: &Superoperator,
    h: &OperatorMatrix,
    t: f64,
    k: usize,
) -> Result<Superoperator> {
    if k < 1 {
        return Err(Error::Domain("projection chain needs k >= 1".into()));
    }
    let mut acc = e0.clone();
    for j in 1..=k {
        let s = t * j as f64 / k as f64;
        acc = rotated_projector(e0, h, s)?.compose(&acc)?;
    }
    Ok(acc)
}

/// The k→∞ limit channel of the projection chain,
/// `R_{exp(i(E₀(H)−H)t)} ∘ E₀`.
pub fn projection_chain_limit(
    e0: &Superoperator,
    h: &OperatorMatrix,
    t: f64,
) -> Result<Superoperator> {
    let e0h = e0.apply(h)?;
    let gen = e0h.matrix() - h.matrix();
    let u = matrix_exp(&gen.mapv(|z| z * C64::new(0.0, t)))?;
    let u_op = OperatorMatrix::new(h.space().clone(), u)?;
    Superoperator::conjugation(&u_op)?.compose(e0)
}
