//! cp-order constants and Pimsner–Popa indices via Choi matrices.

use super::choi::choi;
use crate::opalg::{eigh_hermitian, Superoperator};
use crate::{C64, CMat, Error, Result};

/// Smallest `c ≥ 0` with `c·Ψ ≥_cp Φ`, or `+∞` when no finite `c` works.
///
/// Computed as the largest generalized eigenvalue of `choi(Φ)` against
/// `choi(Ψ)` on the support of the latter; `+∞` iff `supp(choi(Φ))` is not
/// contained in `supp(choi(Ψ))`.
pub fn cp_order_constant(phi: &Superoperator, psi: &Superoperator) -> Result<f64> {
    if phi.in_dim() != psi.in_dim() || phi.out_dim() != psi.out_dim() {
        return Err(Error::ShapeMismatch("cp order on different spaces".into()));
    }
    let jp = choi(phi)?;
    let jq = choi(psi)?;
    let (wq, vq) = eigh_hermitian(jq.matrix())?;
    let scale = wq.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
    let tol = 1e-10 * scale;

    let n = jp.matrix().nrows();
    let support: Vec<usize> = (0..n).filter(|&k| wq[k] > tol).collect();
    let null: Vec<usize> = (0..n).filter(|&k| wq[k] <= tol).collect();

    // support containment: compress choi(phi) onto the null space of choi(psi)
    let mut leak = 0.0f64;
    for &k in &null {
        let col = vq.column(k);
        let mut amp = C64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..n {
                row += jp.matrix()[(i, j)] * col[j];
            }
            amp += col[i].conj() * row;
        }
        leak = leak.max(amp.norm());
    }
    if leak > 1e-9 * jp.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300) {
        return Ok(f64::INFINITY);
    }

    // B^{-1/2} P J_phi P B^{-1/2} in the support basis
    let k = support.len();
    if k == 0 {
        return Ok(0.0);
    }
    let mut compressed = CMat::zeros((k, k));
    for (a, &ka) in support.iter().enumerate() {
        for (b, &kb) in support.iter().enumerate() {
            let ca = vq.column(ka);
            let cb = vq.column(kb);
            let mut amp = C64::new(0.0, 0.0);
            for i in 0..n {
                let mut row = C64::new(0.0, 0.0);
                for j in 0..n {
                    row += jp.matrix()[(i, j)] * cb[j];
                }
                amp += ca[i].conj() * row;
            }
            let w = (wq[ka] * wq[kb]).sqrt();
            compressed[(a, b)] = amp / w;
        }
    }
    let (wc, _) = eigh_hermitian(&compressed)?;
    Ok(wc.iter().cloned().fold(0.0f64, f64::max).max(0.0))
}

/// Complete Pimsner–Popa index `C_cb(E) = cp_order_constant(Id, E)` of an
/// idempotent CPTP projector.
pub fn pimsner_popa_cb(e: &Superoperator, tol: f64) -> Result<f64> {
    if e.in_dim() != e.out_dim() {
        return Err(Error::NotProjector("projector must be a square map".into()));
    }
    if e.idempotency_deviation() > tol * e.frobenius().max(1.0) {
        return Err(Error::NotProjector(format!(
            "idempotency deviation {:.3e}",
            e.idempotency_deviation()
        )));
    }
    let checked = e.clone().verify_cptp(tol)?;
    let id = Superoperator::identity(checked.in_space());
    cp_order_constant(&id, &checked)
}
