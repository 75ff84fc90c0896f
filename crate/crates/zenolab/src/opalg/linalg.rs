//! Spectral routines and matrix functions on dense complex matrices.

use super::adjoint;
use crate::{C64, CMat, CVec, Error, Result};
use ndarray_linalg::{Eig, Eigh, Inverse, OperationNorm, UPLO};

/// Hermitian eigendecomposition; the input is symmetrized first.
///
/// Returns `(w, V)` with the eigenvector for `w[k]` in column `k`, i.e.
/// `m = V diag(w) V†`. The backend returns complex eigenvectors in the
/// conjugate orientation, which is corrected here and pinned by a test.
pub fn eigh_hermitian(m: &CMat) -> Result<(ndarray::Array1<f64>, CMat)> {
    let sym = (m + &adjoint(m)).mapv(|z| z * 0.5);
    let (w, v) = sym.eigh(UPLO::Lower).map_err(|e| Error::EigConvergence(e.to_string()))?;
    Ok((w, v.mapv(|z| z.conj())))
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(m: &CMat) -> Result<f64> {
    let (w, _) = eigh_hermitian(m)?;
    Ok(w.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// General (non-Hermitian) eigendecomposition with a per-pair residual check
/// `‖m v − λ v‖ ≤ tol_eig · ‖m‖`.
pub fn eig_decompose(m: &CMat, tol_eig: f64) -> Result<(CVec, CMat)> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch("eig of non-square matrix".into()));
    }
    let (vals, vecs) = m.eig().map_err(|e| Error::EigConvergence(e.to_string()))?;
    let scale = op_norm_spectral(m)?.max(1e-300);
    let prod = m.dot(&vecs);
    for (k, &lam) in vals.iter().enumerate() {
        let mut res = 0.0f64;
        let mut vnorm = 0.0f64;
        for r in 0..m.nrows() {
            res += (prod[(r, k)] - lam * vecs[(r, k)]).norm_sqr();
            vnorm += vecs[(r, k)].norm_sqr();
        }
        let res = res.sqrt() / vnorm.sqrt().max(1e-300);
        if res > tol_eig * scale {
            return Err(Error::EigConvergence(format!(
                "eigenpair {k} residual {res:.3e} exceeds {:.3e}",
                tol_eig * scale
            )));
        }
    }
    Ok((vals, vecs))
}

/// Largest singular value.
pub fn op_norm_spectral(m: &CMat) -> Result<f64> {
    // eigvalsh of m†m is cheaper and more robust than a full SVD here
    let gram = adjoint(m).dot(m);
    let (w, _) = gram.eigh(UPLO::Lower).map_err(|e| Error::EigConvergence(e.to_string()))?;
    Ok(w.iter().cloned().fold(0.0f64, f64::max).max(0.0).sqrt())
}

/// Schatten 1-norm via singular values.
pub fn trace_norm(m: &CMat) -> Result<f64> {
    let gram = adjoint(m).dot(m);
    let (w, _) = gram.eigh(UPLO::Lower).map_err(|e| Error::EigConvergence(e.to_string()))?;
    Ok(w.iter().map(|v| v.max(0.0).sqrt()).sum())
}

/// Schatten 1-norm of a Hermitian matrix (sum of |eigenvalues|).
pub fn trace_norm_hermitian(m: &CMat) -> Result<f64> {
    let (w, _) = eigh_hermitian(m)?;
    Ok(w.iter().map(|v| v.abs()).sum())
}

/// Principal logarithm of a PSD matrix on its support.
///
/// Eigenvalues below `tol_psd` (relative to the largest) are treated as exact
/// zeros and excluded; eigenvalues below `-tol_psd` are an error. The support
/// convention for consumers like relative entropy lives in `metrics`.
pub fn matrix_log_psd(m: &CMat, tol_psd: f64) -> Result<CMat> {
    let (w, v) = eigh_hermitian(m)?;
    let scale = w.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    let mut out = CMat::zeros(m.raw_dim());
    for (k, &lam) in w.iter().enumerate() {
        if lam < -tol_psd * scale {
            return Err(Error::NotPsd(lam));
        }
        if lam <= tol_psd * scale {
            continue; // off-support: contributes nothing
        }
        let l = lam.ln();
        let col = v.column(k);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] += C64::new(l, 0.0) * col[i] * col[j].conj();
            }
        }
    }
    Ok(out)
}

/// PSD square root.
pub fn sqrtm_psd(m: &CMat, tol_psd: f64) -> Result<CMat> {
    let (w, v) = eigh_hermitian(m)?;
    let scale = w.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    let mut out = CMat::zeros(m.raw_dim());
    for (k, &lam) in w.iter().enumerate() {
        if lam < -tol_psd * scale {
            return Err(Error::NotPsd(lam));
        }
        let s = lam.max(0.0).sqrt();
        if s == 0.0 {
            continue;
        }
        let col = v.column(k);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] += C64::new(s, 0.0) * col[i] * col[j].conj();
            }
        }
    }
    Ok(out)
}

/// Spectral projector `V S V⁻¹` onto the eigenvalues selected by `select`.
///
/// Errors if the eigenvector matrix is numerically singular (defective or
/// near-degenerate spectrum) rather than guessing.
pub fn spectral_projector<F>(m: &CMat, tol_eig: f64, select: F) -> Result<CMat>
where
    F: Fn(C64) -> bool,
{
    let (vals, vecs) = eig_decompose(m, tol_eig)?;
    let vinv = vecs.inv().map_err(|e| Error::SpectralDefect(e.to_string()))?;
    // condition sanity: V V^{-1} must reproduce the identity
    let resid = (&vecs.dot(&vinv) - &CMat::eye(m.nrows()))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if resid > 1e-6 {
        return Err(Error::SpectralDefect(format!(
            "eigenvector matrix ill-conditioned (inverse residual {resid:.3e})"
        )));
    }
    let mut sel = CMat::zeros(m.raw_dim());
    for (k, &lam) in vals.iter().enumerate() {
        if select(lam) {
            sel[(k, k)] = C64::new(1.0, 0.0);
        }
    }
    Ok(vecs.dot(&sel).dot(&vinv))
}

/// `‖m‖₁`, the maximum absolute column sum (used by the exponential scaling).
pub fn one_norm(m: &CMat) -> f64 {
    match m.opnorm_one() {
        Ok(v) => v,
        Err(_) => m.iter().map(|z| z.norm()).fold(0.0, f64::max) * m.nrows() as f64,
    }
}
