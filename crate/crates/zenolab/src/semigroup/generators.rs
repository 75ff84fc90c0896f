//! The stochastic and coherent generator families.

use crate::opalg::{adjoint, HilbertSpace, OperatorMatrix, Superoperator};
use crate::{C64, CMat, Error, Result, Tolerances};
use ndarray::linalg::kron;

/// Coherent part `ρ ↦ i[H,ρ]`; purely imaginary spectrum.
pub fn hamiltonian_part(h: &OperatorMatrix) -> Result<Superoperator> {
    if !h.is_hermitian(1e-10) {
        return Err(Error::NotHermitian(h.herm_deviation()));
    }
    let d = h.dim();
    let eye = CMat::eye(d);
    let mat = (kron(&eye, h.matrix()) - kron(&h.matrix().t().to_owned(), &eye))
        .mapv(|z| z * C64::new(0.0, 1.0));
    Superoperator::endo(h.space(), mat)
}

/// CPTP projector replacing the listed factors with their maximally mixed
/// state: `E(ρ) = (1/d_T) ⊗ tr_T(ρ)`, factors kept in original order.
pub fn replacement_projector(space: &HilbertSpace, factors: &[usize]) -> Result<Superoperator> {
    let n = space.num_factors();
    let mut targets: Vec<usize> = factors.to_vec();
    targets.sort_unstable();
    targets.dedup();
    for &f in &targets {
        if f >= n {
            return Err(Error::FactorOutOfRange { index: f, nfactors: n });
        }
    }
    let dims = space.factors().to_vec();
    let d = space.total_dim();
    let dt: usize = targets.iter().map(|&i| dims[i]).product();

    // per-factor strides; factor 0 is the most significant index
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let target_digits = |idx: usize| -> usize {
        let mut key = 0;
        for &f in &targets {
            key = key * dims[f] + (idx / strides[f]) % dims[f];
        }
        key
    };
    let with_target_digits = |idx: usize, digits: usize| -> usize {
        let mut out = idx;
        let mut rem = digits;
        for &f in targets.iter().rev() {
            let new = rem % dims[f];
            rem /= dims[f];
            let old = (out / strides[f]) % dims[f];
            out = out - old * strides[f] + new * strides[f];
        }
        out
    };

    let targets_cl = targets.clone();
    Superoperator::from_action(space, space, move |e| {
        let mut out = CMat::zeros((d, d));
        if targets_cl.is_empty() {
            out.assign(e);
            return out;
        }
        for i in 0..d {
            for j in 0..d {
                if target_digits(i) != target_digits(j) {
                    continue;
                }
                let mut s = crate::C64::new(0.0, 0.0);
                for t in 0..dt {
                    s += e[(with_target_digits(i, t), with_target_digits(j, t))];
                }
                out[(i, j)] = s / dt as f64;
            }
        }
        out
    })
}

/// Replacement generator `S = Id − E_target`; `exp(−tS) = e^{−t}Id + (1−e^{−t})E`.
pub fn replacement_generator(e_target: &Superoperator, tol: &Tolerances) -> Result<Superoperator> {
    let dev = e_target.idempotency_deviation();
    if dev > 1e-8 * e_target.frobenius().max(1.0) {
        return Err(Error::NotProjector(format!("idempotency deviation {dev:.3e}")));
    }
    let checked = e_target.clone().verify_cptp(1e-8f64.max(tol.eig))?;
    Superoperator::identity(checked.in_space()).sub(&checked)
}

/// Dephasing generator `S(ρ) = ρ − PρP†` for a unitary involution `P`.
pub fn dephasing_generator(p: &OperatorMatrix, tol: &Tolerances) -> Result<Superoperator> {
    let d = p.dim();
    let udev = (&adjoint(p.matrix()).dot(p.matrix()) - &CMat::eye(d))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if udev > 1e-8f64.max(tol.herm) {
        return Err(Error::NotUnitary(udev));
    }
    let idev = (&p.matrix().dot(p.matrix()) - &CMat::eye(d))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if idev > 1e-8f64.max(tol.herm) {
        return Err(Error::NotInvolution(idev));
    }
    Superoperator::identity(p.space()).sub(&Superoperator::conjugation(p)?)
}

/// Standard GKSL dissipator over jump operators, signed so that `exp(−tS)` is
/// CPTP: `S(ρ) = −Σ (VρV† − ½{V†V, ρ})`.
pub fn gksl_dissipator(jumps: &[OperatorMatrix]) -> Result<Superoperator> {
    if jumps.is_empty() {
        return Err(Error::InvalidGenerator("no jump operators".into()));
    }
    let space = jumps[0].space().clone();
    let d = space.total_dim();
    let eye = CMat::eye(d);
    let mut mat = CMat::zeros((d * d, d * d));
    for v in jumps {
        if v.space() != &space {
            return Err(Error::ShapeMismatch("jump operator space".into()));
        }
        let vdag_v = adjoint(v.matrix()).dot(v.matrix());
        let sandwich = kron(&v.matrix().mapv(|z| z.conj()), v.matrix());
        let anti = kron(&eye, &vdag_v).mapv(|z| z * 0.5)
            + kron(&vdag_v.t().to_owned(), &eye).mapv(|z| z * 0.5);
        mat = mat + (anti - sandwich);
    }
    Superoperator::endo(&space, mat)
}
