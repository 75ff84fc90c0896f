//! Column-stacked superoperators.
//!
//! Every superoperator matrix acts on `vec(ρ)` with the column-stacking
//! convention `vec(ρ)[i + j·d] = ρ[i,j]`, so that
//! `vec(AρB) = (Bᵀ ⊗ A) · vec(ρ)`.

use super::{adjoint, HilbertSpace, OperatorMatrix};
use crate::{C64, CMat, CVec, Error, Result};
use ndarray::linalg::kron;

/// Column-stack a square matrix.
pub fn vectorize(m: &CMat) -> CVec {
    let d = m.nrows();
    let mut v = CVec::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            v[i + j * d] = m[(i, j)];
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &CVec, d: usize) -> Result<CMat> {
    if v.len() != d * d {
        return Err(Error::ShapeMismatch(format!("vector length {} for dimension {d}", v.len())));
    }
    let mut m = CMat::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] = v[i + j * d];
        }
    }
    Ok(m)
}

/// Verification flags for channel properties; `None` = not yet checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub trace_preserving: Option<bool>,
    pub completely_positive: Option<bool>,
}

/// Linear map on operators, stored as an `(out²)×(in²)` matrix on
/// column-stacked vectorizations.
#[derive(Clone, Debug)]
pub struct Superoperator {
    in_space: HilbertSpace,
    out_space: HilbertSpace,
    mat: CMat,
    verified: Verification,
}

impl Superoperator {
    pub fn from_matrix(in_space: HilbertSpace, out_space: HilbertSpace, mat: CMat) -> Result<Self> {
        let (di, do_) = (in_space.total_dim(), out_space.total_dim());
        if mat.nrows() != do_ * do_ || mat.ncols() != di * di {
            return Err(Error::ShapeMismatch(format!(
                "superoperator is {}x{}, expected {}x{}",
                mat.nrows(),
                mat.ncols(),
                do_ * do_,
                di * di
            )));
        }
        Ok(Superoperator { in_space, out_space, mat, verified: Verification::default() })
    }

    /// Square map on one space.
    pub fn endo(space: &HilbertSpace, mat: CMat) -> Result<Self> {
        Self::from_matrix(space.clone(), space.clone(), mat)
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d2 = space.total_dim() * space.total_dim();
        Superoperator {
            in_space: space.clone(),
            out_space: space.clone(),
            mat: CMat::eye(d2),
            verified: Verification {
                trace_preserving: Some(true),
                completely_positive: Some(true),
            },
        }
    }

    pub fn zero(space: &HilbertSpace) -> Self {
        let d2 = space.total_dim() * space.total_dim();
        Superoperator {
            in_space: space.clone(),
            out_space: space.clone(),
            mat: CMat::zeros((d2, d2)),
            verified: Verification::default(),
        }
    }

    /// Map `ρ ↦ A ρ B`, i.e. matrix `Bᵀ ⊗ A`.
    pub fn from_left_right(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<Self> {
        if a.space() != b.space() {
            return Err(Error::ShapeMismatch("left/right factor spaces differ".into()));
        }
        let mat = kron(&b.matrix().t().to_owned(), a.matrix());
        Self::endo(a.space(), mat)
    }

    /// Unitary conjugation `ρ ↦ U ρ U†`.
    pub fn conjugation(u: &OperatorMatrix) -> Result<Self> {
        let mat = kron(&u.matrix().mapv(|z| z.conj()), u.matrix());
        let mut s = Self::endo(u.space(), mat)?;
        s.verified =
            Verification { trace_preserving: Some(true), completely_positive: Some(true) };
        Ok(s)
    }

    /// Build a map column-by-column from its action on matrix units.
    pub fn from_action<F>(in_space: &HilbertSpace, out_space: &HilbertSpace, f: F) -> Result<Self>
    where
        F: Fn(&CMat) -> CMat,
    {
        let (di, do_) = (in_space.total_dim(), out_space.total_dim());
        let mut mat = CMat::zeros((do_ * do_, di * di));
        for j in 0..di {
            for i in 0..di {
                let mut e = CMat::zeros((di, di));
                e[(i, j)] = C64::new(1.0, 0.0);
                let out = f(&e);
                if out.nrows() != do_ || out.ncols() != do_ {
                    return Err(Error::ShapeMismatch("action output dimension".into()));
                }
                let col = vectorize(&out);
                for (r, &v) in col.iter().enumerate() {
                    mat[(r, i + j * di)] = v;
                }
            }
        }
        Self::from_matrix(in_space.clone(), out_space.clone(), mat)
    }

    pub fn in_space(&self) -> &HilbertSpace {
        &self.in_space
    }

    pub fn out_space(&self) -> &HilbertSpace {
        &self.out_space
    }

    pub fn in_dim(&self) -> usize {
        self.in_space.total_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.out_space.total_dim()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn verified(&self) -> Verification {
        self.verified
    }

    pub fn apply_matrix(&self, m: &CMat) -> Result<CMat> {
        let d = self.in_dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::ShapeMismatch("apply: operator dimension".into()));
        }
        let v = self.mat.dot(&vectorize(m));
        devectorize(&v, self.out_dim())
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<OperatorMatrix> {
        if op.space() != &self.in_space {
            return Err(Error::ShapeMismatch("apply: operator space".into()));
        }
        OperatorMatrix::new(self.out_space.clone(), self.apply_matrix(op.matrix())?)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.out_space != self.in_space {
            return Err(Error::ShapeMismatch("compose: inner spaces differ".into()));
        }
        Self::from_matrix(other.in_space.clone(), self.out_space.clone(), self.mat.dot(&other.mat))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.in_space != other.in_space || self.out_space != other.out_space {
            return Err(Error::ShapeMismatch("add: spaces differ".into()));
        }
        Self::from_matrix(self.in_space.clone(), self.out_space.clone(), &self.mat + &other.mat)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Superoperator {
            in_space: self.in_space.clone(),
            out_space: self.out_space.clone(),
            mat: self.mat.mapv(|z| z * c),
            verified: Verification::default(),
        }
    }

    /// Adjoint map with respect to the Hilbert–Schmidt inner product.
    pub fn adjoint_map(&self) -> Self {
        Superoperator {
            in_space: self.out_space.clone(),
            out_space: self.in_space.clone(),
            mat: adjoint(&self.mat),
            verified: Verification::default(),
        }
    }

    /// Deviation of the adjoint from fixing the identity (trace preservation).
    pub fn tp_deviation(&self) -> f64 {
        let vid_out = vectorize(&CMat::eye(self.out_dim()));
        let vid_in = vectorize(&CMat::eye(self.in_dim()));
        let back = adjoint(&self.mat).dot(&vid_out);
        (&back - &vid_in).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.tp_deviation() <= tol * (self.in_dim() as f64).sqrt().max(1.0)
    }

    /// Deviation of `self` from annihilating traces: `tr(S(ρ)) = 0` for all ρ.
    pub fn trace_annihilation_deviation(&self) -> f64 {
        let vid_out = vectorize(&CMat::eye(self.out_dim()));
        adjoint(&self.mat).dot(&vid_out).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// GNS self-adjointness test for the tracial state ω = I/d: under the
    /// vectorization isometry this is Hermiticity of the superoperator matrix.
    pub fn is_gns_self_adjoint_tracial(&self, tol: f64) -> bool {
        let dev: f64 =
            (&self.mat - &adjoint(&self.mat)).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale: f64 = self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        dev <= tol * scale
    }

    /// Mark the map verified CPTP after checking trace preservation and Choi
    /// positivity at the given tolerance.
    pub fn verify_cptp(mut self, tol: f64) -> Result<Self> {
        if !self.is_trace_preserving(tol) {
            self.verified.trace_preserving = Some(false);
            return Err(Error::NotCptp(format!("TP deviation {:.3e}", self.tp_deviation())));
        }
        self.verified.trace_preserving = Some(true);
        let j = crate::metrics::choi(&self)?;
        let min = super::min_eigenvalue(j.matrix())?;
        if min < -tol {
            self.verified.completely_positive = Some(false);
            return Err(Error::NotCptp(format!("Choi min eigenvalue {min:.3e}")));
        }
        self.verified.completely_positive = Some(true);
        Ok(self)
    }

    /// Idempotency deviation ‖E² − E‖_F.
    pub fn idempotency_deviation(&self) -> f64 {
        let sq = self.mat.dot(&self.mat);
        (&sq - &self.mat).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the matrix.
    pub fn frobenius(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}
