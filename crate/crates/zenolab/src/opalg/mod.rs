//! Operator-algebra substrate: labeled tensor-factor spaces, dense complex
//! operators, partial traces, matrix functions and vectorization.

mod expm;
mod linalg;
mod serial;
mod superop;

pub use expm::matrix_exp;
pub use linalg::{
    eig_decompose, eigh_hermitian, matrix_log_psd, min_eigenvalue, op_norm_spectral,
    spectral_projector, sqrtm_psd, trace_norm, trace_norm_hermitian,
};
pub use serial::{cmat_from_json, cmat_to_json, MatrixJson};
pub use superop::{devectorize, vectorize, Superoperator, Verification};

use crate::{C64, CMat, Error, Result, Tolerances};
use ndarray::linalg::kron;

/// Default cap on the total Hilbert-space dimension (superoperators then stay
/// at most 4096 on a side).
pub const DEFAULT_DIM_CAP: usize = 64;

/// Ordered tensor-factor structure of a finite-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    factors: Vec<usize>,
    total_dim: usize,
}

impl HilbertSpace {
    /// Space with the given local dimensions, subject to [`DEFAULT_DIM_CAP`].
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        Self::with_cap(factors, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(factors: Vec<usize>, cap: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpace("no factors".into()));
        }
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSpace(format!("factor dimension {d} < 2")));
        }
        let mut total: usize = 1;
        for &d in &factors {
            total = total
                .checked_mul(d)
                .ok_or_else(|| Error::InvalidSpace("dimension overflow".into()))?;
            if total > cap {
                return Err(Error::InvalidSpace(format!(
                    "total dimension {total}+ exceeds cap {cap}"
                )));
            }
        }
        Ok(HilbertSpace { factors, total_dim: total })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }
}

/// Square complex matrix living on a [`HilbertSpace`].
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    space: HilbertSpace,
    mat: CMat,
}

impl OperatorMatrix {
    pub fn new(space: HilbertSpace, mat: CMat) -> Result<Self> {
        let d = space.total_dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "operator is {}x{}, space dimension is {d}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(OperatorMatrix { space, mat })
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        OperatorMatrix { space: space.clone(), mat: CMat::eye(d) }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        OperatorMatrix { space: space.clone(), mat: CMat::zeros((d, d)) }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix { space: self.space.clone(), mat: adjoint(&self.mat) }
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        OperatorMatrix { space: self.space.clone(), mat: self.mat.mapv(|x| x * c) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::ShapeMismatch("operator spaces differ".into()));
        }
        Ok(OperatorMatrix { space: self.space.clone(), mat: &self.mat + &other.mat })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::ShapeMismatch("operator spaces differ".into()));
        }
        Ok(OperatorMatrix { space: self.space.clone(), mat: self.mat.dot(&other.mat) })
    }

    /// Deviation from Hermiticity in max-abs-entry norm.
    pub fn herm_deviation(&self) -> f64 {
        let adj = adjoint(&self.mat);
        (&self.mat - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.herm_deviation() <= tol * self.scale_for_tol()
    }

    fn scale_for_tol(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0)
    }

    /// Operator on a multi-factor space acting as `op` on `site` and the
    /// identity elsewhere.
    pub fn embed_at(space: &HilbertSpace, site: usize, op: &CMat) -> Result<Self> {
        let n = space.num_factors();
        if site >= n {
            return Err(Error::FactorOutOfRange { index: site, nfactors: n });
        }
        if op.nrows() != space.factors()[site] {
            return Err(Error::ShapeMismatch("local operator dimension".into()));
        }
        let mut acc = CMat::eye(1);
        for (i, &d) in space.factors().iter().enumerate() {
            let local = if i == site { op.clone() } else { CMat::eye(d) };
            acc = kron(&acc, &local);
        }
        OperatorMatrix::new(space.clone(), acc)
    }
}

/// Conjugate transpose.
pub fn adjoint(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

/// Kronecker product with concatenated factor lists.
pub fn tensor(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    let mut factors = a.space.factors().to_vec();
    factors.extend_from_slice(b.space.factors());
    let space = HilbertSpace::new(factors)?;
    OperatorMatrix::new(space, kron(&a.mat, &b.mat))
}

/// Marginal of `op` on the kept factors, in their original relative order.
///
/// Factor 0 is the most significant index, matching the Kronecker convention
/// of [`tensor`]. The full trace is preserved.
pub fn partial_trace(op: &OperatorMatrix, keep: &[usize]) -> Result<OperatorMatrix> {
    let dims = op.space.factors();
    let n = dims.len();
    for &k in keep {
        if k >= n {
            return Err(Error::FactorOutOfRange { index: k, nfactors: n });
        }
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();

    let traced: Vec<usize> = (0..n).filter(|i| !keep_sorted.contains(i)).collect();
    let dk: usize = keep_sorted.iter().map(|&i| dims[i]).product();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();

    // strides of each factor within the full index
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }

    let index_of = |digits_keep: usize, digits_tr: usize| -> usize {
        let mut idx = 0;
        let mut rk = digits_keep;
        for &f in keep_sorted.iter().rev() {
            idx += (rk % dims[f]) * strides[f];
            rk /= dims[f];
        }
        let mut rt = digits_tr;
        for &f in traced.iter().rev() {
            idx += (rt % dims[f]) * strides[f];
            rt /= dims[f];
        }
        idx
    };

    let mut out = CMat::zeros((dk, dk));
    for ik in 0..dk {
        for jk in 0..dk {
            let mut s = C64::new(0.0, 0.0);
            for it in 0..dt {
                s += op.mat[(index_of(ik, it), index_of(jk, it))];
            }
            out[(ik, jk)] = s;
        }
    }
    let space = if keep_sorted.is_empty() {
        return Err(Error::InvalidSpace("cannot keep zero factors".into()));
    } else {
        HilbertSpace::new(keep_sorted.iter().map(|&i| dims[i]).collect())?
    };
    OperatorMatrix::new(space, out)
}

/// Hermitian PSD unit-trace operator, validated on construction.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    op: OperatorMatrix,
}

impl DensityMatrix {
    pub fn new(op: OperatorMatrix, tol: &Tolerances) -> Result<Self> {
        let dev = op.herm_deviation();
        if dev > tol.herm * op.scale_for_tol() {
            return Err(Error::NotDensity(format!("Hermiticity deviation {dev:.3e}")));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol.tr || tr.im.abs() > tol.tr {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = min_eigenvalue(op.matrix())?;
        if min < -tol.psd {
            return Err(Error::NotDensity(format!("min eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { op })
    }

    /// Symmetrize to exact Hermiticity, then validate.
    pub fn new_hermitized(op: OperatorMatrix, tol: &Tolerances) -> Result<Self> {
        let sym = (&op.mat + &adjoint(&op.mat)).mapv(|z| z * 0.5);
        Self::new(OperatorMatrix::new(op.space, sym)?, tol)
    }

    /// Pure state |ψ⟩⟨ψ| from an unnormalized state vector.
    pub fn pure(space: &HilbertSpace, psi: &crate::CVec) -> Result<Self> {
        let d = space.total_dim();
        if psi.len() != d {
            return Err(Error::ShapeMismatch("ket length".into()));
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotDensity("zero vector".into()));
        }
        let mut mat = CMat::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = psi[i] * psi[j].conj() / (norm * norm);
            }
        }
        Ok(DensityMatrix { op: OperatorMatrix::new(space.clone(), mat)? })
    }

    /// Computational-basis state |k⟩⟨k|.
    pub fn basis_state(space: &HilbertSpace, k: usize) -> Result<Self> {
        let d = space.total_dim();
        if k >= d {
            return Err(Error::ShapeMismatch(format!("basis index {k} in dimension {d}")));
        }
        let mut mat = CMat::zeros((d, d));
        mat[(k, k)] = C64::new(1.0, 0.0);
        Ok(DensityMatrix { op: OperatorMatrix::new(space.clone(), mat)? })
    }

    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        let mat = CMat::eye(d).mapv(|z| z / d as f64);
        DensityMatrix { op: OperatorMatrix { space: space.clone(), mat } }
    }

    pub fn op(&self) -> &OperatorMatrix {
        &self.op
    }

    pub fn matrix(&self) -> &CMat {
        self.op.matrix()
    }

    pub fn space(&self) -> &HilbertSpace {
        self.op.space()
    }
}

/// Unnormalized Pauli matrices and related single-qubit constructors.
pub mod pauli {
    use crate::{C64, CMat};

    pub fn i2() -> CMat {
        CMat::eye(2)
    }

    pub fn x() -> CMat {
        let mut m = CMat::zeros((2, 2));
        m[(0, 1)] = C64::new(1.0, 0.0);
        m[(1, 0)] = C64::new(1.0, 0.0);
        m
    }

    pub fn y() -> CMat {
        let mut m = CMat::zeros((2, 2));
        m[(0, 1)] = C64::new(0.0, -1.0);
        m[(1, 0)] = C64::new(0.0, 1.0);
        m
    }

    pub fn z() -> CMat {
        let mut m = CMat::zeros((2, 2));
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(1, 1)] = C64::new(-1.0, 0.0);
        m
    }

    pub fn from_char(c: char) -> Option<CMat> {
        match c.to_ascii_uppercase() {
            'I' => Some(i2()),
            'X' => Some(x()),
            'Y' => Some(y()),
            'Z' => Some(z()),
            _ => None,
        }
    }
}

/// Multi-qubit Pauli-string operator, e.g. `"ZX"` for Z⊗X.
pub fn pauli_string(s: &str) -> Result<OperatorMatrix> {
    if s.is_empty() {
        return Err(Error::InvalidSpace("empty Pauli string".into()));
    }
    let space = HilbertSpace::qubits(s.chars().count())?;
    let mut acc = CMat::eye(1);
    for c in s.chars() {
        let local = pauli::from_char(c)
            .ok_or_else(|| Error::Model(format!("invalid Pauli character '{c}'")))?;
        acc = kron(&acc, &local);
    }
    OperatorMatrix::new(space, acc)
}

/// Parse a ket string over the single-qubit alphabet `0,1,+,-` into a state
/// vector (one character per qubit).
pub fn ket_from_string(s: &str) -> Result<(HilbertSpace, crate::CVec)> {
    if s.is_empty() {
        return Err(Error::InvalidSpace("empty ket string".into()));
    }
    let n = s.chars().count();
    let space = HilbertSpace::qubits(n)?;
    let inv = 1.0 / 2f64.sqrt();
    let mut v = ndarray::Array1::from_elem(1, C64::new(1.0, 0.0));
    for c in s.chars() {
        let local: Vec<C64> = match c {
            '0' => vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            '1' => vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            '+' => vec![C64::new(inv, 0.0), C64::new(inv, 0.0)],
            '-' => vec![C64::new(inv, 0.0), C64::new(-inv, 0.0)],
            _ => return Err(Error::Model(format!("invalid ket character '{c}'"))),
        };
        let mut next = ndarray::Array1::zeros(v.len() * 2);
        for (i, &vi) in v.iter().enumerate() {
            for (j, &lj) in local.iter().enumerate() {
                next[i * 2 + j] = vi * lj;
            }
        }
        v = next;
    }
    Ok((space, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_conventions_match_printed_matrices() {
        let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
        assert_eq!(x[(0, 1)], c(1.0, 0.0));
        assert_eq!(y[(0, 1)], c(0.0, -1.0));
        assert_eq!(y[(1, 0)], c(0.0, 1.0));
        assert_eq!(z[(1, 1)], c(-1.0, 0.0));
        // X^2 = Y^2 = Z^2 = I, XY = iZ
        for p in [&x, &y, &z] {
            let sq = p.dot(p);
            assert_abs_diff_eq!((&sq - &CMat::eye(2)).iter().map(|v| v.norm()).sum::<f64>(), 0.0, epsilon = 1e-15);
        }
        let xy = x.dot(&y);
        let iz = z.mapv(|v| v * c(0.0, 1.0));
        assert_abs_diff_eq!((&xy - &iz).iter().map(|v| v.norm()).sum::<f64>(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_identity_and_hand_oracle() {
        let q1 = HilbertSpace::qubits(1).unwrap();
        let i2 = OperatorMatrix::new(q1.clone(), pauli::i2()).unwrap();
        let t = tensor(&i2, &i2).unwrap();
        assert_eq!(t.dim(), 4);
        assert_abs_diff_eq!(
            (t.matrix() - &CMat::eye(4)).iter().map(|v| v.norm()).sum::<f64>(),
            0.0,
            epsilon = 1e-15
        );

        // Z (x) X: entry (0,1) = 1 and entry (2,3) = -1 by direct 4x4 expansion
        let zm = OperatorMatrix::new(q1.clone(), pauli::z()).unwrap();
        let xm = OperatorMatrix::new(q1.clone(), pauli::x()).unwrap();
        let zx = tensor(&zm, &xm).unwrap();
        assert_eq!(zx.matrix()[(0, 1)], c(1.0, 0.0));
        assert_eq!(zx.matrix()[(2, 3)], c(-1.0, 0.0));
        assert_eq!(zx.matrix()[(0, 0)], c(0.0, 0.0));

        // (X (x) I)|00> = |10>
        let xi = tensor(&xm, &i2).unwrap();
        let (_, ket00) = ket_from_string("00").unwrap();
        let out = xi.matrix().dot(&ket00);
        assert_eq!(out[2], c(1.0, 0.0));
        assert_eq!(out[0], c(0.0, 0.0));
    }

    #[test]
    fn tensor_is_associative_and_dimension_multiplicative() {
        let q1 = HilbertSpace::qubits(1).unwrap();
        let a = OperatorMatrix::new(q1.clone(), pauli::x()).unwrap();
        let b = OperatorMatrix::new(q1.clone(), pauli::y()).unwrap();
        let cth = OperatorMatrix::new(q1.clone(), pauli::z()).unwrap();
        let left = tensor(&tensor(&a, &b).unwrap(), &cth).unwrap();
        let right = tensor(&a, &tensor(&b, &cth).unwrap()).unwrap();
        assert_eq!(left.dim(), 8);
        assert_abs_diff_eq!(
            (left.matrix() - right.matrix()).iter().map(|v| v.norm()).sum::<f64>(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let tol = Tolerances::default();
        let q2 = HilbertSpace::qubits(2).unwrap();
        // product state: tr_B(rho (x) sigma) = rho * tr(sigma)
        let (_, plus) = ket_from_string("+").unwrap();
        let q1 = HilbertSpace::qubits(1).unwrap();
        let rho = DensityMatrix::pure(&q1, &plus).unwrap();
        let sig = DensityMatrix::basis_state(&q1, 1).unwrap();
        let prod = tensor(rho.op(), sig.op()).unwrap();
        let marg = partial_trace(&prod, &[0]).unwrap();
        assert_abs_diff_eq!(
            (marg.matrix() - rho.matrix()).iter().map(|v| v.norm()).sum::<f64>(),
            0.0,
            epsilon = 1e-14
        );

        // Bell state marginal = I/2
        let mut bell = crate::CVec::zeros(4);
        bell[0] = c(1.0 / 2f64.sqrt(), 0.0);
        bell[3] = c(1.0 / 2f64.sqrt(), 0.0);
        let rho_bell = DensityMatrix::pure(&q2, &bell).unwrap();
        let marg = partial_trace(rho_bell.op(), &[1]).unwrap();
        let half = CMat::eye(2).mapv(|z| z * 0.5);
        assert_abs_diff_eq!(
            (marg.matrix() - &half).iter().map(|v| v.norm()).sum::<f64>(),
            0.0,
            epsilon = 1e-14
        );

        // |0000><0000| keep {1,2,3} -> |000><000|
        let q4 = HilbertSpace::qubits(4).unwrap();
        let rho0 = DensityMatrix::basis_state(&q4, 0).unwrap();
        let marg = partial_trace(rho0.op(), &[1, 2, 3]).unwrap();
        assert_eq!(marg.dim(), 8);
        assert_abs_diff_eq!(marg.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        let _ = DensityMatrix::new(marg, &tol).unwrap();

        // keep everything = identity, trace preserved
        let all = partial_trace(rho_bell.op(), &[0, 1]).unwrap();
        assert_abs_diff_eq!(
            (all.matrix() - rho_bell.matrix()).iter().map(|v| v.norm()).sum::<f64>(),
            0.0,
            epsilon = 1e-14
        );
        assert!(partial_trace(rho_bell.op(), &[2]).is_err());
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        let tol = Tolerances::default();
        let q1 = HilbertSpace::qubits(1).unwrap();
        let mut bad = CMat::eye(2);
        bad[(0, 1)] = c(0.3, 0.0); // not Hermitian
        assert!(DensityMatrix::new(OperatorMatrix::new(q1.clone(), bad).unwrap(), &tol).is_err());
        let not_unit = CMat::eye(2); // trace 2
        assert!(DensityMatrix::new(OperatorMatrix::new(q1.clone(), not_unit).unwrap(), &tol).is_err());
        let mut neg = CMat::zeros((2, 2));
        neg[(0, 0)] = c(1.5, 0.0);
        neg[(1, 1)] = c(-0.5, 0.0);
        assert!(DensityMatrix::new(OperatorMatrix::new(q1, neg).unwrap(), &tol).is_err());
    }

    #[test]
    fn space_cap_enforced() {
        assert!(HilbertSpace::qubits(6).is_ok());
        assert!(HilbertSpace::qubits(7).is_err());
        assert!(HilbertSpace::new(vec![1, 2]).is_err());
    }
}
