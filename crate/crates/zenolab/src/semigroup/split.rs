//! Spectral split of a Lindbladian into its fixed-point/peripheral projector
//! and decaying complement.

use crate::opalg::{eig_decompose, op_norm_spectral, spectral_projector, Superoperator};
use crate::{C64, CMat, Error, Result, Tolerances};

/// Fixed-point projector `E = lim exp(−tL)` (up to persistent rotation), the
/// peripheral rotation generator, and the spectral decay gap.
#[derive(Clone, Debug)]
pub struct ProjectorSplit {
    pub projector: Superoperator,
    /// Restriction of `L` to the peripheral subspace; `R_t = exp(−t·this)` on
    /// the range of the projector.
    pub peripheral_generator: Superoperator,
    /// Smallest `|Re λ|` over non-peripheral eigenvalues, in units 1/time.
    pub decay_gap: f64,
}

impl ProjectorSplit {
    /// `R_t ∘ E`, the long-time limit channel of `exp(−tL)` at time `t`.
    pub fn rotating_limit(&self, t: f64) -> Result<Superoperator> {
        let r = crate::opalg::matrix_exp(
            &self.peripheral_generator.matrix().mapv(|z| z * C64::new(-t, 0.0)),
        )?;
        Superoperator::endo(self.projector.in_space(), r)?.compose(&self.projector)
    }

    /// True when the peripheral part carries no rotation (pure fixed space).
    pub fn peripheral_is_zero(&self, tol: f64) -> bool {
        self.peripheral_generator.frobenius() <= tol * self.projector.frobenius().max(1.0)
    }
}

/// Commutation-matrix conjugation enforcing Hermiticity preservation:
/// a map `M` preserves Hermiticity iff `M = K conj(M) K` with `K = vec ∘ T`.
fn hermiticity_symmetrize(m: &CMat, d: usize) -> CMat {
    // K vec(rho) = vec(rho^T): K[(i + j d),(j + i d)] = 1
    let mut out = m.clone();
    let conj = m.mapv(|z| z.conj());
    for r in 0..d * d {
        let (ri, rj) = (r % d, r / d);
        let kr = rj + ri * d;
        for c in 0..d * d {
            let (ci, cj) = (c % d, c / d);
            let kc = cj + ci * d;
            out[(r, c)] = (m[(r, c)] + conj[(kr, kc)]) * 0.5;
        }
    }
    out
}

/// Classify the spectrum of a valid generator `L` and extract the split.
///
/// Eigenvalues with `|Re λ| < zero_tol·‖L‖` are peripheral (the exactly-zero
/// block is the fixed space, nonzero imaginary parts persist as rotation);
/// the rest must have positive real part. The spectral projector is
/// symmetrized to preserve Hermiticity and verified idempotent and CPTP; a
/// defective or near-degenerate peripheral block is reported as an error.
pub fn fixed_point_split(l: &Superoperator, tol: &Tolerances) -> Result<ProjectorSplit> {
    if l.in_space() != l.out_space() {
        return Err(Error::ShapeMismatch("split needs a square generator".into()));
    }
    let d = l.in_dim();
    let scale = op_norm_spectral(l.matrix())?;
    if scale == 0.0 {
        // zero generator: everything is fixed
        return Ok(ProjectorSplit {
            projector: Superoperator::identity(l.in_space()),
            peripheral_generator: Superoperator::zero(l.in_space()),
            decay_gap: f64::INFINITY,
        });
    }
    let (vals, _) = eig_decompose(l.matrix(), tol.eig)?;
    let cut = tol.zero * scale;
    if let Some(bad) = vals.iter().find(|lam| lam.re < -cut) {
        return Err(Error::InvalidGenerator(format!(
            "eigenvalue {bad} of L has negative real part (exp(-tL) would grow)"
        )));
    }
    let peripheral_count = vals.iter().filter(|lam| lam.re.abs() < cut).count();
    if peripheral_count == 0 {
        return Err(Error::InvalidGenerator(
            "generator has no peripheral spectrum; not trace preserving?".into(),
        ));
    }
    let decay_gap = vals
        .iter()
        .filter(|lam| lam.re.abs() >= cut)
        .map(|lam| lam.re.abs())
        .fold(f64::INFINITY, f64::min);

    let raw = spectral_projector(l.matrix(), tol.eig, |lam| lam.re.abs() < cut)?;
    let sym = hermiticity_symmetrize(&raw, d);
    let proj = Superoperator::endo(l.in_space(), sym)?;

    let idev = proj.idempotency_deviation();
    if idev > 1e-8 * proj.frobenius().max(1.0) {
        return Err(Error::SpectralDefect(format!(
            "peripheral projector not idempotent (deviation {idev:.3e})"
        )));
    }
    let proj = proj.verify_cptp(1e-8).map_err(|e| {
        Error::SpectralDefect(format!("peripheral projector failed CPTP verification: {e}"))
    })?;

    // restriction of L to the peripheral subspace
    let per = proj.compose(&Superoperator::endo(l.in_space(), l.matrix().clone())?)?.compose(&proj)?;
    let per_mat = hermiticity_symmetrize(&per.matrix().mapv(|z| z), d);
    let per = Superoperator::endo(l.in_space(), per_mat)?;

    // E must commute with the peripheral generator
    let comm = proj.matrix().dot(per.matrix()) - per.matrix().dot(proj.matrix());
    let cdev = comm.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if cdev > 1e-8 * scale.max(1.0) {
        return Err(Error::SpectralDefect(format!(
            "projector does not commute with peripheral generator (deviation {cdev:.3e})"
        )));
    }
    Ok(ProjectorSplit { projector: proj, peripheral_generator: per, decay_gap })
}
