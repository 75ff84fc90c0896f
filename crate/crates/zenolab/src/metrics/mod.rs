//! Information metrics and order quantities: relative entropy, trace
//! distance, fidelities, a certified diamond-norm bracket, cp-order constants
//! and Pimsner–Popa indices.

mod choi;
mod cporder;
mod diamond;

pub use choi::{choi, trace_out_output, ChoiMatrix};
pub use cporder::{cp_order_constant, pimsner_popa_cb};
pub use diamond::{diamond_bracket, DiamondBracket, DiamondConfig};

use crate::opalg::{eigh_hermitian, sqrtm_psd, trace_norm_hermitian, DensityMatrix};
use crate::{CMat, Error, Result};

/// Logarithm base for entropic quantities; base 2 is the default everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    fn nats_to_base(self, nats: f64) -> f64 {
        match self {
            LogBase::Two => nats / std::f64::consts::LN_2,
            LogBase::E => nats,
        }
    }
}

/// Umegaki relative entropy `tr(ρ log ρ − ρ log σ)`.
///
/// Returns `+∞` iff the support of ρ is not contained in the support of σ:
/// eigenvalues of ρ below `tol_psd` count as exact zeros, and containment is
/// tested via the σ-null-space compression `‖P₀ ρ P₀‖ ≤ 1e−9`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, base: LogBase) -> Result<f64> {
    relative_entropy_mats(rho.matrix(), sigma.matrix(), base, 1e-10)
}

/// Relative entropy on raw Hermitian PSD unit-trace matrices.
pub fn relative_entropy_mats(
    rho: &CMat,
    sigma: &CMat,
    base: LogBase,
    tol_psd: f64,
) -> Result<f64> {
    if rho.nrows() != sigma.nrows() {
        return Err(Error::ShapeMismatch("relative entropy dimensions".into()));
    }
    let (wr, vr) = eigh_hermitian(rho)?;
    let (ws, vs) = eigh_hermitian(sigma)?;
    let rho_scale = wr.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    let sig_scale = ws.iter().cloned().fold(0.0f64, f64::max).max(1.0);

    // support test: project rho onto sigma's null space
    let d = rho.nrows();
    let mut null_overlap = 0.0f64;
    for (k, &ls) in ws.iter().enumerate() {
        if ls > tol_psd * sig_scale {
            continue;
        }
        let col = vs.column(k);
        // <v_k| rho |v_k>
        let mut amp = crate::C64::new(0.0, 0.0);
        for i in 0..d {
            let mut row = crate::C64::new(0.0, 0.0);
            for j in 0..d {
                row += rho[(i, j)] * col[j];
            }
            amp += col[i].conj() * row;
        }
        null_overlap += amp.re.abs();
    }
    if null_overlap > 1e-9 {
        return Ok(f64::INFINITY);
    }

    // tr rho log rho
    let mut nats = 0.0f64;
    for &l in wr.iter() {
        if l > tol_psd * rho_scale {
            nats += l * l.ln();
        }
    }
    // tr rho log sigma = sum_k <v_k|rho|v_k> ln mu_k over sigma's support
    for (k, &ls) in ws.iter().enumerate() {
        if ls <= tol_psd * sig_scale {
            continue;
        }
        let col = vs.column(k);
        let mut amp = crate::C64::new(0.0, 0.0);
        for i in 0..d {
            let mut row = crate::C64::new(0.0, 0.0);
            for j in 0..d {
                row += rho[(i, j)] * col[j];
            }
            amp += col[i].conj() * row;
        }
        nats -= amp.re * ls.ln();
    }
    let _ = vr;
    Ok(base.nats_to_base(nats.max(0.0)))
}

/// `d_tr(ρ,σ) = ½‖ρ−σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    trace_distance_mats(rho.matrix(), sigma.matrix())
}

pub fn trace_distance_mats(rho: &CMat, sigma: &CMat) -> Result<f64> {
    Ok(0.5 * trace_norm_hermitian(&(rho - sigma))?)
}

/// Uhlmann fidelity `tr√(√ρ σ √ρ)²`, clamped to [0,1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    fidelity_mats(rho.matrix(), sigma.matrix())
}

pub fn fidelity_mats(rho: &CMat, sigma: &CMat) -> Result<f64> {
    let sr = sqrtm_psd(rho, 1e-9)?;
    let inner = sr.dot(sigma).dot(&sr);
    let (w, _) = eigh_hermitian(&inner)?;
    let root_sum: f64 = w.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// Fidelity between normalized Choi matrices of two CPTP maps.
pub fn process_fidelity(
    phi: &crate::opalg::Superoperator,
    psi: &crate::opalg::Superoperator,
) -> Result<f64> {
    let jp = choi(phi)?;
    let jq = choi(psi)?;
    fidelity_mats(jp.matrix(), jq.matrix())
}

/// Least-squares exponential decay rate of a positive series on a window.
///
/// Fits `ln D_t = a − λ t` over samples with `t ∈ [window.0, window.1]` and
/// returns `(λ, rms_residual)`.
pub fn decay_rate_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1)
        .map(|&(t, d)| (t, d))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewSamples { need: 3, got: pts.len() });
    }
    if let Some(&(t, d)) = pts.iter().find(|(_, d)| *d <= 0.0) {
        return Err(Error::Domain(format!("non-positive sample D({t}) = {d}")));
    }
    let n = pts.len() as f64;
    let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for &(t, d) in &pts {
        let y = d.ln();
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let denom = n * stt - st * st;
    if denom.abs() < 1e-300 {
        return Err(Error::Domain("degenerate time grid".into()));
    }
    let slope = (n * sty - st * sy) / denom;
    let intercept = (sy - slope * st) / n;
    let mut ss = 0.0;
    for &(t, d) in &pts {
        let r = d.ln() - (intercept + slope * t);
        ss += r * r;
    }
    Ok((-slope, (ss / n).sqrt()))
}
