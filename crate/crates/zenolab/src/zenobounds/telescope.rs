//! Exact telescoping identity for products of map families.
//!
//! For families `(f_m)`, `(g_m)` and any input ρ, with `ω_l = f_l ∘ … ∘ f_1 (ρ)`:
//! `(Π f − Π g)(ρ) = Σ_l (Π_{n>l} g_n)(f_l − g_l)(ω_{l−1})`.
//! This identity is the brute-force oracle validating every window expansion
//! used by the bound evaluators.

use crate::opalg::{DensityMatrix, Superoperator};
use crate::{CMat, Error, Result};

/// Residual Frobenius norm of the telescoping identity on the given input.
pub fn telescoping_check(
    f_family: &[Superoperator],
    g_family: &[Superoperator],
    rho: &DensityMatrix,
) -> Result<f64> {
    if f_family.len() != g_family.len() || f_family.is_empty() {
        return Err(Error::ShapeMismatch("families must have equal nonzero length".into()));
    }
    let k = f_family.len();
    for s in f_family.iter().chain(g_family.iter()) {
        if s.in_space() != rho.space() || s.out_space() != rho.space() {
            return Err(Error::ShapeMismatch("family member space".into()));
        }
    }

    // omega_l = f_l ... f_1 (rho), omega_0 = rho
    let mut omegas: Vec<CMat> = Vec::with_capacity(k + 1);
    omegas.push(rho.matrix().clone());
    for f in f_family {
        let last = omegas.last().expect("nonempty");
        omegas.push(f.apply_matrix(last)?);
    }

    // lhs = (prod f - prod g)(rho)
    let mut g_applied = rho.matrix().clone();
    for g in g_family {
        g_applied = g.apply_matrix(&g_applied)?;
    }
    let lhs = omegas.last().expect("nonempty") - &g_applied;

    // rhs = sum_l (g_k ... g_{l+1}) (f_l - g_l)(omega_{l-1})
    let mut rhs = CMat::zeros(lhs.raw_dim());
    for l in 0..k {
        let mut term = f_family[l].apply_matrix(&omegas[l])? - g_family[l].apply_matrix(&omegas[l])?;
        for g in &g_family[l + 1..] {
            term = g.apply_matrix(&term)?;
        }
        rhs = rhs + term;
    }
    Ok((&lhs - &rhs).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}
