//! The bound formulas.
//!
//! Conventions shared by all evaluators:
//! - `epow(a, m) = a^m e^a / m!`.
//! - `log_eps(x, ε) = ln x / ln(1/ε)` for `ε ∈ (0,1)`, the base-1/ε
//!   logarithm. This is the sign under which `ε^{log_eps(γ)} = 1/γ`, the
//!   identity every window-count estimate rests on, and the only sign under
//!   which the bounds decay in their sharp regimes.
//! - `A = 1 + 1/2π`; the recurring tail term is `A^{-(x/log_eps(x) - 2)}`.

use super::BoundReport;
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `⟨a⟩_m = a^m e^a / m!`, computed in log-space for large `a`.
pub fn epow(a: f64, m: u32) -> f64 {
    if a < 0.0 || !a.is_finite() {
        return f64::NAN;
    }
    if a == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let ln_fact: f64 = (1..=m as u64).map(|k| (k as f64).ln()).sum();
    let ln_val = m as f64 * a.ln() + a - ln_fact;
    if ln_val > 700.0 {
        f64::INFINITY
    } else {
        ln_val.exp()
    }
}

/// Base-1/ε logarithm; domain `x > 0`, `ε ∈ (0,1)`.
pub fn log_eps(x: f64, eps: f64) -> Result<f64> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!("log_eps argument {x} <= 0")));
    }
    Ok(x.ln() / (1.0 / eps).ln())
}

/// `A^{x/log_eps(x) - 2}` with `A = 1 + 1/2π`.
fn a_tail(x: f64, eps: f64) -> Result<f64> {
    let lg = log_eps(x, eps)?;
    if lg <= 0.0 {
        // x <= 1: the window bookkeeping degenerates
        return Err(Error::Domain(format!("log_eps({x}) = {lg} <= 0")));
    }
    Ok((1.0 + 1.0 / TWO_PI).powf(x / lg - 2.0))
}

/// `2^m · h^m`, the commutator power bound for Hamiltonians.
pub fn commutator_power_norm_bound(h_norm: f64, m: u32) -> f64 {
    (2.0 * h_norm).powi(m as i32)
}

/// Interrupted-evolution sandwich bound
/// `k·(⟨t‖L‖/k⟩₂ + ⟨t‖ELE‖/k⟩₂)` for `k` equal steps of total time `t`.
pub fn hsandwich_bound(k: u64, t_total: f64, l_norm: f64, ele_norm: f64) -> Result<BoundReport> {
    if k < 1 {
        return Err(Error::Domain("k >= 1 required".into()));
    }
    if t_total < 0.0 || l_norm < 0.0 || ele_norm < 0.0 {
        return Err(Error::Domain("negative time or norm".into()));
    }
    let kf = k as f64;
    let value = kf * (epow(t_total * l_norm / kf, 2) + epow(t_total * ele_norm / kf, 2));
    let mut r = BoundReport::new(value);
    r.echo("k", kf);
    r.echo("t_total", t_total);
    r.echo("l_norm", l_norm);
    r.echo("ele_norm", ele_norm);
    Ok(r)
}

/// `min{π²/(4k) · e^{π/2k}, 1}`, the interrupted two-qubit rotation bound.
pub fn phi_k_bound(k: u64) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("k >= 1 required".into()));
    }
    let kf = k as f64;
    let pi = std::f64::consts::PI;
    Ok((pi * pi / (4.0 * kf) * (pi / (2.0 * kf)).exp()).min(1.0))
}

/// Multiplicative entropy-comparison constant
/// `β_{c,ζ} ≥ [1 − 2ζ(1+ζ)(c−1)²/(c(ln c − 1)+1) − 4ζ − ζ²] / [1 + ζc + 2ζ²(c−1)]`.
///
/// May go negative for large ζ; callers treat a nonpositive value as
/// non-binding.
pub fn beta_lower(c: f64, zeta: f64) -> Result<f64> {
    if c.is_nan() || c <= 1.0 {
        return Err(Error::Domain(format!("c = {c} must exceed 1")));
    }
    if !(0.0..1.0).contains(&zeta) {
        return Err(Error::Domain(format!("zeta = {zeta} outside [0,1)")));
    }
    let pre = 1.0 / (1.0 + zeta * c + 2.0 * zeta * zeta * (c - 1.0));
    let inner = 1.0
        - 2.0 * zeta * (1.0 + zeta) * (c - 1.0).powi(2) / (c * (c.ln() - 1.0) + 1.0)
        - 4.0 * zeta
        - zeta * zeta;
    Ok(pre * inner)
}

/// Windowed interruption bound for channels `cp`-dominated below by
/// `(1−ε)E` over any `⌈k/γ⌉` consecutive factors:
/// `(k + k mod q)(⟨‖L‖/k⟩₂ + ⟨‖ELE‖/k⟩₂)
///   + q[(q/γ)(⟨‖L‖/q⟩₁ + ε) + A^{−((γ/q)/log_eps(γ/q) − 2)}]`.
pub fn epsultimate_bound(
    k: u64,
    q: u64,
    gamma: f64,
    eps: f64,
    l_norm: f64,
    ele_norm: f64,
) -> Result<BoundReport> {
    if k < 1 || q < 1 || q > k {
        return Err(Error::Domain(format!("need 1 <= q <= k, got k={k} q={q}")));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    if gamma <= 0.0 || l_norm < 0.0 || ele_norm < 0.0 {
        return Err(Error::Domain("gamma must be positive, norms nonnegative".into()));
    }
    let (kf, qf) = (k as f64, q as f64);
    let head = (k + k % q) as f64 * (epow(l_norm / kf, 2) + epow(ele_norm / kf, 2));
    let x = gamma / qf;
    let mut r = BoundReport::new(f64::INFINITY);
    r.echo("k", kf);
    r.echo("q", qf);
    r.echo("gamma", gamma);
    r.echo("eps", eps);
    r.echo("l_norm", l_norm);
    r.echo("ele_norm", ele_norm);
    let a_e = 1.0 + 1.0 / TWO_PI;
    match (log_eps(x, eps), a_tail(x, eps)) {
        (Ok(lg), Ok(tail)) if lg > 0.0 => {
            r.value = head + qf * ((qf / gamma) * (epow(l_norm / qf, 1) + eps) + 1.0 / tail);
            r.log_ge(
                "(gamma/q) / (log_eps(gamma/q) + 2) >= (1 + 1/2pi) e ||L||/q + 2",
                x / (lg + 2.0),
                a_e * std::f64::consts::E * l_norm / qf + 2.0,
            );
        }
        _ => {
            r.value = head + qf * ((qf / gamma) * (epow(l_norm / qf, 1) + eps) + f64::INFINITY);
            r.fail("log_eps(gamma/q) > 0 (window count well defined)", x, 1.0);
        }
    }
    Ok(r)
}

/// Discrete-window form: `g` consecutive channels dominate `(1−ε)E`;
/// `(k + k mod w)(⟨‖L‖/k⟩₂ + ⟨‖ELE‖/k⟩₂)
///   + w[(gw/k)(⟨‖L‖/w⟩₁ + ε) + A^{−((k/gw)/log_eps(k/gw) − 2)}]`.
///
/// Equals [`epsultimate_bound`] with `γ = (k + k mod w)/g`, `q = w` whenever
/// `w` divides `k`.
pub fn discretefinal_bound(
    k: u64,
    g: u64,
    w: u64,
    eps: f64,
    l_norm: f64,
    ele_norm: f64,
) -> Result<BoundReport> {
    if k < 1 || g < 1 || w < 1 || w > k {
        return Err(Error::Domain(format!("need 1 <= w <= k and g >= 1, got k={k} g={g} w={w}")));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    let (kf, gf, wf) = (k as f64, g as f64, w as f64);
    let head = (k + k % w) as f64 * (epow(l_norm / kf, 2) + epow(ele_norm / kf, 2));
    let x = kf / (gf * wf);
    let mut r = BoundReport::new(f64::INFINITY);
    r.echo("k", kf);
    r.echo("g", gf);
    r.echo("w", wf);
    r.echo("eps", eps);
    r.echo("l_norm", l_norm);
    r.echo("ele_norm", ele_norm);
    let a_e = 1.0 + 1.0 / TWO_PI;
    match (log_eps(x, eps), a_tail(x, eps)) {
        (Ok(lg), Ok(tail)) if lg > 0.0 => {
            r.value = head + wf * ((gf * wf / kf) * (epow(l_norm / wf, 1) + eps) + 1.0 / tail);
            r.log_ge(
                "(k/gw) / (log_eps(k/gw) + 2) >= (1 + 1/2pi) e ||L||/w + 2",
                x / (lg + 2.0),
                a_e * std::f64::consts::E * l_norm / wf + 2.0,
            );
        }
        _ => {
            r.value = head + wf * ((gf * wf / kf) * (epow(l_norm / wf, 1) + eps) + f64::INFINITY);
            r.fail("log_eps(k/gw) > 0 (window count well defined)", x, 1.0);
        }
    }
    Ok(r)
}

/// Continuous-limit form for a Lindbladian whose semigroup dominates
/// `(1−ε)E` at inverse rate γ:
/// `w[(w/γ)(⟨‖L‖/w⟩₁ + ε) + A^{−((γ/w)/log_eps(γ/w) − 2)}]`.
pub fn ctsfinal_bound(gamma: f64, w: u64, eps: f64, l_norm: f64) -> Result<BoundReport> {
    if w < 1 {
        return Err(Error::Domain("w >= 1 required".into()));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    if gamma <= 0.0 || l_norm < 0.0 {
        return Err(Error::Domain("gamma must be positive, l_norm nonnegative".into()));
    }
    let wf = w as f64;
    let x = gamma / wf;
    let mut r = BoundReport::new(f64::INFINITY);
    r.echo("gamma", gamma);
    r.echo("w", wf);
    r.echo("eps", eps);
    r.echo("l_norm", l_norm);
    let a_e = 1.0 + 1.0 / TWO_PI;
    match (log_eps(gamma, eps), a_tail(x, eps)) {
        (Ok(lg), Ok(tail)) if lg > 0.0 => {
            r.value = wf * ((wf / gamma) * (epow(l_norm / wf, 1) + eps) + 1.0 / tail);
            r.log_ge(
                "gamma / (log_eps(gamma) + 2) >= (1 + 1/2pi) e ||L||/w + 2",
                gamma / (lg + 2.0),
                a_e * std::f64::consts::E * l_norm / wf + 2.0,
            );
        }
        _ => {
            r.value = wf * ((wf / gamma) * (epow(l_norm / wf, 1) + eps) + f64::INFINITY);
            r.fail("log_eps(gamma) > 0 (window count well defined)", gamma, 1.0);
        }
    }
    Ok(r)
}

/// Which form of the decay-driven Zeno bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayKind {
    Continuous,
    /// Per-step decay over `k` discrete interruptions.
    Discrete { k: u64 },
}

/// Zeno bound driven by a measured decay rate λ with prefactor `b`:
/// sets `γ = λ/(ln(c_ε b/ε)·w)` and evaluates the continuous or discrete
/// displayed bound; all derived intermediates are echoed.
#[allow(clippy::too_many_arguments)]
pub fn zfromdecay_bound(
    kind: DecayKind,
    lambda: f64,
    b: f64,
    eps: f64,
    c_eps: f64,
    w: u64,
    l_norm: f64,
    ele_norm: f64,
) -> Result<BoundReport> {
    if w < 1 {
        return Err(Error::Domain("w >= 1 required".into()));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    if lambda <= 0.0 || b <= 0.0 || c_eps <= 0.0 {
        return Err(Error::Domain("lambda, b, c_eps must be positive".into()));
    }
    let wf = w as f64;
    let log_arg = c_eps * b / eps;
    if log_arg <= 1.0 {
        return Err(Error::Domain(format!("ln(c_eps b / eps) needs c_eps b/eps > 1, got {log_arg}")));
    }
    let gamma = lambda / (log_arg.ln() * wf);
    let mut r = BoundReport::new(f64::INFINITY);
    r.echo("lambda", lambda);
    r.echo("b", b);
    r.echo("eps", eps);
    r.echo("c_eps", c_eps);
    r.echo("w", wf);
    r.echo("l_norm", l_norm);
    r.echo("ele_norm", ele_norm);
    r.echo("gamma", gamma);

    let a_e = 1.0 + 1.0 / TWO_PI;
    let hyp = |r: &mut BoundReport, g: f64| {
        match log_eps(g, eps) {
            Ok(lg) if lg > 0.0 => {
                r.log_ge(
                    "gamma log_eps(gamma) >= (1 + 1/2pi) e ||L||/w + 2",
                    g * lg,
                    a_e * std::f64::consts::E * l_norm / wf + 2.0,
                );
            }
            _ => r.fail("log_eps(gamma) > 0 (window count well defined)", g, 1.0),
        }
    };

    match kind {
        DecayKind::Continuous => {
            match a_tail(gamma, eps) {
                Ok(tail) => {
                    r.echo("a_gamma", tail);
                    r.value = wf * ((1.0 / gamma) * (epow(l_norm / wf, 1) + eps) + 1.0 / tail);
                }
                Err(_) => {
                    r.fail("a(gamma) well defined", gamma, 1.0);
                }
            }
            hyp(&mut r, gamma);
        }
        DecayKind::Discrete { k } => {
            if k < 1 {
                return Err(Error::Domain("k >= 1 required for the discrete kind".into()));
            }
            let kf = k as f64;
            r.echo("k", kf);
            let head = (k + k % w) as f64 * (epow(l_norm / kf, 2) + epow(ele_norm / kf, 2));
            let cells = (1.0 / gamma).ceil().max(1.0);
            r.echo("ceil_inv_gamma", cells);
            match a_tail(kf / cells, eps) {
                Ok(tail) => {
                    r.echo("a_k_over_cells", tail);
                    r.value = head
                        + wf * ((cells / kf) * (epow(l_norm / wf, 1) + eps) + 1.0 / tail);
                }
                Err(_) => {
                    r.fail("a(k/ceil(1/gamma)) well defined", kf / cells, 1.0);
                }
            }
            hyp(&mut r, gamma);
        }
    }
    Ok(r)
}

/// Cap on the combined decay rate given strong stochastic decay:
/// `λ ≤ (2‖L‖(e+ε)/α) · √(2 ln(c_ε b₀/ε)/λ₀) · ln(2b/α)`.
#[allow(clippy::too_many_arguments)]
pub fn zvscmlsi_cap(
    lambda0: f64,
    b0: f64,
    b: f64,
    eps: f64,
    c_eps: f64,
    alpha: f64,
    l_norm: f64,
) -> Result<BoundReport> {
    if lambda0 <= 0.0 || alpha <= 0.0 {
        return Err(Error::Domain("lambda0 and alpha must be positive".into()));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    if b0 <= 0.0 || b <= 0.0 || c_eps <= 0.0 || l_norm < 0.0 {
        return Err(Error::Domain("b0, b, c_eps must be positive".into()));
    }
    let log_arg = c_eps * b0 / eps;
    if log_arg <= 1.0 {
        return Err(Error::Domain(format!("ln(c_eps b0/eps) needs argument > 1, got {log_arg}")));
    }
    let value = (2.0 * l_norm * (std::f64::consts::E + eps) / alpha)
        * (2.0 * log_arg.ln() / lambda0).sqrt()
        * (2.0 * b / alpha).ln();
    let mut r = BoundReport::new(value);
    r.echo("lambda0", lambda0);
    r.echo("b0", b0);
    r.echo("b", b);
    r.echo("eps", eps);
    r.echo("c_eps", c_eps);
    r.echo("alpha", alpha);
    r.echo("l_norm", l_norm);
    // alpha >= 2b makes ln(2b/alpha) <= 0: degenerate cap
    r.log_ge("alpha < 2b (cap non-degenerate)", 2.0 * b - alpha, f64::MIN_POSITIVE);
    Ok(r)
}

/// Interruption by `(1−ε)E`-dominating channels with explicit small-ε form:
/// `[k(1−ε+2√(ln k/k))/(1−b)²]·(⟨t‖ELE‖/k⟩₂(1+2b) + ⟨t‖L‖/k⟩₂(1+5b))
///   + 4ε⟨t‖L‖/k⟩₁/(1−ε)²` with `b = ε·e^{t‖L‖/k}`.
pub fn epsilongeneral_bound(
    k: u64,
    t: f64,
    eps: f64,
    l_norm: f64,
    ele_norm: f64,
) -> Result<BoundReport> {
    if k < 2 {
        return Err(Error::Domain("k > 1 required".into()));
    }
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    if t < 0.0 || l_norm < 0.0 || ele_norm < 0.0 {
        return Err(Error::Domain("negative time or norm".into()));
    }
    let kf = k as f64;
    let b = eps * (t * l_norm / kf).exp();
    let mut r = BoundReport::new(f64::INFINITY);
    r.echo("k", kf);
    r.echo("t", t);
    r.echo("eps", eps);
    r.echo("l_norm", l_norm);
    r.echo("ele_norm", ele_norm);
    r.echo("b", b);
    r.log_ge("t ||L|| / k <= ln(1/eps)  (b < 1)", (1.0 / eps).ln(), t * l_norm / kf);
    if b < 1.0 {
        let pre = kf * (1.0 - eps + 2.0 * (kf.ln() / kf).sqrt()) / (1.0 - b).powi(2);
        r.value = pre
            * (epow(t * ele_norm / kf, 2) * (1.0 + 2.0 * b)
                + epow(t * l_norm / kf, 2) * (1.0 + 5.0 * b))
            + 4.0 * eps * epow(t * l_norm / kf, 1) / (1.0 - eps).powi(2);
    }
    Ok(r)
}
