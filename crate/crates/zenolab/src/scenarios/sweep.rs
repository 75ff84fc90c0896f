//! Parameter sweeps and initial-deficit measurements.

use crate::metrics::{
    diamond_bracket, relative_entropy_mats, trace_distance_mats, DiamondConfig, LogBase,
};
use crate::opalg::{partial_trace, DensityMatrix, OperatorMatrix, Superoperator};
use crate::semigroup::{assemble, channel_at, fixed_point_split, LindbladSpec};
use crate::{Error, Result, Tolerances};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Metrics a sweep can evaluate per grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Relative entropy of the full state to the model's fixed point, bits.
    RelEntropy,
    /// Relative entropy of the last-factor marginal to its maximally mixed
    /// state, bits (the protected-qubit view of the two-qubit family).
    RelEntropyMarginalB,
    /// Trace distance of the full state to the model's fixed point.
    TraceDist,
    /// Diamond-norm bracket between the evolved channel and the fixed-point
    /// projector; rows carry both endpoints.
    Diamond,
    /// Process fidelity between the evolved channel and the identity.
    ProcFid,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::RelEntropy => "rel-entropy",
            Metric::RelEntropyMarginalB => "rel-entropy-b",
            Metric::TraceDist => "trace-dist",
            Metric::Diamond => "diamond",
            Metric::ProcFid => "proc-fid",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rel-entropy" => Ok(Metric::RelEntropy),
            "rel-entropy-b" => Ok(Metric::RelEntropyMarginalB),
            "trace-dist" => Ok(Metric::TraceDist),
            "diamond" => Ok(Metric::Diamond),
            "proc-fid" => Ok(Metric::ProcFid),
            other => Err(Error::Domain(format!("unknown metric '{other}'"))),
        }
    }
}

/// Sweep axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    Gamma,
    Time,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Gamma => "gamma",
            SweepAxis::Time => "t",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub param_value: f64,
    pub t: f64,
    pub gamma: f64,
    pub metric: String,
    pub value_lower: f64,
    /// Equal to `value_lower` for point metrics; the bracket upper endpoint
    /// for `diamond`.
    pub value_upper: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub model_id: String,
    pub axis: String,
    pub rows: Vec<SweepRow>,
    pub rng_seed: u64,
    pub wall_time_s: f64,
}

fn eval_point(
    spec: &LindbladSpec,
    t: f64,
    gamma: f64,
    rho: &DensityMatrix,
    metrics: &[Metric],
    seed: u64,
    tol: &Tolerances,
) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    let run = || -> Result<Vec<(Metric, f64, f64)>> {
        let l = assemble(spec)?;
        let phi = channel_at(&l, t, tol)?;
        let evolved = phi.apply(rho.op())?;
        let evolved_sym = {
            let adjm = crate::opalg::adjoint(evolved.matrix());
            (evolved.matrix() + &adjm).mapv(|z| z * 0.5)
        };
        let split = fixed_point_split(&l, tol)?;
        let fixed = split.projector.apply(rho.op())?;
        let mut out = Vec::new();
        for m in metrics {
            let (lo, hi) = match m {
                Metric::RelEntropy => {
                    let v = relative_entropy_mats(&evolved_sym, fixed.matrix(), LogBase::Two, tol.psd)?;
                    (v, v)
                }
                Metric::RelEntropyMarginalB => {
                    let last = spec.space().num_factors() - 1;
                    let ev_op = OperatorMatrix::new(spec.space().clone(), evolved_sym.clone())?;
                    let marg = partial_trace(&ev_op, &[last])?;
                    let d = marg.dim();
                    let mixed = crate::CMat::eye(d).mapv(|z| z / d as f64);
                    let v = relative_entropy_mats(marg.matrix(), &mixed, LogBase::Two, tol.psd)?;
                    (v, v)
                }
                Metric::TraceDist => {
                    let v = trace_distance_mats(&evolved_sym, fixed.matrix())?;
                    (v, v)
                }
                Metric::Diamond => {
                    let limit = split.rotating_limit(t)?;
                    let b = diamond_bracket(
                        &phi.sub(&limit)?,
                        &DiamondConfig { seed, ..Default::default() },
                    )?;
                    (b.lower, b.upper)
                }
                Metric::ProcFid => {
                    let id = Superoperator::identity(spec.space());
                    let v = crate::metrics::process_fidelity(&phi, &id)?;
                    (v, v)
                }
            };
            out.push((*m, lo, hi));
        }
        Ok(out)
    };
    match run() {
        Ok(vals) => {
            for (m, lo, hi) in vals {
                rows.push(SweepRow {
                    param_value: f64::NAN,
                    t,
                    gamma,
                    metric: m.name().to_string(),
                    value_lower: lo,
                    value_upper: hi,
                    error: None,
                });
            }
        }
        Err(e) => {
            for m in metrics {
                rows.push(SweepRow {
                    param_value: f64::NAN,
                    t,
                    gamma,
                    metric: m.name().to_string(),
                    value_lower: f64::NAN,
                    value_upper: f64::NAN,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    rows
}

/// Sweep a builder over axis values; rows are sorted by parameter value and
/// deterministic given the seed regardless of thread count.
#[allow(clippy::too_many_arguments)]
pub fn sweep<F>(
    model_id: &str,
    builder: F,
    axis: SweepAxis,
    values: &[f64],
    t: f64,
    gamma: f64,
    rho: &DensityMatrix,
    metrics: &[Metric],
    seed: u64,
    tol: &Tolerances,
) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<LindbladSpec> + Sync,
{
    if values.is_empty() {
        return Err(Error::Domain("empty sweep grid".into()));
    }
    let start = std::time::Instant::now();
    let points: Vec<(usize, f64)> = values.iter().cloned().enumerate().collect();
    let mut indexed: Vec<(usize, Vec<SweepRow>)> = points
        .par_iter()
        .map(|&(i, v)| {
            let (tv, gv) = match axis {
                SweepAxis::Gamma => (t, v),
                SweepAxis::Time => (v, gamma),
            };
            let rows = match builder(gv) {
                Ok(spec) => {
                    let mut rows = eval_point(&spec, tv, gv, rho, metrics, seed ^ i as u64, tol);
                    for r in &mut rows {
                        r.param_value = v;
                    }
                    rows
                }
                Err(e) => metrics
                    .iter()
                    .map(|m| SweepRow {
                        param_value: v,
                        t: tv,
                        gamma: gv,
                        metric: m.name().to_string(),
                        value_lower: f64::NAN,
                        value_upper: f64::NAN,
                        error: Some(e.to_string()),
                    })
                    .collect(),
            };
            (i, rows)
        })
        .collect();
    indexed.sort_by_key(|(i, _)| *i);
    let rows: Vec<SweepRow> = indexed.into_iter().flat_map(|(_, r)| r).collect();
    Ok(SweepResult {
        model_id: model_id.to_string(),
        axis: axis.name().to_string(),
        rows,
        rng_seed: seed,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Entropy deficits `D₀ − D_t` in bits at the sampled times, with
/// `D_t = D(Φᵗρ ‖ Eρ)` against the fixed point of the assembled Lindbladian.
pub fn initial_deficit(
    spec: &LindbladSpec,
    rho: &DensityMatrix,
    t_samples: &[f64],
    tol: &Tolerances,
) -> Result<Vec<(f64, f64)>> {
    let l = assemble(spec)?;
    let split = fixed_point_split(&l, tol)?;
    let fixed = split.projector.apply(rho.op())?;
    let d0 = relative_entropy_mats(rho.matrix(), fixed.matrix(), LogBase::Two, tol.psd)?;
    if !d0.is_finite() {
        return Err(Error::Domain("initial relative entropy is infinite".into()));
    }
    if d0 <= 0.0 {
        return Err(Error::Domain("initial relative entropy must be positive".into()));
    }
    let mut out = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let rt = crate::semigroup::evolve(&l, rho, t, tol)?;
        let dt = relative_entropy_mats(rt.matrix(), fixed.matrix(), LogBase::Two, tol.psd)?;
        out.push((t, d0 - dt));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{ket_from_string, DensityMatrix};
    use crate::scenarios::{build_basis_drift, build_chain, build_two_qubit};

    #[test]
    fn single_point_sweep_equals_direct_evaluation() {
        let tol = Tolerances::default();
        let spec = build_two_qubit(1.0, &tol).unwrap();
        let (space, ket) = ket_from_string("00").unwrap();
        let rho = DensityMatrix::pure(&space, &ket).unwrap();
        let res = sweep(
            "twoqubit",
            |g| build_two_qubit(g, &tol),
            SweepAxis::Gamma,
            &[1.0],
            0.7,
            1.0,
            &rho,
            &[Metric::RelEntropy],
            7,
            &tol,
        )
        .unwrap();
        assert_eq!(res.rows.len(), 1);
        let l = assemble(&spec).unwrap();
        let rt = crate::semigroup::evolve(&l, &rho, 0.7, &tol).unwrap();
        let split = fixed_point_split(&l, &tol).unwrap();
        let fixed = split.projector.apply(rho.op()).unwrap();
        let direct =
            relative_entropy_mats(rt.matrix(), fixed.matrix(), LogBase::Two, 1e-10).unwrap();
        assert!((res.rows[0].value_lower - direct).abs() < 1e-9);
        assert!(res.rows[0].error.is_none());
    }

    #[test]
    fn chain_gamma_sweep_is_non_monotone() {
        let tol = Tolerances::default();
        let (space, ket) = ket_from_string("0000").unwrap();
        let rho = DensityMatrix::pure(&space, &ket).unwrap();
        let values: Vec<f64> = (0..9)
            .map(|i| 10f64.powf(-1.0 + 4.0 * i as f64 / 8.0))
            .collect();
        let res = sweep(
            "chain4",
            |g| build_chain(4, g, &tol),
            SweepAxis::Gamma,
            &values,
            0.5,
            1.0,
            &rho,
            &[Metric::RelEntropy],
            7,
            &tol,
        )
        .unwrap();
        let d: Vec<f64> = res.rows.iter().map(|r| r.value_lower).collect();
        let (imin, &dmin) =
            d.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        assert!(imin > 0 && imin < d.len() - 1, "minimum at an endpoint");
        assert!(d[0] - dmin >= 0.05, "left margin {}", d[0] - dmin);
        assert!(d[d.len() - 1] - dmin >= 0.05, "right margin {}", d[d.len() - 1] - dmin);
    }

    #[test]
    fn deficits_start_slowly() {
        let tol = Tolerances::default();
        // basis drift at gamma = 1, rho = |0><0|
        let spec = build_basis_drift(1.0, &tol).unwrap();
        let rho = DensityMatrix::basis_state(spec.space(), 0).unwrap();
        let defs = initial_deficit(&spec, &rho, &[1e-3, 2e-3], &tol).unwrap();
        assert!(defs[0].1 >= 0.0);
        assert!(defs[0].1 <= 1e-4, "deficit at 1e-3: {}", defs[0].1);
        let ratio = defs[1].1 / defs[0].1;
        assert!(ratio >= 3.5, "onset ratio {ratio}");
        // t = 0 -> deficit 0
        let z = initial_deficit(&spec, &rho, &[0.0], &tol).unwrap();
        assert!(z[0].1.abs() < 1e-12);
        // infinite D0 is an error: basis-drift from a pure fixed-point state
        // has finite D0, so use a state orthogonal to the fixed point support
        // (not constructible here: complete mixture fixed point is full rank),
        // so check the positivity error path instead
        let mixed = DensityMatrix::maximally_mixed(spec.space());
        assert!(initial_deficit(&spec, &mixed, &[0.1], &tol).is_err());
    }

    #[test]
    fn sweep_is_deterministic_across_thread_counts() {
        let tol = Tolerances::default();
        let (space, ket) = ket_from_string("00").unwrap();
        let rho = DensityMatrix::pure(&space, &ket).unwrap();
        let values = [0.1, 1.0, 10.0];
        let run = || {
            sweep(
                "twoqubit",
                |g| build_two_qubit(g, &tol),
                SweepAxis::Gamma,
                &values,
                0.5,
                1.0,
                &rho,
                &[Metric::RelEntropy, Metric::TraceDist],
                42,
                &tol,
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        for (ra, rb) in a.rows.iter().zip(b.rows.iter()) {
            assert_eq!(ra.value_lower.to_bits(), rb.value_lower.to_bits());
        }
    }
}
