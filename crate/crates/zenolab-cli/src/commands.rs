//! Subcommand implementations.

use crate::io::{emit, model_payload, CsvDoc, Provenance};
use crate::{CliError, DEFAULT_SEED};
use clap::{Args, Subcommand};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use zenolab::metrics::{diamond_bracket, process_fidelity, DiamondConfig};
use zenolab::opalg::{cmat_from_json, DensityMatrix, OperatorMatrix, Superoperator};
use zenolab::scenarios::{
    build_basis_drift, build_chain, build_phi_k, build_two_qubit, initial_deficit, sweep,
    two_qubit_e0, verify_revclsi, Metric, SweepAxis,
};
use zenolab::semigroup::{LindbladSpec, ModelFile};
use zenolab::zenobounds as zb;
use zenolab::{C64, Tolerances};

#[derive(Args)]
pub struct ModelSelect {
    /// Builtin model name: chain2..chain5, twoqubit, basisdrift, phik
    #[arg(long, conflicts_with = "model")]
    pub builtin: Option<String>,
    /// Path to a model JSON file
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Stochastic weight multiplier (builtin parameter gamma)
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

impl ModelSelect {
    fn resolve(&self, tol: &Tolerances) -> Result<(String, LindbladSpec, Vec<u8>), CliError> {
        if let Some(b) = &self.builtin {
            let spec = match b.as_str() {
                "twoqubit" => build_two_qubit(self.gamma, tol),
                "basisdrift" => build_basis_drift(self.gamma, tol),
                name if name.starts_with("chain") => {
                    let n: usize = name["chain".len()..]
                        .parse()
                        .map_err(|_| zenolab::Error::Model(format!("bad builtin '{name}'")))?;
                    build_chain(n, self.gamma, tol)
                }
                other => Err(zenolab::Error::Model(format!("unknown builtin '{other}'"))),
            }
            .map_err(|e| CliError::config(e.to_string()))?;
            let payload = model_payload(Some(b), None, &format!("gamma={}", self.gamma));
            Ok((b.clone(), spec, payload))
        } else if let Some(path) = &self.model {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("model file {}: {e}", path.display())))?;
            let spec = ModelFile::from_json(&text)
                .and_then(|m| m.build(tol))
                .and_then(|s| s.scale_weights(self.gamma))
                .map_err(|e| CliError::config(format!("model file {}: {e}", path.display())))?;
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let payload = model_payload(None, Some(&text), &format!("gamma={}", self.gamma));
            Ok((id, spec, payload))
        } else {
            Err(CliError::config("one of --builtin or --model is required"))
        }
    }
}

fn parse_values(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = |m: String| CliError::config(m);
    match parts.as_slice() {
        [kind, lo, hi, n] if *kind == "linspace" || *kind == "logspace" => {
            let lo: f64 = lo.parse().map_err(|_| bad(format!("bad grid bound '{lo}'")))?;
            let hi: f64 = hi.parse().map_err(|_| bad(format!("bad grid bound '{hi}'")))?;
            let n: usize = n.parse().map_err(|_| bad(format!("bad grid count '{n}'")))?;
            if n < 2 {
                return Err(bad("grid needs at least 2 points".into()));
            }
            if *kind == "logspace" && (lo <= 0.0 || hi <= 0.0) {
                return Err(bad("logspace needs positive bounds".into()));
            }
            Ok((0..n)
                .map(|i| {
                    let f = i as f64 / (n - 1) as f64;
                    if *kind == "linspace" {
                        lo + (hi - lo) * f
                    } else {
                        (lo.ln() + (hi.ln() - lo.ln()) * f).exp()
                    }
                })
                .collect())
        }
        _ => s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad(format!("bad grid value '{v}'"))))
            .collect(),
    }
}

fn parse_state(arg: &Option<String>, spec: &LindbladSpec) -> Result<DensityMatrix, CliError> {
    let tol = Tolerances::default();
    match arg {
        None => {
            DensityMatrix::basis_state(spec.space(), 0).map_err(|e| CliError::config(e.to_string()))
        }
        Some(s) if Path::new(s).exists() => {
            let text = std::fs::read_to_string(s)?;
            let mat = cmat_from_json(&text).map_err(|e| CliError::config(e.to_string()))?;
            let op = OperatorMatrix::new(spec.space().clone(), mat)
                .map_err(|e| CliError::config(e.to_string()))?;
            DensityMatrix::new(op, &tol).map_err(|e| CliError::config(e.to_string()))
        }
        Some(s) => {
            let (space, ket) =
                zenolab::opalg::ket_from_string(s).map_err(|e| CliError::config(e.to_string()))?;
            if &space != spec.space() {
                return Err(CliError::config(format!(
                    "ket '{s}' does not match the model's {} factors",
                    spec.space().num_factors()
                )));
            }
            DensityMatrix::pure(&space, &ket).map_err(|e| CliError::config(e.to_string()))
        }
    }
}

fn parse_metrics(list: &[String]) -> Result<Vec<Metric>, CliError> {
    if list.is_empty() {
        return Ok(vec![Metric::RelEntropy]);
    }
    list.iter().map(|m| Metric::parse(m).map_err(|e| CliError::config(e.to_string()))).collect()
}

// ---------------------------------------------------------------- simulate

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelSelect,
    /// Time grid: comma list, or linspace:lo:hi:n / logspace:lo:hi:n
    #[arg(long)]
    pub values: String,
    /// Metric (repeatable): rel-entropy | rel-entropy-b | trace-dist | diamond | proc-fid
    #[arg(long = "metric")]
    pub metrics: Vec<String>,
    /// Input state: ket string over 0,1,+,- or a density JSON file
    #[arg(long = "input-state")]
    pub input_state: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON rows instead of CSV
    #[arg(long)]
    pub json: bool,
}

pub fn run_simulate(a: SimulateArgs) -> Result<(), CliError> {
    let tol = Tolerances::default();
    let (id, spec, payload) = a.model.resolve(&tol)?;
    let rho = parse_state(&a.input_state, &spec)?;
    let metrics = parse_metrics(&a.metrics)?;
    let ts = parse_values(&a.values)?;
    let res = sweep(
        &id,
        |g| spec.scale_weights(g / a.model.gamma.max(f64::MIN_POSITIVE)),
        SweepAxis::Time,
        &ts,
        0.0,
        a.model.gamma,
        &rho,
        &metrics,
        a.seed,
        &tol,
    )?;
    let mut csv = CsvDoc::new(&["t", "metric", "value"]);
    for r in &res.rows {
        if let Some(err) = &r.error {
            return Err(CliError::runtime(format!("t={}: {err}", r.t)));
        }
        csv.row(vec![r.t.into(), r.metric.clone().into(), r.value_lower.into()]);
    }
    let prov = Provenance::new(a.seed, tol, &payload);
    emit(a.out.as_deref(), &csv.render_as(a.json), &prov)
}

// ------------------------------------------------------------------- sweep

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelSelect,
    /// Axis: gamma | t | k (k only for the phik builtin)
    #[arg(long)]
    pub axis: String,
    #[arg(long)]
    pub values: String,
    /// Evolution time for gamma sweeps
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long = "metric")]
    pub metrics: Vec<String>,
    #[arg(long = "input-state")]
    pub input_state: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON rows instead of CSV
    #[arg(long)]
    pub json: bool,
}

pub fn run_sweep(a: SweepArgs) -> Result<(), CliError> {
    let tol = Tolerances::default();
    let values = parse_values(&a.values)?;
    let mut csv = CsvDoc::new(&["metric", "model_id", "t", "gamma", "value_lower", "value_upper"]);

    if a.axis == "k" {
        if a.model.builtin.as_deref() != Some("phik") {
            return Err(CliError::config("axis k requires --builtin phik"));
        }
        let e0 = two_qubit_e0()?;
        let id = Superoperator::identity(e0.in_space());
        let metrics = if a.metrics.is_empty() { vec!["diamond".to_string()] } else { a.metrics.clone() };
        for &kv in &values {
            let k = kv.round() as usize;
            let phi = build_phi_k(k.max(1))?;
            for m in &metrics {
                let (lo, hi) = match m.as_str() {
                    "diamond" => {
                        let b = diamond_bracket(
                            &phi.sub(&e0)?,
                            &DiamondConfig { seed: a.seed, ..Default::default() },
                        )?;
                        (b.lower, b.upper)
                    }
                    "proc-fid" => {
                        let v = process_fidelity(&phi, &id)?;
                        (v, v)
                    }
                    other => {
                        return Err(CliError::config(format!(
                            "metric '{other}' not defined for the phik family"
                        )))
                    }
                };
                csv.row(vec![
                    m.clone().into(),
                    "phik".into(),
                    (k as f64).into(),
                    f64::NAN.into(),
                    lo.into(),
                    hi.into(),
                ]);
            }
        }
        let prov = Provenance::new(a.seed, tol, &model_payload(Some("phik"), None, ""));
        return emit(a.out.as_deref(), &csv.render_as(a.json), &prov);
    }

    let (id, spec, payload) = a.model.resolve(&tol)?;
    let rho = parse_state(&a.input_state, &spec)?;
    let metrics = parse_metrics(&a.metrics)?;
    let axis = match a.axis.as_str() {
        "gamma" => SweepAxis::Gamma,
        "t" => SweepAxis::Time,
        other => return Err(CliError::config(format!("unknown axis '{other}'"))),
    };
    let base = spec.scale_weights(1.0 / a.model.gamma.max(f64::MIN_POSITIVE))?;
    let res = sweep(
        &id,
        |g| base.scale_weights(g),
        axis,
        &values,
        a.t,
        a.model.gamma,
        &rho,
        &metrics,
        a.seed,
        &tol,
    )?;
    for r in &res.rows {
        csv.row(vec![
            r.metric.clone().into(),
            res.model_id.clone().into(),
            r.t.into(),
            r.gamma.into(),
            r.value_lower.into(),
            r.value_upper.into(),
        ]);
    }
    let prov = Provenance::new(a.seed, tol, &payload);
    emit(a.out.as_deref(), &csv.render_as(a.json), &prov)
}

// ----------------------------------------------------------------- deficit

#[derive(Args)]
pub struct DeficitArgs {
    #[command(flatten)]
    pub model: ModelSelect,
    /// Time grid
    #[arg(long)]
    pub values: String,
    #[arg(long = "input-state")]
    pub input_state: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON rows instead of CSV
    #[arg(long)]
    pub json: bool,
}

pub fn run_deficit(a: DeficitArgs) -> Result<(), CliError> {
    let tol = Tolerances::default();
    let (_, spec, payload) = a.model.resolve(&tol)?;
    let rho = parse_state(&a.input_state, &spec)?;
    let ts = parse_values(&a.values)?;
    let defs = initial_deficit(&spec, &rho, &ts, &tol)?;
    let mut csv = CsvDoc::new(&["t", "deficit_bits"]);
    for (t, d) in defs {
        csv.row(vec![t.into(), d.into()]);
    }
    let prov = Provenance::new(a.seed, tol, &payload);
    emit(a.out.as_deref(), &csv.render_as(a.json), &prov)
}

// ------------------------------------------------------------------ verify

#[derive(Args)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub which: VerifyKind,
}

#[derive(Subcommand)]
pub enum VerifyKind {
    /// Reverse decay inequality margins on random pure states.
    Revclsi {
        #[command(flatten)]
        model: ModelSelect,
        /// Time grid
        #[arg(long, default_value = "0.1,0.5,1,2")]
        values: String,
        /// Number of random pure input states
        #[arg(long, default_value_t = 10)]
        states: usize,
        /// Index-constant cap in the exponent (defaults to d^2)
        #[arg(long)]
        constant: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit JSON rows instead of CSV
        #[arg(long)]
        json: bool,
    },
    /// Discretized per-interval decay estimate.
    LambdaTau {
        #[command(flatten)]
        model: ModelSelect,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 2)]
        measures: usize,
        #[arg(long = "grid-points", default_value_t = 16)]
        grid_points: usize,
        /// Base decay rate of the stochastic part
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run_verify(a: VerifyArgs) -> Result<(), CliError> {
    let tol = Tolerances::default();
    match a.which {
        VerifyKind::Revclsi { model, values, states, constant, seed, out, json } => {
            let (_, spec, payload) = model.resolve(&tol)?;
            let ts = parse_values(&values)?;
            let mut rng = zenolab::rng::rng_from_seed(seed);
            let d = spec.space().total_dim();
            let mut csv = CsvDoc::new(&["state", "t", "margin"]);
            for s in 0..states {
                let rho = DensityMatrix::new_hermitized(
                    OperatorMatrix::new(
                        spec.space().clone(),
                        zenolab::rng::random_pure_density(d, &mut rng),
                    )
                    .map_err(|e| CliError::runtime(e.to_string()))?,
                    &tol,
                )
                .map_err(|e| CliError::runtime(e.to_string()))?;
                for p in verify_revclsi(&spec, &rho, &ts, constant, &tol)? {
                    csv.row(vec![(s as f64).into(), p.t.into(), p.margin.into()]);
                }
            }
            let prov = Provenance::new(seed, tol, &payload);
            emit(out.as_deref(), &csv.render_as(json), &prov)
        }
        VerifyKind::LambdaTau { model, tau, measures, grid_points, lambda, seed, out } => {
            let (_, spec, payload) = model.resolve(&tol)?;
            let est = zenolab::scenarios::estimate_lambda_tau(
                &spec,
                tau,
                measures,
                grid_points,
                lambda,
                &tol,
            )?;
            let json = serde_json::json!({
                "lambda_tau": est.lambda_tau,
                "c": est.c,
                "zeta": est.zeta,
                "alpha": est.alpha,
                "beta": est.beta,
                "binding": est.binding,
            });
            let prov = Provenance::new(seed, tol, &payload);
            emit(out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()), &prov)
        }
    }
}

// ------------------------------------------------------------------- bound

#[derive(Args)]
pub struct BoundArgs {
    #[command(subcommand)]
    pub which: BoundKind,
}

#[derive(Args, Clone)]
pub struct BatchOut {
    /// CSV of parameter rows (headers must match the flag names)
    #[arg(long)]
    pub batch: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum BoundKind {
    /// min{pi^2/(4k) e^{pi/2k}, 1}
    PhiK {
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        io: BatchOut,
    },
    /// a^m e^a / m!
    Epow {
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        io: BatchOut,
    },
    /// 2^m h^m commutator power bound
    CommutatorPower {
        #[arg(long = "h-norm")]
        h_norm: Option<f64>,
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        io: BatchOut,
    },
    /// k(<t l/k>_2 + <t ele/k>_2)
    Hsandwich {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long = "l-norm")]
        l_norm: Option<f64>,
        #[arg(long = "ele-norm", default_value_t = 0.0)]
        ele_norm: f64,
        #[command(flatten)]
        io: BatchOut,
    },
    /// Multiplicative entropy comparison constant
    BetaLower {
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        zeta: Option<f64>,
        #[command(flatten)]
        io: BatchOut,
    },
    /// Windowed interruption bound
    Epsultimate {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "l-norm")]
        l_norm: Option<f64>,
        #[arg(long = "ele-norm", default_value_t = 0.0)]
        ele_norm: f64,
        #[command(flatten)]
        io: BatchOut,
    },
    /// Discrete-window bound
    Discretefinal {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        g: Option<u64>,
        #[arg(long)]
        w: Option<u64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "l-norm")]
        l_norm: Option<f64>,
        #[arg(long = "ele-norm", default_value_t = 0.0)]
        ele_norm: f64,
        #[command(flatten)]
        io: BatchOut,
    },
    /// Continuous-limit bound
    Ctsfinal {
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        w: Option<u64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "l-norm")]
        l_norm: Option<f64>,
        #[command(flatten)]
        io: BatchOut,
    },
    /// Decay-driven Zeno bound
    Zfromdecay {
        /// continuous | discrete
        #[arg(long, default_value = "continuous")]
        kind: String,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "c-eps")]
        c_eps: Option<f64>,
        #[arg(long)]
        w: Option<u64>,
        #[arg(long = "l-norm")]
        l_norm: Option<f64>,
        #[arg(long = "ele-norm", default_value_t = 0.0)]
        ele_norm: f64,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        io: BatchOut,
    },
    /// Inverse-sqrt cap on the combined decay rate
    ZvscmlsiCap {
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long)]
        b0: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "c-eps")]
        c_eps: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "l-norm")]
        l_norm: Option<f64>,
        #[command(flatten)]
        io: BatchOut,
    },
    /// General epsilon-interruption bound
    Epsilongeneral {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "l-norm")]
        l_norm: Option<f64>,
        #[arg(long = "ele-norm", default_value_t = 0.0)]
        ele_norm: f64,
        #[command(flatten)]
        io: BatchOut,
    },
}

fn need(p: &BTreeMap<String, f64>, key: &str) -> Result<f64, CliError> {
    p.get(key).copied().ok_or_else(|| CliError::config(format!("missing parameter '{key}'")))
}

fn need_u(p: &BTreeMap<String, f64>, key: &str) -> Result<u64, CliError> {
    Ok(need(p, key)?.round() as u64)
}

fn eval_bound(name: &str, p: &BTreeMap<String, f64>) -> Result<serde_json::Value, CliError> {
    let report = |r: zb::BoundReport| serde_json::to_value(&r).unwrap();
    let scalar = |v: f64, inputs: &BTreeMap<String, f64>| {
        serde_json::json!({
            "value": v,
            "hypotheses_ok": true,
            "hypothesis_log": [],
            "inputs_echo": inputs,
        })
    };
    let v = match name {
        "phi-k" => scalar(zb::phi_k_bound(need_u(p, "k")?)?, p),
        "epow" => scalar(zb::epow(need(p, "a")?, need_u(p, "m")? as u32), p),
        "commutator-power" => {
            scalar(zb::commutator_power_norm_bound(need(p, "h_norm")?, need_u(p, "m")? as u32), p)
        }
        "hsandwich" => report(zb::hsandwich_bound(
            need_u(p, "k")?,
            need(p, "t")?,
            need(p, "l_norm")?,
            need(p, "ele_norm")?,
        )?),
        "beta-lower" => scalar(zb::beta_lower(need(p, "c")?, need(p, "zeta")?)?, p),
        "epsultimate" => report(zb::epsultimate_bound(
            need_u(p, "k")?,
            need_u(p, "q")?,
            need(p, "gamma")?,
            need(p, "eps")?,
            need(p, "l_norm")?,
            need(p, "ele_norm")?,
        )?),
        "discretefinal" => report(zb::discretefinal_bound(
            need_u(p, "k")?,
            need_u(p, "g")?,
            need_u(p, "w")?,
            need(p, "eps")?,
            need(p, "l_norm")?,
            need(p, "ele_norm")?,
        )?),
        "ctsfinal" => report(zb::ctsfinal_bound(
            need(p, "gamma")?,
            need_u(p, "w")?,
            need(p, "eps")?,
            need(p, "l_norm")?,
        )?),
        "zfromdecay-continuous" => report(zb::zfromdecay_bound(
            zb::DecayKind::Continuous,
            need(p, "lambda")?,
            need(p, "b")?,
            need(p, "eps")?,
            need(p, "c_eps")?,
            need_u(p, "w")?,
            need(p, "l_norm")?,
            need(p, "ele_norm")?,
        )?),
        "zfromdecay-discrete" => report(zb::zfromdecay_bound(
            zb::DecayKind::Discrete { k: need_u(p, "k")? },
            need(p, "lambda")?,
            need(p, "b")?,
            need(p, "eps")?,
            need(p, "c_eps")?,
            need_u(p, "w")?,
            need(p, "l_norm")?,
            need(p, "ele_norm")?,
        )?),
        "zvscmlsi-cap" => report(zb::zvscmlsi_cap(
            need(p, "lambda0")?,
            need(p, "b0")?,
            need(p, "b")?,
            need(p, "eps")?,
            need(p, "c_eps")?,
            need(p, "alpha")?,
            need(p, "l_norm")?,
        )?),
        "epsilongeneral" => report(zb::epsilongeneral_bound(
            need_u(p, "k")?,
            need(p, "t")?,
            need(p, "eps")?,
            need(p, "l_norm")?,
            need(p, "ele_norm")?,
        )?),
        other => return Err(CliError::config(format!("unknown bound '{other}'"))),
    };
    Ok(v)
}

fn bound_output(
    name: &str,
    flags: BTreeMap<String, Option<f64>>,
    io: &BatchOut,
) -> Result<(), CliError> {
    let tol = Tolerances::default();
    let mut text = String::new();
    let payload: Vec<u8>;
    if let Some(batch) = &io.batch {
        let content = std::fs::read_to_string(batch)
            .map_err(|e| CliError::config(format!("batch file {}: {e}", batch.display())))?;
        payload = content.clone().into_bytes();
        let mut lines = content.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| CliError::config("empty batch file"))?
            .split(',')
            .map(|h| h.trim().replace('-', "_"))
            .collect();
        for (ln, line) in lines.enumerate() {
            let mut p: BTreeMap<String, f64> =
                flags.iter().filter_map(|(k, v)| v.map(|x| (k.clone(), x))).collect();
            for (h, field) in header.iter().zip(line.split(',')) {
                let v: f64 = field.trim().parse().map_err(|_| {
                    CliError::config(format!("batch row {}: bad value '{field}'", ln + 2))
                })?;
                p.insert(h.clone(), v);
            }
            let result = eval_bound(name, &p)?;
            text.push_str(&serde_json::to_string(&result).unwrap());
            text.push('\n');
        }
    } else {
        let p: BTreeMap<String, f64> =
            flags.iter().filter_map(|(k, v)| v.map(|x| (k.clone(), x))).collect();
        payload = serde_json::to_string(&p).unwrap().into_bytes();
        let result = eval_bound(name, &p)?;
        text.push_str(&serde_json::to_string_pretty(&result).unwrap());
        text.push('\n');
    }
    let prov = Provenance::new(DEFAULT_SEED, tol, &payload);
    emit(io.out.as_deref(), &text, &prov)
}

pub fn run_bound(a: BoundArgs) -> Result<(), CliError> {
    let f = |v: Option<f64>| v;
    let fu = |v: Option<u64>| v.map(|x| x as f64);
    match a.which {
        BoundKind::PhiK { k, io } => bound_output("phi-k", BTreeMap::from([("k".into(), fu(k))]), &io),
        BoundKind::Epow { a: av, m, io } => bound_output(
            "epow",
            BTreeMap::from([("a".into(), f(av)), ("m".into(), fu(m))]),
            &io,
        ),
        BoundKind::CommutatorPower { h_norm, m, io } => bound_output(
            "commutator-power",
            BTreeMap::from([("h_norm".into(), f(h_norm)), ("m".into(), fu(m))]),
            &io,
        ),
        BoundKind::Hsandwich { k, t, l_norm, ele_norm, io } => bound_output(
            "hsandwich",
            BTreeMap::from([
                ("k".into(), fu(k)),
                ("t".into(), f(t)),
                ("l_norm".into(), f(l_norm)),
                ("ele_norm".into(), Some(ele_norm)),
            ]),
            &io,
        ),
        BoundKind::BetaLower { c, zeta, io } => bound_output(
            "beta-lower",
            BTreeMap::from([("c".into(), f(c)), ("zeta".into(), f(zeta))]),
            &io,
        ),
        BoundKind::Epsultimate { k, q, gamma, eps, l_norm, ele_norm, io } => bound_output(
            "epsultimate",
            BTreeMap::from([
                ("k".into(), fu(k)),
                ("q".into(), fu(q)),
                ("gamma".into(), f(gamma)),
                ("eps".into(), f(eps)),
                ("l_norm".into(), f(l_norm)),
                ("ele_norm".into(), Some(ele_norm)),
            ]),
            &io,
        ),
        BoundKind::Discretefinal { k, g, w, eps, l_norm, ele_norm, io } => bound_output(
            "discretefinal",
            BTreeMap::from([
                ("k".into(), fu(k)),
                ("g".into(), fu(g)),
                ("w".into(), fu(w)),
                ("eps".into(), f(eps)),
                ("l_norm".into(), f(l_norm)),
                ("ele_norm".into(), Some(ele_norm)),
            ]),
            &io,
        ),
        BoundKind::Ctsfinal { gamma, w, eps, l_norm, io } => bound_output(
            "ctsfinal",
            BTreeMap::from([
                ("gamma".into(), f(gamma)),
                ("w".into(), fu(w)),
                ("eps".into(), f(eps)),
                ("l_norm".into(), f(l_norm)),
            ]),
            &io,
        ),
        BoundKind::Zfromdecay { kind, lambda, b, eps, c_eps, w, l_norm, ele_norm, k, io } => {
            let name = match kind.as_str() {
                "continuous" => "zfromdecay-continuous",
                "discrete" => "zfromdecay-discrete",
                other => return Err(CliError::config(format!("unknown kind '{other}'"))),
            };
            bound_output(
                name,
                BTreeMap::from([
                    ("lambda".into(), f(lambda)),
                    ("b".into(), f(b)),
                    ("eps".into(), f(eps)),
                    ("c_eps".into(), f(c_eps)),
                    ("w".into(), fu(w)),
                    ("l_norm".into(), f(l_norm)),
                    ("ele_norm".into(), Some(ele_norm)),
                    ("k".into(), fu(k)),
                ]),
                &io,
            )
        }
        BoundKind::ZvscmlsiCap { lambda0, b0, b, eps, c_eps, alpha, l_norm, io } => bound_output(
            "zvscmlsi-cap",
            BTreeMap::from([
                ("lambda0".into(), f(lambda0)),
                ("b0".into(), f(b0)),
                ("b".into(), f(b)),
                ("eps".into(), f(eps)),
                ("c_eps".into(), f(c_eps)),
                ("alpha".into(), f(alpha)),
                ("l_norm".into(), f(l_norm)),
            ]),
            &io,
        ),
        BoundKind::Epsilongeneral { k, t, eps, l_norm, ele_norm, io } => bound_output(
            "epsilongeneral",
            BTreeMap::from([
                ("k".into(), fu(k)),
                ("t".into(), f(t)),
                ("eps".into(), f(eps)),
                ("l_norm".into(), f(l_norm)),
                ("ele_norm".into(), Some(ele_norm)),
            ]),
            &io,
        ),
    }
}

// --------------------------------------------------------------------- fit

#[derive(Args)]
pub struct FitArgs {
    /// Choi input: matrix JSON ({dims, re, im}) or a CSV of 16 complex
    /// entries row-major (forms: a, a+bi, a-bi, bi)
    #[arg(long = "input", visible_alias = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_complex(field: &str) -> Result<C64, CliError> {
    let s: String = field.trim().replace(' ', "");
    let bad = || CliError::config(format!("bad complex entry '{field}'"));
    if s.is_empty() {
        return Err(bad());
    }
    if s.ends_with('i') || s.ends_with('j') {
        let body = &s[..s.len() - 1];
        // split at the sign of the imaginary part (skipping a leading sign)
        for (idx, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !matches!(&body[idx - 1..idx], "e" | "E") {
                let re: f64 = body[..idx].parse().map_err(|_| bad())?;
                let im_str = &body[idx..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| bad())?
                };
                return Ok(C64::new(re, im));
            }
        }
        let im: f64 = if body.is_empty() { 1.0 } else { body.parse().map_err(|_| bad())? };
        return Ok(C64::new(0.0, im));
    }
    Ok(C64::new(s.parse().map_err(|_| bad())?, 0.0))
}

pub fn run_fit(a: FitArgs) -> Result<(), CliError> {
    let tol = Tolerances::default();
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| CliError::config(format!("input {}: {e}", a.input.display())))?;
    let mat = if text.trim_start().starts_with('{') {
        cmat_from_json(&text).map_err(|e| CliError::config(e.to_string()))?
    } else {
        let fields: Vec<&str> = text
            .split([',', '\n', '\r'])
            .map(|f| f.trim())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 16 {
            return Err(CliError::config(format!(
                "Choi CSV needs 16 entries row-major, got {}",
                fields.len()
            )));
        }
        let mut m = zenolab::CMat::zeros((4, 4));
        for (i, fld) in fields.iter().enumerate() {
            m[(i / 4, i % 4)] = parse_complex(fld)?;
        }
        m
    };
    let choi = zenolab::metrics::ChoiMatrix::new(mat, 2, 2)
        .map_err(|e| CliError::config(e.to_string()))?;
    let report = zenolab::tomofit::fit_params(&choi)?;
    let json = serde_json::to_string_pretty(&report).unwrap();
    let prov = Provenance::new(DEFAULT_SEED, tol, text.as_bytes());
    emit(a.out.as_deref(), &format!("{json}\n"), &prov)
}

