//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use zenolab::metrics::{
    diamond_bracket, fidelity_mats, pimsner_popa_cb, process_fidelity, relative_entropy_mats,
    trace_distance_mats, DiamondConfig, LogBase,
};
use zenolab::opalg::{
    eigh_hermitian, ket_from_string, partial_trace, DensityMatrix, HilbertSpace, OperatorMatrix,
    Superoperator,
};
use zenolab::rng::{random_channel, random_density_mat, random_pure_density, rng_from_seed};
use zenolab::scenarios::{
    build_basis_drift, build_chain, build_phi_k, build_two_qubit, initial_deficit, two_qubit_e0,
    verify_revclsi,
};
use zenolab::semigroup::{
    assemble, channel_at, evolve, hamiltonian_part, projection_chain, projection_chain_limit,
    replacement_projector, zeno_limit_channel,
};
use zenolab::zenobounds as zb;
use zenolab::{CMat, Tolerances};

fn pass(n: u32, name: &str) {
    println!("ACCEPTANCE {n:02} {name}: PASS");
}

fn hermitize(m: &CMat) -> CMat {
    let adj = zenolab::opalg::adjoint(m);
    (m + &adj).mapv(|z| z * 0.5)
}

// Criterion 1: Zeno bound soundness: for k in {1,2,4,8,16,32} the measured diamond
// lower bound of (Phi_(k) - E0) sits below the closed-form bound, and the
// k = 32 value has decayed to <= 0.1.
#[test]
fn acceptance_01_zeno_bound_soundness() {
    let e0 = two_qubit_e0().unwrap();
    let cfg = DiamondConfig::default();
    let mut last = f64::NAN;
    for &k in &[1u64, 2, 4, 8, 16, 32] {
        let phi = build_phi_k(k as usize).unwrap();
        let b = diamond_bracket(&phi.sub(&e0).unwrap(), &cfg).unwrap();
        let bound = zb::phi_k_bound(k).unwrap();
        assert!(
            b.lower <= bound + 1e-9,
            "FAIL criterion 1: lower {:.6} exceeds bound {:.6} at k={k}",
            b.lower,
            bound
        );
        last = b.lower;
    }
    assert!(last <= 0.1, "FAIL criterion 1: k=32 lower {last:.4} not <= 0.1");
    pass(1, "zeno bound soundness (interrupted rotation)");
}

// Criterion 2: Non-monotonicity on the 4-qubit chain: relative entropy to I/16 at
// t = 0.5 over a 9-point log grid in gamma has a strict interior minimum
// with depth >= 0.05 bits against both endpoints.
#[test]
fn acceptance_02_chain_non_monotonicity() {
    let tol = Tolerances::default();
    let (space, ket) = ket_from_string("0000").unwrap();
    let rho = DensityMatrix::pure(&space, &ket).unwrap();
    let mixed = DensityMatrix::maximally_mixed(&space);
    let gammas: Vec<f64> = (0..9).map(|i| 10f64.powf(-1.0 + 0.5 * i as f64)).collect();
    let mut d = Vec::new();
    for &g in &gammas {
        let l = assemble(&build_chain(4, g, &tol).unwrap()).unwrap();
        let rt = evolve(&l, &rho, 0.5, &tol).unwrap();
        d.push(
            relative_entropy_mats(rt.matrix(), mixed.matrix(), LogBase::Two, 1e-10).unwrap(),
        );
    }
    let (imin, &dmin) = d.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!(imin > 0 && imin < d.len() - 1, "FAIL criterion 2: minimum at endpoint {imin}");
    assert!(
        d[0] - dmin >= 0.05 && d[d.len() - 1] - dmin >= 0.05,
        "FAIL criterion 2: margins {:.4}/{:.4} below 0.05 bits",
        d[0] - dmin,
        d[d.len() - 1] - dmin
    );
    pass(2, "chain-4 relative entropy non-monotone in gamma");
}

// Criterion 3: Non-monotonicity on the two-qubit model over the depolarizing
// likelihood grid at t = 4π: the B-marginal relative entropy has an
// interior minimum with >= 0.05-bit margins. Likelihood exactly 1.0 maps
// to the deep-Zeno surrogate gamma = 1e4 (complete depolarization).
#[test]
fn acceptance_03_two_qubit_non_monotonicity() {
    let tol = Tolerances::default();
    let t = 4.0 * std::f64::consts::PI;
    let (space, ket) = ket_from_string("00").unwrap();
    let rho = DensityMatrix::pure(&space, &ket).unwrap();
    let lik: Vec<f64> = (0..13)
        .map(|i| 10f64.powf((3.35e-8f64).log10() * (1.0 - i as f64 / 12.0)))
        .collect();
    let mut d = Vec::new();
    for &l in &lik {
        let gamma = if 1.0 - l <= 0.0 { 1e4 } else { -(1.0 - l).ln() / t };
        let lop = assemble(&build_two_qubit(gamma, &tol).unwrap()).unwrap();
        let rt = evolve(&lop, &rho, t, &tol).unwrap();
        let margb = partial_trace(rt.op(), &[1]).unwrap();
        let half = CMat::eye(2).mapv(|z| z * 0.5);
        d.push(relative_entropy_mats(margb.matrix(), &half, LogBase::Two, 1e-10).unwrap());
    }
    let (imin, &dmin) = d.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!(imin > 0 && imin < d.len() - 1, "FAIL criterion 3: minimum at endpoint {imin}");
    assert!(
        d[0] - dmin >= 0.05 && d[d.len() - 1] - dmin >= 0.05,
        "FAIL criterion 3: margins {:.4}/{:.4} below 0.05 bits",
        d[0] - dmin,
        d[d.len() - 1] - dmin
    );
    pass(3, "two-qubit marginal entropy non-monotone in likelihood");
}

// Criterion 4: Slow starts: the basis-drift deficit at t = 1e-3 and the chain-4
// deficit at t = 1e-2 both stay under 1e-4 bits, and the basis-drift onset
// is at least quadratic (deficit(2t)/deficit(t) >= 3.5).
#[test]
fn acceptance_04_counterexample_slow_starts() {
    let tol = Tolerances::default();
    let bd = build_basis_drift(1.0, &tol).unwrap();
    let rho0 = DensityMatrix::basis_state(bd.space(), 0).unwrap();
    let defs = initial_deficit(&bd, &rho0, &[1e-3, 2e-3], &tol).unwrap();
    assert!(
        defs[0].1 <= 1e-4,
        "FAIL criterion 4: basis-drift deficit {:.3e} above 1e-4 bits",
        defs[0].1
    );
    let ratio = defs[1].1 / defs[0].1;
    assert!(ratio >= 3.5, "FAIL criterion 4: onset ratio {ratio:.2} below 3.5");

    let chain = build_chain(4, 1.0, &tol).unwrap();
    let mixed3 = CMat::eye(8).mapv(|z| z / 8.0);
    let mut zero = CMat::zeros((2, 2));
    zero[(0, 0)] = zenolab::C64::new(1.0, 0.0);
    let inp = ndarray::linalg::kron(&mixed3, &zero);
    let rho = DensityMatrix::new(
        OperatorMatrix::new(chain.space().clone(), inp).unwrap(),
        &tol,
    )
    .unwrap();
    let defs = initial_deficit(&chain, &rho, &[1e-2], &tol).unwrap();
    assert!(
        defs[0].1 <= 1e-4,
        "FAIL criterion 4: chain-4 deficit {:.3e} above 1e-4 bits",
        defs[0].1
    );
    pass(4, "counterexample slow starts (deficits under 1e-4 bits)");
}

// Criterion 5: Zeno-limit convergence: bracket distance of Phi^1 to the Zeno channel
// strictly decreases through gamma in {50,100,200} with successive ratios
// in [0.3, 0.8].
#[test]
fn acceptance_05_zeno_limit_convergence() {
    let tol = Tolerances::default();
    let e0 = two_qubit_e0().unwrap();
    let cfg = DiamondConfig::default();
    let mut lowers = Vec::new();
    for &g in &[50.0f64, 100.0, 200.0] {
        let spec = build_two_qubit(g, &tol).unwrap();
        let l = assemble(&spec).unwrap();
        let hsup = hamiltonian_part(spec.hamiltonian()).unwrap();
        let zeno = zeno_limit_channel(&e0, &hsup, 1.0).unwrap();
        let phi = channel_at(&l, 1.0, &tol).unwrap();
        let b = diamond_bracket(&phi.sub(&zeno).unwrap(), &cfg).unwrap();
        lowers.push(b.lower);
    }
    assert!(
        lowers[0] > lowers[1] && lowers[1] > lowers[2],
        "FAIL criterion 5: not strictly decreasing: {lowers:?}"
    );
    for pair in lowers.windows(2) {
        let r = pair[1] / pair[0];
        assert!((0.3..=0.8).contains(&r), "FAIL criterion 5: ratio {r:.3} outside [0.3, 0.8]");
    }
    pass(5, "zeno-limit convergence O(1/gamma)");
}

// Criterion 6: Reverse decay inequality margins >= -1e-9 on 50 random pure states
// per gamma in {0.5, 2} across t in {0.1, 0.5, 1, 2}.
#[test]
fn acceptance_06_reverse_decay_margins() {
    let tol = Tolerances::default();
    let mut rng = rng_from_seed(0xACCE97);
    for &gamma in &[0.5f64, 2.0] {
        let spec = build_two_qubit(gamma, &tol).unwrap();
        for _ in 0..50 {
            let rho = DensityMatrix::new_hermitized(
                OperatorMatrix::new(spec.space().clone(), random_pure_density(4, &mut rng))
                    .unwrap(),
                &tol,
            )
            .unwrap();
            let pts = verify_revclsi(&spec, &rho, &[0.1, 0.5, 1.0, 2.0], None, &tol).unwrap();
            for p in pts {
                assert!(
                    p.margin >= -1e-9,
                    "FAIL criterion 6: margin {:.3e} at t={} gamma={gamma}",
                    p.margin,
                    p.t
                );
            }
        }
    }
    pass(6, "reverse decay inequality margins nonnegative");
}

// Criterion 7: Projection-chain limit: the bracket distance to the analytic limit at
// k = 256 is at most twice the k = 512 value plus 1e-9, and at most 0.05.
#[test]
fn acceptance_07_projection_chain_limit() {
    let tol = Tolerances::default();
    let spec = build_two_qubit(1.0, &tol).unwrap();
    let e0 = two_qubit_e0().unwrap();
    let limit = projection_chain_limit(&e0, spec.hamiltonian(), 1.0).unwrap();
    let cfg = DiamondConfig::default();
    let d256 = diamond_bracket(
        &projection_chain(&e0, spec.hamiltonian(), 1.0, 256).unwrap().sub(&limit).unwrap(),
        &cfg,
    )
    .unwrap()
    .lower;
    let d512 = diamond_bracket(
        &projection_chain(&e0, spec.hamiltonian(), 1.0, 512).unwrap().sub(&limit).unwrap(),
        &cfg,
    )
    .unwrap()
    .lower;
    assert!(
        d256 <= 2.0 * d512 + 1e-9,
        "FAIL criterion 7: d256 {d256:.6e} vs 2*d512 {:.6e}",
        2.0 * d512
    );
    assert!(d256 <= 0.05, "FAIL criterion 7: d256 {d256:.4} above 0.05");
    pass(7, "projection chain approaches the rotated limit at O(1/k)");
}

// Criterion 8: Pimsner-Popa indices: 1 for the identity, 4 for qubit complete
// depolarization, 4 for (1/2) (x) tr_A on two qubits, never above d^2.
#[test]
fn acceptance_08_pimsner_popa() {
    let q1 = HilbertSpace::qubits(1).unwrap();
    let q2 = HilbertSpace::qubits(2).unwrap();
    let id = pimsner_popa_cb(&Superoperator::identity(&q1), 1e-8).unwrap();
    assert!((id - 1.0).abs() <= 1e-8, "FAIL criterion 8: C_cb(Id) = {id}");
    let dep = pimsner_popa_cb(&replacement_projector(&q1, &[0]).unwrap(), 1e-8).unwrap();
    assert!((dep - 4.0).abs() <= 1e-8, "FAIL criterion 8: C_cb(dep) = {dep}");
    assert!(dep <= 4.0 + 1e-8, "FAIL criterion 8: exceeds d^2");
    let half = pimsner_popa_cb(&replacement_projector(&q2, &[0]).unwrap(), 1e-8).unwrap();
    assert!((half - 4.0).abs() <= 1e-8, "FAIL criterion 8: C_cb((1/2) x tr_A) = {half}");
    assert!(half <= 16.0 + 1e-8, "FAIL criterion 8: exceeds d^2");
    pass(8, "pimsner-popa indices");
}

// Criterion 9: Bound-formula regressions: remainder property of epow, beta at zeta=0,
// exact cap halving, the discrete/window substitution identity at 1e-12,
// and the telescoping residual at 1e-12 over 20 random channel families.
#[test]
fn acceptance_09_bound_formula_regression() {
    // epow remainder on the stated grid
    for &a in &[0.5f64, 2.0, 5.0] {
        for &k in &[1u32, 3, 7] {
            let mut partial = 0.0;
            let mut term = 1.0;
            for n in 0..=k {
                if n > 0 {
                    term *= a / n as f64;
                }
                partial += term;
            }
            let remainder = a.exp() - partial;
            assert!(
                (0.0..=zb::epow(a, k + 1) + 1e-12).contains(&remainder),
                "FAIL criterion 9: remainder property at a={a} k={k}"
            );
        }
    }
    // beta_lower(., 0) = 1
    for &c in &[1.01f64, 2.0, 50.0] {
        assert!(
            (zb::beta_lower(c, 0.0).unwrap() - 1.0).abs() < 1e-14,
            "FAIL criterion 9: beta(c,0) != 1 at c={c}"
        );
    }
    // cap(4 lambda0) = cap(lambda0)/2 exactly
    let cap1 = zb::zvscmlsi_cap(400.0, 2.0, 2.0, 0.01, 16.0, 0.5, 1.0).unwrap().value;
    let cap4 = zb::zvscmlsi_cap(1600.0, 2.0, 2.0, 0.01, 16.0, 0.5, 1.0).unwrap().value;
    assert!((cap4 - cap1 / 2.0).abs() <= f64::EPSILON * cap1, "FAIL criterion 9: cap halving");
    // discretefinal == epsultimate under gamma = (k + k mod w)/g
    for &(k, g, w) in &[(10_000u64, 5u64, 4u64), (1024, 8, 2), (999, 3, 1)] {
        let df = zb::discretefinal_bound(k, g, w, 0.01, 1.0, 0.0).unwrap().value;
        let gamma = (k + k % w) as f64 / g as f64;
        let eu = zb::epsultimate_bound(k, w, gamma, 0.01, 1.0, 0.0).unwrap().value;
        assert!(
            (df - eu).abs() <= 1e-12,
            "FAIL criterion 9: substitution identity off by {:.3e}",
            (df - eu).abs()
        );
    }
    // telescoping residual on 20 random 3-channel families
    let tol = Tolerances::default();
    let q = HilbertSpace::qubits(1).unwrap();
    let mut rng = rng_from_seed(0x7e1e);
    for trial in 0..20 {
        let f: Vec<_> = (0..3).map(|_| random_channel(&q, 2, &mut rng).unwrap()).collect();
        let g: Vec<_> = (0..3).map(|_| random_channel(&q, 2, &mut rng).unwrap()).collect();
        let rho = DensityMatrix::new(
            OperatorMatrix::new(q.clone(), random_density_mat(2, 2, &mut rng)).unwrap(),
            &tol,
        )
        .unwrap();
        let res = zb::telescoping_check(&f, &g, &rho).unwrap();
        assert!(res <= 1e-12, "FAIL criterion 9: telescoping residual {res:.3e} at trial {trial}");
    }
    pass(9, "bound formula regressions");
}

// Criterion 10: Tomography round-trip: fit . reconstruct = id to 1e-6 over 100 draws,
// the identity Choi fits to zero parameters, and the refit model keeps
// process fidelity >= 0.99 under 1e-3 Gaussian perturbation.
#[test]
fn acceptance_10_tomography_round_trip() {
    use rand::Rng;
    use zenolab::tomofit::{fit_params, reconstruct_choi, NoiseParams};
    let mut rng = rng_from_seed(0x70_F17);
    for trial in 0..100 {
        let p = NoiseParams {
            epsilon: rng.gen_range(0.0..0.5),
            eta: rng.gen_range(0.0..0.5),
            delta: rng.gen_range(0.0..0.5),
            theta: rng.gen_range(-std::f64::consts::FRAC_PI_2 * 0.99..std::f64::consts::FRAC_PI_2 * 0.99),
            chi: rng.gen_range(0.0..0.5),
            chi_degenerate: false,
        };
        let (j, _) = reconstruct_choi(&p).unwrap();
        let rep = fit_params(&j).unwrap();
        for (name, got, want) in [
            ("epsilon", rep.params.epsilon, p.epsilon),
            ("eta", rep.params.eta, p.eta),
            ("delta", rep.params.delta, p.delta),
            ("theta", rep.params.theta, p.theta),
            ("chi", rep.params.chi, p.chi),
        ] {
            assert!(
                (got - want).abs() <= 1e-6,
                "FAIL criterion 10: {name} off by {:.3e} at trial {trial}",
                (got - want).abs()
            );
        }
    }
    // identity Choi -> zero parameters
    let mut m = CMat::zeros((4, 4));
    for (i, j) in [(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = zenolab::C64::new(0.5, 0.0);
    }
    let rep = fit_params(&zenolab::metrics::ChoiMatrix::new(m, 2, 2).unwrap()).unwrap();
    for (name, v) in [
        ("epsilon", rep.params.epsilon),
        ("eta", rep.params.eta),
        ("delta", rep.params.delta),
        ("theta", rep.params.theta),
        ("chi", rep.params.chi),
    ] {
        assert!(v.abs() <= 1e-7, "FAIL criterion 10: identity fit {name} = {v:.3e}");
    }
    // perturbation robustness
    for trial in 0..20 {
        let p = NoiseParams {
            epsilon: rng.gen_range(0.02..0.4),
            eta: rng.gen_range(0.02..0.4),
            delta: rng.gen_range(0.02..0.4),
            theta: rng.gen_range(-1.0..1.0),
            chi: rng.gen_range(0.02..0.4),
            chi_degenerate: false,
        };
        let (j, _) = reconstruct_choi(&p).unwrap();
        let mut noisy = j.matrix().clone();
        for i in 0..4 {
            for k in 0..4 {
                let dre: f64 = rng.gen_range(-1.0..1.0) * 1e-3;
                let dim: f64 = rng.gen_range(-1.0..1.0) * 1e-3;
                noisy[(i, k)] += zenolab::C64::new(dre, if i == k { 0.0 } else { dim });
            }
        }
        let noisy = hermitize(&noisy);
        let tr: f64 = noisy.diag().iter().map(|z| z.re).sum();
        let noisy = noisy.mapv(|z| z / tr);
        let jn = zenolab::metrics::ChoiMatrix::new(noisy.clone(), 2, 2).unwrap();
        let rep = fit_params(&jn).unwrap();
        let (refit, _) = reconstruct_choi(&rep.params).unwrap();
        let fid = fidelity_mats(refit.matrix(), &noisy).unwrap();
        assert!(
            fid >= 0.99,
            "FAIL criterion 10: model fidelity {fid:.4} below 0.99 at trial {trial}"
        );
    }
    pass(10, "tomography round trip and perturbation robustness");
}

// Criterion 11: Metric axioms on >= 50 random instances each: data processing,
// Pinsker consistency, the semigroup property, and CPTP verification of
// every evolved channel.
#[test]
fn acceptance_11_metric_axioms() {
    let tol = Tolerances::default();
    let q1 = HilbertSpace::qubits(1).unwrap();
    let mut rng = rng_from_seed(0xA11);

    // data processing and Pinsker
    for trial in 0..50 {
        let rho = random_density_mat(2, 2, &mut rng);
        let sig = random_density_mat(2, 2, &mut rng);
        let phi = random_channel(&q1, 2, &mut rng).unwrap();
        let d_in = relative_entropy_mats(&rho, &sig, LogBase::Two, 1e-10).unwrap();
        let d_out = relative_entropy_mats(
            &phi.apply_matrix(&rho).unwrap(),
            &phi.apply_matrix(&sig).unwrap(),
            LogBase::Two,
            1e-10,
        )
        .unwrap();
        assert!(d_out <= d_in + 1e-9, "FAIL criterion 11: data processing at trial {trial}");
        let dt = trace_distance_mats(&rho, &sig).unwrap();
        assert!(
            2.0 * dt * dt <= std::f64::consts::LN_2 * d_in + 1e-9,
            "FAIL criterion 11: Pinsker at trial {trial}"
        );
    }

    // semigroup property and CPTP of evolved channels
    use rand::Rng;
    for trial in 0..50 {
        let gamma = rng.gen_range(0.1..5.0);
        let spec = if trial % 2 == 0 {
            build_two_qubit(gamma, &tol).unwrap()
        } else {
            build_basis_drift(gamma, &tol).unwrap()
        };
        let l = assemble(&spec).unwrap();
        let d = spec.space().total_dim();
        let rho = DensityMatrix::new_hermitized(
            OperatorMatrix::new(spec.space().clone(), random_density_mat(d, d, &mut rng)).unwrap(),
            &tol,
        )
        .unwrap();
        let (s, t) = (rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0));
        let direct = evolve(&l, &rho, s + t, &tol).unwrap();
        let stepped = evolve(&l, &evolve(&l, &rho, s, &tol).unwrap(), t, &tol).unwrap();
        let err = (direct.matrix() - stepped.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-9, "FAIL criterion 11: semigroup property off by {err:.3e}");

        let c = channel_at(&l, t, &tol).unwrap();
        assert_eq!(
            c.verified().completely_positive,
            Some(true),
            "FAIL criterion 11: channel_at not verified CP"
        );
        // re-check the Choi spectrum explicitly at the stated tolerance
        let j = zenolab::metrics::choi(&c).unwrap();
        let (w, _) = eigh_hermitian(j.matrix()).unwrap();
        assert!(
            w.iter().cloned().fold(f64::INFINITY, f64::min) >= -1e-8,
            "FAIL criterion 11: Choi not PSD"
        );
    }
    let _ = process_fidelity(
        &Superoperator::identity(&q1),
        &Superoperator::identity(&q1),
    )
    .unwrap();
    pass(11, "metric axioms and channel verification");
}
