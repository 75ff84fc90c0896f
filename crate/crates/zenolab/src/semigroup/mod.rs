//! Lindbladians in decay+drift form `L = i[H,·] + Σ γᵢ Sᵢ`, their semigroups
//! `Φᵗ = exp(−tL)`, fixed-point projectors with peripheral rotations, and
//! Zeno generators.

mod generators;
mod model;
mod split;
mod zeno;

pub use generators::{
    dephasing_generator, gksl_dissipator, hamiltonian_part, replacement_generator,
    replacement_projector,
};
pub use model::{HamiltonianTerm, ModelFile, StochasticTerm};
pub use split::{fixed_point_split, ProjectorSplit};
pub use zeno::{projection_chain, projection_chain_limit, rotated_projector, zeno_generator, zeno_limit_channel};

use crate::opalg::{matrix_exp, DensityMatrix, HilbertSpace, OperatorMatrix, Superoperator};
use crate::{C64, Error, Result, Tolerances};

/// Symbolic decay+drift Lindbladian: Hermitian Hamiltonian plus weighted
/// trace-annihilating stochastic generators.
#[derive(Clone, Debug)]
pub struct LindbladSpec {
    space: HilbertSpace,
    hamiltonian: OperatorMatrix,
    stochastic: Vec<(Superoperator, f64)>,
}

impl LindbladSpec {
    pub fn new(
        space: HilbertSpace,
        hamiltonian: OperatorMatrix,
        stochastic: Vec<(Superoperator, f64)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if hamiltonian.space() != &space {
            return Err(Error::ShapeMismatch("Hamiltonian space".into()));
        }
        if !hamiltonian.is_hermitian(tol.herm) {
            return Err(Error::NotHermitian(hamiltonian.herm_deviation()));
        }
        for (s, w) in &stochastic {
            if s.in_space() != &space || s.out_space() != &space {
                return Err(Error::ShapeMismatch("stochastic term space".into()));
            }
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::Domain(format!("stochastic weight {w}")));
            }
            let dev = s.trace_annihilation_deviation();
            if dev > 1e-8 * s.frobenius().max(1.0) {
                return Err(Error::InvalidGenerator(format!(
                    "stochastic term does not annihilate traces (deviation {dev:.3e})"
                )));
            }
        }
        Ok(LindbladSpec { space, hamiltonian, stochastic })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn hamiltonian(&self) -> &OperatorMatrix {
        &self.hamiltonian
    }

    pub fn stochastic(&self) -> &[(Superoperator, f64)] {
        &self.stochastic
    }

    /// The summed stochastic part `Σ γᵢ Sᵢ` as one superoperator.
    pub fn stochastic_total(&self) -> Result<Superoperator> {
        let mut acc = Superoperator::zero(&self.space);
        for (s, w) in &self.stochastic {
            acc = acc.add(&s.scale(C64::new(*w, 0.0)))?;
        }
        Ok(acc)
    }

    /// Same spec with every stochastic weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(Error::Domain(format!("weight scale {factor}")));
        }
        Ok(LindbladSpec {
            space: self.space.clone(),
            hamiltonian: self.hamiltonian.clone(),
            stochastic: self.stochastic.iter().map(|(s, w)| (s.clone(), w * factor)).collect(),
        })
    }
}

/// `L = i[H,·] + Σ γᵢ Sᵢ`; evolution is always `exp(−tL)`.
pub fn assemble(spec: &LindbladSpec) -> Result<Superoperator> {
    let mut l = hamiltonian_part(&spec.hamiltonian)?;
    for (s, w) in &spec.stochastic {
        l = l.add(&s.scale(C64::new(*w, 0.0)))?;
    }
    Ok(l)
}

/// `exp(−tL)` applied to ρ, re-validated as a density matrix.
pub fn evolve(l: &Superoperator, rho: &DensityMatrix, t: f64, tol: &Tolerances) -> Result<DensityMatrix> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("evolution time {t}")));
    }
    if rho.space() != l.in_space() {
        return Err(Error::ShapeMismatch("evolve: state space".into()));
    }
    let phi = matrix_exp(&l.matrix().mapv(|z| z * C64::new(-t, 0.0)))?;
    let out = crate::opalg::devectorize(
        &phi.dot(&crate::opalg::vectorize(rho.matrix())),
        l.out_dim(),
    )?;
    // a loose validation tolerance accounts for expm roundoff at large t·‖L‖
    let vtol = Tolerances { herm: 1e-8f64.max(tol.herm), psd: 1e-8f64.max(tol.psd), tr: 1e-8f64.max(tol.tr), ..*tol };
    DensityMatrix::new_hermitized(OperatorMatrix::new(l.out_space().clone(), out)?, &vtol)
        .map_err(|e| Error::InvalidGenerator(format!("evolution left the density cone: {e}")))
}

/// `exp(−tL)` as a verified CPTP superoperator.
pub fn channel_at(l: &Superoperator, t: f64, tol: &Tolerances) -> Result<Superoperator> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("channel time {t}")));
    }
    let phi = matrix_exp(&l.matrix().mapv(|z| z * C64::new(-t, 0.0)))?;
    Superoperator::from_matrix(l.in_space().clone(), l.out_space().clone(), phi)?
        .verify_cptp(1e-8f64.max(tol.eig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{ket_from_string, pauli, tensor};
    use crate::rng::rng_from_seed;
    use approx::assert_abs_diff_eq;

    fn q(n: usize) -> HilbertSpace {
        HilbertSpace::qubits(n).unwrap()
    }

    #[test]
    fn empty_spec_assembles_to_zero() {
        let tol = Tolerances::default();
        let spec = LindbladSpec::new(q(1), OperatorMatrix::zeros(&q(1)), vec![], &tol).unwrap();
        let l = assemble(&spec).unwrap();
        assert_abs_diff_eq!(l.frobenius(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn evolve_examples() {
        let tol = Tolerances::default();
        let space = q(1);
        // t = 0 returns rho
        let h = OperatorMatrix::new(space.clone(), pauli::z().mapv(|z| z * 0.5)).unwrap();
        let spec = LindbladSpec::new(space.clone(), h, vec![], &tol).unwrap();
        let l = assemble(&spec).unwrap();
        let (_, plus) = ket_from_string("+").unwrap();
        let rho = DensityMatrix::pure(&space, &plus).unwrap();
        let r0 = evolve(&l, &rho, 0.0, &tol).unwrap();
        let err = (r0.matrix() - rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);

        // H = Z/2 precesses |+><+| with period 2 pi
        let r2pi = evolve(&l, &rho, 2.0 * std::f64::consts::PI, &tol).unwrap();
        let err = (r2pi.matrix() - rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "period 2pi violated: {err:.3e}");
        let rpi = evolve(&l, &rho, std::f64::consts::PI, &tol).unwrap();
        // at half period the X component is flipped
        assert_abs_diff_eq!(rpi.matrix()[(0, 1)].re, -0.5, epsilon = 1e-10);
    }

    #[test]
    fn semigroup_property_on_random_spec() {
        let tol = Tolerances::default();
        let space = q(1);
        let h = OperatorMatrix::new(space.clone(), pauli::x()).unwrap();
        let s = dephasing_generator(
            &OperatorMatrix::new(space.clone(), pauli::z()).unwrap(),
            &tol,
        )
        .unwrap();
        let spec = LindbladSpec::new(space.clone(), h, vec![(s, 0.7)], &tol).unwrap();
        let l = assemble(&spec).unwrap();
        let mut rng = rng_from_seed(6);
        let rho = DensityMatrix::new(
            OperatorMatrix::new(space.clone(), crate::rng::random_density_mat(2, 2, &mut rng)).unwrap(),
            &tol,
        )
        .unwrap();
        let (s_, t_) = (0.4, 0.9);
        let direct = evolve(&l, &rho, s_ + t_, &tol).unwrap();
        let stepped = evolve(&l, &evolve(&l, &rho, s_, &tol).unwrap(), t_, &tol).unwrap();
        let err = (direct.matrix() - stepped.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "semigroup property violated: {err:.3e}");
    }

    #[test]
    fn channel_at_is_cptp_and_composes() {
        let tol = Tolerances::default();
        let space = q(2);
        let zx = tensor(
            &OperatorMatrix::new(q(1), pauli::z()).unwrap(),
            &OperatorMatrix::new(q(1), pauli::x()).unwrap(),
        )
        .unwrap();
        let h = zx.scale(C64::new(0.5, 0.0));
        let s = replacement_generator(&replacement_projector(&space, &[0]).unwrap(), &tol).unwrap();
        let spec = LindbladSpec::new(space.clone(), h, vec![(s, 1.3)], &tol).unwrap();
        let l = assemble(&spec).unwrap();
        for &t in &[0.01, 0.1, 1.0, 10.0] {
            let c = channel_at(&l, t, &tol).unwrap();
            assert_eq!(c.verified().completely_positive, Some(true));
        }
        let c1 = channel_at(&l, 0.3, &tol).unwrap();
        let c2 = channel_at(&l, 0.5, &tol).unwrap();
        let c12 = channel_at(&l, 0.8, &tol).unwrap();
        let composed = c1.compose(&c2).unwrap();
        let err = (composed.matrix() - c12.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "composition law violated: {err:.3e}");
    }

    #[test]
    fn choi_eigenvalues_of_depolarizing_channel() {
        let tol = Tolerances::default();
        let space = q(1);
        let e = replacement_projector(&space, &[0]).unwrap();
        let s = replacement_generator(&e, &tol).unwrap();
        let spec =
            LindbladSpec::new(space.clone(), OperatorMatrix::zeros(&space), vec![(s, 1.0)], &tol)
                .unwrap();
        let l = assemble(&spec).unwrap();
        let t = 0.8;
        let c = channel_at(&l, t, &tol).unwrap();
        let j = crate::metrics::choi(&c).unwrap();
        let (mut w, _) = crate::opalg::eigh_hermitian(j.matrix()).unwrap();
        w.as_slice_mut().unwrap().sort_by(f64::total_cmp);
        let small = (1.0 - (-t).exp()) / 4.0;
        let big = (1.0 + 3.0 * (-t).exp()) / 4.0;
        assert_abs_diff_eq!(w[0], small, epsilon = 1e-10);
        assert_abs_diff_eq!(w[1], small, epsilon = 1e-10);
        assert_abs_diff_eq!(w[2], small, epsilon = 1e-10);
        assert_abs_diff_eq!(w[3], big, epsilon = 1e-10);
    }

    #[test]
    fn rejects_non_hermitian_hamiltonian_and_bad_weight() {
        let tol = Tolerances::default();
        let space = q(1);
        let mut nh = pauli::x();
        nh[(0, 1)] = C64::new(0.0, 0.3);
        assert!(LindbladSpec::new(
            space.clone(),
            OperatorMatrix::new(space.clone(), nh).unwrap(),
            vec![],
            &tol
        )
        .is_err());
        let s = dephasing_generator(&OperatorMatrix::new(space.clone(), pauli::z()).unwrap(), &tol)
            .unwrap();
        assert!(LindbladSpec::new(
            space.clone(),
            OperatorMatrix::zeros(&space),
            vec![(s, -1.0)],
            &tol
        )
        .is_err());
    }
}
