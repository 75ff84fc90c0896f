//! Deterministic random inputs for tests, see-saw restarts and sweeps.

use crate::opalg::{adjoint, HilbertSpace, Superoperator};
use crate::{C64, CMat, CVec, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; good enough for seeding purposes
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_cmat(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut m = CMat::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = C64::new(gauss(rng), gauss(rng));
        }
    }
    m
}

/// Haar-ish random unit vector from complex Gaussian entries.
pub fn random_unit_vector(d: usize, rng: &mut ChaCha8Rng) -> CVec {
    let mut v = CVec::zeros(d);
    loop {
        for i in 0..d {
            v[i] = C64::new(gauss(rng), gauss(rng));
        }
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.mapv(|z| z / n);
        }
    }
}

/// Random rank-`rank` density matrix (Wishart construction).
pub fn random_density_mat(d: usize, rank: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut g = CMat::zeros((d, rank));
    for i in 0..d {
        for j in 0..rank {
            g[(i, j)] = C64::new(gauss(rng), gauss(rng));
        }
    }
    let w = g.dot(&adjoint(&g));
    let tr: f64 = w.diag().iter().map(|z| z.re).sum();
    w.mapv(|z| z / tr)
}

/// Random pure density matrix.
pub fn random_pure_density(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let v = random_unit_vector(d, rng);
    let mut m = CMat::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = v[i] * v[j].conj();
        }
    }
    m
}

/// Random CPTP map from `kraus` Gaussian Kraus operators, normalized so that
/// Σ K†K = I.
pub fn random_channel(space: &HilbertSpace, kraus: usize, rng: &mut ChaCha8Rng) -> Result<Superoperator> {
    let d = space.total_dim();
    let gs: Vec<CMat> = (0..kraus).map(|_| random_cmat(d, rng)).collect();
    let mut m = CMat::zeros((d, d));
    for g in &gs {
        m = m + adjoint(g).dot(g);
    }
    // M^{-1/2} via Hermitian eigendecomposition
    let (w, v) = crate::opalg::eigh_hermitian(&m)?;
    let mut inv_sqrt = CMat::zeros((d, d));
    for (k, &lam) in w.iter().enumerate() {
        let s = 1.0 / lam.max(1e-300).sqrt();
        let col = v.column(k);
        for i in 0..d {
            for j in 0..d {
                inv_sqrt[(i, j)] += C64::new(s, 0.0) * col[i] * col[j].conj();
            }
        }
    }
    let mut sup = CMat::zeros((d * d, d * d));
    for g in &gs {
        let k = g.dot(&inv_sqrt);
        sup = sup + ndarray::linalg::kron(&k.mapv(|z| z.conj()), &k);
    }
    Superoperator::endo(space, sup)
}

/// Random Hermitian matrix.
pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = random_cmat(d, rng);
    (&g + &adjoint(&g)).mapv(|z| z * 0.5)
}
