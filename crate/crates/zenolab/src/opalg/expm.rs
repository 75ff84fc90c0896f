//! Matrix exponential by Padé order-13 approximation with scaling and
//! squaring (Higham 2005). Handles the generically non-normal superoperator
//! matrices produced elsewhere in the crate.

use super::linalg::one_norm;
use crate::{CMat, Error, Result};
use ndarray_linalg::Inverse;

const THETA_13: f64 = 5.371_920_351_148_152;

const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `exp(m)` for a square complex matrix.
///
/// Accurate to relative error well below 1e-10 for ‖m‖ ≤ 50; extreme norms
/// fail loudly instead of returning NaNs.
pub fn matrix_exp(m: &CMat) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch("exp of non-square matrix".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow("non-finite entries".into()));
    }
    let norm = one_norm(m);
    if !norm.is_finite() || norm > 1e9 {
        return Err(Error::Overflow(format!("matrix norm {norm:.3e} too large")));
    }
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let a = m.mapv(|z| z / 2f64.powi(s));

    let n = a.nrows();
    let eye = CMat::eye(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let w1 = a6.mapv(|z| z * B13[13]) + &a4.mapv(|z| z * B13[11]) + &a2.mapv(|z| z * B13[9]);
    let w2 = a6.mapv(|z| z * B13[7])
        + &a4.mapv(|z| z * B13[5])
        + &a2.mapv(|z| z * B13[3])
        + &eye.mapv(|z| z * B13[1]);
    let u = a.dot(&(a6.dot(&w1) + &w2));

    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let z1 = a6.mapv(|z| z * B13[12]) + &a4.mapv(|z| z * B13[10]) + &a2.mapv(|z| z * B13[8]);
    let v = a6.dot(&z1)
        + &a6.mapv(|z| z * B13[6])
        + &a4.mapv(|z| z * B13[4])
        + &a2.mapv(|z| z * B13[2])
        + &eye.mapv(|z| z * B13[0]);

    let denom = &v - &u;
    let numer = &v + &u;
    let denom_inv = denom.inv().map_err(|e| Error::Linalg(format!("Pade solve: {e}")))?;
    let mut r = denom_inv.dot(&numer);
    for _ in 0..s {
        r = r.dot(&r);
    }
    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow("exponential overflowed".into()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::superop::{devectorize, vectorize};
    use crate::C64;
    use crate::rng::{random_cmat, random_density_mat, rng_from_seed};
    use approx::assert_abs_diff_eq;
    use ndarray::linalg::kron;

    fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn exp_zero_is_identity() {
        let e = matrix_exp(&CMat::zeros((3, 3))).unwrap();
        assert_abs_diff_eq!(max_abs_diff(&e, &CMat::eye(3)), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn exp_diagonal() {
        let mut d = CMat::zeros((2, 2));
        d[(0, 0)] = C64::new(0.7, 0.0);
        d[(1, 1)] = C64::new(-1.3, 2.0);
        let e = matrix_exp(&d).unwrap();
        assert_abs_diff_eq!(e[(0, 0)].re, 0.7f64.exp(), epsilon = 1e-13);
        let expect = C64::new(-1.3, 2.0).exp();
        assert!((e[(1, 1)] - expect).norm() < 1e-13);
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn depolarizing_semigroup_closed_form() {
        // L_dep(rho) = rho - (I/2) tr rho; exp(-t L_dep) rho = e^{-t} rho + (1-e^{-t}) I/2
        let d = 2usize;
        let eye = CMat::eye(d);
        let vid = vectorize(&eye);
        let mut dep = CMat::zeros((4, 4));
        for (r, &v) in vid.iter().enumerate() {
            for (c, &w) in vid.iter().enumerate() {
                dep[(r, c)] = v * w.conj() / d as f64;
            }
        }
        let l = &CMat::eye(4) - &dep;
        let mut rng = rng_from_seed(1);
        let rho = random_density_mat(2, 2, &mut rng);
        for &t in &[0.3, 1.0, 4.0] {
            let phi = matrix_exp(&l.mapv(|z| z * -t)).unwrap();
            let out = devectorize(&phi.dot(&vectorize(&rho)), 2).unwrap();
            let expect =
                rho.mapv(|z| z * (-t). exp()) + &eye.mapv(|z| z * (1.0 - (-t).exp()) * 0.5);
            assert!(max_abs_diff(&out, &expect) < 1e-12, "t={t}");
        }
    }

    #[test]
    fn product_rule_for_commuting_pairs() {
        let mut rng = rng_from_seed(2);
        for _ in 0..4 {
            let a = random_cmat(3, &mut rng);
            // b is a polynomial in a, hence commutes
            let b = a.dot(&a).mapv(|z| z * C64::new(0.25, 0.1)) + &a.mapv(|z| z * 0.5);
            let comm = a.dot(&b) - b.dot(&a);
            assert!(comm.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
            let lhs = matrix_exp(&(&a + &b)).unwrap();
            let rhs = matrix_exp(&a).unwrap().dot(&matrix_exp(&b).unwrap());
            assert!(max_abs_diff(&lhs, &rhs) < 1e-11);
        }
    }

    #[test]
    fn large_norm_accuracy_via_squaring_consistency() {
        // exp(A) == exp(A/2)^2 at a norm requiring scaling
        let mut rng = rng_from_seed(9);
        let a = random_cmat(4, &mut rng).mapv(|z| z * 10.0);
        let e1 = matrix_exp(&a).unwrap();
        let h = matrix_exp(&a.mapv(|z| z * 0.5)).unwrap();
        let rel = max_abs_diff(&e1, &h.dot(&h)) / one_norm(&e1);
        assert!(rel < 1e-11, "squaring consistency {rel:.3e}");
    }

    #[test]
    fn overflow_is_loud() {
        let big = kron(&CMat::eye(2), &CMat::eye(2)).mapv(|z| z * 1e12);
        assert!(matrix_exp(&big).is_err());
        let mut nan = CMat::zeros((2, 2));
        nan[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matrix_exp(&nan).is_err());
    }
}
