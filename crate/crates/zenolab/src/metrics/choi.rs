//! Choi matrices: `(Φ ⊗ Id)` applied to the normalized maximally entangled
//! state, with the channel acting on the first tensor factor.

use crate::opalg::Superoperator;
use crate::{C64, CMat, Error, Result};

/// Normalized Choi matrix with its input/output dimensions.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    mat: CMat,
    in_dim: usize,
    out_dim: usize,
}

impl ChoiMatrix {
    pub fn new(mat: CMat, in_dim: usize, out_dim: usize) -> Result<Self> {
        if mat.nrows() != in_dim * out_dim || mat.ncols() != in_dim * out_dim {
            return Err(Error::ShapeMismatch("Choi matrix dimensions".into()));
        }
        Ok(ChoiMatrix { mat, in_dim, out_dim })
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    pub fn herm_deviation(&self) -> f64 {
        let adj = crate::opalg::adjoint(&self.mat);
        (&self.mat - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `(Φ ⊗ Id)(|Ω⟩⟨Ω|)` with `|Ω⟩ = d^{-1/2} Σᵢ |ii⟩`; trace 1 for CPTP Φ.
pub fn choi(phi: &Superoperator) -> Result<ChoiMatrix> {
    let din = phi.in_dim();
    let dout = phi.out_dim();
    let mut j = CMat::zeros((dout * din, dout * din));
    let mut e = CMat::zeros((din, din));
    for a in 0..din {
        for b in 0..din {
            e[(a, b)] = C64::new(1.0, 0.0);
            let out = phi.apply_matrix(&e)?;
            e[(a, b)] = C64::new(0.0, 0.0);
            // block (a,b) of the reference factor
            for i in 0..dout {
                for k in 0..dout {
                    j[(i * din + a, k * din + b)] += out[(i, k)] / din as f64;
                }
            }
        }
    }
    ChoiMatrix::new(j, din, dout)
}

/// Partial trace of a (normalized or unnormalized) Choi-shaped matrix over the
/// output factor, yielding an operator on the reference copy.
pub fn trace_out_output(mat: &CMat, in_dim: usize, out_dim: usize) -> Result<CMat> {
    if mat.nrows() != in_dim * out_dim {
        return Err(Error::ShapeMismatch("Choi partial trace".into()));
    }
    let mut t = CMat::zeros((in_dim, in_dim));
    for a in 0..in_dim {
        for b in 0..in_dim {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..out_dim {
                s += mat[(i * in_dim + a, i * in_dim + b)];
            }
            t[(a, b)] = s;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{HilbertSpace, Superoperator};
    use crate::rng::{random_channel, rng_from_seed};
    use approx::assert_abs_diff_eq;

    #[test]
    fn choi_of_identity_is_max_entangled() {
        let q = HilbertSpace::qubits(1).unwrap();
        let j = choi(&Superoperator::identity(&q)).unwrap();
        // |Omega><Omega| entries 1/2 at the four corners of the {00,11} block
        assert_abs_diff_eq!(j.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(j.matrix()[(0, 3)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(j.matrix()[(3, 3)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(j.matrix()[(1, 1)].re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j.trace().re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn choi_is_linear_on_random_pairs() {
        let q = HilbertSpace::qubits(1).unwrap();
        let mut rng = rng_from_seed(4);
        let p1 = random_channel(&q, 2, &mut rng).unwrap();
        let p2 = random_channel(&q, 3, &mut rng).unwrap();
        let (a, b) = (C64::new(0.3, 0.0), C64::new(-1.2, 0.0));
        let combo = p1.scale(a).add(&p2.scale(b)).unwrap();
        let lhs = choi(&combo).unwrap();
        let j1 = choi(&p1).unwrap();
        let j2 = choi(&p2).unwrap();
        let rhs = j1.matrix().mapv(|z| z * a) + &j2.matrix().mapv(|z| z * b);
        let err = (lhs.matrix() - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }
}
