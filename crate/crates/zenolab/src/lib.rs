//! Numerical toolkit for decay+drift quantum Markov semigroups.
//!
//! A Lindbladian here always has the split form `L(ρ) = i[H,ρ] + Σ γᵢ Sᵢ(ρ)`
//! with a Hermitian drift Hamiltonian `H` and trace-annihilating stochastic
//! generators `Sᵢ`; time evolution is `Φᵗ = exp(-tL)`. The crate provides
//!
//! - dense complex operator algebra (tensor factors, partial traces, matrix
//!   functions, column-stacked superoperators) in [`opalg`],
//! - semigroup construction, evolution, fixed-point projectors and Zeno
//!   machinery in [`semigroup`],
//! - information metrics (relative entropy, trace distance, fidelities, a
//!   certified diamond-norm bracket, cp-order constants) in [`metrics`],
//! - closed-form Zeno/decay bound evaluators with hypothesis logging in
//!   [`zenobounds`],
//! - desk-scale model builders, parameter sweeps and inequality verifiers in
//!   [`scenarios`],
//! - the five-parameter single-qubit tomography noise model in [`tomofit`].

pub mod error;
pub mod metrics;
pub mod opalg;
pub mod rng;
pub mod scenarios;
pub mod semigroup;
pub mod tol;
pub mod tomofit;
pub mod zenobounds;

pub use error::{Error, Result};
pub use tol::Tolerances;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMat = ndarray::Array2<C64>;
/// Dense complex vector.
pub type CVec = ndarray::Array1<C64>;
