//! Clifford dualities between commuting Pauli Hamiltonians and classical spin
//! models.
//!
//! The pipeline reads a Hamiltonian as a signed GF(2) tableau, synthesizes a
//! Clifford circuit that makes it diagonal, restructures the diagonal model
//! with CX gates, classifies the result (Ising chains, lassos, ...) and uses the
//! classical model to sample Gibbs states of the original Hamiltonian.
//!
//! Numerical code (dense oracles, samplers, Lindblad checks) is generic over
//! the scalar type; the aliases below fix it to `f64`.

pub mod cli;
pub mod diagonalizer;
pub mod gibbs_sampler;
pub mod lindblad_verify;
pub mod models;
pub mod pauli_core;
pub mod structure;
pub mod toric_explicit;

pub use pauli_core::{BitVec, CliffordCircuit, Gate, PauliError, PauliTerm, SignedTableau};

/// Real scalar used by the numerical modules.
pub trait Real: nalgebra::RealField + Copy {}

impl<T: nalgebra::RealField + Copy> Real for T {}

/// Convert an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

pub type ClassicalChain64 = gibbs_sampler::ClassicalChain<f64>;
pub type GibbsSample64 = gibbs_sampler::ClassicalGibbsSample<f64>;
pub type GkslGenerator64 = lindblad_verify::GkslGenerator<f64>;
pub type Superoperator64 = lindblad_verify::Superoperator<f64>;
pub type DenseMatrix64 = nalgebra::DMatrix<num_complex::Complex<f64>>;
