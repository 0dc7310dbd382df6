//! Dense checks of a duality on small instances.

use crate::gibbs_sampler::{Beta, DualSampler, SamplerError, SamplerOptions};
use crate::lindblad_verify::{trace_norm, CMatrix};
use crate::models::{self, LatticeModel, ModelName};
use crate::pauli_core::{dense, CliffordCircuit, PauliError, SignedTableau};
use crate::structure::{self, StructureError, StructureOptions};
use crate::{lit, Real};
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ORACLE_QUBITS: usize = 14;
/// Dense conjugation `U H U^†` is only formed up to this size.
pub const MAX_CONJUGATION_QUBITS: usize = 10;
pub const SPECTRUM_TOL: f64 = 1e-10;
pub const MIXTURE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{0} qubits exceeds the oracle limit of {MAX_ORACLE_QUBITS}")]
    TooLarge(usize),
    #[error(transparent)]
    Model(#[from] models::ModelError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityCheck {
    /// `C H C^†` replayed on the tableau equals the claimed dual.
    pub tableau_match: bool,
    /// Largest gap between sorted spectra of `H` and the claimed dual.
    pub spectrum_dev: f64,
    /// Largest entry of `U H U^† - D`, when formed.
    pub dense_dev: Option<f64>,
    pub pass: bool,
}

/// Check a claimed duality `(circuit, dual)` for `t` densely.
pub fn check_duality(
    t: &SignedTableau,
    circuit: &CliffordCircuit,
    dual: &SignedTableau,
) -> Result<DualityCheck, OracleError> {
    if t.n() > MAX_ORACLE_QUBITS {
        return Err(OracleError::TooLarge(t.n()));
    }
    let tableau_match = t.conjugated(circuit)? == *dual;
    let a: Vec<f64> = dense::spectrum(t, MAX_ORACLE_QUBITS)?;
    let b: Vec<f64> = dense::spectrum(dual, MAX_ORACLE_QUBITS)?;
    let spectrum_dev = if a.len() == b.len() {
        a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    } else {
        f64::INFINITY
    };
    let dense_dev = if t.n() <= MAX_CONJUGATION_QUBITS {
        let u = dense::dense_unitary::<f64>(circuit, MAX_CONJUGATION_QUBITS)?;
        let h = dense::dense_matrix::<f64>(t, MAX_CONJUGATION_QUBITS)?;
        let d = dense::dense_matrix::<f64>(dual, MAX_CONJUGATION_QUBITS)?;
        Some(dense::max_abs_diff(&(&u * h * u.adjoint()), &d))
    } else {
        None
    };
    let pass = tableau_match
        && spectrum_dev < SPECTRUM_TOL
        && dense_dev.is_none_or(|x| x < SPECTRUM_TOL);
    Ok(DualityCheck {
        tableau_match,
        spectrum_dev,
        dense_dev,
        pass,
    })
}

/// Basis index of a configuration: qubit 0 is the most significant bit and
/// `x_q = -1` sets it.
pub fn basis_index(x: &[i8]) -> usize {
    x.iter().fold(0, |b, &v| (b << 1) | usize::from(v < 0))
}

fn config_of(b: usize, n: usize) -> Vec<i8> {
    (0..n)
        .map(|q| if b >> (n - 1 - q) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// Dense `e^{-βH} / Tr e^{-βH}`.
pub fn dense_gibbs<T: Real>(t: &SignedTableau, beta: T) -> Result<CMatrix<T>, OracleError> {
    let h = dense::dense_matrix::<T>(t, MAX_ORACLE_QUBITS)?;
    let e = h.symmetric_eigen();
    let lo = e.eigenvalues.iter().fold(T::max_value().unwrap_or(lit(f64::MAX)), |m, &x| m.min(x));
    let w = e.eigenvalues.map(|x| (-beta * (x - lo)).exp());
    let z = w.iter().fold(T::zero(), |s, &x| s + x);
    let d = CMatrix::from_diagonal(&w.map(|x| Complex::from(x / z)));
    Ok(&e.eigenvectors * d * e.eigenvectors.adjoint())
}

/// `Σ_x p(x) C^† |x><x| C` with `p` the exact distribution of the dual sampler.
pub fn sampler_mixture<T: Real>(model: &LatticeModel, beta: Beta<T>) -> Result<CMatrix<T>, OracleError> {
    let t = model.tableau()?;
    if t.n() > MAX_CONJUGATION_QUBITS {
        return Err(OracleError::TooLarge(t.n()));
    }
    let d = structure::dualize(&t, Some(&model.species()), &StructureOptions::default())?;
    let sampler = DualSampler::new(&d, beta, &SamplerOptions::default())?;
    let n = t.n();
    let dim = 1usize << n;
    let mut p = Vec::with_capacity(dim);
    for b in 0..dim {
        p.push(Complex::from(sampler.probability(&config_of(b, n))?));
    }
    let u = dense::dense_unitary::<T>(&d.circuit, MAX_CONJUGATION_QUBITS)?;
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(p));
    Ok(u.adjoint() * diag * u)
}

/// Trace distance between the sampler mixture and the dense Gibbs state.
pub fn mixture_distance(model: &LatticeModel, beta: f64) -> Result<f64, OracleError> {
    let rho = sampler_mixture::<f64>(model, Beta::Finite(beta))?;
    let sigma = dense_gibbs::<f64>(&model.tableau()?, beta)?;
    Ok(trace_norm(&(rho - sigma)) / 2.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub model: ModelName,
    pub l: usize,
    pub n: usize,
    pub duality: DualityCheck,
    /// `(β, trace distance)` of the Gibbs mixture check, toric2d at L = 2 only.
    pub gibbs: Vec<(f64, f64)>,
    pub pass: bool,
}

pub const GIBBS_BETAS: [f64; 3] = [0.2, 0.5, 1.0];

pub fn verify_oracle(model: ModelName, l: usize) -> Result<OracleReport, OracleError> {
    let m = models::generate(model, l, None)?;
    if m.n() > MAX_ORACLE_QUBITS {
        return Err(OracleError::TooLarge(m.n()));
    }
    let t = m.tableau()?;
    let d = structure::dualize(&t, Some(&m.species()), &StructureOptions::default())?;
    let duality = check_duality(&t, &d.circuit, &d.dual)?;
    let mut gibbs = Vec::new();
    if model == ModelName::Toric2d && l == 2 {
        for b in GIBBS_BETAS {
            gibbs.push((b, mixture_distance(&m, b)?));
        }
    }
    let pass = duality.pass && gibbs.iter().all(|&(_, x)| x < MIXTURE_TOL);
    Ok(OracleReport {
        model,
        l,
        n: m.n(),
        duality,
        gibbs,
        pass,
    })
}
