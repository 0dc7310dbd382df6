//! Dense GKSL generators, their superoperators, and checks that conjugation by
//! a unitary preserves the fixed point, spectrum, entropy production and
//! decay curves.
//!
//! Vectorization stacks columns: `vec(A X B) = (B^T ⊗ A) vec(X)`.

use crate::{lit, Real};
use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type CMatrix<T> = DMatrix<Complex<T>>;

pub const MAX_DIM: usize = 16;
const LOG_FLOOR: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum LindbladError {
    #[error("dimension {0} exceeds the dense limit {MAX_DIM}")]
    TooLarge(usize),
    #[error("operator has shape {0}x{1}, expected {2}x{2}")]
    Shape(usize, usize, usize),
    #[error("Hamiltonian is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("jump rate {0} is not positive")]
    BadRate(f64),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("generator is not primitive: {0}")]
    NotPrimitive(String),
}

fn to_f64<T: Real>(x: T) -> f64 {
    nalgebra::try_convert(x).unwrap_or(f64::NAN)
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

fn max_dev<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |m, (x, y)| m.max((*x - *y).modulus()))
}

/// `L(ρ) = -i[H, ρ] + Σ_k γ_k (L_k ρ L_k^† - ½{L_k^† L_k, ρ})`.
#[derive(Clone, Debug, PartialEq)]
pub struct GkslGenerator<T: Real> {
    pub dim: usize,
    pub hamiltonian: CMatrix<T>,
    pub jumps: Vec<(T, CMatrix<T>)>,
}

/// `d² × d²` matrix acting on column-stacked density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<T: Real> {
    pub dim: usize,
    pub matrix: CMatrix<T>,
}

pub fn vectorize<T: Real>(m: &CMatrix<T>) -> DVector<Complex<T>> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize<T: Real>(v: &DVector<Complex<T>>, d: usize) -> CMatrix<T> {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

impl<T: Real> GkslGenerator<T> {
    pub fn new(hamiltonian: CMatrix<T>, jumps: Vec<(T, CMatrix<T>)>) -> Result<Self, LindbladError> {
        let d = hamiltonian.nrows();
        if d > MAX_DIM {
            return Err(LindbladError::TooLarge(d));
        }
        let shape = |m: &CMatrix<T>| {
            if m.nrows() != d || m.ncols() != d {
                Err(LindbladError::Shape(m.nrows(), m.ncols(), d))
            } else {
                Ok(())
            }
        };
        shape(&hamiltonian)?;
        let herm = to_f64(max_dev(&hamiltonian, &hamiltonian.adjoint()));
        if herm > 1e-12 {
            return Err(LindbladError::NotHermitian(herm));
        }
        for (g, l) in &jumps {
            shape(l)?;
            if *g <= T::zero() {
                return Err(LindbladError::BadRate(to_f64(*g)));
            }
        }
        Ok(GkslGenerator {
            dim: d,
            hamiltonian,
            jumps,
        })
    }

    pub fn zero(dim: usize) -> Self {
        GkslGenerator {
            dim,
            hamiltonian: CMatrix::zeros(dim, dim),
            jumps: Vec::new(),
        }
    }

    /// Direct evaluation on a matrix.
    pub fn apply(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        let mi = c::<T>(0.0, -1.0);
        let mut out = (&self.hamiltonian * rho - rho * &self.hamiltonian) * mi;
        let half = c::<T>(0.5, 0.0);
        for (g, l) in &self.jumps {
            let ld = l.adjoint();
            let ldl = &ld * l;
            let d = l * rho * &ld - (&ldl * rho + rho * &ldl) * half;
            out += d * Complex::from(*g);
        }
        out
    }

    pub fn to_superoperator(&self) -> Result<Superoperator<T>, LindbladError> {
        let d = self.dim;
        if d > MAX_DIM {
            return Err(LindbladError::TooLarge(d));
        }
        let id = CMatrix::<T>::identity(d, d);
        let mi = c::<T>(0.0, -1.0);
        let half = c::<T>(0.5, 0.0);
        let mut s = (id.kronecker(&self.hamiltonian) - self.hamiltonian.transpose().kronecker(&id)) * mi;
        for (g, l) in &self.jumps {
            let ldl = l.adjoint() * l;
            let term = l.conjugate().kronecker(l)
                - (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * half;
            s += term * Complex::from(*g);
        }
        Ok(Superoperator { dim: d, matrix: s })
    }

    /// `U H U^†` and `U L_k U^†`.
    pub fn conjugate(&self, u: &CMatrix<T>) -> Result<Self, LindbladError> {
        check_unitary(u, self.dim)?;
        let ud = u.adjoint();
        Ok(GkslGenerator {
            dim: self.dim,
            hamiltonian: u * &self.hamiltonian * &ud,
            jumps: self.jumps.iter().map(|(g, l)| (*g, u * l * &ud)).collect(),
        })
    }
}

pub fn check_unitary<T: Real>(u: &CMatrix<T>, d: usize) -> Result<(), LindbladError> {
    if u.nrows() != d || u.ncols() != d {
        return Err(LindbladError::Shape(u.nrows(), u.ncols(), d));
    }
    let dev = to_f64(max_dev(&(u.adjoint() * u), &CMatrix::identity(d, d)));
    if dev > 1e-10 {
        Err(LindbladError::NotUnitary(dev))
    } else {
        Ok(())
    }
}

/// `Ū ⊗ U`, the superoperator of `X ↦ U X U^†`.
pub fn adjoint_action<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    u.conjugate().kronecker(u)
}

impl<T: Real> Superoperator<T> {
    pub fn apply(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        unvectorize(&(&self.matrix * vectorize(rho)), self.dim)
    }

    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        // Unbounded iteration at machine epsilon can stall on degenerate spectra.
        let s = [1e-15, 1e-13, 1e-11]
            .iter()
            .find_map(|&eps| nalgebra::Schur::try_new(self.matrix.clone(), lit(eps), 100_000))
            .expect("Schur iteration converges");
        s.eigenvalues()
            .expect("complex Schur form is triangular")
            .iter()
            .copied()
            .collect()
    }

    /// Largest modulus of `vec(I)^† S`; zero for trace-preserving maps.
    pub fn trace_defect(&self) -> T {
        let id = vectorize(&CMatrix::<T>::identity(self.dim, self.dim));
        (id.adjoint() * &self.matrix)
            .iter()
            .fold(T::zero(), |m, x| m.max(x.modulus()))
    }

    /// `e^{tS} ρ`.
    pub fn evolve(&self, rho: &CMatrix<T>, t: T) -> CMatrix<T> {
        let e = (&self.matrix * Complex::from(t)).exp();
        unvectorize(&(e * vectorize(rho)), self.dim)
    }

    /// Unique fixed point as a unit-trace density matrix.
    pub fn fixed_point(&self) -> Result<CMatrix<T>, LindbladError> {
        let d = self.dim;
        let svd = self.matrix.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[a]
                .partial_cmp(&svd.singular_values[b])
                .expect("finite singular values")
        });
        let tol: T = lit(1e-9);
        if order.len() > 1 && svd.singular_values[order[1]] < tol {
            return Err(LindbladError::NotPrimitive(format!(
                "kernel is degenerate (second singular value {:e})",
                to_f64(svd.singular_values[order[1]])
            )));
        }
        let v: DVector<Complex<T>> = v_t.row(order[0]).adjoint();
        let mut sigma = unvectorize(&v, d);
        sigma = (&sigma + sigma.adjoint()) * c::<T>(0.5, 0.0);
        let tr = sigma.trace();
        sigma /= tr;
        let min_eig = sigma
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(T::max_value().unwrap_or(lit(f64::MAX)), |m, &x| m.min(x));
        if min_eig < lit(1e-12) {
            return Err(LindbladError::NotPrimitive(format!(
                "fixed point is rank deficient (smallest eigenvalue {:e})",
                to_f64(min_eig)
            )));
        }
        Ok(sigma)
    }
}

/// Spectral gap `min |Re μ|` over eigenvalues `μ` with `|μ| > tol`.
pub fn spectral_gap<T: Real>(eigs: &[Complex<T>], tol: T) -> T {
    eigs.iter()
        .filter(|z| z.modulus() > tol)
        .map(|z| z.re.abs())
        .fold(T::max_value().unwrap_or(lit(f64::MAX)), |m, x| m.min(x))
}

/// Largest distance in a greedy nearest-neighbour matching of two multisets.
pub fn multiset_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    if a.len() != b.len() {
        return lit(f64::INFINITY);
    }
    let mut used = vec![false; b.len()];
    let mut worst = T::zero();
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (*x - *y).modulus()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).expect("finite"))
            .expect("equal lengths");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Matrix logarithm of a Hermitian positive matrix, eigenvalues floored at `1e-14`.
pub fn log_hermitian<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let e = m.clone().symmetric_eigen();
    let floor: T = lit(LOG_FLOOR);
    let logs = e.eigenvalues.map(|x| Complex::from(x.max(floor).ln()));
    &e.eigenvectors * CMatrix::from_diagonal(&logs) * e.eigenvectors.adjoint()
}

/// `‖A‖_1` of a Hermitian matrix.
pub fn trace_norm<T: Real>(m: &CMatrix<T>) -> T {
    let h = (m + m.adjoint()) * c::<T>(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .fold(T::zero(), |s, x| s + x.abs())
}

/// `-Tr[L(ρ)(log ρ - log σ)]`.
pub fn entropy_production<T: Real>(g: &GkslGenerator<T>, rho: &CMatrix<T>, log_sigma: &CMatrix<T>) -> T {
    -(g.apply(rho) * (log_hermitian(rho) - log_sigma)).trace().re
}

/// `D(ρ‖σ) = Tr[ρ(log ρ - log σ)]`.
pub fn relative_entropy<T: Real>(rho: &CMatrix<T>, log_sigma: &CMatrix<T>) -> T {
    (rho * (log_hermitian(rho) - log_sigma)).trace().re
}

pub fn random_matrix<T: Real>(d: usize, rng: &mut impl Rng) -> CMatrix<T> {
    CMatrix::from_fn(d, d, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian<T: Real>(d: usize, rng: &mut impl Rng) -> CMatrix<T> {
    let a = random_matrix::<T>(d, rng);
    (&a + a.adjoint()) * c::<T>(0.5, 0.0)
}

/// Unitary factor of the QR decomposition of a random complex matrix.
pub fn random_unitary<T: Real>(d: usize, rng: &mut impl Rng) -> CMatrix<T> {
    random_matrix::<T>(d, rng).qr().q()
}

/// Full-rank density matrix `(A A^† + ε I) / Tr`.
pub fn random_state<T: Real>(d: usize, rng: &mut impl Rng) -> CMatrix<T> {
    let a = random_matrix::<T>(d, rng);
    let mut rho = &a * a.adjoint() + CMatrix::identity(d, d) * c::<T>(0.05, 0.0);
    let tr = rho.trace();
    rho /= tr;
    rho
}

/// Random Hamiltonian plus one jump per matrix unit `|i><j|` with a random
/// positive rate.
pub fn random_generator<T: Real>(d: usize, rng: &mut impl Rng) -> Result<GkslGenerator<T>, LindbladError> {
    let h = random_hermitian::<T>(d, rng);
    let mut jumps = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut l = CMatrix::<T>::zeros(d, d);
            l[(i, j)] = Complex::one();
            jumps.push((lit(rng.random_range(0.1..1.1)), l));
        }
    }
    GkslGenerator::new(h, jumps)
}

/// Random primitive generator; primitivity is checked.
pub fn random_primitive_generator<T: Real>(
    d: usize,
    rng: &mut impl Rng,
) -> Result<GkslGenerator<T>, LindbladError> {
    let g = random_generator(d, rng)?;
    g.to_superoperator()?.fixed_point()?;
    Ok(g)
}

/// Completely depolarizing generator `ρ ↦ γ (Tr[ρ] I/d - ρ)`.
pub fn depolarizing<T: Real>(d: usize, gamma: T) -> GkslGenerator<T> {
    let mut jumps = Vec::with_capacity(d * d);
    let rate = gamma / lit::<T>(d as f64);
    for i in 0..d {
        for j in 0..d {
            let mut l = CMatrix::<T>::zeros(d, d);
            l[(i, j)] = Complex::one();
            jumps.push((rate, l));
        }
    }
    GkslGenerator {
        dim: d,
        hamiltonian: CMatrix::zeros(d, d),
        jumps,
    }
}

pub const DEFAULT_TIMES: [f64; 7] = [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub dim: usize,
    pub trials: usize,
    pub tolerance: f64,
    /// Trace distance between the conjugate's fixed point and `U σ U^†`.
    pub fixed_point: f64,
    pub spectrum: f64,
    pub gap: f64,
    pub gap_conjugate: f64,
    pub entropy_production: f64,
    /// Deviation of `EP(ρ) / 2D(ρ‖σ)` between mirrored states.
    pub mlsi_ratio: f64,
    pub decay: f64,
    pub pass: bool,
}

impl ConjugationReport {
    pub fn checks(&self) -> [(&'static str, f64); 6] {
        [
            ("fixed_point", self.fixed_point),
            ("spectrum", self.spectrum),
            ("gap", (self.gap - self.gap_conjugate).abs()),
            ("entropy_production", self.entropy_production),
            ("mlsi_ratio", self.mlsi_ratio),
            ("decay", self.decay),
        ]
    }
}

/// Compare `g` and its conjugate by `u` on `trials` random full-rank states.
pub fn verify_conjugation<T: Real>(
    g: &GkslGenerator<T>,
    u: &CMatrix<T>,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<ConjugationReport, LindbladError> {
    let tol = 1e-8;
    let d = g.dim;
    let gt = g.conjugate(u)?;
    let s = g.to_superoperator()?;
    let st = gt.to_superoperator()?;
    let ud = u.adjoint();
    let mirror = |m: &CMatrix<T>| u * m * &ud;

    let sigma = s.fixed_point()?;
    let sigma_t = st.fixed_point()?;
    let fixed_point = to_f64(trace_norm(&(&sigma_t - mirror(&sigma)))) / 2.0;

    let (e, et) = (s.eigenvalues(), st.eigenvalues());
    let spectrum = to_f64(multiset_distance(&e, &et));
    let gtol: T = lit(1e-9);
    let gap = to_f64(spectral_gap(&e, gtol));
    let gap_conjugate = to_f64(spectral_gap(&et, gtol));

    let (log_s, log_st) = (log_hermitian(&sigma), log_hermitian(&sigma_t));
    let mut entropy = 0.0f64;
    let mut ratio = 0.0f64;
    let mut decay = 0.0f64;
    for _ in 0..trials {
        let rho = random_state::<T>(d, rng);
        let rho_t = mirror(&rho);
        let ep = to_f64(entropy_production(g, &rho, &log_s));
        let ep_t = to_f64(entropy_production(&gt, &rho_t, &log_st));
        entropy = entropy.max((ep - ep_t).abs());
        let two = lit::<T>(2.0);
        let r = to_f64(entropy_production(g, &rho, &log_s) / (two * relative_entropy(&rho, &log_s)));
        let r_t = to_f64(entropy_production(&gt, &rho_t, &log_st) / (two * relative_entropy(&rho_t, &log_st)));
        ratio = ratio.max((r - r_t).abs());
        for &t in &DEFAULT_TIMES {
            let a = trace_norm(&(s.evolve(&rho, lit(t)) - &sigma));
            let b = trace_norm(&(st.evolve(&rho_t, lit(t)) - &sigma_t));
            decay = decay.max(to_f64((a - b).abs()));
        }
    }
    let pass = [fixed_point, spectrum, (gap - gap_conjugate).abs(), entropy, ratio, decay]
        .iter()
        .all(|&x| x < tol);
    Ok(ConjugationReport {
        dim: d,
        trials,
        tolerance: tol,
        fixed_point,
        spectrum,
        gap,
        gap_conjugate,
        entropy_production: entropy,
        mlsi_ratio: ratio,
        decay,
        pass,
    })
}
