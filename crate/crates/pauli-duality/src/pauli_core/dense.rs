//! Dense matrix oracle for small qubit counts. Qubit 0 is the leftmost tensor
//! factor, i.e. the most significant bit of a basis index.

use super::{bit_ones, CliffordCircuit, Gate, PauliError, PauliTerm, SignedTableau};
use crate::{lit, Real};
use nalgebra::DMatrix;
use num_complex::Complex;
use std::collections::HashMap;

pub const DEFAULT_MAX_QUBITS: usize = 14;

fn guard(n: usize, max: usize) -> Result<(), PauliError> {
    if n > max || n >= 63 {
        Err(PauliError::TooLarge { n, max })
    } else {
        Ok(())
    }
}

/// X-flip mask, Z-phase mask and the number of `Y` letters, as basis-index masks.
fn masks(t: &PauliTerm) -> (usize, usize, usize) {
    let n = t.n();
    let to_mask = |q: usize| 1usize << (n - 1 - q);
    let xm = t.x.ones().map(to_mask).fold(0, |a, b| a | b);
    let zm = t.z.ones().map(to_mask).fold(0, |a, b| a | b);
    let ny = (xm & zm).count_ones() as usize;
    (xm, zm, ny)
}

/// Matrix element `<b ^ xm| P |b>` for a Pauli string with the given masks.
fn pauli_phase<T: Real>(b: usize, zm: usize, ny: usize) -> Complex<T> {
    let i_pow = [
        Complex::new(T::one(), T::zero()),
        Complex::new(T::zero(), T::one()),
        Complex::new(-T::one(), T::zero()),
        Complex::new(T::zero(), -T::one()),
    ][ny % 4];
    if (b & zm).count_ones() % 2 == 1 {
        -i_pow
    } else {
        i_pow
    }
}

/// Signed, scaled Pauli string as a dense matrix.
pub fn pauli_matrix<T: Real>(term: &PauliTerm) -> Result<DMatrix<Complex<T>>, PauliError> {
    let n = term.n();
    guard(n, DEFAULT_MAX_QUBITS)?;
    let dim = 1usize << n;
    let (xm, zm, ny) = masks(term);
    let v: T = lit(term.value());
    let mut m = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        m[(b ^ xm, b)] = pauli_phase::<T>(b, zm, ny) * v;
    }
    Ok(m)
}

/// `Σ_i (±coeff_i) P_i` as a dense Hermitian matrix.
pub fn dense_matrix<T: Real>(
    t: &SignedTableau,
    max_qubits: usize,
) -> Result<DMatrix<Complex<T>>, PauliError> {
    guard(t.n(), max_qubits)?;
    let dim = 1usize << t.n();
    let mut m = DMatrix::zeros(dim, dim);
    for row in t.rows() {
        let (xm, zm, ny) = masks(&row);
        let v: T = lit(row.value());
        for b in 0..dim {
            m[(b ^ xm, b)] += pauli_phase::<T>(b, zm, ny) * v;
        }
    }
    Ok(m)
}

/// Apply one gate to every column of `u` in place.
fn gate_on_columns<T: Real>(u: &mut DMatrix<Complex<T>>, n: usize, g: Gate) {
    let bitmask = |q: usize| 1usize << (n - 1 - q);
    let dim = u.nrows();
    let half: T = lit(std::f64::consts::FRAC_1_SQRT_2);
    for mut col in u.column_iter_mut() {
        match g {
            Gate::H(a) => {
                let m = bitmask(a);
                for b in (0..dim).filter(|b| b & m == 0) {
                    let (v0, v1) = (col[b], col[b | m]);
                    col[b] = (v0 + v1) * half;
                    col[b | m] = (v0 - v1) * half;
                }
            }
            Gate::S(a) | Gate::Sdg(a) => {
                let m = bitmask(a);
                let ph = if matches!(g, Gate::S(_)) {
                    Complex::new(T::zero(), T::one())
                } else {
                    Complex::new(T::zero(), -T::one())
                };
                for b in (0..dim).filter(|b| b & m != 0) {
                    col[b] *= ph;
                }
            }
            Gate::CX(c, t) => {
                let (mc, mt) = (bitmask(c), bitmask(t));
                for b in (0..dim).filter(|b| b & mc != 0 && b & mt == 0) {
                    col.swap_rows(b, b | mt);
                }
            }
            Gate::CZ(a, b2) => {
                let m = bitmask(a) | bitmask(b2);
                for b in (0..dim).filter(|b| b & m == m) {
                    col[b] = -col[b];
                }
            }
        }
    }
}

/// Ordered product `g_k ... g_1` of the circuit's gates.
pub fn dense_unitary<T: Real>(
    c: &CliffordCircuit,
    max_qubits: usize,
) -> Result<DMatrix<Complex<T>>, PauliError> {
    guard(c.n, max_qubits)?;
    let dim = 1usize << c.n;
    let mut u = DMatrix::identity(dim, dim);
    for &g in &c.gates {
        g.check(c.n)?;
        gate_on_columns(&mut u, c.n, g);
    }
    Ok(u)
}

/// Sorted spectrum of the tableau's Hamiltonian.
///
/// The matrix splits into blocks, one per coset of the span of the rows' X
/// masks; each block is diagonalized densely.
pub fn spectrum<T: Real>(t: &SignedTableau, max_qubits: usize) -> Result<Vec<T>, PauliError> {
    guard(t.n(), max_qubits)?;
    let n = t.n();
    let dim = 1usize << n;
    let rows: Vec<(usize, usize, usize, T)> = t
        .rows()
        .iter()
        .map(|r| {
            let (xm, zm, ny) = masks(r);
            (xm, zm, ny, lit(r.value()))
        })
        .collect();
    // Echelon basis of the X masks, keyed by leading bit.
    let mut basis: Vec<usize> = Vec::new();
    for &(xm, ..) in &rows {
        let mut v = xm;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let reduce = |mut v: usize| {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        v
    };
    let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
    for b in 0..dim {
        blocks.entry(reduce(b)).or_default().push(b);
    }
    let mut eig = Vec::with_capacity(dim);
    for states in blocks.values() {
        let k = states.len();
        let pos: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut h = DMatrix::<Complex<T>>::zeros(k, k);
        for (j, &b) in states.iter().enumerate() {
            for &(xm, zm, ny, v) in &rows {
                h[(pos[&(b ^ xm)], j)] += pauli_phase::<T>(b, zm, ny) * v;
            }
        }
        if k == 1 {
            eig.push(h[(0, 0)].re);
        } else {
            eig.extend(h.symmetric_eigenvalues().iter().copied());
        }
    }
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(eig)
}

/// Diagonal of a classical tableau, indexed by basis state.
pub fn diagonal<T: Real>(t: &SignedTableau, max_qubits: usize) -> Result<Vec<T>, PauliError> {
    guard(t.n(), max_qubits)?;
    t.require_diagonal()?;
    let n = t.n();
    let zm: Vec<(usize, T)> = (0..t.m())
        .map(|i| {
            let m = bit_ones(t.z_row(i)).fold(0usize, |a, q| a | (1 << (n - 1 - q)));
            (m, lit(t.value(i)))
        })
        .collect();
    Ok((0..1usize << n)
        .map(|b| {
            zm.iter().fold(T::zero(), |acc, &(m, v)| {
                if (b & m).count_ones() % 2 == 1 {
                    acc - v
                } else {
                    acc + v
                }
            })
        })
        .collect())
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |m, (x, y)| m.max(nalgebra::ComplexField::modulus(*x - *y)))
}
