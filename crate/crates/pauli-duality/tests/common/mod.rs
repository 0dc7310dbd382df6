#![allow(dead_code)]

use pauli_duality::{CliffordCircuit, Gate, PauliTerm, SignedTableau};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_gate(n: usize, rng: &mut impl Rng) -> Gate {
    let a = rng.random_range(0..n);
    let kinds = if n > 1 { 5 } else { 3 };
    match rng.random_range(0..kinds) {
        0 => Gate::H(a),
        1 => Gate::S(a),
        2 => Gate::Sdg(a),
        k => {
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            if k == 3 {
                Gate::CX(a, b)
            } else {
                Gate::CZ(a, b)
            }
        }
    }
}

pub fn random_circuit(n: usize, len: usize, rng: &mut impl Rng) -> CliffordCircuit {
    let gates = (0..len).map(|_| random_gate(n, rng)).collect();
    CliffordCircuit::from_gates(n, gates).unwrap()
}

/// Random Z strings with random signed coefficients, scrambled by a random
/// Clifford circuit; rows commute by construction.
pub fn random_commuting(n: usize, m: usize, rng: &mut impl Rng) -> SignedTableau {
    let terms: Vec<PauliTerm> = (0..m)
        .map(|_| {
            let qs: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            let v = rng.random_range(0.1..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            PauliTerm::z_string(n, &qs, v)
        })
        .collect();
    let t = SignedTableau::from_terms(&terms).unwrap();
    t.conjugated(&random_circuit(n, 4 * n + 10, rng)).unwrap()
}

/// Random diagonal tableau with at least one nonzero row.
pub fn random_diagonal(n: usize, m: usize, rng: &mut impl Rng) -> SignedTableau {
    let terms: Vec<PauliTerm> = (0..m)
        .map(|_| {
            let qs: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.4)).collect();
            PauliTerm::z_string(n, &qs, rng.random_range(-2.0..2.0))
        })
        .collect();
    SignedTableau::from_terms(&terms).unwrap()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// All `2^n` configurations over `{+1, -1}`, first spin most significant.
pub fn all_configs(n: usize) -> Vec<Vec<i8>> {
    (0..1usize << n)
        .map(|b| {
            (0..n)
                .map(|q| if b >> (n - 1 - q) & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}
