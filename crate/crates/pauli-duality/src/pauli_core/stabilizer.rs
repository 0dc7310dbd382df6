//! Stabilizer-state simulation with destabilizer rows, for computational-basis
//! preparation, Z measurement and Pauli expectations.

use super::{bit, bits, conjugate_row, words_for, CliffordCircuit, PauliError, PauliTerm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rows `0..n` are destabilizers, rows `n..2n` stabilizers.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerState {
    n: usize,
    w: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    sign: Vec<bool>,
}

/// Exponent of `i` picked up when multiplying single-qubit Paulis `(x1,z1)·(x2,z2)`.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

impl StabilizerState {
    /// `|b_0 b_1 ... b_{n-1}>` with qubit 0 first.
    pub fn basis(bits_in: &[bool]) -> Self {
        let n = bits_in.len();
        let w = words_for(n);
        let mut s = StabilizerState {
            n,
            w,
            x: vec![0; 2 * n * w],
            z: vec![0; 2 * n * w],
            sign: vec![false; 2 * n],
        };
        for q in 0..n {
            bits::set(&mut s.x[q * w..(q + 1) * w], q, true);
            bits::set(&mut s.z[(n + q) * w..(n + q + 1) * w], q, true);
            s.sign[n + q] = bits_in[q];
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply_circuit(&mut self, c: &CliffordCircuit) -> Result<(), PauliError> {
        if c.n != self.n {
            return Err(PauliError::DimensionMismatch {
                expected: self.n,
                found: c.n,
            });
        }
        let w = self.w;
        for &gate in &c.gates {
            gate.check(self.n)?;
            for ((x, z), s) in self
                .x
                .chunks_mut(w)
                .zip(self.z.chunks_mut(w))
                .zip(self.sign.iter_mut())
            {
                conjugate_row(x, z, s, gate);
            }
        }
        Ok(())
    }

    /// Stabilizer generators as Pauli terms with unit coefficient.
    pub fn generators(&self) -> Vec<PauliTerm> {
        (self.n..2 * self.n)
            .map(|r| PauliTerm {
                x: super::BitVec::from_words(self.n, &self.x[r * self.w..(r + 1) * self.w]),
                z: super::BitVec::from_words(self.n, &self.z[r * self.w..(r + 1) * self.w]),
                sign: self.sign[r],
                coeff: 1.0,
            })
            .collect()
    }

    fn xb(&self, r: usize, q: usize) -> bool {
        bit(&self.x[r * self.w..(r + 1) * self.w], q)
    }

    /// Left-multiply row `h` by row `i`, tracking the sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let (hx, hz, hs) = self.product_into(
            &self.x[h * self.w..(h + 1) * self.w].to_vec(),
            &self.z[h * self.w..(h + 1) * self.w].to_vec(),
            self.sign[h],
            i,
        );
        self.x[h * self.w..(h + 1) * self.w].copy_from_slice(&hx);
        self.z[h * self.w..(h + 1) * self.w].copy_from_slice(&hz);
        self.sign[h] = hs;
    }

    /// Product of row `i` with an external Pauli `(hx, hz, hs)`.
    fn product_into(&self, hx: &[u64], hz: &[u64], hs: bool, i: usize) -> (Vec<u64>, Vec<u64>, bool) {
        let w = self.w;
        let ix = &self.x[i * w..(i + 1) * w];
        let iz = &self.z[i * w..(i + 1) * w];
        let mut sum = 2 * (hs as i32) + 2 * (self.sign[i] as i32);
        for q in 0..self.n {
            sum += g(bit(ix, q), bit(iz, q), bit(hx, q), bit(hz, q));
        }
        let sign = sum.rem_euclid(4) == 2;
        let x: Vec<u64> = hx.iter().zip(ix).map(|(a, b)| a ^ b).collect();
        let z: Vec<u64> = hz.iter().zip(iz).map(|(a, b)| a ^ b).collect();
        (x, z, sign)
    }

    fn anticommutes_row(&self, r: usize, px: &[u64], pz: &[u64]) -> bool {
        let w = self.w;
        let rx = &self.x[r * w..(r + 1) * w];
        let rz = &self.z[r * w..(r + 1) * w];
        let mut acc = 0u32;
        for k in 0..w {
            acc ^= ((rx[k] & pz[k]) ^ (rz[k] & px[k])).count_ones() & 1;
        }
        acc == 1
    }

    /// Measure qubit `q` in the Z basis; `true` is outcome `|1>`.
    pub fn measure_z(&mut self, q: usize, rng: &mut impl Rng) -> bool {
        let n = self.n;
        let w = self.w;
        if let Some(p) = (n..2 * n).find(|&r| self.xb(r, q)) {
            for r in 0..2 * n {
                if r != p && self.xb(r, q) {
                    self.rowsum(r, p);
                }
            }
            let d = p - n;
            self.x.copy_within(p * w..(p + 1) * w, d * w);
            self.z.copy_within(p * w..(p + 1) * w, d * w);
            self.sign[d] = self.sign[p];
            let outcome: bool = rng.random();
            self.x[p * w..(p + 1) * w].fill(0);
            self.z[p * w..(p + 1) * w].fill(0);
            bits::set(&mut self.z[p * w..(p + 1) * w], q, true);
            self.sign[p] = outcome;
            outcome
        } else {
            let mut acc = (vec![0u64; w], vec![0u64; w], false);
            for d in 0..n {
                if self.xb(d, q) {
                    acc = self.product_into(&acc.0, &acc.1, acc.2, d + n);
                }
            }
            acc.2
        }
    }

    /// Measure every qubit in order.
    pub fn measure_all(&mut self, rng: &mut impl Rng) -> Vec<bool> {
        (0..self.n).map(|q| self.measure_z(q, rng)).collect()
    }

    /// `<P>` for a signed Pauli string: `0` if it anticommutes with a
    /// stabilizer, else `±1`.
    pub fn expectation(&self, p: &PauliTerm) -> Result<i8, PauliError> {
        if p.n() != self.n {
            return Err(PauliError::DimensionMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        let (px, pz) = (p.x.words(), p.z.words());
        if (self.n..2 * self.n).any(|r| self.anticommutes_row(r, px, pz)) {
            return Ok(0);
        }
        let mut acc = (vec![0u64; self.w], vec![0u64; self.w], false);
        for d in 0..self.n {
            if self.anticommutes_row(d, px, pz) {
                acc = self.product_into(&acc.0, &acc.1, acc.2, d + self.n);
            }
        }
        debug_assert!(acc.0 == px && acc.1 == pz);
        Ok(if acc.2 == p.sign { 1 } else { -1 })
    }
}

/// Run `c` on a computational basis state.
pub fn stabilizer_run(c: &CliffordCircuit, basis_state: &[bool]) -> Result<StabilizerState, PauliError> {
    if basis_state.len() != c.n {
        return Err(PauliError::DimensionMismatch {
            expected: c.n,
            found: basis_state.len(),
        });
    }
    let mut s = StabilizerState::basis(basis_state);
    s.apply_circuit(c)?;
    Ok(s)
}

/// Measure all qubits of a copy of `state` with a seeded generator.
pub fn stabilizer_measure_z(state: &StabilizerState, rng_seed: u64) -> Vec<bool> {
    let mut s = state.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    s.measure_all(&mut rng)
}

pub fn pauli_expectation(state: &StabilizerState, p: &PauliTerm) -> Result<i8, PauliError> {
    state.expectation(p)
}
