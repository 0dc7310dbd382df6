//! Sign-augmented GF(2) tableaus of commuting Pauli Hamiltonians and their
//! conjugation by Clifford circuits.
//!
//! A row stores `x | z | s` plus a coefficient magnitude. The letters encode as
//! `X = (1,0)`, `Z = (0,1)`, `Y = (1,1)`, `I = (0,0)`; the represented operator
//! is `(-1)^s * coeff * P`. Signs only ever take the values ±1, which is closed
//! under conjugation of Hermitian Paulis by Cliffords.

mod bits;
pub mod dense;
pub mod io;
pub mod stabilizer;

pub use bits::BitVec;
pub(crate) use bits::{get as bit, ones as bit_ones, words_for};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("terms {0} and {1} anticommute")]
    NonCommutingTerms(usize, usize),
    #[error("term {row} has length {found}, expected {expected}")]
    LengthMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("qubit index {qubit} out of range for {n} qubits")]
    IndexOutOfRange { qubit: usize, n: usize },
    #[error("two-qubit gate needs distinct operands, got {0} twice")]
    RepeatedOperand(usize),
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{n} qubits exceeds the dense limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("tableau has a nonzero X block (row {0})")]
    XBlockNonZero(usize),
    #[error("a tableau needs at least one term")]
    Empty,
    #[error("invalid coefficient {0}")]
    BadCoefficient(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One Pauli string with a sign bit and a coefficient magnitude.
#[derive(Clone, PartialEq)]
pub struct PauliTerm {
    pub x: BitVec,
    pub z: BitVec,
    /// `true` for a negative prefactor.
    pub sign: bool,
    pub coeff: f64,
}

impl PauliTerm {
    pub fn new(x: BitVec, z: BitVec, sign: bool, coeff: f64) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch {
                row: 0,
                expected: x.len(),
                found: z.len(),
            });
        }
        if !(coeff.is_finite() && coeff >= 0.0) {
            return Err(PauliError::BadCoefficient(coeff));
        }
        Ok(PauliTerm { x, z, sign, coeff })
    }

    pub fn identity(n: usize) -> Self {
        PauliTerm {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            sign: false,
            coeff: 1.0,
        }
    }

    /// Build from a letter string over `IXYZ` and a signed coefficient.
    pub fn from_letters(letters: &str, value: f64) -> Result<Self, PauliError> {
        let n = letters.chars().count();
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for (q, c) in letters.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                }
                _ => {
                    return Err(PauliError::Parse {
                        line: 0,
                        msg: format!("bad Pauli letter {c:?}"),
                    })
                }
            }
        }
        let sign = value.is_sign_negative();
        PauliTerm::new(x, z, sign, value.abs())
    }

    /// Pure `Z` string on the given qubits.
    pub fn z_string(n: usize, qubits: &[usize], value: f64) -> Self {
        PauliTerm {
            x: BitVec::zeros(n),
            z: BitVec::from_ones(n, qubits),
            sign: value.is_sign_negative(),
            coeff: value.abs(),
        }
    }

    /// Pure `X` string on the given qubits.
    pub fn x_string(n: usize, qubits: &[usize], value: f64) -> Self {
        PauliTerm {
            x: BitVec::from_ones(n, qubits),
            z: BitVec::zeros(n),
            sign: value.is_sign_negative(),
            coeff: value.abs(),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    pub fn letters(&self) -> String {
        (0..self.n()).map(|q| self.letter(q)).collect()
    }

    /// Signed prefactor `(-1)^s * coeff`.
    pub fn value(&self) -> f64 {
        if self.sign {
            -self.coeff
        } else {
            self.coeff
        }
    }

    pub fn commutes_with(&self, other: &PauliTerm) -> bool {
        self.x.dot(&other.z) == other.x.dot(&self.z)
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.x.ones().chain(self.z.ones()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }
}

impl fmt::Debug for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+} {}", self.value(), self.letters())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    CX(usize, usize),
    CZ(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(a) | Gate::S(a) | Gate::Sdg(a) => (a, None),
            Gate::CX(a, b) | Gate::CZ(a, b) => (a, Some(b)),
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(a) => Gate::Sdg(a),
            Gate::Sdg(a) => Gate::S(a),
            g => g,
        }
    }

    pub fn check(&self, n: usize) -> Result<(), PauliError> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(PauliError::IndexOutOfRange { qubit: q, n });
            }
        }
        if b == Some(a) {
            return Err(PauliError::RepeatedOperand(a));
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::CX(..) => "CX",
            Gate::CZ(..) => "CZ",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.qubits() {
            (a, None) => write!(f, "{} {a}", self.name()),
            (a, Some(b)) => write!(f, "{} {a} {b}", self.name()),
        }
    }
}

/// Update one row (`x`, `z` word slices and sign) for conjugation `P -> U P U^†`.
/// The sign update reads the columns before they change.
#[inline]
pub(crate) fn conjugate_row(x: &mut [u64], z: &mut [u64], s: &mut bool, g: Gate) {
    #[inline]
    fn hadamard(x: &mut [u64], z: &mut [u64], s: &mut bool, a: usize) {
        let (xa, za) = (bits::get(x, a), bits::get(z, a));
        *s ^= xa & za;
        bits::set(x, a, za);
        bits::set(z, a, xa);
    }
    #[inline]
    fn phase(x: &mut [u64], z: &mut [u64], s: &mut bool, a: usize) {
        let (xa, za) = (bits::get(x, a), bits::get(z, a));
        *s ^= xa & za;
        bits::set(z, a, za ^ xa);
    }
    #[inline]
    fn cnot(x: &mut [u64], z: &mut [u64], s: &mut bool, a: usize, b: usize) {
        let (xa, za) = (bits::get(x, a), bits::get(z, a));
        let (xb, zb) = (bits::get(x, b), bits::get(z, b));
        *s ^= xa & zb & !(xb ^ za);
        bits::set(x, b, xb ^ xa);
        bits::set(z, a, za ^ zb);
    }
    match g {
        Gate::H(a) => hadamard(x, z, s, a),
        Gate::S(a) => phase(x, z, s, a),
        Gate::Sdg(a) => {
            for _ in 0..3 {
                phase(x, z, s, a)
            }
        }
        Gate::CX(a, b) => cnot(x, z, s, a, b),
        Gate::CZ(a, b) => {
            hadamard(x, z, s, b);
            cnot(x, z, s, a, b);
            hadamard(x, z, s, b);
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub h: usize,
    pub s: usize,
    pub sdg: usize,
    pub cx: usize,
    pub cz: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.h + self.s + self.sdg + self.cx + self.cz
    }
}

/// Ordered gate list. Applying the circuit to a tableau conjugates every row by
/// the unitary `U = g_k ... g_1`, with `g_1` the first listed gate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> Self {
        CliffordCircuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self, PauliError> {
        for g in &gates {
            g.check(n)?;
        }
        Ok(CliffordCircuit { n, gates })
    }

    pub fn push(&mut self, g: Gate) {
        debug_assert!(g.check(self.n).is_ok(), "invalid gate {g:?}");
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &CliffordCircuit) {
        assert_eq!(self.n, other.n, "circuit width mismatch");
        self.gates.extend_from_slice(&other.gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inverse(&self) -> CliffordCircuit {
        CliffordCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g {
                Gate::H(_) => c.h += 1,
                Gate::S(_) => c.s += 1,
                Gate::Sdg(_) => c.sdg += 1,
                Gate::CX(..) => c.cx += 1,
                Gate::CZ(..) => c.cz += 1,
            }
        }
        c
    }

    /// Depth under as-soon-as-possible scheduling.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n];
        let mut depth = 0;
        for g in &self.gates {
            let d = match g.qubits() {
                (a, None) => {
                    level[a] += 1;
                    level[a]
                }
                (a, Some(b)) => {
                    let l = level[a].max(level[b]) + 1;
                    level[a] = l;
                    level[b] = l;
                    l
                }
            };
            depth = depth.max(d);
        }
        depth
    }
}

const PAR_ROWS: usize = 4096;

/// `m` commuting Pauli rows over `n` qubits, bit-packed row-major.
#[derive(Clone, PartialEq)]
pub struct SignedTableau {
    n: usize,
    m: usize,
    w: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    sign: Vec<bool>,
    coeff: Vec<f64>,
}

impl SignedTableau {
    /// Build a tableau and check that all pairs of rows commute.
    pub fn from_terms(terms: &[PauliTerm]) -> Result<Self, PauliError> {
        let t = Self::from_terms_unchecked(terms)?;
        t.check_commuting()?;
        Ok(t)
    }

    /// Build a tableau without the pairwise commutation check.
    pub fn from_terms_unchecked(terms: &[PauliTerm]) -> Result<Self, PauliError> {
        let first = terms.first().ok_or(PauliError::Empty)?;
        let n = first.n();
        let w = words_for(n);
        let m = terms.len();
        let mut t = SignedTableau {
            n,
            m,
            w,
            x: Vec::with_capacity(m * w),
            z: Vec::with_capacity(m * w),
            sign: Vec::with_capacity(m),
            coeff: Vec::with_capacity(m),
        };
        for (row, term) in terms.iter().enumerate() {
            if term.n() != n || term.z.len() != n {
                return Err(PauliError::LengthMismatch {
                    row,
                    expected: n,
                    found: term.n(),
                });
            }
            if !(term.coeff.is_finite() && term.coeff >= 0.0) {
                return Err(PauliError::BadCoefficient(term.coeff));
            }
            t.x.extend_from_slice(term.x.words());
            t.z.extend_from_slice(term.z.words());
            t.sign.push(term.sign);
            t.coeff.push(term.coeff);
        }
        Ok(t)
    }

    /// First anticommuting pair in row-major order, if any.
    pub fn check_commuting(&self) -> Result<(), PauliError> {
        let bad = (0..self.m).into_par_iter().find_map_first(|i| {
            (i + 1..self.m)
                .find(|&j| self.symplectic(i, j))
                .map(|j| (i, j))
        });
        match bad {
            Some((i, j)) => Err(PauliError::NonCommutingTerms(i, j)),
            None => Ok(()),
        }
    }

    /// Symplectic product of rows `i` and `j` (true means they anticommute).
    pub fn symplectic(&self, i: usize, j: usize) -> bool {
        let (xi, zi) = (self.x_row(i), self.z_row(i));
        let (xj, zj) = (self.x_row(j), self.z_row(j));
        let mut acc = 0u32;
        for k in 0..self.w {
            acc ^= ((xi[k] & zj[k]) ^ (zi[k] & xj[k])).count_ones() & 1;
        }
        acc == 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub(crate) fn words(&self) -> usize {
        self.w
    }

    /// Packed Z block, row-major.
    pub(crate) fn z_words_mut(&mut self) -> &mut [u64] {
        &mut self.z
    }

    pub fn x_row(&self, i: usize) -> &[u64] {
        &self.x[i * self.w..(i + 1) * self.w]
    }

    pub fn z_row(&self, i: usize) -> &[u64] {
        &self.z[i * self.w..(i + 1) * self.w]
    }

    pub fn x_bit(&self, i: usize, q: usize) -> bool {
        bit(self.x_row(i), q)
    }

    pub fn z_bit(&self, i: usize, q: usize) -> bool {
        bit(self.z_row(i), q)
    }

    pub fn sign(&self, i: usize) -> bool {
        self.sign[i]
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeff[i]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeff
    }

    pub fn signs(&self) -> &[bool] {
        &self.sign
    }

    /// Signed prefactor of row `i`.
    pub fn value(&self, i: usize) -> f64 {
        if self.sign[i] {
            -self.coeff[i]
        } else {
            self.coeff[i]
        }
    }

    pub fn set_coeff(&mut self, i: usize, c: f64) {
        assert!(c.is_finite() && c >= 0.0);
        self.coeff[i] = c;
    }

    pub fn row(&self, i: usize) -> PauliTerm {
        PauliTerm {
            x: BitVec::from_words(self.n, self.x_row(i)),
            z: BitVec::from_words(self.n, self.z_row(i)),
            sign: self.sign[i],
            coeff: self.coeff[i],
        }
    }

    pub fn rows(&self) -> Vec<PauliTerm> {
        (0..self.m).map(|i| self.row(i)).collect()
    }

    /// True when the X block is identically zero.
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    pub fn require_diagonal(&self) -> Result<(), PauliError> {
        match (0..self.m).find(|&i| self.x_row(i).iter().any(|&w| w != 0)) {
            Some(i) => Err(PauliError::XBlockNonZero(i)),
            None => Ok(()),
        }
    }

    /// Qubits carrying a `Z` in row `i`.
    pub fn z_support(&self, i: usize) -> Vec<usize> {
        bit_ones(self.z_row(i)).collect()
    }

    pub fn support(&self, i: usize) -> Vec<usize> {
        self.row(i).support()
    }

    pub fn apply_gate(&mut self, g: Gate) -> Result<(), PauliError> {
        g.check(self.n)?;
        self.apply_gate_unchecked(g);
        Ok(())
    }

    pub(crate) fn apply_gate_unchecked(&mut self, g: Gate) {
        let w = self.w;
        if self.m >= PAR_ROWS {
            self.x
                .par_chunks_mut(w)
                .zip(self.z.par_chunks_mut(w))
                .zip(self.sign.par_iter_mut())
                .for_each(|((x, z), s)| conjugate_row(x, z, s, g));
        } else {
            for ((x, z), s) in self
                .x
                .chunks_mut(w)
                .zip(self.z.chunks_mut(w))
                .zip(self.sign.iter_mut())
            {
                conjugate_row(x, z, s, g);
            }
        }
    }

    /// Apply a Z-basis CX to rows that are already diagonal. Only the control
    /// column changes and no sign flips occur when every row has `x = 0`.
    pub(crate) fn apply_cx_diagonal(&mut self, c: usize, t: usize) {
        let w = self.w;
        for z in self.z.chunks_mut(w) {
            if bit(z, t) {
                bits::flip(z, c);
            }
        }
    }

    pub fn apply_circuit(&mut self, c: &CliffordCircuit) -> Result<(), PauliError> {
        if c.n != self.n {
            return Err(PauliError::DimensionMismatch {
                expected: self.n,
                found: c.n,
            });
        }
        for g in &c.gates {
            g.check(self.n)?;
        }
        for &g in &c.gates {
            self.apply_gate_unchecked(g);
        }
        Ok(())
    }

    /// Conjugated copy, leaving `self` untouched.
    pub fn conjugated(&self, c: &CliffordCircuit) -> Result<SignedTableau, PauliError> {
        let mut t = self.clone();
        t.apply_circuit(c)?;
        Ok(t)
    }

    /// Rows restricted to a subset, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> SignedTableau {
        let terms: Vec<PauliTerm> = rows.iter().map(|&i| self.row(i)).collect();
        SignedTableau::from_terms_unchecked(&terms).expect("nonempty selection")
    }

    /// Energy of a computational basis configuration on a diagonal tableau.
    /// `spins[q] = +1` means qubit `q` is `|0>`.
    pub fn diagonal_energy(&self, spins: &[i8]) -> f64 {
        (0..self.m).map(|i| self.diagonal_term_value(i, spins)).sum()
    }

    /// Contribution of row `i` for a basis configuration; requires `x = 0` on that row.
    pub fn diagonal_term_value(&self, i: usize, spins: &[i8]) -> f64 {
        debug_assert!(self.x_row(i).iter().all(|&w| w == 0));
        let parity = bit_ones(self.z_row(i)).filter(|&q| spins[q] < 0).count() & 1;
        let v = self.value(i);
        if parity == 1 {
            -v
        } else {
            v
        }
    }
}

impl fmt::Debug for SignedTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignedTableau n={} m={}", self.n, self.m)?;
        for i in 0..self.m {
            let xs: String = (0..self.n)
                .map(|q| if self.x_bit(i, q) { '1' } else { '0' })
                .collect();
            let zs: String = (0..self.n)
                .map(|q| if self.z_bit(i, q) { '1' } else { '0' })
                .collect();
            writeln!(
                f,
                "{xs}|{zs}|{} {}",
                self.sign[i] as u8, self.coeff[i]
            )?;
        }
        Ok(())
    }
}

/// Bits of a configuration string over `{+,-}`; `+` is `|0>`.
pub fn spins_from_str(s: &str) -> Option<Vec<i8>> {
    s.chars()
        .map(|c| match c {
            '+' => Some(1),
            '-' => Some(-1),
            _ => None,
        })
        .collect()
}

pub fn spins_to_str(spins: &[i8]) -> String {
    spins.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}
