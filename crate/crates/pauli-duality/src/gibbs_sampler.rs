//! Classical Gibbs samplers for dual models and Gibbs-state preparation
//! through the inverse duality circuit.
//!
//! Spins take values `x ∈ {+1, -1}`; `+1` is the computational state `|0>`.
//! Transfer-matrix samplers index the two values of a spin as states `0`
//! (`+1`) and `1` (`-1`), which also fixes the tie-break at `β = ∞`.

use crate::models::LatticeModel;
use crate::pauli_core::{bit_ones, CliffordCircuit, PauliError, SignedTableau};
use crate::structure::{self, Classification, Duality, StructureError, StructureOptions};
use crate::{lit, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("inverse temperature must be finite and non-negative, got {0}")]
    NonFinite(f64),
    #[error("bad lasso topology: {0}")]
    BadTopology(String),
    #[error("component {0} has unsupported classification {1}")]
    UnsupportedClassification(usize, String),
    #[error("component {0} needs Glauber dynamics, but beta {1} exceeds the threshold {2}")]
    TemperatureOutOfRange(usize, f64, f64),
    #[error("configuration has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("component {0} is sampled approximately; no exact probability")]
    Approximate(usize),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Inverse temperature; `Infinite` selects ground states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta<T> {
    Finite(T),
    Infinite,
}

impl Beta<f64> {
    pub fn parse(s: &str) -> Result<Self, SamplerError> {
        match s {
            "inf" | "infinity" | "Inf" => Ok(Beta::Infinite),
            _ => {
                let b: f64 = s.parse().map_err(|_| SamplerError::NonFinite(f64::NAN))?;
                Beta::new(b)
            }
        }
    }
}

impl<T: Real> Beta<T> {
    pub fn new(b: T) -> Result<Self, SamplerError> {
        if b.is_finite() && b >= T::zero() {
            Ok(Beta::Finite(b))
        } else {
            Err(SamplerError::NonFinite(nalgebra::try_convert(b).unwrap_or(f64::NAN)))
        }
    }
}

fn spin_of(state: usize) -> i8 {
    if state == 0 {
        1
    } else {
        -1
    }
}

fn log_sum_exp<T: Real>(xs: &[Option<T>]) -> Option<T> {
    let m = xs.iter().flatten().copied().reduce(|a, b| a.max(b))?;
    let s = xs
        .iter()
        .flatten()
        .fold(T::zero(), |acc, &x| acc + (x - m).exp());
    Some(m + s.ln())
}

/// Normalized probabilities from log weights.
fn normalize<T: Real>(lw: &[Option<T>]) -> Vec<T> {
    let z = log_sum_exp(lw).expect("some state allowed");
    lw.iter()
        .map(|x| x.map_or(T::zero(), |x| (x - z).exp()))
        .collect()
}

/// Index of the first minimum; `None` entries are excluded.
fn argmin<T: Real>(xs: &[Option<T>]) -> usize {
    let mut best: Option<(usize, T)> = None;
    for (i, x) in xs.iter().enumerate() {
        if let Some(x) = *x {
            if best.is_none_or(|(_, b)| x < b) {
                best = Some((i, x));
            }
        }
    }
    best.expect("some state allowed").0
}

fn draw<T: Real>(p: &[T], rng: &mut impl Rng) -> usize {
    let u: T = lit(rng.random::<f64>());
    let mut acc = T::zero();
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    p.iter().rposition(|&x| x > T::zero()).unwrap_or(0)
}

/// Nearest-neighbour chain of sites with finitely many states each.
/// `E(s) = Σ_k unary[k][s_k] + Σ_k pair[k][s_k][s_{k+1}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferChain<T> {
    pub unary: Vec<Vec<T>>,
    pub pair: Vec<Vec<Vec<T>>>,
}

/// Backward messages: log suffix partition functions for finite β, suffix
/// minimum energies for β = ∞. `None` marks a pinned-out state.
#[derive(Clone, Debug)]
pub struct Messages<T> {
    beta: Beta<T>,
    m: Vec<Vec<Option<T>>>,
}

impl<T: Real> TransferChain<T> {
    pub fn len(&self) -> usize {
        self.unary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unary.is_empty()
    }

    pub fn energy(&self, s: &[usize]) -> T {
        let mut e = T::zero();
        for k in 0..self.len() {
            e += self.unary[k][s[k]];
            if k + 1 < self.len() {
                e += self.pair[k][s[k]][s[k + 1]];
            }
        }
        e
    }

    pub fn messages(&self, beta: Beta<T>, pins: &[Option<usize>]) -> Messages<T> {
        let k_max = self.len();
        let mut m: Vec<Vec<Option<T>>> = vec![Vec::new(); k_max];
        for k in (0..k_max).rev() {
            let ns = self.unary[k].len();
            m[k] = (0..ns)
                .map(|s| {
                    if pins.get(k).copied().flatten().is_some_and(|p| p != s) {
                        return None;
                    }
                    let u = self.unary[k][s];
                    let rest = if k + 1 < k_max {
                        let next: Vec<Option<T>> = m[k + 1]
                            .iter()
                            .enumerate()
                            .map(|(t, mt)| mt.map(|v| self.step(beta, k, s, t, v)))
                            .collect();
                        match beta {
                            Beta::Finite(_) => log_sum_exp(&next)?,
                            Beta::Infinite => next[argmin(&next)]?,
                        }
                    } else {
                        T::zero()
                    };
                    Some(match beta {
                        Beta::Finite(b) => rest - b * u,
                        Beta::Infinite => rest + u,
                    })
                })
                .collect();
        }
        Messages { beta, m }
    }

    /// Contribution of moving from state `s` at site `k` to `t` at `k + 1`,
    /// given the message `v` of site `k + 1`.
    fn step(&self, beta: Beta<T>, k: usize, s: usize, t: usize, v: T) -> T {
        match beta {
            Beta::Finite(b) => v - b * self.pair[k][s][t],
            Beta::Infinite => v + self.pair[k][s][t],
        }
    }

    /// Distribution of the first site.
    pub fn first(&self, msg: &Messages<T>) -> Vec<T> {
        self.dist(msg.beta, &msg.m[0])
    }

    /// Distribution of site `k + 1` given state `s` at site `k`.
    pub fn next(&self, msg: &Messages<T>, k: usize, s: usize) -> Vec<T> {
        let lw: Vec<Option<T>> = msg.m[k + 1]
            .iter()
            .enumerate()
            .map(|(t, mt)| mt.map(|v| self.step(msg.beta, k, s, t, v)))
            .collect();
        self.dist(msg.beta, &lw)
    }

    fn dist(&self, beta: Beta<T>, lw: &[Option<T>]) -> Vec<T> {
        match beta {
            Beta::Finite(_) => normalize(lw),
            Beta::Infinite => {
                let mut lw_min: Vec<Option<T>> = lw.to_vec();
                // Messages hold energies here; smallest wins, ties to the lowest state.
                let best = argmin(&lw_min);
                for (i, x) in lw_min.iter_mut().enumerate() {
                    *x = Some(if i == best { T::one() } else { T::zero() });
                }
                lw_min.into_iter().map(|x| x.unwrap_or(T::zero())).collect()
            }
        }
    }

    /// Log partition function (finite β) or ground energy (β = ∞) under pins.
    pub fn log_partition(&self, msg: &Messages<T>) -> Option<T> {
        match msg.beta {
            Beta::Finite(_) => log_sum_exp(&msg.m[0]),
            Beta::Infinite => msg.m[0][argmin(&msg.m[0])],
        }
    }

    pub fn sample_with(&self, msg: &Messages<T>, rng: &mut impl Rng) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.len());
        if self.is_empty() {
            return s;
        }
        s.push(draw(&self.first(msg), rng));
        for k in 0..self.len() - 1 {
            let p = self.next(msg, k, s[k]);
            s.push(draw(&p, rng));
        }
        s
    }

    /// Probability that `sample_with` returns `s`, as the product of the
    /// conditionals it draws from.
    pub fn probability_with(&self, msg: &Messages<T>, s: &[usize]) -> T {
        if self.is_empty() {
            return T::one();
        }
        let mut p = self.first(msg)[s[0]];
        for k in 0..self.len() - 1 {
            p *= self.next(msg, k, s[k])[s[k + 1]];
        }
        p
    }
}

/// Open Ising chain `E(x) = Σ J_i x_i x_{i+1} + Σ h_i x_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalChain<T> {
    pub bonds: Vec<T>,
    pub fields: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalGibbsSample<T> {
    pub config: Vec<i8>,
    pub energy: T,
}

fn states_of(config: &[i8]) -> Vec<usize> {
    config.iter().map(|&x| usize::from(x < 0)).collect()
}

impl<T: Real> ClassicalChain<T> {
    pub fn new(bonds: Vec<T>, fields: Vec<T>) -> Self {
        assert_eq!(bonds.len() + 1, fields.len(), "chain needs N-1 bonds for N fields");
        ClassicalChain { bonds, fields }
    }

    pub fn n(&self) -> usize {
        self.fields.len()
    }

    pub fn energy(&self, x: &[i8]) -> T {
        let f = |v: i8| -> T { lit(v as f64) };
        let mut e = T::zero();
        for (i, &h) in self.fields.iter().enumerate() {
            e += h * f(x[i]);
        }
        for (i, &j) in self.bonds.iter().enumerate() {
            e += j * f(x[i] * x[i + 1]);
        }
        e
    }

    pub fn transfer(&self) -> TransferChain<T> {
        let pm = |s: usize| -> T { lit(spin_of(s) as f64) };
        TransferChain {
            unary: self.fields.iter().map(|&h| vec![h, -h]).collect(),
            pair: self
                .bonds
                .iter()
                .map(|&j| (0..2).map(|s| (0..2).map(|t| j * pm(s) * pm(t)).collect()).collect())
                .collect(),
        }
    }
}

/// Exact Gibbs sample of an open chain.
pub fn sample_chain<T: Real>(
    chain: &ClassicalChain<T>,
    beta: Beta<T>,
    rng: &mut impl Rng,
) -> ClassicalGibbsSample<T> {
    let tc = chain.transfer();
    let msg = tc.messages(beta, &[]);
    let config: Vec<i8> = tc.sample_with(&msg, rng).into_iter().map(spin_of).collect();
    let energy = chain.energy(&config);
    ClassicalGibbsSample { config, energy }
}

/// Probability with which `sample_chain` returns `config`.
pub fn chain_probability<T: Real>(chain: &ClassicalChain<T>, beta: Beta<T>, config: &[i8]) -> T {
    let tc = chain.transfer();
    let msg = tc.messages(beta, &[]);
    tc.probability_with(&msg, &states_of(config))
}

/// Chain `0..N` plus a bond of strength `extra` between spin `N-1` and spin `junction`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LassoChain<T> {
    pub chain: ClassicalChain<T>,
    pub junction: usize,
    pub extra: T,
}

impl<T: Real> LassoChain<T> {
    pub fn new(chain: ClassicalChain<T>, junction: usize, extra: T) -> Result<Self, SamplerError> {
        let n = chain.n();
        if n < 3 || junction + 3 > n {
            return Err(SamplerError::BadTopology(format!(
                "junction {junction} must be at most N-3 = {} for N = {n}",
                n as isize - 3
            )));
        }
        Ok(LassoChain {
            chain,
            junction,
            extra,
        })
    }

    pub fn energy(&self, x: &[i8]) -> T {
        let n = self.chain.n();
        self.chain.energy(x) + self.extra * lit::<T>((x[self.junction] * x[n - 1]) as f64)
    }

    /// Distribution over the four joint states of `(junction, last)`, with the
    /// pinned messages of each branch.
    fn branches(&self, beta: Beta<T>) -> (TransferChain<T>, Vec<T>, Vec<Messages<T>>) {
        let tc = self.chain.transfer();
        let n = self.chain.n();
        let mut msgs = Vec::with_capacity(4);
        let mut lw = Vec::with_capacity(4);
        for a in 0..2 {
            for b in 0..2 {
                let mut pins = vec![None; n];
                pins[self.junction] = Some(a);
                pins[n - 1] = Some(b);
                let msg = tc.messages(beta, &pins);
                let k = self.extra * lit::<T>((spin_of(a) * spin_of(b)) as f64);
                let base = tc.log_partition(&msg);
                lw.push(base.map(|v| match beta {
                    Beta::Finite(bb) => v - bb * k,
                    Beta::Infinite => v + k,
                }));
                msgs.push(msg);
            }
        }
        let p = tc.dist(beta, &lw);
        (tc, p, msgs)
    }
}

/// Exact Gibbs sample of a lasso chain: draw the junction pair from its
/// marginal, then the rest of the chain given the pair.
pub fn sample_lasso<T: Real>(
    lasso: &LassoChain<T>,
    beta: Beta<T>,
    rng: &mut impl Rng,
) -> ClassicalGibbsSample<T> {
    let (tc, p, msgs) = lasso.branches(beta);
    let branch = draw(&p, rng);
    let config: Vec<i8> = tc
        .sample_with(&msgs[branch], rng)
        .into_iter()
        .map(spin_of)
        .collect();
    let energy = lasso.energy(&config);
    ClassicalGibbsSample { config, energy }
}

/// Probability with which `sample_lasso` returns `config`.
pub fn lasso_probability<T: Real>(lasso: &LassoChain<T>, beta: Beta<T>, config: &[i8]) -> T {
    let (tc, p, msgs) = lasso.branches(beta);
    let s = states_of(config);
    let n = lasso.chain.n();
    let branch = 2 * s[lasso.junction] + s[n - 1];
    p[branch] * tc.probability_with(&msgs[branch], &s)
}

/// Diagonal Hamiltonian `E(x) = Σ_t c_t Π_{q ∈ S_t} x_q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalHamiltonian<T> {
    pub n: usize,
    pub terms: Vec<(Vec<usize>, T)>,
}

impl<T: Real> ClassicalHamiltonian<T> {
    /// All rows of a diagonal tableau.
    pub fn from_tableau(t: &SignedTableau) -> Result<Self, PauliError> {
        t.require_diagonal()?;
        Ok(ClassicalHamiltonian {
            n: t.n(),
            terms: (0..t.m())
                .map(|i| (bit_ones(t.z_row(i)).collect(), lit(t.value(i))))
                .collect(),
        })
    }

    pub fn energy(&self, x: &[i8]) -> T {
        self.terms.iter().fold(T::zero(), |e, (s, c)| {
            let neg = s.iter().filter(|&&q| x[q] < 0).count() % 2 == 1;
            if neg {
                e - *c
            } else {
                e + *c
            }
        })
    }
}

/// Heat-bath Glauber dynamics from a uniform start; approximate unless
/// `β = 0` or the spins do not interact.
pub fn sample_glauber<T: Real>(
    h: &ClassicalHamiltonian<T>,
    beta: T,
    sweeps: usize,
    rng: &mut impl Rng,
) -> ClassicalGibbsSample<T> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.n];
    for (t, (s, _)) in h.terms.iter().enumerate() {
        for &q in s {
            incident[q].push(t);
        }
    }
    let mut x: Vec<i8> = (0..h.n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    let two: T = lit(2.0);
    for _ in 0..sweeps {
        for q in 0..h.n {
            // E(x_q = +1) - E(x_q = -1).
            let mut delta = T::zero();
            for &t in &incident[q] {
                let (s, c) = &h.terms[t];
                let neg = s.iter().filter(|&&r| r != q && x[r] < 0).count() % 2 == 1;
                delta += if neg { -*c } else { *c };
            }
            delta *= two;
            let p_up = T::one() / (T::one() + (beta * delta).exp());
            let u: T = lit(rng.random::<f64>());
            x[q] = if u < p_up { 1 } else { -1 };
        }
    }
    let energy = h.energy(&x);
    ClassicalGibbsSample { config: x, energy }
}

/// How free spins are set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreeSpins {
    /// Independent uniform bits.
    Random,
    /// Fixed values, one per free spin in index order.
    Fixed(Vec<i8>),
}

#[derive(Clone, Debug)]
pub struct SamplerOptions {
    pub free: FreeSpins,
    /// Largest β at which Glauber dynamics is trusted.
    pub glauber_beta_max: f64,
    /// Sweeps per Glauber sample; default `64 n ⌈β⌉`.
    pub glauber_sweeps: Option<usize>,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            free: FreeSpins::Random,
            glauber_beta_max: 0.25,
            glauber_sweeps: None,
        }
    }
}

#[derive(Clone, Debug)]
enum Part<T> {
    /// Constant energy of identity rows.
    Constant(T),
    /// Sites are blocks of spins; a block state's bit `b` marks spin `b` as `-1`.
    Transfer {
        blocks: Vec<Vec<usize>>,
        chain: TransferChain<T>,
        msg: Messages<T>,
    },
    Lasso {
        spins: Vec<usize>,
        lasso: LassoChain<T>,
    },
    Glauber {
        spins: Vec<usize>,
        ham: ClassicalHamiltonian<T>,
        sweeps: usize,
    },
}

/// Samplers for every component of a classical dual.
#[derive(Clone, Debug)]
pub struct DualSampler<T> {
    n: usize,
    beta: Beta<T>,
    parts: Vec<(usize, Part<T>)>,
    free: Vec<usize>,
    free_mode: FreeSpins,
    dual: ClassicalHamiltonian<T>,
}

fn block_state(x: &[i8], block: &[usize]) -> usize {
    block
        .iter()
        .enumerate()
        .fold(0, |s, (b, &q)| if x[q] < 0 { s | (1 << b) } else { s })
}

/// Transfer chain over consecutive blocks. Every row must touch one block or
/// two consecutive blocks.
fn block_transfer<T: Real>(
    blocks: &[Vec<usize>],
    rows: &[(Vec<usize>, T)],
) -> Result<TransferChain<T>, String> {
    let mut where_: HashMap<usize, (usize, usize)> = HashMap::new();
    for (k, b) in blocks.iter().enumerate() {
        for (pos, &q) in b.iter().enumerate() {
            where_.insert(q, (k, pos));
        }
    }
    let size = |k: usize| 1usize << blocks[k].len();
    let mut unary: Vec<Vec<T>> = (0..blocks.len()).map(|k| vec![T::zero(); size(k)]).collect();
    let mut pair: Vec<Vec<Vec<T>>> = (0..blocks.len().saturating_sub(1))
        .map(|k| vec![vec![T::zero(); size(k + 1)]; size(k)])
        .collect();
    let parity = |mask: usize, s: usize| (mask & s).count_ones() % 2 == 1;
    for (spins, c) in rows {
        let mut masks: Vec<(usize, usize)> = Vec::new();
        for q in spins {
            let &(k, pos) = where_.get(q).ok_or_else(|| format!("spin {q} outside blocks"))?;
            match masks.iter_mut().find(|(kk, _)| *kk == k) {
                Some((_, m)) => *m |= 1 << pos,
                None => masks.push((k, 1 << pos)),
            }
        }
        masks.sort_unstable();
        match masks.as_slice() {
            [] => {}
            [(k, m)] => {
                for (s, u) in unary[*k].iter_mut().enumerate() {
                    *u += if parity(*m, s) { -*c } else { *c };
                }
            }
            [(k, m1), (k2, m2)] if *k2 == k + 1 => {
                for (s, row) in pair[*k].iter_mut().enumerate() {
                    for (t, e) in row.iter_mut().enumerate() {
                        *e += if parity(*m1, s) ^ parity(*m2, t) { -*c } else { *c };
                    }
                }
            }
            _ => return Err(format!("term on {spins:?} is not nearest-neighbour")),
        }
    }
    Ok(TransferChain { unary, pair })
}

impl<T: Real> DualSampler<T> {
    pub fn new(d: &Duality, beta: Beta<T>, opts: &SamplerOptions) -> Result<Self, SamplerError> {
        let dual: ClassicalHamiltonian<T> = ClassicalHamiltonian::from_tableau(&d.dual)?;
        let mut parts = Vec::new();
        for comp in &d.report.components {
            let rows: Vec<(Vec<usize>, T)> = comp.terms.iter().map(|&i| dual.terms[i].clone()).collect();
            let bad = |msg: String| SamplerError::UnsupportedClassification(comp.id, msg);
            let part = match &comp.classification {
                _ if comp.spins.is_empty() => Part::Constant(rows.iter().fold(T::zero(), |a, r| a + r.1)),
                Classification::NonInteracting1Body
                | Classification::IsingChainEndFields { .. }
                | Classification::ThreeSpinChain
                | Classification::NearestNeighbor1D { .. } => {
                    let blocks: Vec<Vec<usize>> = if comp.blocks.is_empty() {
                        comp.order.iter().map(|&q| vec![q]).collect()
                    } else {
                        let mut it = comp.order.iter().copied();
                        comp.blocks.iter().map(|&b| it.by_ref().take(b).collect()).collect()
                    };
                    let chain = block_transfer(&blocks, &rows).map_err(bad)?;
                    let msg = chain.messages(beta, &[]);
                    Part::Transfer { blocks, chain, msg }
                }
                Classification::LassoIsingChain { junction, .. } => {
                    let order = &comp.order;
                    let n = order.len();
                    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &q)| (q, k)).collect();
                    let mut bonds = vec![T::zero(); n - 1];
                    let mut fields = vec![T::zero(); n];
                    let mut extra = T::zero();
                    for (s, c) in &rows {
                        match s.as_slice() {
                            [a] => fields[pos[a]] += *c,
                            [a, b] => {
                                let (i, j) = (pos[a].min(pos[b]), pos[a].max(pos[b]));
                                if j == i + 1 {
                                    bonds[i] += *c;
                                } else if i == *junction && j == n - 1 {
                                    extra += *c;
                                } else {
                                    return Err(bad(format!("bond {i}-{j} off the lasso")));
                                }
                            }
                            _ => return Err(bad("lasso term of weight > 2".into())),
                        }
                    }
                    let lasso = LassoChain::new(ClassicalChain::new(bonds, fields), *junction, extra)?;
                    Part::Lasso {
                        spins: order.clone(),
                        lasso,
                    }
                }
                Classification::BoundedDegreeLocal { .. } => {
                    let b: f64 = match beta {
                        Beta::Finite(b) => nalgebra::try_convert(b).unwrap_or(f64::INFINITY),
                        Beta::Infinite => f64::INFINITY,
                    };
                    if b > opts.glauber_beta_max {
                        return Err(SamplerError::TemperatureOutOfRange(comp.id, b, opts.glauber_beta_max));
                    }
                    let pos: HashMap<usize, usize> = comp.spins.iter().enumerate().map(|(k, &q)| (q, k)).collect();
                    let ham = ClassicalHamiltonian {
                        n: comp.spins.len(),
                        terms: rows
                            .iter()
                            .map(|(s, c)| (s.iter().map(|q| pos[q]).collect(), *c))
                            .collect(),
                    };
                    let sweeps = opts
                        .glauber_sweeps
                        .unwrap_or(64 * comp.spins.len() * b.ceil() as usize);
                    Part::Glauber {
                        spins: comp.spins.clone(),
                        ham,
                        sweeps,
                    }
                }
                other => return Err(bad(other.name().to_string())),
            };
            parts.push((comp.id, part));
        }
        if let FreeSpins::Fixed(v) = &opts.free {
            if v.len() != d.report.free_spins {
                return Err(SamplerError::Length {
                    expected: d.report.free_spins,
                    found: v.len(),
                });
            }
        }
        Ok(DualSampler {
            n: d.dual.n(),
            beta,
            parts,
            free: d.report.free_spin_indices.clone(),
            free_mode: opts.free.clone(),
            dual,
        })
    }

    pub fn is_exact(&self) -> bool {
        !self.parts.iter().any(|(_, p)| matches!(p, Part::Glauber { .. }))
    }

    /// Energy of a dual configuration.
    pub fn energy(&self, x: &[i8]) -> T {
        self.dual.energy(x)
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Shot<T> {
        let mut x = vec![1i8; self.n];
        let mut comp_e = Vec::with_capacity(self.parts.len());
        for (_, part) in &self.parts {
            match part {
                Part::Constant(c) => comp_e.push(*c),
                Part::Transfer { blocks, chain, msg } => {
                    let s = chain.sample_with(msg, rng);
                    for (b, &st) in blocks.iter().zip(&s) {
                        for (pos, &q) in b.iter().enumerate() {
                            x[q] = if st >> pos & 1 == 1 { -1 } else { 1 };
                        }
                    }
                    comp_e.push(chain.energy(&s));
                }
                Part::Lasso { spins, lasso } => {
                    let g = sample_lasso(lasso, self.beta, rng);
                    for (&q, &v) in spins.iter().zip(&g.config) {
                        x[q] = v;
                    }
                    comp_e.push(g.energy);
                }
                Part::Glauber { spins, ham, sweeps } => {
                    let b = match self.beta {
                        Beta::Finite(b) => b,
                        Beta::Infinite => unreachable!("rejected at construction"),
                    };
                    let g = sample_glauber(ham, b, *sweeps, rng);
                    for (&q, &v) in spins.iter().zip(&g.config) {
                        x[q] = v;
                    }
                    comp_e.push(g.energy);
                }
            }
        }
        match &self.free_mode {
            FreeSpins::Random => {
                for &q in &self.free {
                    x[q] = if rng.random::<bool>() { 1 } else { -1 };
                }
            }
            FreeSpins::Fixed(v) => {
                for (&q, &val) in self.free.iter().zip(v) {
                    x[q] = val;
                }
            }
        }
        let energy = self.energy(&x);
        Shot {
            config: x,
            energy,
            component_energies: comp_e,
            approximate: !self.is_exact(),
        }
    }

    /// Probability with which `sample` returns `x`.
    pub fn probability(&self, x: &[i8]) -> Result<T, SamplerError> {
        if x.len() != self.n {
            return Err(SamplerError::Length {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut p = T::one();
        for (id, part) in &self.parts {
            match part {
                Part::Constant(_) => {}
                Part::Transfer { blocks, chain, msg } => {
                    let s: Vec<usize> = blocks.iter().map(|b| block_state(x, b)).collect();
                    p *= chain.probability_with(msg, &s);
                }
                Part::Lasso { spins, lasso } => {
                    let local: Vec<i8> = spins.iter().map(|&q| x[q]).collect();
                    p *= lasso_probability(lasso, self.beta, &local);
                }
                Part::Glauber { .. } => return Err(SamplerError::Approximate(*id)),
            }
        }
        match &self.free_mode {
            FreeSpins::Random => {
                let half: T = lit(0.5);
                for _ in &self.free {
                    p *= half;
                }
            }
            FreeSpins::Fixed(v) => {
                if self.free.iter().zip(v).any(|(&q, &val)| x[q] != val) {
                    return Ok(T::zero());
                }
            }
        }
        Ok(p)
    }
}

/// One prepared shot: the dual configuration `x` (prepare `C^† |x>`), its
/// energy and the energy of each component.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Shot<T> {
    pub config: Vec<i8>,
    pub energy: T,
    pub component_energies: Vec<T>,
    pub approximate: bool,
}

#[derive(Clone, Debug)]
pub struct GibbsPreparation<T> {
    /// `C` with `C H C^†` classical.
    pub circuit: CliffordCircuit,
    /// `C^†`: apply to `|x>` to prepare the corresponding eigenstate of `H`.
    pub preparation: CliffordCircuit,
    pub duality: Duality,
    pub shots: Vec<Shot<T>>,
}

/// Generator for shot `k` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Dualize `model`, sample its classical Gibbs state `shots` times and return
/// the configurations with the inverse circuit.
pub fn prepare_gibbs<T: Real>(
    model: &LatticeModel,
    beta: Beta<T>,
    shots: usize,
    seed: u64,
    opts: &SamplerOptions,
) -> Result<GibbsPreparation<T>, SamplerError> {
    let t = model.tableau()?;
    let duality = structure::dualize(&t, Some(&model.species()), &StructureOptions::default())?;
    let sampler = DualSampler::new(&duality, beta, opts)?;
    let shots: Vec<Shot<T>> = (0..shots as u64)
        .into_par_iter()
        .map(|k| sampler.sample(&mut shot_rng(seed, k)))
        .collect();
    Ok(GibbsPreparation {
        preparation: duality.circuit.inverse(),
        circuit: duality.circuit.clone(),
        duality,
        shots,
    })
}
