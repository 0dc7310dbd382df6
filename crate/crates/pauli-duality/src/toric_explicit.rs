//! Closed-form duality circuit for the 2D toric code: a commuting CX layer that
//! separates stars from plaquettes, Hadamards on the star side, and CX combs
//! and ladders that turn each side into an Ising chain with end fields.
//!
//! Spins are `(i, j, h|v)` with flat index `2 (i L + j) + {0 for h, 1 for v}`.

use crate::models::{self, ModelName};
use crate::pauli_core::{CliffordCircuit, Gate, PauliError, SignedTableau};
use crate::structure::{self, Classification, DualityReport, StructureError, StructureOptions};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToricError {
    #[error("toric circuit needs L >= 2, got {0}")]
    InvalidSize(usize),
    #[error("explicit and generic duals disagree: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Model(#[from] models::ModelError),
}

const H: usize = 0;
const V: usize = 1;

/// Flat index of `(i, j, s)` with coordinates taken mod `L`.
pub fn spin(l: usize, i: usize, j: usize, s: usize) -> usize {
    2 * ((i % l) * l + (j % l)) + s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricPartition {
    pub l: usize,
    pub lambda_a: Vec<usize>,
    pub lambda_b: Vec<usize>,
    pub free_spins: [usize; 2],
}

/// `Λ_A = {(0,j,h): j < L-1} ∪ {(i,j,v): i < L-1}` and its complement.
pub fn partition(l: usize) -> Result<ToricPartition, ToricError> {
    check(l)?;
    let mut in_a = vec![false; 2 * l * l];
    for j in 0..l - 1 {
        in_a[spin(l, 0, j, H)] = true;
    }
    for i in 0..l - 1 {
        for j in 0..l {
            in_a[spin(l, i, j, V)] = true;
        }
    }
    let (lambda_a, lambda_b) = (0..2 * l * l).partition(|&q| in_a[q]);
    Ok(ToricPartition {
        l,
        lambda_a,
        lambda_b,
        free_spins: [spin(l, 0, l - 1, H), spin(l, l - 1, 0, V)],
    })
}

fn check(l: usize) -> Result<(), ToricError> {
    if l < 2 {
        Err(ToricError::InvalidSize(l))
    } else {
        Ok(())
    }
}

/// The commuting layer `C4 C3 C2 C1`, listed with `C1` first.
pub fn build_decoupler(l: usize) -> Result<CliffordCircuit, ToricError> {
    check(l)?;
    let s = |i, j, t| spin(l, i, j, t);
    let mut c = CliffordCircuit::new(2 * l * l);
    for i in 0..l - 1 {
        c.push(Gate::CX(s(0, i, H), s(0, l - 1, H)));
    }
    for i in 0..l {
        for k in 0..l - 1 {
            c.push(Gate::CX(s(k, i, V), s(l - 1, i, V)));
        }
    }
    for i in 1..l {
        for j in 0..l - 1 {
            for k in 0..i {
                c.push(Gate::CX(s(k, j, V), s(i, j, H)));
            }
            for k in 0..i {
                c.push(Gate::CX(s(k, j + 1, V), s(i, j, H)));
            }
            c.push(Gate::CX(s(0, j, H), s(i, j, H)));
        }
    }
    for i in 1..l {
        for k in 0..l - 1 {
            c.push(Gate::CX(s(0, k, H), s(i, l - 1, H)));
        }
        for k in 0..i {
            c.push(Gate::CX(s(k, 0, V), s(i, l - 1, H)));
        }
        for k in 0..i {
            c.push(Gate::CX(s(k, l - 1, V), s(i, l - 1, H)));
        }
    }
    Ok(c)
}

/// One Hadamard per spin of `Λ_A`.
pub fn build_hadamard_layer(l: usize) -> Result<CliffordCircuit, ToricError> {
    let p = partition(l)?;
    let mut c = CliffordCircuit::new(2 * l * l);
    for &q in &p.lambda_a {
        c.push(Gate::H(q));
    }
    Ok(c)
}

/// Merge a comb into a single term on all its spins plus one-spin terms.
///
/// The comb has a spine `a_0 .. a_{L-2}` and columns `c_0 .. c_{L-1}` whose
/// consecutive spins are bonded and whose last spin carries a field. Column
/// `c_j` (`1 <= j <= L-2`) meets the spine in the junction term
/// `a_{j-1} a_j c_j[0]`; the two ends are `a_0 c_0[0]` and `a_{L-2} c_{L-1}[0]`.
/// Junction `a_0 a_1 c_1[0]` grows into the all-spin term.
fn comb(c: &mut CliffordCircuit, spine: &[usize], cols: &[Vec<usize>]) {
    let absorb = |c: &mut CliffordCircuit, col: &[usize]| {
        for w in col.windows(2) {
            c.push(Gate::CX(w[1], w[0]));
        }
    };
    let l = cols.len();
    if l == 2 {
        c.push(Gate::CX(cols[1][0], spine[0]));
        return;
    }
    c.push(Gate::CX(cols[0][0], spine[0]));
    absorb(c, &cols[0]);
    absorb(c, &cols[1]);
    for j in 2..=l - 2 {
        c.push(Gate::CX(cols[j][0], spine[j - 1]));
        absorb(c, &cols[j]);
        c.push(Gate::CX(spine[j], spine[j - 1]));
    }
    c.push(Gate::CX(cols[l - 1][0], spine[l - 2]));
    absorb(c, &cols[l - 1]);
}

/// `Ĉ`: plaquette-side gates that clear the free spins, combs on both sides,
/// then a ladder over each side in flat-index order.
pub fn build_ladders(l: usize) -> Result<CliffordCircuit, ToricError> {
    let p = partition(l)?;
    let s = |i, j, t| spin(l, i, j, t);
    let mut c = CliffordCircuit::new(2 * l * l);
    for j in 1..l {
        c.push(Gate::CX(s(l - 1, 0, V), s(l - 1, j, V)));
        c.push(Gate::CX(s(0, l - 1, H), s(j, l - 1, H)));
    }
    // Star side: spine along the top row, columns down the vertical edges.
    let spine: Vec<usize> = (0..l - 1).map(|j| s(0, j, H)).collect();
    let cols: Vec<Vec<usize>> = (0..l)
        .map(|j| (0..l - 1).map(|i| s(i, j, V)).collect())
        .collect();
    comb(&mut c, &spine, &cols);
    // Plaquette side: spine along the bottom vertical edges, columns up the horizontal edges.
    let spine: Vec<usize> = (0..l - 1).map(|j| s(l - 1, j + 1, V)).collect();
    let cols: Vec<Vec<usize>> = (0..l)
        .map(|j| (1..l).rev().map(|i| s(i, j, H)).collect())
        .collect();
    comb(&mut c, &spine, &cols);
    let side_b: Vec<usize> = p
        .lambda_b
        .iter()
        .copied()
        .filter(|q| !p.free_spins.contains(q))
        .collect();
    for side in [&p.lambda_a, &side_b] {
        for w in side.windows(2) {
            c.push(Gate::CX(w[0], w[1]));
        }
    }
    Ok(c)
}

/// `C = Ĉ · (H layer) · C̃`, listed in application order.
pub fn build_circuit(l: usize) -> Result<CliffordCircuit, ToricError> {
    let mut c = build_decoupler(l)?;
    c.extend(&build_hadamard_layer(l)?);
    c.extend(&build_ladders(l)?);
    Ok(c)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossValidation {
    pub l: usize,
    pub explicit: DualityReport,
    pub generic: DualityReport,
    /// Chain lengths per species along each path.
    pub explicit_chains: BTreeMap<String, Vec<usize>>,
    pub generic_chains: BTreeMap<String, Vec<usize>>,
}

fn chains_by_species(r: &DualityReport) -> BTreeMap<String, Vec<usize>> {
    let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for c in &r.components {
        let len = c.classification.chain_len().unwrap_or(0);
        for s in c.species.keys() {
            out.entry(s.clone()).or_default().push(len);
        }
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

/// Classify the explicit dual of the toric code at size `L`.
pub fn explicit_report(l: usize) -> Result<(CliffordCircuit, SignedTableau, DualityReport), ToricError> {
    let model = models::generate(ModelName::Toric2d, l, None)?;
    let t = model.tableau()?;
    let c = build_circuit(l)?;
    let dual = t.conjugated(&c)?;
    let opts = StructureOptions {
        normalize: false,
        ..StructureOptions::default()
    };
    let d = structure::analyze(&t, c, dual.clone(), dual, Some(&model.species()), &opts)?;
    Ok((d.circuit, d.dual, d.report))
}

/// Compare the explicit and generic duals: same classification multiset,
/// same free-spin count and the same chain lengths per species.
pub fn cross_validate(l: usize) -> Result<CrossValidation, ToricError> {
    let (_, _, explicit) = explicit_report(l)?;
    let model = models::generate(ModelName::Toric2d, l, None)?;
    let t = model.tableau()?;
    let generic = structure::dualize(&t, Some(&model.species()), &StructureOptions::default())?.report;
    let explicit_chains = chains_by_species(&explicit);
    let generic_chains = chains_by_species(&generic);
    if explicit.classifications() != generic.classifications() {
        let first = explicit
            .classifications()
            .into_iter()
            .zip(generic.classifications())
            .find(|(a, b)| a != b);
        return Err(ToricError::Mismatch(format!(
            "classifications differ, first divergence {first:?}"
        )));
    }
    if explicit.free_spins != generic.free_spins {
        return Err(ToricError::Mismatch(format!(
            "free spins {} vs {}",
            explicit.free_spins, generic.free_spins
        )));
    }
    if explicit_chains != generic_chains {
        return Err(ToricError::Mismatch(format!(
            "chains per species {explicit_chains:?} vs {generic_chains:?}"
        )));
    }
    Ok(CrossValidation {
        l,
        explicit,
        generic,
        explicit_chains,
        generic_chains,
    })
}

/// Whether a report is two chains of length `L^2 - 1` (one per species) plus two free spins.
pub fn is_two_chains(r: &DualityReport, l: usize) -> bool {
    r.free_spins == 2
        && r.components.len() == 2
        && r.components.iter().all(|c| {
            c.classification.chain_len() == Some(l * l - 1) && c.species.len() == 1
        })
        && r.components[0].species.keys().next() != r.components[1].species.keys().next()
}

/// Classes other than chains found in a report, for diagnostics.
pub fn non_chain_classes(r: &DualityReport) -> Vec<Classification> {
    r.components
        .iter()
        .filter(|c| c.classification.chain_len().is_none())
        .map(|c| c.classification.clone())
        .collect()
}
