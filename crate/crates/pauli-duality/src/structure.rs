//! Structure of classical tableaus: connected components, CX normalizations
//! into chains and lassos, and the dual-model classification.

use crate::diagonalizer;
use crate::pauli_core::{bit_ones, CliffordCircuit, Gate, GateCounts, PauliError, SignedTableau};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StructureError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("component {0} does not match the expected pattern: {1}")]
    PatternMismatch(usize, String),
    #[error("free-spin degeneracy not defined: component {0} is {1}")]
    NotApplicable(usize, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    NonInteracting1Body,
    IsingChainEndFields { len: usize },
    /// Chain `order[0..len]` plus a bond from the last spin back to `order[junction]`.
    LassoIsingChain {
        len: usize,
        junction: usize,
        cycle_len: usize,
    },
    ThreeSpinChain,
    NearestNeighbor1D { len: usize },
    BoundedDegreeLocal { max_weight: usize, max_degree: usize },
    AllToAllPlusFields { len: usize },
    Unknown,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::NonInteracting1Body => "non_interacting",
            Classification::IsingChainEndFields { .. } => "ising_chain_end_fields",
            Classification::LassoIsingChain { .. } => "lasso_ising_chain",
            Classification::ThreeSpinChain => "three_spin_chain",
            Classification::NearestNeighbor1D { .. } => "nearest_neighbor_1d",
            Classification::BoundedDegreeLocal { .. } => "bounded_degree_local",
            Classification::AllToAllPlusFields { .. } => "all_to_all_plus_fields",
            Classification::Unknown => "unknown",
        }
    }

    /// Length of an open chain with end fields; three-spin chains count as length 3.
    pub fn chain_len(&self) -> Option<usize> {
        match self {
            Classification::IsingChainEndFields { len } => Some(*len),
            Classification::ThreeSpinChain => Some(3),
            _ => None,
        }
    }

    /// Whether an exact sampler exists for this class.
    pub fn exactly_sampleable(&self) -> bool {
        !matches!(
            self,
            Classification::BoundedDegreeLocal { .. } | Classification::Unknown
        )
    }
}

/// Tableau the classification was read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// After elimination and normalization.
    Final,
    /// After diagonalization only.
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    /// Sorted global spin indices.
    pub spins: Vec<usize>,
    /// Row indices into the tableau.
    pub terms: Vec<usize>,
    pub classification: Classification,
    /// Spins in chain order for chains and lassos, block by block for
    /// nearest-neighbour 1D components, otherwise sorted.
    pub order: Vec<usize>,
    /// Block sizes along `order` for nearest-neighbour 1D components.
    pub blocks: Vec<usize>,
    pub stage: Stage,
    /// Number of terms of each original species.
    pub species: BTreeMap<String, usize>,
}

impl Component {
    fn bare(id: usize, spins: Vec<usize>, terms: Vec<usize>) -> Self {
        Component {
            id,
            order: spins.clone(),
            spins,
            terms,
            classification: Classification::Unknown,
            blocks: Vec::new(),
            stage: Stage::Final,
            species: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureOptions {
    /// Apply ladder and lasso normalizations.
    pub normalize: bool,
    /// Skip the CX column elimination.
    pub skip_gauss: bool,
    /// Largest block of a nearest-neighbour 1D component.
    pub max_block: usize,
    /// Bounds for `BoundedDegreeLocal`.
    pub max_weight: usize,
    pub max_degree: usize,
    /// Start vertices tried when searching for a 1D layering.
    pub layering_starts: usize,
}

impl Default for StructureOptions {
    fn default() -> Self {
        StructureOptions {
            normalize: true,
            skip_gauss: false,
            max_block: 2,
            max_weight: 8,
            max_degree: 8,
            layering_starts: 64,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityReport {
    pub n: usize,
    pub m: usize,
    pub components: Vec<Component>,
    pub free_spins: usize,
    pub free_spin_indices: Vec<usize>,
    pub gate_counts: GateCounts,
    pub depth: usize,
    /// Original species to the components containing its terms.
    pub species_map: BTreeMap<String, Vec<usize>>,
}

impl DualityReport {
    /// Number of components per class name.
    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry(c.classification.name().to_string()).or_insert(0) += 1;
        }
        out
    }

    pub fn unknown_count(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.classification == Classification::Unknown)
            .count()
    }

    /// Every component draws its terms from a single species.
    pub fn species_pure(&self) -> bool {
        self.components.iter().all(|c| c.species.len() <= 1)
    }

    /// Sorted multiset of classifications.
    pub fn classifications(&self) -> Vec<Classification> {
        let mut v: Vec<Classification> = self
            .components
            .iter()
            .map(|c| c.classification.clone())
            .collect();
        v.sort_by_key(|c| format!("{c:?}"));
        v
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components of the spin-term incidence graph of a diagonal
/// tableau, ordered by smallest spin, plus the all-zero columns. Identity rows
/// form their own spinless components at the end.
pub fn decompose(t: &SignedTableau) -> Result<(Vec<Component>, Vec<usize>), PauliError> {
    t.require_diagonal()?;
    let n = t.n();
    let mut dsu = Dsu((0..n).collect());
    let mut touched = vec![false; n];
    for i in 0..t.m() {
        let mut it = bit_ones(t.z_row(i));
        if let Some(first) = it.next() {
            touched[first] = true;
            for q in it {
                touched[q] = true;
                dsu.union(first, q);
            }
        }
    }
    let mut by_root: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    let mut free = Vec::new();
    for q in 0..n {
        if touched[q] {
            let r = dsu.find(q);
            by_root.entry(r).or_default().0.push(q);
        } else {
            free.push(q);
        }
    }
    let mut constants = Vec::new();
    for i in 0..t.m() {
        match bit_ones(t.z_row(i)).next() {
            Some(q) => {
                let r = dsu.find(q);
                by_root.get_mut(&r).expect("root").1.push(i);
            }
            None => constants.push(i),
        }
    }
    let mut comps: Vec<Component> = by_root
        .into_values()
        .enumerate()
        .map(|(id, (spins, terms))| Component::bare(id, spins, terms))
        .collect();
    for i in constants {
        let id = comps.len();
        comps.push(Component::bare(id, Vec::new(), vec![i]));
    }
    Ok((comps, free))
}

/// Component rows as sorted local supports.
struct Local {
    spins: Vec<usize>,
    rows: Vec<Vec<usize>>,
}

impl Local {
    fn new(t: &SignedTableau, comp: &Component) -> Self {
        let pos: HashMap<usize, usize> = comp.spins.iter().enumerate().map(|(k, &q)| (q, k)).collect();
        let rows = comp
            .terms
            .iter()
            .map(|&i| bit_ones(t.z_row(i)).map(|q| pos[&q]).collect())
            .collect();
        Local {
            spins: comp.spins.clone(),
            rows,
        }
    }

    /// Local view of rows from another tableau, over the union of their supports.
    fn from_rows(t: &SignedTableau, terms: &[usize]) -> Self {
        let spins: Vec<usize> = terms
            .iter()
            .flat_map(|&i| bit_ones(t.z_row(i)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos: HashMap<usize, usize> = spins.iter().enumerate().map(|(k, &q)| (q, k)).collect();
        let rows = terms
            .iter()
            .map(|&i| bit_ones(t.z_row(i)).map(|q| pos[&q]).collect())
            .collect();
        Local { spins, rows }
    }

    fn n(&self) -> usize {
        self.spins.len()
    }

    fn max_weight(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n()];
        for r in &self.rows {
            for &q in r {
                deg[q] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Distinct two-spin supports and the spins carrying one-spin terms.
    fn bonds_and_fields(&self) -> Option<(BTreeSet<(usize, usize)>, BTreeSet<usize>)> {
        let mut bonds = BTreeSet::new();
        let mut fields = BTreeSet::new();
        for r in &self.rows {
            match r.as_slice() {
                [a] => {
                    fields.insert(*a);
                }
                [a, b] => {
                    bonds.insert((*a, *b));
                }
                _ => return None,
            }
        }
        Some((bonds, fields))
    }

    fn adjacency(&self, bonds: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(a, b) in bonds {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Walk a path starting at `start`, never revisiting a spin.
    fn walk(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
        let mut order = vec![start];
        let mut seen = vec![false; adj.len()];
        seen[start] = true;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().filter(|&&v| !seen[v]).min() {
            seen[next] = true;
            order.push(next);
            cur = next;
        }
        order
    }

    /// Open chain with fields only on its two ends; local spins in chain order.
    fn chain(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let (bonds, fields) = self.bonds_and_fields()?;
        if n < 2 || bonds.len() != n - 1 {
            return None;
        }
        let adj = self.adjacency(&bonds);
        if adj.iter().any(|a| a.len() > 2 || a.is_empty()) {
            return None;
        }
        let start = (0..n).find(|&v| adj[v].len() == 1)?;
        let order = Self::walk(&adj, start);
        if order.len() != n {
            return None;
        }
        let ends = [order[0], order[n - 1]];
        fields.iter().all(|f| ends.contains(f)).then_some(order)
    }

    /// Path plus one bond from its last spin to an interior spin; returns the
    /// order and the junction position. Fields may sit anywhere.
    fn lasso(&self) -> Option<(Vec<usize>, usize)> {
        let n = self.n();
        let (bonds, _) = self.bonds_and_fields()?;
        if n < 4 || bonds.len() != n {
            return None;
        }
        let adj = self.adjacency(&bonds);
        let deg = |d: usize| (0..n).filter(|&v| adj[v].len() == d).count();
        if deg(1) != 1 || deg(3) != 1 || deg(2) != n - 2 {
            return None;
        }
        let tail = (0..n).find(|&v| adj[v].len() == 1)?;
        let junction_spin = (0..n).find(|&v| adj[v].len() == 3)?;
        let order = Self::walk(&adj, tail);
        if order.len() != n {
            return None;
        }
        let last = order[n - 1];
        if !adj[last].contains(&junction_spin) {
            return None;
        }
        let junction = order.iter().position(|&v| v == junction_spin)?;
        Some((order, junction))
    }

    /// One-spin terms on every spin plus exactly one term on all spins.
    fn all_to_all(&self) -> bool {
        let n = self.n();
        let mut single = vec![false; n];
        let mut full = 0;
        for r in &self.rows {
            if r.len() == 1 {
                single[r[0]] = true;
            } else if r.len() == n {
                full += 1;
            } else {
                return false;
            }
        }
        n >= 2 && full == 1 && single.iter().all(|&s| s)
    }

    /// Breadth-first layering with every layer of at most `max_block` spins.
    fn layering(&self, max_block: usize, starts: usize) -> Option<Vec<Vec<usize>>> {
        let n = self.n();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for r in &self.rows {
            for &a in r {
                for &b in r {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        let mut candidates: Vec<usize> = (0..n).collect();
        candidates.sort_by_key(|&v| (adj[v].len(), v));
        for &s in candidates.iter().take(starts) {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut layers: Vec<Vec<usize>> = vec![vec![s]];
            let mut ok = true;
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        if layers.len() <= dist[u] {
                            layers.push(Vec::new());
                        }
                        layers[dist[u]].push(u);
                        if layers[dist[u]].len() > max_block {
                            ok = false;
                            break;
                        }
                        queue.push_back(u);
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                for l in &mut layers {
                    l.sort_unstable();
                }
                return Some(layers);
            }
        }
        None
    }
}

/// CX gates that bring a component into chain, lasso or 1D form, with the
/// spin order of the first ladder, or `None` if no normalization applies.
///
/// Two patterns are recognized directly: one-spin terms on every spin plus one
/// term on all spins (a ladder turns it into a chain with end fields), and
/// one-spin terms on every spin plus two terms `A`, `B` covering all spins
/// (with spins ordered `A\B, A∩B, B\A` the same ladder gives a lasso).
/// Otherwise ladders are run over the heaviest term whose spins all carry
/// one-spin terms until none is left, and the result is kept only if it is
/// one-dimensional.
pub fn normalization(
    t: &SignedTableau,
    comp: &Component,
    opts: &StructureOptions,
) -> Option<(Vec<Gate>, Vec<usize>)> {
    let local = Local::new(t, comp);
    let n = local.n();
    if n < 2 {
        return None;
    }
    let mut single = vec![false; n];
    let mut multi: Vec<&Vec<usize>> = Vec::new();
    for r in &local.rows {
        if r.len() == 1 {
            single[r[0]] = true;
        } else {
            multi.push(r);
        }
    }
    let to_global = |order: &[usize]| order.iter().map(|&k| local.spins[k]).collect::<Vec<_>>();
    let ladder = |order: &[usize]| order.windows(2).map(|w| Gate::CX(w[0], w[1])).collect::<Vec<_>>();
    if single.iter().all(|&s| s) {
        match multi.as_slice() {
            [a] if a.len() == n => {
                let order = to_global(&(0..n).collect::<Vec<_>>());
                return Some((ladder(&order), order));
            }
            [a, b] => {
                let sa: BTreeSet<usize> = a.iter().copied().collect();
                let sb: BTreeSet<usize> = b.iter().copied().collect();
                if sa.union(&sb).count() == n {
                    // Larger exclusive part first, so the extra bond lands inside the chain.
                    let (sa, sb) = if sa.difference(&sb).count() >= sb.difference(&sa).count() {
                        (sa, sb)
                    } else {
                        (sb, sa)
                    };
                    let order: Vec<usize> = sa
                        .difference(&sb)
                        .chain(sa.intersection(&sb))
                        .chain(sb.difference(&sa))
                        .copied()
                        .collect();
                    let order = to_global(&order);
                    return Some((ladder(&order), order));
                }
            }
            _ => {}
        }
    }
    general_ladders(&local, opts).map(|(gates, order)| {
        let gates = gates
            .into_iter()
            .map(|g| match g {
                Gate::CX(c, tq) => Gate::CX(local.spins[c], local.spins[tq]),
                other => other,
            })
            .collect();
        (gates, to_global(&order))
    })
}

/// Repeated ladders over field-backed heavy terms, in local indices.
fn general_ladders(local: &Local, opts: &StructureOptions) -> Option<(Vec<Gate>, Vec<usize>)> {
    let n = local.n();
    let mut rows: Vec<BTreeSet<usize>> = local.rows.iter().map(|r| r.iter().copied().collect()).collect();
    let mut gates = Vec::new();
    let mut first_order = Vec::new();
    for _ in 0..n {
        let mut single = vec![false; n];
        for r in rows.iter().filter(|r| r.len() == 1) {
            single[*r.iter().next().expect("one spin")] = true;
        }
        let pick = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.len() >= 3 && r.iter().all(|&q| single[q]))
            .max_by_key(|(i, r)| (r.len(), std::cmp::Reverse(*i)))
            .map(|(i, _)| i);
        let Some(p) = pick else { break };
        let heavy: Vec<&BTreeSet<usize>> = rows
            .iter()
            .enumerate()
            .filter(|&(i, r)| i != p && r.len() >= 3)
            .map(|(_, r)| r)
            .collect();
        let mut order: Vec<usize> = rows[p].iter().copied().collect();
        order.sort_by_key(|&q| (std::cmp::Reverse(heavy.iter().filter(|r| r.contains(&q)).count()), q));
        for w in order.windows(2) {
            let (c, tq) = (w[0], w[1]);
            for r in rows.iter_mut() {
                if r.contains(&tq) && !r.remove(&c) {
                    r.insert(c);
                }
            }
            gates.push(Gate::CX(c, tq));
        }
        if first_order.is_empty() {
            first_order = order;
        }
    }
    if gates.is_empty() {
        return None;
    }
    let after = Local {
        spins: local.spins.clone(),
        rows: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
    };
    let one_dim = after.chain().is_some()
        || after.lasso().is_some()
        || after.layering(opts.max_block, opts.layering_starts).is_some();
    one_dim.then_some((gates, first_order))
}

/// Ladder `CX(s_1,s_2) ... CX(s_{N-1},s_N)` turning one-spin terms on every spin
/// plus one all-spin term into a chain with end fields.
pub fn ladder_normalize(
    t: &SignedTableau,
    comp: &Component,
) -> Result<(CliffordCircuit, SignedTableau), StructureError> {
    let local = Local::new(t, comp);
    if local.n() == 1 {
        return Ok((CliffordCircuit::new(t.n()), t.clone()));
    }
    if !local.all_to_all() {
        return Err(StructureError::PatternMismatch(
            comp.id,
            "expected one-spin terms on every spin plus one all-spin term".into(),
        ));
    }
    let gates: Vec<Gate> = comp.spins.windows(2).map(|w| Gate::CX(w[0], w[1])).collect();
    let c = CliffordCircuit::from_gates(t.n(), gates)?;
    let out = t.conjugated(&c)?;
    Ok((c, out))
}

/// Classify a component of `t`. `diag` is the tableau before elimination; its
/// rows are used for the locality bound when the final rows are not local.
pub fn classify(
    t: &SignedTableau,
    comp: &Component,
    diag: Option<&SignedTableau>,
    opts: &StructureOptions,
) -> Component {
    let mut out = comp.clone();
    out.blocks.clear();
    out.order = comp.spins.clone();
    out.stage = Stage::Final;
    let local = Local::new(t, comp);
    let n = local.n();
    let to_global = |v: &[usize]| v.iter().map(|&k| local.spins[k]).collect::<Vec<_>>();
    if n <= 1 {
        out.classification = Classification::NonInteracting1Body;
        return out;
    }
    if let Some(order) = local.chain() {
        out.order = to_global(&order);
        out.classification = if n == 3 {
            Classification::ThreeSpinChain
        } else {
            Classification::IsingChainEndFields { len: n }
        };
        return out;
    }
    if let Some((order, junction)) = local.lasso() {
        out.order = to_global(&order);
        out.classification = Classification::LassoIsingChain {
            len: n,
            junction,
            cycle_len: n - junction,
        };
        return out;
    }
    if local.all_to_all() {
        out.classification = Classification::AllToAllPlusFields { len: n };
        return out;
    }
    if let Some(layers) = local.layering(opts.max_block, opts.layering_starts) {
        out.order = layers.iter().flat_map(|l| to_global(l)).collect();
        out.blocks = layers.iter().map(Vec::len).collect();
        out.classification = Classification::NearestNeighbor1D { len: layers.len() };
        return out;
    }
    let bounded = |l: &Local| l.max_weight() <= opts.max_weight && l.max_degree() <= opts.max_degree;
    let key = |l: &Local| (l.max_weight(), l.max_degree());
    let pre = diag.map(|d| Local::from_rows(d, &comp.terms));
    let best = match &pre {
        Some(p) if bounded(p) && (!bounded(&local) || key(p) < key(&local)) => Some((p, Stage::Diagonal)),
        _ if bounded(&local) => Some((&local, Stage::Final)),
        _ => None,
    };
    if let Some((l, stage)) = best {
        out.stage = stage;
        if stage == Stage::Diagonal {
            out.order = l.spins.clone();
        }
        out.classification = Classification::BoundedDegreeLocal {
            max_weight: l.max_weight(),
            max_degree: l.max_degree(),
        };
        return out;
    }
    out.classification = Classification::Unknown;
    out
}

/// Full duality: diagonalizing circuit, elimination and normalization.
#[derive(Clone, Debug)]
pub struct Duality {
    /// `U` with `U H U^†` equal to `dual`.
    pub circuit: CliffordCircuit,
    /// Tableau after diagonalization only.
    pub diagonal: SignedTableau,
    pub dual: SignedTableau,
    pub report: DualityReport,
}

pub fn dualize(
    t: &SignedTableau,
    species: Option<&[String]>,
    opts: &StructureOptions,
) -> Result<Duality, StructureError> {
    let (c1, diagonal) = diagonalizer::diagonalize(t)?;
    let (c2, dual) = if opts.skip_gauss {
        (CliffordCircuit::new(t.n()), diagonal.clone())
    } else {
        diagonalizer::pseudo_gaussian(&diagonal)?
    };
    let mut circuit = c1;
    circuit.extend(&c2);
    analyze(t, circuit, diagonal, dual, species, opts)
}

/// Decompose, normalize and classify an already-classical `dual = U H U^†`.
pub fn analyze(
    original: &SignedTableau,
    mut circuit: CliffordCircuit,
    diagonal: SignedTableau,
    mut dual: SignedTableau,
    species: Option<&[String]>,
    opts: &StructureOptions,
) -> Result<Duality, StructureError> {
    let (comps, free) = decompose(&dual)?;
    if opts.normalize {
        for comp in &comps {
            if let Some((gates, _)) = normalization(&dual, comp, opts) {
                for g in gates {
                    if let Gate::CX(c, tq) = g {
                        dual.apply_cx_diagonal(c, tq);
                    }
                    circuit.push(g);
                }
            }
        }
    }
    let mut components: Vec<Component> = comps
        .iter()
        .map(|c| classify(&dual, c, Some(&diagonal), opts))
        .collect();
    let mut species_map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    if let Some(sp) = species {
        for comp in &mut components {
            for &i in &comp.terms {
                *comp.species.entry(sp[i].clone()).or_insert(0) += 1;
            }
            for s in comp.species.keys() {
                species_map.entry(s.clone()).or_default().push(comp.id);
            }
        }
    }
    let report = DualityReport {
        n: original.n(),
        m: original.m(),
        free_spins: free.len(),
        free_spin_indices: free,
        components,
        gate_counts: circuit.counts(),
        depth: circuit.depth(),
        species_map,
    };
    Ok(Duality {
        circuit,
        diagonal,
        dual,
        report,
    })
}

/// `log2` of the ground-state degeneracy: free spins plus the number `a` of
/// zero couplings. Needs components whose ground state is otherwise unique.
pub fn free_spin_degeneracy(report: &DualityReport, zero_couplings: usize) -> Result<usize, StructureError> {
    if let Some(c) = report.components.iter().find(|c| {
        matches!(
            c.classification,
            Classification::Unknown | Classification::BoundedDegreeLocal { .. }
        )
    }) {
        return Err(StructureError::NotApplicable(
            c.id,
            c.classification.name().to_string(),
        ));
    }
    Ok(report.free_spins + zero_couplings)
}

/// Rows with zero coefficient.
pub fn zero_coupling_count(t: &SignedTableau) -> usize {
    t.coeffs().iter().filter(|&&c| c == 0.0).count()
}
