//! Lattice Hamiltonian generators.
//!
//! Every model is `H = -Σ J_t T_t` with Pauli terms `T_t` and couplings that
//! default to `+1`, so a default term carries the coefficient `-1`. Spins are
//! indexed lexicographically by `(position..., sublattice)`.

use crate::pauli_core::{PauliError, PauliTerm, SignedTableau};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid size L={1} for model {0}")]
    InvalidSize(ModelName, usize),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("unknown term label {0:?}")]
    UnknownLabel(String),
    #[error("couplings line {line}: {msg}")]
    Couplings { line: usize, msg: String },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    IsingChainOpen,
    Toric2d,
    Toric3d,
    ColorHoneycomb,
    RotatedSurface,
    Haah,
    Xcube,
    SubsystemStabilizer,
    SubsystemChecks,
}

impl ModelName {
    pub const ALL: [ModelName; 9] = [
        ModelName::IsingChainOpen,
        ModelName::Toric2d,
        ModelName::Toric3d,
        ModelName::ColorHoneycomb,
        ModelName::RotatedSurface,
        ModelName::Haah,
        ModelName::Xcube,
        ModelName::SubsystemStabilizer,
        ModelName::SubsystemChecks,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelName::IsingChainOpen => "ising_chain_open",
            ModelName::Toric2d => "toric2d",
            ModelName::Toric3d => "toric3d",
            ModelName::ColorHoneycomb => "color_honeycomb",
            ModelName::RotatedSurface => "rotated_surface",
            ModelName::Haah => "haah",
            ModelName::Xcube => "xcube",
            ModelName::SubsystemStabilizer => "subsystem_stabilizer",
            ModelName::SubsystemChecks => "subsystem_checks",
        }
    }

    /// Whether `L` is a supported size.
    pub fn valid_size(&self, l: usize) -> bool {
        match self {
            ModelName::IsingChainOpen => l >= 2,
            ModelName::Toric2d | ModelName::Toric3d | ModelName::Xcube => l >= 2,
            ModelName::ColorHoneycomb => true,
            ModelName::RotatedSurface => l >= 1,
            ModelName::Haah => haah_valid(l),
            ModelName::SubsystemStabilizer | ModelName::SubsystemChecks => l >= 2 && l % 2 == 0,
        }
    }

    /// Number of spins.
    pub fn spin_count(&self, l: usize) -> usize {
        match self {
            ModelName::IsingChainOpen => l,
            ModelName::Toric2d => 2 * l * l,
            ModelName::Toric3d | ModelName::SubsystemStabilizer | ModelName::SubsystemChecks => {
                3 * l * l * l
            }
            ModelName::ColorHoneycomb => 8 * (l + 1) * (l + 1),
            ModelName::RotatedSurface => (l + 1) * (l + 1),
            ModelName::Haah => 2 * l * l * l,
            ModelName::Xcube => 3 * l * l * l + 2 * l * l,
        }
    }

    /// Number of terms.
    pub fn term_count(&self, l: usize) -> usize {
        match self {
            ModelName::IsingChainOpen => l - 1,
            ModelName::Toric2d => 2 * l * l,
            ModelName::Toric3d | ModelName::SubsystemChecks => 4 * l * l * l,
            ModelName::ColorHoneycomb => 8 * (l + 1) * (l + 1),
            ModelName::RotatedSurface => l * l + 2 * l,
            ModelName::Haah => 2 * l * l * l,
            ModelName::Xcube => l * l * l + 3 * l * l * (l - 1),
            ModelName::SubsystemStabilizer => l * l * l,
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s2 = s.replace('-', "_");
        let alias = match s2.as_str() {
            "color" => "color_honeycomb",
            "ising" | "ising_chain" => "ising_chain_open",
            other => other,
        };
        ModelName::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == alias)
            .ok_or_else(|| ModelError::UnknownModel(s.to_string()))
    }
}

/// `L` odd and not a multiple of any `4^p - 1` with `p >= 2`.
pub fn haah_valid(l: usize) -> bool {
    if l < 3 || l % 2 == 0 {
        return false;
    }
    let mut q = 16usize;
    while q - 1 <= l {
        if l % (q - 1) == 0 {
            return false;
        }
        q *= 4;
    }
    true
}

/// Lattice position of a spin plus an optional sublattice letter
/// (`h`/`v` for 2D edges, `x`/`y`/`z` for 3D edges, `a`/`b` for paired sites).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinCoord {
    pub pos: Vec<usize>,
    pub sub: Option<char>,
}

impl SpinCoord {
    pub fn site(pos: &[usize]) -> Self {
        SpinCoord {
            pos: pos.to_vec(),
            sub: None,
        }
    }

    pub fn edge(pos: &[usize], sub: char) -> Self {
        SpinCoord {
            pos: pos.to_vec(),
            sub: Some(sub),
        }
    }
}

impl fmt::Display for SpinCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.pos.iter().map(|p| p.to_string()).collect();
        if let Some(s) = self.sub {
            parts.push(s.to_string());
        }
        write!(f, "({})", parts.join(","))
    }
}

/// Operator species and anchor of a term, e.g. `star@1,2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermLabel {
    pub species: String,
    pub anchor: Vec<usize>,
}

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.anchor.iter().map(|p| p.to_string()).collect();
        write!(f, "{}@{}", self.species, a.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub name: ModelName,
    pub l: usize,
    pub coords: Vec<SpinCoord>,
    pub spin_index: HashMap<SpinCoord, usize>,
    pub terms: Vec<PauliTerm>,
    pub labels: Vec<TermLabel>,
    /// Coupling `J_t` of each term; the term coefficient is `-J_t`.
    pub couplings: Vec<f64>,
}

impl LatticeModel {
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn m(&self) -> usize {
        self.terms.len()
    }

    pub fn tableau(&self) -> Result<SignedTableau, PauliError> {
        SignedTableau::from_terms(&self.terms)
    }

    pub fn index(&self, c: &SpinCoord) -> Option<usize> {
        self.spin_index.get(c).copied()
    }

    /// Species of every term, in term order.
    pub fn species(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.species.clone()).collect()
    }

    /// Replace couplings by label; unknown labels are an error.
    pub fn set_couplings(&mut self, overrides: &BTreeMap<String, f64>) -> Result<(), ModelError> {
        let by_label: HashMap<String, usize> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.to_string(), i))
            .collect();
        for (label, &value) in overrides {
            let &i = by_label
                .get(label)
                .ok_or_else(|| ModelError::UnknownLabel(label.clone()))?;
            self.set_coupling(i, value);
        }
        Ok(())
    }

    pub fn set_coupling(&mut self, i: usize, j: f64) {
        self.couplings[i] = j;
        let c = -j;
        self.terms[i].sign = c.is_sign_negative();
        self.terms[i].coeff = c.abs();
    }

    /// Sub-model on a subset of spins, keeping the terms supported inside it.
    pub fn restrict(&self, spins: &[usize]) -> LatticeModel {
        let local: HashMap<usize, usize> = spins.iter().enumerate().map(|(k, &q)| (q, k)).collect();
        let mut out = LatticeModel {
            name: self.name,
            l: self.l,
            coords: spins.iter().map(|&q| self.coords[q].clone()).collect(),
            spin_index: HashMap::new(),
            terms: Vec::new(),
            labels: Vec::new(),
            couplings: Vec::new(),
        };
        out.spin_index = out
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| (c.clone(), k))
            .collect();
        for (t, term) in self.terms.iter().enumerate() {
            let supp = term.support();
            if supp.iter().all(|q| local.contains_key(q)) {
                let mut r = PauliTerm::identity(spins.len());
                for q in term.x.ones() {
                    r.x.set(local[&q], true);
                }
                for q in term.z.ones() {
                    r.z.set(local[&q], true);
                }
                r.sign = term.sign;
                r.coeff = term.coeff;
                out.terms.push(r);
                out.labels.push(self.labels[t].clone());
                out.couplings.push(self.couplings[t]);
            }
        }
        out
    }
}

/// Parse a couplings file: one `<term-label> <value>` per line, `#` comments.
pub fn parse_couplings(text: &str) -> Result<BTreeMap<String, f64>, ModelError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        match (it.next(), it.next(), it.next()) {
            (Some(label), Some(v), None) => {
                let v: f64 = v.parse().map_err(|_| ModelError::Couplings {
                    line: i + 1,
                    msg: format!("bad value {v:?}"),
                })?;
                out.insert(label.to_string(), v);
            }
            _ => {
                return Err(ModelError::Couplings {
                    line: i + 1,
                    msg: "expected `<term-label> <value>`".into(),
                })
            }
        }
    }
    Ok(out)
}

enum Kind {
    X,
    Z,
}

struct Builder {
    coords: Vec<SpinCoord>,
    index: HashMap<SpinCoord, usize>,
    terms: Vec<PauliTerm>,
    labels: Vec<TermLabel>,
}

impl Builder {
    fn new(mut coords: Vec<SpinCoord>) -> Self {
        coords.sort();
        let index = coords
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Builder {
            coords,
            index,
            terms: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn idx(&self, c: &SpinCoord) -> usize {
        *self
            .index
            .get(c)
            .unwrap_or_else(|| panic!("no spin at {c}"))
    }

    fn term(&mut self, kind: Kind, spins: &[SpinCoord], species: &str, anchor: &[usize]) {
        let n = self.coords.len();
        let mut qs: Vec<usize> = spins.iter().map(|c| self.idx(c)).collect();
        qs.sort_unstable();
        let before = qs.len();
        qs.dedup();
        assert_eq!(before, qs.len(), "{species}@{anchor:?} repeats a spin");
        let t = match kind {
            Kind::X => PauliTerm::x_string(n, &qs, -1.0),
            Kind::Z => PauliTerm::z_string(n, &qs, -1.0),
        };
        self.terms.push(t);
        self.labels.push(TermLabel {
            species: species.to_string(),
            anchor: anchor.to_vec(),
        });
    }

    fn finish(self, name: ModelName, l: usize) -> LatticeModel {
        let m = self.terms.len();
        LatticeModel {
            name,
            l,
            coords: self.coords,
            spin_index: self.index,
            terms: self.terms,
            labels: self.labels,
            couplings: vec![1.0; m],
        }
    }
}

/// Generate a model with all couplings `+1`, then apply `couplings` overrides.
pub fn generate(
    name: ModelName,
    l: usize,
    couplings: Option<&BTreeMap<String, f64>>,
) -> Result<LatticeModel, ModelError> {
    if !name.valid_size(l) {
        return Err(ModelError::InvalidSize(name, l));
    }
    let mut model = match name {
        ModelName::IsingChainOpen => ising_chain(l),
        ModelName::Toric2d => toric2d(l),
        ModelName::Toric3d => toric3d(l),
        ModelName::ColorHoneycomb => color_honeycomb(l),
        ModelName::RotatedSurface => rotated_surface(l),
        ModelName::Haah => haah(l),
        ModelName::Xcube => xcube(l),
        ModelName::SubsystemStabilizer => subsystem_stabilizer(l),
        ModelName::SubsystemChecks => subsystem_checks(l),
    };
    if let Some(c) = couplings {
        model.set_couplings(c)?;
    }
    Ok(model)
}

/// `(coordinate, flat index)` pairs in index order.
pub fn spin_coordinates(model: &LatticeModel) -> Vec<(SpinCoord, usize)> {
    model
        .coords
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect()
}

fn ising_chain(l: usize) -> LatticeModel {
    let mut b = Builder::new((0..l).map(|i| SpinCoord::site(&[i])).collect());
    for i in 0..l - 1 {
        let s = [SpinCoord::site(&[i]), SpinCoord::site(&[i + 1])];
        b.term(Kind::Z, &s, "bond", &[i]);
    }
    b.finish(ModelName::IsingChainOpen, l)
}

/// Edge `(i, j, h)` leaves vertex `(i, j)` to the right, `(i, j, v)` downwards.
fn toric2d(l: usize) -> LatticeModel {
    let e = |i: usize, j: usize, s: char| SpinCoord::edge(&[i % l, j % l], s);
    let mut coords = Vec::new();
    for i in 0..l {
        for j in 0..l {
            coords.push(e(i, j, 'h'));
            coords.push(e(i, j, 'v'));
        }
    }
    let mut b = Builder::new(coords);
    for i in 0..l {
        for j in 0..l {
            let s = [e(i, j, 'h'), e(i, j, 'v'), e(i + l - 1, j, 'v'), e(i, j + l - 1, 'h')];
            b.term(Kind::X, &s, "star", &[i, j]);
        }
    }
    for i in 0..l {
        for j in 0..l {
            let s = [e(i, j, 'h'), e(i, j, 'v'), e(i + 1, j, 'h'), e(i, j + 1, 'v')];
            b.term(Kind::Z, &s, "plaquette", &[i, j]);
        }
    }
    b.finish(ModelName::Toric2d, l)
}

const AXES: [char; 3] = ['x', 'y', 'z'];

/// Edges of a periodic cubic lattice; `(i, j, k, a)` leaves vertex `(i, j, k)`
/// along axis `a`.
fn cubic_edges(l: usize) -> Vec<SpinCoord> {
    let mut coords = Vec::with_capacity(3 * l * l * l);
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                for a in AXES {
                    coords.push(SpinCoord::edge(&[i, j, k], a));
                }
            }
        }
    }
    coords
}

fn shift(v: [usize; 3], a: usize, d: isize, l: usize) -> [usize; 3] {
    let mut w = v;
    w[a] = ((v[a] as isize + d).rem_euclid(l as isize)) as usize;
    w
}

fn periodic_edge(v: [usize; 3], a: usize) -> SpinCoord {
    SpinCoord::edge(&v, AXES[a])
}

/// The 12 edges of the cube with lowest corner `v`.
fn cube_edges(v: [usize; 3], l: usize) -> Vec<SpinCoord> {
    let mut out = Vec::with_capacity(12);
    for a in 0..3 {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        for db in 0..2 {
            for dc in 0..2 {
                let w = shift(shift(v, b, db, l), c, dc, l);
                out.push(periodic_edge(w, a));
            }
        }
    }
    out
}

fn vertices(l: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..l).flat_map(move |i| (0..l).flat_map(move |j| (0..l).map(move |k| [i, j, k])))
}

fn toric3d(l: usize) -> LatticeModel {
    let mut b = Builder::new(cubic_edges(l));
    for v in vertices(l) {
        let mut s = Vec::with_capacity(6);
        for a in 0..3 {
            s.push(periodic_edge(v, a));
            s.push(periodic_edge(shift(v, a, -1, l), a));
        }
        b.term(Kind::X, &s, "star", &v);
    }
    // Plaquette spanned by axes (a, b) at v: edges (v,a), (v,b), (v+e_b,a), (v+e_a,b).
    let planes = [("plaquette_xy", 0, 1), ("plaquette_yz", 1, 2), ("plaquette_xz", 0, 2)];
    for v in vertices(l) {
        for (name, a, c) in planes {
            let s = [
                periodic_edge(v, a),
                periodic_edge(v, c),
                periodic_edge(shift(v, c, 1, l), a),
                periodic_edge(shift(v, a, 1, l), c),
            ];
            b.term(Kind::Z, &s, name, &v);
        }
    }
    b.finish(ModelName::Toric3d, l)
}

/// Brick-wall honeycomb with `W = 2(L+1)` rows and `2W` columns of sites on a
/// torus. The hexagon anchored at `(r, c)`, `r + c` even, covers columns
/// `c..c+2` of rows `r` and `r+1`.
fn color_honeycomb(l: usize) -> LatticeModel {
    let w = 2 * (l + 1);
    let cols = 2 * w;
    let site = |r: usize, c: usize| SpinCoord::site(&[r % w, c % cols]);
    let mut coords = Vec::with_capacity(w * cols);
    for r in 0..w {
        for c in 0..cols {
            coords.push(site(r, c));
        }
    }
    let mut b = Builder::new(coords);
    let hexes: Vec<(usize, usize)> = (0..w)
        .flat_map(|r| (0..cols).filter(move |c| (r + c) % 2 == 0).map(move |c| (r, c)))
        .collect();
    let hex = |r: usize, c: usize| -> Vec<SpinCoord> {
        (0..2)
            .flat_map(|dr| (0..3).map(move |dc| (dr, dc)))
            .map(|(dr, dc)| site(r + dr, c + dc))
            .collect()
    };
    for &(r, c) in &hexes {
        b.term(Kind::X, &hex(r, c), "x_hexagon", &[r, c]);
    }
    for &(r, c) in &hexes {
        b.term(Kind::Z, &hex(r, c), "z_hexagon", &[r, c]);
    }
    b.finish(ModelName::ColorHoneycomb, l)
}

/// Sites `(i, j)` of `[0, L]^2`; square `(i, j)` has lowest corner `(i, j)` and
/// is red when `i + j` is even. Red squares carry `X` plaquettes, blue squares
/// `Z` plaquettes. Two-site `XX` terms sit on left/right boundary edges of blue
/// squares and `ZZ` terms on top/bottom boundary edges of red squares, so every
/// boundary term pairs with a bulk plaquette of the opposite type.
fn rotated_surface(l: usize) -> LatticeModel {
    let site = |i: usize, j: usize| SpinCoord::site(&[i, j]);
    let mut coords = Vec::new();
    for i in 0..=l {
        for j in 0..=l {
            coords.push(site(i, j));
        }
    }
    let mut b = Builder::new(coords);
    let square = |i: usize, j: usize| [site(i, j), site(i + 1, j), site(i, j + 1), site(i + 1, j + 1)];
    let red = |i: usize, j: usize| (i + j) % 2 == 0;
    for i in 0..l {
        for j in 0..l {
            if red(i, j) {
                b.term(Kind::X, &square(i, j), "x_plaquette", &[i, j]);
            }
        }
    }
    for i in 0..l {
        for j in 0..l {
            if !red(i, j) {
                b.term(Kind::Z, &square(i, j), "z_plaquette", &[i, j]);
            }
        }
    }
    // Left boundary j = 0 uses square (i, 0); right boundary j = L uses (i, L-1).
    for (side, col, sq) in [(0usize, 0usize, 0usize), (1, l, l - 1)] {
        for i in 0..l {
            if !red(i, sq) {
                b.term(Kind::X, &[site(i, col), site(i + 1, col)], "x_boundary", &[side, i]);
            }
        }
    }
    // Top boundary i = 0 uses square (0, j); bottom boundary i = L uses (L-1, j).
    for (side, row, sq) in [(0usize, 0usize, 0usize), (1, l, l - 1)] {
        for j in 0..l {
            if red(sq, j) {
                b.term(Kind::Z, &[site(row, j), site(row, j + 1)], "z_boundary", &[side, j]);
            }
        }
    }
    b.finish(ModelName::RotatedSurface, l)
}

/// Cubic code with two spins `a`, `b` per vertex. Offsets are `(dx, dy, dz)`
/// within the cube whose lowest corner anchors the term.
fn haah(l: usize) -> LatticeModel {
    let mut coords = Vec::new();
    for v in vertices(l) {
        coords.push(SpinCoord::edge(&v, 'a'));
        coords.push(SpinCoord::edge(&v, 'b'));
    }
    let mut b = Builder::new(coords);
    let at = |v: [usize; 3], o: [usize; 3], s: char| {
        let w = [(v[0] + o[0]) % l, (v[1] + o[1]) % l, (v[2] + o[2]) % l];
        SpinCoord::edge(&w, s)
    };
    let x_a = [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let x_b = [[1, 1, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]];
    let z_a = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let z_b = [[0, 0, 0], [1, 1, 0], [0, 1, 1], [1, 0, 1]];
    for v in vertices(l) {
        let s: Vec<SpinCoord> = x_a
            .iter()
            .map(|&o| at(v, o, 'a'))
            .chain(x_b.iter().map(|&o| at(v, o, 'b')))
            .collect();
        b.term(Kind::X, &s, "x_cube", &v);
    }
    for v in vertices(l) {
        let s: Vec<SpinCoord> = z_a
            .iter()
            .map(|&o| at(v, o, 'a'))
            .chain(z_b.iter().map(|&o| at(v, o, 'b')))
            .collect();
        b.term(Kind::Z, &s, "z_cube", &v);
    }
    b.finish(ModelName::Haah, l)
}

/// Periodic in `x`, `y` and open in `z`: heights `0..=L`, with `z` edges only
/// between consecutive heights. Crosses sit at vertices of height `1..L`.
fn xcube(l: usize) -> LatticeModel {
    let e = |i: usize, j: usize, k: usize, a: char| SpinCoord::edge(&[i % l, j % l, k], a);
    let mut coords = Vec::new();
    for i in 0..l {
        for j in 0..l {
            for k in 0..=l {
                coords.push(e(i, j, k, 'x'));
                coords.push(e(i, j, k, 'y'));
                if k < l {
                    coords.push(e(i, j, k, 'z'));
                }
            }
        }
    }
    let mut b = Builder::new(coords);
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                let mut s = Vec::with_capacity(12);
                for d1 in 0..2 {
                    for d2 in 0..2 {
                        s.push(e(i, j + d1, k + d2, 'x'));
                        s.push(e(i + d1, j, k + d2, 'y'));
                        s.push(e(i + d1, j + d2, k, 'z'));
                    }
                }
                b.term(Kind::X, &s, "cube", &[i, j, k]);
            }
        }
    }
    for i in 0..l {
        for j in 0..l {
            for k in 1..l {
                let (im, jm) = (i + l - 1, j + l - 1);
                let yz = [e(i, j, k, 'y'), e(i, jm, k, 'y'), e(i, j, k, 'z'), e(i, j, k - 1, 'z')];
                let xy = [e(i, j, k, 'x'), e(im, j, k, 'x'), e(i, j, k, 'y'), e(i, jm, k, 'y')];
                let xz = [e(i, j, k, 'x'), e(im, j, k, 'x'), e(i, j, k, 'z'), e(i, j, k - 1, 'z')];
                b.term(Kind::Z, &yz, "cross_yz", &[i, j, k]);
                b.term(Kind::Z, &xy, "cross_xy", &[i, j, k]);
                b.term(Kind::Z, &xz, "cross_xz", &[i, j, k]);
            }
        }
    }
    b.finish(ModelName::Xcube, l)
}

fn is_red(v: [usize; 3]) -> bool {
    (v[0] + v[1] + v[2]) % 2 == 0
}

fn subsystem_stabilizer(l: usize) -> LatticeModel {
    let mut b = Builder::new(cubic_edges(l));
    for v in vertices(l).filter(|&v| is_red(v)) {
        b.term(Kind::X, &cube_edges(v, l), "x_cube", &v);
    }
    for v in vertices(l).filter(|&v| !is_red(v)) {
        b.term(Kind::Z, &cube_edges(v, l), "z_cube", &v);
    }
    b.finish(ModelName::SubsystemStabilizer, l)
}

/// The three edges of the cube at `v` that meet its corner `v + o`.
fn corner_edges(v: [usize; 3], o: [usize; 3], l: usize) -> Vec<SpinCoord> {
    (0..3)
        .map(|a| {
            let mut w = v;
            for c in 0..3 {
                if c != a {
                    w = shift(w, c, o[c] as isize, l);
                }
            }
            periodic_edge(w, a)
        })
        .collect()
}

/// Corner offsets with even parity, the class holding the lowest corner.
const EVEN_CORNERS: [[usize; 3]; 4] = [[0, 0, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1]];
const ODD_CORNERS: [[usize; 3]; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];

fn subsystem_checks(l: usize) -> LatticeModel {
    let mut b = Builder::new(cubic_edges(l));
    for v in vertices(l).filter(|&v| is_red(v)) {
        for (c, &o) in ODD_CORNERS.iter().enumerate() {
            b.term(Kind::X, &corner_edges(v, o, l), "x_check", &[v[0], v[1], v[2], c]);
        }
    }
    for v in vertices(l).filter(|&v| !is_red(v)) {
        for (c, &o) in EVEN_CORNERS.iter().enumerate() {
            b.term(Kind::Z, &corner_edges(v, o, l), "z_check", &[v[0], v[1], v[2], c]);
        }
    }
    b.finish(ModelName::SubsystemChecks, l)
}

/// Checks of one cube of the checks model on its 12 edges.
pub fn subsystem_checks_cube(l: usize, corner: [usize; 3]) -> Result<LatticeModel, ModelError> {
    let full = generate(ModelName::SubsystemChecks, l, None)?;
    let spins: Vec<usize> = cube_edges(corner, l)
        .iter()
        .map(|c| full.spin_index[c])
        .collect();
    Ok(full.restrict(&spins))
}
