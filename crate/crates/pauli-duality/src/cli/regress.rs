//! Dual-structure regression over the lattice model families.

use crate::models::{self, ModelName};
use crate::structure::{self, Classification, DualityReport, StructureOptions};
use crate::pauli_core::GateCounts;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

pub const SCHEMA: &str = "pauli-duality/regress/1";

/// Integer formula in the linear size `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Const(i64),
    /// `Σ_k c_k L^k`, lowest power first.
    Poly(Vec<i64>),
}

impl Formula {
    pub fn eval(&self, l: usize) -> i64 {
        match self {
            Formula::Const(c) => *c,
            Formula::Poly(cs) => cs.iter().rev().fold(0, |acc, &c| acc * l as i64 + c),
        }
    }
}

/// Sizes a case applies to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeFilter {
    All,
    /// `L mod k == r`.
    Mod { k: usize, r: usize },
    /// `L mod k != r`.
    NotMod { k: usize, r: usize },
}

impl SizeFilter {
    pub fn matches(&self, l: usize) -> bool {
        match *self {
            SizeFilter::All => true,
            SizeFilter::Mod { k, r } => l % k == r,
            SizeFilter::NotMod { k, r } => l % k != r,
        }
    }
}

/// Coarse class used for matching: `chain` covers every open chain with end
/// fields, including three-spin chains.
pub fn class_key(c: &Classification) -> &'static str {
    if c.chain_len().is_some() {
        "chain"
    } else {
        c.name()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub key: String,
    /// `None`: any positive number.
    pub count: Option<Formula>,
    /// Expected chain length, for `chain` entries.
    pub len: Option<Formula>,
}

impl ClassCount {
    fn new(key: &str, count: Option<Formula>, len: Option<Formula>) -> Self {
        ClassCount {
            key: key.into(),
            count,
            len,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub when: SizeFilter,
    /// Full multiset: components of any other class are a mismatch.
    pub classes: Vec<ClassCount>,
    pub free_spins: Formula,
    pub species_pure: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemperatureValidity {
    AllBeta,
    /// Exact sampling at all β except for components needing Glauber dynamics,
    /// which are trusted only at high temperature.
    HighTemperature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegressionExpectation {
    pub model: ModelName,
    pub sizes: Vec<usize>,
    pub cases: Vec<Case>,
    pub temperature: TemperatureValidity,
}

fn poly(cs: &[i64]) -> Option<Formula> {
    Some(Formula::Poly(cs.to_vec()))
}

fn c(k: i64) -> Option<Formula> {
    Some(Formula::Const(k))
}

fn all(classes: Vec<ClassCount>, free: Formula, pure: bool) -> Vec<Case> {
    vec![Case {
        when: SizeFilter::All,
        classes,
        free_spins: free,
        species_pure: pure,
    }]
}

/// Expectations for one model at the given sizes.
pub fn expectation(model: ModelName, sizes: Vec<usize>) -> RegressionExpectation {
    use ModelName::*;
    let chain = |n, len| ClassCount::new("chain", n, len);
    let cases = match model {
        IsingChainOpen => all(
            vec![ClassCount::new("non_interacting", poly(&[-1, 1]), None)],
            Formula::Const(1),
            true,
        ),
        Toric2d => all(vec![chain(c(2), poly(&[-1, 0, 1]))], Formula::Const(2), true),
        Toric3d => all(
            vec![
                chain(c(1), poly(&[-1, 0, 0, 1])),
                ClassCount::new("bounded_degree_local", c(1), None),
            ],
            Formula::Const(3),
            false,
        ),
        ColorHoneycomb => vec![
            Case {
                when: SizeFilter::Mod { k: 3, r: 2 },
                classes: vec![ClassCount::new("lasso_ising_chain", c(2), None)],
                free_spins: Formula::Const(4),
                species_pure: true,
            },
            Case {
                when: SizeFilter::NotMod { k: 3, r: 2 },
                classes: vec![ClassCount::new("non_interacting", None, None)],
                free_spins: Formula::Const(0),
                species_pure: true,
            },
        ],
        RotatedSurface => all(
            vec![ClassCount::new("non_interacting", None, None)],
            Formula::Const(1),
            true,
        ),
        Haah => all(vec![chain(c(2), None)], Formula::Const(2), true),
        Xcube => all(
            vec![
                chain(poly(&[0, 1]), None),
                ClassCount::new("nearest_neighbor_1d", poly(&[-1, 1]), None),
            ],
            Formula::Poly(vec![-1, 2, 4]),
            false,
        ),
        SubsystemStabilizer => all(vec![chain(c(2), None)], Formula::Poly(vec![2, 0, 0, 2]), true),
        SubsystemChecks => all(
            vec![chain(poly(&[0, 0, 0, 1]), c(3))],
            Formula::Const(0),
            false,
        ),
    };
    RegressionExpectation {
        model,
        sizes,
        cases,
        temperature: if model == Toric3d {
            TemperatureValidity::HighTemperature
        } else {
            TemperatureValidity::AllBeta
        },
    }
}

/// Default suite; `full_scale` extends the 2D models to `L = 90` and the 3D
/// models to `L = 20`.
pub fn default_suite(full_scale: bool) -> Vec<RegressionExpectation> {
    use ModelName::*;
    let range = |a: usize, b: usize| (a..=b).collect::<Vec<_>>();
    let (l2, l3) = if full_scale { (90, 20) } else { (20, 6) };
    let haah: Vec<usize> = (3..=if full_scale { 19 } else { 9 })
        .filter(|&l| models::haah_valid(l))
        .collect();
    let even = |max: usize| (2..=max).step_by(2).collect::<Vec<_>>();
    vec![
        expectation(Toric2d, range(2, l2)),
        expectation(Toric3d, range(2, l3)),
        expectation(ColorHoneycomb, range(2, if full_scale { l2 } else { 10 })),
        expectation(Haah, haah),
        expectation(Xcube, range(2, l3)),
        expectation(RotatedSurface, range(2, if full_scale { l2 } else { 12 })),
        expectation(SubsystemStabilizer, even(if full_scale { l3 } else { 6 })),
        expectation(SubsystemChecks, even(if full_scale { l3 } else { 6 })),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegressionRecord {
    pub model: ModelName,
    pub l: usize,
    pub n: usize,
    pub m: usize,
    pub pass: bool,
    pub mismatches: Vec<String>,
    pub classes: BTreeMap<String, usize>,
    pub free_spins: usize,
    pub expected_free_spins: Option<i64>,
    pub unknown: usize,
    pub gate_counts: GateCounts,
    pub depth: usize,
    pub seconds: f64,
}

/// Compare a report against the case matching `l`.
pub fn check_report(exp: &RegressionExpectation, l: usize, r: &DualityReport) -> (Vec<String>, Option<i64>) {
    let mut bad = Vec::new();
    let Some(case) = exp.cases.iter().find(|c| c.when.matches(l)) else {
        bad.push(format!("no case for L = {l}"));
        return (bad, None);
    };
    let free = case.free_spins.eval(l);
    if r.free_spins as i64 != free {
        bad.push(format!("free spins {} != {free}", r.free_spins));
    }
    let mut seen: BTreeMap<&str, Vec<&Classification>> = BTreeMap::new();
    for comp in &r.components {
        seen.entry(class_key(&comp.classification))
            .or_default()
            .push(&comp.classification);
    }
    for cc in &case.classes {
        let got = seen.remove(cc.key.as_str()).unwrap_or_default();
        match &cc.count {
            Some(f) if got.len() as i64 != f.eval(l) => {
                bad.push(format!("{}: {} components, expected {}", cc.key, got.len(), f.eval(l)))
            }
            None if got.is_empty() => bad.push(format!("{}: none found", cc.key)),
            _ => {}
        }
        if let Some(f) = &cc.len {
            let want = f.eval(l) as usize;
            if let Some(g) = got.iter().find(|g| g.chain_len() != Some(want)) {
                bad.push(format!("{}: {g:?}, expected length {want}", cc.key));
            }
        }
    }
    for (k, v) in seen {
        bad.push(format!("unexpected {} x{k}", v.len()));
    }
    if case.species_pure && !r.species_pure() {
        bad.push("components mix species".into());
    }
    if r.unknown_count() > 0 {
        bad.push(format!("{} unknown components", r.unknown_count()));
    }
    (bad, Some(free))
}

pub fn run_entry(exp: &RegressionExpectation, l: usize) -> RegressionRecord {
    let start = Instant::now();
    let fail = |msg: String| RegressionRecord {
        model: exp.model,
        l,
        n: 0,
        m: 0,
        pass: false,
        mismatches: vec![msg],
        classes: BTreeMap::new(),
        free_spins: 0,
        expected_free_spins: None,
        unknown: 0,
        gate_counts: GateCounts::default(),
        depth: 0,
        seconds: start.elapsed().as_secs_f64(),
    };
    let model = match models::generate(exp.model, l, None) {
        Ok(m) => m,
        Err(e) => return fail(e.to_string()),
    };
    let d = match model
        .tableau()
        .map_err(|e| e.to_string())
        .and_then(|t| {
            structure::dualize(&t, Some(&model.species()), &StructureOptions::default())
                .map_err(|e| e.to_string())
        }) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let r = &d.report;
    let (mismatches, expected_free_spins) = check_report(exp, l, r);
    RegressionRecord {
        model: exp.model,
        l,
        n: r.n,
        m: r.m,
        pass: mismatches.is_empty(),
        mismatches,
        classes: r.class_counts(),
        free_spins: r.free_spins,
        expected_free_spins,
        unknown: r.unknown_count(),
        gate_counts: r.gate_counts.clone(),
        depth: r.depth,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Every `(model, L)` entry of the suite, in suite order.
pub fn run_regression(suite: &[RegressionExpectation]) -> Vec<RegressionRecord> {
    let jobs: Vec<(&RegressionExpectation, usize)> = suite
        .iter()
        .flat_map(|e| e.sizes.iter().map(move |&l| (e, l)))
        .collect();
    jobs.into_par_iter().map(|(e, l)| run_entry(e, l)).collect()
}

/// Plain-text table of the records.
pub fn summary(records: &[RegressionRecord]) -> String {
    let mut s = format!(
        "{:<22} {:>3} {:>6} {:>6} {:>5} {:>8} {:>6} {:>8}  {}\n",
        "model", "L", "n", "m", "free", "cx", "h", "seconds", "result"
    );
    for r in records {
        s.push_str(&format!(
            "{:<22} {:>3} {:>6} {:>6} {:>5} {:>8} {:>6} {:>8.3}  {}\n",
            r.model.as_str(),
            r.l,
            r.n,
            r.m,
            r.free_spins,
            r.gate_counts.cx,
            r.gate_counts.h,
            r.seconds,
            if r.pass {
                "ok".to_string()
            } else {
                format!("FAIL {}", r.mismatches.join("; "))
            }
        ));
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    s.push_str(&format!("{} entries, {failed} failed\n", records.len()));
    s
}
