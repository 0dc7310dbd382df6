mod common;

use pauli_duality::models::{self, ModelName, SpinCoord};
use pauli_duality::pauli_core::dense;
use pauli_duality::structure::Classification;
use pauli_duality::toric_explicit::{self as te, spin, ToricError};
use pauli_duality::{CliffordCircuit, Gate, SignedTableau};
use rand::seq::SliceRandom;
use std::collections::BTreeSet;

fn toric(l: usize) -> (models::LatticeModel, SignedTableau) {
    let m = models::generate(ModelName::Toric2d, l, None).unwrap();
    let t = m.tableau().unwrap();
    (m, t)
}

fn row_index(m: &models::LatticeModel, label: &str) -> usize {
    m.labels.iter().position(|x| x.to_string() == label).unwrap()
}

#[test]
fn flat_index_matches_model() {
    for l in 2..=5 {
        let (m, _) = toric(l);
        for i in 0..l {
            for j in 0..l {
                assert_eq!(m.index(&SpinCoord::edge(&[i, j], 'h')), Some(spin(l, i, j, 0)));
                assert_eq!(m.index(&SpinCoord::edge(&[i, j], 'v')), Some(spin(l, i, j, 1)));
            }
        }
    }
}

#[test]
fn partition_sizes() {
    for l in 2..=8 {
        let p = te::partition(l).unwrap();
        assert_eq!(p.lambda_a.len(), l * l - 1);
        assert_eq!(p.lambda_a.len() + p.lambda_b.len(), 2 * l * l);
        assert!(p.free_spins.iter().all(|q| p.lambda_b.contains(q)));
    }
    assert!(matches!(te::partition(1), Err(ToricError::InvalidSize(1))));
    assert!(te::build_decoupler(1).is_err());
    assert!(te::build_ladders(0).is_err());
}

#[test]
fn decoupler_support_law() {
    for l in 2..=10 {
        let (m, t) = toric(l);
        let p = te::partition(l).unwrap();
        let a: BTreeSet<usize> = p.lambda_a.iter().copied().collect();
        let c = te::build_decoupler(l).unwrap();
        for g in &c.gates {
            let Gate::CX(ctl, tgt) = *g else { panic!("{g:?}") };
            assert!(a.contains(&ctl) && !a.contains(&tgt), "L={l} {g:?}");
        }
        let out = t.conjugated(&c).unwrap();
        for r in 0..t.m() {
            let before: BTreeSet<usize> = t.row(r).support().into_iter().collect();
            let after: BTreeSet<usize> = out.row(r).support().into_iter().collect();
            let keep_a = m.labels[r].species == "star";
            let want: BTreeSet<usize> = before.iter().copied().filter(|q| a.contains(q) == keep_a).collect();
            assert_eq!(after, want, "L={l} {}", m.labels[r]);
        }
    }
}

#[test]
fn decoupler_plaquette_examples() {
    let l = 4;
    let (m, t) = toric(l);
    let out = t.conjugated(&te::build_decoupler(l).unwrap()).unwrap();
    for i in 1..l - 1 {
        for j in 0..l - 1 {
            let r = row_index(&m, &format!("plaquette@{i},{j}"));
            let supp: BTreeSet<usize> = out.row(r).support().into_iter().collect();
            assert_eq!(supp, BTreeSet::from([spin(l, i, j, 0), spin(l, i + 1, j, 0)]), "({i},{j})");
        }
    }
    let r = row_index(&m, &format!("plaquette@{},{}", l - 1, l - 1));
    assert_eq!(out.row(r), t.row(r));
}

#[test]
fn decoupler_gates_commute() {
    let mut rng = common::rng(3);
    for l in [3, 5] {
        let (_, t) = toric(l);
        let c = te::build_decoupler(l).unwrap();
        let want = t.conjugated(&c).unwrap();
        for _ in 0..20 {
            let mut g = c.gates.clone();
            g.shuffle(&mut rng);
            let c2 = CliffordCircuit::from_gates(t.n(), g).unwrap();
            assert_eq!(t.conjugated(&c2).unwrap(), want);
        }
    }
}

#[test]
fn hadamard_layer() {
    for l in 2..=6 {
        let (m, t) = toric(l);
        let hl = te::build_hadamard_layer(l).unwrap();
        assert_eq!(hl.gates.len(), l * l - 1);
        assert!(hl.gates.iter().all(|g| matches!(g, Gate::H(_))));
        let mid = t.conjugated(&te::build_decoupler(l).unwrap()).unwrap();
        let out = mid.conjugated(&hl).unwrap();
        for r in 0..t.m() {
            if m.labels[r].species == "star" {
                assert!((0..t.n()).all(|q| !out.x_bit(r, q)));
            } else {
                assert_eq!(out.row(r), mid.row(r));
            }
        }
        assert!(out.is_diagonal());
    }
    assert_eq!(te::build_hadamard_layer(3).unwrap().gates.len(), 8);
}

#[test]
fn full_circuit_two_chains() {
    for l in 2..=8 {
        let (_, dual, r) = te::explicit_report(l).unwrap();
        assert!(dual.is_diagonal());
        assert!(te::is_two_chains(&r, l), "L={l}: {:?}", te::non_chain_classes(&r));
        let p = te::partition(l).unwrap();
        let mut free = r.free_spin_indices.clone();
        free.sort();
        let mut want = p.free_spins.to_vec();
        want.sort();
        assert_eq!(free, want);
        let a: BTreeSet<usize> = p.lambda_a.iter().copied().collect();
        for c in &r.components {
            let inside = c.spins.iter().all(|q| a.contains(q));
            assert_eq!(inside, c.species.contains_key("star"), "L={l}");
        }
    }
    let (_, _, r) = te::explicit_report(3).unwrap();
    assert!(r.components.iter().all(|c| c.classification == Classification::IsingChainEndFields { len: 8 }));
}

#[test]
fn hadamard_count_and_cx_growth() {
    let mut cx = Vec::new();
    for l in 2..=9 {
        let k = te::build_circuit(l).unwrap().counts();
        assert_eq!(k.h, l * l - 1);
        cx.push(k.cx as f64);
    }
    // Third differences of a cubic are constant and nonzero.
    let d3: Vec<f64> = cx.windows(4).map(|w| w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0]).collect();
    assert!(d3.iter().all(|&d| d > 0.0), "{cx:?}");
}

#[test]
fn l2_dense_oracle() {
    let (_, t) = toric(2);
    let c = te::build_circuit(2).unwrap();
    let out = t.conjugated(&c).unwrap();
    assert!(out.is_diagonal());
    let u = dense::dense_unitary::<f64>(&c, 8).unwrap();
    let h = dense::dense_matrix::<f64>(&t, 8).unwrap();
    let d = dense::dense_matrix::<f64>(&out, 8).unwrap();
    let conj = &u * h * u.adjoint();
    assert!(dense::max_abs_diff(&conj, &d) < 1e-10);
    let off = (0..256)
        .flat_map(|i| (0..256).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .fold(0.0f64, |m, (i, j)| m.max(conj[(i, j)].norm()));
    assert!(off < 1e-10);
    let a = dense::spectrum(&t, 8).unwrap();
    let b = dense::spectrum(&out, 8).unwrap();
    assert!(common::max_diff(&a, &b) < 1e-10);
}

#[test]
fn cross_validation_agrees() {
    for l in 2..=8 {
        let cv = te::cross_validate(l).unwrap();
        assert_eq!(cv.explicit.free_spins, 2);
        assert_eq!(cv.generic.free_spins, 2);
        assert_eq!(cv.explicit_chains, cv.generic_chains);
    }
}

#[test]
fn coefficients_preserved() {
    for l in 2..=5 {
        let (_, t) = toric(l);
        let (_, dual, _) = te::explicit_report(l).unwrap();
        assert_eq!(dual.coeffs(), t.coeffs());
        let signs_t: Vec<bool> = (0..t.m()).map(|r| t.sign(r)).collect();
        let signs_d: Vec<bool> = (0..t.m()).map(|r| dual.sign(r)).collect();
        assert_eq!(signs_t, signs_d);
    }
}
