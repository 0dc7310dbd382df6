mod common;

use pauli_duality::models::{self, ModelName};
use pauli_duality::pauli_core::dense;
use pauli_duality::structure::{
    self, classify, decompose, free_spin_degeneracy, ladder_normalize, Classification, StructureError,
    StructureOptions,
};
use pauli_duality::{Gate, PauliTerm, SignedTableau};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn zs(n: usize, rows: &[(&[usize], f64)]) -> SignedTableau {
    let terms: Vec<PauliTerm> = rows.iter().map(|(q, v)| PauliTerm::z_string(n, q, *v)).collect();
    SignedTableau::from_terms(&terms).unwrap()
}

fn report(name: ModelName, l: usize) -> structure::DualityReport {
    let m = models::generate(name, l, None).unwrap();
    structure::dualize(&m.tableau().unwrap(), Some(&m.species()), &StructureOptions::default())
        .unwrap()
        .report
}

#[test]
fn two_blocks() {
    let t = zs(5, &[(&[0, 1], 1.0), (&[1], 1.0), (&[2, 3], 1.0), (&[3], 0.5)]);
    let (comps, free) = decompose(&t).unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0].spins, vec![0, 1]);
    assert_eq!(comps[0].terms, vec![0, 1]);
    assert_eq!(comps[1].spins, vec![2, 3]);
    assert_eq!(free, vec![4]);
}

#[test]
fn decompose_needs_diagonal() {
    let t = SignedTableau::from_terms(&[PauliTerm::from_letters("XZ", 1.0).unwrap()]).unwrap();
    assert!(decompose(&t).is_err());
}

#[test]
fn toric_l3_components() {
    let r = report(ModelName::Toric2d, 3);
    assert_eq!(r.components.len(), 2);
    assert_eq!(r.free_spins, 2);
    for c in &r.components {
        assert_eq!(c.classification, Classification::IsingChainEndFields { len: 8 });
    }
    assert!(r.species_pure());
    assert_eq!(r.components.iter().map(|c| c.terms.len()).sum::<usize>(), r.m);
}

#[test]
fn xcube_l4_components() {
    let r = report(ModelName::Xcube, 4);
    assert_eq!(r.components.len(), 7);
    assert_eq!(r.free_spins, 71);
}

#[test]
fn components_partition_non_free_spins() {
    for (name, l) in [
        (ModelName::Toric2d, 4),
        (ModelName::Toric3d, 3),
        (ModelName::Haah, 3),
        (ModelName::Xcube, 3),
        (ModelName::ColorHoneycomb, 2),
    ] {
        let r = report(name, l);
        let mut seen = vec![0usize; r.n];
        for c in &r.components {
            for &q in &c.spins {
                seen[q] += 1;
            }
        }
        for &q in &r.free_spin_indices {
            seen[q] += 1;
        }
        assert!(seen.iter().all(|&k| k == 1), "{name}");
        assert_eq!(r.components.iter().map(|c| c.terms.len()).sum::<usize>(), r.m, "{name}");
    }
}

#[test]
fn ladder_three_spins() {
    let (j1, j2, j3, j4) = (0.3, -0.7, 1.1, 0.9);
    let t = zs(3, &[(&[0], j1), (&[1], j2), (&[2], j3), (&[0, 1, 2], j4)]);
    let (comps, _) = decompose(&t).unwrap();
    let (c, out) = ladder_normalize(&t, &comps[0]).unwrap();
    assert_eq!(c.gates, vec![Gate::CX(0, 1), Gate::CX(1, 2)]);
    let rows: Vec<(String, f64)> = (0..4).map(|r| (out.row(r).letters(), out.row(r).value())).collect();
    assert_eq!(
        rows,
        vec![
            ("ZII".to_string(), j1),
            ("ZZI".to_string(), j2),
            ("IZZ".to_string(), j3),
            ("IIZ".to_string(), j4),
        ]
    );
    // Dense oracle: U H U^† on the 8-dimensional space.
    let u = dense::dense_unitary::<f64>(&c, 3).unwrap();
    let h = dense::dense_matrix::<f64>(&t, 3).unwrap();
    let d = dense::dense_matrix::<f64>(&out, 3).unwrap();
    assert!(dense::max_abs_diff(&(&u * h * u.adjoint()), &d) < 1e-12);
    let (comps, _) = decompose(&out).unwrap();
    let k = classify(&out, &comps[0], None, &StructureOptions::default());
    assert_eq!(k.classification, Classification::ThreeSpinChain);
    assert_eq!(k.order, vec![0, 1, 2]);
}

#[test]
fn ladder_single_field() {
    let t = zs(1, &[(&[0], 1.0)]);
    let (comps, _) = decompose(&t).unwrap();
    let (c, out) = ladder_normalize(&t, &comps[0]).unwrap();
    assert!(c.gates.is_empty());
    assert_eq!(out, t);
    let k = classify(&t, &comps[0], None, &StructureOptions::default());
    assert_eq!(k.classification, Classification::NonInteracting1Body);
}

#[test]
fn ladder_rejects_other_patterns() {
    let t = zs(3, &[(&[0, 1], 1.0), (&[1, 2], 1.0)]);
    let (comps, _) = decompose(&t).unwrap();
    assert!(matches!(
        ladder_normalize(&t, &comps[0]),
        Err(StructureError::PatternMismatch(..))
    ));
}

#[test]
fn ladder_dense_check_random() {
    let mut rng = common::rng(5);
    use rand::Rng;
    for n in 2..=9 {
        let mut rows: Vec<(Vec<usize>, f64)> = (0..n).map(|q| (vec![q], rng.random_range(-1.0..1.0))).collect();
        rows.push(((0..n).collect(), rng.random_range(-1.0..1.0)));
        let refs: Vec<(&[usize], f64)> = rows.iter().map(|(q, v)| (q.as_slice(), *v)).collect();
        let t = zs(n, &refs);
        let (comps, _) = decompose(&t).unwrap();
        let (c, out) = ladder_normalize(&t, &comps[0]).unwrap();
        let u = dense::dense_unitary::<f64>(&c, 10).unwrap();
        let h = dense::dense_matrix::<f64>(&t, 10).unwrap();
        let d = dense::dense_matrix::<f64>(&out, 10).unwrap();
        assert!(dense::max_abs_diff(&(&u * h * u.adjoint()), &d) < 1e-12);
        let (comps, _) = decompose(&out).unwrap();
        let k = classify(&out, &comps[0], None, &StructureOptions::default());
        if n >= 3 {
            assert_eq!(k.classification.chain_len(), Some(n));
        }
    }
}

#[test]
fn all_to_all_without_ladder() {
    let t = zs(4, &[(&[0], 1.0), (&[1], 1.0), (&[2], 1.0), (&[3], 1.0), (&[0, 1, 2, 3], 1.0)]);
    let (comps, _) = decompose(&t).unwrap();
    let k = classify(&t, &comps[0], None, &StructureOptions::default());
    assert_eq!(k.classification, Classification::AllToAllPlusFields { len: 4 });
}

#[test]
fn lasso_pattern() {
    // Chain 0-1-2-3-4 with end fields, plus a bond from spin 4 back to spin 2.
    let t = zs(
        5,
        &[
            (&[0], 1.0),
            (&[0, 1], 1.0),
            (&[1, 2], 1.0),
            (&[2, 3], 1.0),
            (&[3, 4], 1.0),
            (&[4], 1.0),
            (&[2, 4], 1.0),
        ],
    );
    let (comps, _) = decompose(&t).unwrap();
    let k = classify(&t, &comps[0], None, &StructureOptions::default());
    assert_eq!(
        k.classification,
        Classification::LassoIsingChain { len: 5, junction: 2, cycle_len: 3 }
    );
    assert_eq!(k.order, vec![0, 1, 2, 3, 4]);
}

#[test]
fn nearest_neighbour_pattern() {
    // Ladder of two legs: blocks {0,1}, {2,3}, {4,5} coupled only to neighbours.
    let t = zs(
        6,
        &[
            (&[0, 1], 1.0),
            (&[0, 2], 1.0),
            (&[1, 3], 1.0),
            (&[2, 3], 1.0),
            (&[2, 4], 1.0),
            (&[3, 5], 1.0),
            (&[4, 5], 1.0),
        ],
    );
    let (comps, _) = decompose(&t).unwrap();
    let k = classify(&t, &comps[0], None, &StructureOptions::default());
    assert!(matches!(k.classification, Classification::NearestNeighbor1D { .. }));
    assert_eq!(k.blocks.iter().sum::<usize>(), 6);
    assert!(k.blocks.iter().all(|&b| b <= 2));
}

#[test]
fn color_code_classes() {
    for l in 2..=7 {
        let name = ModelName::ColorHoneycomb;
        if !name.valid_size(l) {
            continue;
        }
        let r = report(name, l);
        let lasso = r
            .components
            .iter()
            .filter(|c| matches!(c.classification, Classification::LassoIsingChain { .. }))
            .count();
        if l % 3 == 2 {
            assert_eq!(lasso, 2, "L={l}");
        } else {
            assert!(
                r.components.iter().all(|c| c.classification == Classification::NonInteracting1Body),
                "L={l}"
            );
        }
    }
}

#[test]
fn toric3d_classes() {
    for l in 2..=3 {
        let r = report(ModelName::Toric3d, l);
        let cl = r.classifications();
        assert_eq!(cl.len(), 2, "L={l}");
        assert!(cl.contains(&Classification::IsingChainEndFields { len: l * l * l - 1 }));
        assert!(cl.iter().any(|c| matches!(
            c,
            Classification::BoundedDegreeLocal { max_weight, max_degree } if *max_weight <= 4 && *max_degree <= 4
        )));
    }
}

#[test]
fn subsystem_checks_three_spin_chains() {
    for l in [2, 4] {
        let r = report(ModelName::SubsystemChecks, l);
        assert_eq!(r.components.len(), l * l * l);
        assert!(r.components.iter().all(|c| c.classification == Classification::ThreeSpinChain));
    }
}

#[test]
fn degeneracies() {
    assert_eq!(free_spin_degeneracy(&report(ModelName::Toric2d, 4), 0).unwrap(), 2);
    assert_eq!(free_spin_degeneracy(&report(ModelName::RotatedSurface, 3), 0).unwrap(), 1);
    assert_eq!(free_spin_degeneracy(&report(ModelName::RotatedSurface, 3), 2).unwrap(), 3);
    let l = 2;
    assert_eq!(report(ModelName::SubsystemStabilizer, l).free_spins, 2 * (l * l * l + 1));
    assert!(matches!(
        free_spin_degeneracy(&report(ModelName::Toric3d, 2), 0),
        Err(StructureError::NotApplicable(..))
    ));
}

#[test]
fn zero_couplings_counted() {
    let t = zs(2, &[(&[0], 0.0), (&[1], 1.0), (&[0, 1], 0.0)]);
    assert_eq!(structure::zero_coupling_count(&t), 2);
}

fn component_sets(t: &SignedTableau, col: &[usize], row: &[usize]) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let (comps, _) = decompose(t).unwrap();
    comps
        .iter()
        .map(|c| {
            let mut s: Vec<usize> = c.spins.iter().map(|&q| col[q]).collect();
            let mut r: Vec<usize> = c.terms.iter().map(|&i| row[i]).collect();
            s.sort();
            r.sort();
            (s, r)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decompose_permutation_invariant(
        seed in any::<u64>(),
        n in 1usize..=12,
        m in 1usize..=12,
        cperm in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        let mut rng = common::rng(seed);
        let t = common::random_diagonal(n, m, &mut rng);
        let mut prng = common::rng(cperm);
        let mut cols: Vec<usize> = (0..n).collect();
        let mut rows: Vec<usize> = (0..m).collect();
        cols.shuffle(&mut prng);
        rows.shuffle(&mut prng);
        // Row i of the permuted tableau is row rows[i]; spin q moves to cols[q].
        let terms: Vec<PauliTerm> = rows
            .iter()
            .map(|&i| {
                let qs: Vec<usize> = (0..n).filter(|&q| t.z_bit(i, q)).map(|q| cols[q]).collect();
                PauliTerm::z_string(n, &qs, t.coeffs()[i])
            })
            .collect();
        let p = SignedTableau::from_terms(&terms).unwrap();
        let id: Vec<usize> = (0..n.max(m)).collect();
        let mut inv_cols = vec![0; n];
        for (q, &c) in cols.iter().enumerate() {
            inv_cols[c] = q;
        }
        prop_assert_eq!(component_sets(&t, &id, &id), component_sets(&p, &inv_cols, &rows));
        prop_assert_eq!(decompose(&t).unwrap().1.len(), decompose(&p).unwrap().1.len());
    }
}
