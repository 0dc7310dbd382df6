mod common;

use nalgebra::DMatrix;
use num_complex::Complex;
use pauli_duality::pauli_core::stabilizer::{pauli_expectation, stabilizer_measure_z, stabilizer_run};
use pauli_duality::pauli_core::{dense, io};
use pauli_duality::structure::{self, StructureOptions};
use pauli_duality::models::{self, ModelName};
use pauli_duality::{CliffordCircuit, Gate, PauliError, PauliTerm, SignedTableau};
use proptest::prelude::*;

type C = Complex<f64>;

fn bits(t: &SignedTableau, i: usize) -> (String, String, bool) {
    let n = t.n();
    let f = |v: &dyn Fn(usize) -> bool| (0..n).map(|q| if v(q) { '1' } else { '0' }).collect::<String>();
    (f(&|q| t.x_bit(i, q)), f(&|q| t.z_bit(i, q)), t.sign(i))
}

fn conj(u: &DMatrix<C>, m: &DMatrix<C>) -> DMatrix<C> {
    u * m * u.adjoint()
}

#[test]
fn tableau_encoding_example() {
    // The two rows anticommute; only the encoding is checked here.
    let t = SignedTableau::from_terms_unchecked(&[
        PauliTerm::from_letters("ZYI", 1.0).unwrap(),
        PauliTerm::from_letters("XIY", -1.0).unwrap(),
    ])
    .unwrap();
    assert_eq!(bits(&t, 0), ("010".into(), "110".into(), false));
    assert_eq!(bits(&t, 1), ("101".into(), "001".into(), true));
}

#[test]
fn identity_term_is_all_zero() {
    let t = SignedTableau::from_terms(&[PauliTerm::identity(4)]).unwrap();
    assert_eq!(bits(&t, 0), ("0000".into(), "0000".into(), false));
}

#[test]
fn anticommuting_pair_rejected() {
    let r = SignedTableau::from_terms(&[
        PauliTerm::from_letters("XZ", 1.0).unwrap(),
        PauliTerm::from_letters("ZX", 1.0).unwrap(),
    ]);
    // XZ and ZX commute: two anticommuting positions.
    assert!(r.is_ok());
    let r = SignedTableau::from_terms(&[
        PauliTerm::from_letters("XZ", 1.0).unwrap(),
        PauliTerm::from_letters("ZZ", 1.0).unwrap(),
    ]);
    assert!(matches!(r, Err(PauliError::NonCommutingTerms(0, 1))));
}

#[test]
fn length_mismatch_rejected() {
    let r = SignedTableau::from_terms(&[
        PauliTerm::from_letters("XZ", 1.0).unwrap(),
        PauliTerm::from_letters("ZZZ", 1.0).unwrap(),
    ]);
    assert!(matches!(r, Err(PauliError::LengthMismatch { .. })));
}

#[test]
fn hadamard_negates_y() {
    let mut t = SignedTableau::from_terms(&[PauliTerm::from_letters("Y", 1.0).unwrap()]).unwrap();
    t.apply_gate(Gate::H(0)).unwrap();
    assert_eq!(bits(&t, 0), ("1".into(), "1".into(), true));
    let h = dense::dense_unitary::<f64>(&CliffordCircuit::from_gates(1, vec![Gate::H(0)]).unwrap(), 1).unwrap();
    let y = dense::pauli_matrix::<f64>(&PauliTerm::from_letters("Y", 1.0).unwrap()).unwrap();
    let minus_y = dense::pauli_matrix::<f64>(&PauliTerm::from_letters("Y", -1.0).unwrap()).unwrap();
    assert!(dense::max_abs_diff(&conj(&h, &y), &minus_y) < 1e-12);
}

#[test]
fn cx_relations() {
    for (before, after) in [("ZZ", "IZ"), ("IX", "IX"), ("ZI", "ZI"), ("XI", "XX"), ("IZ", "ZZ")] {
        let mut t = SignedTableau::from_terms(&[PauliTerm::from_letters(before, 1.0).unwrap()]).unwrap();
        t.apply_gate(Gate::CX(0, 1)).unwrap();
        assert_eq!(t.row(0).letters(), after, "{before}");
        assert!(!t.sign(0));
    }
}

#[test]
fn index_out_of_range() {
    let mut t = SignedTableau::from_terms(&[PauliTerm::from_letters("ZZ", 1.0).unwrap()]).unwrap();
    assert!(matches!(t.apply_gate(Gate::H(2)), Err(PauliError::IndexOutOfRange { .. })));
    assert!(matches!(t.apply_gate(Gate::CX(1, 1)), Err(PauliError::RepeatedOperand(1))));
}

#[test]
fn circuit_dimension_mismatch() {
    let mut t = SignedTableau::from_terms(&[PauliTerm::from_letters("ZZ", 1.0).unwrap()]).unwrap();
    let c = CliffordCircuit::new(3);
    assert!(matches!(t.apply_circuit(&c), Err(PauliError::DimensionMismatch { .. })));
}

#[test]
fn empty_circuit_and_inverse() {
    let mut r = common::rng(3);
    let t = common::random_commuting(5, 6, &mut r);
    assert_eq!(t.conjugated(&CliffordCircuit::new(5)).unwrap(), t);
    let c = common::random_circuit(5, 40, &mut r);
    let back = t.conjugated(&c).unwrap().conjugated(&c.inverse()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn inverse_maps_s_to_sdg_and_reverses() {
    let c = CliffordCircuit::from_gates(2, vec![Gate::S(0), Gate::CX(0, 1), Gate::Sdg(1)]).unwrap();
    assert_eq!(c.inverse().gates, vec![Gate::S(1), Gate::CX(0, 1), Gate::Sdg(0)]);
}

#[test]
fn ising_chain_ladder_gives_single_site_z() {
    let m = models::generate(ModelName::IsingChainOpen, 5, None).unwrap();
    let t = m.tableau().unwrap();
    // The product CX(0,1) CX(1,2) ... acts rightmost first.
    let gates = (0..4).rev().map(|i| Gate::CX(i, i + 1)).collect();
    let out = t.conjugated(&CliffordCircuit::from_gates(5, gates).unwrap()).unwrap();
    let mut sites: Vec<usize> = (0..out.m())
        .map(|i| {
            assert!(out.x_row(i).iter().all(|&w| w == 0));
            let s = out.z_support(i);
            assert_eq!(s.len(), 1);
            s[0]
        })
        .collect();
    sites.sort_unstable();
    assert_eq!(sites, vec![1, 2, 3, 4]);
}

#[test]
fn dense_single_z() {
    let t = SignedTableau::from_terms(&[PauliTerm::from_letters("Z", 1.0).unwrap()]).unwrap();
    let d = dense::dense_matrix::<f64>(&t, 14).unwrap();
    let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C::new(1.0, 0.0), C::new(-1.0, 0.0)]));
    assert!(dense::max_abs_diff(&d, &want) < 1e-15);
}

#[test]
fn dense_guard() {
    let t = SignedTableau::from_terms(&[PauliTerm::identity(15)]).unwrap();
    assert!(matches!(
        dense::dense_matrix::<f64>(&t, 14),
        Err(PauliError::TooLarge { n: 15, max: 14 })
    ));
}

fn all_two_qubit_paulis() -> Vec<PauliTerm> {
    let letters = ['I', 'X', 'Y', 'Z'];
    let mut out = Vec::new();
    for a in letters {
        for b in letters {
            for v in [1.0, -1.0] {
                out.push(PauliTerm::from_letters(&format!("{a}{b}"), v).unwrap());
            }
        }
    }
    out
}

#[test]
fn sign_rule_matches_dense_conjugation() {
    let gates = [
        Gate::H(0),
        Gate::H(1),
        Gate::S(0),
        Gate::S(1),
        Gate::Sdg(0),
        Gate::Sdg(1),
        Gate::CX(0, 1),
        Gate::CX(1, 0),
        Gate::CZ(0, 1),
        Gate::CZ(1, 0),
    ];
    for p in all_two_qubit_paulis() {
        for g in gates {
            let c = CliffordCircuit::from_gates(2, vec![g]).unwrap();
            let t = SignedTableau::from_terms(std::slice::from_ref(&p)).unwrap();
            let out = t.conjugated(&c).unwrap();
            let u = dense::dense_unitary::<f64>(&c, 2).unwrap();
            let lhs = dense::dense_matrix::<f64>(&out, 2).unwrap();
            let rhs = conj(&u, &dense::pauli_matrix::<f64>(&p).unwrap());
            assert!(dense::max_abs_diff(&lhs, &rhs) < 1e-12, "{p:?} under {g:?}");
        }
    }
}

#[test]
fn involutions() {
    let mut r = common::rng(11);
    let t = common::random_commuting(4, 5, &mut r);
    for gates in [
        vec![Gate::H(1), Gate::H(1)],
        vec![Gate::CX(0, 2), Gate::CX(0, 2)],
        vec![Gate::CZ(3, 1), Gate::CZ(3, 1)],
        vec![Gate::S(2), Gate::Sdg(2)],
        vec![Gate::Sdg(0), Gate::S(0)],
    ] {
        let c = CliffordCircuit::from_gates(4, gates).unwrap();
        assert_eq!(t.conjugated(&c).unwrap(), t);
    }
}

#[test]
fn stabilizer_basics() {
    let s = stabilizer_run(&CliffordCircuit::new(2), &[false, false]).unwrap();
    assert_eq!(stabilizer_measure_z(&s, 1), vec![false, false]);
    let s = stabilizer_run(&CliffordCircuit::new(3), &[true, false, false]).unwrap();
    assert_eq!(pauli_expectation(&s, &PauliTerm::z_string(3, &[0], 1.0)).unwrap(), -1);
    assert_eq!(pauli_expectation(&s, &PauliTerm::x_string(3, &[0], 1.0)).unwrap(), 0);
    assert!(matches!(
        pauli_expectation(&s, &PauliTerm::identity(2)),
        Err(PauliError::DimensionMismatch { .. })
    ));
    assert!(stabilizer_run(&CliffordCircuit::new(3), &[true]).is_err());
}

#[test]
fn bell_state_expectations_and_measurement() {
    let c = CliffordCircuit::from_gates(2, vec![Gate::H(0), Gate::CX(0, 1)]).unwrap();
    let s = stabilizer_run(&c, &[false, false]).unwrap();
    for (p, want) in [("XX", 1), ("ZZ", 1), ("YY", -1), ("ZI", 0)] {
        let t = PauliTerm::from_letters(p, 1.0).unwrap();
        assert_eq!(pauli_expectation(&s, &t).unwrap(), want, "{p}");
    }
    for seed in 0..20 {
        let b = stabilizer_measure_z(&s, seed);
        assert_eq!(b[0], b[1]);
    }
}

#[test]
fn toric_plaquettes_on_prepared_states() {
    let m = models::generate(ModelName::Toric2d, 2, None).unwrap();
    let t = m.tableau().unwrap();
    let d = structure::dualize(&t, None, &StructureOptions::default()).unwrap();
    let inv = d.circuit.inverse();
    let u = dense::dense_unitary::<f64>(&d.circuit, 8).unwrap();
    for x in common::all_configs(8).into_iter().step_by(7) {
        let basis: Vec<bool> = x.iter().map(|&v| v < 0).collect();
        let s = stabilizer_run(&inv, &basis).unwrap();
        let idx = basis.iter().fold(0usize, |b, &v| (b << 1) | v as usize);
        let psi = u.adjoint().column(idx).clone_owned();
        for i in 0..t.m() {
            let row = t.row(i);
            let e = pauli_expectation(&s, &row).unwrap();
            assert_eq!(e as f64, d.dual.diagonal_term_value(i, &x) / row.coeff);
            let p = dense::pauli_matrix::<f64>(&row).unwrap();
            let ev = (psi.adjoint() * &p * &psi)[(0, 0)].re;
            assert!((ev - e as f64 * row.coeff).abs() < 1e-12);
        }
    }
}

#[test]
fn file_formats_round_trip() {
    let mut r = common::rng(5);
    let t = common::random_commuting(6, 7, &mut r);
    let text = io::write_hamiltonian(&t);
    assert!(text.starts_with("PAULI-HAM v1\nn 6\n"));
    let back = io::parse_hamiltonian(&text).unwrap();
    assert_eq!(back, t);
    assert_eq!(io::write_hamiltonian(&back), text);
    let c = common::random_circuit(6, 30, &mut r);
    let text = io::write_circuit(&c);
    assert!(text.starts_with("CLIFF v1\nn 6\n"));
    let back = io::parse_circuit(&text).unwrap();
    assert_eq!(back, c);
    assert_eq!(io::write_circuit(&back), text);
}

#[test]
fn file_parsing() {
    let t = io::parse_hamiltonian("PAULI-HAM v1\n# comment\nn 2\n-1.5 XX  # trailing\n2 ZZ\n").unwrap();
    assert_eq!(t.m(), 2);
    assert_eq!(t.value(0), -1.5);
    assert_eq!(t.value(1), 2.0);
    assert!(io::parse_hamiltonian("PAULI-HAM v1\nn 2\n1 XQ\n").is_err());
    assert!(io::parse_hamiltonian("PAULI-HAM v2\nn 1\n1 X\n").is_err());
    assert!(matches!(
        io::parse_hamiltonian("PAULI-HAM v1\nn 2\n1 XI\n1 ZI\n"),
        Err(PauliError::NonCommutingTerms(0, 1))
    ));
    let c = io::parse_circuit("CLIFF v1\nn 3\nH 0\nSDG 2\nCX 0 1\nCZ 2 1\nS 1\n").unwrap();
    assert_eq!(
        c.gates,
        vec![Gate::H(0), Gate::Sdg(2), Gate::CX(0, 1), Gate::CZ(2, 1), Gate::S(1)]
    );
    assert!(io::parse_circuit("CLIFF v1\nn 2\nCX 0 2\n").is_err());
    assert!(io::parse_circuit("CLIFF v1\nn 2\nT 0\n").is_err());
}

#[test]
fn gate_counts_and_depth() {
    let c = CliffordCircuit::from_gates(
        3,
        vec![Gate::H(0), Gate::H(1), Gate::CX(0, 1), Gate::S(2), Gate::CZ(1, 2), Gate::Sdg(0)],
    )
    .unwrap();
    let k = c.counts();
    assert_eq!((k.h, k.s, k.sdg, k.cx, k.cz), (2, 1, 1, 1, 1));
    assert_eq!(k.total(), 6);
    assert_eq!(c.depth(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dense_conjugation_identity(seed in any::<u64>(), n in 1usize..=6, m in 1usize..=6) {
        let mut r = common::rng(seed);
        let t = common::random_commuting(n, m, &mut r);
        let c = common::random_circuit(n, 50, &mut r);
        let out = t.conjugated(&c).unwrap();
        let u = dense::dense_unitary::<f64>(&c, 6).unwrap();
        let lhs = dense::dense_matrix::<f64>(&out, 6).unwrap();
        let rhs = conj(&u, &dense::dense_matrix::<f64>(&t, 6).unwrap());
        prop_assert!(dense::max_abs_diff(&lhs, &rhs) < 1e-12);
        let (a, b) = (dense::spectrum::<f64>(&t, 6).unwrap(), dense::spectrum::<f64>(&out, 6).unwrap());
        prop_assert!(common::max_diff(&a, &b) < 1e-10);
    }

    #[test]
    fn commutation_and_coefficients_preserved(seed in any::<u64>(), n in 1usize..=12, m in 1usize..=12) {
        let mut r = common::rng(seed);
        let t = common::random_commuting(n, m, &mut r);
        let mut cur = t.clone();
        for _ in 0..60 {
            cur.apply_gate(common::random_gate(n, &mut r)).unwrap();
            for i in 0..m {
                for j in 0..m {
                    prop_assert!(!cur.symplectic(i, j));
                }
            }
        }
        prop_assert_eq!(cur.coeffs(), t.coeffs());
    }

    #[test]
    fn circuit_then_inverse_is_identity(seed in any::<u64>(), n in 1usize..=70) {
        let mut r = common::rng(seed);
        let t = common::random_commuting(n, 5, &mut r);
        let c = common::random_circuit(n, 100, &mut r);
        prop_assert_eq!(t.conjugated(&c).unwrap().conjugated(&c.inverse()).unwrap(), t);
    }
}
