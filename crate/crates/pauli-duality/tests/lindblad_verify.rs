mod common;

use nalgebra::DMatrix;
use num_complex::Complex;
use pauli_duality::lindblad_verify::{
    adjoint_action, depolarizing, multiset_distance, random_generator, random_hermitian, random_primitive_generator,
    random_state, random_unitary, spectral_gap, trace_norm, unvectorize, vectorize, verify_conjugation, CMatrix,
    GkslGenerator, LindbladError,
};
use proptest::prelude::*;

fn cm(d: usize, v: &[(f64, f64)]) -> CMatrix<f64> {
    DMatrix::from_row_iterator(d, d, v.iter().map(|&(a, b)| Complex::new(a, b)))
}

fn max_dev(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

fn sigma_z() -> CMatrix<f64> {
    cm(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)])
}

#[test]
fn zero_generator() {
    let s = GkslGenerator::<f64>::zero(3).to_superoperator().unwrap();
    assert!(s.matrix.iter().all(|x| x.norm() == 0.0));
    assert_eq!(s.matrix.nrows(), 9);
}

#[test]
fn dephasing_spectrum() {
    let g = GkslGenerator::new(CMatrix::zeros(2, 2), vec![(1.0, sigma_z())]).unwrap();
    let s = g.to_superoperator().unwrap();
    let mut re: Vec<f64> = s.eigenvalues().iter().map(|z| z.re).collect();
    re.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(common::max_diff(&re, &[-2.0, -2.0, 0.0, 0.0]) < 1e-12);
    assert!(s.eigenvalues().iter().all(|z| z.im.abs() < 1e-12));
    assert!(matches!(s.fixed_point(), Err(LindbladError::NotPrimitive(_))));
    assert!(matches!(
        verify_conjugation(&g, &CMatrix::identity(2, 2), 1, &mut common::rng(0)),
        Err(LindbladError::NotPrimitive(_))
    ));
}

#[test]
fn superoperator_matches_direct_and_preserves_trace() {
    let mut rng = common::rng(1);
    for d in [2, 3, 4] {
        let g = random_generator::<f64>(d, &mut rng).unwrap();
        let s = g.to_superoperator().unwrap();
        assert!(s.trace_defect() < 1e-12);
        for _ in 0..5 {
            let rho = random_state::<f64>(d, &mut rng);
            let direct = g.apply(&rho);
            assert!(max_dev(&direct, &s.apply(&rho)) < 1e-12);
            assert!(direct.trace().norm() < 1e-12);
        }
    }
}

#[test]
fn vectorization_is_column_stacking() {
    let m = cm(2, &[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 0.0)]);
    let v = vectorize(&m);
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    assert_eq!(re, vec![1.0, 3.0, 2.0, 4.0]);
    assert_eq!(unvectorize(&v, 2), m);
}

#[test]
fn input_validation() {
    assert!(matches!(
        GkslGenerator::<f64>::new(CMatrix::zeros(17, 17), vec![]),
        Err(LindbladError::TooLarge(17))
    ));
    let not_herm = cm(2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
    assert!(matches!(GkslGenerator::new(not_herm, vec![]), Err(LindbladError::NotHermitian(_))));
    assert!(matches!(
        GkslGenerator::new(CMatrix::zeros(2, 2), vec![(-1.0, sigma_z())]),
        Err(LindbladError::BadRate(_))
    ));
    assert!(matches!(
        GkslGenerator::new(CMatrix::zeros(2, 2), vec![(1.0, CMatrix::zeros(3, 3))]),
        Err(LindbladError::Shape(3, 3, 2))
    ));
}

#[test]
fn identity_conjugation() {
    let mut rng = common::rng(2);
    let g = random_generator::<f64>(3, &mut rng).unwrap();
    let h = g.conjugate(&CMatrix::identity(3, 3)).unwrap();
    assert!(max_dev(&g.hamiltonian, &h.hamiltonian) < 1e-15);
    for ((a, l), (b, k)) in g.jumps.iter().zip(&h.jumps) {
        assert_eq!(a, b);
        assert!(max_dev(l, k) < 1e-15);
    }
}

#[test]
fn double_conjugation() {
    let mut rng = common::rng(3);
    let g = random_generator::<f64>(4, &mut rng).unwrap();
    let u = random_unitary::<f64>(4, &mut rng);
    let back = g.conjugate(&u).unwrap().conjugate(&u.adjoint()).unwrap();
    assert!(max_dev(&g.hamiltonian, &back.hamiltonian) < 1e-12);
    for ((_, l), (_, k)) in g.jumps.iter().zip(&back.jumps) {
        assert!(max_dev(l, k) < 1e-12);
    }
}

#[test]
fn conjugate_superoperator_identity() {
    let mut rng = common::rng(4);
    for d in [2, 3, 4] {
        let g = random_generator::<f64>(d, &mut rng).unwrap();
        let u = random_unitary::<f64>(d, &mut rng);
        let s = g.to_superoperator().unwrap().matrix;
        let st = g.conjugate(&u).unwrap().to_superoperator().unwrap().matrix;
        let a = adjoint_action(&u);
        assert!(max_dev(&st, &(&a * s * a.adjoint())) < 1e-10);
        // The adjoint action really is X -> U X U^† under column stacking.
        let x = random_hermitian::<f64>(d, &mut rng);
        assert!(max_dev(&unvectorize(&(&a * vectorize(&x)), d), &(&u * &x * u.adjoint())) < 1e-12);
    }
}

#[test]
fn not_unitary_rejected() {
    let g = depolarizing::<f64>(2, 1.0);
    let u = cm(2, &[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    assert!(matches!(g.conjugate(&u), Err(LindbladError::NotUnitary(_))));
}

#[test]
fn depolarizing_fixed_point() {
    let mut rng = common::rng(5);
    let d = 4;
    let g = depolarizing::<f64>(d, 0.7);
    let sigma = g.to_superoperator().unwrap().fixed_point().unwrap();
    let mixed = CMatrix::<f64>::identity(d, d) / Complex::new(d as f64, 0.0);
    assert!(max_dev(&sigma, &mixed) < 1e-12);
    let u = random_unitary::<f64>(d, &mut rng);
    let st = g.conjugate(&u).unwrap().to_superoperator().unwrap().fixed_point().unwrap();
    assert!(trace_norm(&(st - &mixed)) / 2.0 < 1e-10);
    let gap = spectral_gap(&g.to_superoperator().unwrap().eigenvalues(), 1e-9);
    assert!((gap - 0.7).abs() < 1e-10);
}

#[test]
fn identity_unitary_passes() {
    let mut rng = common::rng(6);
    let g = random_primitive_generator::<f64>(3, &mut rng).unwrap();
    let r = verify_conjugation(&g, &CMatrix::identity(3, 3), 3, &mut rng).unwrap();
    assert!(r.pass);
    assert!(r.checks().iter().all(|&(_, v)| v < 1e-12));
}

#[test]
fn multiset_distance_ignores_order() {
    let a = [Complex::new(0.0f64, 0.0), Complex::new(-1.0, 2.0), Complex::new(-1.0, -2.0)];
    let b = [a[2], a[0], a[1]];
    assert_eq!(multiset_distance(&a, &b), 0.0);
    let c = [a[0], a[1], Complex::new(-1.0, -1.0)];
    assert!((multiset_distance(&a, &c) - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn conjugation_invariants(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = common::rng(seed);
        let g = random_primitive_generator::<f64>(d, &mut rng).unwrap();
        let u = random_unitary::<f64>(d, &mut rng);
        let r = verify_conjugation(&g, &u, 3, &mut rng).unwrap();
        prop_assert!(r.pass, "{:?}", r);
        prop_assert!(r.gap > 0.0);
    }
}
