mod common;

use dlf_core::assembly::{form_value_by_cells, harmonic_extension};
use dlf_core::{
    assemble_schedule, build_level_graph, build_level_graph_with_order, eigensolve, form_value,
    gauge_conjugate, laplacian, realize_one_form, BetaSchedule, BoundaryMode, ChildOrder,
    Complex64, VertexFunction,
};
use proptest::prelude::*;
use rand::Rng;

fn spectrum(sched: &BetaSchedule, m: usize, order: ChildOrder, mode: BoundaryMode) -> Vec<f64> {
    let g = build_level_graph_with_order(m, order);
    eigensolve(&assemble_schedule(&g, sched, mode).unwrap())
        .unwrap()
        .eigenvalues
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn single_diamond_matrix_is_exact() {
    let beta = 0.6180339887;
    let g = build_level_graph(1);
    let op = assemble_schedule(&g, &BetaSchedule::explicit(0.0, vec![beta]), BoundaryMode::Full).unwrap();
    let e = |s: f64| -Complex64::from_polar(1.0, s * beta) / 2.0;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let expect = [
        [one, zero, e(1.0), e(-1.0)],
        [zero, one, e(-1.0), e(1.0)],
        [e(-1.0), e(1.0), one, zero],
        [e(1.0), e(-1.0), zero, one],
    ];
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(op.matrix()[(i, j)], expect[i][j], "entry ({i},{j})");
        }
    }
}

#[test]
fn zero_field_diamond_is_laplacian() {
    let op = laplacian(&build_level_graph(1), BoundaryMode::Full).unwrap();
    #[rustfmt::skip]
    let expect = [
        [2.0, 0.0, -1.0, -1.0],
        [0.0, 2.0, -1.0, -1.0],
        [-1.0, -1.0, 2.0, 0.0],
        [-1.0, -1.0, 0.0, 2.0],
    ];
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(op.matrix()[(i, j)], Complex64::new(expect[i][j] / 2.0, 0.0));
        }
    }
}

#[test]
fn asymmetric_gauge_is_harmonic_conjugation() {
    let (alpha, beta) = (0.37, 0.52);
    let g = build_level_graph(1);
    let sched = BetaSchedule::explicit(0.0, vec![beta]);
    let base = assemble_schedule(&g, &sched, BoundaryMode::Full).unwrap();
    let shifted = assemble_schedule(&g, &sched.clone().with_a0(2.0 * alpha), BoundaryMode::Full).unwrap();
    let theta: Vec<f64> = harmonic_extension(&g, 0.0, 2.0 * alpha);
    let conj = gauge_conjugate(&base, &theta).unwrap();
    assert!((conj.matrix() - shifted.matrix()).iter().all(|v| v.norm() < 1e-15));
    // Top path carries beta + alpha, bottom path beta - alpha around the loop.
    let m = shifted.matrix();
    let e = |phase: f64| -Complex64::from_polar(1.0, phase) / 2.0;
    assert!((m[(0, 2)] - e(beta + alpha)).norm() < 1e-15);
    assert!((m[(2, 1)] - e(beta + alpha)).norm() < 1e-15);
    assert!((m[(1, 3)] - e(beta - alpha)).norm() < 1e-15);
    assert!((m[(3, 0)] - e(beta - alpha)).norm() < 1e-15);
}

#[test]
fn dirichlet_dimension_at_scale_two() {
    let op = assemble_schedule(&build_level_graph(2), &BetaSchedule::explicit(0.0, vec![0.3, 0.9]), BoundaryMode::Dirichlet).unwrap();
    assert_eq!(op.dim(), 10);
}

#[test]
fn random_phase_conjugation_preserves_spectrum() {
    let mut rng = common::rng(11);
    let sched = common::random_schedule(&mut rng, 3);
    let g = build_level_graph(3);
    let op = assemble_schedule(&g, &sched, BoundaryMode::Dirichlet).unwrap();
    let theta: Vec<f64> = (0..op.dim()).map(|_| rng.random_range(-3.2..3.2)).collect();
    let conj = gauge_conjugate(&op, &theta).unwrap();
    assert!(conj.hermiticity_defect() == 0.0 || conj.hermiticity_defect() < 1e-15);
    let a = eigensolve(&op).unwrap().eigenvalues;
    let b = eigensolve(&conj).unwrap().eigenvalues;
    assert!(max_diff(&a, &b) < 1e-12);
}

#[test]
fn child_order_does_not_change_spectrum() {
    let mut rng = common::rng(5);
    let sched = common::random_schedule(&mut rng, 3);
    let reference = spectrum(&sched, 3, ChildOrder::STANDARD, BoundaryMode::Dirichlet);
    for order in ChildOrder::all() {
        let s = spectrum(&sched, 3, order, BoundaryMode::Dirichlet);
        assert!(max_diff(&reference, &s) < 1e-12, "{order:?}");
    }
}

#[test]
fn spectrum_in_unit_interval_at_scale_five() {
    let mut rng = common::rng(3);
    let sched = common::random_schedule(&mut rng, 5);
    let s = spectrum(&sched, 5, ChildOrder::STANDARD, BoundaryMode::Dirichlet);
    assert!(s[0] > -1e-10 && *s.last().unwrap() < 2.0 + 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hermitian_and_bounded(seed in any::<u64>(), m in 0usize..5, full in any::<bool>()) {
        let mut rng = common::rng(seed);
        let sched = common::random_schedule(&mut rng, m);
        let mode = if full { BoundaryMode::Full } else { BoundaryMode::Dirichlet };
        let op = assemble_schedule(&build_level_graph(m), &sched, mode).unwrap();
        prop_assert_eq!(op.hermiticity_defect(), 0.0);
        if op.dim() > 0 {
            let e = eigensolve(&op).unwrap();
            prop_assert!(e.eigenvalues[0] > -1e-10);
            prop_assert!(*e.eigenvalues.last().unwrap() < 2.0 + 1e-10);
        }
    }

    #[test]
    fn a0_is_spectrally_invisible(seed in any::<u64>(), m in 1usize..5, shift in -4.0f64..4.0) {
        let mut rng = common::rng(seed);
        let sched = common::random_schedule(&mut rng, m);
        let a = spectrum(&sched, m, ChildOrder::STANDARD, BoundaryMode::Dirichlet);
        let b = spectrum(&sched.clone().with_a0(shift), m, ChildOrder::STANDARD, BoundaryMode::Dirichlet);
        prop_assert!(max_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn form_matches_matrix(seed in any::<u64>(), m in 0usize..5, full in any::<bool>()) {
        let mut rng = common::rng(seed);
        let sched = common::random_schedule(&mut rng, m);
        let g = build_level_graph(m);
        let a = realize_one_form(&sched, &g).unwrap();
        let mode = if full { BoundaryMode::Full } else { BoundaryMode::Dirichlet };
        let op = assemble_schedule(&g, &sched, mode).unwrap();
        let mut f = VertexFunction::zeros(g.vertex_count());
        for (x, v) in f.0.iter_mut().enumerate() {
            if full || !g.is_boundary(x) {
                *v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let rows: Vec<Complex64> = (0..op.dim())
            .map(|i| {
                let x = op.vertex_of_row(i);
                f.0[x] * (g.degree(x) as f64).sqrt()
            })
            .collect();
        let v = nalgebra::DVector::from_vec(rows);
        let quadratic = (v.adjoint() * op.matrix() * &v)[(0, 0)];
        let energy = form_value(&g, &a, &f).unwrap();
        prop_assert!((quadratic.re - energy).abs() < 1e-12 * (1.0 + energy));
        prop_assert!(quadratic.im.abs() < 1e-12 * (1.0 + energy));
        prop_assert!((form_value_by_cells(&g, &a, &f).unwrap() - energy).abs() < 1e-12 * (1.0 + energy));
    }
}
