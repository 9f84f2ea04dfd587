mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use dlf_core::decimation::{
    decimation_map, dirichlet_dimension, eigen_residual, extend_with_form, inverse_branches,
    max_edge_difference, phi_pair, schur_complement, unit_multiplicity, Branch,
};
use dlf_core::oracle::{default_z_grid, verify_similarity, verify_similarity_in_mode};
use dlf_core::{
    admissible_limit, assemble_schedule, build_level_graph, compare, eigensolve,
    fractal_spectrum, level_spectrum, realize_one_form, uniform_schedule, AdmissibleSequence,
    BetaSchedule, BoundaryMode, Complex64, VertexFunction,
};
use proptest::prelude::*;

#[test]
fn zero_field_tables_match_closed_form() {
    for m in 1..=9 {
        let table = level_spectrum(&BetaSchedule::zero(m), m).unwrap();
        let exact = common::zero_field_spectrum(m);
        assert_eq!(table.rows().len(), exact.len(), "m={m}");
        for (row, (value, mult, birth)) in table.rows().iter().zip(exact) {
            assert!((row.value - value).abs() < 1e-13, "m={m}");
            assert_eq!((row.multiplicity, row.birth_level), (mult, birth), "m={m}");
        }
    }
}

#[test]
fn single_diamond_schur_on_a_grid() {
    for i in 0..20 {
        let beta = -1.5 + 3.0 * i as f64 / 19.0;
        let g = build_level_graph(1);
        let op = assemble_schedule(&g, &BetaSchedule::explicit(0.0, vec![beta]), BoundaryMode::Full).unwrap();
        for j in 0..20 {
            let z = -0.5 + 3.0 * j as f64 / 19.0;
            let s = schur_complement(&op, Complex64::new(z, 0.0)).unwrap();
            let (p0, p1) = phi_pair(Complex64::new(z, 0.0), beta).unwrap();
            // phi0 D - phi1 I with D the interval Laplacian.
            let expect = [[p0 - p1, -p0], [-p0, p0 - p1]];
            for a in 0..2 {
                for b in 0..2 {
                    assert!((s[(a, b)] - expect[a][b]).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn gluing_identity_on_random_schedules() {
    let mut rng = common::rng(2024);
    for m in 2..=4 {
        for _ in 0..4 {
            let sched = common::random_schedule(&mut rng, m);
            for mode in [BoundaryMode::Full, BoundaryMode::Dirichlet] {
                let r = verify_similarity_in_mode(&sched, m, &default_z_grid(), mode).unwrap();
                assert!(r < 1e-9, "m={m} {mode:?}: {r:e}");
            }
        }
    }
    let u = uniform_schedule(0.7, 0.24, 3).unwrap();
    assert!(verify_similarity(&u, 3, &default_z_grid()).unwrap() < 1e-9);
    assert!(verify_similarity(&BetaSchedule::zero(3), 3, &default_z_grid()).unwrap() < 1e-10);
}

#[test]
fn complex_grid_points() {
    let grid: Vec<Complex64> = (0..10).map(|k| Complex64::new(0.2 * k as f64, 0.3)).collect();
    let sched = BetaSchedule::explicit(0.4, vec![0.3, -0.8, 0.1]);
    assert!(verify_similarity(&sched, 3, &grid).unwrap() < 1e-9);
}

#[test]
fn level_two_matches_oracle() {
    let table = level_spectrum(&BetaSchedule::zero(2), 2).unwrap();
    let op = assemble_schedule(&build_level_graph(2), &BetaSchedule::zero(2), BoundaryMode::Dirichlet).unwrap();
    let report = compare(&table, &eigensolve(&op).unwrap(), 1e-8).unwrap();
    assert_eq!(report.clusters.len(), 3);
    assert_eq!(report.multiplicity_mismatches, 0);
    assert!(report.max_value_error < 1e-12);
}

#[test]
fn degenerate_scale_matches_oracle() {
    for m in 2..=4 {
        let mut betas = vec![0.3, -0.2, 0.45, 0.1];
        betas.truncate(m);
        betas[m - 1] = FRAC_PI_4;
        let sched = BetaSchedule::explicit(0.0, betas);
        let table = level_spectrum(&sched, m).unwrap();
        assert_eq!(table.multiplicity_near(1.0 - FRAC_1_SQRT_2, 1e-12), dirichlet_dimension(m - 1));
        let op = assemble_schedule(&build_level_graph(m), &sched, BoundaryMode::Dirichlet).unwrap();
        let report = compare(&table, &eigensolve(&op).unwrap(), 1e-8).unwrap();
        assert!(report.passes(1e-9), "{}", report.to_text());
    }
}

#[test]
fn random_schedules_match_oracle_up_to_scale_four() {
    let mut rng = common::rng(77);
    for m in 1..=4 {
        for _ in 0..10 {
            let sched = common::random_schedule(&mut rng, m);
            let table = level_spectrum(&sched, m).unwrap();
            let op = assemble_schedule(&build_level_graph(m), &sched, BoundaryMode::Dirichlet).unwrap();
            let report = compare(&table, &eigensolve(&op).unwrap(), 1e-8).unwrap();
            assert!(report.passes(1e-9), "m={m}\n{}", report.to_text());
        }
    }
}

#[test]
fn extension_residual_and_edge_decay() {
    let sched = uniform_schedule(0.5, 0.24, 8).unwrap();
    let mut g = build_level_graph(1);
    let mut f = VertexFunction::from_real(&[0.0, 0.0, 1.0, 0.0]);
    let mut z = 1.0;
    let mut diffs = Vec::new();
    for m in 2..=8 {
        g = build_level_graph(m);
        let a = realize_one_form(&sched, &g).unwrap();
        z = inverse_branches(z, sched.beta(m).unwrap()).unwrap().0;
        f = extend_with_form(&f, z, &a, &g).unwrap();
        assert!(eigen_residual(&g, &a, &f, z, BoundaryMode::Dirichlet) < 1e-9, "m={m}");
        diffs.push(max_edge_difference(&g, &a, &f));
    }
    assert_eq!(g.scale(), 8);
    assert!(z > 0.0);
    for w in diffs[1..].windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.4..=0.6).contains(&ratio), "{diffs:?}");
    }
}

#[test]
fn zero_field_renormalized_limits() {
    let sched = BetaSchedule::zero(24);
    let l = admissible_limit(&AdmissibleSequence::all_minus(1, 1.0), &sched, 24).unwrap();
    assert!((l.lambda - PI * PI / 2.0).abs() < 1e-9);
    // One plus step first: z_2 = 1 + 1/sqrt 2 = 1 - cos(3 pi / 4), limit 9 pi^2 / 2.
    let seq = AdmissibleSequence {
        start_scale: 1,
        start_value: 1.0,
        branches: vec![Branch::Plus],
    };
    let l = admissible_limit(&seq, &sched, 24).unwrap();
    assert!((l.lambda - 9.0 * PI * PI / 2.0).abs() < 1e-8);
}

#[test]
fn fractal_spectrum_zero_field() {
    let s = fractal_spectrum(&BetaSchedule::zero(12), 8, 12).unwrap();
    for (k, v) in s.values.iter().enumerate() {
        let exact = PI * PI * ((k + 1) * (k + 1)) as f64 / 2.0;
        assert!((v.lambda - exact).abs() / exact < 1e-4);
    }
    let partial = fractal_spectrum(&BetaSchedule::zero(2), 10, 2).unwrap();
    assert_eq!(partial.values.len(), 3);
    assert_eq!(partial.warnings.len(), 1);
}

proptest! {
    #[test]
    fn branches_invert_the_map(w in 0.0f64..=2.0, beta in -3.0f64..3.0) {
        let c = (2.0 * beta).cos();
        prop_assume!(c.abs() > 1e-6);
        let (lo, hi) = inverse_branches(w, beta).unwrap();
        prop_assert!(lo <= 1.0 && 1.0 <= hi);
        prop_assert!((decimation_map(lo, beta).unwrap() - w).abs() < 1e-12 / c.abs().min(1.0));
        prop_assert!((decimation_map(hi, beta).unwrap() - w).abs() < 1e-12 / c.abs().min(1.0));
    }

    #[test]
    fn multiplicities_are_conserved(
        betas in prop::collection::vec(-1.6f64..1.6, 1..=10),
    ) {
        let m = betas.len();
        let table = level_spectrum(&BetaSchedule::explicit(0.0, betas), m).unwrap();
        prop_assert_eq!(table.total_multiplicity(), dirichlet_dimension(m));
        prop_assert!(table.multiplicity_near(1.0, 1e-10) >= unit_multiplicity(m));
        let rows = table.rows();
        prop_assert!(rows.windows(2).all(|w| w[0].value < w[1].value));
        prop_assert!(rows.iter().all(|r| r.value >= -1e-15 && r.value <= 2.0 + 1e-15));
    }

    #[test]
    fn spectrum_is_even_in_each_beta(betas in prop::collection::vec(-1.0f64..1.0, 2..=8), flip in any::<u8>()) {
        let m = betas.len();
        let flipped: Vec<f64> = betas
            .iter()
            .enumerate()
            .map(|(i, &b)| if flip >> (i % 8) & 1 == 1 { -b } else { b })
            .collect();
        let a = level_spectrum(&BetaSchedule::explicit(0.0, betas), m).unwrap();
        let b = level_spectrum(&BetaSchedule::explicit(0.0, flipped), m).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn renormalized_increments_shrink(beta in 0.0f64..1.0, r in 0.05f64..=0.24, pick in any::<prop::sample::Index>()) {
        let sched = uniform_schedule(beta, r, 16).unwrap();
        let table = level_spectrum(&sched, 3).unwrap();
        let start = table.rows()[pick.index(table.rows().len())].value;
        let z = AdmissibleSequence::all_minus(3, start).iterates(&sched, 16).unwrap();
        let d: Vec<f64> = (0..z.len() - 1)
            .map(|i| (4f64.powi(i as i32 + 4) * z[i + 1] - 4f64.powi(i as i32 + 3) * z[i]).abs())
            .collect();
        for w in d[3..].windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }
}
