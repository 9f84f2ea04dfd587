mod common;

use dlf_core::gauge::EdgeOneForm;
use dlf_core::topology::LevelGraph;
use dlf_core::{
    build_level_graph, build_level_graph_with_order, discrete_flux, hilbert_norm_sq,
    realize_one_form, uniform_schedule, BetaSchedule, CellWord, ChildOrder,
};
use proptest::prelude::*;

/// Independent loop sum: walk `p -> t -> q -> b -> p` around the hole of `w`
/// using only the edge list, negating edges traversed backwards.
fn walked_loop(g: &LevelGraph, f: &EdgeOneForm, w: &CellWord) -> f64 {
    let (p, q) = (g.cell(w).unwrap().source, g.cell(w).unwrap().target);
    let (t, b) = g.interior_vertices(w).unwrap();
    let step = |x: usize, y: usize| -> f64 {
        g.edges()
            .filter(|e| e.index / 4 == w.index() && g.scale() == w.len() + 1)
            .find_map(|e| {
                if (e.source, e.target) == (x, y) {
                    Some(f.value(e.index))
                } else if (e.source, e.target) == (y, x) {
                    Some(-f.value(e.index))
                } else {
                    None
                }
            })
            .expect("diamond edge")
    };
    step(p, t) + step(t, q) + step(q, b) + step(b, p)
}

#[test]
fn zero_schedule_gives_zero_form() {
    let g = build_level_graph(4);
    let f = realize_one_form(&BetaSchedule::zero(4), &g).unwrap();
    assert!(f.values().iter().all(|&v| v == 0.0));
}

#[test]
fn scale_two_loops_walked() {
    let (b1, b2) = (0.41, -0.27);
    let g = build_level_graph(2);
    let f = realize_one_form(&BetaSchedule::explicit(0.3, vec![b1, b2]), &g).unwrap();
    for i in 0..4 {
        let w = CellWord::from_index(1, i);
        assert!((walked_loop(&g, &f, &w) - 4.0 * b2).abs() < 1e-15);
    }
}

#[test]
fn scale_three_flux_is_uniform() {
    let sched = BetaSchedule::explicit(0.0, vec![0.2, -0.5, 0.33]);
    let g = build_level_graph(3);
    let f = realize_one_form(&sched, &g).unwrap();
    for i in 0..16 {
        let w = CellWord::from_index(2, i);
        assert!((discrete_flux(&f, &w).unwrap() - 4.0 * 0.33).abs() < 1e-15);
        assert!((walked_loop(&g, &f, &w) - 4.0 * 0.33).abs() < 1e-15);
    }
}

#[test]
fn uniform_norm_matches_direct_sum() {
    let (beta, r) = (0.8, 0.24);
    let s = uniform_schedule(beta, r, 15).unwrap();
    let mut direct = 0.0;
    for n in 1..=15 {
        let b = beta * r.powi(n);
        direct += 4f64.powi(n) * b * b;
    }
    assert!((hilbert_norm_sq(&s) - direct).abs() < 1e-14);
}

proptest! {
    #[test]
    fn flux_is_uniform_per_scale(
        betas in prop::collection::vec(-3.0f64..3.0, 1..6),
        a0 in -2.0f64..2.0,
        order_idx in 0usize..24,
    ) {
        let m = betas.len();
        let g = build_level_graph_with_order(m, ChildOrder::all()[order_idx]);
        let f = realize_one_form(&BetaSchedule::explicit(a0, betas.clone()), &g).unwrap();
        for k in 0..m {
            for i in 0..4usize.pow(k as u32) {
                let flux = discrete_flux(&f, &CellWord::from_index(k, i)).unwrap();
                prop_assert!((flux - 4.0 * betas[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn a0_shift_is_exact(
        betas in prop::collection::vec(-1.0f64..1.0, 1..5),
        shift in -3.0f64..3.0,
    ) {
        let m = betas.len();
        let g = build_level_graph(m);
        let base = realize_one_form(&BetaSchedule::explicit(0.0, betas.clone()), &g).unwrap();
        let moved = realize_one_form(&BetaSchedule::explicit(shift, betas), &g).unwrap();
        // The difference is the gradient of the harmonic potential with
        // boundary values 0 and `shift`: constant `shift / 2^m` per edge.
        for (a, b) in base.values().iter().zip(moved.values()) {
            prop_assert!((b - a - shift / 2f64.powi(m as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_is_nondecreasing(betas in prop::collection::vec(-1.0f64..1.0, 1..10)) {
        let s = BetaSchedule::explicit(0.0, betas.clone());
        let mut last = 0.0;
        for m in 0..=betas.len() {
            let n = hilbert_norm_sq(&s.truncated(m).unwrap());
            prop_assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn schedule_text_round_trip(
        betas in prop::collection::vec(-10.0f64..10.0, 0..8),
        a0 in -5.0f64..5.0,
    ) {
        let s = BetaSchedule::explicit(a0, betas);
        prop_assert_eq!(BetaSchedule::parse(&s.to_text()).unwrap(), s);
    }
}
