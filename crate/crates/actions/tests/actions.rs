use magspec_actions::*;
use magspec_classical::{trace_orbit, DriftSystem, EdgeId, GraphKind, OrbitOptions, OrbitOutcome, ReebOptions};
use magspec_lattice::{cosine_example, FourierPotential, Lattice};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn sheared() -> FourierPotential {
    let lattice = Lattice::new(0.9, 4.0).unwrap();
    let half = [
        ((1, 0), Complex64::new(0.8, 0.1)),
        ((0, 1), Complex64::new(-0.35, 0.2)),
        ((1, 1), Complex64::new(0.06, -0.03)),
    ];
    FourierPotential::from_half(lattice, 0.1, &half).unwrap()
}

#[test]
fn contractible_action_vanishes_at_minimum() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let ctx = ActionContext::new(&p, 0.01, 0.7).unwrap();
    let gr = ctx.graph();
    let span = gr.g_max - gr.g_min;
    let a = ctx.action(EdgeId::I1, gr.g_min + 1e-8 * span).unwrap();
    assert!(a > 0.0 && a < 1e-6, "{a}");
    let b = ctx.action(EdgeId::I4, gr.g_max - 1e-8 * span).unwrap();
    assert!(b < 0.0 && b > -1e-6, "{b}");
}

#[test]
fn small_oscillation_harmonic_law() {
    for p in [cosine_example(2.0, 1.0, 1.3).unwrap(), sheared()] {
        let ctx = ActionContext::new(&p, 0.01, 0.4).unwrap();
        let gr = ctx.graph();
        let scale = ctx.averaged().coeff_l1();
        let ymin = gr.y_min.unwrap();
        let (_, _, hess) = ctx.averaged().jet(ymin);
        let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
        let dg = 1e-3 * scale;
        let a = ctx.action(EdgeId::I1, gr.g_min + dg).unwrap();
        let harmonic = dg / det.sqrt();
        assert!(((a - harmonic) / harmonic).abs() < 0.05, "{a} vs {harmonic}");
    }
}

#[test]
fn kirchhoff_laws_cosine_and_sheared() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    for i1 in [0.2, 0.9, 1.7, 3.5, 6.0] {
        let l = separatrix_limits(&p, 0.01, i1).unwrap();
        assert!(l.kirchhoff_first.abs() <= 1e-6 * l.cell_action, "{l:?}");
        assert!(l.kirchhoff_second.abs() <= 1e-6 * l.cell_action, "{l:?}");
        assert!((l.i1_plus + l.i4_minus).abs() < 1e-8);
        assert!(l.i2_plus - l.i2_minus < l.cell_action && l.i3_plus - l.i3_minus < l.cell_action);
    }
    let q = sheared();
    let ctx = ActionContext::new(&q, 0.01, 0.5).unwrap();
    assert_eq!(ctx.graph().kind, GraphKind::Generic);
    let l = ctx.separatrix_limits().unwrap();
    assert!((l.cell_action - 4.0).abs() < 1e-15);
    assert!(l.kirchhoff_first.abs() <= 1e-6 * l.cell_action, "{l:?}");
    assert!(l.kirchhoff_second.abs() <= 1e-6 * l.cell_action, "{l:?}");
}

#[test]
fn actions_are_bounded_by_cell_action() {
    let p = sheared();
    let ctx = ActionContext::new(&p, 0.01, 0.5).unwrap();
    for e in &ctx.graph().edges {
        let (lo, hi) = e.energy_range;
        for k in 1..8 {
            let g = lo + (hi - lo) * k as f64 / 8.0;
            let a = ctx.action(e.id, g).unwrap();
            if e.contractible {
                assert!(a.abs() <= ctx.cell_action());
                assert_eq!(a > 0.0, e.id == EdgeId::I1);
            }
        }
    }
}

#[test]
fn open_edge_action_shifts_by_cell_action_under_lattice_translation() {
    let p = sheared();
    let ctx = ActionContext::new(&p, 0.01, 0.5).unwrap();
    let gr = ctx.graph();
    let g = 0.5 * (gr.g_minus + gr.g_plus);
    let (orbit, i2) = ctx.orbit_on(EdgeId::I2, g).unwrap();
    let lattice = *ctx.lattice();
    let dvec = lattice.vector(orbit.winding);
    let sys = DriftSystem::from_averaged(ctx.averaged().clone(), 1.0);
    for l in [(1, 0), (0, 1), (2, -1)] {
        let shift = lattice.vector(l);
        let start = [orbit.start[0] + shift[0], orbit.start[1] + shift[1]];
        let shifted = match trace_orbit(&sys, start, &OrbitOptions::default()).unwrap() {
            OrbitOutcome::Closed(o) => o,
            other => panic!("{other:?}"),
        };
        assert_eq!(shifted.winding, orbit.winding);
        let j2 = (shifted.area - start[1] * dvec[0] - 0.5 * dvec[0] * dvec[1]) / (2.0 * PI);
        let cross = (shift[0] * dvec[1] - shift[1] * dvec[0]) / (2.0 * PI);
        let m = (cross / ctx.cell_action()).round();
        assert!((j2 - i2 - m * ctx.cell_action()).abs() < 1e-9, "{j2} {i2} {m}");
    }
}

#[test]
fn closed_form_values() {
    assert_eq!(closed_form_from_ratio(0.0, 1.0).unwrap(), 0.0);
    assert!(closed_form_from_ratio(1e-10, 1.0).unwrap() < 1e-4);
    // Series oracle: (8/(πβ))·χ₂(√Γ).
    for (gamma, beta) in [(0.5, 1.0), (0.2, 1.5), (0.85, 0.7)] {
        let expect = 8.0 / (PI * beta) * legendre_chi2(f64::sqrt(gamma)).unwrap();
        let got = closed_form_from_ratio(gamma, beta).unwrap();
        assert!((got - expect).abs() < 1e-12 * expect, "{got} {expect}");
    }
    assert!((closed_form_from_ratio(0.5, 1.0).unwrap() - 1.925_391_940_375).abs() < 1e-9);
    assert!((closed_form_from_ratio(1.0, 2.0).unwrap() - PI / 2.0).abs() < 1e-12);
    assert!(closed_form_from_ratio(1.2, 1.0).is_err());
}

#[test]
fn legendre_chi2_matches_log_integral() {
    // χ₂(k) = ½∫₀^k ξ⁻¹ log((1+ξ)/(1−ξ)) dξ, integrand → 2 at ξ = 0.
    let k: f64 = 0.6;
    let n = 20_000;
    let f = |x: f64| {
        if x == 0.0 {
            2.0
        } else {
            ((1.0 + x) / (1.0 - x)).ln() / x
        }
    };
    let h = k / n as f64;
    let simpson: f64 = (0..n)
        .map(|i| {
            let a = i as f64 * h;
            h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h))
        })
        .sum();
    assert!((0.5 * simpson - legendre_chi2(k).unwrap()).abs() < 1e-12);
}

#[test]
fn closed_form_matches_separatrix_limit() {
    let p = cosine_example(2.0, 1.0, 1.5).unwrap();
    for i1 in [0.25, 0.8, 1.4] {
        let ctx = ActionContext::new(&p, 0.01, i1).unwrap();
        if ctx.graph().kind != GraphKind::Generic {
            continue;
        }
        let cf = closed_form_i2_example(2.0, 1.0, 1.5, i1).unwrap();
        let l = ctx.separatrix_limits().unwrap();
        assert!(((l.i1_plus - cf) / cf).abs() < 1e-6, "{} vs {cf}", l.i1_plus);
    }
}

#[test]
fn degenerate_graphs_and_proximity_are_rejected() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let ctx = ActionContext::new(&p, 0.01, 0.7).unwrap();
    let gm = ctx.graph().g_minus;
    assert!(matches!(
        ctx.action(EdgeId::I2, gm + 1e-14),
        Err(ActionsError::SeparatrixProximity { .. })
    ));
    assert!(matches!(
        ctx.action(EdgeId::I1, ctx.graph().g_max - 1e-3),
        Err(ActionsError::Domain(_))
    ));
    let same = cosine_example(1.0, 1.0, 1.0).unwrap();
    let t1 = ActionContext::new(&same, 0.01, 0.7).unwrap();
    assert_eq!(t1.graph().kind, GraphKind::DegenerateTypeI);
    assert!(t1.separatrix_limits().is_err());
    assert!(t1.action(EdgeId::I2, 0.0).is_err());
}

#[test]
fn edge_tables_round_trip() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let eps = 0.02;
    let i1 = 0.9;
    let ctx = Arc::new(ActionContext::new(&p, eps, i1).unwrap());
    for id in [EdgeId::I1, EdgeId::I2, EdgeId::I4] {
        let table = EdgeActionTable::build(ctx.clone(), id).unwrap();
        let samples: Vec<_> = table.samples().collect();
        assert_eq!(samples.len(), TABLE_NODES + 2);
        assert!(samples.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1));
        let (lo, hi) = table.energy_range();
        for k in 1..6 {
            let g = lo + (hi - lo) * (k as f64 + 0.13) / 6.3;
            let i2 = ctx.action(id, g).unwrap();
            let e = energy_from_actions(&table, i1, i2).unwrap();
            assert!((e - ctx.energy(g)).abs() < 1e-8 * eps, "{id:?} {e} {}", ctx.energy(g));
        }
        assert!(energy_from_actions(&table, i1, table.action_range().1 + 1.0).is_err());
        assert!(energy_from_actions(&table, i1 + 0.1, table.action_range().0).is_err());
        assert!(table.interpolation_error().unwrap() < 1e-4 * (hi - lo));
        let csv = table.to_csv();
        assert!(csv.starts_with("g,I2\n") && csv.lines().count() == TABLE_NODES + 3);
    }
    let t1 = EdgeActionTable::build(ctx.clone(), EdgeId::I1).unwrap();
    let e0 = energy_from_actions(&t1, i1, 0.0).unwrap();
    assert!((e0 - (i1 + eps * ctx.graph().g_min)).abs() < 1e-15);
}

#[test]
fn zero_epsilon_energy_is_i1() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let ctx = Arc::new(ActionContext::new(&p, 0.0, 0.9).unwrap());
    let table = EdgeActionTable::build(ctx, EdgeId::I4).unwrap();
    let (a, b) = table.action_range();
    for k in 0..=4 {
        let i2 = a + (b - a) * k as f64 / 4.0;
        assert_eq!(energy_from_actions(&table, 0.9, i2).unwrap(), 0.9);
    }
}

#[test]
fn type_one_graph_has_contractible_tables() {
    let same = cosine_example(1.0, 1.0, 1.0).unwrap();
    let ctx = Arc::new(
        ActionContext::with_options(&same, 0.01, 0.4, &ReebOptions::default(), OrbitOptions::default()).unwrap(),
    );
    let table = EdgeActionTable::build(ctx.clone(), EdgeId::I1).unwrap();
    // Equal amplitudes: the separatrix disc is the square |u| + |w| ≤ π, area 2π².
    assert!((table.action_range().1 - PI).abs() < 1e-6, "{:?}", table.action_range());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn action_strictly_increases_along_edges(t0 in 0.05..0.45f64, t1 in 0.55..0.95f64, pick in 0usize..4) {
        let p = cosine_example(2.0, 1.0, 1.3).unwrap();
        let ctx = ActionContext::new(&p, 0.01, 0.6).unwrap();
        let e = &ctx.graph().edges[pick];
        let (lo, hi) = e.energy_range;
        let a0 = ctx.action(e.id, lo + t0 * (hi - lo)).unwrap();
        let a1 = ctx.action(e.id, lo + t1 * (hi - lo)).unwrap();
        prop_assert!(a1 > a0);
    }
}
