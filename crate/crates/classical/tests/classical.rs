use magspec_classical::*;
use magspec_lattice::{cosine_example, FourierPotential, Lattice};
use magspec_numerics::{bessel_j0, bessel_j0_zero};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

fn cos_amplitudes(a: f64, b: f64, beta: f64, i1: f64) -> (f64, f64) {
    let r = (2.0 * i1).sqrt();
    (a * bessel_j0(r).unwrap(), b * bessel_j0(beta * r).unwrap())
}

fn near_mod(x: f64, target: f64, period: f64) -> bool {
    let d = (x - target).rem_euclid(period);
    d.min(period - d) < 1e-8
}

#[test]
fn cosine_critical_points_at_zero_action() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let set = find_critical_points(&p.averaged(0.0).unwrap());
    assert_eq!(set.points.len(), 4);
    assert!(!set.degenerate && !set.incomplete);
    assert_eq!(set.euler_characteristic(), 0);
    let expect = [
        (CriticalKind::Minimum, [PI, PI], -3.0),
        (CriticalKind::Saddle, [0.0, PI], 1.0),
        (CriticalKind::Saddle, [PI, 0.0], -1.0),
        (CriticalKind::Maximum, [0.0, 0.0], 3.0),
    ];
    for (kind, y, g) in expect {
        let hit = set
            .points
            .iter()
            .find(|q| q.kind == kind && (q.value - g).abs() < 1e-12);
        let q = hit.unwrap_or_else(|| panic!("missing {kind:?} at {g}"));
        assert!(near_mod(q.y[0], y[0], TAU) && near_mod(q.y[1], y[1], TAU), "{:?}", q.y);
    }
}

#[test]
fn critical_points_have_small_gradient() {
    let p = cosine_example(2.0, 1.0, 1.3).unwrap();
    for i1 in [0.3, 1.7, 4.2, 9.0] {
        let av = p.averaged(i1).unwrap();
        let set = find_critical_points(&av);
        for q in &set.points {
            let g = av.grad(q.y);
            assert!(g[0].hypot(g[1]) <= 1e-10, "gradient {g:?} at I1 = {i1}");
        }
    }
}

#[test]
fn degenerate_flag_at_bessel_zero() {
    let j = bessel_j0_zero(1).unwrap();
    let p = cosine_example(2.0, 1.0, 1.5).unwrap();
    let set = find_critical_points(&p.averaged(0.5 * j * j).unwrap());
    assert!(set.degenerate);
}

#[test]
fn drift_field_vanishes_at_critical_points_and_is_vertical_for_b_zero() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    assert!(drift_field(&p, 0.1, 0.0, [PI, PI])
        .unwrap()
        .iter()
        .all(|v| v.abs() < 1e-10));
    let q = cosine_example(1.5, 0.0, 1.0).unwrap();
    let i1 = 0.8;
    let y = [0.7, -2.1];
    let f = drift_field(&q, 0.02, i1, y).unwrap();
    let expect = -0.02 * 1.5 * bessel_j0((2.0 * i1).sqrt()).unwrap() * y[0].sin();
    assert_eq!(f[0], 0.0);
    assert!((f[1] - expect).abs() < 1e-15);
}

fn random_potential() -> FourierPotential {
    let lattice = Lattice::new(0.4, 5.0).unwrap();
    let half = [
        ((1, 0), Complex64::new(0.6, 0.1)),
        ((0, 1), Complex64::new(-0.3, 0.2)),
        ((1, 1), Complex64::new(0.1, -0.05)),
        ((2, -1), Complex64::new(0.05, 0.02)),
    ];
    FourierPotential::from_half(lattice, 0.2, &half).unwrap()
}

proptest! {
    #[test]
    fn drift_field_matches_finite_differences(y0 in -10.0..10.0f64, y1 in -10.0..10.0f64, i1 in 0.0..6.0f64) {
        let p = random_potential();
        let eps = 0.3;
        let f = drift_field(&p, eps, i1, [y0, y1]).unwrap();
        let av = p.averaged(i1).unwrap();
        let h = 1e-5;
        let d0 = (av.value([y0 + h, y1]) - av.value([y0 - h, y1])) / (2.0 * h);
        let d1 = (av.value([y0, y1 + h]) - av.value([y0, y1 - h])) / (2.0 * h);
        prop_assert!((f[0] + eps * d1).abs() < 1e-6);
        prop_assert!((f[1] - eps * d0).abs() < 1e-6);
    }

    #[test]
    fn conjugate_vector_solves_bezout(d1 in -50i64..50, d2 in -50i64..50) {
        prop_assume!((d1, d2) != (0, 0));
        let g = gcd(d1.abs(), d2.abs());
        let d = (d1 / g, d2 / g);
        let f = conjugate_vector(d).unwrap();
        prop_assert_eq!(d.0 * f.0 + d.1 * f.1, 1);
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn level_sets_have_expected_topology() {
    // a > b at I1 = 0.3 (β = 1).
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let i1 = 0.3;
    let av = p.averaged(i1).unwrap();
    let (a, b) = cos_amplitudes(2.0, 1.0, 1.0, i1);
    let (g_min, g_minus, g_max) = (-a - b, -(a - b), a + b);
    let opts = LevelSetOptions {
        saddle_values: Some(vec![g_minus, -g_minus]),
        ..Default::default()
    };
    let low = trace_level_set(&av, g_min + 0.02 * (g_max - g_min), &opts).unwrap();
    assert_eq!(low.len(), 1);
    assert_eq!(low[0].winding, (0, 0));
    let high = trace_level_set(&av, g_max - 0.02 * (g_max - g_min), &opts).unwrap();
    assert_eq!(high.len(), 1);
    assert_eq!(high[0].winding, (0, 0));
    let mid = trace_level_set(&av, 0.1 * g_minus, &opts).unwrap();
    assert_eq!(mid.len(), 2);
    let mut w: Vec<_> = mid.iter().map(|c| c.winding).collect();
    w.sort();
    assert_eq!(w, vec![(0, -1), (0, 1)]);
    for c in low.iter().chain(&mid) {
        let first = c.polyline[0];
        let last = *c.polyline.last().unwrap();
        let shift = p.lattice().vector(c.winding);
        assert!((last[0] - first[0] - shift[0]).abs() < 1e-8 && (last[1] - first[1] - shift[1]).abs() < 1e-8);
        for y in &c.polyline {
            assert!((av.value(*y) - c.g).abs() < 1e-10);
        }
    }
}

#[test]
fn level_set_near_saddle_is_rejected() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let av = p.averaged(0.3).unwrap();
    let (a, b) = cos_amplitudes(2.0, 1.0, 1.0, 0.3);
    let g_minus = -(a - b);
    let opts = LevelSetOptions {
        saddle_values: Some(vec![g_minus, -g_minus]),
        ..Default::default()
    };
    let err = trace_level_set(&av, g_minus + 1e-6, &opts).unwrap_err();
    assert!(matches!(err, ClassicalError::SeparatrixProximity { .. }));
}

#[test]
fn trajectory_classification() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let eps = 0.01;
    let i1 = 0.3;
    let opts = OrbitOptions::default();
    assert_eq!(
        classify_trajectory(&p, eps, i1, [PI, PI], &opts).unwrap(),
        Classification::FixedPoint
    );
    // i1 level: near the minimum.
    match classify_trajectory(&p, eps, i1, [PI + 0.5, PI], &opts).unwrap() {
        Classification::Closed { winding, period } => {
            assert_eq!(winding, (0, 0));
            assert!(period > 0.0);
        }
        other => panic!("{other:?}"),
    }
    // v̄ = 0 at (π/2, π/2), strictly between the saddle values when a > b.
    let (a, b) = cos_amplitudes(2.0, 1.0, 1.0, i1);
    assert!(a > b);
    match classify_trajectory(&p, eps, i1, [PI / 2.0, PI / 2.0], &opts).unwrap() {
        Classification::Closed { winding, period } => {
            assert!(winding == (0, 1) || winding == (0, -1), "{winding:?}");
            assert!(period > 0.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn drift_conserves_averaged_hamiltonian() {
    let p = random_potential();
    let sys = DriftSystem::new(&p, 0.05, 1.2).unwrap();
    let av = sys.averaged();
    let set = find_critical_points(av);
    let ymin = set.of_kind(CriticalKind::Minimum).next().unwrap().y;
    for k in 1..=4 {
        let y0 = [ymin[0] + 0.15 * k as f64, ymin[1]];
        if let OrbitOutcome::Closed(o) = trace_orbit(&sys, y0, &OrbitOptions::default()).unwrap() {
            let h0 = sys.hamiltonian(y0);
            for s in &o.samples {
                assert!((sys.hamiltonian(s.y) - h0).abs() <= 1e-8 * h0.abs());
            }
        } else {
            panic!("orbit {k} did not close");
        }
    }
}

#[test]
fn reeb_graph_kinds() {
    let p = cosine_example(2.0, 1.0, 1.5).unwrap();
    let opts = ReebOptions::default();
    let g = build_reeb_graph(&p.averaged(0.3).unwrap(), &opts).unwrap();
    assert_eq!(g.kind, GraphKind::Generic);
    assert_eq!(g.edges.len(), 4);
    assert!(g.g_min < g.g_minus && g.g_minus < g.g_plus && g.g_plus < g.g_max);
    for e in &g.edges {
        assert_eq!(e.contractible, e.drift.is_zero());
        if let Some(f) = e.drift.f {
            assert_eq!(e.drift.d.0 * f.0 + e.drift.d.1 * f.1, 1);
        }
    }
    assert_eq!(g.edge(EdgeId::I3).unwrap().drift.d, {
        let d = g.drift().unwrap().d;
        (-d.0, -d.1)
    });

    let j = bessel_j0_zero(1).unwrap();
    let t2 = build_reeb_graph(&p.averaged(0.5 * j * j).unwrap(), &opts).unwrap();
    assert_eq!(t2.kind, GraphKind::DegenerateTypeII);
    let ids: Vec<_> = t2.edges.iter().map(|e| e.id).collect();
    assert_eq!(ids, vec![EdgeId::I2, EdgeId::I3]);
    // a = 0: horizontal critical lines.
    assert_eq!(t2.drift().unwrap().d, (1, 0));

    let series = critical_i1_series(&p, 4.0).unwrap();
    let i_star = series.type_one[0];
    let t1 = build_reeb_graph(&p.averaged(i_star).unwrap(), &opts).unwrap();
    assert_eq!(t1.kind, GraphKind::DegenerateTypeI);
    let ids: Vec<_> = t1.edges.iter().map(|e| e.id).collect();
    assert_eq!(ids, vec![EdgeId::I1, EdgeId::I4]);
}

#[test]
fn drift_flips_across_type_one_values() {
    let p = cosine_example(2.0, 1.0, 1.5).unwrap();
    let series = critical_i1_series(&p, 6.0).unwrap();
    assert!(!series.type_one.is_empty());
    let opts = ReebOptions::default();
    for &c in &series.type_one {
        let before = build_reeb_graph(&p.averaged(c - 0.02).unwrap(), &opts)
            .unwrap()
            .drift()
            .unwrap()
            .d;
        let after = build_reeb_graph(&p.averaged(c + 0.02).unwrap(), &opts)
            .unwrap()
            .drift()
            .unwrap()
            .d;
        let mut pair = [before, after];
        pair.sort();
        assert_eq!(pair, [(0, 1), (1, 0)], "at I1 = {c}");
    }
}

#[test]
fn unsupported_topology_names_extra_points() {
    let lattice = Lattice::rectangular(TAU).unwrap();
    let p = FourierPotential::from_half(
        lattice,
        0.0,
        &[((2, 0), Complex64::new(1.0, 0.0)), ((0, 1), Complex64::new(0.4, 0.0))],
    )
    .unwrap();
    match build_reeb_graph(&p.averaged(0.0).unwrap(), &ReebOptions::default()) {
        Err(ClassicalError::UnsupportedTopology { extra, .. }) => assert_eq!(extra.len(), 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn critical_series_cases() {
    let same = cosine_example(1.0, 1.0, 1.0).unwrap();
    assert!(critical_i1_series(&same, 10.0).unwrap().continuum);

    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let s = critical_i1_series(&p, 60.0).unwrap();
    let zeros: Vec<f64> = (1..=20)
        .map(|k| bessel_j0_zero(k).unwrap())
        .map(|j| 0.5 * j * j)
        .take_while(|&v| v <= 60.0)
        .collect();
    assert_eq!(s.type_two.len(), zeros.len());
    for (x, z) in s.type_two.iter().zip(&zeros) {
        assert!((x - z).abs() < 1e-10);
    }
    assert_eq!(s.type_one.len(), zeros.len());
    assert_eq!(s.merged.len(), zeros.len());
    assert!(!s.continuum);

    let q = cosine_example(2.0, 1.0, 1.5).unwrap();
    let s = critical_i1_series(&q, 10.0).unwrap();
    for &c in &s.type_one {
        let (a, b) = cos_amplitudes(2.0, 1.0, 1.5, c);
        assert!((a.abs() - b.abs()).abs() < 1e-12);
    }
}

#[test]
fn regimes_partition_and_drift_invariants() {
    let p = cosine_example(2.0, 1.0, 1.5).unwrap();
    let map = build_regimes(&p, 0.0, 6.0, 0.01, 41).unwrap();
    let crit = map.series.all();
    for r in &map.regimes {
        match r.kind {
            RegimeKind::Boundary => assert!(r.drift.is_zero()),
            RegimeKind::Interior => assert!(!r.drift.is_zero()),
        }
        for end in [r.i1_bounds.0, r.i1_bounds.1] {
            assert!(end == 0.0 || end == 6.0 || crit.iter().any(|c| (c - end).abs() < 1e-12));
        }
        assert!(r.i1_interval.0 >= r.i1_bounds.0 && r.i1_interval.1 <= r.i1_bounds.1);
    }
    // eps = 0 collapses all curves to E = I1.
    for s in &map.curves {
        assert_eq!((s.e_min, s.e_minus, s.e_plus, s.e_max), (s.i1, s.i1, s.i1, s.i1));
    }
    let eps_map = build_regimes(&p, 0.1, 6.0, 0.01, 11).unwrap();
    for s in &eps_map.curves {
        assert!(s.e_min <= s.e_minus && s.e_minus <= s.e_plus && s.e_plus <= s.e_max);
    }
}

#[test]
fn lifted_hamiltonian_stays_close() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let eps = 0.01;
    let osc = lifted_hamiltonian_oscillation(&p, eps, 0.3, [PI + 0.5, PI], 0.3, &OrbitOptions::default()).unwrap();
    assert!(osc <= 2.0 * eps * p.coeff_l1(), "{osc}");
}
