use magspec_bloch::*;
use magspec_classical::RegimeKind;
use magspec_lattice::{cosine_example, FluxRatio, Lattice};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FLUXES: [(i64, u64); 5] = [(1, 1), (1, 2), (2, 3), (3, 5), (5, 7)];

fn flux(n: i64, m: u64) -> FluxRatio {
    FluxRatio::new(n, m).unwrap()
}

fn sheared() -> Lattice {
    Lattice::new(0.8, 2.5).unwrap()
}

fn random_q(rng: &mut ChaCha8Rng, fl: FluxRatio) -> QuasiMomentum {
    let q1 = rng.gen::<f64>() / fl.m() as f64;
    QuasiMomentum::new(fl, q1, rng.gen::<f64>()).unwrap()
}

#[test]
fn boundary_families_satisfy_both_conditions() {
    let lat = sheared();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points = [[0.3, 0.2], [1.1, -0.4], [-0.7, 0.9]];
    for (n, m) in FLUXES {
        let fl = flux(n, m);
        for _ in 0..20 {
            let q = random_q(&mut rng, fl);
            let s = rng.gen_range(0..m);
            let r = verify_boundary_conditions(fl, &lat, q, s, 6, &points).unwrap();
            assert!(r.max() <= 1e-12, "{n}/{m} q={q:?} s={s}: {r:?}");
        }
    }
}

#[test]
fn pointwise_check_detects_a_wrong_quasimomentum() {
    // Families built for q but checked against q' must fail, so the check
    // is not vacuous.
    let lat = sheared();
    let fl = flux(2, 3);
    let q = QuasiMomentum::new(fl, 0.1, 0.3).unwrap();
    let fam = boundary_family(fl, &lat, q, 1, 4).unwrap();
    let other = QuasiMomentum::new(fl, 0.2, 0.3).unwrap();
    let c = fam.get(1, (0, 0));
    let c_next = fam.get(1, (1, 0));
    let eta = fl.value();
    let lam = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (other.q1() - eta));
    assert!((c_next - c * lam).norm() > 0.1);
}

#[test]
fn boundary_seed_blocks_are_independent() {
    let lat = sheared();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, m) in FLUXES {
        let fl = flux(n, m);
        let q = random_q(&mut rng, fl);
        let det = seed_gram_determinant(fl, &lat, q);
        assert_eq!(det, Complex64::new(1.0, 0.0), "{n}/{m}");
        assert_eq!(family_gram_offdiagonal(fl, &lat, q, 3).unwrap(), 0.0);
    }
}

#[test]
fn coefficient_rows_export_nonzero_entries() {
    let lat = sheared();
    let fl = flux(3, 5);
    let q = QuasiMomentum::new(fl, 0.05, 0.5).unwrap();
    let fam = boundary_family(fl, &lat, q, 2, 4).unwrap();
    let rows = fam.rows();
    // One nonzero per (j, l₁, l₂) with l₂ + j − s ≡ 0 mod 5: 9 l₁ values × 9 l₂ values.
    assert_eq!(rows.len(), 81);
    assert!(rows.iter().all(|r| (r.l2 + r.j as i64 - 2).rem_euclid(5) == 0));
    assert!(rows
        .iter()
        .all(|r| ((r.re * r.re + r.im * r.im).sqrt() - 1.0).abs() < 1e-15));
}

#[test]
fn interior_closed_form_satisfies_recurrences() {
    let lat = sheared();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, m) in FLUXES {
        let fl = flux(n, m);
        for sign in [Sign::Plus, Sign::Minus] {
            for _ in 0..10 {
                let q = random_q(&mut rng, fl);
                let nq = rng.gen_range(-3..4);
                let fam = interior_bloch_coeffs(fl, &lat, q, sign, nq, 12).unwrap();
                assert_eq!(fam.get(fam.s, 0), Complex64::new(1.0, 0.0));
                let r = verify_interior_recurrences(&fam, &lat);
                assert!(r <= 1e-12, "{n}/{m} {sign:?} n={nq}: {r}");
            }
        }
    }
}

#[test]
fn interior_closed_form_fails_off_quantization() {
    let lat = sheared();
    let fl = flux(3, 5);
    let q = QuasiMomentum::new(fl, 0.07, 0.4).unwrap();
    let mut fam = interior_bloch_coeffs(fl, &lat, q, Sign::Plus, 2, 8).unwrap();
    fam.i2 += 0.01;
    assert!(verify_interior_recurrences(&fam, &lat) > 1e-3);
}

#[test]
fn general_solver_recovers_closed_form() {
    let lat = sheared();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, m) in FLUXES {
        let fl = flux(n, m);
        for sign in [Sign::Plus, Sign::Minus] {
            let q = random_q(&mut rng, fl);
            let nq = rng.gen_range(0..m as i64);
            let window = (m as i64).max(4) + 2;
            let fam = interior_bloch_coeffs(fl, &lat, q, sign, nq, window).unwrap();
            let d = sign.drift();
            let sol = interior_general_d_solve(fl, &lat, q, d, d, fam.i2, window).unwrap();
            assert_eq!(sol.dimension, 1, "{n}/{m} {sign:?}: {:?}", sol.smallest_singular);
            let v = &sol.null_vectors[0];
            let scale = v[&(fam.s, 0)];
            let worst = fam
                .coeffs
                .iter()
                .map(|(k, c)| (v[k] / scale - c).norm())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-10, "{n}/{m} {sign:?}: {worst}");
        }
    }
}

#[test]
fn general_scan_finds_the_interior_quantization() {
    let lat = sheared();
    for (n, m) in [(1, 2), (2, 3), (3, 5)] {
        let fl = flux(n, m);
        let q = QuasiMomentum::new(fl, 0.3 / m as f64, 0.25).unwrap();
        let h = lat.a22() / fl.value();
        let found = general_quantized_i2(fl, &lat, q, (1, 0), (1, 0), m as i64 + 1, 40 * m as usize).unwrap();
        let mut expected: Vec<f64> = (0..m as i64)
            .map(|k| interior_i2(fl, &lat, q.q1(), Sign::Plus, k).rem_euclid(h))
            .collect();
        expected.sort_by(f64::total_cmp);
        assert_eq!(found.len(), m as usize, "{n}/{m}: {found:?} vs {expected:?}");
        for (a, b) in found.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-6 * h, "{n}/{m}: {found:?} vs {expected:?}");
        }
    }
}

#[test]
fn drift_along_a2_has_dense_coefficients() {
    let lat = sheared();
    for (n, m) in [(1, 1), (1, 2), (2, 3)] {
        let fl = flux(n, m);
        let q = QuasiMomentum::new(fl, 0.1 / m as f64, 0.6).unwrap();
        let window = m as i64 + 2;
        let levels = general_quantized_i2(fl, &lat, q, (0, 1), (0, 1), window, 60 * m as usize).unwrap();
        assert_eq!(levels.len(), m as usize, "{n}/{m}: {levels:?}");
        for i2 in levels {
            let sol = interior_general_d_solve(fl, &lat, q, (0, 1), (0, 1), i2, window).unwrap();
            assert_eq!(sol.dimension, 1);
            assert!(sol.residual < 1e-8);
            let v = &sol.null_vectors[0];
            let max = v.values().map(|c| c.norm()).fold(0.0, f64::max);
            assert!(v.values().all(|c| c.norm() > 1e-6 * max), "{n}/{m}: sparse null vector");
        }
    }
}

#[test]
fn general_solver_validates_inputs() {
    let lat = sheared();
    let fl = flux(2, 3);
    let q = QuasiMomentum::new(fl, 0.0, 0.0).unwrap();
    assert!(interior_general_d_solve(fl, &lat, q, (1, 1), (1, 1), 0.0, 5).is_err());
    assert!(interior_general_d_solve(fl, &lat, q, (1, 0), (1, 0), 0.0, 2).is_err());
    assert!(QuasiMomentum::new(fl, 0.34, 0.0).is_err());
    assert!(QuasiMomentum::new(fl, 0.1, 1.0).is_err());
}

#[test]
fn degeneracy_counts_match_family_structure() {
    for (n, m) in FLUXES {
        let fl = flux(n, m);
        assert_eq!(degeneracy_counts(fl, RegimeKind::Boundary), m * m);
        assert_eq!(degeneracy_counts(fl, RegimeKind::Interior), 2 * m);
    }
}

#[test]
fn crossings_sit_at_half_integer_actions() {
    // B > A makes the y₂ term dominate, so open orbits drift along (1, 0).
    let p = cosine_example(1.0, 2.0, 1.0).unwrap();
    let fl = flux(5, 2);
    let h = p.lattice().a22() / fl.value();
    let i1 = 0.5 * h;
    let rep = dispersion_crossings(&p, 0.1, i1, fl).unwrap();
    assert!(!rep.degenerate);
    assert!(rep.crossings.iter().any(|c| !c.at_band_end), "{rep:?}");
    for c in &rep.crossings {
        let x = 2.0 * fl.m() as f64 * c.i2_plus / h;
        assert!((x - x.round()).abs() < 1e-7, "{c:?}");
        let odd = (x.round() as i64).rem_euclid(2) == 1;
        assert_eq!(odd, !c.at_band_end, "{c:?}");
        if !c.at_band_end {
            assert!((c.q1 - 0.5 / fl.m() as f64).abs() < 1e-7, "{c:?}");
        }
    }
    assert!(rep
        .to_csv()
        .starts_with("n_plus,n_minus,q1,I2_plus,I2_minus,E,at_band_end\n"));
}

#[test]
fn crossings_degenerate_without_potential() {
    let p = cosine_example(1.0, 2.0, 1.0).unwrap();
    let rep = dispersion_crossings(&p, 0.0, 1.0, flux(5, 2)).unwrap();
    assert!(rep.degenerate && rep.crossings.is_empty());
}

#[test]
fn crossings_reject_other_drifts() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let err = dispersion_crossings(&p, 0.1, 0.6, flux(5, 2)).unwrap_err();
    assert!(matches!(err, BlochError::UnsupportedDrift { d: (0, 1) }), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundary_recurrences_hold(q1 in 0.0f64..0.2, q2 in 0.0f64..1.0, s in 0u64..5, a21 in -1.0f64..1.0) {
        let fl = flux(3, 5);
        let lat = Lattice::new(a21, 1.7).unwrap();
        let q = QuasiMomentum::new(fl, q1, q2).unwrap();
        let r = verify_boundary_conditions(fl, &lat, q, s, 5, &[]).unwrap();
        prop_assert!(r.max() <= 1e-12);
    }

    #[test]
    fn translation_algebra_is_a_projective_representation(
        m1 in -3i64..4, m2 in -3i64..4, p1 in -3i64..4, p2 in -3i64..4, k in -5i64..6, i2 in 0.0f64..3.0
    ) {
        // S_m S_p = e^{(i/h)(m·a)₁(p·a)₂} S_{m+p} on every ψ̃_k.
        let lat = sheared();
        let fl = flux(2, 3);
        let alg = CylinderAlgebra::new(lat, fl, (1, 1), (0, 1), i2).unwrap();
        let (k1, ph1) = alg.translate((p1, p2), k);
        let (k2, ph2) = alg.translate((m1, m2), k1);
        let (k3, ph3) = alg.translate((m1 + p1, m2 + p2), k);
        prop_assert_eq!(k2, k3);
        let cocycle = Complex64::from_polar(1.0, lat.vector((m1, m2))[0] * lat.vector((p1, p2))[1] / alg.h());
        prop_assert!((ph2 * ph1 - cocycle * ph3).norm() < 1e-9);
    }
}
