use magspec_harper::*;
use magspec_lattice::{cosine_example, FluxRatio, FourierPotential, Lattice};
use magspec_numerics::{bessel_j0, bessel_j0_zero, hermitian_eigenvalues, Complex64, HermitianMatrix};
use proptest::prelude::*;
use std::f64::consts::PI;

fn flux(n: i64, m: u64) -> FluxRatio {
    FluxRatio::new(n, m).unwrap()
}

/// Model with βh/(2π) = M/N at β = 1.
fn model(hop: f64, pot: f64, f: FluxRatio) -> HarperModel {
    HarperModel::new(hop, pot, 1.0, 2.0 * PI / f.value(), 0.3, 0.01).unwrap()
}

fn sorted_eigs(m: &HermitianMatrix) -> Vec<f64> {
    hermitian_eigenvalues(m)
}

#[test]
fn single_site_matrix() {
    let m = model(0.7, 0.4, flux(1, 1));
    for (t, p) in [(0.3, 1.1), (2.0, -0.5)] {
        let a = bloch_matrix(&m, flux(1, 1), t, p).unwrap();
        assert!((a.get(0, 0).re - (0.7 * f64::cos(t) + 0.4 * f64::cos(p))).abs() < 1e-15);
    }
}

#[test]
fn free_hopping_is_circulant() {
    let f = flux(5, 3);
    let m = model(1.3, 0.0, f);
    let th = 0.17;
    let got = sorted_eigs(&bloch_matrix(&m, f, th, 0.4).unwrap());
    let mut want: Vec<f64> = (0..5).map(|k| 1.3 * (th + 2.0 * PI * k as f64 / 5.0).cos()).collect();
    want.sort_by(f64::total_cmp);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-13, "{got:?} vs {want:?}");
    }
}

#[test]
fn trace_is_the_potential_sum() {
    let f = flux(7, 3);
    let m = model(0.9, 0.6, f);
    let phi0 = 0.37;
    let a = bloch_matrix(&m, f, 0.2, phi0).unwrap();
    let want: f64 = (0..7)
        .map(|j| 0.6 * (phi0 + 2.0 * PI * 3.0 * j as f64 / 7.0).cos())
        .sum();
    assert!((a.trace() - want).abs() < 1e-14);
}

#[test]
fn incommensurate_models_are_rejected() {
    let m = HarperModel::new(1.0, 1.0, 1.0, 1.0, 0.5, 0.01).unwrap();
    assert!(matches!(
        bloch_matrix(&m, flux(5, 2), 0.0, 0.0),
        Err(HarperError::Incommensurate { .. })
    ));
}

#[test]
fn landau_reduction_coefficients() {
    let p = cosine_example(2.0, 1.0, 1.5).unwrap();
    let h = 0.3;
    let m = harper_from_landau(&p, 2, h, 0.05).unwrap();
    let r = (2.0 * 2.5 * h).sqrt();
    assert!((m.hop - 2.0 * bessel_j0(r).unwrap()).abs() < 1e-15);
    assert!((m.pot - bessel_j0(1.5 * r).unwrap()).abs() < 1e-15);
    let e = 0.123;
    assert!((m.energy(m.lambda(e)) - e).abs() < 1e-15);
    let tiny = harper_from_landau(&p, 0, 1e-12, 0.05).unwrap();
    assert!((tiny.hop - 2.0).abs() < 1e-11 && (tiny.pot - 1.0).abs() < 1e-11);
}

#[test]
fn bessel_root_gives_pure_multiplication() {
    let j = bessel_j0_zero(1).unwrap();
    let h = j * j; // μ = 0: I₁ = h/2 = j²/2
    let p = cosine_example(1.0, 0.8, 1.0).unwrap();
    let m = harper_from_landau(&p, 0, h, 0.05).unwrap();
    assert!(m.hop.abs() < 1e-12);
    let m = HarperModel {
        hop: 0.0,
        beta: 1.0,
        h_step: 2.0 * PI / 3.0,
        ..m
    };
    let t = band_table(&m, flux(3, 1), (33, 33)).unwrap();
    assert_eq!(t.band_count(), 1);
    let b = m.pot.abs();
    assert!(
        (t.bands[0].lo + b).abs() < 1e-9 && (t.bands[0].hi - b).abs() < 1e-9,
        "{:?}",
        t.bands
    );
}

#[test]
fn free_hopping_band_merges() {
    let f = flux(4, 1);
    let t = band_table(&model(1.5, 0.0, f), f, (33, 9)).unwrap();
    assert_eq!(t.band_count(), 1);
    assert!((t.bands[0].lo + 1.5).abs() < 1e-12 && (t.bands[0].hi - 1.5).abs() < 1e-12);
}

#[test]
fn third_flux_has_three_symmetric_bands() {
    let f = flux(3, 1);
    let t = band_table(&model(1.0, 1.0, f), f, DEFAULT_GRID).unwrap();
    assert_eq!(t.band_count(), 3);
    for (b, mirror) in t.bands.iter().zip(t.bands.iter().rev()) {
        assert!(
            (b.lo + mirror.hi).abs() < 1e-9 && (b.hi + mirror.lo).abs() < 1e-9,
            "{:?}",
            t.bands
        );
    }
    assert!(t.measure() <= 4.0);
    assert!(t.max_jump <= 2.0 * PI * 2.0 / 64.0);
}

#[test]
fn general_symbol_reproduces_cosine_matrix() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let f = flux(7, 3);
    let h = 2.0 * PI / f.value();
    let m = harper_from_landau(&p, 1, h, 0.01).unwrap();
    for (t, ph) in [(0.0, 0.0), (0.2, 0.7), (0.8, 2.9)] {
        let a = bloch_matrix(&m, f, t, ph).unwrap();
        let b = general_symbol_matrix(&p, 1, h, f, t, ph).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert!((a.get(i, j) - b.get(i, j)).norm() < 1e-14, "({i},{j})");
            }
        }
    }
}

fn mixed_potential() -> FourierPotential {
    let lat = Lattice::rectangular(3.0).unwrap();
    let half = [
        ((1, 0), Complex64::new(0.5, 0.2)),
        ((1, 1), Complex64::new(0.3, -0.1)),
        ((2, -1), Complex64::new(0.1, 0.05)),
        ((0, 1), Complex64::new(0.4, 0.0)),
    ];
    FourierPotential::from_half(lat, 0.2, &half).unwrap()
}

#[test]
fn y2_modes_only_give_diagonal_matrix() {
    let lat = Lattice::rectangular(2.0).unwrap();
    let p = FourierPotential::from_half(
        lat,
        0.0,
        &[((0, 1), Complex64::new(0.5, 0.1)), ((0, 2), Complex64::new(0.2, 0.0))],
    )
    .unwrap();
    let f = flux(5, 2);
    let a = general_symbol_matrix(&p, 0, 2.0 / f.value(), f, 0.3, 0.4).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            if i != j {
                assert_eq!(a.get(i, j), Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn general_symbol_matches_long_chain_oracle() {
    // Literal Weyl action on a K·N-site ring: w(y) ↦ Σ v̄_k e^{ib₂(y + k₁h/2)} w(y + k₁h).
    let p = mixed_potential();
    let f = flux(3, 2);
    let h = p.lattice().a22() / f.value();
    let mu = 1;
    let av = p.averaged((mu as f64 + 0.5) * h).unwrap();
    let (n, k) = (3usize, 5usize);
    let len = n * k;
    let y0 = 0.41;
    let mut big = vec![Complex64::new(0.0, 0.0); len * len];
    for mode in av.modes() {
        for s in 0..len {
            let y = y0 + s as f64 * h;
            let t = (s as i64 + mode.k.0 as i64).rem_euclid(len as i64) as usize;
            big[s * len + t] += mode.c * Complex64::from_polar(1.0, mode.b[1] * (y + 0.5 * mode.k.0 as f64 * h));
        }
    }
    let herm = HermitianMatrix::new(len, big.clone());
    assert!(herm.is_ok(), "Weyl quantization of a real symbol is Hermitian");
    let oracle = hermitian_eigenvalues(&herm.unwrap());
    let phi0 = 2.0 * PI * y0 / p.lattice().a22();
    let mut union: Vec<f64> = (0..k)
        .flat_map(|r| {
            let th = 2.0 * PI * r as f64 / len as f64;
            let m = general_symbol_matrix(&p, mu, h, f, th, phi0).unwrap();
            assert!(m.hermiticity_residual() <= 1e-14);
            hermitian_eigenvalues(&m)
        })
        .collect();
    union.sort_by(f64::total_cmp);
    for (a, b) in oracle.iter().zip(&union) {
        assert!((a - b).abs() < 1e-12, "{oracle:?} vs {union:?}");
    }
}

#[test]
fn general_symbol_rejects_sheared_lattice() {
    let lat = Lattice::new(0.5, 2.0).unwrap();
    let p = FourierPotential::from_half(lat, 0.0, &[((1, 0), Complex64::new(0.5, 0.0))]).unwrap();
    assert!(general_symbol_matrix(&p, 0, 1.0, flux(2, 1), 0.0, 0.0).is_err());
}

#[test]
fn general_band_table_matches_cosine_table() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    let f = flux(5, 2);
    let h = 2.0 * PI / f.value();
    let a = band_table(&harper_from_landau(&p, 0, h, 0.01).unwrap(), f, (17, 17)).unwrap();
    let b = general_band_table(&p, 0, h, 0.01, f, (17, 17)).unwrap();
    for (x, y) in a.slots.iter().zip(&b.slots) {
        assert!((x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12);
    }
}

#[test]
fn band_count_equals_flux_numerator() {
    let p = cosine_example(2.0, 1.0, 1.0).unwrap();
    for (n, m) in [(5, 2), (7, 3)] {
        let f = flux(n, m);
        let model = harper_from_landau(&p, 0, 2.0 * PI / f.value(), 0.01).unwrap();
        let t = band_table(&model, f, DEFAULT_GRID).unwrap();
        assert_eq!(t.band_count(), n as usize, "{:?}", t.bands);
        assert!(t.gaps().iter().all(|&g| g > 1e-9));
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), n as usize + 1);
    }
}

#[test]
fn butterfly_rows() {
    let p = cosine_example(1.0, 1.0, 1.0).unwrap();
    let csv = butterfly_csv(&p, 0, 0.01, &[flux(1, 1), flux(2, 1), flux(3, 1), flux(3, 2)], (9, 9)).unwrap();
    assert!(csv.starts_with("flux,band,E_minus,E_plus,lambda_minus,lambda_plus\n"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 6));
}

#[test]
fn spectrum_extent_approaches_symbol_range() {
    // β = π/2: a₂₂ = 4, η = 4/h.
    let p = cosine_example(1.0, 1.0, 0.5 * PI).unwrap();
    let mut devs = Vec::new();
    for (h, n) in [(0.2, 20), (0.1, 40), (0.05, 80)] {
        let f = flux(n, 1);
        let m = harper_from_landau(&p, 0, h, 0.01).unwrap();
        let t = band_table(&m, f, DEFAULT_GRID).unwrap();
        let symbol = 2.0 * (m.hop.abs() + m.pot.abs());
        let dev = (t.extent() - symbol).abs();
        assert!(dev <= 5.0 * h, "h = {h}: {dev}");
        devs.push((h, dev));
    }
    let slope = (devs[0].1.ln() - devs[2].1.ln()) / (devs[0].0.ln() - devs[2].0.ln());
    assert!(slope >= 0.8, "{devs:?} slope {slope}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bloch_matrix_is_hermitian_with_bounded_spectrum(
        hop in -2.0f64..2.0, pot in -2.0f64..2.0, t in 0.0f64..6.3, ph in 0.0f64..6.3, idx in 0usize..4
    ) {
        let f = [flux(5, 2), flux(7, 3), flux(4, 1), flux(3, 2)][idx];
        let m = model(hop, pot, f);
        let a = bloch_matrix(&m, f, t, ph).unwrap();
        prop_assert!(a.hermiticity_residual() == 0.0);
        let e = hermitian_eigenvalues(&a);
        let bound = hop.abs() + pot.abs() + 1e-12;
        prop_assert!(e.iter().all(|x| x.abs() <= bound));
    }
}
