//! Acceptance suite: one PASS/FAIL line per criterion on stdout.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;
use std::path::Path;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use magspec_actions::{closed_form_i2_example, ActionContext};
use magspec_bloch::{
    family_gram_offdiagonal, interior_bloch_coeffs, interior_general_d_solve, seed_gram_determinant,
    verify_boundary_conditions, QuasiMomentum, Sign,
};
use magspec_classical::{
    build_reeb_graph, classify_trajectory, critical_i1_series, find_critical_points, lifted_hamiltonian_oscillation,
    trace_level_set, trace_orbit, Classification, CriticalKind, DriftSystem, GraphKind, LevelSetOptions, OrbitOptions,
    OrbitOutcome, ReebOptions,
};
use magspec_harper::{band_table, harper_from_landau, DEFAULT_GRID};
use magspec_lattice::{
    averaged_potential, averaged_potential_oracle, cosine_example, FluxRatio, FourierPotential, Lattice,
};
use magspec_numerics::{Complex64, Tolerance};
use magspec_spectra::{landau_level, solve_homological, subband_count, FourierFunctionOnTorus};
use magspec_sturm1d::{
    agmon_distance, band_width_lower, bs_levels_lower, dispersion_upper, fd_band_width, fd_bloch_oracle,
    fourier_bloch_oracle, gap_ends_upper, Potential1D,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn flux(n: i64, m: u64) -> FluxRatio {
    FluxRatio::new(n, m).expect("m > 0")
}

fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn random_trig_polynomial(rng: &mut ChaCha8Rng, degree: i32) -> FourierPotential {
    let lattice = Lattice::new(rng.gen_range(-1.5..1.5), rng.gen_range(2.0..8.0)).expect("a22 > 0");
    let mut half = Vec::new();
    for k1 in 0..=degree {
        for k2 in -degree..=degree {
            if k1.abs() + k2.abs() > degree || (k1 == 0 && k2 <= 0) {
                continue;
            }
            half.push((
                (k1, k2),
                Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
            ));
        }
    }
    FourierPotential::from_half(lattice, rng.gen_range(-1.0..1.0), &half).expect("real potential")
}

/// 1. Series form of the averaged potential vs direct quadrature.
fn averaging_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut potentials = vec![cosine_example(1.0, 0.7, 1.0).map_err(err)?];
    for d in 1..=3 {
        potentials.push(random_trig_polynomial(&mut rng, d));
    }
    let tol = Tolerance::uniform(1e-14);
    let mut worst_ratio: f64 = 0.0;
    for p in &potentials {
        let bound = 1e-10 * (1.0 + p.coeff_l1());
        for _ in 0..200 {
            let i1 = rng.gen_range(0.0..10.0);
            let y = p.lattice().point(rng.gen(), rng.gen());
            let s = averaged_potential(p, i1, y).map_err(err)?;
            let o = averaged_potential_oracle(p, i1, y, tol).map_err(err)?;
            worst_ratio = worst_ratio.max((s - o).abs() / bound);
        }
    }
    check(
        worst_ratio <= 1.0,
        format!("max |series - quadrature| = {worst_ratio:.3e} x 1e-10(1+sum|v_k|) over 4 x 200 points"),
    )
}

/// 2. Both Kirchhoff residuals at 10 generic I₁ for A = 2, B = 1, β = 1.
fn kirchhoff_laws() -> Outcome {
    let p = cosine_example(2.0, 1.0, 1.0).map_err(err)?;
    let a22 = p.lattice().a22();
    let i1s = [0.1, 0.3, 0.6, 0.9, 1.2, 1.6, 2.0, 2.4, 4.0, 5.5];
    let mut worst: f64 = 0.0;
    for &i1 in &i1s {
        let l = ActionContext::new(&p, 0.01, i1)
            .and_then(|c| c.separatrix_limits())
            .map_err(|e| format!("I1 = {i1}: {e}"))?;
        worst = worst.max(l.kirchhoff_first.abs()).max(l.kirchhoff_second.abs());
    }
    check(
        worst <= 1e-6 * a22,
        format!(
            "max residual {worst:.3e} (bound {:.3e}) at {} I1 values",
            1e-6 * a22,
            i1s.len()
        ),
    )
}

/// 3. Closed-form separatrix action vs the quadrature limit, Γ < 0.9.
fn closed_form_separatrix() -> Outcome {
    let (a, b, beta) = (2.0, 1.0, 1.5);
    let p = cosine_example(a, b, beta).map_err(err)?;
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut i1: f64 = 0.15;
    while used < 10 && i1 < 8.0 {
        let r = (2.0 * i1).sqrt();
        let (aa, bb) = (
            (a * magspec_numerics::bessel_j0(r).map_err(err)?).abs(),
            (b * magspec_numerics::bessel_j0(beta * r).map_err(err)?).abs(),
        );
        let gamma = aa.min(bb) / aa.max(bb);
        let ctx = ActionContext::new(&p, 0.01, i1).map_err(err)?;
        if gamma < 0.9 && ctx.graph().kind == GraphKind::Generic {
            let cf = closed_form_i2_example(a, b, beta, i1).map_err(err)?;
            let lim = ctx.separatrix_limits().map_err(err)?.i1_plus;
            worst = worst.max(((lim - cf) / cf).abs());
            used += 1;
        }
        i1 += 0.37;
    }
    check(
        used == 10 && worst <= 1e-6,
        format!("max relative disagreement {worst:.3e} over {used} I1 values"),
    )
}

/// 4. Level-set windings equal orbit lattice shifts; drift flips at type-I values.
fn drift_and_winding() -> Outcome {
    let p = cosine_example(2.0, 1.0, 1.5).map_err(err)?;
    let series = critical_i1_series(&p, 6.0).map_err(err)?;
    let mut cuts = vec![0.0];
    cuts.extend(series.all());
    cuts.push(6.0);
    let mids: Vec<f64> = cuts
        .windows(2)
        .filter(|w| w[1] - w[0] > 0.1)
        .map(|w| 0.5 * (w[0] + w[1]))
        .take(5)
        .collect();
    let opts = OrbitOptions::default();
    let (mut levels, mut comps, mut mismatches) = (0, 0, Vec::new());
    for &i1 in &mids {
        let graph = build_reeb_graph(&p.averaged(i1).map_err(err)?, &ReebOptions::default()).map_err(err)?;
        if graph.kind != GraphKind::Generic {
            return Err(format!("graph at I1 = {i1} is {:?}", graph.kind));
        }
        let (g0, gm, gp, g1) = (graph.g_min, graph.g_minus, graph.g_plus, graph.g_max);
        let ls = LevelSetOptions {
            saddle_values: Some(vec![gm, gp]),
            ..Default::default()
        };
        let av = p.averaged(i1).map_err(err)?;
        for g in [
            g0 + 0.4 * (gm - g0),
            gm + 0.3 * (gp - gm),
            gm + 0.7 * (gp - gm),
            gp + 0.6 * (g1 - gp),
        ] {
            levels += 1;
            for c in trace_level_set(&av, g, &ls).map_err(err)? {
                comps += 1;
                match classify_trajectory(&p, 0.01, i1, c.polyline[0], &opts).map_err(err)? {
                    Classification::Closed { winding, .. } if winding == c.winding => {}
                    other => mismatches.push(format!("I1 = {i1}, g = {g}: level set {:?} vs {other:?}", c.winding)),
                }
            }
        }
    }
    let mut flips = 0;
    for &c in &series.type_one {
        let d = |i1: f64| -> Result<(i64, i64), String> {
            let g = build_reeb_graph(&p.averaged(i1).map_err(err)?, &ReebOptions::default()).map_err(err)?;
            g.drift()
                .map(|d| d.d)
                .ok_or_else(|| format!("no open edge at I1 = {i1}"))
        };
        let mut pair = [d(c - 0.02)?, d(c + 0.02)?];
        pair.sort();
        if pair != [(0, 1), (1, 0)] {
            mismatches.push(format!("no drift flip across I1 = {c}: {pair:?}"));
        }
        flips += 1;
    }
    check(
        levels == 20 && flips > 0 && mismatches.is_empty(),
        format!("{levels} levels, {comps} components, {flips} type-I flips; mismatches: {mismatches:?}"),
    )
}

/// 5. Harper band count equals N for η = 5/2 and 7/3, matching the subband count.
fn harper_band_count() -> Outcome {
    let p = cosine_example(2.0, 1.0, 1.0).map_err(err)?;
    let eps = 0.01;
    let mut details = Vec::new();
    let mut ok = true;
    for (n, m) in [(5, 2), (7, 3)] {
        let start = Instant::now();
        let f = flux(n, m);
        let h = p.lattice().a22() / f.value();
        let model = harper_from_landau(&p, 0, h, eps).map_err(err)?;
        let table = band_table(&model, f, DEFAULT_GRID).map_err(err)?;
        let min_gap = table.gaps().into_iter().fold(f64::INFINITY, f64::min);
        let count = subband_count(&p, eps, h, landau_level(0, h).map_err(err)?, f).map_err(err)?;
        let secs = start.elapsed().as_secs_f64();
        ok &= table.band_count() == n as usize && min_gap > 1e-9 && count.count == n && secs < 60.0;
        details.push(format!(
            "{f}: {} bands, min gap {min_gap:.3e}, subband count {} ({:.6}), {secs:.1}s",
            table.band_count(),
            count.count,
            count.value
        ));
    }
    check(ok, details.join("; "))
}

/// 6. λ-extent of the Harper spectrum vs the symbol range g_max − g_min.
fn harper_extent() -> Outcome {
    let p = cosine_example(1.0, 1.0, 0.5 * PI).map_err(err)?;
    let mut devs = Vec::new();
    let mut ok = true;
    for (h, n) in [(0.2, 20), (0.1, 40), (0.05, 80)] {
        let i1 = landau_level(0, h).map_err(err)?;
        let graph = build_reeb_graph(&p.averaged(i1).map_err(err)?, &ReebOptions::default()).map_err(err)?;
        let model = harper_from_landau(&p, 0, h, 0.01).map_err(err)?;
        let table = band_table(&model, flux(n, 1), DEFAULT_GRID).map_err(err)?;
        let dev = (table.extent() - (graph.g_max - graph.g_min)).abs();
        ok &= dev <= 5.0 * h;
        devs.push((h, dev));
    }
    let (hs, ds): (Vec<f64>, Vec<f64>) = devs.iter().copied().unzip();
    let slope = log_log_slope(&hs, &ds);
    check(
        ok && slope >= 0.8,
        format!("deviations {devs:?}, log-log slope {slope:.3}"),
    )
}

/// 7. One-dimensional Sturm suite for v = cos x.
fn sturm_suite() -> Outcome {
    let start = Instant::now();
    let v = Potential1D::cosine(1.0).map_err(err)?;
    let free = Potential1D::from_fourier(0.0, &[]).map_err(err)?;
    let mut parts = Vec::new();
    let mut ok = true;

    // (a) free gap ends (hν/2)², formula vs plane-wave and FD oracles.
    let h = 0.1;
    let ends = gap_ends_upper(&free, h, 1.0 + 1e-9).map_err(err)?;
    let mut worst_a: f64 = 0.0;
    let edge_set = |e0: Vec<f64>, eh: Vec<f64>| {
        let mut edges: Vec<f64> = e0.into_iter().chain(eh).filter(|&e| e <= 1.0 + 1e-6).collect();
        edges.sort_by(f64::total_cmp);
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        edges
    };
    let oracles = [
        edge_set(
            fourier_bloch_oracle(&free, h, 0.0, 40).map_err(err)?,
            fourier_bloch_oracle(&free, h, 0.5, 40).map_err(err)?,
        ),
        edge_set(
            fd_bloch_oracle(&free, h, 0.0, 2048, 21).map_err(err)?,
            fd_bloch_oracle(&free, h, 0.5, 2048, 21).map_err(err)?,
        ),
    ];
    for &(nu, e) in &ends {
        let exact = (h * nu as f64 / 2.0).powi(2);
        worst_a = worst_a.max((e - exact).abs());
        for edges in &oracles {
            let nearest = edges.iter().map(|x| (x - exact).abs()).fold(f64::INFINITY, f64::min);
            worst_a = worst_a.max(nearest);
        }
    }
    let pass_a = worst_a <= 1e-8 && ends.len() == 21 && oracles.iter().all(|o| o.len() == ends.len());
    ok &= pass_a;
    parts.push(format!("(a) {} gap ends, max error {worst_a:.2e}", ends.len()));

    // (b) BS levels vs oracle centers at h = 0.05, and the h² law.
    let hs = [0.1, 0.05, 0.025];
    let mut errs = Vec::new();
    for &h in &hs {
        let levels = bs_levels_lower(&v, h).map_err(err)?;
        let n = levels.len();
        let e0 = fd_bloch_oracle(&v, h, 0.0, 2048, n).map_err(err)?;
        let eh = fd_bloch_oracle(&v, h, 0.5, 2048, n).map_err(err)?;
        errs.push(
            (0..n)
                .map(|k| (levels[k] - 0.5 * (e0[k] + eh[k])).abs())
                .fold(0.0, f64::max),
        );
    }
    let slope = log_log_slope(&hs, &errs);
    let pass_b = errs[1] <= 5e-3 && (slope - 2.0).abs() <= 0.3;
    ok &= pass_b;
    parts.push(format!("(b) error at h=0.05 {:.2e}, slope {slope:.3}", errs[1]));

    // (c) ground level h·ω₀/2 above v_min.
    let mut worst_c: f64 = 0.0;
    for &h in &hs {
        let harmonic = v.v_min() + 0.5 * h * v.omega0();
        let bs = bs_levels_lower(&v, h).map_err(err)?[0];
        let oracle = fd_bloch_oracle(&v, h, 0.0, 1024, 1).map_err(err)?[0];
        worst_c = worst_c
            .max((bs - harmonic).abs() / (h * h))
            .max((oracle - harmonic).abs() / (h * h));
    }
    let pass_c = worst_c <= 2.0 && (v.omega0() * FRAC_1_SQRT_2 - 1.0).abs() < 1e-12;
    ok &= pass_c;
    parts.push(format!("(c) max |E0 - h*w0/2| = {worst_c:.3} h^2"));

    // (d) log-widths vs −ρ/h.
    let h = 0.05;
    let mut worst_d: f64 = 0.0;
    for nu in 0..4 {
        let f = band_width_lower(&v, h, nu).map_err(err)?;
        let o = fd_band_width(&v, h, nu, 1024).map_err(err)?;
        let rho_h = agmon_distance(&v, f.energy).map_err(err)? / h;
        worst_d = worst_d
            .max((o.log_width + rho_h).abs() / rho_h)
            .max((o.log_width - f.log_width).abs() / rho_h);
    }
    let pass_d = worst_d <= 0.15;
    ok &= pass_d;
    parts.push(format!("(d) max relative log-width error {worst_d:.4}"));

    // (e) upper-domain dispersion on a 21-point q grid, bands in (v_max + δ, 3].
    let h = 0.05;
    let bands: Vec<usize> = gap_ends_upper(&v, h, 3.0)
        .map_err(err)?
        .iter()
        .map(|&(nu, _)| nu)
        .collect();
    let top = bands.last().copied().unwrap_or(0) + 1;
    let mut worst_e: f64 = 0.0;
    let mut samples = 0;
    for i in 0..=20 {
        let q = i as f64 / 20.0;
        let o = fd_bloch_oracle(&v, h, q, 2048, top).map_err(err)?;
        for &nu in bands.iter().filter(|&&nu| nu < top - 1) {
            let f = dispersion_upper(&v, h, nu, q).map_err(err)?;
            worst_e = worst_e.max((f - o[nu]).abs());
            samples += 1;
        }
    }
    let pass_e = samples > 0 && worst_e <= 5e-3;
    ok &= pass_e;
    parts.push(format!("(e) max dispersion error {worst_e:.2e} over {samples} samples"));

    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    parts.push(format!("{secs:.1}s"));
    check(ok, parts.join("; "))
}

/// 8. Magneto-Bloch boundary conditions, seed independence, interior closed form.
fn bloch_algebra() -> Outcome {
    let start = Instant::now();
    let lattices = [
        Lattice::rectangular(2.0 * PI).map_err(err)?,
        Lattice::new(0.8, 2.5).map_err(err)?,
    ];
    let points = [[0.3, 0.2], [1.1, -0.4], [-0.7, 0.9]];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_bc, mut worst_interior, mut seeds_exact) = (0.0f64, 0.0f64, true);
    for lat in &lattices {
        for (m, n) in [(1u64, 1i64), (2, 1), (3, 2), (5, 3), (7, 5)] {
            let f = flux(n, m);
            for _ in 0..20 {
                let q = QuasiMomentum::new(f, rng.gen::<f64>() / m as f64, rng.gen()).map_err(err)?;
                let s = rng.gen_range(0..m);
                let r = verify_boundary_conditions(f, lat, q, s, 6, &points).map_err(err)?;
                worst_bc = worst_bc.max(r.max());
            }
            let q = QuasiMomentum::new(f, rng.gen::<f64>() / m as f64, rng.gen()).map_err(err)?;
            seeds_exact &= seed_gram_determinant(f, lat, q) == Complex64::new(1.0, 0.0);
            seeds_exact &= family_gram_offdiagonal(f, lat, q, 3).map_err(err)? == 0.0;
            let window = (m as i64).max(4) + 2;
            let nq = rng.gen_range(0..m as i64);
            let fam = interior_bloch_coeffs(f, lat, q, Sign::Plus, nq, window).map_err(err)?;
            let d = Sign::Plus.drift();
            let sol = interior_general_d_solve(f, lat, q, d, d, fam.i2, window).map_err(err)?;
            if sol.dimension != 1 {
                return Err(format!("{f}: nullspace dimension {}", sol.dimension));
            }
            let v = &sol.null_vectors[0];
            let scale = v[&(fam.s, 0)];
            worst_interior = fam
                .coeffs
                .iter()
                .map(|(k, c)| (v[k] / scale - c).norm())
                .fold(worst_interior, f64::max);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst_bc <= 1e-12 && seeds_exact && worst_interior <= 1e-10 && secs < 30.0,
        format!("boundary residual {worst_bc:.2e}, seeds exact {seeds_exact}, interior vs general-d {worst_interior:.2e}, {secs:.1}s"),
    )
}

/// 9. Homological equation on random finitely supported g.
fn homological() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut kept, mut mean_exact, mut grid_ok, mut count) = (0.0f64, true, true, 0);
    for w2 in [0.1, 0.01] {
        for _ in 0..10 {
            let mut map = BTreeMap::new();
            for _ in 0..12 {
                let k = (rng.gen_range(-6i64..=6), rng.gen_range(-40i64..=40));
                if k == (0, 0) {
                    continue;
                }
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    / (1.0 + (k.0.abs() + k.1.abs()) as f64).powi(2);
                *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
                *map.entry((-k.0, -k.1)).or_insert(Complex64::new(0.0, 0.0)) += c.conj();
            }
            map.insert((0, 0), Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            let g = FourierFunctionOnTorus::new(map);
            let s = solve_homological(&g, 1.0, w2, w2, 2.0).map_err(err)?;
            kept = kept.max(s.kept_residual);
            mean_exact &= s.e == -g.coeff((0, 0)).re;
            let mut worst: f64 = 0.0;
            for i in 0..64 {
                for j in 0..64 {
                    let phi = [2.0 * PI * i as f64 / 64.0, 2.0 * PI * j as f64 / 64.0];
                    let d = s.f.gradient(phi);
                    worst = worst.max((d[0] + d[1] * w2 - (g.eval(phi) + s.e)).norm());
                }
            }
            grid_ok &= worst <= s.residual_norm + 1e-12;
            count += 1;
        }
    }
    check(
        kept <= 1e-12 && mean_exact && grid_ok,
        format!("{count} functions: kept residual {kept:.2e}, E = -g00 exact {mean_exact}, grid within tail bound {grid_ok}"),
    )
}

/// 10. H̄ conservation along drift orbits; original-H oscillation on lifts.
fn conservation() -> Outcome {
    let eps = 0.01;
    let opts = OrbitOptions::default();
    let cases = [
        (cosine_example(2.0, 1.0, 1.5).map_err(err)?, 0.6),
        (random_trig_polynomial(&mut ChaCha8Rng::seed_from_u64(10), 2), 1.2),
    ];
    let (mut drift, mut osc_ratio, mut n) = (0.0f64, 0.0f64, 0);
    for (p, i1) in &cases {
        let sys = DriftSystem::new(p, eps, *i1).map_err(err)?;
        let set = find_critical_points(sys.averaged());
        let centers: Vec<[f64; 2]> = [CriticalKind::Minimum, CriticalKind::Maximum]
            .iter()
            .filter_map(|&k| set.of_kind(k).next().map(|c| c.y))
            .collect();
        for c in &centers {
            for k in 1..=4 {
                let y0 = [c[0] + 0.12 * k as f64, c[1] + 0.05 * k as f64];
                let orbit = match trace_orbit(&sys, y0, &opts).map_err(err)? {
                    OrbitOutcome::Closed(o) => o,
                    _ => return Err(format!("orbit from {y0:?} did not close")),
                };
                let h0 = sys.hamiltonian(y0);
                drift = orbit
                    .samples
                    .iter()
                    .map(|s| (sys.hamiltonian(s.y) - h0).abs() / h0.abs())
                    .fold(drift, f64::max);
                let osc = lifted_hamiltonian_oscillation(p, eps, *i1, y0, 0.3, &opts).map_err(err)?;
                osc_ratio = osc_ratio.max(osc / (2.0 * eps * p.coeff_l1()));
                n += 1;
            }
        }
    }
    check(
        n >= 10 && drift <= 1e-8 && osc_ratio <= 1.0,
        format!("{n} trajectories: max relative drift {drift:.2e}, max oscillation {osc_ratio:.3} x 2 eps sum|v_k|"),
    )
}

fn run_cli(
    dir: &Path,
    command: &str,
    config: &Path,
    threads: usize,
    tag: &str,
) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let out = dir.join(format!("{command}-{tag}"));
    let status = Process::new(env!("CARGO_BIN_EXE_magspec"))
        .args([
            command,
            "--config",
            config.to_str().unwrap_or_default(),
            "--out",
            out.to_str().unwrap_or_default(),
        ])
        .args(["--threads", &threads.to_string()])
        .output()
        .map_err(err)?;
    if !status.status.success() {
        return Err(format!(
            "{command}: exit {:?}, {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    let mut files = BTreeMap::new();
    for e in std::fs::read_dir(&out).map_err(err)? {
        let e = e.map_err(err)?;
        files.insert(
            e.file_name().to_string_lossy().into_owned(),
            std::fs::read(e.path()).map_err(err)?,
        );
    }
    Ok(files)
}

/// 11. Every CLI command twice, with 1 and 2 worker threads, byte-identical.
fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let config = json!({
        "potential": {"cosine": {"A": 1.0, "B": 0.7, "beta": 1.0}},
        "params": {"h": 0.1, "epsilon": 0.01},
        "flux": {"n": 5, "m": 2},
        "I1_max": 2.0,
        "delta": 0.3,
        "grids": {"regimes": 41, "harper": [16, 16]},
        "bloch": {"q1": 0.2, "q2": 0.3, "s": 1},
        "sturm": {"grid": 256, "levels": 6, "q_samples": 5},
    });
    let path = dir.path().join("config.json");
    std::fs::write(&path, config.to_string()).map_err(err)?;
    let mut names = Vec::new();
    for cmd in magspec_cli::Command::ALL {
        let name = cmd.name();
        let a = run_cli(dir.path(), name, &path, 1, "a")?;
        let b = run_cli(dir.path(), name, &path, 2, "b")?;
        if a != b || a.is_empty() {
            return Err(format!("{name}: outputs differ between runs"));
        }
        names.push(format!("{name}({})", a.len()));
    }
    Ok(format!("identical outputs for {}", names.join(" ")))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "averaging oracle equivalence",
            Some(Duration::from_secs(10)),
            averaging_oracle,
        ),
        ("Kirchhoff laws", Some(Duration::from_secs(60)), kirchhoff_laws),
        ("closed-form separatrix action", None, closed_form_separatrix),
        ("drift and winding consistency", None, drift_and_winding),
        ("Harper band count", None, harper_band_count),
        ("Landau band width cross-check", None, harper_extent),
        ("1D Sturm suite", None, sturm_suite),
        ("magneto-Bloch algebra", None, bloch_algebra),
        ("homological solver", None, homological),
        ("conservation and residual diagnostics", None, conservation),
        ("CLI determinism", None, cli_determinism),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(d), Some(l)) if elapsed >= *l => Err(format!(
                "{d}; runtime {:.1}s exceeds {}s",
                elapsed.as_secs_f64(),
                l.as_secs()
            )),
            (r, _) => r,
        };
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        let _ = writeln!(
            out,
            "{tag} criterion {:>2} {name}: {detail} [{:.1}s]",
            i + 1,
            elapsed.as_secs_f64()
        );
        let _ = out.flush();
    }
    let _ = writeln!(out, "acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
