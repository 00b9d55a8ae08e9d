//! Acceptance suite: every release-gating criterion with its tolerance
//! pinned, one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasi1d::collective::{
    build_coupling_matrix, decompose, tridiagonal_modes, EmitterChain,
};
use quasi1d::dynamics::{evolve, population_maxima, time_grid};
use quasi1d::eit::{
    eit_transmission, group_velocity, keff_closed_form, keff_from_transmission, keff_series,
    SpacingConfiguration,
};
use quasi1d::greens::{
    CavityModel, FrequencyRule, LayeredStack, ReservoirModel, Slab, SpatialProfile,
    TabulatedCoupling, WaveguideModel,
};
use quasi1d::scenario::expand_preset;
use quasi1d::spectra::{
    beer_lambert, fano, linear_grid, nonmarkov_eigenvalues, nonmarkov_spectrum, transmission,
    transmission_product, transmission_reflection,
};
use quasi1d::{C64, IM};

fn pass(criterion: u32, message: &str) {
    println!("acceptance criterion {criterion}: PASS — {message}");
}

fn waveguide(gamma_1d: f64) -> ReservoirModel {
    ReservoirModel::Waveguide(WaveguideModel { gamma_1d })
}

/// allclose-style comparison: |a - b| <= rtol·|b| + atol.
fn close(a: C64, b: C64, rtol: f64, atol: f64) -> bool {
    (a - b).norm() <= rtol * b.norm() + atol
}

/// Least-squares slope of y against x.
fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (
        x.iter().sum::<f64>() / n,
        y.iter().sum::<f64>() / n,
    );
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Parabolic-refined argmin of samples (grid must bracket the minimum).
fn refined_argmin(xs: &[f64], ys: &[f64]) -> f64 {
    let k = ys
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if k == 0 || k + 1 == ys.len() {
        return xs[k];
    }
    let (y0, y1, y2) = (ys[k - 1], ys[k], ys[k + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() == 0.0 {
        xs[k]
    } else {
        xs[k] + 0.5 * (y0 - y2) / denom * (xs[k + 1] - xs[k])
    }
}

/// Criterion 1: the Eq.-(11a) direct solve and the Eq.-(12) eigenvalue
/// product agree pointwise to 1e-9 relative over 200 randomized chains in
/// waveguides and high-Q cavities, in under 10 s.
#[test]
fn criterion_1_determinant_lemma_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gamma_prime = 1.0;
    // relative deviation wherever |t| is appreciable; absolute deviation
    // everywhere (deep Fano dips cancel to the atol floor in the direct
    // route)
    let mut worst_rel: f64 = 0.0;
    let mut worst_abs: f64 = 0.0;
    for case in 0..200 {
        let n = rng.gen_range(1..=8);
        let gamma_ratio = 10.0_f64.powf(rng.gen_range(-1.0..=1.0));
        let (model, positions): (ReservoirModel, Vec<f64>) = if case % 2 == 0 {
            (
                waveguide(gamma_ratio),
                (0..n).map(|_| rng.gen_range(0.0..2.0)).collect(),
            )
        } else {
            // high-Q cavity with Γ_1D^max/Γ' = gamma_ratio at the working
            // detuning
            let kappa_c = 1.0;
            let delta_c = rng.gen_range(-1.0..1.0);
            let g0 = (gamma_ratio * (delta_c * delta_c + 0.25 * kappa_c * kappa_c)
                / kappa_c)
                .sqrt();
            (
                ReservoirModel::HighQCavity(CavityModel {
                    mirror_reflectivity: (1.0_f64 - 0.02).sqrt(),
                    mode_index: 7,
                    kappa_c,
                    g0,
                    delta_c,
                }),
                (0..n).map(|_| rng.gen_range(0.0..1.0)).collect(),
            )
        };
        let chain = EmitterChain::new(positions, gamma_prime).unwrap();
        let matrix = build_coupling_matrix(&chain, &model).unwrap();
        let modes = decompose(&matrix).unwrap();
        let max_rate = modes.rates().iter().cloned().fold(0.0, f64::max);
        let grid = linear_grid(5.0 * (gamma_prime + max_rate), 201);
        let direct = transmission(&grid, &matrix, gamma_prime, &chain, &model).unwrap();
        let product = transmission_product(&grid, &modes.eigenvalues, gamma_prime).unwrap();
        for i in 0..grid.len() {
            let (a, b) = (direct.t_over_t0[i], product.t_over_t0[i]);
            assert!(
                close(a, b, 1e-9, 1e-12),
                "criterion 1: FAIL — case {case} (N = {n}, {}) at Δ = {}: {a} vs {b}",
                model.name(),
                grid[i]
            );
            worst_abs = worst_abs.max((a - b).norm());
            if b.norm() > 1e-3 {
                worst_rel = worst_rel.max((a - b).norm() / b.norm());
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "criterion 1: FAIL — runtime {:.2} s exceeds 10 s",
        elapsed.as_secs_f64()
    );
    pass(
        1,
        &format!(
            "200 random cases, worst relative {worst_rel:.2e} (absolute {worst_abs:.2e} at deep dips), {:.2} s",
            elapsed.as_secs_f64()
        ),
    );
}

/// Criterion 2: single-atom lineshape anchors and the Fano family.
#[test]
fn criterion_2_single_atom_lineshape() {
    // Γ_1D = Γ', J = 0: T/T₀(0) = 1/4
    let chain = EmitterChain::new(vec![0.4], 1.0).unwrap();
    let model = waveguide(1.0);
    let matrix = build_coupling_matrix(&chain, &model).unwrap();
    let t0 = transmission(&[0.0], &matrix, 1.0, &chain, &model).unwrap().transmittance()[0];
    assert!(
        (t0 - 0.25).abs() <= 1e-12,
        "criterion 2: FAIL — T/T₀(0) = {t0}"
    );

    // Γ' = 0: perfect extinction and unit reflection
    let lossless = EmitterChain::new(vec![0.4], 0.0).unwrap();
    let matrix0 = build_coupling_matrix(&lossless, &model).unwrap();
    let table = transmission_reflection(&[0.0], &matrix0, 0.0, &lossless, &model).unwrap();
    let (ext, refl) = (
        table.transmittance()[0],
        table.reflection.as_ref().unwrap()[0].norm(),
    );
    assert!(ext < 1e-20, "criterion 2: FAIL — T(0) = {ext}");
    assert!(
        (refl - 1.0).abs() <= 1e-12,
        "criterion 2: FAIL — |r(0)| = {refl}"
    );

    // Fano family |J|/Γ_1D ∈ {0, 1, 2, 5} with Γ_1D = Γ'; shifts carry the
    // bandgap sign (J < 0), for which the features move blueward
    let grid = linear_grid(10.0, 2001);
    let mut dips = Vec::new();
    for ratio in [0.0, 1.0, 2.0, 5.0] {
        let p = fano(-ratio, 1.0, 1.0).unwrap();
        for &d in &grid {
            let (a, b) = (p.transmittance(d), p.amplitude_transmittance(d));
            assert!(
                (a - b).abs() <= 1e-12 * b.max(1.0),
                "criterion 2: FAIL — Fano identity at ratio {ratio}, Δ = {d}: {a} vs {b}"
            );
        }
        // dip location on a fine grid around the transmission minimum
        let fine = linear_grid(0.5, 40001);
        let tt: Vec<f64> = fine.iter().map(|&d| p.transmittance(d)).collect();
        dips.push(refined_argmin(&fine, &tt));
    }
    assert!(
        dips[0].abs() < 1e-6,
        "criterion 2: FAIL — symmetric dip at {}",
        dips[0]
    );
    // monotone blueshift of the minimum across the asymmetric family
    assert!(
        dips[1] < dips[2] && dips[2] < dips[3],
        "criterion 2: FAIL — dips not monotone blueward: {dips:?}"
    );
    pass(
        2,
        &format!(
            "T(0) anchors exact, Fano identity <= 1e-12, dips {:.4}/{:.4}/{:.4} shift blueward",
            dips[1], dips[2], dips[3]
        ),
    );
}

/// Criterion 3: super-atom collapse (rank-1 coupling) and the Lorentzian
/// width NΓ_1D + Γ' of the bright mode.
#[test]
fn criterion_3_super_atom_collapse() {
    let (n, gamma_1d, gamma_prime) = (10, 1.0, 1.0);
    // waveguide mirror configuration
    let chain = EmitterChain::regular(n, 0.0, 0.5, gamma_prime).unwrap();
    let model = waveguide(gamma_1d);
    let matrix = build_coupling_matrix(&chain, &model).unwrap();
    let modes = decompose(&matrix).unwrap();
    let scale = matrix.frobenius_norm();
    let big: Vec<&C64> = modes
        .eigenvalues
        .iter()
        .filter(|l| l.norm() > 1e-10 * scale)
        .collect();
    assert_eq!(
        big.len(),
        1,
        "criterion 3: FAIL — {} eigenvalues above threshold",
        big.len()
    );
    let trace = matrix.trace();
    assert!(
        (big[0] - trace).norm() <= 1e-10 * trace.norm(),
        "criterion 3: FAIL — bright eigenvalue {} vs trace {trace}",
        big[0]
    );

    // cavity antinodes give the same collapse
    let cavity = ReservoirModel::HighQCavity(CavityModel {
        mirror_reflectivity: (1.0_f64 - 0.01).sqrt(),
        mode_index: 10,
        kappa_c: 1.0,
        g0: 0.5,
        delta_c: 0.0,
    });
    let cavity_chain =
        EmitterChain::new((0..n).map(|i| 0.1 * i as f64).collect(), gamma_prime).unwrap();
    let cavity_matrix = build_coupling_matrix(&cavity_chain, &cavity).unwrap();
    let cavity_modes = decompose(&cavity_matrix).unwrap();
    let cavity_scale = cavity_matrix.frobenius_norm();
    assert_eq!(
        cavity_modes
            .eigenvalues
            .iter()
            .filter(|l| l.norm() > 1e-10 * cavity_scale)
            .count(),
        1,
        "criterion 3: FAIL — cavity coupling not rank one"
    );

    // half-depth full width of the transmission dip
    let t_at = |delta: f64| {
        transmission(&[delta], &matrix, gamma_prime, &chain, &model)
            .unwrap()
            .transmittance()[0]
    };
    let t_center = t_at(0.0);
    let target = 0.5 * (t_center + 1.0);
    let (mut lo, mut hi) = (0.0, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if t_at(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let width = lo + hi; // symmetric dip: full width = 2Δ_half
    let expected = n as f64 * gamma_1d + gamma_prime;
    let rel = (width - expected).abs() / expected;
    assert!(
        rel <= 0.005,
        "criterion 3: FAIL — width {width} vs {expected} ({:.3}%)",
        100.0 * rel
    );
    pass(
        3,
        &format!("single bright eigenvalue = trace, dip width {width:.6} = NΓ_1D + Γ' ({rel:.2e} relative)"),
    );
}

/// Criterion 4: tridiagonal (nearest-neighbor) approximation of the bandgap
/// Toeplitz matrix, and bright-mode coalescence for long-range coupling.
#[test]
fn criterion_4_tridiagonal_approximation() {
    use quasi1d::greens::BandgapModel;
    let (n, j_max) = (10, 1.0);

    // κ_x d = 3
    let kappa_x: f64 = 1.5;
    let d = 2.0;
    let chi = (-kappa_x * d).exp();
    let model = ReservoirModel::Bandgap(BandgapModel {
        j_max,
        kappa_x,
        residual_gamma: 0.0,
    });
    let chain = EmitterChain::regular(n, 0.0, d, 0.5).unwrap();
    let full = decompose(&build_coupling_matrix(&chain, &model).unwrap()).unwrap();
    let tri = tridiagonal_modes(n, j_max, chi).unwrap();
    let mut lf: Vec<f64> = full.eigenvalues.iter().map(|l| l.re).collect();
    let mut lt: Vec<f64> = tri.eigenvalues.iter().map(|l| l.re).collect();
    lf.sort_by(f64::total_cmp);
    lt.sort_by(f64::total_cmp);
    let worst = lf
        .iter()
        .zip(&lt)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let bound = 3.0 * chi * chi * j_max.abs();
    assert!(
        worst <= bound,
        "criterion 4: FAIL — eigenvalue error {worst} above {bound}"
    );

    // κ_x d = 1e-3: infinite-range limit, bright mode at N·J_max
    let coalesced = ReservoirModel::Bandgap(BandgapModel {
        j_max,
        kappa_x: 5e-4,
        residual_gamma: 0.0,
    });
    let modes = decompose(&build_coupling_matrix(&chain, &coalesced).unwrap()).unwrap();
    let lambda_max = modes
        .eigenvalues
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let rel = (lambda_max - n as f64 * j_max).abs() / (n as f64 * j_max);
    assert!(
        rel <= 0.01,
        "criterion 4: FAIL — λ_max {lambda_max} vs {n}·J_max ({:.3}%)",
        100.0 * rel
    );
    pass(
        4,
        &format!("tight-binding error {worst:.2e} <= 3χ²|J|, coalescence within {:.3}%", 100.0 * rel),
    );
}

/// Criterion 5: transfer-matrix Green's function against the analytic
/// anchors.
#[test]
fn criterion_5_transfer_matrix_validation() {
    use std::f64::consts::TAU;
    let vacuum = LayeredStack {
        slabs: vec![],
        outer_permittivity: C64::new(1.0, 0.0),
        mode_area: 1.0,
        gamma_ref: 1.0,
        omega: 1.0,
    };
    let solution = vacuum.solution().unwrap();
    let k = TAU;
    for &(x, xp) in &[(0.0, 0.73), (-1.3, 2.2), (0.5, 0.5), (4.0, -4.0)] {
        let g = solution.reduced_green(x, xp).unwrap();
        let expected = IM * (IM * k * (x - xp).abs()).exp() / (2.0 * k);
        assert!(
            (g - expected).norm() <= 1e-10 * expected.norm(),
            "criterion 5: FAIL — vacuum G({x},{xp}) = {g} vs {expected}"
        );
    }

    // random five-slab stack: Wronskian constancy and reciprocity
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..5 {
        let slabs = (0..5)
            .map(|_| Slab {
                thickness: rng.gen_range(0.05..0.5),
                permittivity: C64::new(rng.gen_range(0.5..5.0), rng.gen_range(0.0..0.3)),
            })
            .collect();
        let stack = LayeredStack {
            slabs,
            ..vacuum.clone()
        };
        let sol = stack.solution().unwrap();
        let spread = sol.wronskian_spread();
        assert!(
            spread < 1e-10,
            "criterion 5: FAIL — Wronskian spread {spread}"
        );
        let total = stack.total_thickness();
        for _ in 0..6 {
            let x = rng.gen_range(-0.5..total + 0.5);
            let xp = rng.gen_range(-0.5..total + 0.5);
            let gij = sol.reduced_green(x, xp).unwrap();
            let gji = sol.reduced_green(xp, x).unwrap();
            assert!(
                (gij - gji).norm() <= 1e-12 * gij.norm(),
                "criterion 5: FAIL — reciprocity at ({x},{xp})"
            );
        }
    }

    // thin-mirror cavity vs the resummed image expansion with the mirror
    // reflection coefficient extracted from its own scattering amplitudes
    let mirror = Slab {
        thickness: 0.05,
        permittivity: C64::new(25.0, 0.0),
    };
    let gap = 1.0;
    let cavity = LayeredStack {
        slabs: vec![
            mirror.clone(),
            Slab {
                thickness: gap,
                permittivity: C64::new(1.0, 0.0),
            },
            mirror.clone(),
        ],
        ..vacuum.clone()
    };
    let single = LayeredStack {
        slabs: vec![mirror],
        ..vacuum.clone()
    };
    let (rho, _) = single.solution().unwrap().scattering().unwrap();
    let sol = cavity.solution().unwrap();
    let inner = 0.05;
    let mut worst: f64 = 0.0;
    for i in 0..12 {
        for j in 0..12 {
            let x = inner + gap * (0.04 + 0.92 * i as f64 / 11.0);
            let xp = inner + gap * (0.04 + 0.92 * j as f64 / 11.0);
            let (u, v) = (x - inner, xp - inner);
            let phase = |arg: f64| (IM * k * arg).exp();
            let numerator = phase((u - v).abs())
                + rho * phase(u + v)
                + rho * phase(2.0 * gap - (u + v))
                + rho * rho * phase(2.0 * gap - (u - v).abs());
            let expected = IM / (2.0 * k) * numerator / (1.0 - rho * rho * phase(2.0 * gap));
            let g = sol.reduced_green(x, xp).unwrap();
            worst = worst.max((g - expected).norm() / expected.norm());
        }
    }
    assert!(
        worst <= 1e-6,
        "criterion 5: FAIL — cavity interior mismatch {worst}"
    );
    pass(
        5,
        &format!("vacuum/Wronskian/reciprocity anchors hold; cavity interior matches image sum to {worst:.2e}"),
    );
}

/// Criterion 6: two-atom bandgap exchange against the closed form, and the
/// slot-PCW projection showing several exchange cycles before decay.
#[test]
fn criterion_6_dynamics_oracle() {
    use quasi1d::greens::BandgapModel;
    // closed-form oracle
    let (j_max, kappa_x, d, gamma_prime) = (-3.0, 1.0 / 80.0, 2.0, 0.5);
    let model = ReservoirModel::Bandgap(BandgapModel {
        j_max,
        kappa_x,
        residual_gamma: 0.0,
    });
    let chain = EmitterChain::new(vec![0.0, d], gamma_prime).unwrap();
    let matrix = build_coupling_matrix(&chain, &model).unwrap();
    let j12 = j_max * (-kappa_x * d).exp();
    let times = time_grid(10.0 / gamma_prime, 1000);
    let mut c0 = Array1::zeros(2);
    c0[0] = C64::new(1.0, 0.0);
    let trace = evolve(&matrix, gamma_prime, 0.0, &c0, &times).unwrap();
    let mut worst: f64 = 0.0;
    for (k, &t) in times.iter().enumerate() {
        let damp = (-gamma_prime * t).exp();
        worst = worst.max((trace.populations[(k, 0)] - damp * (j12 * t).cos().powi(2)).abs());
        worst = worst.max((trace.populations[(k, 1)] - damp * (j12 * t).sin().powi(2)).abs());
    }
    assert!(
        worst <= 1e-8,
        "criterion 6: FAIL — closed-form deviation {worst}"
    );

    // slot-PCW projection preset (adds the residual guided decay)
    let runs = expand_preset("fig4b").unwrap();
    let config = &runs[0].1;
    let pcw_model = config.model.build().unwrap();
    let pcw_chain = config.chain.build().unwrap();
    let pcw_matrix = build_coupling_matrix(&pcw_chain, &pcw_model).unwrap();
    let times = time_grid(16.0, 2000);
    let trace = evolve(&pcw_matrix, 0.5, 0.0, &c0, &times).unwrap();
    let below = trace
        .total
        .iter()
        .position(|&p| p < 0.1)
        .expect("population decays below 0.1");
    let t_below = times[below];
    let peaks = population_maxima(&trace, 1);
    let early: Vec<_> = peaks.iter().filter(|(t, _)| *t < t_below).collect();
    assert!(
        early.len() >= 3,
        "criterion 6: FAIL — only {} exchange maxima before total < 0.1",
        early.len()
    );
    let spacings: Vec<f64> = peaks.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    let measured = std::f64::consts::TAU / mean;
    let expected = 2.0 * pcw_matrix.entries()[(0, 1)].re.abs();
    let rel = (measured - expected).abs() / expected;
    assert!(
        rel <= 0.01,
        "criterion 6: FAIL — exchange frequency {measured} vs {expected} ({:.3}%)",
        100.0 * rel
    );
    pass(
        6,
        &format!(
            "closed form to {worst:.1e}; {} maxima before decay, exchange frequency within {:.3}%",
            early.len(),
            100.0 * rel
        ),
    );
}

/// Criterion 7: EIT transparency, dispersion oracle, group velocity, and
/// parity-split closed forms.
#[test]
fn criterion_7_eit() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // exact transparency for 50 random geometries
    for _ in 0..50 {
        let n = rng.gen_range(1..=8);
        let positions: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let gamma_prime = rng.gen_range(0.2..2.0);
        let chain = EmitterChain::new(positions, gamma_prime).unwrap();
        let model = waveguide(rng.gen_range(0.2..3.0));
        let matrix = build_coupling_matrix(&chain, &model).unwrap();
        let modes = decompose(&matrix).unwrap();
        let omega_c = rng.gen_range(0.5..2.0);
        let t = eit_transmission(&[0.0], &modes.eigenvalues, gamma_prime, omega_c)
            .unwrap()
            .t_over_t0[0];
        assert!(
            (t.norm() - 1.0).abs() <= 1e-12,
            "criterion 7: FAIL — |t(0)| = {} for N = {n}",
            t.norm()
        );
    }

    // log-derivative oracle: residual against the cubic series scales as Δ⁴
    let (n, d, gamma_prime, omega_c) = (5, 0.25, 1.0, 1.0);
    let chain = EmitterChain::regular(n, 0.0, d, gamma_prime).unwrap();
    let model = waveguide(0.5);
    let matrix = build_coupling_matrix(&chain, &model).unwrap();
    let modes = decompose(&matrix).unwrap();
    let series = keff_series(&matrix, gamma_prime, omega_c, d).unwrap();
    let deltas: Vec<f64> = (0..15)
        .map(|i| 1e-3 * 10.0_f64.powf(2.0 * i as f64 / 14.0))
        .collect();
    let residuals: Vec<f64> = deltas
        .iter()
        .map(|&delta| {
            let table =
                eit_transmission(&[delta], &modes.eigenvalues, gamma_prime, omega_c).unwrap();
            let k = keff_from_transmission(&table, n, d)[0];
            (k - series.eval(delta)).norm()
        })
        .collect();
    let logx: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let logy: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let exponent = fit_slope(&logx, &logy);
    assert!(
        (exponent - 4.0).abs() <= 0.2,
        "criterion 7: FAIL — fitted residual exponent {exponent}"
    );

    // group velocity from the series linear term
    let vg_series = series.group_velocity();
    let vg_closed = group_velocity(omega_c, d, 0.5).unwrap();
    assert!(
        (vg_series - vg_closed).abs() <= 1e-10 * vg_closed,
        "criterion 7: FAIL — v_g {vg_series} vs {vg_closed}"
    );

    // parity branches against the trace series, N = 2..7
    let (gamma_1d, gp, oc, dq) = (0.9, 1.1, 1.3, 0.25);
    for n in 2..=7 {
        let chain = EmitterChain::regular(n, 0.0, dq, gp).unwrap();
        let matrix = build_coupling_matrix(&chain, &waveguide(gamma_1d)).unwrap();
        let series = keff_series(&matrix, gp, oc, dq).unwrap();
        let closed =
            keff_closed_form(n, gamma_1d, gp, oc, dq, SpacingConfiguration::QuarterWave)
                .unwrap();
        for (cs, cc, name) in [
            (series.c1, closed.c1, "c1"),
            (series.c2, closed.c2, "c2"),
            (series.c3, closed.c3, "c3"),
        ] {
            assert!(
                (cs - cc).norm() <= 1e-9,
                "criterion 7: FAIL — {name} mismatch for N = {n}: {cs} vs {cc}"
            );
        }
    }
    pass(
        7,
        &format!("transparency exact, residual exponent {exponent:.3}, v_g and parity branches match"),
    );
}

/// Criterion 8: colored-cavity (non-Markovian) spectra. The dressed
/// collective resonances of the narrow cavity sit at ±√N·g0 with
/// g0 = √(Γ_1D κ_c)/2, split symmetrically around a central anti-resonance
/// at Δ_A = 0; the broad cavity reproduces the Markovian curve.
#[test]
fn criterion_8_nonmarkov_cavity() {
    let gamma_prime = 1.0;
    let n = 10;
    let chain = EmitterChain::regular(n, 0.0, 2.0, gamma_prime).unwrap();

    let cavity = |kappa_c: f64| {
        // Γ_1D = Γ' at the atomic line (resonant cavity)
        let g0 = (0.25 * kappa_c * kappa_c / kappa_c).sqrt();
        ReservoirModel::Tabulated(TabulatedCoupling {
            rule: FrequencyRule::CavityLorentzian {
                g0,
                kappa_c,
                delta_c: 0.0,
            },
            profile: SpatialProfile::Uniform,
        })
    };

    // narrow cavity: Rabi-split response
    let kappa_c = 0.2;
    let narrow = cavity(kappa_c);
    let g0 = (1.0_f64 * kappa_c).sqrt() / 2.0;
    let predicted = (n as f64).sqrt() * g0;
    // collective response denominator |Δ + iΓ'/2 + λ_B(Δ)|: its minima are
    // the dressed resonances, its central maximum the anti-resonance
    let response_denominator = |delta: f64| {
        let lambda = nonmarkov_eigenvalues(&chain, &narrow, delta).unwrap()[0];
        (C64::new(delta, 0.5 * gamma_prime) + lambda).norm()
    };
    let probe: Vec<f64> = (0..4001).map(|i| 0.05 + 1.95 * i as f64 / 4000.0).collect();
    let dplus: Vec<f64> = probe.iter().map(|&x| response_denominator(x)).collect();
    let resonance_plus = refined_argmin(&probe, &dplus);
    let probe_neg: Vec<f64> = probe.iter().map(|&x| -x).collect();
    let dminus: Vec<f64> = probe_neg.iter().map(|&x| response_denominator(x)).collect();
    let resonance_minus = refined_argmin(&probe_neg, &dminus);
    let rel_plus = (resonance_plus - predicted).abs() / predicted;
    let rel_minus = (resonance_minus + predicted).abs() / predicted;
    assert!(
        rel_plus <= 0.05 && rel_minus <= 0.05,
        "criterion 8: FAIL — resonances at {resonance_minus:.4}/{resonance_plus:.4} vs ±{predicted:.4}"
    );
    // two dips flanking a local maximum at Δ_A = 0
    let center = response_denominator(0.0);
    for delta in [0.05, 0.2, resonance_plus] {
        assert!(
            response_denominator(delta) < center && response_denominator(-delta) < center,
            "criterion 8: FAIL — no central maximum (D(0) = {center})"
        );
    }
    let split_floor = dplus.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(
        split_floor < 0.2 * center,
        "criterion 8: FAIL — splitting too shallow"
    );

    // broad cavity: Markovian to < 1% pointwise on the Fig.-5 grid
    let broad = cavity(1000.0);
    let grid = linear_grid(3.0, 2001);
    let spectra = nonmarkov_spectrum(&grid, &chain, &broad, gamma_prime).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..grid.len() {
        let (a, b) = (
            spectra.nonmarkov.transmittance()[i],
            spectra.markov.transmittance()[i],
        );
        worst = worst.max((a - b).abs() / b.max(1e-12));
    }
    assert!(
        worst < 0.01,
        "criterion 8: FAIL — broad-cavity deviation {worst}"
    );
    pass(
        8,
        &format!(
            "Rabi-split resonances at {resonance_minus:.3}/{resonance_plus:.3} (±{predicted:.3} predicted, {:.1}%/{:.1}%), central anti-resonance, broad cavity Markovian to {worst:.2e}",
            100.0 * rel_minus, 100.0 * rel_plus
        ),
    );
}

/// Criterion 9: Beer-Lambert law of the non-interacting ensemble.
#[test]
fn criterion_9_beer_lambert() {
    let (n, gamma_1d, gamma_prime) = (20, 0.05, 1.0);
    let bl = beer_lambert(&[0.0], n, gamma_1d, gamma_prime).unwrap();
    let exact_expected = ((gamma_prime + gamma_1d) / gamma_prime).powi(-2 * n as i32);
    assert!(
        (bl.exact[0] - exact_expected).abs() <= 1e-12,
        "criterion 9: FAIL — exact resonant T {} vs {exact_expected}",
        bl.exact[0]
    );
    let od_form = (-bl.optical_depth).exp();
    let rel = (bl.exact[0] - od_form).abs() / od_form;
    assert!(
        rel <= 0.05,
        "criterion 9: FAIL — e^-OD deviates by {:.2}%",
        100.0 * rel
    );
    // the non-interacting product reproduces the exact form
    let chain = EmitterChain::new(
        (0..n).map(|i| 0.37 * i as f64).collect(),
        gamma_prime,
    )
    .unwrap();
    let matrix = build_coupling_matrix(&chain, &waveguide(gamma_1d))
        .unwrap()
        .non_interacting();
    let modes = decompose(&matrix).unwrap();
    let product = transmission_product(&[0.0], &modes.eigenvalues, gamma_prime).unwrap();
    assert!(
        (product.transmittance()[0] - bl.exact[0]).abs() <= 1e-12,
        "criterion 9: FAIL — product form {} vs exact {}",
        product.transmittance()[0],
        bl.exact[0]
    );
    pass(
        9,
        &format!(
            "resonant T = {:.6e} exact, e^-OD within {:.2}%",
            bl.exact[0],
            100.0 * rel
        ),
    );
}

/// Criterion 10: seeded scenarios are byte-deterministic.
#[test]
fn criterion_10_determinism() {
    use quasi1d::scenario::run_scenario;
    let runs = expand_preset("fig3").unwrap();
    let (label, config) = &runs[5]; // a random realization
    let base = std::env::temp_dir().join(format!("quasi1d_acceptance_{}", std::process::id()));
    let (dir_a, dir_b) = (base.join("a"), base.join("b"));
    let _ = std::fs::remove_dir_all(&base);
    let report_a = run_scenario(config, &dir_a, label).unwrap();
    let report_b = run_scenario(config, &dir_b, label).unwrap();
    assert_eq!(report_a.config_hash, report_b.config_hash);
    for out in &report_a.outputs {
        let name = out.file_name().unwrap();
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(
            a, b,
            "criterion 10: FAIL — {} differs between reruns",
            name.to_string_lossy()
        );
    }
    let _ = std::fs::remove_dir_all(&base);
    pass(
        10,
        &format!(
            "rerun of seeded scenario `{label}` byte-identical across {} files",
            report_a.outputs.len()
        ),
    );
}
