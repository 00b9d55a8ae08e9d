//! Three-level Λ response under a classical control field: EIT transmission,
//! the complex polaritonic wavevector k_eff, and the slow-light group
//! velocity.
//!
//! The two-photon detuning is locked to the probe detuning (Δ_s = Δ_A), so
//! transparency is exact at Δ_A = 0. Each two-level transmission factor
//! generalizes to
//!
//! ```text
//! t_ξ = [Δ_A(Δ_A + iΓ'/2) - Ω_c²] / [Δ_A(Δ_A + iΓ'/2 + λ_ξ) - Ω_c²]
//! ```
//!
//! and t_EIT/t₀ = e^{i k_eff N d} defines the dispersion, expanded here to
//! third order in Δ_A with coefficients built from Tr g^β (β = 1, 2, 3).

use crate::collective::CouplingMatrix;
use crate::spectra::SpectrumTable;
use crate::{Error, Result, C64, IM};

/// Λ-system drive parameters. The |s⟩ state is treated as infinitely
/// long-lived and the control field as uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EitParameters {
    /// Control Rabi frequency Ω_c (real, > 0).
    pub omega_c: f64,
    /// Atom spacing d in units of the probe wavelength.
    pub spacing: f64,
}

impl EitParameters {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c > 0.0) {
            return Err(Error::config(
                "eit.omega_c",
                "control Rabi frequency must be positive",
            ));
        }
        if !(self.spacing > 0.0) {
            return Err(Error::config("eit.spacing", "spacing must be positive"));
        }
        Ok(())
    }
}

/// Steady state of the Λ chain for a general two-photon detuning Δ_s:
/// the metastable coherence follows σ_gs = -(Ω_c/Δ_s) σ_ge, and the optical
/// coherences solve
///
/// ```text
/// [(Δ_A + iΓ'/2 - Ω_c²/Δ_s)𝟙 + g] σ⃗_ge = -Ω⃗.
/// ```
///
/// At exact two-photon resonance (Δ_s = 0) the dark state carries the whole
/// response: σ_ge = 0 and σ_gs = -Ω/Ω_c. The product transmission below
/// assumes the locked convention Δ_s = Δ_A.
pub fn eit_steady_state(
    matrix: &crate::collective::CouplingMatrix,
    gamma_prime: f64,
    delta_a: f64,
    delta_s: f64,
    omega_c: f64,
    drive: &crate::spectra::DriveProfile,
) -> Result<(ndarray::Array1<C64>, ndarray::Array1<C64>)> {
    use crate::linalg::try_solve;
    let omega = drive.as_array();
    if delta_s == 0.0 {
        let sigma_ge = ndarray::Array1::zeros(matrix.n());
        let sigma_gs = omega.mapv(|o| -o / omega_c);
        return Ok((sigma_ge, sigma_gs));
    }
    let z = C64::new(delta_a, 0.5 * gamma_prime) - omega_c * omega_c / delta_s;
    let mut m = matrix.entries().clone();
    for i in 0..matrix.n() {
        m[(i, i)] += z;
    }
    let sigma_ge = -try_solve(&m, &omega).ok_or(Error::Pole { delta: delta_a })?;
    let sigma_gs = sigma_ge.mapv(|s| -omega_c / delta_s * s);
    Ok((sigma_ge, sigma_gs))
}

/// Product-form EIT transmission over the collective eigenvalues.
pub fn eit_transmission(
    grid: &[f64],
    eigenvalues: &[C64],
    gamma_prime: f64,
    omega_c: f64,
) -> Result<SpectrumTable> {
    let om2 = omega_c * omega_c;
    let t = grid
        .iter()
        .map(|&delta| {
            let z = C64::new(delta, 0.5 * gamma_prime);
            let numerator = delta * z - om2;
            let mut acc = C64::new(1.0, 0.0);
            for l in eigenvalues {
                let denom = delta * (z + l) - om2;
                if denom.norm() == 0.0 {
                    return Err(Error::Pole { delta });
                }
                acc *= numerator / denom;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable {
        delta: grid.to_vec(),
        t_over_t0: t,
        reflection: None,
    })
}

/// Cubic-in-Δ_A expansion of the polaritonic wavevector,
/// k_eff = c₁Δ + c₂Δ² + c₃Δ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeffSeries {
    pub c1: C64,
    pub c2: C64,
    pub c3: C64,
    pub n: usize,
    pub spacing: f64,
}

impl KeffSeries {
    pub fn eval(&self, delta_a: f64) -> C64 {
        ((self.c3 * delta_a + self.c2) * delta_a + self.c1) * delta_a
    }

    /// Group velocity at zero detuning, 1/Re(dk_eff/dΔ) = 1/Re c₁, in units
    /// of (reference rate) × λ_p.
    pub fn group_velocity(&self) -> f64 {
        1.0 / self.c1.re
    }
}

/// Dispersion coefficients from the coupling matrix: with T_β = Tr g^β,
///
/// ```text
/// k_eff = -(i/Nd) { T₁ Δ/Ω² + (T₂ + iΓ'T₁) Δ²/(2Ω⁴)
///                   + [(12Ω² - 3Γ'²)T₁ + 6iΓ'T₂ + 4T₃] Δ³/(12Ω⁶) }
/// ```
pub fn keff_series(
    matrix: &CouplingMatrix,
    gamma_prime: f64,
    omega_c: f64,
    spacing: f64,
) -> Result<KeffSeries> {
    if !(omega_c > 0.0) {
        return Err(Error::config(
            "eit.omega_c",
            "control Rabi frequency must be positive",
        ));
    }
    let n = matrix.n();
    let nd = n as f64 * spacing;
    let (t1, t2, t3) = (
        matrix.power_trace(1),
        matrix.power_trace(2),
        matrix.power_trace(3),
    );
    let om2 = omega_c * omega_c;
    let ig = IM * gamma_prime;
    let pref = -IM / nd;
    Ok(KeffSeries {
        c1: pref * t1 / om2,
        c2: pref * (t2 + ig * t1) / (2.0 * om2 * om2),
        c3: pref * ((12.0 * om2 - 3.0 * gamma_prime * gamma_prime) * t1 + 6.0 * ig * t2
            + 4.0 * t3)
            / (12.0 * om2 * om2 * om2),
        n,
        spacing,
    })
}

/// Regular-spacing configurations with closed-form dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingConfiguration {
    /// k_p d = nπ (d a multiple of λ_p/2): single bright mode.
    Mirror,
    /// k_p d an odd multiple of π/2 (d an odd multiple of λ_p/4).
    QuarterWave,
}

/// Printed closed forms of the dispersion coefficients for the mirror and
/// quarter-wave spacings (the latter split by the parity of N).
pub fn keff_closed_form(
    n: usize,
    gamma_1d: f64,
    gamma_prime: f64,
    omega_c: f64,
    spacing: f64,
    configuration: SpacingConfiguration,
) -> Result<KeffSeries> {
    if !(omega_c > 0.0) {
        return Err(Error::config(
            "eit.omega_c",
            "control Rabi frequency must be positive",
        ));
    }
    let half_waves = spacing / 0.5;
    let quarter_waves = spacing / 0.25;
    match configuration {
        SpacingConfiguration::Mirror => {
            if (half_waves - half_waves.round()).abs() > 1e-9 || half_waves < 0.5 {
                return Err(Error::config(
                    "eit.spacing",
                    format!("mirror configuration needs d = n·λ_p/2, got {spacing}"),
                ));
            }
        }
        SpacingConfiguration::QuarterWave => {
            let odd = quarter_waves.round() as i64;
            if (quarter_waves - quarter_waves.round()).abs() > 1e-9 || odd % 2 == 0 {
                return Err(Error::config(
                    "eit.spacing",
                    format!("quarter-wave configuration needs d = odd·λ_p/4, got {spacing}"),
                ));
            }
        }
    }
    let (g, gp, d) = (gamma_1d, gamma_prime, spacing);
    let om2 = omega_c * omega_c;
    let (om4, om6) = (om2 * om2, om2 * om2 * om2);
    let nf = n as f64;
    let c1 = C64::new(g / (2.0 * d * om2), 0.0);
    let (c2, c3) = match configuration {
        SpacingConfiguration::Mirror => (
            IM * g * (2.0 * gp + nf * g) / (8.0 * d * om4),
            C64::new(
                g * (12.0 * om2 - 3.0 * nf * g * gp - nf * nf * g * g - 3.0 * gp * gp)
                    / (24.0 * d * om6),
                0.0,
            ),
        ),
        SpacingConfiguration::QuarterWave if n % 2 == 0 => (
            IM * g * gp / (4.0 * d * om4),
            C64::new(
                g * (12.0 * om2 + 2.0 * g * g - 3.0 * gp * gp) / (24.0 * d * om6),
                0.0,
            ),
        ),
        SpacingConfiguration::QuarterWave => (
            IM * g * (2.0 * gp + g / nf) / (8.0 * d * om4),
            C64::new(
                g * (12.0 * om2 - g * g - 3.0 * gp * gp - 3.0 * g * gp / nf)
                    / (24.0 * d * om6),
                0.0,
            ),
        ),
    };
    Ok(KeffSeries {
        c1,
        c2,
        c3,
        n,
        spacing,
    })
}

/// Slow-light group velocity at zero detuning, v_g = 2Ω_c² d / Γ_1D,
/// independent of the spacing configuration.
pub fn group_velocity(omega_c: f64, spacing: f64, gamma_1d: f64) -> Result<f64> {
    if !(gamma_1d > 0.0) {
        return Err(Error::config("eit.gamma_1d", "must be a positive rate"));
    }
    Ok(2.0 * omega_c * omega_c * spacing / gamma_1d)
}

/// k_eff from a transmission spectrum through t/t₀ = e^{i k_eff N d}, using
/// the principal log with phase continuity enforced outward from Δ_A = 0.
pub fn keff_from_transmission(table: &SpectrumTable, n: usize, spacing: f64) -> Vec<C64> {
    let nd = n as f64 * spacing;
    let mut phases: Vec<f64> = table.t_over_t0.iter().map(|t| t.arg()).collect();
    // anchor at the grid point closest to resonance, where t/t₀ = 1
    let anchor = table
        .delta
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    unwrap_phases(&mut phases, anchor);
    table
        .t_over_t0
        .iter()
        .zip(phases.iter())
        .map(|(t, &phi)| -IM * C64::new(t.norm().ln(), phi) / nd)
        .collect()
}

fn unwrap_phases(phases: &mut [f64], anchor: usize) {
    use std::f64::consts::{PI, TAU};
    for i in (anchor + 1)..phases.len() {
        let mut d = phases[i] - phases[i - 1];
        while d > PI {
            phases[i] -= TAU;
            d = phases[i] - phases[i - 1];
        }
        while d < -PI {
            phases[i] += TAU;
            d = phases[i] - phases[i - 1];
        }
    }
    for i in (0..anchor).rev() {
        let mut d = phases[i] - phases[i + 1];
        while d > PI {
            phases[i] -= TAU;
            d = phases[i] - phases[i + 1];
        }
        while d < -PI {
            phases[i] += TAU;
            d = phases[i] - phases[i + 1];
        }
    }
}
