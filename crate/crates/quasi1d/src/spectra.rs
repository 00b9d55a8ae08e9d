//! Steady-state coherences, field profiles, and transmission/reflection
//! spectra.
//!
//! The probe enters through a source dipole at the left port x_L (fields are
//! normalized to the probe amplitude there), and all observables reduce to
//! resolvent elements of M = (Δ_A + iΓ'/2)𝟙 + g:
//!
//! ```text
//! t/t₀ = 1 - g⃗(x_R)^T M⁻¹ g⃗(x_L) / g(x_R, x_L)
//! r    = r₀ - g⃗(x_L)^T M⁻¹ g⃗(x_L) / g(x_L, x_L)
//! ```
//!
//! The transmission also admits the exact eigenvalue-product form
//! t/t₀ = Π_ξ (Δ_A + iΓ'/2) / (Δ_A + iΓ'/2 + λ_ξ), used here both as an
//! analysis tool and as an independent route for cross-checking the direct
//! solve (the two agree by the matrix determinant lemma).

use ndarray::{Array1, Array2};
use rayon::prelude::*;

use crate::collective::{
    build_coupling_matrix_at, CouplingMatrix, EmitterChain, ModeDecomposition,
};
use crate::greens::ReservoirModel;
use crate::linalg::{bilinear, try_solve};
use crate::{Error, Result, C64};

/// Guided-mode Rabi frequencies Ω_i at the atoms (units of the reference
/// rate, normalized to the probe amplitude at the left port).
#[derive(Debug, Clone, PartialEq)]
pub struct DriveProfile(pub Vec<C64>);

impl DriveProfile {
    pub fn uniform(n: usize) -> Self {
        DriveProfile(vec![C64::new(1.0, 0.0); n])
    }

    pub fn explicit(omegas: Vec<C64>) -> Self {
        DriveProfile(omegas)
    }

    /// Probe launched from a source dipole at the left port:
    /// Ω_j = g(x_j, x_L) / g(x_L, x_L).
    pub fn left_probe(chain: &EmitterChain, model: &ReservoirModel) -> Result<Self> {
        let (lo, hi) = chain.span();
        let (x_left, _) = model.probe_ports(lo, hi)?;
        let g_ll = model.coupling(x_left, x_left)?;
        let omegas = chain
            .positions()
            .iter()
            .map(|&x| Ok(model.coupling(x, x_left)? / g_ll))
            .collect::<Result<Vec<_>>>()?;
        Ok(DriveProfile(omegas))
    }

    pub fn as_array(&self) -> Array1<C64> {
        Array1::from_vec(self.0.clone())
    }
}

/// M = (Δ_A + iΓ'/2)𝟙 + g.
pub fn response_matrix(matrix: &CouplingMatrix, gamma_prime: f64, delta_a: f64) -> Array2<C64> {
    let z = C64::new(delta_a, 0.5 * gamma_prime);
    let mut m = matrix.entries().clone();
    for i in 0..matrix.n() {
        m[(i, i)] += z;
    }
    m
}

/// Steady state σ⃗ = -M⁻¹ Ω⃗ (direct linear solve, robust at exceptional
/// points).
pub fn steady_state_coherences(
    matrix: &CouplingMatrix,
    gamma_prime: f64,
    delta_a: f64,
    drive: &DriveProfile,
) -> Result<Array1<C64>> {
    let m = response_matrix(matrix, gamma_prime, delta_a);
    let omega = drive.as_array();
    let x = try_solve(&m, &omega).ok_or(Error::Pole { delta: delta_a })?;
    Ok(-x)
}

/// Steady state through the eigenmode expansion
/// σ⃗ = -Σ_ξ (v_ξ^T Ω⃗) v_ξ / (Δ_A + iΓ'/2 + λ_ξ); analysis path that must
/// agree with the direct solve wherever the decomposition exists.
pub fn steady_state_eigenmode(
    modes: &ModeDecomposition,
    gamma_prime: f64,
    delta_a: f64,
    drive: &DriveProfile,
) -> Result<Array1<C64>> {
    let z = C64::new(delta_a, 0.5 * gamma_prime);
    let omega = drive.as_array();
    let n = modes.n();
    let mut sigma = Array1::<C64>::zeros(n);
    for xi in 0..n {
        let v = modes.eigenvector(xi);
        let denom = z + modes.eigenvalues[xi];
        if denom.norm() == 0.0 {
            return Err(Error::Pole { delta: delta_a });
        }
        let weight = bilinear(&v, &omega) / denom;
        sigma.zip_mut_with(&v, |s, vv| *s -= weight * vv);
    }
    Ok(sigma)
}

/// Total field at x: probe plus the atomic re-scattering,
/// E(x) = E_p(x) + Σ_j g(x, x_j) σ_j, in units of the probe amplitude at the
/// left port. For reservoirs without a propagating channel the probe term is
/// absent and the (evanescent) scattered field is returned.
pub fn field_profile(
    x: f64,
    sigma: &Array1<C64>,
    chain: &EmitterChain,
    model: &ReservoirModel,
) -> Result<C64> {
    let probe = if model.supports_propagation() {
        let (lo, hi) = chain.span();
        let (x_left, _) = model.probe_ports(lo, hi)?;
        model.coupling(x, x_left)? / model.coupling(x_left, x_left)?
    } else {
        C64::new(0.0, 0.0)
    };
    let mut field = probe;
    for (j, &xj) in chain.positions().iter().enumerate() {
        field += model.coupling(x, xj)? * sigma[j];
    }
    Ok(field)
}

/// Frequency-gridded spectrum. `t_over_t0` is always present; `reflection`
/// only when the model supplies a background r₀ (propagating reservoirs).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub delta: Vec<f64>,
    pub t_over_t0: Vec<C64>,
    pub reflection: Option<Vec<C64>>,
}

impl SpectrumTable {
    pub fn transmittance(&self) -> Vec<f64> {
        self.t_over_t0.iter().map(|t| t.norm_sqr()).collect()
    }

    pub fn reflectance(&self) -> Option<Vec<f64>> {
        self.reflection
            .as_ref()
            .map(|r| r.iter().map(|z| z.norm_sqr()).collect())
    }
}

/// Default detuning grid: 2001 points spanning ±10 half-linewidths of the
/// broadest feature, (Γ' + max_ξ Γ_ξ)/2.
pub fn default_detuning_grid(gamma_prime: f64, max_mode_rate: f64) -> Vec<f64> {
    linear_grid(10.0 * 0.5 * (gamma_prime + max_mode_rate), 2001)
}

pub fn linear_grid(half_width: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect()
}

/// Probe-port geometry and the g-vectors entering the transmission and
/// reflection formulas.
struct PortCouplings {
    g_left: Array1<C64>,
    g_right: Array1<C64>,
    g_rl: C64,
    g_ll: C64,
    r0: C64,
}

fn port_couplings(chain: &EmitterChain, model: &ReservoirModel) -> Result<PortCouplings> {
    let (lo, hi) = chain.span();
    let (x_left, x_right) = model.probe_ports(lo, hi)?;
    let xs = chain.positions();
    let g_left = xs
        .iter()
        .map(|&x| model.coupling(x, x_left))
        .collect::<Result<Vec<_>>>()?;
    let g_right = xs
        .iter()
        .map(|&x| model.coupling(x, x_right))
        .collect::<Result<Vec<_>>>()?;
    Ok(PortCouplings {
        g_left: Array1::from_vec(g_left),
        g_right: Array1::from_vec(g_right),
        g_rl: model.coupling(x_right, x_left)?,
        g_ll: model.coupling(x_left, x_left)?,
        r0: model.background_reflection(x_left)?,
    })
}

/// Transmission and reflection by direct solve at every grid point.
pub fn transmission_reflection(
    grid: &[f64],
    matrix: &CouplingMatrix,
    gamma_prime: f64,
    chain: &EmitterChain,
    model: &ReservoirModel,
) -> Result<SpectrumTable> {
    let ports = port_couplings(chain, model)?;
    let pairs: Vec<(C64, C64)> = grid
        .par_iter()
        .map(|&delta| {
            let m = response_matrix(matrix, gamma_prime, delta);
            let x = try_solve(&m, &ports.g_left).ok_or(Error::Pole { delta })?;
            let t = 1.0 - bilinear(&ports.g_right, &x) / ports.g_rl;
            let r = ports.r0 - bilinear(&ports.g_left, &x) / ports.g_ll;
            Ok((t, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable {
        delta: grid.to_vec(),
        t_over_t0: pairs.iter().map(|p| p.0).collect(),
        reflection: Some(pairs.iter().map(|p| p.1).collect()),
    })
}

/// Transmission by direct solve; see `transmission_reflection`.
pub fn transmission(
    grid: &[f64],
    matrix: &CouplingMatrix,
    gamma_prime: f64,
    chain: &EmitterChain,
    model: &ReservoirModel,
) -> Result<SpectrumTable> {
    transmission_reflection(grid, matrix, gamma_prime, chain, model)
}

/// Transmission as an explicit sum over collective modes; cross-check path
/// for the direct solve.
pub fn transmission_eigenmode(
    grid: &[f64],
    modes: &ModeDecomposition,
    gamma_prime: f64,
    chain: &EmitterChain,
    model: &ReservoirModel,
) -> Result<SpectrumTable> {
    let ports = port_couplings(chain, model)?;
    let n = modes.n();
    let weights: Vec<C64> = (0..n)
        .map(|xi| {
            let v = modes.eigenvector(xi);
            bilinear(&ports.g_right, &v) * bilinear(&v, &ports.g_left) / ports.g_rl
        })
        .collect();
    let t: Vec<C64> = grid
        .iter()
        .map(|&delta| {
            let z = C64::new(delta, 0.5 * gamma_prime);
            let mut acc = C64::new(1.0, 0.0);
            for xi in 0..n {
                let denom = z + modes.eigenvalues[xi];
                if denom.norm() == 0.0 {
                    return Err(Error::Pole { delta });
                }
                acc -= weights[xi] / denom;
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

/// Product-form transmission over the collective eigenvalues:
/// t/t₀ = Π_ξ (Δ_A + iΓ'/2) / (Δ_A + iΓ'/2 + λ_ξ). Only eigenvalues enter,
/// so this path stays usable arbitrarily close to exceptional points.
pub fn transmission_product(
    grid: &[f64],
    eigenvalues: &[C64],
    gamma_prime: f64,
) -> Result<SpectrumTable> {
    let t = grid
        .par_iter()
        .map(|&delta| product_point(delta, eigenvalues, gamma_prime))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable {
        delta: grid.to_vec(),
        t_over_t0: t,
        reflection: None,
    })
}

fn product_point(delta: f64, eigenvalues: &[C64], gamma_prime: f64) -> Result<C64> {
    let z = C64::new(delta, 0.5 * gamma_prime);
    let mut acc = C64::new(1.0, 0.0);
    for l in eigenvalues {
        let denom = z + l;
        if denom.norm() == 0.0 {
            return Err(Error::Pole { delta });
        }
        acc *= z / denom;
    }
    Ok(acc)
}

/// Fano parameterization of the single-atom transmittance,
///
/// ```text
/// T/T₀ = (q + χ)²/(1 + χ²) + (Γ'/(Γ'+Γ_1D))²/(1 + χ²),
/// χ = 2(Δ_A + J_1D)/(Γ_1D + Γ'),  q = -2 J_1D/(Γ_1D + Γ')
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoParameters {
    pub q: f64,
    pub background_weight: f64,
    pub j_1d: f64,
    pub gamma_1d: f64,
    pub gamma_prime: f64,
}

pub fn fano(j_1d: f64, gamma_1d: f64, gamma_prime: f64) -> Result<FanoParameters> {
    let width = gamma_1d + gamma_prime;
    if !(width > 0.0) {
        return Err(Error::config(
            "fano",
            "Γ_1D + Γ' must be positive for the Fano form",
        ));
    }
    Ok(FanoParameters {
        q: -2.0 * j_1d / width,
        background_weight: (gamma_prime / width).powi(2),
        j_1d,
        gamma_1d,
        gamma_prime,
    })
}

impl FanoParameters {
    pub fn reduced_detuning(&self, delta_a: f64) -> f64 {
        2.0 * (delta_a + self.j_1d) / (self.gamma_1d + self.gamma_prime)
    }

    /// Two-term Fano lineshape for T/T₀.
    pub fn transmittance(&self, delta_a: f64) -> f64 {
        let chi = self.reduced_detuning(delta_a);
        let denom = 1.0 + chi * chi;
        (self.q + chi).powi(2) / denom + self.background_weight / denom
    }

    /// |t/t₀|² from the single-atom amplitude formula; equal to
    /// `transmittance` identically.
    pub fn amplitude_transmittance(&self, delta_a: f64) -> f64 {
        let z = C64::new(delta_a, 0.5 * self.gamma_prime);
        let denom = C64::new(
            delta_a + self.j_1d,
            0.5 * (self.gamma_prime + self.gamma_1d),
        );
        (z / denom).norm_sqr()
    }
}

/// Beer-Lambert transmittance of N non-interacting atoms: the exact
/// exponential form and the optical-depth approximation
/// T ≈ exp[-OD/(1 + (2Δ/Γ')²)], OD = 2NΓ_1D/Γ' (valid for Γ_1D << Γ').
#[derive(Debug, Clone, PartialEq)]
pub struct BeerLambert {
    pub delta: Vec<f64>,
    pub exact: Vec<f64>,
    pub approximate: Vec<f64>,
    pub optical_depth: f64,
}

pub fn beer_lambert(
    grid: &[f64],
    n: usize,
    gamma_1d: f64,
    gamma_prime: f64,
) -> Result<BeerLambert> {
    if !(gamma_prime > 0.0) {
        return Err(Error::config(
            "beer_lambert",
            "Γ' must be positive (free-space channel suppresses multiple reflections)",
        ));
    }
    let od = 2.0 * n as f64 * gamma_1d / gamma_prime;
    let exact = grid
        .iter()
        .map(|&d| {
            let num = d * d + 0.25 * (gamma_prime + gamma_1d).powi(2);
            let den = d * d + 0.25 * gamma_prime * gamma_prime;
            (-(n as f64) * (num / den).ln()).exp()
        })
        .collect();
    let approximate = grid
        .iter()
        .map(|&d| (-od / (1.0 + (2.0 * d / gamma_prime).powi(2))).exp())
        .collect();
    Ok(BeerLambert {
        delta: grid.to_vec(),
        exact,
        approximate,
        optical_depth: od,
    })
}

/// Markovian companion and frequency-resolved spectra of a colored
/// reservoir.
#[derive(Debug, Clone, PartialEq)]
pub struct NonMarkovSpectra {
    /// Coupling matrix rebuilt at every probe detuning.
    pub nonmarkov: SpectrumTable,
    /// Coupling matrix frozen at the atomic frequency.
    pub markov: SpectrumTable,
}

/// Non-Markov transmission: per grid point rebuild g(Δ_A) and apply the
/// product formula with the frequency-dependent eigenvalues; the Markovian
/// curve keeps g frozen at Δ_A = 0.
pub fn nonmarkov_spectrum(
    grid: &[f64],
    chain: &EmitterChain,
    model: &ReservoirModel,
    gamma_prime: f64,
) -> Result<NonMarkovSpectra> {
    let frozen = build_coupling_matrix_at(chain, model, 0.0)?;
    let (frozen_vals, _) = crate::linalg::eig(frozen.entries())?;
    let markov = transmission_product(grid, frozen_vals.as_slice().unwrap(), gamma_prime)?;

    let t: Vec<C64> = grid
        .par_iter()
        .map(|&delta| {
            let g = build_coupling_matrix_at(chain, model, delta)?;
            let (vals, _) = crate::linalg::eig(g.entries())?;
            product_point(delta, vals.as_slice().unwrap(), gamma_prime)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NonMarkovSpectra {
        nonmarkov: SpectrumTable {
            delta: grid.to_vec(),
            t_over_t0: t,
            reflection: None,
        },
        markov,
    })
}

/// Frequency-dependent eigenvalues λ_ξ(Δ_A) of the rebuilt coupling matrix,
/// sorted by descending magnitude.
pub fn nonmarkov_eigenvalues(
    chain: &EmitterChain,
    model: &ReservoirModel,
    delta_a: f64,
) -> Result<Vec<C64>> {
    let g = build_coupling_matrix_at(chain, model, delta_a)?;
    let (vals, _) = crate::linalg::eig(g.entries())?;
    let mut v: Vec<C64> = vals.to_vec();
    v.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(v)
}
