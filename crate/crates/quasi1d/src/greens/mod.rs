//! Dipole-projected guided-mode Green's functions g(x, x', ω) for each
//! reservoir model.
//!
//! All couplings are returned in rate units: g = J + iΓ/2 where J is the
//! coherent spin-exchange rate and Γ the dissipative rate, both dimensionless
//! multiples of the scenario's reference rate. Positions are dimensionless in
//! the natural length of each model:
//!
//! * waveguide — probe wavelength λ_p (so k_p x = 2π x)
//! * cavity    — cavity length L (mirrors at x = 0 and x = 1)
//! * bandgap   — lattice constant a (Bloch cosine cos πx)
//! * stack     — reference vacuum wavelength λ₀ (k₀ = 2π at ω = 1)

mod bandgap;
mod cavity;
mod stack;
mod tabulated;
mod waveguide;

pub use bandgap::BandgapModel;
pub use cavity::{jc_rates, CavityModel};
pub use stack::{LayeredStack, Slab};
pub use tabulated::{FrequencyRule, SampledTable, SpatialProfile, TabulatedCoupling};
pub use waveguide::WaveguideModel;

use crate::{Result, C64};
use serde::{Deserialize, Serialize};

/// Label of the reference rate all rates and detunings are measured in.
///
/// Conversion to any other unit system is multiplication by a single scalar;
/// the label is carried through to output metadata so results stay
/// self-describing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateUnits {
    pub reference: String,
}

impl Default for RateUnits {
    fn default() -> Self {
        RateUnits {
            reference: "gamma_prime".into(),
        }
    }
}

/// One of the supported quasi-1D reservoirs.
#[derive(Debug, Clone)]
pub enum ReservoirModel {
    Waveguide(WaveguideModel),
    /// Finite-mirror cavity evaluated with the exact four-image form.
    Cavity(CavityModel),
    /// High-Q single-mode limit of the cavity (Lorentzian denominator).
    HighQCavity(CavityModel),
    Bandgap(BandgapModel),
    Stack(LayeredStack),
    Tabulated(TabulatedCoupling),
}

impl ReservoirModel {
    pub fn name(&self) -> &'static str {
        match self {
            ReservoirModel::Waveguide(_) => "waveguide",
            ReservoirModel::Cavity(_) => "cavity",
            ReservoirModel::HighQCavity(_) => "high_q_cavity",
            ReservoirModel::Bandgap(_) => "bandgap",
            ReservoirModel::Stack(_) => "stack",
            ReservoirModel::Tabulated(_) => "tabulated",
        }
    }

    /// Coupling g(x_i, x_j) at the atomic frequency (Markov evaluation point).
    pub fn coupling(&self, xi: f64, xj: f64) -> Result<C64> {
        match self {
            ReservoirModel::Waveguide(m) => Ok(m.coupling(xi, xj)),
            ReservoirModel::Cavity(m) => m.green_exact(xi, xj, m.delta_c),
            ReservoirModel::HighQCavity(m) => m.green_high_q(xi, xj, m.delta_c),
            ReservoirModel::Bandgap(m) => Ok(m.coupling(xi, xj)),
            ReservoirModel::Stack(m) => m.coupling(xi, xj),
            ReservoirModel::Tabulated(m) => m.coupling(xi, xj, 0.0),
        }
    }

    /// Frequency-resolved coupling at probe detuning Δ_A from the atomic
    /// line. Models with a flat (Markovian) reservoir ignore Δ_A.
    pub fn coupling_at(&self, xi: f64, xj: f64, delta_a: f64) -> Result<C64> {
        match self {
            ReservoirModel::Tabulated(m) => m.coupling(xi, xj, delta_a),
            ReservoirModel::HighQCavity(m) => m.green_high_q(xi, xj, m.delta_c + delta_a),
            ReservoirModel::Cavity(m) => m.green_exact(xi, xj, m.delta_c + delta_a),
            _ => self.coupling(xi, xj),
        }
    }

    /// Whether the model supports a propagating probe (transmission and
    /// reflection are defined). The bandgap reservoir has no guided channel
    /// at the atomic frequency.
    pub fn supports_propagation(&self) -> bool {
        !matches!(
            self,
            ReservoirModel::Bandgap(_) | ReservoirModel::Tabulated(_)
        )
    }

    /// Probe ports (x_left, x_right) just outside a chain spanning
    /// [x_min, x_max]: one probe wavelength outside for translationally
    /// invariant models, just inside the mirrors for cavities.
    pub fn probe_ports(&self, x_min: f64, x_max: f64) -> Result<(f64, f64)> {
        match self {
            ReservoirModel::Waveguide(_) => Ok((x_min - 1.0, x_max + 1.0)),
            ReservoirModel::Cavity(_) | ReservoirModel::HighQCavity(_) => Ok((0.0, 1.0)),
            ReservoirModel::Stack(m) => {
                let total = m.total_thickness();
                Ok((x_min.min(0.0) - 1.0, x_max.max(total) + 1.0))
            }
            _ => Err(crate::Error::NoPropagatingChannel { model: self.name() }),
        }
    }

    /// Background reflection r₀ seen at the left port (0 for a bare
    /// waveguide). Defined through the self Green's function:
    /// g(x_L, x_L) = (iΓ_ref/2)(1 + r₀).
    pub fn background_reflection(&self, x_left: f64) -> Result<C64> {
        match self {
            ReservoirModel::Waveguide(_) => Ok(C64::new(0.0, 0.0)),
            ReservoirModel::Cavity(m) | ReservoirModel::HighQCavity(m) => {
                // The mirror structure is what reflects; use the exact form
                // for both variants.
                let g = m.green_exact(x_left, x_left, m.delta_c)?;
                let gref = C64::new(0.0, 0.5 * m.gamma_ref());
                Ok(g / gref - 1.0)
            }
            ReservoirModel::Stack(m) => {
                let g = m.coupling(x_left, x_left)?;
                let gref = C64::new(0.0, 0.5 * m.gamma_ref);
                Ok(g / gref - 1.0)
            }
            _ => Err(crate::Error::NoPropagatingChannel { model: self.name() }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ReservoirModel::Waveguide(m) => m.validate(),
            ReservoirModel::Cavity(m) => m.validate(),
            ReservoirModel::HighQCavity(m) => {
                m.validate()?;
                m.require_high_q()
            }
            ReservoirModel::Bandgap(m) => m.validate(),
            ReservoirModel::Stack(m) => m.validate(),
            ReservoirModel::Tabulated(m) => m.validate(),
        }
    }
}
