//! Unstructured waveguide: translationally invariant guided mode with a
//! linear dispersion around the atomic frequency.

use std::f64::consts::TAU;

use crate::{Error, Result, C64, IM};

/// Positions are in units of the probe wavelength λ_p, so k_p x = 2π x.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveguideModel {
    /// Single-atom decay rate into the guided mode.
    pub gamma_1d: f64,
}

impl WaveguideModel {
    /// g_ij = i (Γ_1D/2) e^{i k_p |x_i - x_j|}.
    ///
    /// The self coupling is purely imaginary; Re g = -(Γ_1D/2) sin k_p|Δx|
    /// and Im g = (Γ_1D/2) cos k_p Δx set the coherent and dissipative parts.
    pub fn coupling(&self, xi: f64, xj: f64) -> C64 {
        let phase = TAU * (xi - xj).abs();
        IM * (0.5 * self.gamma_1d) * (IM * phase).exp()
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma_1d > 0.0 && self.gamma_1d.is_finite() {
            Ok(())
        } else {
            Err(Error::config(
                "model.gamma_1d",
                format!("must be a positive rate, got {}", self.gamma_1d),
            ))
        }
    }
}
