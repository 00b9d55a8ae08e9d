//! Photonic-crystal bandgap: purely dispersive, exponentially ranged
//! interaction mediated by the evanescent Bloch modes.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

/// Positions are in units of the lattice constant a; kappa_x is in units of
/// 1/a. Even antinodes of the Bloch mode sit at x = 0, 2, 4, ...
#[derive(Debug, Clone, PartialEq)]
pub struct BandgapModel {
    /// Spin-exchange rate at the Bloch-mode maximum (sign free; negative
    /// below the band edge).
    pub j_max: f64,
    /// Inverse interaction range κ_x.
    pub kappa_x: f64,
    /// Optional residual guided decay rate at the Bloch maximum, entering as
    /// the imaginary part of the coupling amplitude with the same spatial
    /// envelope as j_max. Idealized gap: 0.
    pub residual_gamma: f64,
}

impl BandgapModel {
    /// g_ij = (J_max + iΓ_res/2) cos(πx_i) cos(πx_j) e^{-κ_x |x_i - x_j|}.
    pub fn coupling(&self, xi: f64, xj: f64) -> C64 {
        let amplitude = C64::new(self.j_max, 0.5 * self.residual_gamma);
        let bloch = (PI * xi).cos() * (PI * xj).cos();
        let envelope = (-self.kappa_x * (xi - xj).abs()).exp();
        amplitude * bloch * envelope
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa_x > 0.0 && self.kappa_x.is_finite()) {
            return Err(Error::config(
                "model.kappa_x",
                format!("must be a positive inverse length, got {}", self.kappa_x),
            ));
        }
        if self.residual_gamma < 0.0 {
            return Err(Error::config(
                "model.residual_gamma",
                "residual decay rate must be >= 0",
            ));
        }
        Ok(())
    }
}
