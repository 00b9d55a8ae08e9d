//! Standing-wave cavity between two partially transmitting mirrors, and its
//! high-Q single-mode (Jaynes-Cummings) limit.

use std::f64::consts::TAU;

use crate::{Error, Result, C64, IM};

/// Mirrors sit at x = 0 and x = 1 in units of the cavity length L; the
/// resonant mode has k_c L = 2π m, so cos(k_c x) has antinodes at the mirrors
/// and at x = n/(2m). Even antinodes (cos = +1) are x = n/m.
///
/// In rate units the geometry collapses to two scales: the linewidth
/// κ_c = (1 - r²) c/L (which fixes c/L) and the peak single-atom coupling g0.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityModel {
    /// Mirror amplitude reflection coefficient r ∈ (0, 1), real.
    pub mirror_reflectivity: f64,
    /// Longitudinal mode index m (k_c L = 2π m).
    pub mode_index: u32,
    /// Cavity linewidth κ_c = (1 - r²) c/L.
    pub kappa_c: f64,
    /// Peak atom-cavity coupling g0 = d sqrt(ω_c / ħ ε₀ L A).
    pub g0: f64,
    /// Cavity detuning Δ_c = ω_A - ω_c of the atomic line from the cavity
    /// resonance, in reference-rate units.
    pub delta_c: f64,
}

impl CavityModel {
    /// Decay rate an atom would have were the mirrors removed (r -> 0); sets
    /// the overall scale of the exact Green's function.
    pub fn gamma_ref(&self) -> f64 {
        let r2 = self.mirror_reflectivity * self.mirror_reflectivity;
        self.g0 * self.g0 * (1.0 - r2) / self.kappa_c
    }

    /// k_p L at probe-cavity detuning Δ_c (v_g = c branch):
    /// k_p L = 2π m + Δ_c (1 - r²)/κ_c.
    fn kp_l(&self, delta_c: f64) -> f64 {
        let r2 = self.mirror_reflectivity * self.mirror_reflectivity;
        TAU * self.mode_index as f64 + delta_c * (1.0 - r2) / self.kappa_c
    }

    fn check_inside(&self, x: f64) -> Result<()> {
        if (0.0..=1.0).contains(&x) {
            Ok(())
        } else {
            Err(Error::PositionOutsideCavity { x })
        }
    }

    /// Exact four-image Green's function of the two-mirror cavity, in rate
    /// units:
    ///
    /// ```text
    /// g = (iΓ_ref/2) [ e^{ik|Δx|} + r e^{ik(x_i+x_j)} + r e^{ik(2L-(x_i+x_j))}
    ///                  + r² e^{ik(2L-|Δx|)} ] / (1 - r² e^{2ikL})
    /// ```
    pub fn green_exact(&self, xi: f64, xj: f64, delta_c: f64) -> Result<C64> {
        self.check_inside(xi)?;
        self.check_inside(xj)?;
        let r = self.mirror_reflectivity;
        let kl = self.kp_l(delta_c);
        let dx = (xi - xj).abs();
        let sx = xi + xj;
        let phase = |arg: f64| (IM * kl * arg).exp();
        let numerator = phase(dx)
            + r * phase(sx)
            + r * phase(2.0 - sx)
            + r * r * phase(2.0 - dx);
        let denominator = 1.0 - r * r * phase(2.0);
        Ok(IM * (0.5 * self.gamma_ref()) * numerator / denominator)
    }

    /// High-Q single-mode limit (valid for 1 - r² << 1 and |δk L| << 1):
    ///
    /// ```text
    /// g = -g0² cos(k_c x_i) cos(k_c x_j) / (Δ_c + iκ_c/2)
    /// ```
    pub fn green_high_q(&self, xi: f64, xj: f64, delta_c: f64) -> Result<C64> {
        self.check_inside(xi)?;
        self.check_inside(xj)?;
        self.require_high_q()?;
        let kc = TAU * self.mode_index as f64;
        let profile = (kc * xi).cos() * (kc * xj).cos();
        Ok(-self.g0 * self.g0 * profile / C64::new(delta_c, 0.5 * self.kappa_c))
    }

    pub fn mode_profile(&self, x: f64) -> f64 {
        (TAU * self.mode_index as f64 * x).cos()
    }

    pub fn require_high_q(&self) -> Result<()> {
        let loss = 1.0 - self.mirror_reflectivity * self.mirror_reflectivity;
        if loss <= 0.1 {
            Ok(())
        } else {
            Err(Error::NotHighQ { loss })
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.mirror_reflectivity && self.mirror_reflectivity < 1.0) {
            return Err(Error::config(
                "model.mirror_reflectivity",
                format!("must lie in (0, 1), got {}", self.mirror_reflectivity),
            ));
        }
        if !(self.kappa_c > 0.0 && self.kappa_c.is_finite()) {
            return Err(Error::config(
                "model.kappa_c",
                format!("must be a positive rate, got {}", self.kappa_c),
            ));
        }
        if !(self.g0 >= 0.0 && self.g0.is_finite()) {
            return Err(Error::config("model.g0", "coupling must be >= 0"));
        }
        if self.mode_index == 0 {
            return Err(Error::config("model.mode_index", "must be >= 1"));
        }
        Ok(())
    }
}

/// Cavity-mediated spin-exchange and decay rates of the Jaynes-Cummings
/// mapping:
///
/// ```text
/// J_ij = -g0² Δ_c cos(k_c x_i) cos(k_c x_j) / (Δ_c² + κ_c²/4)
/// Γ_ij =  g0² κ_c cos(k_c x_i) cos(k_c x_j) / (Δ_c² + κ_c²/4)
/// ```
///
/// These are the real and (twice the) imaginary parts of the high-Q cavity
/// Green's function.
pub fn jc_rates(xi: f64, xj: f64, delta_c: f64, model: &CavityModel) -> (f64, f64) {
    let kc = TAU * model.mode_index as f64;
    let profile = (kc * xi).cos() * (kc * xj).cos();
    let lorentz = delta_c * delta_c + model.kappa_c * model.kappa_c / 4.0;
    let g2 = model.g0 * model.g0;
    (
        -g2 * delta_c * profile / lorentz,
        g2 * model.kappa_c * profile / lorentz,
    )
}
