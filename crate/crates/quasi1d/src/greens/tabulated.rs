//! Frequency-resolved (non-Markovian) couplings: the reservoir response is
//! not flat over the atomic linewidth, so the coupling matrix is rebuilt at
//! every probe detuning.

use std::f64::consts::TAU;

use crate::{Error, Result, C64};

/// Tabulated g(Δ_A) samples with natural-cubic-spline interpolation, valid
/// strictly inside the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTable {
    grid: Vec<f64>,
    values: Vec<C64>,
    /// Natural-spline second derivatives at the nodes.
    d2: Vec<C64>,
}

impl SampledTable {
    pub fn new(grid: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::config("model.grid", "need at least two samples"));
        }
        if grid.len() != values.len() {
            return Err(Error::config(
                "model.values",
                "grid and values lengths differ",
            ));
        }
        if !grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::config("model.grid", "must be strictly increasing"));
        }
        let d2 = natural_spline_second_derivatives(&grid, &values);
        Ok(SampledTable { grid, values, d2 })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    pub fn value(&self, delta_a: f64) -> Result<C64> {
        let (min, max) = self.range();
        if delta_a < min || delta_a > max {
            return Err(Error::FrequencyOutOfRange {
                delta: delta_a,
                min,
                max,
            });
        }
        let hi = self
            .grid
            .partition_point(|&g| g < delta_a)
            .clamp(1, self.grid.len() - 1);
        let lo = hi - 1;
        let h = self.grid[hi] - self.grid[lo];
        let a = (self.grid[hi] - delta_a) / h;
        let b = (delta_a - self.grid[lo]) / h;
        Ok(a * self.values[lo]
            + b * self.values[hi]
            + ((a * a * a - a) * self.d2[lo] + (b * b * b - b) * self.d2[hi]) * (h * h) / 6.0)
    }
}

/// Tridiagonal solve for the natural-spline second derivatives on a
/// (possibly non-uniform) strictly increasing grid.
fn natural_spline_second_derivatives(grid: &[f64], values: &[C64]) -> Vec<C64> {
    let n = grid.len();
    let mut d2 = vec![C64::new(0.0, 0.0); n];
    if n == 2 {
        return d2;
    }
    let mut sub = vec![0.0; n - 2];
    let mut diag = vec![0.0; n - 2];
    let mut sup = vec![0.0; n - 2];
    let mut rhs = vec![C64::new(0.0, 0.0); n - 2];
    for i in 1..n - 1 {
        let h0 = grid[i] - grid[i - 1];
        let h1 = grid[i + 1] - grid[i];
        sub[i - 1] = h0 / 6.0;
        diag[i - 1] = (h0 + h1) / 3.0;
        sup[i - 1] = h1 / 6.0;
        rhs[i - 1] = (values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0;
    }
    // Thomas algorithm
    for i in 1..n - 2 {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] = rhs[i] - w * rhs[i - 1];
    }
    let mut m = vec![C64::new(0.0, 0.0); n - 2];
    m[n - 3] = rhs[n - 3] / diag[n - 3];
    for i in (0..n - 3).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    d2[1..n - 1].copy_from_slice(&m);
    d2
}

/// Scalar frequency rule g(Δ_A); the full coupling is
/// g_ij(Δ_A) = g(Δ_A) w(x_i) w(x_j) with w the spatial profile.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyRule {
    /// Frequency-dependent high-Q cavity:
    /// g(Δ_A) = -g0² / (Δ_c + Δ_A + i κ_c/2),
    /// whose real and imaginary parts reproduce the Jaynes-Cummings
    /// spin-exchange and decay rates at every probe frequency.
    CavityLorentzian {
        g0: f64,
        kappa_c: f64,
        /// Cavity detuning Δ_c = ω_A - ω_c at the atomic line.
        delta_c: f64,
    },
    /// Interpolated table over a sampled frequency grid.
    Samples(SampledTable),
}

impl FrequencyRule {
    pub fn value(&self, delta_a: f64) -> Result<C64> {
        match self {
            FrequencyRule::CavityLorentzian {
                g0,
                kappa_c,
                delta_c,
            } => Ok(-g0 * g0 / C64::new(delta_c + delta_a, 0.5 * kappa_c)),
            FrequencyRule::Samples(table) => table.value(delta_a),
        }
    }

    /// Tabulate another rule on a grid (interpolation-error studies).
    pub fn sampled_from(rule: &FrequencyRule, grid: Vec<f64>) -> Result<Self> {
        let values = grid
            .iter()
            .map(|&d| rule.value(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(FrequencyRule::Samples(SampledTable::new(grid, values)?))
    }
}

/// Spatial weight of the guided mode at the atom positions.
#[derive(Debug, Clone, PartialEq)]
pub enum SpatialProfile {
    /// Uniform weight 1 (atoms pinned to equivalent antinodes).
    Uniform,
    /// cos(2π m x) cavity profile, positions in units of L.
    CavityCosine { mode_index: u32 },
}

impl SpatialProfile {
    pub fn weight(&self, x: f64) -> f64 {
        match self {
            SpatialProfile::Uniform => 1.0,
            SpatialProfile::CavityCosine { mode_index } => (TAU * *mode_index as f64 * x).cos(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCoupling {
    pub rule: FrequencyRule,
    pub profile: SpatialProfile,
}

impl TabulatedCoupling {
    pub fn coupling(&self, xi: f64, xj: f64, delta_a: f64) -> Result<C64> {
        Ok(self.rule.value(delta_a)? * self.profile.weight(xi) * self.profile.weight(xj))
    }

    pub fn validate(&self) -> Result<()> {
        if let FrequencyRule::CavityLorentzian { kappa_c, .. } = &self.rule {
            if !(*kappa_c > 0.0) {
                return Err(Error::config("model.kappa_c", "must be a positive rate"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::{jc_rates, CavityModel};

    #[test]
    fn resonant_rule_is_purely_imaginary() {
        let rule = FrequencyRule::CavityLorentzian {
            g0: 0.7,
            kappa_c: 0.4,
            delta_c: 0.0,
        };
        let g = rule.value(0.0).unwrap();
        assert!(g.re.abs() < 1e-15);
        // 2 g0² / κ_c
        assert!((g.im - 2.0 * 0.49 / 0.4).abs() < 1e-12);
    }

    #[test]
    fn rule_matches_jc_rates_everywhere() {
        let (g0, kappa_c) = (0.9, 0.6);
        let rule = FrequencyRule::CavityLorentzian {
            g0,
            kappa_c,
            delta_c: 0.0,
        };
        let cavity = CavityModel {
            mirror_reflectivity: (1.0_f64 - 1e-3).sqrt(),
            mode_index: 1,
            kappa_c,
            g0,
            delta_c: 0.0,
        };
        for delta in [-2.0, -0.3, 0.0, kappa_c, 5.0] {
            let g = rule.value(delta).unwrap();
            let (j, gamma) = jc_rates(0.0, 0.0, delta, &cavity);
            assert!((g.re - j).abs() < 1e-12 * j.abs().max(1.0));
            assert!((2.0 * g.im - gamma).abs() < 1e-12 * gamma.abs().max(1.0));
        }
    }

    #[test]
    fn interpolation_reproduces_rule_mid_grid() {
        let kappa_c = 1.0;
        let rule = FrequencyRule::CavityLorentzian {
            g0: 1.0,
            kappa_c,
            delta_c: 0.0,
        };
        let n = 1000;
        let grid: Vec<f64> = (0..n)
            .map(|i| -10.0 + 20.0 * i as f64 / (n - 1) as f64)
            .collect();
        let table = FrequencyRule::sampled_from(&rule, grid).unwrap();
        // probe between nodes over the central half of the table
        let mut worst: f64 = 0.0;
        for i in 0..400 {
            let d = -4.99 + i as f64 * 0.02497;
            let exact = rule.value(d).unwrap();
            let interp = table.value(d).unwrap();
            worst = worst.max((exact - interp).norm() / exact.norm());
        }
        assert!(worst < 1e-6, "interpolation error {worst}");
    }

    #[test]
    fn out_of_range_is_error() {
        let table = SampledTable::new(
            vec![-1.0, 0.0, 1.0],
            vec![C64::new(0.0, 1.0); 3],
        )
        .unwrap();
        assert!(matches!(
            table.value(1.5),
            Err(Error::FrequencyOutOfRange { .. })
        ));
        assert!(table.value(1.0).is_ok());
    }

    #[test]
    fn non_monotone_grid_rejected() {
        assert!(SampledTable::new(
            vec![0.0, 0.0, 1.0],
            vec![C64::new(1.0, 0.0); 3]
        )
        .is_err());
    }
}
