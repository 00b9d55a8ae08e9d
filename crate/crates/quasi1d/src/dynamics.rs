//! Single-excitation dynamics: with the drive off, the amplitude vector
//! obeys ċ = i[(Δ_A + iΓ'/2)𝟙 + g] c, so the propagator is exact,
//! c(t) = exp{i[(Δ_A + iΓ'/2)𝟙 + g] t} c₀, and is evaluated through the
//! collective-mode decomposition (or a scaling-and-squaring matrix
//! exponential when the matrix is quasi-defective).

use ndarray::{Array1, Array2};

use crate::collective::{decompose, CouplingMatrix};
use crate::linalg::{bilinear, expm};
use crate::{Error, Result, C64, IM};

/// Excitation amplitudes and populations over a time grid (times in inverse
/// reference-rate units).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub times: Vec<f64>,
    /// row k = amplitudes c_i(t_k).
    pub amplitudes: Array2<C64>,
    /// row k = populations |c_i(t_k)|².
    pub populations: Array2<f64>,
    pub total: Vec<f64>,
}

impl TimeTrace {
    pub fn n_atoms(&self) -> usize {
        self.populations.ncols()
    }
}

/// Uniform time grid over [0, t_max].
pub fn time_grid(t_max: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|k| t_max * k as f64 / (n - 1) as f64)
        .collect()
}

/// Propagate the initial amplitudes over the time grid.
///
/// The spectral path evaluates c(t) = Σ_ξ e^{i(Δ_A + iΓ'/2 + λ_ξ)t}
/// (v_ξ^T c₀) v_ξ exactly per time point; if the decomposition fails near an
/// exceptional point the evolution falls back to repeated application of the
/// step propagator exp(iM δt) (uniform grids) or per-point exponentials.
pub fn evolve(
    matrix: &CouplingMatrix,
    gamma_prime: f64,
    delta_a: f64,
    initial: &Array1<C64>,
    times: &[f64],
) -> Result<TimeTrace> {
    if initial.len() != matrix.n() {
        return Err(Error::config(
            "dynamics.initial",
            "length must match the number of atoms",
        ));
    }
    if times.is_empty() || times[0] != 0.0 || !times.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::config(
            "dynamics.times",
            "time grid must start at 0 and increase",
        ));
    }
    let amplitudes = match decompose(matrix) {
        Ok(modes) => {
            let z = C64::new(delta_a, 0.5 * gamma_prime);
            let weights: Vec<C64> = (0..matrix.n())
                .map(|xi| bilinear(&modes.eigenvector(xi), initial))
                .collect();
            times
                .iter()
                .map(|&t| {
                    let mut c = Array1::<C64>::zeros(matrix.n());
                    for xi in 0..matrix.n() {
                        let phase = (IM * (z + modes.eigenvalues[xi]) * t).exp();
                        let v = modes.eigenvector(xi);
                        c.zip_mut_with(&v, |ci, vi| *ci += weights[xi] * phase * vi);
                    }
                    c
                })
                .collect::<Vec<_>>()
        }
        Err(Error::QuasiDefective { .. }) => evolve_expm(matrix, gamma_prime, delta_a, initial, times)?,
        Err(e) => return Err(e),
    };

    let n = matrix.n();
    let mut amplitude_rows = Array2::zeros((times.len(), n));
    let mut populations = Array2::zeros((times.len(), n));
    let mut total = Vec::with_capacity(times.len());
    for (k, c) in amplitudes.iter().enumerate() {
        let mut sum = 0.0;
        for i in 0..n {
            amplitude_rows[(k, i)] = c[i];
            let p = c[i].norm_sqr();
            populations[(k, i)] = p;
            sum += p;
        }
        total.push(sum);
    }
    Ok(TimeTrace {
        times: times.to_vec(),
        amplitudes: amplitude_rows,
        populations,
        total,
    })
}

fn evolve_expm(
    matrix: &CouplingMatrix,
    gamma_prime: f64,
    delta_a: f64,
    initial: &Array1<C64>,
    times: &[f64],
) -> Result<Vec<Array1<C64>>> {
    let n = matrix.n();
    let mut generator = matrix.entries().mapv(|g| IM * g);
    let z = IM * C64::new(delta_a, 0.5 * gamma_prime);
    for i in 0..n {
        generator[(i, i)] += z;
    }
    // uniform grids admit a single step propagator
    let dt = times[1] - times[0];
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-12 * dt.max(1.0));
    if uniform {
        let step = expm(&generator.mapv(|g| g * dt))?;
        let mut c = initial.clone();
        let mut out = Vec::with_capacity(times.len());
        out.push(c.clone());
        for _ in 1..times.len() {
            c = step.dot(&c);
            out.push(c.clone());
        }
        Ok(out)
    } else {
        times
            .iter()
            .map(|&t| Ok(expm(&generator.mapv(|g| g * t))?.dot(initial)))
            .collect()
    }
}

/// Off-diagonal couplings zeroed; see `CouplingMatrix::non_interacting`.
pub fn zero_offdiagonal(matrix: &CouplingMatrix) -> CouplingMatrix {
    matrix.non_interacting()
}

/// Locations (by index and time) of the local maxima of one atom's
/// population, by quadratic refinement around interior grid maxima.
pub fn population_maxima(trace: &TimeTrace, atom: usize) -> Vec<(f64, f64)> {
    let p = trace.populations.column(atom);
    let mut peaks = Vec::new();
    for k in 1..trace.times.len() - 1 {
        if p[k] > p[k - 1] && p[k] >= p[k + 1] {
            // parabolic refinement on (t_{k-1}, t_k, t_{k+1})
            let (y0, y1, y2) = (p[k - 1], p[k], p[k + 1]);
            let denom = y0 - 2.0 * y1 + y2;
            let (dt_prev, dt_next) = (
                trace.times[k] - trace.times[k - 1],
                trace.times[k + 1] - trace.times[k],
            );
            let shift = if denom.abs() > 0.0 && (dt_next - dt_prev).abs() < 1e-12 {
                0.5 * (y0 - y2) / denom * dt_next
            } else {
                0.0
            };
            peaks.push((trace.times[k] + shift, y1));
        }
    }
    peaks
}
