//! Dense complex linear algebra helpers shared by the physics modules.
//!
//! Eigendecomposition and linear solves are delegated to LAPACK (zgeev /
//! zgesv) through `ndarray-linalg`; the small utilities specific to the
//! complex-symmetric structure of the coupling matrix (unconjugated bilinear
//! products, scaling-and-squaring matrix exponential) live here.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Solve};

use crate::{Error, Result, C64};

/// Unconjugated bilinear product u^T v (transpose, not Hermitian, pairing).
pub fn bilinear(u: &Array1<C64>, v: &Array1<C64>) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

/// Solve `m x = rhs`. Returns `None` when the factorization reports a
/// singular matrix or the solution is not finite (response pole).
pub fn try_solve(m: &Array2<C64>, rhs: &Array1<C64>) -> Option<Array1<C64>> {
    match m.solve(rhs) {
        Ok(x) => {
            if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                Some(x)
            } else {
                None
            }
        }
        Err(_) => None,
    }
}

/// Eigenvalues and right eigenvectors (columns) of a general complex matrix.
pub fn eig(m: &Array2<C64>) -> Result<(Array1<C64>, Array2<C64>)> {
    m.eig().map_err(|e| Error::Eigensolver(e.to_string()))
}

fn one_norm(a: &Array2<C64>) -> f64 {
    let (_, ncol) = a.dim();
    (0..ncol)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// The scaled matrix has 1-norm <= 0.5, for which the truncated Taylor series
/// converges well below f64 round-off; used as the exceptional-point fallback
/// for time evolution, where generators are small (N x N, N at most a few
/// hundred).
pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::MatrixExponential("matrix not square".into()));
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(Error::MatrixExponential("non-finite entries".into()));
    }
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    if s > 60 {
        return Err(Error::MatrixExponential(format!(
            "norm {norm:.3e} too large to scale"
        )));
    }
    let scale = 2.0_f64.powi(s as i32);
    let scaled = a.mapv(|z| z / scale);
    let mut result = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=40u32 {
        term = term.dot(&scaled).mapv(|z| z / (k as f64));
        result = result + &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = result.dot(&result);
    }
    Ok(result)
}
