//! Coupling-matrix assembly and the non-Hermitian complex-symmetric
//! eigendecomposition that defines the collective atomic modes.
//!
//! The matrix g is complex symmetric (Lorentz reciprocity with real dipole
//! matrix elements), so its eigenvectors are orthonormal under the
//! *transpose* product v_ξ^T v_ξ' = δ_ξξ' rather than the Hermitian one, and
//! completeness reads Σ_ξ v_ξ ⊗ v_ξ^T = 𝟙. The eigenvalues carry the
//! collective physics: J_ξ = Re λ_ξ is the cooperative shift, Γ_ξ = 2 Im λ_ξ
//! the cooperative decay rate.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::greens::ReservoirModel;
use crate::linalg::{bilinear, eig};
use crate::{Error, Result, C64};

/// Chain of N identical emitters. Positions are canonically sorted on
/// construction; `original_order[k]` is the input index of sorted atom k.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterChain {
    positions: Vec<f64>,
    original_order: Vec<usize>,
    /// Decay rate into non-guided modes, shared by all atoms.
    pub gamma_prime: f64,
}

impl EmitterChain {
    pub fn new(positions: Vec<f64>, gamma_prime: f64) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::config("chain.positions", "need at least one atom"));
        }
        if gamma_prime < 0.0 || !gamma_prime.is_finite() {
            return Err(Error::config(
                "chain.gamma_prime",
                format!("must be a finite rate >= 0, got {gamma_prime}"),
            ));
        }
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("chain.positions", "must be finite"));
        }
        let mut order: Vec<usize> = (0..positions.len()).collect();
        order.sort_by(|&i, &j| positions[i].total_cmp(&positions[j]));
        let sorted = order.iter().map(|&i| positions[i]).collect();
        Ok(EmitterChain {
            positions: sorted,
            original_order: order,
            gamma_prime,
        })
    }

    /// Regular chain of n atoms starting at `start` with spacing `spacing`.
    pub fn regular(n: usize, start: f64, spacing: f64, gamma_prime: f64) -> Result<Self> {
        let positions = (0..n).map(|i| start + spacing * i as f64).collect();
        Self::new(positions, gamma_prime)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Sorted positions.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn original_order(&self) -> &[usize] {
        &self.original_order
    }

    pub fn span(&self) -> (f64, f64) {
        (self.positions[0], *self.positions.last().unwrap())
    }
}

/// N x N dipole-projected Green's-function matrix, exactly symmetric as
/// stored (entries are computed for i <= j and mirrored).
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    entries: Array2<C64>,
    pub provenance: String,
}

impl CouplingMatrix {
    pub fn from_entries(entries: Array2<C64>, provenance: impl Into<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::config("coupling", "matrix must be square"));
        }
        let mut m = entries;
        for i in 0..m.nrows() {
            for j in 0..i {
                m[(i, j)] = m[(j, i)];
            }
        }
        Ok(CouplingMatrix {
            entries: m,
            provenance: provenance.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Off-diagonal entries zeroed: the "non-interacting" reference in which
    /// every atom keeps only its self Green's function.
    pub fn non_interacting(&self) -> CouplingMatrix {
        let mut m = Array2::zeros(self.entries.raw_dim());
        for i in 0..self.n() {
            m[(i, i)] = self.entries[(i, i)];
        }
        CouplingMatrix {
            entries: m,
            provenance: format!("{} (off-diagonal zeroed)", self.provenance),
        }
    }

    /// trace of g^p for small p (EIT dispersion coefficients).
    pub fn power_trace(&self, p: u32) -> C64 {
        match p {
            1 => self.trace(),
            _ => {
                let mut acc = self.entries.clone();
                for _ in 1..p {
                    acc = acc.dot(&self.entries);
                }
                acc.diag().sum()
            }
        }
    }
}

/// Build g_ij from the reservoir model at the atomic frequency.
pub fn build_coupling_matrix(
    chain: &EmitterChain,
    model: &ReservoirModel,
) -> Result<CouplingMatrix> {
    build_coupling_matrix_at(chain, model, 0.0)
}

/// Build g_ij(Δ_A) at a probe detuning from the atomic line; identical to
/// the Markov matrix for frequency-flat reservoirs.
pub fn build_coupling_matrix_at(
    chain: &EmitterChain,
    model: &ReservoirModel,
    delta_a: f64,
) -> Result<CouplingMatrix> {
    let n = chain.len();
    let xs = chain.positions();
    let mut entries = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let g = model.coupling_at(xs[i], xs[j], delta_a)?;
            entries[(i, j)] = g;
            entries[(j, i)] = g;
        }
    }
    CouplingMatrix::from_entries(
        entries,
        format!("model={} delta_a={delta_a}", model.name()),
    )
}

/// Collective-mode decomposition: eigenvalues sorted by descending Im λ
/// (dissipative modes first), then descending Re λ; eigenvectors rescaled to
/// v^T v = 1.
#[derive(Debug, Clone)]
pub struct ModeDecomposition {
    pub eigenvalues: Vec<C64>,
    /// Column ξ is the eigenvector of eigenvalue ξ.
    pub eigenvectors: Array2<C64>,
    /// Smallest |v^T v| over the raw (unit 2-norm) eigenvectors; values near
    /// zero flag the vicinity of an exceptional point.
    pub min_transpose_norm: f64,
    /// max |(Σ_ξ v_ξ v_ξ^T - 𝟙)_{ij}|.
    pub completeness_residual: f64,
    /// |Σ λ_ξ - Tr g| / max(|Tr g|, 1).
    pub trace_residual: f64,
}

impl ModeDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Cooperative shifts J_ξ = Re λ_ξ.
    pub fn shifts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.re).collect()
    }

    /// Cooperative decay rates Γ_ξ = 2 Im λ_ξ.
    pub fn rates(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| 2.0 * l.im).collect()
    }

    pub fn eigenvector(&self, xi: usize) -> Array1<C64> {
        self.eigenvectors.column(xi).to_owned()
    }

    /// Σ_ξ λ_ξ v_ξ v_ξ^T (reconstruction identity check).
    pub fn reconstruct(&self) -> Array2<C64> {
        let n = self.n();
        let mut m = Array2::<C64>::zeros((n, n));
        for xi in 0..n {
            let v = self.eigenvectors.column(xi);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += self.eigenvalues[xi] * v[i] * v[j];
                }
            }
        }
        m
    }
}

/// Threshold below which |v^T v| marks a quasi-defective (exceptional-point)
/// decomposition.
const TRANSPOSE_NORM_FLOOR: f64 = 1e-10;
/// Relative eigenvalue spacing below which eigenvalues are treated as one
/// degenerate cluster and re-orthogonalized under the transpose product.
const CLUSTER_TOL: f64 = 1e-8;

/// Diagonalize the complex-symmetric coupling matrix.
pub fn decompose(matrix: &CouplingMatrix) -> Result<ModeDecomposition> {
    let n = matrix.n();
    let (raw_vals, raw_vecs) = eig(matrix.entries())?;

    // sort: descending Im, then descending Re (bright modes first)
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        raw_vals[j]
            .im
            .total_cmp(&raw_vals[i].im)
            .then(raw_vals[j].re.total_cmp(&raw_vals[i].re))
    });
    let eigenvalues: Vec<C64> = order.iter().map(|&i| raw_vals[i]).collect();
    let mut vectors: Vec<Array1<C64>> =
        order.iter().map(|&i| raw_vecs.column(i).to_owned()).collect();

    // re-orthogonalize degenerate clusters under the transpose product
    let scale = eigenvalues
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[end - 1]).norm() <= CLUSTER_TOL * scale {
            end += 1;
        }
        if end - start > 1 {
            let mean = eigenvalues[start..end].iter().sum::<C64>() / (end - start) as f64;
            reorthogonalize_cluster(matrix.entries(), mean, scale, &mut vectors[start..end], start)?;
        }
        start = end;
    }

    // rescale to v^T v = 1: divide by the principal square root of v^T v
    // (positive real part; the Re = 0 tie goes to positive imaginary part),
    // then fix the leftover global ± sign deterministically
    let mut min_transpose_norm = f64::INFINITY;
    for (xi, v) in vectors.iter_mut().enumerate() {
        let vtv = bilinear(v, v);
        min_transpose_norm = min_transpose_norm.min(vtv.norm());
        if vtv.norm() < TRANSPOSE_NORM_FLOOR {
            return Err(Error::QuasiDefective {
                index: xi,
                norm: vtv.norm(),
            });
        }
        let mut root = vtv.sqrt();
        if root.re < 0.0 || (root.re == 0.0 && root.im < 0.0) {
            root = -root;
        }
        v.mapv_inplace(|z| z / root);
        let lead = v
            .iter()
            .cloned()
            .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .unwrap();
        if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
            v.mapv_inplace(|z| -z);
        }
    }

    let mut eigenvectors = Array2::zeros((n, n));
    for (xi, v) in vectors.iter().enumerate() {
        eigenvectors.column_mut(xi).assign(v);
    }

    // diagnostics
    let mut completeness = Array2::<C64>::eye(n);
    for xi in 0..n {
        let v = eigenvectors.column(xi);
        for i in 0..n {
            for j in 0..n {
                completeness[(i, j)] -= v[i] * v[j];
            }
        }
    }
    let completeness_residual = completeness.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sum: C64 = eigenvalues.iter().sum();
    let trace = matrix.trace();
    let trace_residual = (sum - trace).norm() / trace.norm().max(1.0);

    Ok(ModeDecomposition {
        eigenvalues,
        eigenvectors,
        min_transpose_norm,
        completeness_residual,
        trace_residual,
    })
}

/// Make a degenerate eigenvalue cluster orthonormal under the transpose
/// product.
///
/// The raw eigenvectors of a repeated eigenvalue are unreliable (the
/// back-substitution behind zgeev can return nearly parallel vectors), and
/// healthy complex combinations of a degenerate eigenspace can be isotropic
/// (v^T v = 0), defeating pairwise Gram-Schmidt under the bilinear form.
/// Instead the invariant subspace is taken from the SVD of g - λ̄𝟙: its r
/// near-null right singular vectors form a Hermitian-orthonormal basis Q of
/// the eigenspace. S = Q^T Q is then symmetric *unitary*, so T = S^{-1/2}
/// exists unconditionally and Q·T satisfies (QT)^T (QT) = T S T = 𝟙. A
/// genuinely defective cluster (Jordan block) is flagged by a non-small r-th
/// singular value.
fn reorthogonalize_cluster(
    matrix: &Array2<C64>,
    lambda: C64,
    scale: f64,
    vectors: &mut [Array1<C64>],
    cluster_offset: usize,
) -> Result<()> {
    use ndarray_linalg::SVD;

    let r = vectors.len();
    let n = vectors[0].len();
    let mut shifted = matrix.clone();
    for i in 0..n {
        shifted[(i, i)] -= lambda;
    }
    let (_, sv, vt) = shifted
        .svd(false, true)
        .map_err(|e| Error::Eigensolver(e.to_string()))?;
    let vt = vt.expect("right singular vectors requested");
    // singular values come sorted descending; the eigenspace is the last r
    let defect = sv[n - r];
    if defect > 1e-6 * scale {
        return Err(Error::QuasiDefective {
            index: cluster_offset,
            norm: defect / scale,
        });
    }
    let q: Vec<Array1<C64>> = (0..r)
        .map(|i| vt.row(n - r + i).mapv(|z| z.conj()))
        .collect();

    let mut s = Array2::<C64>::zeros((r, r));
    for i in 0..r {
        for j in 0..r {
            s[(i, j)] = bilinear(&q[i], &q[j]);
        }
    }
    // T = S^{-1/2} through the (normal-matrix) eigendecomposition of S;
    // eigenvalues lie on the unit circle so the principal root never
    // degenerates
    let (vals, x) = eig(&s)?;
    let x_inv = invert(&x).ok_or(Error::Eigensolver(
        "singular eigenvector matrix in cluster re-orthogonalization".into(),
    ))?;
    let mut t = Array2::<C64>::zeros((r, r));
    for i in 0..r {
        for j in 0..r {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..r {
                acc += x[(i, k)] / vals[k].sqrt() * x_inv[(k, j)];
            }
            t[(i, j)] = acc;
        }
    }
    // exact T is symmetric; enforce it against round-off
    for i in 0..r {
        for j in 0..i {
            let sym = 0.5 * (t[(i, j)] + t[(j, i)]);
            t[(i, j)] = sym;
            t[(j, i)] = sym;
        }
    }
    for (k, slot) in vectors.iter_mut().enumerate() {
        let mut combo = Array1::<C64>::zeros(n);
        for (i, qi) in q.iter().enumerate() {
            let w = t[(i, k)];
            combo.zip_mut_with(qi, |c, qv| *c += w * qv);
        }
        *slot = combo;
    }
    Ok(())
}

fn invert(m: &Array2<C64>) -> Option<Array2<C64>> {
    let r = m.nrows();
    let mut inv = Array2::<C64>::zeros((r, r));
    for j in 0..r {
        let mut e = Array1::<C64>::zeros(r);
        e[j] = C64::new(1.0, 0.0);
        let col = crate::linalg::try_solve(m, &e)?;
        inv.column_mut(j).assign(&col);
    }
    Some(inv)
}

/// Closed-form modes of the nearest-neighbor (tridiagonal Toeplitz)
/// approximation to the bandgap matrix:
///
/// ```text
/// λ_ξ = J_max [1 + 2χ cos(ξπ/(N+1))],   v_ξ,j = sqrt(2/(N+1)) sin(ξjπ/(N+1))
/// ```
pub fn tridiagonal_modes(n: usize, j_max: f64, chi: f64) -> Result<ModeDecomposition> {
    if !(0.0..1.0).contains(&chi) {
        return Err(Error::config(
            "chi",
            format!("decay factor must satisfy 0 <= chi < 1, got {chi}"),
        ));
    }
    let np1 = (n + 1) as f64;
    let mut modes: Vec<(C64, Array1<C64>)> = (1..=n)
        .map(|xi| {
            let lambda = j_max * (1.0 + 2.0 * chi * (xi as f64 * std::f64::consts::PI / np1).cos());
            let v = Array1::from_iter((1..=n).map(|j| {
                C64::new(
                    (2.0 / np1).sqrt() * (xi as f64 * j as f64 * std::f64::consts::PI / np1).sin(),
                    0.0,
                )
            }));
            (C64::new(lambda, 0.0), v)
        })
        .collect();
    modes.sort_by(|a, b| b.0.im.total_cmp(&a.0.im).then(b.0.re.total_cmp(&a.0.re)));

    let mut eigenvectors = Array2::zeros((n, n));
    for (xi, (_, v)) in modes.iter().enumerate() {
        eigenvectors.column_mut(xi).assign(v);
    }
    Ok(ModeDecomposition {
        eigenvalues: modes.iter().map(|(l, _)| *l).collect(),
        eigenvectors,
        min_transpose_norm: 1.0,
        completeness_residual: 0.0,
        trace_residual: 0.0,
    })
}

/// Bright/dark tag and rate table for one collective mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSummary {
    pub index: usize,
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// J_ξ,1D
    pub shift: f64,
    /// Γ_ξ,1D
    pub rate: f64,
    pub bright: bool,
}

/// Relative decay threshold: a mode is dark when its guided rate is below
/// this fraction of the largest one.
const BRIGHT_THRESHOLD: f64 = 1e-6;

/// Tag each mode bright/dark by its guided decay rate relative to the
/// largest. When no mode decays at all (ideal bandgap) every mode is dark.
pub fn classify_modes(modes: &ModeDecomposition) -> Vec<ModeSummary> {
    let rates = modes.rates();
    let max_rate = rates.iter().cloned().fold(0.0, f64::max);
    modes
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(index, l)| {
            let rate = 2.0 * l.im;
            let bright = max_rate > 0.0 && rate >= BRIGHT_THRESHOLD * max_rate;
            ModeSummary {
                index,
                lambda_re: l.re,
                lambda_im: l.im,
                shift: l.re,
                rate,
                bright,
            }
        })
        .collect()
}
