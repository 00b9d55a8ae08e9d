//! Collective atom-light response in quasi-1D photonic reservoirs.
//!
//! A chain of two-level emitters coupled to the guided mode of a 1D structure
//! (cavity, waveguide, photonic-crystal bandgap, or an arbitrary layered
//! dielectric) is described by the dipole-projected Green's-function matrix
//!
//! ```text
//! g_ij = J_1D^ij + i Γ_1D^ij / 2
//! ```
//!
//! whose complex-symmetric eigendecomposition yields the collective frequency
//! shifts `J_ξ = Re λ_ξ` and decay rates `Γ_ξ = 2 Im λ_ξ`. Everything
//! downstream — steady-state coherences, transmission and reflection spectra,
//! Fano lineshapes, EIT dispersion, and single-excitation dynamics — is built
//! from that matrix.
//!
//! Units: all rates and detunings are dimensionless multiples of a single
//! reference rate declared per scenario (Γ′, Γ₀, or Γ_1D); positions are
//! dimensionless in the natural length of each reservoir model (λ_p, the
//! lattice constant a, or the cavity length L).

pub mod collective;
pub mod dynamics;
pub mod eit;
pub mod error;
pub mod greens;
pub mod linalg;
pub mod scenario;
pub mod spectra;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Imaginary unit.
pub const IM: C64 = C64::new(0.0, 1.0);
