//! Scenario configuration, preset catalog, and result serialization.
//!
//! A scenario is a single JSON document selecting one reservoir model, a
//! chain geometry, a drive, and any subset of analyses. Unknown keys are
//! rejected, defaults are part of the schema, and every output file embeds
//! the SHA-256 hash of the validated configuration so results stay traceable
//! to their inputs.

mod presets;
mod run;

pub use presets::{expand_preset, preset_catalog, preset_names, PresetInfo};
pub use run::{compute_spectrum, run_scenario, RunReport};

use serde::{Deserialize, Serialize};

use crate::collective::EmitterChain;
use crate::greens::{
    BandgapModel, CavityModel, FrequencyRule, LayeredStack, RateUnits, ReservoirModel,
    SampledTable, Slab, SpatialProfile, TabulatedCoupling, WaveguideModel,
};
use crate::spectra::DriveProfile;
use crate::{Error, Result, C64};

fn default_points() -> usize {
    2001
}

fn default_true() -> bool {
    true
}

/// Detuning grid request; `half_width` defaults to ten half-linewidths of
/// the broadest collective feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub half_width: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            half_width: None,
            points: default_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Waveguide {
        gamma_1d: f64,
    },
    Cavity {
        mirror_reflectivity: f64,
        mode_index: u32,
        kappa_c: f64,
        g0: f64,
        #[serde(default)]
        delta_c: f64,
    },
    HighQCavity {
        mirror_reflectivity: f64,
        mode_index: u32,
        kappa_c: f64,
        g0: f64,
        #[serde(default)]
        delta_c: f64,
    },
    Bandgap {
        j_max: f64,
        kappa_x: f64,
        #[serde(default)]
        residual_gamma: f64,
    },
    Stack {
        slabs: Vec<SlabConfig>,
        #[serde(default = "default_unity")]
        outer_permittivity: f64,
        #[serde(default = "default_unity")]
        mode_area: f64,
        #[serde(default = "default_unity")]
        gamma_ref: f64,
        #[serde(default = "default_unity")]
        omega: f64,
    },
    TabulatedCavity {
        g0: f64,
        kappa_c: f64,
        #[serde(default)]
        delta_c: f64,
        #[serde(default)]
        profile: ProfileConfig,
    },
    TabulatedSamples {
        grid: Vec<f64>,
        values: Vec<(f64, f64)>,
        #[serde(default)]
        profile: ProfileConfig,
    },
}

fn default_unity() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlabConfig {
    pub thickness: f64,
    /// Relative permittivity as (Re, Im).
    pub permittivity: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    #[default]
    Uniform,
    CavityCosine {
        mode_index: u32,
    },
}

impl ModelConfig {
    pub fn build(&self) -> Result<ReservoirModel> {
        let model = match self {
            ModelConfig::Waveguide { gamma_1d } => {
                ReservoirModel::Waveguide(WaveguideModel {
                    gamma_1d: *gamma_1d,
                })
            }
            ModelConfig::Cavity {
                mirror_reflectivity,
                mode_index,
                kappa_c,
                g0,
                delta_c,
            } => ReservoirModel::Cavity(CavityModel {
                mirror_reflectivity: *mirror_reflectivity,
                mode_index: *mode_index,
                kappa_c: *kappa_c,
                g0: *g0,
                delta_c: *delta_c,
            }),
            ModelConfig::HighQCavity {
                mirror_reflectivity,
                mode_index,
                kappa_c,
                g0,
                delta_c,
            } => ReservoirModel::HighQCavity(CavityModel {
                mirror_reflectivity: *mirror_reflectivity,
                mode_index: *mode_index,
                kappa_c: *kappa_c,
                g0: *g0,
                delta_c: *delta_c,
            }),
            ModelConfig::Bandgap {
                j_max,
                kappa_x,
                residual_gamma,
            } => ReservoirModel::Bandgap(BandgapModel {
                j_max: *j_max,
                kappa_x: *kappa_x,
                residual_gamma: *residual_gamma,
            }),
            ModelConfig::Stack {
                slabs,
                outer_permittivity,
                mode_area,
                gamma_ref,
                omega,
            } => ReservoirModel::Stack(LayeredStack {
                slabs: slabs
                    .iter()
                    .map(|s| Slab {
                        thickness: s.thickness,
                        permittivity: C64::new(s.permittivity.0, s.permittivity.1),
                    })
                    .collect(),
                outer_permittivity: C64::new(*outer_permittivity, 0.0),
                mode_area: *mode_area,
                gamma_ref: *gamma_ref,
                omega: *omega,
            }),
            ModelConfig::TabulatedCavity {
                g0,
                kappa_c,
                delta_c,
                profile,
            } => ReservoirModel::Tabulated(TabulatedCoupling {
                rule: FrequencyRule::CavityLorentzian {
                    g0: *g0,
                    kappa_c: *kappa_c,
                    delta_c: *delta_c,
                },
                profile: profile.build(),
            }),
            ModelConfig::TabulatedSamples {
                grid,
                values,
                profile,
            } => ReservoirModel::Tabulated(TabulatedCoupling {
                rule: FrequencyRule::Samples(SampledTable::new(
                    grid.clone(),
                    values.iter().map(|&(re, im)| C64::new(re, im)).collect(),
                )?),
                profile: profile.build(),
            }),
        };
        model.validate()?;
        Ok(model)
    }
}

impl ProfileConfig {
    fn build(&self) -> SpatialProfile {
        match self {
            ProfileConfig::Uniform => SpatialProfile::Uniform,
            ProfileConfig::CavityCosine { mode_index } => SpatialProfile::CavityCosine {
                mode_index: *mode_index,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    Explicit {
        positions: Vec<f64>,
    },
    Regular {
        n: usize,
        #[serde(default)]
        start: f64,
        spacing: f64,
    },
    /// Uniformly random positions over [origin, origin + span); the seed is
    /// mandatory so every realization is reproducible.
    Random {
        n: usize,
        #[serde(default)]
        origin: f64,
        span: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub gamma_prime: f64,
    pub geometry: GeometryConfig,
}

impl ChainConfig {
    pub fn build(&self) -> Result<EmitterChain> {
        let positions = match &self.geometry {
            GeometryConfig::Explicit { positions } => positions.clone(),
            GeometryConfig::Regular { n, start, spacing } => {
                if *n == 0 {
                    return Err(Error::config("chain.geometry.n", "need at least one atom"));
                }
                (0..*n).map(|i| start + spacing * i as f64).collect()
            }
            GeometryConfig::Random {
                n,
                origin,
                span,
                seed,
            } => {
                use rand::{Rng, SeedableRng};
                if *n == 0 {
                    return Err(Error::config("chain.geometry.n", "need at least one atom"));
                }
                if !(*span > 0.0) {
                    return Err(Error::config("chain.geometry.span", "must be positive"));
                }
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                (0..*n).map(|_| origin + span * rng.gen::<f64>()).collect()
            }
        };
        EmitterChain::new(positions, self.gamma_prime)
    }

    pub fn seed(&self) -> Option<u64> {
        match self.geometry {
            GeometryConfig::Random { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// Spacing of a regular chain, if the geometry is regular.
    pub fn regular_spacing(&self) -> Option<f64> {
        match self.geometry {
            GeometryConfig::Regular { spacing, .. } => Some(spacing),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriveConfig {
    #[default]
    LeftProbe,
    Uniform,
    Explicit {
        omegas: Vec<(f64, f64)>,
    },
}

impl DriveConfig {
    pub fn build(
        &self,
        chain: &EmitterChain,
        model: &ReservoirModel,
    ) -> Result<DriveProfile> {
        match self {
            DriveConfig::LeftProbe => DriveProfile::left_probe(chain, model),
            DriveConfig::Uniform => Ok(DriveProfile::uniform(chain.len())),
            DriveConfig::Explicit { omegas } => {
                if omegas.len() != chain.len() {
                    return Err(Error::config(
                        "drive.omegas",
                        "length must match the number of atoms",
                    ));
                }
                Ok(DriveProfile::explicit(
                    omegas.iter().map(|&(re, im)| C64::new(re, im)).collect(),
                ))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(default)]
    pub grid: GridConfig,
    /// Also write the non-interacting companion spectrum (off-diagonal
    /// couplings zeroed).
    #[serde(default)]
    pub non_interacting: bool,
    /// Include the reflection columns (propagating models only).
    #[serde(default = "default_true")]
    pub reflection: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacingSweep {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    /// When set, re-build a regular chain per sweep point and tabulate the
    /// collective shifts and rates against the spacing.
    #[serde(default)]
    pub spacing_sweep: Option<SpacingSweep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialStateConfig {
    /// Fully invert one atom (index into the sorted chain).
    InvertAtom { atom: usize },
    Explicit { amplitudes: Vec<(f64, f64)> },
}

impl Default for InitialStateConfig {
    fn default() -> Self {
        InitialStateConfig::InvertAtom { atom: 0 }
    }
}

fn default_time_points() -> usize {
    2000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    /// Defaults to 8/Γ'.
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default = "default_time_points")]
    pub points: usize,
    #[serde(default)]
    pub delta_a: f64,
    #[serde(default)]
    pub initial: InitialStateConfig,
    /// Also write the non-interacting trace (off-diagonal couplings zeroed).
    #[serde(default)]
    pub non_interacting: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EitConfig {
    pub omega_c: f64,
    #[serde(default)]
    pub grid: GridConfig,
}

fn default_map_points() -> usize {
    201
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreensMapConfig {
    pub from: f64,
    pub to: f64,
    #[serde(default = "default_map_points")]
    pub points: usize,
    /// Override the evaluation frequency (stack model only).
    #[serde(default)]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonMarkovConfig {
    #[serde(default)]
    pub grid: GridConfig,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Analyses {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<ModesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eit: Option<EitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub greens_map: Option<GreensMapConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonmarkov: Option<NonMarkovConfig>,
}

impl Analyses {
    pub fn is_empty(&self) -> bool {
        self.spectrum.is_none()
            && self.modes.is_none()
            && self.dynamics.is_none()
            && self.eit.is_none()
            && self.greens_map.is_none()
            && self.nonmarkov.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub units: RateUnits,
    pub model: ModelConfig,
    pub chain: ChainConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    pub analyses: Analyses,
}

impl ScenarioConfig {
    /// Parse and validate a configuration document, with optional dotted-path
    /// overrides applied before validation.
    pub fn load(document: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(document)?;
        for (path, raw) in overrides {
            apply_override(&mut value, path, raw)?;
        }
        let config: ScenarioConfig =
            serde_json::from_value(value).map_err(|e| Error::Config {
                path: "<document>".into(),
                message: e.to_string(),
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let model = self.model.build()?;
        let chain = self.chain.build()?;
        if self.analyses.is_empty() {
            return Err(Error::config(
                "analyses",
                "request at least one analysis (spectrum, modes, dynamics, eit, greens_map, nonmarkov)",
            ));
        }
        if let Some(eit) = &self.analyses.eit {
            if !(eit.omega_c > 0.0) {
                return Err(Error::config("analyses.eit.omega_c", "must be positive"));
            }
            if self.chain.regular_spacing().is_none() {
                return Err(Error::config(
                    "analyses.eit",
                    "k_eff requires a regular chain geometry",
                ));
            }
        }
        if let Some(spectrum) = &self.analyses.spectrum {
            if !model.supports_propagation() {
                return Err(Error::NoPropagatingChannel { model: model.name() });
            }
            if spectrum.grid.points < 2 {
                return Err(Error::config("analyses.spectrum.grid.points", "need >= 2"));
            }
        }
        if self.analyses.nonmarkov.is_some()
            && !matches!(self.model, ModelConfig::TabulatedCavity { .. }
                | ModelConfig::TabulatedSamples { .. })
        {
            return Err(Error::config(
                "analyses.nonmarkov",
                "needs a frequency-resolved (tabulated) model",
            ));
        }
        if let Some(d) = &self.analyses.dynamics {
            if let InitialStateConfig::InvertAtom { atom } = d.initial {
                if atom >= chain.len() {
                    return Err(Error::config(
                        "analyses.dynamics.initial.atom",
                        format!("index {atom} out of range for {} atoms", chain.len()),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Canonical JSON form (defaults materialized, keys in schema order).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Set a dotted-path key in a JSON document to a literal (parsed as JSON if
/// possible, else kept as a string).
fn apply_override(value: &mut serde_json::Value, path: &str, raw: &str) -> Result<()> {
    let parsed: serde_json::Value = serde_json::from_str(raw)
        .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    let mut cursor = value;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        let map = cursor.as_object_mut().ok_or_else(|| {
            Error::config(path, format!("`{part}` does not address a JSON object"))
        })?;
        if last {
            map.insert(part.to_string(), parsed);
            return Ok(());
        }
        cursor = map
            .entry(part.to_string())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
    }
    Ok(())
}
