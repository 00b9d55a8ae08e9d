//! Scenario execution: analyses run in dependency order (coupling matrix →
//! decomposition → spectra/dynamics/EIT), results land as CSV files plus one
//! JSON metadata sidecar, all stamped with the configuration hash.
//!
//! CSV conventions: '.' decimal separator, '\n' line endings, scientific
//! notation with 17 significant digits, a `# config_hash=` comment line on
//! top. Reruns of the same (seeded) configuration are byte identical.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Array1;
use serde::Serialize;

use super::{GreensMapConfig, InitialStateConfig, ScenarioConfig};
use crate::collective::{
    build_coupling_matrix, classify_modes, decompose, CouplingMatrix, EmitterChain,
};
use crate::dynamics::{evolve, time_grid, TimeTrace};
use crate::eit::{eit_transmission, keff_from_transmission};
use crate::greens::ReservoirModel;
use crate::spectra::{
    linear_grid, nonmarkov_spectrum, transmission_reflection, SpectrumTable,
};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub label: String,
    pub config_hash: String,
    pub outputs: Vec<PathBuf>,
}

/// Compute a configuration's spectrum analysis in memory (no file output);
/// the grid is resolved exactly as in `run_scenario`.
pub fn compute_spectrum(config: &ScenarioConfig) -> Result<SpectrumTable> {
    config.validate()?;
    let cfg = config
        .analyses
        .spectrum
        .as_ref()
        .ok_or_else(|| Error::config("analyses.spectrum", "not requested"))?;
    let model = config.model.build()?;
    let chain = config.chain.build()?;
    let matrix = build_coupling_matrix(&chain, &model)?;
    let grid = resolve_grid(&cfg.grid, config.chain.gamma_prime, &matrix)?;
    transmission_reflection(&grid, &matrix, config.chain.gamma_prime, &chain, &model)
}

/// Execute every requested analysis of a validated configuration, writing
/// `<label>_<analysis>.csv` files plus `<label>_meta.json` under `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path, label: &str) -> Result<RunReport> {
    config.validate()?;
    let hash = config.hash();
    let model = config.model.build()?;
    let chain = config.chain.build()?;
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::io(format!("creating {}", out_dir.display()), e))?;

    let mut outputs = Vec::new();
    let mut emit = |name: String| -> PathBuf {
        let path = out_dir.join(name);
        outputs.push(path.clone());
        path
    };

    if let Some(cfg) = &config.analyses.spectrum {
        let matrix = build_coupling_matrix(&chain, &model)?;
        let grid = resolve_grid(&cfg.grid, config.chain.gamma_prime, &matrix)?;
        let table = transmission_reflection(&grid, &matrix, config.chain.gamma_prime, &chain, &model)?;
        write_spectrum(
            &emit(format!("{label}_spectrum.csv")),
            &hash,
            &table,
            cfg.reflection,
        )?;
        if cfg.non_interacting {
            let diag = matrix.non_interacting();
            let table =
                transmission_reflection(&grid, &diag, config.chain.gamma_prime, &chain, &model)?;
            write_spectrum(
                &emit(format!("{label}_spectrum_noninteracting.csv")),
                &hash,
                &table,
                cfg.reflection,
            )?;
        }
    }

    if let Some(cfg) = &config.analyses.modes {
        let path = emit(format!("{label}_modes.csv"));
        match &cfg.spacing_sweep {
            None => {
                let matrix = build_coupling_matrix(&chain, &model)?;
                let modes = decompose(&matrix)?;
                write_mode_table(&path, &hash, None, &modes)?;
            }
            Some(sweep) => {
                if sweep.points < 2 {
                    return Err(Error::config(
                        "analyses.modes.spacing_sweep.points",
                        "need >= 2",
                    ));
                }
                let n = chain.len();
                let mut blocks = Vec::with_capacity(sweep.points);
                for k in 0..sweep.points {
                    let d = sweep.from
                        + (sweep.to - sweep.from) * k as f64 / (sweep.points - 1) as f64;
                    let swept =
                        EmitterChain::regular(n, 0.0, d, config.chain.gamma_prime)?;
                    let matrix = build_coupling_matrix(&swept, &model)?;
                    blocks.push((d, decompose(&matrix)?));
                }
                write_mode_sweep(&path, &hash, &blocks)?;
            }
        }
    }

    if let Some(cfg) = &config.analyses.dynamics {
        let matrix = build_coupling_matrix(&chain, &model)?;
        let t_max = match cfg.t_max {
            Some(t) => t,
            None => {
                if config.chain.gamma_prime > 0.0 {
                    8.0 / config.chain.gamma_prime
                } else {
                    return Err(Error::config(
                        "analyses.dynamics.t_max",
                        "required when gamma_prime = 0",
                    ));
                }
            }
        };
        let times = time_grid(t_max, cfg.points);
        let initial = initial_state(&cfg.initial, chain.len())?;
        let trace = evolve(
            &matrix,
            config.chain.gamma_prime,
            cfg.delta_a,
            &initial,
            &times,
        )?;
        write_dynamics(&emit(format!("{label}_dynamics.csv")), &hash, &trace)?;
        if cfg.non_interacting {
            let trace = evolve(
                &matrix.non_interacting(),
                config.chain.gamma_prime,
                cfg.delta_a,
                &initial,
                &times,
            )?;
            write_dynamics(
                &emit(format!("{label}_dynamics_noninteracting.csv")),
                &hash,
                &trace,
            )?;
        }
    }

    if let Some(cfg) = &config.analyses.eit {
        let matrix = build_coupling_matrix(&chain, &model)?;
        let spacing = config
            .chain
            .regular_spacing()
            .expect("validated: regular geometry");
        let grid = resolve_grid(&cfg.grid, config.chain.gamma_prime, &matrix)?;
        let modes = decompose(&matrix)?;
        let table = eit_transmission(
            &grid,
            &modes.eigenvalues,
            config.chain.gamma_prime,
            cfg.omega_c,
        )?;
        let keff = keff_from_transmission(&table, chain.len(), spacing);
        write_eit(&emit(format!("{label}_eit.csv")), &hash, &table, &keff, spacing)?;
    }

    if let Some(cfg) = &config.analyses.greens_map {
        let map_model = override_omega(&model, cfg)?;
        write_greens_map(
            &emit(format!("{label}_greens.csv")),
            &hash,
            &map_model,
            cfg,
        )?;
    }

    if let Some(cfg) = &config.analyses.nonmarkov {
        let frozen = build_coupling_matrix(&chain, &model)?;
        let grid = resolve_grid(&cfg.grid, config.chain.gamma_prime, &frozen)?;
        let spectra = nonmarkov_spectrum(&grid, &chain, &model, config.chain.gamma_prime)?;
        write_spectrum(
            &emit(format!("{label}_nonmarkov.csv")),
            &hash,
            &spectra.nonmarkov,
            false,
        )?;
        write_spectrum(
            &emit(format!("{label}_markov.csv")),
            &hash,
            &spectra.markov,
            false,
        )?;
    }

    let meta_path = out_dir.join(format!("{label}_meta.json"));
    write_metadata(&meta_path, config, &hash, label, &chain, &outputs)?;
    outputs.push(meta_path);

    Ok(RunReport {
        label: label.to_string(),
        config_hash: hash,
        outputs,
    })
}

fn initial_state(cfg: &InitialStateConfig, n: usize) -> Result<Array1<C64>> {
    match cfg {
        InitialStateConfig::InvertAtom { atom } => {
            let mut c = Array1::zeros(n);
            c[*atom] = C64::new(1.0, 0.0);
            Ok(c)
        }
        InitialStateConfig::Explicit { amplitudes } => {
            if amplitudes.len() != n {
                return Err(Error::config(
                    "analyses.dynamics.initial.amplitudes",
                    "length must match the number of atoms",
                ));
            }
            Ok(Array1::from_iter(
                amplitudes.iter().map(|&(re, im)| C64::new(re, im)),
            ))
        }
    }
}

fn resolve_grid(
    cfg: &super::GridConfig,
    gamma_prime: f64,
    matrix: &CouplingMatrix,
) -> Result<Vec<f64>> {
    let half_width = match cfg.half_width {
        Some(hw) => hw,
        None => {
            let (vals, _) = crate::linalg::eig(matrix.entries())?;
            let max_rate = vals.iter().map(|l| 2.0 * l.im).fold(0.0, f64::max).max(0.0);
            10.0 * 0.5 * (gamma_prime + max_rate)
        }
    };
    if !(half_width > 0.0) {
        return Err(Error::config("grid.half_width", "must be positive"));
    }
    Ok(linear_grid(half_width, cfg.points))
}

fn override_omega(model: &ReservoirModel, cfg: &GreensMapConfig) -> Result<ReservoirModel> {
    match (cfg.omega, model) {
        (None, m) => Ok(m.clone()),
        (Some(omega), ReservoirModel::Stack(stack)) => {
            let mut stack = stack.clone();
            stack.omega = omega;
            Ok(ReservoirModel::Stack(stack))
        }
        (Some(_), _) => Err(Error::config(
            "analyses.greens_map.omega",
            "frequency override applies to the stack model only",
        )),
    }
}

/// 17 significant digits, scientific notation.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn open_csv(path: &Path, hash: &str, header: &str) -> Result<BufWriter<fs::File>> {
    let file = fs::File::create(path)
        .map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    let mut w = BufWriter::new(file);
    write!(w, "# config_hash={hash}\n{header}\n")
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    Ok(w)
}

fn finish(mut w: BufWriter<fs::File>, path: &Path) -> Result<()> {
    w.flush()
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn write_spectrum(
    path: &Path,
    hash: &str,
    table: &SpectrumTable,
    include_reflection: bool,
) -> Result<()> {
    let with_r = include_reflection && table.reflection.is_some();
    let header = if with_r {
        "delta_a,re_t,im_t,transmittance,re_r,im_r,reflectance"
    } else {
        "delta_a,re_t,im_t,transmittance"
    };
    let mut w = open_csv(path, hash, header)?;
    for (i, &delta) in table.delta.iter().enumerate() {
        let t = table.t_over_t0[i];
        let mut line = format!(
            "{},{},{},{}",
            fmt(delta),
            fmt(t.re),
            fmt(t.im),
            fmt(t.norm_sqr())
        );
        if with_r {
            let r = table.reflection.as_ref().unwrap()[i];
            line.push_str(&format!(",{},{},{}", fmt(r.re), fmt(r.im), fmt(r.norm_sqr())));
        }
        writeln!(w, "{line}").map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    }
    finish(w, path)
}

fn mode_rows(modes: &crate::collective::ModeDecomposition) -> Vec<String> {
    classify_modes(modes)
        .iter()
        .map(|m| {
            format!(
                "{},{},{},{},{},{}",
                m.index,
                fmt(m.lambda_re),
                fmt(m.lambda_im),
                fmt(m.shift),
                fmt(m.rate),
                u8::from(m.bright)
            )
        })
        .collect()
}

fn write_mode_table(
    path: &Path,
    hash: &str,
    spacing: Option<f64>,
    modes: &crate::collective::ModeDecomposition,
) -> Result<()> {
    let mut w = open_csv(path, hash, "xi,re_lambda,im_lambda,j_1d,gamma_1d,bright")?;
    debug_assert!(spacing.is_none());
    for row in mode_rows(modes) {
        writeln!(w, "{row}").map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    }
    finish(w, path)
}

fn write_mode_sweep(
    path: &Path,
    hash: &str,
    blocks: &[(f64, crate::collective::ModeDecomposition)],
) -> Result<()> {
    let mut w = open_csv(path, hash, "spacing,xi,re_lambda,im_lambda,j_1d,gamma_1d,bright")?;
    for (d, modes) in blocks {
        for row in mode_rows(modes) {
            writeln!(w, "{},{row}", fmt(*d))
                .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        }
    }
    finish(w, path)
}

fn write_dynamics(path: &Path, hash: &str, trace: &TimeTrace) -> Result<()> {
    let n = trace.n_atoms();
    let header = {
        let mut h = String::from("time");
        for i in 1..=n {
            h.push_str(&format!(",p_{i}"));
        }
        h.push_str(",total");
        h
    };
    let mut w = open_csv(path, hash, &header)?;
    for (k, &t) in trace.times.iter().enumerate() {
        let mut line = fmt(t);
        for i in 0..n {
            line.push(',');
            line.push_str(&fmt(trace.populations[(k, i)]));
        }
        line.push(',');
        line.push_str(&fmt(trace.total[k]));
        writeln!(w, "{line}").map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    }
    finish(w, path)
}

fn write_eit(
    path: &Path,
    hash: &str,
    table: &SpectrumTable,
    keff: &[C64],
    spacing: f64,
) -> Result<()> {
    let mut w = open_csv(path, hash, "delta_a,eit_transmittance,re_keff_d,im_keff_d")?;
    for (i, &delta) in table.delta.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            fmt(delta),
            fmt(table.t_over_t0[i].norm_sqr()),
            fmt(keff[i].re * spacing),
            fmt(keff[i].im * spacing)
        )
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    }
    finish(w, path)
}

fn write_greens_map(
    path: &Path,
    hash: &str,
    model: &ReservoirModel,
    cfg: &GreensMapConfig,
) -> Result<()> {
    if cfg.points < 2 {
        return Err(Error::config("analyses.greens_map.points", "need >= 2"));
    }
    if !(cfg.to > cfg.from) {
        return Err(Error::config("analyses.greens_map", "need to > from"));
    }
    let xs: Vec<f64> = (0..cfg.points)
        .map(|i| cfg.from + (cfg.to - cfg.from) * i as f64 / (cfg.points - 1) as f64)
        .collect();
    let mut w = open_csv(path, hash, "x,x_prime,re_g,im_g")?;
    for &x in &xs {
        for &xp in &xs {
            let g = model.coupling(x, xp)?;
            writeln!(w, "{},{},{},{}", fmt(x), fmt(xp), fmt(g.re), fmt(g.im))
                .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        }
    }
    finish(w, path)
}

#[derive(Serialize)]
struct Metadata<'a> {
    label: &'a str,
    config_hash: &'a str,
    units: &'a crate::greens::RateUnits,
    n_atoms: usize,
    positions: &'a [f64],
    seed: Option<u64>,
    outputs: Vec<String>,
    config: &'a ScenarioConfig,
}

fn write_metadata(
    path: &Path,
    config: &ScenarioConfig,
    hash: &str,
    label: &str,
    chain: &EmitterChain,
    outputs: &[PathBuf],
) -> Result<()> {
    let meta = Metadata {
        label,
        config_hash: hash,
        units: &config.units,
        n_atoms: chain.len(),
        positions: chain.positions(),
        seed: config.chain.seed(),
        outputs: outputs
            .iter()
            .map(|p| {
                p.file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            })
            .collect(),
        config,
    };
    let json = serde_json::to_string_pretty(&meta)?;
    fs::write(path, json + "\n")
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}
