// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit status: 0 success, 1 failed invariant, 2 configuration or domain
//! error (including argument errors), 3 I/O error.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analytic;
use crate::channel::{self, SimulationParams};
use crate::config::RunConfig;
use crate::entanglement;
use crate::envelope::{running_area_on, EnvelopeKind, Parity};
use crate::error::{Error, Result};
use crate::output::{self, CsvWriter, Field, SweepChannels};
use crate::svg;
use crate::sweep::{self, SweepResult};
use crate::twolevel;
use crate::units::{au_to_ev, au_to_fs};
use crate::validate::{self, Setup};
use crate::C64;

#[derive(Debug, Parser)]
#[command(
    name = "gedoublet",
    version,
    about = "Channel-resolved photoelectron spectra and electron-ion entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single run: channel-resolved spectrum.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep over pulse area, or over area and detuning.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Area)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Closed-form or stationary-phase amplitudes and their comparison with
    /// the numerical pipeline (depletion off).
    Analytic {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ionic two-level trajectory a(t), b(t).
    Twolevel {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Invariant suite; writes report.txt.
    Validate {
        /// Atom, field and time-grid settings; helium defaults otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Area,
    Detuning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Model {
    ZeroFlattop,
    EvenFlattop,
    Spa,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Cell { source, .. } => exit_code(source),
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status. Diagnostics go to stderr.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli.command) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_INVARIANT,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs one command; `Ok(false)` means an invariant failed.
pub fn run(cmd: &Command) -> Result<bool> {
    match cmd {
        Command::Spectrum { config, out } => cmd_spectrum(&RunConfig::load(config)?, out).map(|_| true),
        Command::Sweep {
            config,
            mode,
            out,
            threads,
        } => cmd_sweep(&RunConfig::load(config)?, *mode, out, *threads).map(|_| true),
        Command::Analytic { config, model, out } => cmd_analytic(&RunConfig::load(config)?, *model, out).map(|_| true),
        Command::Twolevel { config, out } => cmd_twolevel(&RunConfig::load(config)?, out).map(|_| true),
        Command::Validate { config, out } => {
            let cfg = config.as_deref().map(RunConfig::load).transpose()?;
            cmd_validate(cfg.as_ref(), out)
        }
    }
}

fn warn(lines: &[String]) {
    for w in lines {
        eprintln!("warning: {w}");
    }
}

fn write_svg(dir: &Path, name: &str, doc: &str) -> Result<PathBuf> {
    output::write_text(&dir.join(name), doc)
}

fn single_run(cfg: &RunConfig) -> Result<(SimulationParams, channel::ChannelAmplitudes)> {
    let p = cfg.simulation_params()?;
    let energy = cfg.energy_grid()?;
    let theta = cfg.area()?;
    let cell = sweep::simulate(&p, theta, &energy, cfg.grids.time_points)?;
    let amps = cell.amplitudes.expect("simulate keeps amplitudes");
    Ok((p, amps))
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let (_, amps) = single_run(cfg)?;
    warn(&amps.warnings);
    output::ensure_dir(out)?;
    let mut files = vec![output::write_spectrum(out, &amps)?];
    let s = channel::spectrum(&amps);
    let eps: Vec<f64> = amps.grid.values().into_iter().map(au_to_ev).collect();
    let doc = svg::line_plot(
        "Photoelectron spectrum",
        "epsilon (eV)",
        "density (a.u.)",
        &eps,
        &[
            ("total", &s.total),
            ("alpha (ion ground)", &s.alpha_abs2),
            ("beta (ion excited)", &s.beta_abs2),
        ],
    );
    files.push(write_svg(out, "spectrum.svg", &doc)?);
    let pops = channel::ion_populations(&amps);
    let s_vn = entanglement::entanglement_entropy(&amps).map_or("undefined".to_string(), |v| format!("{v:.6}"));
    println!(
        "P_a {:.6e}  P_b {:.6e}  P_ion {:.6e}  survival^2 {:.6e}  S_vN {}",
        pops.p_a,
        pops.p_b,
        pops.p_ion,
        amps.survival.powi(2),
        s_vn
    );
    Ok(files)
}

fn heat_rows(r: &SweepResult, pick: impl Fn(&channel::Spectrum) -> &[f64]) -> Vec<Vec<f64>> {
    let n = r.energy.len();
    r.cells
        .iter()
        .enumerate()
        .map(|(i, _)| match r.spectra.as_ref().map(|s| &s[i]) {
            Some(s) => pick(s).to_vec(),
            None => vec![0.0; n],
        })
        .collect()
}

pub fn cmd_sweep(cfg: &RunConfig, mode: Mode, out: &Path, threads: Option<usize>) -> Result<Vec<PathBuf>> {
    let mut sc = cfg.sweep_config()?;
    sc.threads = threads;
    let result = match mode {
        Mode::Area => {
            sc.detuning_axis = vec![sc.base.detuning];
            sweep::sweep_area(&sc)?
        }
        Mode::Detuning => {
            // Channel-resolved spectra for every (detuning, area) cell are
            // rarely wanted and triple the file size.
            sc.outputs.channel_spectra = false;
            sweep::sweep_detuning(&sc)?
        }
    };
    for c in &result.cells {
        for w in &c.warnings {
            eprintln!("warning: theta = {:.4}pi: {w}", c.theta / PI);
        }
    }
    output::ensure_dir(out)?;
    let channels = SweepChannels {
        total: sc.outputs.spectra,
        resolved: sc.outputs.channel_spectra,
    };
    let mut files = vec![
        output::write_sweep(out, &result, channels)?,
        output::write_populations(out, &result)?,
    ];
    let eps: Vec<f64> = result.energy.values().into_iter().map(au_to_ev).collect();
    let areas: Vec<f64> = result.area_axis.iter().map(|a| a / PI).collect();
    match mode {
        Mode::Area => {
            let mut maps: Vec<(&str, &str, Vec<Vec<f64>>)> =
                vec![("sweep_total.svg", "Total spectrum", heat_rows(&result, |s| &s.total))];
            if channels.resolved {
                maps.push((
                    "sweep_alpha.svg",
                    "Ion ground channel",
                    heat_rows(&result, |s| &s.alpha_abs2),
                ));
                maps.push((
                    "sweep_beta.svg",
                    "Ion excited channel",
                    heat_rows(&result, |s| &s.beta_abs2),
                ));
            }
            for (name, title, rows) in maps {
                let doc = svg::heatmap(title, "epsilon (eV)", "theta / pi", &eps, &areas, &rows);
                files.push(write_svg(out, name, &doc)?);
            }
            let row = result.area_row(0);
            let col = |f: fn(&sweep::CellRecord) -> f64| row.iter().map(f).collect::<Vec<f64>>();
            let (pa, pb, pion, s) = (col(|c| c.p_a), col(|c| c.p_b), col(|c| c.p_ion), col(|c| c.s_vn));
            let doc = svg::line_plot(
                "Ion populations and entanglement",
                "theta / pi",
                "value",
                &areas,
                &[("P_a", &pa), ("P_b", &pb), ("P_ion", &pion), ("S_vN", &s)],
            );
            files.push(write_svg(out, "populations.svg", &doc)?);
        }
        Mode::Detuning => {
            let det: Vec<f64> = result.detuning_axis.iter().map(|d| au_to_ev(*d)).collect();
            let rows: Vec<Vec<f64>> = (0..det.len())
                .map(|d| result.area_row(d).iter().map(|c| c.s_vn).collect())
                .collect();
            let doc = svg::heatmap(
                "Entanglement entropy",
                "theta / pi",
                "detuning (eV)",
                &areas,
                &det,
                &rows,
            );
            files.push(write_svg(out, "entropy.svg", &doc)?);
        }
    }
    println!("{} cells written to {}", result.cells.len(), out.display());
    Ok(files)
}

fn require_kind(p: &SimulationParams, kind: EnvelopeKind, model: &str) -> Result<()> {
    if p.env.kind() != kind {
        return Err(Error::Config(format!(
            "model {model} needs envelope kind {}, config has {}",
            kind.name(),
            p.env.kind().name()
        )));
    }
    Ok(())
}

pub fn cmd_analytic(cfg: &RunConfig, model: Model, out: &Path) -> Result<Vec<PathBuf>> {
    let mut p = cfg.simulation_params()?;
    p.depletion_enabled = false;
    if p.detuning != 0.0 {
        return Err(Error::domain("analytic models are resonant; set detuning_ev = 0"));
    }
    let grid = cfg.energy_grid()?;
    let eps = grid.values();
    let mut rows: Vec<(C64, C64)> = Vec::with_capacity(eps.len());
    output::ensure_dir(out)?;
    let analytic_path = out.join("analytic.csv");
    match model {
        Model::ZeroFlattop | Model::EvenFlattop => {
            let (kind, name) = match model {
                Model::ZeroFlattop => (EnvelopeKind::ZeroFlattop, "zero_flattop"),
                _ => (EnvelopeKind::Flattop, "even_flattop"),
            };
            require_kind(&p, kind, name)?;
            rows = validate::closed_form(&p, &grid)?;
            let mut w = CsvWriter::create(
                &analytic_path,
                &["epsilon_ev", "alpha_re", "alpha_im", "beta_re", "beta_im"],
            )?;
            for (e, (a, b)) in eps.iter().zip(&rows) {
                w.row(&[
                    Field::F(au_to_ev(*e)),
                    Field::F(a.re),
                    Field::F(a.im),
                    Field::F(b.re),
                    Field::F(b.im),
                ])?;
            }
            w.finish()?;
        }
        Model::Spa => {
            match p.env.symmetry_class().map(|s| s.parity) {
                Some(Parity::Odd) => {}
                _ => {
                    return Err(Error::domain(format!(
                        "stationary-phase model covers odd envelopes only, not {}",
                        p.env.kind().name()
                    )))
                }
            }
            let mut w = CsvWriter::create(
                &analytic_path,
                &[
                    "epsilon_ev",
                    "alpha_re",
                    "alpha_im",
                    "beta_re",
                    "beta_im",
                    "eta",
                    "phi",
                    "status",
                ],
            )?;
            for &e in &eps {
                let (fields, status, pair) = match analytic::spa_amplitudes(&p, e) {
                    Ok(r) => {
                        let status = if e == 0.0 {
                            "zero_energy"
                        } else if r.stationary_times.is_empty() {
                            "no_stationary_point"
                        } else {
                            "ok"
                        };
                        (
                            [r.alpha.re, r.alpha.im, r.beta.re, r.beta.im, r.eta, r.phi],
                            status,
                            (r.alpha, r.beta),
                        )
                    }
                    Err(Error::Domain(msg)) if msg.contains("caustic") => {
                        let nan = C64::new(f64::NAN, f64::NAN);
                        ([f64::NAN; 6], "caustic", (nan, nan))
                    }
                    Err(err) => return Err(err),
                };
                rows.push(pair);
                let mut f = vec![Field::F(au_to_ev(e))];
                f.extend(fields.iter().map(|v| Field::F(*v)));
                f.push(Field::S(status));
                w.row(&f)?;
            }
            w.finish()?;
        }
    }
    let num = channel::final_amplitudes_on(&p, &sweep_time_grid(cfg, &p, &grid)?, &grid)?;
    warn(&num.warnings);
    let finite: Vec<(C64, C64)> = rows
        .iter()
        .map(|&(a, b)| {
            if a.is_nan() || b.is_nan() {
                (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
            } else {
                (a, b)
            }
        })
        .collect();
    let scale = finite.iter().map(|(a, b)| a.norm().max(b.norm())).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut w = CsvWriter::create(
        out.join("compare.csv"),
        &[
            "epsilon_ev",
            "alpha_num_re",
            "alpha_num_im",
            "beta_num_re",
            "beta_num_im",
            "alpha_rel_err",
            "beta_rel_err",
        ],
    )?;
    let mut worst = 0.0_f64;
    for i in 0..grid.len() {
        let (a, b) = rows[i];
        let (ea, eb) = ((num.alpha[i] - a).norm() / scale, (num.beta[i] - b).norm() / scale);
        if ea.is_finite() && eb.is_finite() {
            worst = worst.max(ea.max(eb));
        }
        w.row(&[
            Field::F(au_to_ev(eps[i])),
            Field::F(num.alpha[i].re),
            Field::F(num.alpha[i].im),
            Field::F(num.beta[i].re),
            Field::F(num.beta[i].im),
            Field::F(ea),
            Field::F(eb),
        ])?;
    }
    let compare = w.finish()?;
    println!("max relative error (normalized by max |analytic|): {worst:.3e}");
    Ok(vec![analytic_path, compare])
}

fn sweep_time_grid(cfg: &RunConfig, p: &SimulationParams, energy: &crate::EnergyGrid) -> Result<crate::TimeGrid> {
    Setup {
        base: *p,
        time_points: cfg.grids.time_points,
    }
    .time_grid(p, energy)
}

pub fn cmd_twolevel(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let p = cfg.simulation_params()?;
    let grid = sweep_time_grid(cfg, &p, &cfg.energy_grid()?)?;
    let traj = twolevel::propagate(&p.twolevel(), &grid)?;
    let theta = running_area_on(&p.env, p.omega0_rabi(), &traj.times);
    output::ensure_dir(out)?;
    let mut w = CsvWriter::create(
        out.join("twolevel.csv"),
        &["time_fs", "a_re", "a_im", "b_re", "b_im", "pop_a", "pop_b", "theta"],
    )?;
    for (k, th) in theta.iter().enumerate() {
        let (a, b) = (traj.a[k], traj.b[k]);
        w.row(&[
            Field::F(au_to_fs(traj.times[k])),
            Field::F(a.re),
            Field::F(a.im),
            Field::F(b.re),
            Field::F(b.im),
            Field::F(a.norm_sqr()),
            Field::F(b.norm_sqr()),
            Field::F(*th),
        ])?;
    }
    let csv = w.finish()?;
    let t_fs: Vec<f64> = traj.times.iter().map(|t| au_to_fs(*t)).collect();
    let pa: Vec<f64> = traj.a.iter().map(|a| a.norm_sqr()).collect();
    let pb: Vec<f64> = traj.b.iter().map(|b| b.norm_sqr()).collect();
    let doc = svg::line_plot(
        "Ionic populations",
        "t (fs)",
        "population",
        &t_fs,
        &[("|a|^2", &pa), ("|b|^2", &pb)],
    );
    Ok(vec![csv, write_svg(out, "twolevel.svg", &doc)?])
}

/// Returns whether every check passed.
pub fn cmd_validate(cfg: Option<&RunConfig>, out: &Path) -> Result<bool> {
    let setup = match cfg {
        Some(c) => Setup {
            base: c.base_params()?,
            time_points: c.grids.time_points,
        },
        None => Setup::helium(),
    };
    let report = validate::run(&setup);
    let text = report.render();
    output::ensure_dir(out)?;
    output::write_text(&out.join("report.txt"), &text)?;
    print!("{text}");
    Ok(report.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), EXIT_CONFIG);
        assert_eq!(exit_code(&Error::Degenerate("x".into())), EXIT_CONFIG);
        let io = Error::io("/nope", std::io::Error::other("x"));
        assert_eq!(exit_code(&io), EXIT_IO);
        let cell = Error::Cell {
            label: "1pi".into(),
            source: Box::new(Error::io("/nope", std::io::Error::other("x"))),
        };
        assert_eq!(exit_code(&cell), EXIT_IO);
    }

    #[test]
    fn argument_errors_are_config_errors() {
        assert_eq!(main_from(["gedoublet", "sweep", "--mode", "diagonal"]), EXIT_CONFIG);
        assert_eq!(main_from(["gedoublet"]), EXIT_CONFIG);
    }

    #[test]
    fn missing_config_is_an_io_error() {
        assert_eq!(
            main_from(["gedoublet", "spectrum", "--config", "/no/such.toml", "--out", "/tmp"]),
            EXIT_IO
        );
    }
}
