// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter scans over absolute pulse area and detuning.
//!
//! Each cell is one full simulation at constant peak intensity. Cells run in
//! parallel and land in a table indexed by axis position, so results do not
//! depend on scheduling or worker count.

use rayon::prelude::*;

use crate::channel::{self, ChannelAmplitudes, SimulationParams, Spectrum};
use crate::entanglement;
use crate::envelope::duration_for_area;
use crate::error::{Error, Result};
use crate::grid::{EnergyGrid, TimeGrid};

/// What to keep per cell beyond the scalar record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFlags {
    pub populations: bool,
    pub spectra: bool,
    pub channel_spectra: bool,
    pub entropy: bool,
}

impl Default for OutputFlags {
    fn default() -> Self {
        Self {
            populations: true,
            spectra: true,
            channel_spectra: true,
            entropy: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Everything except `env.tau` and `detuning`, which the axes set.
    pub base: SimulationParams,
    /// Absolute pulse areas (rad).
    pub area_axis: Vec<f64>,
    /// Detunings (a.u.).
    pub detuning_axis: Vec<f64>,
    pub outputs: OutputFlags,
    pub energy: EnergyGrid,
    /// Fixed number of time nodes per cell; automatic when `None`.
    pub time_points: Option<usize>,
    /// Worker count; the global rayon pool when `None`.
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn new(base: SimulationParams, area_axis: Vec<f64>, energy: EnergyGrid) -> Self {
        let detuning_axis = vec![base.detuning];
        Self {
            base,
            area_axis,
            detuning_axis,
            outputs: OutputFlags::default(),
            energy,
            time_points: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_axis("area", &self.area_axis)?;
        check_axis("detuning", &self.detuning_axis)?;
        if self.area_axis[0] < 0.0 {
            return Err(Error::domain("pulse areas must be non-negative"));
        }
        if self.threads == Some(0) {
            return Err(Error::domain("thread count must be positive"));
        }
        Ok(())
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::domain(format!("{name} axis is empty")));
    }
    if axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(format!(
            "{name} axis must be finite and strictly increasing"
        )));
    }
    Ok(())
}

/// Scalar results of one cell. Undefined quantities are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub theta: f64,
    pub detuning: f64,
    pub tau: f64,
    /// No pulse exists (zero area).
    pub degenerate: bool,
    pub p_a: f64,
    pub p_b: f64,
    pub p_ion: f64,
    pub survival2: f64,
    pub s_vn: f64,
    pub overlap: f64,
    pub warnings: Vec<String>,
}

/// Per-cell output of [`simulate`].
#[derive(Debug, Clone)]
pub struct CellOutput {
    pub record: CellRecord,
    pub amplitudes: Option<ChannelAmplitudes>,
}

/// One simulation with `p` exactly as given; `theta` is only recorded.
pub fn simulate(
    p: &SimulationParams,
    theta: f64,
    energy: &EnergyGrid,
    time_points: Option<usize>,
) -> Result<CellOutput> {
    let tgrid = match time_points {
        Some(n) => TimeGrid::with_points(p.time_grid(energy)?.half_span(), n)?,
        None => p.time_grid(energy)?,
    };
    let amps = channel::final_amplitudes_on(p, &tgrid, energy)?;
    let pops = channel::ion_populations(&amps);
    let s_vn = entanglement::entanglement_entropy(&amps).unwrap_or(f64::NAN);
    let overlap = channel::overlap_metric(&amps).unwrap_or(f64::NAN);
    let record = CellRecord {
        theta,
        detuning: p.detuning,
        tau: p.env.tau(),
        degenerate: false,
        p_a: pops.p_a,
        p_b: pops.p_b,
        p_ion: pops.p_ion,
        survival2: amps.survival.powi(2),
        s_vn,
        overlap,
        warnings: amps.warnings.clone(),
    };
    Ok(CellOutput {
        record,
        amplitudes: Some(amps),
    })
}

/// Parameters for a cell at absolute area `theta` and detuning `detuning`.
/// `None` means the area is zero and there is no pulse.
pub fn cell_params(base: &SimulationParams, theta: f64, detuning: f64) -> Result<Option<SimulationParams>> {
    let d = duration_for_area(&base.env, base.omega0_rabi(), theta)?;
    if d.degenerate {
        return Ok(None);
    }
    let mut p = *base;
    p.env = p.env.with_tau(d.tau)?;
    p.detuning = detuning;
    Ok(Some(p))
}

fn run_cell(cfg: &SweepConfig, theta: f64, detuning: f64) -> Result<CellOutput> {
    match cell_params(&cfg.base, theta, detuning)? {
        Some(p) => simulate(&p, theta, &cfg.energy, cfg.time_points),
        None => Ok(CellOutput {
            record: CellRecord {
                theta,
                detuning,
                tau: 0.0,
                degenerate: true,
                p_a: 0.0,
                p_b: 0.0,
                p_ion: 0.0,
                survival2: 1.0,
                s_vn: f64::NAN,
                overlap: f64::NAN,
                warnings: vec!["zero pulse area: no pulse".into()],
            },
            amplitudes: None,
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub area_axis: Vec<f64>,
    pub detuning_axis: Vec<f64>,
    pub energy: EnergyGrid,
    /// Row-major: detuning index outer, area index inner.
    pub cells: Vec<CellRecord>,
    /// Same layout as `cells` when spectra were requested.
    pub spectra: Option<Vec<Spectrum>>,
}

impl SweepResult {
    pub fn cell(&self, detuning_index: usize, area_index: usize) -> &CellRecord {
        &self.cells[detuning_index * self.area_axis.len() + area_index]
    }

    pub fn spectrum(&self, detuning_index: usize, area_index: usize) -> Option<&Spectrum> {
        self.spectra
            .as_ref()
            .map(|s| &s[detuning_index * self.area_axis.len() + area_index])
    }

    /// Records along the area axis at one detuning.
    pub fn area_row(&self, detuning_index: usize) -> &[CellRecord] {
        let n = self.area_axis.len();
        &self.cells[detuning_index * n..(detuning_index + 1) * n]
    }
}

/// Area scan at the base detuning.
pub fn sweep_area(cfg: &SweepConfig) -> Result<SweepResult> {
    let mut c = cfg.clone();
    c.detuning_axis = vec![cfg.base.detuning];
    run(&c)
}

/// Cartesian scan over detuning and area.
pub fn sweep_detuning(cfg: &SweepConfig) -> Result<SweepResult> {
    run(cfg)
}

fn run(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?
            .install(|| run_cells(cfg)),
        None => run_cells(cfg),
    }
}

fn run_cells(cfg: &SweepConfig) -> Result<SweepResult> {
    let na = cfg.area_axis.len();
    let jobs: Vec<(f64, f64)> = cfg
        .detuning_axis
        .iter()
        .flat_map(|&d| cfg.area_axis.iter().map(move |&a| (a, d)))
        .collect();
    let keep = cfg.outputs.spectra || cfg.outputs.channel_spectra;
    let zero = Spectrum {
        alpha_abs2: vec![0.0; cfg.energy.len()],
        beta_abs2: vec![0.0; cfg.energy.len()],
        total: vec![0.0; cfg.energy.len()],
    };
    let outs: Vec<Result<(CellRecord, Option<Spectrum>)>> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(theta, det))| {
            let out = run_cell(cfg, theta, det).map_err(|e| Error::Cell {
                label: format!(
                    "theta = {:.6} pi, detuning = {:.6e} a.u. (#{}, #{})",
                    theta / std::f64::consts::PI,
                    det,
                    i / na,
                    i % na
                ),
                source: Box::new(e),
            })?;
            let spec = keep.then(|| match &out.amplitudes {
                Some(a) => channel::spectrum(a),
                None => zero.clone(),
            });
            let mut rec = out.record;
            if !cfg.outputs.entropy {
                rec.s_vn = f64::NAN;
            }
            Ok((rec, spec))
        })
        .collect();
    let mut cells = Vec::with_capacity(outs.len());
    let mut spectra = keep.then(|| Vec::with_capacity(outs.len()));
    for o in outs {
        let (rec, spec) = o?;
        cells.push(rec);
        if let (Some(v), Some(s)) = (spectra.as_mut(), spec) {
            v.push(s);
        }
    }
    Ok(SweepResult {
        area_axis: cfg.area_axis.clone(),
        detuning_axis: cfg.detuning_axis.clone(),
        energy: cfg.energy,
        cells,
        spectra,
    })
}

/// Local maxima of a sampled curve, endpoints excluded.
pub fn count_local_maxima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] > w[0] && w[1] >= w[2]).count()
}

/// First axis value at which `values` reaches `level`, linearly interpolated.
pub fn first_crossing(axis: &[f64], values: &[f64], level: f64) -> Option<f64> {
    if values.first().is_some_and(|&v| v >= level) {
        return axis.first().copied();
    }
    for i in 1..values.len() {
        let (v0, v1) = (values[i - 1], values[i]);
        if v0 < level && v1 >= level {
            let f = (level - v0) / (v1 - v0);
            return Some(axis[i - 1] + f * (axis[i] - axis[i - 1]));
        }
    }
    None
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}
