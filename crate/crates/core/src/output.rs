// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV emission. Every float is written with 17 significant digits in
//! scientific notation, lines end in `\n`, and nothing depends on locale.
//! Energies are in eV, times in fs, everything else in atomic units.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::channel::{self, ChannelAmplitudes};
use crate::error::{Error, Result};
use crate::sweep::SweepResult;
use crate::units::au_to_ev;

/// `{:.16e}` keeps 17 significant digits and is round-trip exact.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// One CSV field.
#[derive(Debug, Clone, Copy)]
pub enum Field<'a> {
    F(f64),
    S(&'a str),
    U(usize),
}

impl Field<'_> {
    fn render(&self) -> String {
        match *self {
            Field::F(v) => fmt_f64(v),
            Field::S(s) => s.to_string(),
            Field::U(u) => u.to_string(),
        }
    }
}

/// Buffered CSV file with a fixed header.
pub struct CsvWriter {
    path: PathBuf,
    out: BufWriter<fs::File>,
    columns: usize,
}

impl CsvWriter {
    pub fn create(path: impl AsRef<Path>, header: &[&str]) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = Self {
            path,
            out: BufWriter::new(file),
            columns: header.len(),
        };
        w.line(&header.join(","))?;
        Ok(w)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        self.out
            .write_all(s.as_bytes())
            .and_then(|_| self.out.write_all(b"\n"))
            .map_err(|e| Error::io(&self.path, e))
    }

    pub fn row(&mut self, fields: &[Field]) -> Result<()> {
        debug_assert_eq!(fields.len(), self.columns);
        let s: Vec<String> = fields.iter().map(Field::render).collect();
        self.line(&s.join(","))
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.path)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// `spectrum.csv`: `epsilon_ev,alpha_abs2,beta_abs2,total`.
pub fn write_spectrum(dir: &Path, amps: &ChannelAmplitudes) -> Result<PathBuf> {
    let s = channel::spectrum(amps);
    let mut w = CsvWriter::create(
        dir.join("spectrum.csv"),
        &["epsilon_ev", "alpha_abs2", "beta_abs2", "total"],
    )?;
    for i in 0..amps.grid.len() {
        w.row(&[
            Field::F(au_to_ev(amps.grid.value(i))),
            Field::F(s.alpha_abs2[i]),
            Field::F(s.beta_abs2[i]),
            Field::F(s.total[i]),
        ])?;
    }
    w.finish()
}

/// Channels written to `sweep.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepChannels {
    pub total: bool,
    pub resolved: bool,
}

/// `sweep.csv` in long format: `theta_pi,detuning_ev,epsilon_ev,value,channel`.
pub fn write_sweep(dir: &Path, r: &SweepResult, channels: SweepChannels) -> Result<PathBuf> {
    let mut w = CsvWriter::create(
        dir.join("sweep.csv"),
        &["theta_pi", "detuning_ev", "epsilon_ev", "value", "channel"],
    )?;
    let Some(spectra) = &r.spectra else {
        return w.finish();
    };
    for (cell, s) in r.cells.iter().zip(spectra) {
        let mut series: Vec<(&str, &[f64])> = Vec::new();
        if channels.total {
            series.push(("total", &s.total));
        }
        if channels.resolved {
            series.push(("alpha", &s.alpha_abs2));
            series.push(("beta", &s.beta_abs2));
        }
        for (name, vals) in series {
            for (i, v) in vals.iter().enumerate() {
                w.row(&[
                    Field::F(cell.theta / std::f64::consts::PI),
                    Field::F(au_to_ev(cell.detuning)),
                    Field::F(au_to_ev(r.energy.value(i))),
                    Field::F(*v),
                    Field::S(name),
                ])?;
            }
        }
    }
    w.finish()
}

/// `populations.csv`: `theta_pi,P_a,P_b,P_ion,survival2,S_vN,overlap`, with a
/// leading `detuning_ev` column when the sweep has more than one detuning.
pub fn write_populations(dir: &Path, r: &SweepResult) -> Result<PathBuf> {
    let with_det = r.detuning_axis.len() > 1;
    let mut header = vec!["theta_pi", "P_a", "P_b", "P_ion", "survival2", "S_vN", "overlap"];
    if with_det {
        header.insert(0, "detuning_ev");
    }
    let mut w = CsvWriter::create(dir.join("populations.csv"), &header)?;
    for c in &r.cells {
        let mut f = vec![
            Field::F(c.theta / std::f64::consts::PI),
            Field::F(c.p_a),
            Field::F(c.p_b),
            Field::F(c.p_ion),
            Field::F(c.survival2),
            Field::F(c.s_vn),
            Field::F(c.overlap),
        ];
        if with_det {
            f.insert(0, Field::F(au_to_ev(c.detuning)));
        }
        w.row(&f)?;
    }
    w.finish()
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf> {
    fs::write(path, text).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}
