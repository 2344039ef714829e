// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration file (TOML). Key names carry their units.
//!
//! ```toml
//! [field]
//! intensity_w_cm2 = 1.25e13
//! detuning_ev = 0.0
//! cep_rad = 0.0
//!
//! [envelope]
//! kind = "zero_gaussian"
//! area_pi = 4.0          # or tau_fs, not both
//! K = 0.5                # smooth_zero steepness (1 / a.u. of time)
//! separation_fs = 5.0    # double_gaussian lobe separation
//!
//! [atom]
//! z_ag = 0.502
//! z_ba = 0.373
//! ion_gap_ev = 40.8
//! binding_energy_ev = 24.587
//!
//! [grids]
//! epsilon_span_ev = 1.0  # half-width of the energy window
//! epsilon_points = 801
//! time_points = 65537    # optional, 2^k + 1
//!
//! [toggles]
//! depletion = true
//!
//! [sweep]
//! area_pi_max = 10.0
//! area_points = 41
//! detuning_ev_max = 0.3
//! detuning_points = 7
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;

use crate::channel::{self, SimulationParams};
use crate::envelope::{absolute_area, duration_for_area, EnvelopeKind, EnvelopeSpec, DEFAULT_STEEPNESS};
use crate::error::{Error, Result};
use crate::grid::EnergyGrid;
use crate::sweep::{linspace, SweepConfig};
use crate::units;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub field: FieldSection,
    pub envelope: EnvelopeSection,
    #[serde(default)]
    pub atom: AtomSection,
    #[serde(default)]
    pub grids: GridSection,
    #[serde(default)]
    pub toggles: ToggleSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSection {
    pub intensity_w_cm2: f64,
    pub detuning_ev: f64,
    pub cep_rad: f64,
}

impl Default for FieldSection {
    fn default() -> Self {
        Self {
            intensity_w_cm2: channel::PEAK_INTENSITY,
            detuning_ev: 0.0,
            cep_rad: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeSection {
    pub kind: EnvelopeKind,
    pub area_pi: Option<f64>,
    pub tau_fs: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub separation_fs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtomSection {
    pub z_ag: f64,
    pub z_ba: f64,
    pub ion_gap_ev: f64,
    pub binding_energy_ev: f64,
}

impl Default for AtomSection {
    fn default() -> Self {
        Self {
            z_ag: channel::Z_AG,
            z_ba: channel::Z_BA,
            ion_gap_ev: channel::ION_GAP_EV,
            binding_energy_ev: channel::BINDING_ENERGY_EV,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub epsilon_span_ev: f64,
    pub epsilon_points: usize,
    pub time_points: Option<usize>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            epsilon_span_ev: 1.0,
            epsilon_points: 801,
            time_points: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToggleSection {
    pub depletion: bool,
}

impl Default for ToggleSection {
    fn default() -> Self {
        Self { depletion: true }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub area_pi_max: f64,
    pub area_points: usize,
    pub detuning_ev_max: f64,
    pub detuning_points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            area_pi_max: 10.0,
            area_points: 41,
            detuning_ev_max: 0.3,
            detuning_points: 7,
        }
    }
}

fn cfg_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(cfg_err)?;
        c.check()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn check(&self) -> Result<()> {
        let e = &self.envelope;
        match (e.area_pi, e.tau_fs) {
            (Some(_), Some(_)) => {
                return Err(cfg_err(
                    "give exactly one of envelope.area_pi and envelope.tau_fs, not both",
                ))
            }
            (None, None) => return Err(cfg_err("envelope needs one of area_pi or tau_fs")),
            (Some(a), None) if !(a >= 0.0) || !a.is_finite() => {
                return Err(cfg_err(format!("envelope.area_pi must be non-negative, got {a}")))
            }
            (None, Some(t)) if !(t >= 0.0) || !t.is_finite() => {
                return Err(cfg_err(format!("envelope.tau_fs must be non-negative, got {t}")))
            }
            _ => {}
        }
        if e.k.is_some() && e.kind != EnvelopeKind::SmoothZero {
            return Err(cfg_err("envelope.K only applies to smooth_zero"));
        }
        if e.separation_fs.is_some() && e.kind != EnvelopeKind::DoubleGaussian {
            return Err(cfg_err("envelope.separation_fs only applies to double_gaussian"));
        }
        let g = &self.grids;
        if !(g.epsilon_span_ev > 0.0) || g.epsilon_points < 3 || g.epsilon_points.is_multiple_of(2) {
            return Err(cfg_err("grids need epsilon_span_ev > 0 and an odd epsilon_points >= 3"));
        }
        let s = &self.sweep;
        if !(s.area_pi_max > 0.0) || s.area_points < 1 || !(s.detuning_ev_max >= 0.0) || s.detuning_points < 1 {
            return Err(cfg_err(
                "sweep needs area_pi_max > 0, detuning_ev_max >= 0 and at least one point per axis",
            ));
        }
        if s.detuning_points > 1 && s.detuning_ev_max == 0.0 {
            return Err(cfg_err(
                "sweep.detuning_ev_max must be positive for more than one detuning",
            ));
        }
        Ok(())
    }

    /// Envelope at a placeholder duration, with K and separation applied.
    fn envelope_shape(&self) -> Result<EnvelopeSpec> {
        let e = &self.envelope;
        let mut env = EnvelopeSpec::new(e.kind, 1000.0)?;
        if e.kind == EnvelopeKind::SmoothZero {
            env = env.with_steepness(e.k.unwrap_or(DEFAULT_STEEPNESS))?;
        }
        if let Some(s) = e.separation_fs {
            env = env.with_separation(units::fs_to_au(s))?;
        }
        Ok(env)
    }

    /// Parameters with the duration placeholder; [`Self::simulation_params`]
    /// fixes the duration.
    pub fn base_params(&self) -> Result<SimulationParams> {
        let mut p = SimulationParams::helium(self.envelope_shape()?);
        p.e0 = units::intensity_to_field(self.field.intensity_w_cm2).map_err(cfg_err)?;
        p.detuning = units::ev_to_au(self.field.detuning_ev);
        p.cep = self.field.cep_rad;
        p.z_ag = self.atom.z_ag;
        p.z_ba = self.atom.z_ba;
        p.ion_gap = units::ev_to_au(self.atom.ion_gap_ev);
        p.binding_energy = units::ev_to_au(self.atom.binding_energy_ev);
        p.depletion_enabled = self.toggles.depletion;
        p.validate().map_err(cfg_err)?;
        Ok(p)
    }

    /// Parameters for a single run, refusing a pulse of zero area or duration.
    pub fn simulation_params(&self) -> Result<SimulationParams> {
        let mut p = self.base_params()?;
        let tau = match (self.envelope.area_pi, self.envelope.tau_fs) {
            (Some(a), _) => {
                let d = duration_for_area(&p.env, p.omega0_rabi(), a * PI).map_err(cfg_err)?;
                if d.degenerate {
                    return Err(Error::Degenerate("zero pulse area, nothing to simulate".into()));
                }
                d.tau
            }
            (None, Some(t)) => {
                if t == 0.0 {
                    return Err(Error::Degenerate("zero pulse duration, nothing to simulate".into()));
                }
                units::fs_to_au(t)
            }
            (None, None) => unreachable!("checked at parse time"),
        };
        p.env = p.env.with_tau(tau).map_err(cfg_err)?;
        Ok(p)
    }

    /// Absolute area (rad) of the single-run pulse.
    pub fn area(&self) -> Result<f64> {
        let p = self.simulation_params()?;
        Ok(absolute_area(&p.env, p.omega0_rabi()))
    }

    pub fn energy_grid(&self) -> Result<EnergyGrid> {
        EnergyGrid::symmetric(units::ev_to_au(self.grids.epsilon_span_ev), self.grids.epsilon_points).map_err(cfg_err)
    }

    pub fn area_axis(&self) -> Vec<f64> {
        linspace(0.0, self.sweep.area_pi_max * PI, self.sweep.area_points)
    }

    pub fn detuning_axis(&self) -> Vec<f64> {
        let m = units::ev_to_au(self.sweep.detuning_ev_max);
        if self.sweep.detuning_points == 1 {
            vec![units::ev_to_au(self.field.detuning_ev)]
        } else {
            linspace(-m, m, self.sweep.detuning_points)
        }
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let mut c = SweepConfig::new(self.base_params()?, self.area_axis(), self.energy_grid()?);
        c.detuning_axis = self.detuning_axis();
        c.time_points = self.grids.time_points;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[envelope]\nkind = \"gaussian\"\narea_pi = 4.0\n";

    #[test]
    fn minimal_config_uses_helium_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        let p = c.simulation_params().unwrap();
        assert!((p.e0 - 0.0188727).abs() < 1e-7);
        assert!(p.depletion_enabled && p.detuning == 0.0);
        assert!((c.area().unwrap() - 4.0 * PI).abs() < 1e-9);
        assert_eq!(c.energy_grid().unwrap().len(), 801);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::parse("[envelope]\nkind = \"gaussian\"\narea_pi = 1.0\nshape = 2\n").is_err());
        assert!(RunConfig::parse(&format!("{MINIMAL}[field]\nintensity = 1.0\n")).is_err());
        assert!(RunConfig::parse(&format!("{MINIMAL}[extra]\n")).is_err());
        assert!(RunConfig::parse("[envelope]\nkind = \"sawtooth\"\narea_pi = 1.0\n").is_err());
    }

    #[test]
    fn exactly_one_duration_key() {
        assert!(RunConfig::parse("[envelope]\nkind = \"flattop\"\n").is_err());
        assert!(RunConfig::parse("[envelope]\nkind = \"flattop\"\narea_pi = 1.0\ntau_fs = 2.0\n").is_err());
        let c = RunConfig::parse("[envelope]\nkind = \"flattop\"\ntau_fs = 2.0\n").unwrap();
        assert!((c.simulation_params().unwrap().env.tau() - units::fs_to_au(2.0)).abs() < 1e-9);
    }

    #[test]
    fn zero_area_is_degenerate() {
        let c = RunConfig::parse("[envelope]\nkind = \"flattop\"\narea_pi = 0.0\n").unwrap();
        let e = c.simulation_params().unwrap_err();
        assert!(matches!(e, Error::Degenerate(_)));
        assert!(e.to_string().contains("degenerate pulse"));
    }

    #[test]
    fn shape_keys_follow_the_kind() {
        let c = RunConfig::parse("[envelope]\nkind = \"smooth_zero\"\narea_pi = 4.0\nK = 0.25\n").unwrap();
        assert_eq!(c.simulation_params().unwrap().env.steepness(), 0.25);
        assert!(RunConfig::parse("[envelope]\nkind = \"gaussian\"\narea_pi = 4.0\nK = 0.25\n").is_err());
        let c =
            RunConfig::parse("[envelope]\nkind = \"double_gaussian\"\narea_pi = 1.0\nseparation_fs = 6.0\n").unwrap();
        let sep = c.simulation_params().unwrap().env.separation();
        assert!((sep - units::fs_to_au(6.0)).abs() < 1e-9);
    }

    #[test]
    fn sweep_axes() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        let a = c.area_axis();
        assert_eq!(a.len(), 41);
        assert!((a[40] - 10.0 * PI).abs() < 1e-12);
        let d = c.detuning_axis();
        assert_eq!(d.len(), 7);
        assert!((d[0] + d[6]).abs() < 1e-15 && d[3].abs() < 1e-15);
        let s = c.sweep_config().unwrap();
        assert_eq!(s.detuning_axis, d);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(RunConfig::parse(&format!("{MINIMAL}[grids]\nepsilon_points = 800\n")).is_err());
        assert!(RunConfig::parse(&format!("{MINIMAL}[grids]\nepsilon_span_ev = -1.0\n")).is_err());
        assert!(RunConfig::parse(&format!("{MINIMAL}[field]\nintensity_w_cm2 = -1.0\n"))
            .unwrap()
            .base_params()
            .is_err());
    }
}
