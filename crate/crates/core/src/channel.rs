// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Final photoelectron-ion channel amplitudes.
//!
//! With `g(t)` the survival amplitude of the neutral atom and the ionic
//! propagators to `+inf` taken from [`backward_amplitudes`],
//!
//! ```text
//! alpha(eps) = (Omega_ag/2) int a_bw(t) env(t) g(t) exp(i eps t) dt
//! beta(eps)  = (Omega_ag/2) int b_bw(t) env(t) g(t) exp(i (eps - dw) t) dt
//! ```
//!
//! Both integrals are trapezoidal sums on the symmetric time grid of the
//! two-level trajectory; envelope jumps sit on nodes and contribute their
//! one-sided limits to the adjacent panels.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::envelope::{self, EnvelopeKind, EnvelopeSpec, Side};
use crate::error::{Error, Result};
use crate::grid::{EnergyGrid, TimeGrid};
use crate::quadrature;
use crate::twolevel::{self, backward_amplitudes, TwoLevelParams, TwoLevelTrajectory};
use crate::units;

/// Atom-to-ion dipole element of helium (a.u.).
pub const Z_AG: f64 = 0.502;
/// Ionic 1s-2p dipole element (a.u.).
pub const Z_BA: f64 = 0.373;
/// Ionic 1s-2p gap (eV).
pub const ION_GAP_EV: f64 = 40.8;
/// First ionization energy of helium (eV).
pub const BINDING_ENERGY_EV: f64 = 24.587;
/// Reference peak intensity (W/cm^2).
pub const PEAK_INTENSITY: f64 = 1.25e13;

/// Everything one photoionization run needs, in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationParams {
    pub z_ag: f64,
    pub z_ba: f64,
    /// Peak field amplitude `E0`.
    pub e0: f64,
    pub detuning: f64,
    /// Carrier-envelope phase (rad).
    pub cep: f64,
    /// `eps_b - eps_a`.
    pub ion_gap: f64,
    pub binding_energy: f64,
    pub env: EnvelopeSpec,
    pub depletion_enabled: bool,
}

impl SimulationParams {
    /// Helium at the reference intensity, resonant, depletion on.
    pub fn helium(env: EnvelopeSpec) -> Self {
        Self {
            z_ag: Z_AG,
            z_ba: Z_BA,
            e0: units::intensity_to_field(PEAK_INTENSITY).expect("positive intensity"),
            detuning: 0.0,
            cep: 0.0,
            ion_gap: units::ev_to_au(ION_GAP_EV),
            binding_energy: units::ev_to_au(BINDING_ENERGY_EV),
            env,
            depletion_enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_ag >= 0.0) || !(self.z_ba >= 0.0) {
            return Err(Error::domain("dipole elements must be non-negative"));
        }
        if !(self.e0 >= 0.0) || !self.e0.is_finite() {
            return Err(Error::domain("field amplitude must be finite and non-negative"));
        }
        if !self.detuning.is_finite() || !self.cep.is_finite() {
            return Err(Error::domain("detuning and CEP must be finite"));
        }
        Ok(())
    }

    pub fn omega0_rabi(&self) -> f64 {
        units::rabi_peak(self.z_ba, self.e0)
    }

    pub fn omega0_ag(&self) -> f64 {
        self.z_ag * self.e0
    }

    /// Prefactor `pi z_ag^2 E0^2 / 4` of the flat-continuum depletion.
    pub fn depletion_rate(&self) -> f64 {
        PI * self.z_ag * self.z_ag * self.e0 * self.e0 / 4.0
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.ion_gap + self.detuning
    }

    /// Absolute kinetic energy of the `eps = 0` photoline.
    pub fn photoline_energy(&self) -> f64 {
        self.carrier_frequency() - self.binding_energy
    }

    pub fn twolevel(&self) -> TwoLevelParams {
        TwoLevelParams {
            omega0_rabi: self.omega0_rabi(),
            detuning: self.detuning,
            env: self.env,
        }
    }

    /// Symmetric grid sized for this pulse and energy window.
    pub fn time_grid(&self, energy: &EnergyGrid) -> Result<TimeGrid> {
        let env = &self.env;
        let half = match env.kind() {
            EnvelopeKind::Flattop | EnvelopeKind::ZeroFlattop => env.tau(),
            _ => env.half_support(),
        } + env.delay().abs();
        let mut h = env.tau() / 200.0;
        let rate = self.twolevel().max_rate();
        if rate > 0.0 {
            h = h.min(twolevel::STEP_TARGET / rate);
        }
        let eps_max = energy.half_span() + self.detuning.abs();
        h = h.min(0.1 / eps_max);
        if env.kind() == EnvelopeKind::SmoothZero {
            h = h.min(0.1 / env.steepness());
        }
        TimeGrid::covering(half, h)
    }
}

/// `g(t) = exp(-rate * int_{-inf}^t env^2)`; identically one with depletion off.
pub fn depletion(p: &SimulationParams, t: f64) -> f64 {
    if !p.depletion_enabled {
        return 1.0;
    }
    let (lo, hi) = p.env.support();
    if t <= lo {
        return 1.0;
    }
    let integral = quadrature::integrate(|s| p.env.evaluate(s).powi(2), lo, t.min(hi), &p.env.breakpoints(), 96);
    (-p.depletion_rate() * integral).exp()
}

/// Survival amplitude `g(+inf)`.
pub fn survival_amplitude(p: &SimulationParams) -> f64 {
    if !p.depletion_enabled {
        return 1.0;
    }
    (-p.depletion_rate() * envelope::intensity_integral(&p.env)).exp()
}

/// `g(t)` at every node.
pub fn depletion_on(p: &SimulationParams, times: &[f64]) -> Vec<f64> {
    if !p.depletion_enabled {
        return vec![1.0; times.len()];
    }
    let start = depletion(p, times[0]).ln();
    let rate = p.depletion_rate();
    quadrature::cumulative(|s| p.env.evaluate(s).powi(2), times, &p.env.breakpoints())
        .into_iter()
        .map(|c| (start - rate * c).exp())
        .collect()
}

/// Final amplitudes on an energy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelAmplitudes {
    pub grid: EnergyGrid,
    /// Ionic ground-state channel.
    pub alpha: Vec<C64>,
    /// Ionic excited-state channel.
    pub beta: Vec<C64>,
    /// Atomic survival amplitude `g(+inf)`.
    pub survival: f64,
    /// Resolution diagnostics; empty when the grids are adequate.
    pub warnings: Vec<String>,
}

/// Runs the full pipeline on an automatically sized time grid.
pub fn final_amplitudes(p: &SimulationParams, grid: &EnergyGrid) -> Result<ChannelAmplitudes> {
    let tgrid = p.time_grid(grid)?;
    final_amplitudes_on(p, &tgrid, grid)
}

/// Runs the full pipeline on a caller-supplied time grid.
pub fn final_amplitudes_on(p: &SimulationParams, tgrid: &TimeGrid, grid: &EnergyGrid) -> Result<ChannelAmplitudes> {
    p.validate()?;
    if p.env.symmetry_class().is_none() {
        return Err(Error::UndeclaredSymmetry);
    }
    let traj = twolevel::propagate(&p.twolevel(), tgrid)?;
    final_amplitudes_from(p, &traj, grid)
}

/// Folds a precomputed trajectory into channel amplitudes.
///
/// The trajectory must come from `p.twolevel()`; only the detuning phase in
/// the excited-channel kernel and the CEP are read from `p` directly.
pub fn final_amplitudes_from(
    p: &SimulationParams,
    traj: &TwoLevelTrajectory,
    grid: &EnergyGrid,
) -> Result<ChannelAmplitudes> {
    let sym = p.env.symmetry_class().ok_or(Error::UndeclaredSymmetry)?;
    let bw = backward_amplitudes(traj, sym)?;
    let times = &traj.times;
    let n = times.len();
    let g = depletion_on(p, times);

    let half_ag = 0.5 * p.omega0_ag();
    let mut wa = Vec::with_capacity(n);
    let mut wb = Vec::with_capacity(n);
    for k in 0..n {
        let left = if k > 0 {
            0.5 * (times[k] - times[k - 1]) * p.env.evaluate_sided(times[k], Side::Left)
        } else {
            0.0
        };
        let right = if k + 1 < n {
            0.5 * (times[k + 1] - times[k]) * p.env.evaluate_sided(times[k], Side::Right)
        } else {
            0.0
        };
        let w = half_ag * g[k] * (left + right);
        wa.push(bw.a[k] * w);
        wb.push(bw.b[k] * w);
    }

    let eps = grid.values();
    let eps_b: Vec<f64> = eps.iter().map(|e| e - p.detuning).collect();
    let mut alpha = fourier(&wa, times, &eps);
    let mut beta = fourier(&wb, times, &eps_b);

    // carrier phase: exp(-i phi) per absorbed photon
    if p.cep != 0.0 {
        let pa = C64::from_polar(1.0, -p.cep);
        let pb = C64::from_polar(1.0, -2.0 * p.cep);
        alpha.iter_mut().for_each(|z| *z *= pa);
        beta.iter_mut().for_each(|z| *z *= pb);
    }

    let mut warnings = Vec::new();
    let span = times[n - 1] - times[0];
    if grid.spacing() > 2.0 * PI / span {
        warnings.push(format!(
            "energy spacing {:.3e} a.u. exceeds 2 pi / time span = {:.3e} a.u.; narrow \
             spectral features may alias",
            grid.spacing(),
            2.0 * PI / span
        ));
    }
    let h_max = times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let eps_max = grid.half_span() + p.detuning.abs();
    if eps_max * h_max > 0.5 {
        warnings.push(format!(
            "time step {h_max:.3e} a.u. under-resolves exp(i eps t) at |eps| = {eps_max:.3e} a.u."
        ));
    }
    for d in p.env.discontinuities() {
        if !times.iter().any(|&t| (t - d).abs() <= 1e-12 * p.env.tau()) {
            warnings.push(format!("envelope jump at t = {d:.6e} a.u. is not a grid node"));
        }
    }

    Ok(ChannelAmplitudes {
        grid: *grid,
        alpha,
        beta,
        survival: survival_amplitude(p),
        warnings,
    })
}

/// `sum_k w_k exp(i eps t_k)` per energy. Uniform grids use a phasor
/// recurrence, re-anchored every 512 nodes.
fn fourier(weights: &[C64], times: &[f64], eps: &[f64]) -> Vec<C64> {
    let n = times.len();
    let h = (times[n - 1] - times[0]) / (n - 1) as f64;
    let uniform = times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    eps.par_iter()
        .map(|&e| {
            if uniform {
                let step = C64::from_polar(1.0, e * h);
                let mut acc = C64::new(0.0, 0.0);
                let mut k = 0;
                while k < n {
                    let end = (k + 512).min(n);
                    let mut z = C64::from_polar(1.0, e * times[k]);
                    for w in &weights[k..end] {
                        acc += w * z;
                        z *= step;
                    }
                    k = end;
                }
                acc
            } else {
                weights
                    .iter()
                    .zip(times)
                    .map(|(w, &t)| w * C64::from_polar(1.0, e * t))
                    .sum()
            }
        })
        .collect()
}

/// Channel-resolved densities (probability per unit energy).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub alpha_abs2: Vec<f64>,
    pub beta_abs2: Vec<f64>,
    pub total: Vec<f64>,
}

pub fn spectrum(c: &ChannelAmplitudes) -> Spectrum {
    let alpha_abs2: Vec<f64> = c.alpha.iter().map(|z| z.norm_sqr()).collect();
    let beta_abs2: Vec<f64> = c.beta.iter().map(|z| z.norm_sqr()).collect();
    let total = alpha_abs2.iter().zip(&beta_abs2).map(|(a, b)| a + b).collect();
    Spectrum {
        alpha_abs2,
        beta_abs2,
        total,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonPopulations {
    pub p_a: f64,
    pub p_b: f64,
    pub p_ion: f64,
}

pub fn ion_populations(c: &ChannelAmplitudes) -> IonPopulations {
    let s = spectrum(c);
    let p_a = c.grid.integrate(&s.alpha_abs2);
    let p_b = c.grid.integrate(&s.beta_abs2);
    IonPopulations {
        p_a,
        p_b,
        p_ion: p_a + p_b,
    }
}

/// Normalized density overlap of the two channels, in `[0, 1]`.
pub fn overlap_metric(c: &ChannelAmplitudes) -> Result<f64> {
    let s = spectrum(c);
    let cross: Vec<f64> = s.alpha_abs2.iter().zip(&s.beta_abs2).map(|(a, b)| a * b).collect();
    let aa: Vec<f64> = s.alpha_abs2.iter().map(|a| a * a).collect();
    let bb: Vec<f64> = s.beta_abs2.iter().map(|b| b * b).collect();
    let (ia, ib) = (c.grid.integrate(&aa), c.grid.integrate(&bb));
    if ia == 0.0 && ib == 0.0 {
        return Err(Error::domain("overlap of two empty channels"));
    }
    if ia == 0.0 || ib == 0.0 {
        return Ok(0.0);
    }
    Ok((c.grid.integrate(&cross) / (ia * ib).sqrt()).clamp(0.0, 1.0))
}
