// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Rabi dynamics of the ion in the rotating-wave approximation.
//!
//! Rotating-frame equations, detuning carried by the excited state:
//!
//! ```text
//! i da/dt = (Omega(t)/2) b
//! i db/dt = (Omega(t)/2) a - dw b
//! ```
//!
//! On resonance the solution is `a = cos(theta/2)`, `b = -i sin(theta/2)`.

use num_complex::Complex64 as C64;

use crate::envelope::{EnvelopeSpec, Side, SymmetryClass};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Refusal bound on the node spacing, in units of `1 / max(Omega0, |dw|)`.
pub const STEP_REFUSAL: f64 = 0.02;
/// Target node spacing used when grids are sized automatically.
pub const STEP_TARGET: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelParams {
    /// Peak Rabi frequency `Omega0` (a.u.).
    pub omega0_rabi: f64,
    /// Detuning `dw = omega0 - (eps_b - eps_a)` (a.u.).
    pub detuning: f64,
    pub env: EnvelopeSpec,
}

impl TwoLevelParams {
    /// Fastest rate in the equations of motion.
    pub fn max_rate(&self) -> f64 {
        self.omega0_rabi.abs().max(self.detuning.abs())
    }

    /// Largest node spacing accepted by [`propagate`].
    pub fn step_bound(&self) -> f64 {
        let r = self.max_rate();
        if r > 0.0 {
            STEP_REFUSAL / r
        } else {
            f64::INFINITY
        }
    }
}

/// Ionic amplitudes on a time grid, starting in the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelTrajectory {
    pub times: Vec<f64>,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

impl TwoLevelTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest deviation of `|a|^2 + |b|^2` from one.
    pub fn norm_error(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn final_state(&self) -> (C64, C64) {
        (*self.a.last().unwrap(), *self.b.last().unwrap())
    }
}

#[inline]
fn rhs(omega: f64, dw: f64, a: C64, b: C64) -> (C64, C64) {
    let mi = C64::new(0.0, -1.0);
    (mi * (0.5 * omega * b), mi * (0.5 * omega * a - dw * b))
}

/// One classical RK4 step on `[t0, t1]` with no envelope jump strictly inside.
fn rk4_segment(p: &TwoLevelParams, t0: f64, t1: f64, a: C64, b: C64) -> (C64, C64) {
    let h = t1 - t0;
    let w0 = p.omega0_rabi * p.env.evaluate_sided(t0, Side::Right);
    let wm = p.omega0_rabi * p.env.evaluate(t0 + 0.5 * h);
    let w1 = p.omega0_rabi * p.env.evaluate_sided(t1, Side::Left);
    let dw = p.detuning;

    let (ka1, kb1) = rhs(w0, dw, a, b);
    let (ka2, kb2) = rhs(wm, dw, a + 0.5 * h * ka1, b + 0.5 * h * kb1);
    let (ka3, kb3) = rhs(wm, dw, a + 0.5 * h * ka2, b + 0.5 * h * kb2);
    let (ka4, kb4) = rhs(w1, dw, a + h * ka3, b + h * kb3);
    (
        a + h / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4),
        b + h / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4),
    )
}

/// Advances over one grid interval, splitting at any interior envelope jump.
fn step(p: &TwoLevelParams, jumps: &[f64], t0: f64, t1: f64, a: C64, b: C64) -> (C64, C64) {
    let snap = 1e-12 * p.env.tau();
    let mut cur = t0;
    let (mut a, mut b) = (a, b);
    for &d in jumps {
        if d > t0 + snap && d < t1 - snap {
            (a, b) = rk4_segment(p, cur, d, a, b);
            cur = d;
        }
    }
    rk4_segment(p, cur, t1, a, b)
}

fn check_spacing(p: &TwoLevelParams, times: &[f64]) -> Result<()> {
    let bound = p.step_bound();
    let spacing = times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if spacing > bound {
        let span = times.last().unwrap() - times[0];
        let suggested = ((span / bound).ceil() as usize).next_power_of_two() + 1;
        return Err(Error::GridTooCoarse {
            spacing,
            bound,
            suggested_points: suggested,
        });
    }
    Ok(())
}

/// Integrates from `(a, b) = (1, 0)` at the first node over the grid.
pub fn propagate(p: &TwoLevelParams, grid: &TimeGrid) -> Result<TwoLevelTrajectory> {
    propagate_on(p, &grid.times())
}

/// [`propagate`] on an arbitrary increasing sequence of nodes.
pub fn propagate_on(p: &TwoLevelParams, times: &[f64]) -> Result<TwoLevelTrajectory> {
    if times.len() < 2 {
        return Err(Error::domain("time grid needs at least two nodes"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("time grid must be strictly increasing"));
    }
    if !(p.omega0_rabi >= 0.0) {
        return Err(Error::domain("peak Rabi frequency must be non-negative"));
    }
    check_spacing(p, times)?;

    let jumps = p.env.discontinuities();
    let mut a = Vec::with_capacity(times.len());
    let mut b = Vec::with_capacity(times.len());
    let (mut ca, mut cb) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    a.push(ca);
    b.push(cb);
    for w in times.windows(2) {
        (ca, cb) = step(p, &jumps, w[0], w[1], ca, cb);
        a.push(ca);
        b.push(cb);
    }
    Ok(TwoLevelTrajectory {
        times: times.to_vec(),
        a,
        b,
    })
}

/// Fresh integration from the ground state at `times[start]` to the last
/// node. The excited amplitude is returned with its field-free
/// rotating-frame phase `exp(i dw (t_end - t_start))` removed, i.e. as the
/// interaction-frame propagator amplitude from `t_start` to the pulse end.
pub fn propagate_to_end(p: &TwoLevelParams, times: &[f64], start: usize) -> Result<(C64, C64)> {
    let tail = &times[start..];
    if tail.len() < 2 {
        return Ok((C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
    }
    let traj = propagate_on(p, tail)?;
    let (a, b) = traj.final_state();
    let elapsed = tail.last().unwrap() - tail[0];
    Ok((a, b * C64::from_polar(1.0, -p.detuning * elapsed)))
}

/// Resonant amplitudes `(cos(theta/2), sin(theta/2))`.
pub fn area_theorem_amplitudes(theta: f64) -> (f64, f64) {
    let (s, c) = (0.5 * theta).sin_cos();
    (c, s)
}

/// Ionic propagator amplitudes from an intermediate time `t` to `+inf`,
/// indexed on the same nodes as the forward trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardAmplitudes {
    pub times: Vec<f64>,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

/// Reflects a forward trajectory into propagators to `+inf`:
/// `a_bw(t) = a(-t)` and `b_bw(t) = -chi * conj(b(-t))`.
///
/// The extra minus sign relative to the textbook `chi * conj(b)` rule comes
/// from the phase convention of the rotating-frame equations above; it is a
/// constant phase on the excited channel. On resonance the rule reads
/// `b_bw(t) = chi * b(-t)`.
pub fn backward_amplitudes(traj: &TwoLevelTrajectory, sym: SymmetryClass) -> Result<BackwardAmplitudes> {
    let n = traj.times.len();
    if n == 0 {
        return Err(Error::AsymmetricGrid("empty trajectory".into()));
    }
    let scale = traj.times[n - 1].abs().max(traj.times[0].abs());
    for k in 0..n {
        let (t, u) = (traj.times[k], traj.times[n - 1 - k]);
        if (t + u).abs() > 1e-12 * scale {
            return Err(Error::AsymmetricGrid(format!(
                "node {k} at t = {t} has no mirror (found {u})"
            )));
        }
    }
    let factor = -sym.chi();
    Ok(BackwardAmplitudes {
        times: traj.times.clone(),
        a: (0..n).map(|k| traj.a[n - 1 - k]).collect(),
        b: (0..n).map(|k| factor * traj.b[n - 1 - k].conj()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{running_area_on, EnvelopeKind};
    use std::f64::consts::PI;

    fn params(kind: EnvelopeKind, omega: f64, dw: f64, tau: f64) -> TwoLevelParams {
        TwoLevelParams {
            omega0_rabi: omega,
            detuning: dw,
            env: EnvelopeSpec::new(kind, tau).unwrap(),
        }
    }

    fn grid_for(p: &TwoLevelParams) -> TimeGrid {
        let half = 2.0 * p.env.half_support();
        TimeGrid::covering(half, STEP_TARGET / p.max_rate()).unwrap()
    }

    #[test]
    fn pi_pulse_inverts() {
        let tau = 200.0;
        let p = params(EnvelopeKind::Flattop, PI / tau, 0.0, tau);
        let traj = propagate(&p, &grid_for(&p)).unwrap();
        let (_, b) = traj.final_state();
        assert!((b.norm_sqr() - 1.0).abs() < 1e-10);
        assert_eq!(traj.a[0], C64::new(1.0, 0.0));
        assert_eq!(traj.b[0], C64::new(0.0, 0.0));
    }

    #[test]
    fn two_pi_pulse_returns() {
        let tau = 200.0;
        let p = params(EnvelopeKind::Flattop, 2.0 * PI / tau, 0.0, tau);
        let traj = propagate(&p, &grid_for(&p)).unwrap();
        assert!((traj.final_state().0.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_area_returns_to_ground() {
        for omega in [0.01, 0.03, 0.05] {
            let p = params(EnvelopeKind::ZeroGaussian, omega, 0.0, 300.0);
            let traj = propagate(&p, &grid_for(&p)).unwrap();
            assert!((traj.final_state().0.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn resonant_matches_area_theorem() {
        for kind in EnvelopeKind::ALL {
            let mut p = params(kind, 0.02, 0.0, 400.0);
            p.env = p.env.with_steepness(0.05).unwrap();
            let g = grid_for(&p);
            let traj = propagate(&p, &g).unwrap();
            let theta = running_area_on(&p.env, p.omega0_rabi, &traj.times);
            for (k, th) in theta.iter().enumerate() {
                let (ca, sb) = area_theorem_amplitudes(*th);
                assert!((traj.a[k] - C64::new(ca, 0.0)).norm() < 1e-8, "{kind}");
                assert!((traj.b[k] - C64::new(0.0, -sb)).norm() < 1e-8, "{kind}");
            }
        }
    }

    #[test]
    fn area_theorem_examples() {
        assert_eq!(area_theorem_amplitudes(0.0), (1.0, 0.0));
        let (a, b) = area_theorem_amplitudes(PI);
        assert!(a.abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coarse_grid_refused() {
        let p = params(EnvelopeKind::Gaussian, 0.1, 0.0, 100.0);
        let g = TimeGrid::new(500.0, 256).unwrap();
        match propagate(&p, &g) {
            Err(Error::GridTooCoarse { bound, .. }) => assert!((bound - 0.2).abs() < 1e-12),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn norm_conserved_detuned() {
        for kind in EnvelopeKind::ALL {
            let p = params(kind, 0.02, 0.015, 600.0);
            let traj = propagate(&p, &grid_for(&p)).unwrap();
            assert!(traj.norm_error() < 1e-8, "{kind}");
        }
    }

    #[test]
    fn backward_endpoint_and_center() {
        let tau = 300.0;
        let theta = 3.0 * PI;
        let p = params(EnvelopeKind::Flattop, theta / tau, 0.0, tau);
        let g = grid_for(&p);
        let traj = propagate(&p, &g).unwrap();
        let bw = backward_amplitudes(&traj, SymmetryClass::EVEN).unwrap();
        assert_eq!(bw.a[0], traj.a[traj.len() - 1]);
        let c = g.center_index();
        assert!((bw.a[c].re - (theta / 4.0).cos()).abs() < 1e-9);
    }

    #[test]
    fn backward_odd_sign_flip() {
        let p = params(EnvelopeKind::ZeroGaussian, 0.02, 0.0, 300.0);
        let g = grid_for(&p);
        let traj = propagate(&p, &g).unwrap();
        let bw = backward_amplitudes(&traj, SymmetryClass::ODD).unwrap();
        let c = g.center_index();
        // b_bw(0+) against b(0-): opposite sign
        let after = bw.b[c + 1];
        let before = traj.b[c - 1];
        assert!((after + before).norm() < 1e-8);
        assert!(before.norm() > 0.1);
    }

    #[test]
    fn backward_refuses_asymmetric() {
        let p = params(EnvelopeKind::Gaussian, 0.01, 0.0, 100.0);
        let times: Vec<f64> = (0..=1000).map(|k| -400.0 + 0.9 * k as f64).collect();
        let traj = propagate_on(&p, &times).unwrap();
        assert!(matches!(
            backward_amplitudes(&traj, SymmetryClass::EVEN),
            Err(Error::AsymmetricGrid(_))
        ));
    }

    #[test]
    fn time_reversal_consistency() {
        let cases = [
            (EnvelopeKind::Gaussian, SymmetryClass::EVEN),
            (EnvelopeKind::Flattop, SymmetryClass::EVEN),
            (EnvelopeKind::ZeroGaussian, SymmetryClass::ODD),
            (EnvelopeKind::ZeroFlattop, SymmetryClass::ODD),
            (EnvelopeKind::SmoothZero, SymmetryClass::ODD),
            (EnvelopeKind::DoubleGaussian, SymmetryClass::ODD),
        ];
        for (kind, sym) in cases {
            for dw in [0.0, 0.006, -0.011] {
                let mut p = params(kind, 0.02, dw, 250.0);
                p.env = p.env.with_steepness(0.05).unwrap();
                let g = grid_for(&p);
                let times = g.times();
                let traj = propagate(&p, &g).unwrap();
                let bw = backward_amplitudes(&traj, sym).unwrap();
                for j in 0..11 {
                    let k = j * (times.len() - 1) / 10;
                    let (a, b) = propagate_to_end(&p, &times, k).unwrap();
                    assert!((a - bw.a[k]).norm() < 1e-7, "{kind} dw={dw} k={k} a");
                    assert!((b - bw.b[k]).norm() < 1e-7, "{kind} dw={dw} k={k} b");
                }
            }
        }
    }
}
