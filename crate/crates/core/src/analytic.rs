// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form and stationary-phase amplitudes for resonant pulses without
//! depletion.
//!
//! All forms use the same conventions as [`crate::channel`]: the pulse is
//! centred on `t = 0`, odd envelopes are `-sign(t)` times their even parent,
//! and the excited-channel amplitude is the true propagator into `|b>` with
//! the free phase of `|b>` removed.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::channel::SimulationParams;
use crate::envelope::{running_area, EnvelopeSpec, Parity, Side};
use crate::error::{Error, Result};

/// `sin(x) / x`, with its Taylor series near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Amplitudes split into the terms peaked at `eps = +Omega0/2` (index 0) and
/// `eps = -Omega0/2` (index 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitAmplitudes {
    pub alpha: [C64; 2],
    pub beta: [C64; 2],
}

impl SplitAmplitudes {
    pub fn total(&self) -> (C64, C64) {
        (self.alpha[0] + self.alpha[1], self.beta[0] + self.beta[1])
    }
}

/// Odd flattop of duration `tau` (sign change at the centre).
///
/// ```text
/// alpha+- = +-(i W/2) (cos A - cos B) / (Omega0/2 -+ eps)
/// beta+-  = -+(W/2) (sin A -+ sin B) / (Omega0/2 -+ eps)
/// ```
///
/// with `A = Omega0 tau/4`, `B = eps tau/2`, `W = omega_ag`. The quotients are
/// evaluated through sinc factors, so `eps = +-Omega0/2` needs no special case.
pub fn zero_flattop_terms(epsilon: f64, tau: f64, omega0_rabi: f64, omega_ag: f64) -> SplitAmplitudes {
    let a = omega0_rabi * tau / 4.0;
    let b = epsilon * tau / 2.0;
    let c = omega_ag * tau / 4.0;
    let sp = sinc((0.5 * omega0_rabi - epsilon) * tau / 4.0);
    let sm = sinc((0.5 * omega0_rabi + epsilon) * tau / 4.0);
    let (sum, diff) = (0.5 * (a + b), 0.5 * (a - b));
    SplitAmplitudes {
        alpha: [C64::new(0.0, -c * sum.sin() * sp), C64::new(0.0, c * diff.sin() * sm)],
        beta: [C64::new(-c * sum.cos() * sp, 0.0), C64::new(c * diff.cos() * sm, 0.0)],
    }
}

pub fn zero_flattop_amplitudes(epsilon: f64, tau: f64, omega0_rabi: f64, omega_ag: f64) -> (C64, C64) {
    zero_flattop_terms(epsilon, tau, omega0_rabi, omega_ag).total()
}

/// Even flattop of duration `tau` centred on the origin:
/// `alpha+- = (W/4) tau exp(+-i Omega0 tau/4) sinc((eps -+ Omega0/2) tau/2)`,
/// `beta+- = -+alpha+-`.
pub fn even_flattop_terms(epsilon: f64, tau: f64, omega0_rabi: f64, omega_ag: f64) -> SplitAmplitudes {
    let c = omega_ag * tau / 4.0;
    let phase = omega0_rabi * tau / 4.0;
    let ap = C64::from_polar(c * sinc((epsilon - 0.5 * omega0_rabi) * tau / 2.0), phase);
    let am = C64::from_polar(c * sinc((epsilon + 0.5 * omega0_rabi) * tau / 2.0), -phase);
    SplitAmplitudes {
        alpha: [ap, am],
        beta: [-ap, am],
    }
}

pub fn even_flattop_amplitudes(epsilon: f64, tau: f64, omega0_rabi: f64, omega_ag: f64) -> (C64, C64) {
    even_flattop_terms(epsilon, tau, omega0_rabi, omega_ag).total()
}

/// Below this `|env'| * tau` a stationary point counts as a caustic.
pub const CAUSTIC_SLOPE: f64 = 1e-6;
/// Bisection tolerance for stationary times (a.u.).
pub const ROOT_TOLERANCE: f64 = 1e-10;
const SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    /// Root of `eps + Omega0 env(t)/2 = 0` (positive-phase Euler term).
    pub t_s: f64,
    /// Its partner in the negative-phase term, `-t_s` for odd envelopes.
    pub t_r: f64,
    /// `env'(t_s)`.
    pub slope: f64,
    pub caustic: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StationaryPoints {
    pub points: Vec<StationaryPoint>,
    /// Jumps across which `eps + Omega0 env/2` changes sign without a root.
    pub jump_crossings: Vec<f64>,
    /// `|2 eps / Omega0|` exceeds the envelope maximum: no real root.
    pub forbidden: bool,
}

impl StationaryPoints {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t_s).collect()
    }

    pub fn has_caustic(&self) -> bool {
        self.points.iter().any(|p| p.caustic)
    }
}

fn require_odd(env: &EnvelopeSpec) -> Result<()> {
    match env.symmetry_class() {
        Some(s) if s.parity == Parity::Odd => Ok(()),
        Some(_) => Err(Error::domain(
            "stationary-phase amplitudes are only available for odd envelopes",
        )),
        None => Err(Error::UndeclaredSymmetry),
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= ROOT_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of `env(t) = -2 eps / Omega0` on the support of an odd envelope.
pub fn spa_stationary_points(env: &EnvelopeSpec, omega0_rabi: f64, epsilon: f64) -> Result<StationaryPoints> {
    require_odd(env)?;
    if !(omega0_rabi > 0.0) {
        return Err(Error::domain("peak Rabi frequency must be positive"));
    }
    let level = -2.0 * epsilon / omega0_rabi;
    let f = |t: f64| env.evaluate(t) - level;
    let (lo, hi) = env.support();

    // smooth segments between jumps, sampled uniformly plus breakpoints
    let mut cuts = vec![lo];
    cuts.extend(env.discontinuities().into_iter().filter(|&d| d > lo && d < hi));
    cuts.push(hi);
    let mut nodes: Vec<f64> = (0..=SAMPLES)
        .map(|k| lo + (hi - lo) * k as f64 / SAMPLES as f64)
        .chain(env.breakpoints())
        .filter(|&t| t >= lo && t <= hi)
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * env.tau());

    let mut out = StationaryPoints::default();
    let mut peak = 0.0f64;
    let mut prev_end: Option<f64> = None;
    for seg in cuts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let ts: Vec<f64> = nodes.iter().copied().filter(|&t| t >= a && t <= b).collect();
        let value = |i: usize| -> f64 {
            if i == 0 {
                env.evaluate_sided(ts[0], Side::Right) - level
            } else if i + 1 == ts.len() {
                env.evaluate_sided(ts[i], Side::Left) - level
            } else {
                f(ts[i])
            }
        };
        let vals: Vec<f64> = (0..ts.len()).map(value).collect();
        peak = vals.iter().fold(peak, |m, v| m.max((v + level).abs()));
        if let Some(pe) = prev_end {
            if (pe < 0.0) != (vals[0] < 0.0) && pe != 0.0 && vals[0] != 0.0 {
                out.jump_crossings.push(a);
            }
        }
        prev_end = vals.last().copied();
        // the outer support edges are where the envelope is truncated, not roots
        let interior = |t: f64| t > lo && t < hi;
        for i in 0..ts.len() - 1 {
            let (fa, fb) = (vals[i], vals[i + 1]);
            if fa == 0.0 && i > 0 && interior(ts[i]) {
                push_root(&mut out, env, ts[i]);
            } else if fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
                push_root(&mut out, env, bisect(f, ts[i], ts[i + 1]));
            }
            // tangency: an extremum of env touching the level
            let (da, db) = (env.derivative(ts[i]), env.derivative(ts[i + 1]));
            if i + 1 < ts.len() - 1 && da != 0.0 && db != 0.0 && (da < 0.0) != (db < 0.0) {
                let te = bisect(|t| env.derivative(t), ts[i], ts[i + 1]);
                if f(te).abs() <= 1e-9 {
                    let near = out.points.iter_mut().filter(|p| (p.t_s - te).abs() <= 1e-6 * env.tau());
                    let mut found = false;
                    for p in near {
                        p.caustic = true;
                        found = true;
                    }
                    if !found {
                        out.points.push(StationaryPoint {
                            t_s: te,
                            t_r: -te,
                            slope: 0.0,
                            caustic: true,
                        });
                    }
                }
            }
        }
    }
    out.forbidden = level.abs() > peak;
    out.points.sort_by(|p, q| p.t_s.total_cmp(&q.t_s));
    Ok(out)
}

fn push_root(out: &mut StationaryPoints, env: &EnvelopeSpec, t: f64) {
    let slope = env.derivative(t);
    out.points.push(StationaryPoint {
        t_s: t,
        t_r: -t,
        slope,
        caustic: (slope * env.tau()).abs() < CAUSTIC_SLOPE,
    });
}

/// Leading-order stationary-phase amplitudes at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaResult {
    pub epsilon: f64,
    pub stationary_times: Vec<f64>,
    pub alpha: C64,
    pub beta: C64,
    pub eta: f64,
    pub phi: f64,
}

/// Stationary-phase evaluation for a resonant odd pulse without depletion.
///
/// Partial integration gives `alpha = -i eps (W/Omega0) int sin(theta/2) e^{i eps t}`
/// and `beta = -eps (W/Omega0) int cos(theta/2) e^{i eps t}`. Each stationary point
/// contributes `w = 2 sqrt(pi) / sqrt|Omega0 env'(t_s)|` with phase
/// `Phi = eps t_s + theta(t_s)/2 + kappa pi/4`, so
///
/// ```text
/// alpha = -i eps (z_ag/z_ba) sum w sin Phi = -i eta sin phi
/// beta  =   -eps (z_ag/z_ba) sum w cos Phi =   -eta cos phi
/// ```
///
/// At `eps = 0` and at energies without real roots the leading order vanishes
/// and zeros are returned. A caustic root is refused.
pub fn spa_amplitudes(p: &SimulationParams, epsilon: f64) -> Result<SpaResult> {
    let env = &p.env;
    require_odd(env)?;
    if p.detuning != 0.0 {
        return Err(Error::domain("stationary-phase amplitudes assume resonance"));
    }
    if p.z_ba <= 0.0 {
        return Err(Error::domain("z_ba must be positive"));
    }
    let omega0 = p.omega0_rabi();
    let sp = spa_stationary_points(env, omega0, epsilon)?;
    if sp.has_caustic() {
        return Err(Error::domain(format!(
            "caustic stationary point at eps = {epsilon:.6e} a.u.; leading-order SPA diverges"
        )));
    }
    let mut s = 0.0;
    let mut c = 0.0;
    for pt in &sp.points {
        let w = 2.0 * PI.sqrt() / (omega0 * pt.slope).abs().sqrt();
        let kappa = (omega0 * pt.slope).signum();
        let phase = epsilon * pt.t_s + 0.5 * running_area(env, omega0, pt.t_s) + kappa * PI / 4.0;
        s += w * phase.sin();
        c += w * phase.cos();
    }
    let pre = epsilon * p.z_ag / p.z_ba;
    let (a, b) = (pre * s, pre * c);
    Ok(SpaResult {
        epsilon,
        stationary_times: sp.times(),
        alpha: C64::new(0.0, -a),
        beta: C64::new(-b, 0.0),
        eta: a.hypot(b),
        phi: if a == 0.0 && b == 0.0 { 0.0 } else { a.atan2(b) },
    })
}
