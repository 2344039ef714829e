// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse envelopes, their time-symmetry class, and area functionals.
//!
//! Conventions: `tau` is the FWHM of the intensity profile, so the Gaussian
//! field envelope is `exp(-2 ln2 t^2 / tau^2)`. Odd envelopes are positive
//! before `t = 0` and negative after, `-sign(t) * even(t)`.
//! Gaussian-family envelopes are truncated at `|t| > 5 tau`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Half-width of Gaussian support in units of `tau`.
pub const GAUSSIAN_SUPPORT: f64 = 5.0;

/// Sub-panels per quadrature segment for envelope functionals.
const PANELS: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Gaussian,
    Flattop,
    ZeroGaussian,
    ZeroFlattop,
    SmoothZero,
    DoubleGaussian,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 6] = [
        EnvelopeKind::Gaussian,
        EnvelopeKind::Flattop,
        EnvelopeKind::ZeroGaussian,
        EnvelopeKind::ZeroFlattop,
        EnvelopeKind::SmoothZero,
        EnvelopeKind::DoubleGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvelopeKind::Gaussian => "gaussian",
            EnvelopeKind::Flattop => "flattop",
            EnvelopeKind::ZeroGaussian => "zero_gaussian",
            EnvelopeKind::ZeroFlattop => "zero_flattop",
            EnvelopeKind::SmoothZero => "smooth_zero",
            EnvelopeKind::DoubleGaussian => "double_gaussian",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn gaussian_profile(self) -> bool {
        !matches!(self, EnvelopeKind::Flattop | EnvelopeKind::ZeroFlattop)
    }
}

impl std::fmt::Display for EnvelopeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Time-symmetry class of an envelope; `chi = +1` for even, `-1` for odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryClass {
    pub parity: Parity,
    pub chi: i8,
}

impl SymmetryClass {
    pub const EVEN: SymmetryClass = SymmetryClass {
        parity: Parity::Even,
        chi: 1,
    };
    pub const ODD: SymmetryClass = SymmetryClass {
        parity: Parity::Odd,
        chi: -1,
    };

    pub fn chi(self) -> f64 {
        f64::from(self.chi)
    }
}

/// Which one-sided limit to take at a jump of the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A parametric pulse envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSpec {
    kind: EnvelopeKind,
    tau: f64,
    steepness: f64,
    separation: Option<f64>,
    delay: f64,
}

/// Default `K` (a.u. of inverse time) for `smooth_zero`.
pub const DEFAULT_STEEPNESS: f64 = 0.5;

impl EnvelopeSpec {
    pub fn new(kind: EnvelopeKind, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!("tau must be positive, got {tau}")));
        }
        Ok(Self {
            kind,
            tau,
            steepness: DEFAULT_STEEPNESS,
            separation: None,
            delay: 0.0,
        })
    }

    /// Steepness `K` of the smooth sign change (`smooth_zero` only).
    pub fn with_steepness(mut self, k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::domain(format!("steepness K must be positive, got {k}")));
        }
        self.steepness = k;
        Ok(self)
    }

    /// Fixed sub-pulse separation (`double_gaussian` only). Without it the
    /// separation follows the duration as `2 tau`.
    pub fn with_separation(mut self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain(format!("separation must be positive, got {s}")));
        }
        self.separation = Some(s);
        Ok(self)
    }

    /// Shifts the pulse centre to `t = delay`. Any nonzero delay removes the
    /// time symmetry about the origin.
    pub fn with_delay(mut self, delay: f64) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!("tau must be positive, got {tau}")));
        }
        self.tau = tau;
        Ok(self)
    }

    pub fn kind(&self) -> EnvelopeKind {
        self.kind
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steepness(&self) -> f64 {
        self.steepness
    }

    pub fn separation(&self) -> f64 {
        self.separation.unwrap_or(2.0 * self.tau)
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// True when the shape is a function of `t / tau` only, so areas scale
    /// linearly with `tau`.
    pub fn scales_with_tau(&self) -> bool {
        match self.kind {
            EnvelopeKind::SmoothZero => false,
            EnvelopeKind::DoubleGaussian => self.separation.is_none(),
            _ => true,
        }
    }

    fn even_profile(&self, t: f64) -> f64 {
        if self.kind.gaussian_profile() {
            if t.abs() > GAUSSIAN_SUPPORT * self.tau {
                0.0
            } else {
                gaussian(t, self.tau)
            }
        } else if t.abs() <= 0.5 * self.tau {
            1.0
        } else {
            0.0
        }
    }

    /// Envelope value at `t` (a.u.).
    pub fn evaluate(&self, t: f64) -> f64 {
        let t = t - self.delay;
        match self.kind {
            EnvelopeKind::Gaussian | EnvelopeKind::Flattop => self.even_profile(t),
            EnvelopeKind::ZeroGaussian | EnvelopeKind::ZeroFlattop => -sign(t) * self.even_profile(t),
            EnvelopeKind::SmoothZero => -(2.0 / PI) * (self.steepness * t).atan() * self.even_profile(t),
            EnvelopeKind::DoubleGaussian => {
                let h = 0.5 * self.separation();
                self.lobe(t + h) - self.lobe(t - h)
            }
        }
    }

    fn lobe(&self, t: f64) -> f64 {
        if t.abs() > GAUSSIAN_SUPPORT * self.tau {
            0.0
        } else {
            gaussian(t, self.tau)
        }
    }

    /// One-sided limit of the envelope at `t`. Away from a jump this equals
    /// [`evaluate`](Self::evaluate).
    pub fn evaluate_sided(&self, t: f64, side: Side) -> f64 {
        let snap = 1e-12 * self.tau;
        for d in self.discontinuities() {
            if (t - d).abs() <= snap {
                let r = d - self.delay;
                return match (self.kind, side) {
                    (EnvelopeKind::ZeroGaussian | EnvelopeKind::ZeroFlattop, _) if r == 0.0 => {
                        let s = if side == Side::Left { 1.0 } else { -1.0 };
                        s * self.even_profile(0.0)
                    }
                    _ => {
                        // flattop edges
                        let inside = match side {
                            Side::Left => r > 0.0,
                            Side::Right => r < 0.0,
                        };
                        let v = if inside { 1.0 } else { 0.0 };
                        if self.kind == EnvelopeKind::ZeroFlattop {
                            -sign(r) * v
                        } else {
                            v
                        }
                    }
                };
            }
        }
        self.evaluate(t)
    }

    /// Time derivative of the envelope (zero at and away from jumps on flat parts).
    pub fn derivative(&self, t: f64) -> f64 {
        let t = t - self.delay;
        let dg = |t: f64| -> f64 {
            if t.abs() > GAUSSIAN_SUPPORT * self.tau {
                0.0
            } else {
                -4.0 * LN_2 * t / (self.tau * self.tau) * gaussian(t, self.tau)
            }
        };
        match self.kind {
            EnvelopeKind::Gaussian => dg(t),
            EnvelopeKind::Flattop | EnvelopeKind::ZeroFlattop => 0.0,
            EnvelopeKind::ZeroGaussian => -sign(t) * dg(t),
            EnvelopeKind::SmoothZero => {
                let k = self.steepness;
                let g = self.even_profile(t);
                -(2.0 / PI) * (k / (1.0 + k * k * t * t) * g + (k * t).atan() * dg(t))
            }
            EnvelopeKind::DoubleGaussian => {
                let h = 0.5 * self.separation();
                dg(t + h) - dg(t - h)
            }
        }
    }

    /// Half-width of the interval outside of which the envelope vanishes,
    /// measured from the pulse centre.
    pub fn half_support(&self) -> f64 {
        match self.kind {
            EnvelopeKind::Flattop | EnvelopeKind::ZeroFlattop => 0.5 * self.tau,
            EnvelopeKind::DoubleGaussian => 0.5 * self.separation() + GAUSSIAN_SUPPORT * self.tau,
            _ => GAUSSIAN_SUPPORT * self.tau,
        }
    }

    /// `(start, end)` of the support in absolute time.
    pub fn support(&self) -> (f64, f64) {
        let h = self.half_support();
        (self.delay - h, self.delay + h)
    }

    /// Locations of jump discontinuities.
    pub fn discontinuities(&self) -> Vec<f64> {
        let h = 0.5 * self.tau;
        let rel: &[f64] = match self.kind {
            EnvelopeKind::Flattop => &[-h, h],
            EnvelopeKind::ZeroFlattop => &[-h, 0.0, h],
            EnvelopeKind::ZeroGaussian => &[0.0],
            _ => &[],
        };
        rel.iter().map(|r| r + self.delay).collect()
    }

    /// Quadrature breakpoints: jumps, kinks and regions of rapid variation.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.discontinuities();
        b.push(self.delay);
        let (lo, hi) = self.support();
        match self.kind {
            EnvelopeKind::SmoothZero => {
                // resolve the atan transition, scale 1/K
                let mut s = 1.0 / self.steepness;
                while s < self.half_support() {
                    b.push(self.delay - s);
                    b.push(self.delay + s);
                    s *= 4.0;
                }
            }
            EnvelopeKind::DoubleGaussian => {
                let h = 0.5 * self.separation();
                b.extend([self.delay - h, self.delay + h]);
                // lobe truncation edges
                let e = GAUSSIAN_SUPPORT * self.tau;
                b.extend([self.delay - h - e, self.delay - h + e]);
                b.extend([self.delay + h - e, self.delay + h + e]);
            }
            _ => {}
        }
        b.retain(|&x| x > lo && x < hi);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// Time-symmetry class about `t = 0`; `None` when the pulse is displaced.
    pub fn symmetry_class(&self) -> Option<SymmetryClass> {
        if self.delay != 0.0 {
            return None;
        }
        Some(match self.kind {
            EnvelopeKind::Gaussian | EnvelopeKind::Flattop => SymmetryClass::EVEN,
            _ => SymmetryClass::ODD,
        })
    }

    fn integral(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        quadrature::integrate(f, a, b, &self.breakpoints(), PANELS)
    }
}

fn gaussian(t: f64, tau: f64) -> f64 {
    (-2.0 * LN_2 * t * t / (tau * tau)).exp()
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Pulse area `theta(t) = int_{-inf}^t omega0 * env(t') dt'`.
pub fn running_area(env: &EnvelopeSpec, omega0: f64, t: f64) -> f64 {
    let (lo, hi) = env.support();
    if t <= lo {
        return 0.0;
    }
    let t = t.min(hi);
    omega0 * env.integral(|s| env.evaluate(s), lo, t)
}

/// Pulse area at every node of an increasing time sequence.
pub fn running_area_on(env: &EnvelopeSpec, omega0: f64, times: &[f64]) -> Vec<f64> {
    let Some(&first) = times.first() else {
        return Vec::new();
    };
    let offset = running_area(env, omega0, first);
    quadrature::cumulative(|s| omega0 * env.evaluate(s), times, &env.breakpoints())
        .into_iter()
        .map(|v| v + offset)
        .collect()
}

/// Absolute pulse area `int |omega0 * env(t)| dt`.
pub fn absolute_area(env: &EnvelopeSpec, omega0: f64) -> f64 {
    let (lo, hi) = env.support();
    omega0.abs() * env.integral(|s| env.evaluate(s).abs(), lo, hi)
}

/// `int env(t)^2 dt`, the integrated intensity profile.
pub fn intensity_integral(env: &EnvelopeSpec) -> f64 {
    let (lo, hi) = env.support();
    env.integral(|s| env.evaluate(s).powi(2), lo, hi)
}

/// Average Rabi frequency `int |Omega|^3 dt / int |Omega|^2 dt`.
pub fn average_rabi(env: &EnvelopeSpec, omega0: f64) -> Result<f64> {
    let (lo, hi) = env.support();
    let m2 = env.integral(|s| env.evaluate(s).powi(2), lo, hi);
    if !(m2 > 0.0) || omega0 == 0.0 {
        return Err(Error::domain("average Rabi frequency of a vanishing pulse"));
    }
    let m3 = env.integral(|s| env.evaluate(s).abs().powi(3), lo, hi);
    Ok(omega0.abs() * m3 / m2)
}

/// Result of inverting the absolute area for the pulse duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseDuration {
    pub tau: f64,
    /// Set when the requested area is zero and no pulse exists.
    pub degenerate: bool,
}

/// Duration `tau` such that the envelope (other parameters kept) has absolute
/// area `theta` at peak Rabi frequency `omega0`.
pub fn duration_for_area(env: &EnvelopeSpec, omega0: f64, theta: f64) -> Result<PulseDuration> {
    if !(omega0 > 0.0) {
        return Err(Error::domain(format!(
            "peak Rabi frequency must be positive to reach an area, got {omega0}"
        )));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::domain(format!("area must be non-negative, got {theta}")));
    }
    if theta == 0.0 {
        return Ok(PulseDuration {
            tau: 0.0,
            degenerate: true,
        });
    }
    let unit = env.with_tau(1.0)?;
    if env.scales_with_tau() {
        let per_tau = absolute_area(&unit, omega0);
        return Ok(PulseDuration {
            tau: theta / per_tau,
            degenerate: false,
        });
    }
    // Area grows monotonically with tau; bracket and bisect.
    let area = |tau: f64| absolute_area(&env.with_tau(tau).expect("positive tau"), omega0);
    let mut hi = theta / absolute_area(&unit, omega0).max(1e-300);
    hi = hi.max(1e-12);
    let mut last = area(hi);
    while last < theta {
        hi *= 2.0;
        let next = area(hi);
        if next <= last * (1.0 + 1e-9) || hi > 1e12 {
            return Err(Error::domain(format!(
                "absolute area {theta} is unreachable for this {} shape (saturates near {next})",
                env.kind
            )));
        }
        last = next;
    }
    let mut lo = hi;
    while area(lo) > theta && lo > 1e-300 {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if area(mid) < theta {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(PulseDuration {
        tau: 0.5 * (lo + hi),
        degenerate: false,
    })
}
