// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Uniform time and energy grids.

use crate::error::{Error, Result};

/// Uniform time grid `t_k = (k - N/2) h`, `k = 0..=N`, with `N` a power of
/// two. Node `N/2` is exactly `t = 0` and `t_{N-k} = -t_k` holds bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    half_span: f64,
    intervals: usize,
}

impl TimeGrid {
    pub fn new(half_span: f64, intervals: usize) -> Result<Self> {
        if !(half_span > 0.0) || !half_span.is_finite() {
            return Err(Error::domain(format!(
                "time grid half-span must be positive, got {half_span}"
            )));
        }
        if intervals < 4 || !intervals.is_power_of_two() {
            return Err(Error::domain(format!(
                "time grid interval count must be a power of two >= 4, got {intervals}"
            )));
        }
        Ok(Self { half_span, intervals })
    }

    /// Grid with `points = 2^k + 1` nodes.
    pub fn with_points(half_span: f64, points: usize) -> Result<Self> {
        if points < 5 || !(points - 1).is_power_of_two() {
            return Err(Error::domain(format!(
                "time points must be a power of two plus one, got {points}"
            )));
        }
        Self::new(half_span, points - 1)
    }

    /// Smallest power-of-two grid covering `[-half_span, half_span]` with
    /// spacing no larger than `max_step`.
    pub fn covering(half_span: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) {
            return Err(Error::domain("time step bound must be positive"));
        }
        let needed = (2.0 * half_span / max_step).ceil().max(4.0) as usize;
        Self::new(half_span, needed.next_power_of_two())
    }

    pub fn half_span(&self) -> f64 {
        self.half_span
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_span / self.intervals as f64
    }

    pub fn center_index(&self) -> usize {
        self.intervals / 2
    }

    pub fn node(&self, k: usize) -> f64 {
        (k as f64 - (self.intervals / 2) as f64) * self.step()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.intervals).map(|k| self.node(k)).collect()
    }
}

/// Uniform grid of relative photoelectron energies, symmetric about 0 with an
/// odd number of points so that `eps = 0` is a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGrid {
    half_span: f64,
    points: usize,
}

impl EnergyGrid {
    pub fn symmetric(half_span: f64, points: usize) -> Result<Self> {
        if !(half_span > 0.0) || !half_span.is_finite() {
            return Err(Error::domain(format!(
                "energy grid half-span must be positive, got {half_span}"
            )));
        }
        if points < 3 || points.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "energy grid needs an odd number of points >= 3, got {points}"
            )));
        }
        Ok(Self { half_span, points })
    }

    pub fn half_span(&self) -> f64 {
        self.half_span
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_span / (self.points - 1) as f64
    }

    pub fn zero_index(&self) -> usize {
        self.points / 2
    }

    pub fn value(&self, i: usize) -> f64 {
        (i as f64 - (self.points / 2) as f64) * self.spacing()
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }

    /// Trapezoidal integral of samples taken on this grid.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.points);
        let n = samples.len();
        let inner: f64 = samples[1..n - 1].iter().sum();
        self.spacing() * (inner + 0.5 * (samples[0] + samples[n - 1]))
    }
}
