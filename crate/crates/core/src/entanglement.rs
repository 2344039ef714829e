// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Post-measurement ion density matrix and electron-ion entanglement.
//!
//! Conditioning the final state on ionization and tracing out the
//! photoelectron leaves the 2x2 matrix
//! `rho_jj' = int c_j(eps) conj(c_j'(eps)) d eps / P_ion` with `c_a = alpha`,
//! `c_b = beta`.

use num_complex::Complex64 as C64;

use crate::channel::{ion_populations, ChannelAmplitudes};
use crate::error::{Error, Result};

/// Below this ionization probability the conditioned state is undefined.
pub const MIN_IONIZATION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonDensityMatrix {
    pub rho_aa: f64,
    pub rho_bb: f64,
    pub rho_ab: C64,
}

impl IonDensityMatrix {
    pub fn rho_ba(&self) -> C64 {
        self.rho_ab.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho_aa + self.rho_bb
    }

    pub fn determinant(&self) -> f64 {
        self.rho_aa * self.rho_bb - self.rho_ab.norm_sqr()
    }

    /// Eigenvalues `(lambda_plus, lambda_minus)` from trace and determinant.
    /// Round-off negatives down to `-1e-12` are clamped to zero.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_tr = 0.5 * self.trace();
        let gap = (0.25 * (self.rho_aa - self.rho_bb).powi(2) + self.rho_ab.norm_sqr()).sqrt();
        let clamp = |x: f64| if (-1e-12..0.0).contains(&x) { 0.0 } else { x };
        (clamp(half_tr + gap), clamp(half_tr - gap))
    }

    pub fn purity(&self) -> f64 {
        self.rho_aa.powi(2) + self.rho_bb.powi(2) + 2.0 * self.rho_ab.norm_sqr()
    }
}

/// Reduced ion density matrix conditioned on ionization.
pub fn reduced_ion_density(c: &ChannelAmplitudes) -> Result<IonDensityMatrix> {
    let pops = ion_populations(c);
    if !(pops.p_ion > MIN_IONIZATION) {
        return Err(Error::domain(format!(
            "ionization probability {:.3e} too small to condition on",
            pops.p_ion
        )));
    }
    let re: Vec<f64> = c.alpha.iter().zip(&c.beta).map(|(a, b)| (a * b.conj()).re).collect();
    let im: Vec<f64> = c.alpha.iter().zip(&c.beta).map(|(a, b)| (a * b.conj()).im).collect();
    let coherence = C64::new(c.grid.integrate(&re), c.grid.integrate(&im));
    Ok(IonDensityMatrix {
        rho_aa: pops.p_a / pops.p_ion,
        rho_bb: pops.p_b / pops.p_ion,
        rho_ab: coherence / pops.p_ion,
    })
}

/// `-Tr rho log2 rho` in bits.
pub fn von_neumann_entropy(rho: &IonDensityMatrix) -> f64 {
    let (lp, lm) = rho.eigenvalues();
    let term = |l: f64| if l > 0.0 { -l * l.log2() } else { 0.0 };
    (term(lp) + term(lm)).max(0.0)
}

/// Entropy in nats, for presentation.
pub fn entropy_nats(rho: &IonDensityMatrix) -> f64 {
    von_neumann_entropy(rho) * std::f64::consts::LN_2
}

/// Jointly ionization-conditioned density and its entropy.
pub fn entanglement_entropy(c: &ChannelAmplitudes) -> Result<f64> {
    Ok(von_neumann_entropy(&reduced_ion_density(c)?))
}

/// Ion channel index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    A,
    B,
}

/// Lazily evaluated elements of the full (unconditioned) density matrix.
#[derive(Debug, Clone, Copy)]
pub struct FullDensity<'a> {
    amps: &'a ChannelAmplitudes,
}

pub fn full_density_elements(c: &ChannelAmplitudes) -> FullDensity<'_> {
    FullDensity { amps: c }
}

impl FullDensity<'_> {
    fn amp(&self, j: Channel, i: usize) -> C64 {
        match j {
            Channel::A => self.amps.alpha[i],
            Channel::B => self.amps.beta[i],
        }
    }

    /// `rho_gg = |g(inf)|^2`.
    pub fn rho_gg(&self) -> f64 {
        self.amps.survival.powi(2)
    }

    /// `rho_gj(eps_i) = conj(g(inf)) c_j(eps_i)`.
    pub fn rho_g(&self, j: Channel, i: usize) -> C64 {
        self.amps.survival * self.amp(j, i)
    }

    /// `rho_jj'(eps_i, eps_k) = conj(c_j(eps_i)) c_j'(eps_k)`.
    pub fn rho(&self, j: Channel, jp: Channel, i: usize, k: usize) -> C64 {
        self.amp(j, i).conj() * self.amp(jp, k)
    }

    /// `rho_gg + int (rho_aa(eps, eps) + rho_bb(eps, eps)) d eps`.
    pub fn trace(&self) -> f64 {
        let n = self.amps.grid.len();
        let diag: Vec<f64> = (0..n)
            .map(|i| (self.rho(Channel::A, Channel::A, i, i) + self.rho(Channel::B, Channel::B, i, i)).re)
            .collect();
        self.rho_gg() + self.amps.grid.integrate(&diag)
    }
}
