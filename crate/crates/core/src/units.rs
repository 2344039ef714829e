// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Atomic-unit conversions.

use crate::error::{Error, Result};

/// Conversion constants between atomic units and laboratory units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hartree_in_ev: f64,
    au_time_in_fs: f64,
    reference_intensity: f64,
}

/// The constants used by every conversion in this crate.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hartree_in_ev: 27.211386,
    au_time_in_fs: 0.02418884,
    reference_intensity: 3.50945e16,
};

impl PhysicalConstants {
    /// Hartree energy in eV.
    pub const fn hartree_in_ev(&self) -> f64 {
        self.hartree_in_ev
    }

    /// Atomic unit of time in fs.
    pub const fn au_time_in_fs(&self) -> f64 {
        self.au_time_in_fs
    }

    /// Atomic unit of intensity in W/cm^2.
    pub const fn reference_intensity(&self) -> f64 {
        self.reference_intensity
    }
}

pub fn ev_to_au(e: f64) -> f64 {
    e / CONSTANTS.hartree_in_ev
}

pub fn au_to_ev(e: f64) -> f64 {
    e * CONSTANTS.hartree_in_ev
}

pub fn fs_to_au(t: f64) -> f64 {
    t / CONSTANTS.au_time_in_fs
}

pub fn au_to_fs(t: f64) -> f64 {
    t * CONSTANTS.au_time_in_fs
}

/// Peak field amplitude (a.u.) for a peak intensity in W/cm^2.
pub fn intensity_to_field(intensity: f64) -> Result<f64> {
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::domain(format!(
            "intensity must be finite and non-negative, got {intensity}"
        )));
    }
    Ok((intensity / CONSTANTS.reference_intensity).sqrt())
}

/// Peak Rabi frequency `z_ba * E0`.
pub fn rabi_peak(z_ba: f64, e0: f64) -> f64 {
    z_ba * e0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn energy_examples() {
        assert_eq!(ev_to_au(27.211386), 1.0);
        assert_eq!(ev_to_au(0.0), 0.0);
        assert!((ev_to_au(40.8) - 1.49937).abs() < 1e-5);
    }

    #[test]
    fn field_examples() {
        assert_eq!(intensity_to_field(3.50945e16).unwrap(), 1.0);
        assert_eq!(intensity_to_field(0.0).unwrap(), 0.0);
        assert!((intensity_to_field(1.25e13).unwrap() - 0.0188727).abs() < 1e-7);
        assert!(intensity_to_field(-1.0).is_err());
        assert!(intensity_to_field(f64::NAN).is_err());
    }

    #[test]
    fn rabi_examples() {
        let omega = rabi_peak(0.373, 0.018871);
        assert!((omega - 0.0070389).abs() < 1e-7);
        assert!((au_to_ev(omega) - 0.1916).abs() < 1e-3);
        assert_eq!(rabi_peak(0.0, 0.5), 0.0);
        assert_eq!(rabi_peak(1.0, 1.0), 1.0);
    }

    proptest! {
        #[test]
        fn energy_round_trip(x in 1e-6f64..1e6) {
            let y = au_to_ev(ev_to_au(x));
            prop_assert!(((y - x) / x).abs() <= 1e-12);
        }

        #[test]
        fn field_quadruple_intensity(i in 0.0f64..1e18) {
            let e1 = intensity_to_field(i).unwrap();
            let e4 = intensity_to_field(4.0 * i).unwrap();
            prop_assert_eq!(e4, 2.0 * e1);
            prop_assert!(intensity_to_field(i * 1.5 + 1.0).unwrap() > e1);
        }
    }
}
