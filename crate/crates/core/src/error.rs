// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The time grid cannot resolve the dynamics.
    #[error(
        "time grid too coarse: node spacing {spacing:.4e} a.u. exceeds bound {bound:.4e} a.u. \
         (0.02 / max rate); use at least {suggested_points} time points"
    )]
    GridTooCoarse {
        spacing: f64,
        bound: f64,
        suggested_points: usize,
    },

    #[error("time grid is not symmetric about t = 0: {0}")]
    AsymmetricGrid(String),

    /// The time-symmetry reduction needs an even or odd envelope.
    #[error("envelope has no declared time symmetry (even/odd) about t = 0")]
    UndeclaredSymmetry,

    #[error("degenerate pulse: {0}")]
    Degenerate(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("sweep cell {label} failed: {source}")]
    Cell {
        label: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
