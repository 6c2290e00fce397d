//! Exact engine for torus-scaled instability optimization.
//!
//! Given root data on an ambient lattice, this crate computes — in exact
//! rational arithmetic throughout —
//!
//! * polyhedral cones of rational cocharacters (double-description
//!   conversion between inequality and generator form),
//! * finite character-set states over indexed torus frames, their numerical
//!   minima, pushforwards, unions, and group averages,
//! * optimal destabilizing rays: the maximum of `μ(λ) / ‖λ‖` over a cone,
//!   solved as a norm-minimization QP with exact KKT certificates, plus an
//!   independent lattice-enumeration oracle used for cross-checking,
//! * destabilizing cones and one-parameter limits for representations
//!   (Hilbert–Mumford style membership tests for the null cone),
//! * apartment-level building geometry: simplex cones of parabolic types,
//!   opposition, and canonical centres of stabilizer-invariant convex cones.
//!
//! The `destab` binary exposes these as subcommands over JSON inputs; see the
//! repository README for formats.
//!
//! With the default `parallel` feature the lattice scans and per-index solves
//! fan out via rayon; disabling default features yields a fully sequential
//! build with identical outputs.

pub mod rational;

pub mod matrix;

pub mod rootdatum;

pub mod cones;

pub mod states;

pub mod optimize;

pub mod oracle;

pub mod instability;

pub mod building;

pub mod presets;

pub mod schema;

pub mod cli;

use std::fmt;

/// Crate-wide error type.  The CLI maps variants onto exit codes: input and
/// schema problems exit 2, resource-budget failures exit 3, cross-check
/// disagreements exit 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input; the message names the field.
    Input(String),
    /// Coordinate-length mismatch between interacting objects.
    Dimension { expected: usize, got: usize },
    /// An enumeration or scan exceeded its configured budget.
    Budget(String),
    /// The independent oracle contradicted the solver.
    Disagreement(String),
    /// I/O failure reading or writing a file.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(m) => write!(f, "{m}"),
            Error::Dimension { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Budget(m) => write!(f, "budget exceeded: {m}"),
            Error::Disagreement(m) => write!(f, "cross-check disagreement: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl Error {
    pub fn input(msg: String) -> Self {
        Error::Input(msg)
    }

    pub fn dimension(expected: usize, got: usize) -> Self {
        Error::Dimension { expected, got }
    }

    pub fn budget(msg: String) -> Self {
        Error::Budget(msg)
    }

    pub fn disagreement(msg: String) -> Self {
        Error::Disagreement(msg)
    }

    /// Exit code the CLI maps this error onto.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Dimension { .. } | Error::Io(_) => 2,
            Error::Budget(_) => 3,
            Error::Disagreement(_) => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub use cones::Cone;
pub use rootdatum::{Character, Cocharacter, ParabolicType, RootDatum, WeylElement, WeylGroup};
pub use states::{ExtendedValue, QuasiStateFamily, StateComponent};
