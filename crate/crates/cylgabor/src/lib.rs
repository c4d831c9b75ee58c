//! Time-frequency analysis of quasi-periodic signals on the flat cylinder
//! `[0,1) x R`.
//!
//! A signal with quasi-period character `nu` satisfies `f(t+k) = e^{2 pi i k nu} f(t)`
//! and is stored by its Fourier coefficients against the orthonormal basis
//! `e_{k,nu}(t) = e^{2 pi i t (nu+k)}`.  The short-time Fourier transform of such a
//! signal lives on the vertical strip (a flat model of an infinite cylinder), and the
//! crate provides:
//!
//! * closed-form special functions (Hermite, Laguerre, Jacobi theta, Hermite theta,
//!   totally positive Fourier factors, canonical products) — [`special`];
//! * the signal space, windows and the periodization operator — [`signal`];
//! * the STFT, its quasi-periodicity and the reproducing kernels of the Gabor
//!   spaces — [`stft`];
//! * Bargmann and true polyanalytic Bargmann transforms, Fock-space kernels on
//!   `C/Z`, Weyl translation, complex periodization and holomorphic
//!   derivatives — [`fock`];
//! * Gabor frame machinery: frame bounds, Walnut/Janssen representations,
//!   Wexler-Raz residuals, dual windows and reconstruction — [`frames`];
//! * point-set geometry, Beurling densities, the explicit sampling formula and
//!   the polyanalytic interpolant — [`sampling`];
//! * vector-valued (super) frames and the polyanalytic Bargmann
//!   transform — [`superframe`];
//! * named verification suites used by the command line driver — [`verify`].

// `!(x > 0.0)` is the NaN-rejecting form of parameter validation; the
// partial_cmp rewrite clippy suggests would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// the Walnut/Janssen operator routes genuinely take that many knobs
#![allow(clippy::too_many_arguments)]

pub mod fock;
pub mod frames;
pub mod numerics;
pub mod sampling;
pub mod signal;
pub mod special;
pub mod stft;
pub mod superframe;
pub mod verify;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Order parameter above the supported ceiling.
    UnsupportedOrder {
        what: &'static str,
        max: usize,
        got: usize,
    },
    /// A truncated series or product could not certify the requested tolerance.
    Convergence { what: &'static str, tail: f64 },
    /// Argument outside the validity region of an evaluator.
    Domain(String),
    /// Operation needs a decay envelope the window/function does not declare.
    RequiresDecay(&'static str),
    /// Signals with different quasi-period characters were combined.
    NuMismatch { left: f64, right: f64 },
    /// Invalid construction (duplicate index, empty set, bad grid, ...).
    Invalid(String),
    /// The Gabor system is (numerically) not a frame; carries the offending
    /// minimal singular value of the dual-lattice Gram matrix.
    NotAFrame { min_singular: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedOrder { what, max, got } => {
                write!(f, "{what}: order {got} above supported ceiling {max}")
            }
            Error::Convergence { what, tail } => {
                write!(
                    f,
                    "{what}: truncation could not reach tolerance (tail estimate {tail:.3e})"
                )
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::RequiresDecay(what) => {
                write!(f, "{what}: requires a declared decay envelope")
            }
            Error::NuMismatch { left, right } => {
                write!(f, "quasi-period mismatch: {left} vs {right}")
            }
            Error::Invalid(msg) => write!(f, "invalid construction: {msg}"),
            Error::NotAFrame { min_singular } => {
                write!(
                    f,
                    "not a frame: minimal dual-lattice singular value {min_singular:.3e}"
                )
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
