//! Finite-dimensional quantum measurement simulator.
//!
//! The crate is organised bottom-up:
//!
//! * [`hilbert`]: composite state spaces, state vectors, observables and the
//!   spin-1/2 bases used everywhere else.
//! * [`density`]: density matrices for pure states, proper mixtures and
//!   reduced (improper) states, with the usual prediction rules.
//! * [`measurement`]: von Neumann premeasurement, reduction as a bookkeeping
//!   device, environment-induced decoherence and pointer-basis selection.
//! * [`observer`]: a never-reduced branched universal state together with
//!   observers whose awareness hangs up to one branch at a time.
//! * [`scenarios`]: scripted thought experiments with seeded statistics and
//!   brute-force oracles, plus the report formats used by the CLI.

pub mod density;
pub mod error;
pub mod hilbert;
pub mod measurement;
pub mod observer;
pub mod scenarios;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

/// Tolerance for algebraic identities.
pub const EPS_NUM: f64 = 1e-10;
/// Tolerance for normalization checks.
pub const EPS_NORM: f64 = 1e-9;
