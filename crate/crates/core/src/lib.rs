//! Rigorous high-precision evaluation of Dirichlet L-values at rational points.
//!
//! The main path evaluates `L(s, χ)` through the approximate functional
//! equation, with every incomplete gamma value `Γ(a, z)` computed by the
//! bit-burst method: a chain of Taylor steps whose coefficient recurrences are
//! multiplied out exactly by binary splitting. All real arithmetic is done in
//! midpoint-radius balls, so every returned value is an enclosure.
//!
//! Modules, bottom-up:
//!
//! * [`numcore`]: balls, complex balls, elementary functions, decimal I/O.
//! * [`binsplit`]: exact products of small rational matrices.
//! * [`chars`]: Dirichlet characters in Conrey labelling.
//! * [`incgamma`]: the series kernels for `Γ(a, z)` and the bit-burst driver.
//! * [`afe`]: assembly of `L(s, χ)`, truncation planning and `Γ(a)`.
//! * [`exactvals`]: exact Bernoulli and Euler numbers, Landau–Ramanujan constant.
//! * [`oracles`]: slow independent reference methods used for validation.

pub mod afe;
pub mod binsplit;
pub mod chars;
pub mod exactvals;
pub mod incgamma;
pub mod numcore;
pub mod oracles;

mod error;

pub use error::{Error, Result};
pub use numcore::{Ball, ComplexBall};
pub use rug::{Integer, Rational};
