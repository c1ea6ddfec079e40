//! Numerical Mellin analysis on the positive half-line.
//!
//! Everything works in the log chart `u = log x`, where Mellin integrals
//! become ordinary line integrals with decaying integrands:
//!
//! - [`signal`]: signals on the positive axis, weighted `X^p_c` norms,
//!   Mellin translation and pointwise Mellin derivatives;
//! - [`transform`]: forward/inverse Mellin transforms in the absolutely
//!   convergent and the mean-square (truncated-limit) senses, with
//!   Plancherel and consistency verification;
//! - [`polar`]: calculus for functions of `(r, theta)` treated as Cartesian
//!   coordinates — difference-quotient derivatives, Cauchy-Riemann
//!   residuals, line integrals, and the strip substitution;
//! - [`bernstein`]: bandlimited extension to the half-plane, growth
//!   certificates, bandwidth estimation, and the round-trip verifier;
//! - [`hardy`]: Hardy norms on strips and the bounds they control;
//! - [`distance`]: spectral-tail distances from bandlimited classes and
//!   their exponential bounds;
//! - [`sampling`]: the `lin_c` kernel, exponential-sampling reconstruction,
//!   and remainder measurements;
//! - [`corpus`]: the registry of named test signals.

pub mod bernstein;
pub mod corpus;
pub mod distance;
pub mod error;
pub mod grid;
pub mod hardy;
pub mod polar;
pub mod quad;
pub mod sampling;
pub mod signal;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
pub use grid::{LimSchedule, LogGrid, QuadratureConfig, UniformGrid};
pub use polar::{Curve, PolarFunction};
pub use signal::PositiveAxisSignal;
pub use transform::{MellinSpectrum, Sense};
