//! Discretizations of the positive axis and of spectral lines, plus the
//! tolerance knobs shared by every quadrature in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Log-uniform grid on the positive axis.
///
/// Nodes are `x_j = exp(u_min + j h)` for `j = 0..len`, so the grid is
/// uniform in `u = log x`. All integrals in this crate are computed after the
/// substitution `u = log x`, which turns the weight `dx/x` into `du`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    u_min: f64,
    u_max: f64,
    h: f64,
}

impl LogGrid {
    pub fn new(u_min: f64, u_max: f64, h: f64) -> Result<Self> {
        if !(u_min.is_finite() && u_max.is_finite() && u_min < u_max) {
            return Err(Error::InvalidGrid {
                reason: format!("log bounds must satisfy u_min < u_max, got [{u_min}, {u_max}]"),
            });
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid {
                reason: format!("step must be positive, got {h}"),
            });
        }
        let grid = Self { u_min, u_max, h };
        if grid.len() < 2 {
            return Err(Error::InvalidGrid {
                reason: format!("grid [{u_min}, {u_max}] at step {h} has fewer than 2 nodes"),
            });
        }
        Ok(grid)
    }

    /// Symmetric grid `[-u_half, u_half]` with the default working step.
    pub fn symmetric(u_half: f64, h: f64) -> Result<Self> {
        Self::new(-u_half, u_half, h)
    }

    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Number of nodes, `floor((u_max - u_min)/h) + 1`.
    pub fn len(&self) -> usize {
        ((self.u_max - self.u_min) / self.h).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node abscissa `exp(u_min + j h)`; strictly positive by construction.
    pub fn node(&self, j: usize) -> f64 {
        (self.u_min + j as f64 * self.h).exp()
    }

    /// Iterator over the positive-axis nodes.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.node(j))
    }

    /// Iterator over the log-axis nodes `u_j`.
    pub fn log_nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.u_min + j as f64 * self.h)
    }
}

impl Default for LogGrid {
    /// `[e^-8, e^8]` at log step 1/4; the starting range of every adaptive
    /// integral before range expansion kicks in.
    fn default() -> Self {
        Self {
            u_min: -8.0,
            u_max: 8.0,
            h: 0.25,
        }
    }
}

/// Uniform grid on a real line (spectral variable `t`, angles `theta`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && step > 0.0) || len < 2 {
            return Err(Error::InvalidGrid {
                reason: format!("uniform grid start={start} step={step} len={len}"),
            });
        }
        Ok(Self { start, step, len })
    }

    /// Symmetric grid on `[-half, half]` with approximately the given step.
    /// The step is rounded so the endpoints and 0 are exact nodes.
    pub fn symmetric(half: f64, step: f64) -> Result<Self> {
        if !(half.is_finite() && half > 0.0 && step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid {
                reason: format!("symmetric grid half={half} step={step}"),
            });
        }
        let m = (half / step).ceil().max(1.0) as usize;
        let step = half / m as f64;
        Ok(Self {
            start: -half,
            step,
            len: 2 * m + 1,
        })
    }

    pub fn node(&self, j: usize) -> f64 {
        self.start + j as f64 * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |j| self.node(j))
    }

    pub fn end(&self) -> f64 {
        self.node(self.len - 1)
    }
}

/// Tolerances and budgets for the adaptive trapezoidal integrator.
///
/// Integration proceeds in two phases: the range is doubled until two
/// successive estimates agree within `abs_tol` (at most `max_expansions`
/// doublings), then the step is halved under the same criterion (at most
/// `max_halvings` times). Exhausting either budget raises `NonConvergent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_halvings: u32,
    pub max_expansions: u32,
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, max_halvings: u32, max_expansions: u32) -> Result<Self> {
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::Config(format!(
                "abs_tol must be positive, got {abs_tol}"
            )));
        }
        Ok(Self {
            abs_tol,
            max_halvings,
            max_expansions,
        })
    }

    pub fn with_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_halvings: 12,
            max_expansions: 8,
        }
    }
}

/// Schedule for transforms taken in the `l.i.m.` sense.
///
/// The symmetric truncations run over `rho_k = exp(k * rho_log_step)`; the
/// returned value is the plain average of the last `cesaro_window`
/// truncations. The truncation sequence may stop early once two consecutive
/// shell contributions fall below the quadrature tolerance; otherwise it runs
/// to `max_steps` and the spread of the averaged window is reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimSchedule {
    /// Log-increment of the truncation radius (the paper's schedule step).
    pub rho_log_step: f64,
    /// Number of trailing truncations averaged (Cesaro window).
    pub cesaro_window: usize,
    /// Steps that must run before early settling is allowed. Loose
    /// tolerances can otherwise mistake an oscillation zero for decay.
    pub min_steps: usize,
    /// Hard cap on the number of truncation steps.
    pub max_steps: usize,
    /// Trapezoid samples per unit of the log axis.
    pub samples_per_unit: usize,
    /// Spread of the averaged window above which an oscillation warning is
    /// attached to the spectrum.
    pub warn_spread: f64,
}

impl Default for LimSchedule {
    fn default() -> Self {
        Self {
            rho_log_step: 1.0,
            cesaro_window: 4,
            min_steps: 2,
            max_steps: 64,
            samples_per_unit: 64,
            warn_spread: 1e-6,
        }
    }
}

impl LimSchedule {
    /// Same schedule with a longer truncation run; bandlimited spectra with
    /// jump discontinuities need radii of order `1/(tol * gap)`.
    pub fn with_max_steps(self, max_steps: usize) -> Self {
        Self { max_steps, ..self }
    }

    pub fn with_samples_per_unit(self, samples_per_unit: usize) -> Self {
        Self {
            samples_per_unit,
            ..self
        }
    }

    /// Disable early settling: the schedule always runs to `max_steps`.
    pub fn full_run(self) -> Self {
        Self {
            min_steps: self.max_steps,
            ..self
        }
    }
}
