//! Trapezoidal and Gauss-Legendre quadrature on the log axis.
//!
//! The adaptive driver follows a fixed two-phase scheme: the integration
//! range is doubled until the estimate stabilizes (the integrands of interest
//! decay at least algebraically), then the step is halved until successive
//! estimates agree within the absolute tolerance. Trapezoid sums on uniform
//! grids are spectrally accurate for the analytic, decaying integrands that
//! arise from the substitution `u = log x`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{LogGrid, QuadratureConfig};

/// Compensated (Kahan) accumulator for complex sums.
///
/// Long trapezoid and sinc-series sums run into six-digit term counts;
/// compensation keeps the accumulation error at a few ulps of the result.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: Complex64,
    carry: Complex64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// Composite trapezoid of `g` over `[a, b]` with `n` equal intervals.
pub fn trapezoid<F>(g: &F, a: f64, b: f64, n: usize) -> Complex64
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    debug_assert!(n >= 1);
    let h = (b - a) / n as f64;
    let mut acc = KahanSum::new();
    acc.add(0.5 * g(a));
    for j in 1..n {
        acc.add(g(a + j as f64 * h));
    }
    acc.add(0.5 * g(b));
    acc.value() * h
}

/// State of a composite trapezoid estimate that can grow its range shell by
/// shell and halve its step without re-evaluating interior nodes.
struct TrapezoidState<'a, F: ?Sized> {
    g: &'a F,
    a: f64,
    b: f64,
    h: f64,
    n: usize,
    value: Complex64,
}

impl<'a, F> TrapezoidState<'a, F>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    fn new(g: &'a F, a: f64, b: f64, h_target: f64) -> Self {
        let n = ((b - a) / h_target).round().max(1.0) as usize;
        let h = (b - a) / n as f64;
        let value = trapezoid(g, a, b, n);
        Self {
            g,
            a,
            b,
            h,
            n,
            value,
        }
    }

    /// Extend the range by `m` steps on each side; returns the magnitude of
    /// the added shells.
    fn expand(&mut self, m: usize) -> f64 {
        let left = trapezoid(self.g, self.a - m as f64 * self.h, self.a, m);
        let right = trapezoid(self.g, self.b, self.b + m as f64 * self.h, m);
        self.a -= m as f64 * self.h;
        self.b += m as f64 * self.h;
        self.n += 2 * m;
        self.value += left + right;
        (left + right).norm()
    }

    /// Halve the step, reusing the present estimate; returns the change.
    fn halve(&mut self) -> f64 {
        let half = self.h / 2.0;
        let mut mid = KahanSum::new();
        for j in 0..self.n {
            mid.add((self.g)(self.a + (j as f64 + 0.5) * self.h));
        }
        let refined = 0.5 * self.value + half * mid.value();
        let delta = (refined - self.value).norm();
        self.value = refined;
        self.h = half;
        self.n *= 2;
        delta
    }
}

/// Adaptive integral of `g` over the whole real line.
///
/// `start` fixes the initial range and step in the integration variable
/// (the log axis for positive-axis integrals). Errors with `NonConvergent`
/// when either phase exhausts its budget before meeting `cfg.abs_tol`.
/// `max_expansions = 0` disables the expansion phase entirely: the given
/// range is trusted as the integration window.
pub fn integrate_line<F>(g: &F, start: &LogGrid, cfg: &QuadratureConfig, context: &str) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let mut state = TrapezoidState::new(g, start.u_min(), start.u_max(), start.step());

    if cfg.max_expansions > 0 {
        let mut delta = f64::INFINITY;
        let mut converged = false;
        for _ in 0..cfg.max_expansions {
            let m = (state.n / 2).max(1);
            delta = state.expand(m);
            if delta < cfg.abs_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergent {
                context: format!("{context}: range expansion"),
                last_delta: delta,
                tol: cfg.abs_tol,
            });
        }
    }

    refine_by_halving(&mut state, cfg, context)?;
    Ok(state.value)
}

/// Adaptive integral over the fixed range `[a, b]` (step halving only).
pub fn integrate_fixed<F>(
    g: &F,
    a: f64,
    b: f64,
    h0: f64,
    cfg: &QuadratureConfig,
    context: &str,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let mut state = TrapezoidState::new(g, a, b, h0);
    refine_by_halving(&mut state, cfg, context)?;
    Ok(state.value)
}

fn refine_by_halving<F>(
    state: &mut TrapezoidState<'_, F>,
    cfg: &QuadratureConfig,
    context: &str,
) -> Result<()>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let mut delta = f64::INFINITY;
    for _ in 0..=cfg.max_halvings {
        delta = state.halve();
        if delta < cfg.abs_tol {
            return Ok(());
        }
    }
    Err(Error::NonConvergent {
        context: format!("{context}: step halving"),
        last_delta: delta,
        tol: cfg.abs_tol,
    })
}

/// Adaptive integral over `[a, +inf)`: the range grows to the right until
/// the added shell is negligible, then the step is halved.
pub fn integrate_half_line<F>(
    g: &F,
    a: f64,
    initial_len: f64,
    h0: f64,
    cfg: &QuadratureConfig,
    context: &str,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let mut state = TrapezoidState::new(g, a, a + initial_len.max(h0), h0);
    let mut delta = f64::INFINITY;
    let mut converged = false;
    for _ in 0..=cfg.max_expansions {
        let m = state.n.max(1);
        let right = trapezoid(state.g, state.b, state.b + m as f64 * state.h, m);
        state.b += m as f64 * state.h;
        state.n += m;
        state.value += right;
        delta = right.norm();
        if delta < cfg.abs_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergent {
            context: format!("{context}: half-line expansion"),
            last_delta: delta,
            tol: cfg.abs_tol,
        });
    }
    refine_by_halving(&mut state, cfg, context)?;
    Ok(state.value)
}

// 5-point Gauss-Legendre rule on [-1, 1].
const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

/// Composite 5-point Gauss-Legendre quadrature with `panels` equal panels.
pub fn gauss_legendre<F>(g: &F, a: f64, b: f64, panels: usize) -> Complex64
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    debug_assert!(panels >= 1);
    let width = (b - a) / panels as f64;
    let half = width / 2.0;
    let mut acc = KahanSum::new();
    for p in 0..panels {
        let center = a + (p as f64 + 0.5) * width;
        for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
            acc.add(g(center + half * x) * *w);
        }
    }
    acc.value() * half
}
