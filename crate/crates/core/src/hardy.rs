//! Mellin-Hardy norms on a strip and the verification ops built on them:
//! the pointwise bound, the Nikol'ski-type sum bound, boundary decay, and
//! the exponential relation between boundary spectra.

use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::{LimSchedule, LogGrid, QuadratureConfig, UniformGrid};
use crate::polar::PolarFunction;
use crate::signal::xnorm;
use crate::transform::{mellin_forward_at, Sense};

/// Symmetrized per-theta norm of a Hardy-space candidate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PerThetaNorm {
    pub theta: f64,
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub avg: f64,
}

/// Estimate of the Hardy norm `sup_theta ((‖f(.,θ)‖^p + ‖f(.,-θ)‖^p)/2)^{1/p}`.
///
/// The sup over the open interval `]0, a[` is approximated on the geometric
/// ladder `theta_j = a (1 - 2^{-j})` accumulating at the boundary; `value`
/// is the ladder maximum, never an extrapolation.
#[derive(Debug, Clone, Serialize)]
pub struct HardyNormEstimate {
    pub a: f64,
    pub c: f64,
    pub p: f64,
    pub value: f64,
    pub theta_grid: Vec<f64>,
    pub per_theta: Vec<PerThetaNorm>,
}

impl HardyNormEstimate {
    /// CSV with columns `theta,norm_plus,norm_minus,avg`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# hardy-norm a={} c={} p={} value={}", self.a, self.c, self.p, self.value)?;
        writeln!(w, "theta,norm_plus,norm_minus,avg")?;
        for row in &self.per_theta {
            writeln!(w, "{},{},{},{}", row.theta, row.norm_plus, row.norm_minus, row.avg)?;
        }
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if p == 1.0 || p == 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent { p })
    }
}

/// Hardy norm estimate with `theta_count` ladder rungs (default 8).
pub fn hardy_norm(
    f: &PolarFunction,
    a: f64,
    c: f64,
    p: f64,
    theta_count: u32,
    cfg: &QuadratureConfig,
) -> Result<HardyNormEstimate> {
    check_p(p)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Config(format!("strip half-width must be positive, got {a}")));
    }
    let grid = LogGrid::default();
    let mut per_theta = Vec::new();
    let mut theta_grid = Vec::new();
    let mut value = 0.0f64;
    for j in 1..=theta_count.max(1) {
        let theta = a * (1.0 - 2f64.powi(-(j as i32)));
        let norm_plus = xnorm(&f.restriction(theta, c), c, p, &grid, cfg)
            .map_err(|_| Error::NormDivergent { theta })?;
        let norm_minus = xnorm(&f.restriction(-theta, c), c, p, &grid, cfg)
            .map_err(|_| Error::NormDivergent { theta: -theta })?;
        let avg = ((norm_plus.powf(p) + norm_minus.powf(p)) / 2.0).powf(1.0 / p);
        value = value.max(avg);
        theta_grid.push(theta);
        per_theta.push(PerThetaNorm {
            theta,
            norm_plus,
            norm_minus,
            avg,
        });
    }
    Ok(HardyNormEstimate {
        a,
        c,
        p,
        value,
        theta_grid,
        per_theta,
    })
}

/// Max over the probes of `|f(r,θ)| r^c / ((4/(π(a-a1)))^{1/p} ‖f‖_H)`; at
/// most 1 for Hardy members.
pub fn pointwise_bound_check(
    f: &PolarFunction,
    a: f64,
    a1: f64,
    c: f64,
    p: f64,
    probes: &[(f64, f64)],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_p(p)?;
    if !(0.0 < a1 && a1 < a) {
        return Err(Error::Config(format!("need 0 < a1 < a, got a1={a1}, a={a}")));
    }
    let hardy = hardy_norm(f, a, c, p, 8, cfg)?;
    let rhs = (4.0 / (PI * (a - a1))).powf(1.0 / p) * hardy.value;
    let mut worst = 0.0f64;
    for &(r, theta) in probes {
        if r <= 0.0 {
            return Err(Error::DomainError { x: r });
        }
        if theta.abs() > a1 {
            return Err(Error::OutsideStrip {
                theta,
                margin: 0.0,
                strip_a: a1,
            });
        }
        let lhs = f.eval(r, theta).norm() * r.powf(c);
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        } else if lhs > 0.0 {
            worst = f64::INFINITY;
        }
    }
    Ok(worst)
}

/// Both sides of the Nikol'ski-type inequality for a node sequence with
/// mesh ratio strictly above `e^{2 delta}`.
#[derive(Debug, Clone, Serialize)]
pub struct NikolskiReport {
    pub lhs: f64,
    pub rhs: f64,
    pub delta: f64,
    pub hardy_norm: f64,
}

pub fn nikolski_check(
    f: &PolarFunction,
    a: f64,
    c: f64,
    p: f64,
    delta: f64,
    nodes: &[f64],
    cfg: &QuadratureConfig,
) -> Result<NikolskiReport> {
    check_p(p)?;
    if !(0.0 < delta && delta < a) {
        return Err(Error::Config(format!("need delta in ]0, a[, got {delta}")));
    }
    let required = (2.0 * delta).exp();
    for (i, pair) in nodes.windows(2).enumerate() {
        if pair[0] <= 0.0 {
            return Err(Error::DomainError { x: pair[0] });
        }
        let ratio = pair[1] / pair[0];
        if ratio <= required {
            return Err(Error::RatioViolation {
                n: (i + 1) as i64,
                ratio,
                required,
            });
        }
    }
    let mut sum = 0.0f64;
    for &t in nodes {
        sum += t.powf(c * p) * f.eval(t, 0.0).norm().powf(p);
    }
    let lhs = sum.powf(1.0 / p);
    let hardy = hardy_norm(f, a, c, p, 8, cfg)?;
    let rhs = (2.0 / (PI * delta)).powf(1.0 / p) * hardy.value;
    Ok(NikolskiReport {
        lhs,
        rhs,
        delta,
        hardy_norm: hardy.value,
    })
}

/// Weighted magnitudes `r^c |f(r, θ)|` at the extreme grid radii, sampled
/// over `θ` in `[-a1, a1]`; Hardy members decay to zero there.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryDecayReport {
    pub r_lo: f64,
    pub r_hi: f64,
    pub max_value: f64,
}

pub fn boundary_decay_check(
    f: &PolarFunction,
    a: f64,
    a1: f64,
    c: f64,
    grid: &LogGrid,
    theta_samples: usize,
) -> Result<BoundaryDecayReport> {
    if !(0.0 < a1 && a1 < a) {
        return Err(Error::Config(format!("need 0 < a1 < a, got a1={a1}, a={a}")));
    }
    let r_lo = grid.node(0);
    let r_hi = grid.node(grid.len() - 1);
    let n = theta_samples.max(2);
    let mut max_value = 0.0f64;
    for j in 0..n {
        let theta = -a1 + 2.0 * a1 * j as f64 / (n - 1) as f64;
        for &r in &[r_lo, r_hi] {
            max_value = max_value.max(r.powf(c) * f.eval(r, theta).norm());
        }
    }
    Ok(BoundaryDecayReport {
        r_lo,
        r_hi,
        max_value,
    })
}

/// Deviation data for the boundary-spectrum relation
/// `|M[f(.,0)](c+it)| = e^{-α|t|} |M[f(., εα)](c+it)|`, `ε = sign t`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDecayReport {
    pub alpha: f64,
    /// Max absolute deviation after normalizing `max |M[f(.,0)]|` to 1.
    pub max_deviation: f64,
    /// The normalization that was divided out.
    pub scale: f64,
}

pub fn spectral_decay_relation(
    f: &PolarFunction,
    a: f64,
    c: f64,
    p: f64,
    alpha: f64,
    t_grid: &UniformGrid,
    cfg: &QuadratureConfig,
) -> Result<SpectralDecayReport> {
    check_p(p)?;
    if !(0.0 < alpha && alpha < a) {
        return Err(Error::Config(format!("need alpha in ]0, a[, got {alpha}")));
    }
    let sense = if p == 1.0 { Sense::X1 } else { Sense::X2 };
    let sched = LimSchedule::default();
    let base = f.restriction(0.0, c);
    let upper = f.restriction(alpha, c);
    let lower = f.restriction(-alpha, c);

    let mut rows = Vec::with_capacity(t_grid.len);
    let mut scale = 0.0f64;
    for t in t_grid.nodes() {
        let m0 = mellin_forward_at(&base, c, t, cfg, sense, &sched)?.norm();
        // epsilon = sign(t), fixed to +1 at t = 0
        let shifted = if t >= 0.0 { &upper } else { &lower };
        let ms = mellin_forward_at(shifted, c, t, cfg, sense, &sched)?.norm();
        scale = scale.max(m0);
        rows.push((m0, (-alpha * t.abs()).exp() * ms));
    }
    if scale == 0.0 {
        return Ok(SpectralDecayReport {
            alpha,
            max_deviation: 0.0,
            scale,
        });
    }
    let max_deviation = rows
        .iter()
        .map(|(m0, rhs)| (m0 - rhs).abs())
        .fold(0.0, f64::max)
        / scale;
    Ok(SpectralDecayReport {
        alpha,
        max_deviation,
        scale,
    })
}
