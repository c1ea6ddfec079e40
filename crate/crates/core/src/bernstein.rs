//! Bandlimited machinery: extension of a compactly supported spectrum to
//! the half-plane, exponential growth certificates, norm-growth and edge
//! decay checks, bandwidth estimation, and the round-trip verification
//! tying them together.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{LimSchedule, LogGrid, QuadratureConfig, UniformGrid};
use crate::polar::{cr_residual, PolarFunction};
use crate::quad;
use crate::signal::{xnorm, PositiveAxisSignal};
use crate::transform::{mellin_forward_with, MellinSpectrum, Sense};

/// Probe lattice in `(r, theta)` for growth certificates.
#[derive(Debug, Clone)]
pub struct ProbeLattice {
    pub rs: Vec<f64>,
    pub thetas: Vec<f64>,
}

impl Default for ProbeLattice {
    /// `r = e^{k/2}` for `k = -12..12`, `theta` in `{-3,...,3}`; log-symmetric
    /// coverage matching the `r^{-c} e^{T|theta|}` shape of the bound.
    fn default() -> Self {
        Self {
            rs: (-12..=12).map(|k| (k as f64 / 2.0).exp()).collect(),
            thetas: vec![-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0],
        }
    }
}

impl ProbeLattice {
    pub fn describe(&self) -> String {
        format!(
            "r in [{:.4}, {:.4}] ({} log-spaced), theta in [{}, {}] ({} values)",
            self.rs.first().copied().unwrap_or(f64::NAN),
            self.rs.last().copied().unwrap_or(f64::NAN),
            self.rs.len(),
            self.thetas.first().copied().unwrap_or(f64::NAN),
            self.thetas.last().copied().unwrap_or(f64::NAN),
            self.thetas.len(),
        )
    }
}

/// Exponential-type growth certificate: `|f(r,θ)| <= C_f r^{-c} e^{T|θ|}`
/// witnessed on a probe lattice.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthCertificate {
    pub t_type: f64,
    pub c: f64,
    /// Max of `|f(r,θ)| r^c e^{-T|θ|}` over the probes.
    pub c_f: f64,
    /// `c_f - claimed` when a constant was claimed, else 0; the certificate
    /// holds iff this is nonpositive.
    pub probe_max_violation: f64,
    pub probes: String,
}

fn gl_panels_for_band(t_max: f64, nodes_per_unit: f64) -> usize {
    let mut panels = ((2.0 * t_max * nodes_per_unit / 5.0).ceil() as usize).max(2);
    if panels % 2 == 1 {
        panels += 1; // keep t = 0 on a panel boundary (kinks live there)
    }
    panels
}

/// Polar extension of a compactly supported spectrum:
/// `f(r,θ) = (1/2π) ∫_{-T}^{T} S(c+it) (r e^{iθ})^{-c-it} dt`,
/// evaluated by fixed composite Gauss-Legendre quadrature (64 nodes per unit
/// band). The result is defined on the whole half-plane.
pub fn extend(spectrum: &MellinSpectrum, c: f64) -> Result<PolarFunction> {
    let t_max = spectrum.support_t().ok_or(Error::UnboundedSpectrum)?;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Config(format!("band edge must be positive, got {t_max}")));
    }
    let panels = gl_panels_for_band(t_max, 64.0);
    let spec = spectrum.clone();
    let label = format!("extend[{}]", spectrum.label());
    Ok(PolarFunction::new(label, f64::INFINITY, Some(c), move |r, theta| {
        let w = Complex64::new(r.ln(), theta);
        let integrand =
            |t: f64| spec.eval(t) * (-(Complex64::new(c, t)) * w).exp();
        quad::gauss_legendre(&integrand, -t_max, t_max, panels) / (2.0 * PI)
    }))
}

/// `(1/2π) ∫_{-T}^{T} |S(c+it)| dt`, the growth constant the extension
/// integral yields.
pub fn extension_growth_constant(spectrum: &MellinSpectrum) -> Result<f64> {
    let t_max = spectrum.support_t().ok_or(Error::UnboundedSpectrum)?;
    let panels = gl_panels_for_band(t_max, 64.0);
    let total = quad::gauss_legendre(
        &|t: f64| Complex64::new(spectrum.eval(t).norm(), 0.0),
        -t_max,
        t_max,
        panels,
    );
    Ok(total.re / (2.0 * PI))
}

/// Certify exponential growth of type `T` on the lattice.
pub fn growth_certify(
    f: &PolarFunction,
    c: f64,
    t_type: f64,
    lattice: &ProbeLattice,
    claimed: Option<f64>,
) -> GrowthCertificate {
    let mut c_f = 0.0f64;
    for &r in &lattice.rs {
        for &theta in &lattice.thetas {
            let value = f.eval(r, theta).norm() * r.powf(c) * (-t_type * theta.abs()).exp();
            c_f = c_f.max(value);
        }
    }
    GrowthCertificate {
        t_type,
        c,
        c_f,
        probe_max_violation: claimed.map(|cl| c_f - cl).unwrap_or(0.0),
        probes: lattice.describe(),
    }
}

/// Per-theta norm growth row: the ratio is against `e^{T|θ|}` times the
/// base norm and stays at or below 1 for Bernstein members.
#[derive(Debug, Clone, Serialize)]
pub struct NormGrowthRow {
    pub theta: f64,
    pub norm: f64,
    pub ratio: f64,
}

/// Weighted magnitude of the restriction at the extreme grid radii.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeDecayRow {
    pub theta: f64,
    pub weighted_lo: f64,
    pub weighted_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormGrowthReport {
    pub base_norm: f64,
    pub rows: Vec<NormGrowthRow>,
    pub edges: Vec<EdgeDecayRow>,
    pub grid: LogGrid,
}

/// Norm growth `‖f(.,θ)‖ <= e^{T|θ|} ‖f(.,0)‖` and edge decay of the
/// weighted restriction, over a set of angles.
pub fn theorem3_check(
    f: &PolarFunction,
    c: f64,
    p: f64,
    t_type: f64,
    thetas: &[f64],
    grid: &LogGrid,
    cfg: &QuadratureConfig,
) -> Result<NormGrowthReport> {
    let base_norm = xnorm(&f.restriction(0.0, c), c, p, grid, cfg)?;
    let r_lo = grid.node(0);
    let r_hi = grid.node(grid.len() - 1);
    let mut rows = Vec::with_capacity(thetas.len());
    let mut edges = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let norm = xnorm(&f.restriction(theta, c), c, p, grid, cfg)?;
        rows.push(NormGrowthRow {
            theta,
            norm,
            ratio: norm / ((t_type * theta.abs()).exp() * base_norm),
        });
        edges.push(EdgeDecayRow {
            theta,
            weighted_lo: r_lo.powf(c) * f.eval(r_lo, theta).norm(),
            weighted_hi: r_hi.powf(c) * f.eval(r_hi, theta).norm(),
        });
    }
    Ok(NormGrowthReport {
        base_norm,
        rows,
        edges,
        grid: *grid,
    })
}

/// Smallest grid radius beyond which the spectrum stays below `eta` times
/// its peak. Needs a sampled spectrum; errors with `NoDecay` when the grid
/// never resolves the drop.
pub fn bandwidth_estimate(spectrum: &MellinSpectrum, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Config(format!("eta must lie in ]0,1[, got {eta}")));
    }
    let grid = spectrum.grid().ok_or_else(|| {
        Error::Config("bandwidth estimation needs a spectrum sampled on a t-grid".into())
    })?;
    let mags: Vec<(f64, f64)> = grid.nodes().map(|t| (t, spectrum.eval(t).norm())).collect();
    let peak = mags.iter().map(|&(_, m)| m).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let threshold = eta * peak;
    let t_hat = mags
        .iter()
        .filter(|&&(_, m)| m >= threshold)
        .map(|&(t, _)| t.abs())
        .fold(0.0, f64::max);
    let edge = grid.start.abs().max(grid.end().abs());
    if t_hat >= edge - 0.5 * grid.step {
        return Err(Error::NoDecay { eta });
    }
    Ok(t_hat)
}

/// Outcome of the reverse (bandwidth) direction of the round trip.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BandwidthCheck {
    /// Estimated band within slack of the claimed type.
    Validated { t_hat: f64 },
    /// Spectrum decays, but beyond the claimed type.
    Exceeded { t_hat: f64 },
    /// No sub-threshold region inside the surveyed grid.
    NoDecay,
}

/// Round-trip verification report; see `pw_roundtrip`.
#[derive(Debug, Clone, Serialize)]
pub struct PwReport {
    /// `sup x^c |f(x,0) - φ(x)| / sup x^c |φ(x)|` over `[0.1, 10]`.
    pub restriction_sup_err: f64,
    pub restriction_ok: bool,
    pub cr_max_residual: f64,
    pub cr_ok: bool,
    pub certificate: GrowthCertificate,
    pub cf_expected: f64,
    pub cf_ok: bool,
    pub bandwidth: BandwidthCheck,
    pub bandwidth_ok: bool,
    pub passed: bool,
}

/// Tolerances of the round-trip checks.
pub const PW_RESTRICTION_TOL: f64 = 1e-5;
pub const PW_CR_TOL: f64 = 1e-7;
pub const PW_CF_TOL: f64 = 1e-6;
pub const PW_BANDWIDTH_SLACK: f64 = 0.1;
const PW_BANDWIDTH_ETA: f64 = 1e-4;

/// Forward-and-back verification that a signal is bandlimited of type `T`:
/// extend its spectrum off the axis, check that the restriction reproduces
/// the signal, that the extension is polar-analytic with the predicted
/// growth constant, and that the numerically recomputed spectrum has
/// bandwidth within slack of `T`.
///
/// The extension uses the declared closed-form spectrum when the corpus
/// carries one (the extension integral is only as good as its integrand:
/// interpolating an oscillatory numerical spectrum cannot reach the
/// restriction tolerance); the reverse direction always recomputes the
/// spectrum from the signal with the supplied truncation schedule.
pub fn pw_roundtrip(
    phi: &PositiveAxisSignal,
    c: f64,
    t_type: f64,
    cfg: &QuadratureConfig,
    reverse_sched: &LimSchedule,
    reverse_step: f64,
) -> Result<PwReport> {
    let spectrum = match phi.known_spectrum() {
        Some(s) => s.clone(),
        None => {
            let grid = UniformGrid::symmetric(t_type + 0.5, reverse_step)?;
            mellin_forward_with(phi, c, &grid, cfg, Sense::X2, reverse_sched)?
                .with_support(t_type)
        }
    };
    let ext = extend(&spectrum, c)?;

    // (a) the restriction reproduces the signal on [0.1, 10]
    let probes = LogGrid::new((0.1f64).ln(), (10.0f64).ln(), (10.0f64 / 0.1).ln() / 80.0)?;
    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for x in probes.nodes() {
        let w = x.powf(c);
        err = err.max(w * (ext.eval(x, 0.0) - phi.eval(x)).norm());
        scale = scale.max(w * phi.eval(x).norm());
    }
    let restriction_sup_err = if scale > 0.0 { err / scale } else { err };

    // (b) polar analyticity of the extension
    let cr_probes: Vec<(f64, f64)> = [0.8, 1.0, 1.25]
        .iter()
        .flat_map(|&r| [-0.3, 0.0, 0.3].iter().map(move |&t| (r, t)))
        .collect();
    let cr_max_residual = cr_residual(&ext, &cr_probes, 1e-5)?;

    // (c) growth certificate against the extension-integral constant
    let cf_expected = extension_growth_constant(&spectrum)?;
    let certificate = growth_certify(&ext, c, t_type, &ProbeLattice::default(), Some(cf_expected));

    // reverse: recompute the spectrum from the signal and estimate its band
    let grid = UniformGrid::symmetric(t_type + 0.5, reverse_step)?;
    let recomputed = mellin_forward_with(phi, c, &grid, cfg, Sense::X2, reverse_sched)?;
    let bandwidth = match bandwidth_estimate(&recomputed, PW_BANDWIDTH_ETA) {
        Ok(t_hat) if t_hat <= t_type + PW_BANDWIDTH_SLACK => BandwidthCheck::Validated { t_hat },
        Ok(t_hat) => BandwidthCheck::Exceeded { t_hat },
        Err(Error::NoDecay { .. }) => BandwidthCheck::NoDecay,
        Err(e) => return Err(e),
    };

    let restriction_ok = restriction_sup_err <= PW_RESTRICTION_TOL;
    let cr_ok = cr_max_residual <= PW_CR_TOL;
    let cf_ok = (certificate.c_f - cf_expected).abs() <= PW_CF_TOL;
    let bandwidth_ok = matches!(bandwidth, BandwidthCheck::Validated { .. });
    Ok(PwReport {
        restriction_sup_err,
        restriction_ok,
        cr_max_residual,
        cr_ok,
        certificate,
        cf_expected,
        cf_ok,
        bandwidth,
        bandwidth_ok,
        passed: restriction_ok && cr_ok && cf_ok && bandwidth_ok,
    })
}
