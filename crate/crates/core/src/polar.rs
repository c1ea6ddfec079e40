//! Calculus for functions of `(r, theta)` on the half-plane `r > 0`,
//! treated as if polar coordinates were Cartesian: difference-quotient
//! derivative, Cauchy-Riemann residuals in polar form, line integrals along
//! regular curves, and the substitution linking the half-plane to an
//! ordinary strip in the complex plane.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// A complex-valued function on the half-plane, restricted to the strip
/// `|theta| < strip_a` (`strip_a = infinity` means all of it).
#[derive(Clone)]
pub struct PolarFunction {
    label: String,
    strip_a: f64,
    c: Option<f64>,
    eval: Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
    /// Weighted log-chart form `(u, theta) -> e^{c u} f(e^u, theta)` for the
    /// stored weight `c`; serves integration windows where `e^u` leaves the
    /// f64 range.
    log_weighted: Option<Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>>,
}

impl fmt::Debug for PolarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolarFunction")
            .field("label", &self.label)
            .field("strip_a", &self.strip_a)
            .field("c", &self.c)
            .finish()
    }
}

impl PolarFunction {
    pub fn new<F>(label: impl Into<String>, strip_a: f64, c: Option<f64>, eval: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        assert!(strip_a > 0.0, "strip half-width must be positive");
        Self {
            label: label.into(),
            strip_a,
            c,
            eval: Arc::new(eval),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn strip_a(&self) -> f64 {
        self.strip_a
    }

    pub fn c(&self) -> Option<f64> {
        self.c
    }

    #[inline]
    pub fn eval(&self, r: f64, theta: f64) -> Complex64 {
        (self.eval)(r, theta)
    }

    /// Restriction `theta = const` as a positive-axis signal.
    pub fn restriction(&self, theta: f64, c: f64) -> crate::signal::PositiveAxisSignal {
        let inner = self.clone();
        crate::signal::PositiveAxisSignal::new(
            format!("{}(.,{theta})", self.label),
            c,
            move |x| inner.eval(x, theta),
        )
    }

    pub fn scaled(&self, lambda: Complex64) -> Self {
        let inner = Arc::clone(&self.eval);
        Self {
            label: format!("{}*scaled", self.label),
            strip_a: self.strip_a,
            c: self.c,
            eval: Arc::new(move |r, t| lambda * inner(r, t)),
        }
    }

    fn check_interior(&self, r: f64, theta: f64, margin: f64) -> Result<()> {
        if r <= margin.max(0.0) {
            return Err(Error::DomainError { x: r });
        }
        if theta.abs() + margin >= self.strip_a {
            return Err(Error::OutsideStrip {
                theta,
                margin,
                strip_a: self.strip_a,
            });
        }
        Ok(())
    }
}

/// Result of the difference-quotient derivative at a point.
///
/// `value` is the radial form `e^{-i theta} ∂_r f`; `theta_form` is the
/// angular form `-i e^{-i theta} / r · ∂_theta f`. For a polar-analytic
/// function the two agree up to the stencil error, and `not_analytic` is set
/// when their discrepancy exceeds `10 step^2` times the local scale.
#[derive(Debug, Clone, Copy)]
pub struct PolarDerivative {
    pub value: Complex64,
    pub theta_form: Complex64,
    pub discrepancy: f64,
    pub threshold: f64,
    pub not_analytic: bool,
}

/// Central-difference realization of the polar derivative `D_pol f`.
///
/// The radial step is `step` relative (`step * r`, floored at 1e-9), the
/// angular step is `step` absolute.
pub fn d_pol(f: &PolarFunction, r: f64, theta: f64, step: f64) -> Result<PolarDerivative> {
    let h_r = (step * r).max(1e-9);
    let h_t = step;
    f.check_interior(r, theta, h_r.max(h_t))?;

    let phase = Complex64::new(0.0, -theta).exp();
    let df_dr = (f.eval(r + h_r, theta) - f.eval(r - h_r, theta)) / (2.0 * h_r);
    let df_dt = (f.eval(r, theta + h_t) - f.eval(r, theta - h_t)) / (2.0 * h_t);

    let r_form = phase * df_dr;
    let theta_form = -Complex64::i() * phase / r * df_dt;

    let scale = f.eval(r, theta).norm() / r + r_form.norm();
    let threshold = 10.0 * step * step * scale.max(f64::MIN_POSITIVE);
    let discrepancy = (r_form - theta_form).norm();

    Ok(PolarDerivative {
        value: r_form,
        theta_form,
        discrepancy,
        threshold,
        not_analytic: discrepancy > threshold,
    })
}

/// Max over the probes of the polar Cauchy-Riemann residual
/// `|∂_theta u + r ∂_r v| + |∂_theta v - r ∂_r u|`, by central differences.
pub fn cr_residual(f: &PolarFunction, probes: &[(f64, f64)], step: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(r, theta) in probes {
        let h_r = (step * r).max(1e-9);
        let h_t = step;
        f.check_interior(r, theta, h_r.max(h_t))?;
        let df_dr = (f.eval(r + h_r, theta) - f.eval(r - h_r, theta)) / (2.0 * h_r);
        let df_dt = (f.eval(r, theta + h_t) - f.eval(r, theta - h_t)) / (2.0 * h_t);
        let residual =
            (df_dt.re + r * df_dr.im).abs() + (df_dt.im - r * df_dr.re).abs();
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// Polar Mellin derivative `Θ_c f = r e^{i theta} (D_pol f) + c f`.
#[derive(Debug, Clone, Copy)]
pub struct PolarMellinDerivative {
    pub value: Complex64,
    pub dpol: PolarDerivative,
}

pub fn polar_mellin_derivative(
    f: &PolarFunction,
    c: f64,
    r: f64,
    theta: f64,
    step: f64,
) -> Result<PolarMellinDerivative> {
    let dpol = d_pol(f, r, theta, step)?;
    let z = Complex64::from_polar(r, theta);
    Ok(PolarMellinDerivative {
        value: z * dpol.value + c * f.eval(r, theta),
        dpol,
    })
}

/// One piece of a regular curve. All pieces are continuously differentiable
/// parametrizations over `s` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Segment {
    /// Constant angle, radius moving linearly.
    Hline { theta: f64, r_start: f64, r_end: f64 },
    /// Constant radius, angle moving linearly.
    Vline { r: f64, theta_start: f64, theta_end: f64 },
    /// Linear interpolation in `(log r, theta)`.
    Param { from: (f64, f64), to: (f64, f64) },
}

impl Segment {
    pub fn start(&self) -> (f64, f64) {
        match *self {
            Segment::Hline { theta, r_start, .. } => (r_start, theta),
            Segment::Vline { r, theta_start, .. } => (r, theta_start),
            Segment::Param { from, .. } => from,
        }
    }

    pub fn end(&self) -> (f64, f64) {
        match *self {
            Segment::Hline { theta, r_end, .. } => (r_end, theta),
            Segment::Vline { r, theta_end, .. } => (r, theta_end),
            Segment::Param { to, .. } => to,
        }
    }

    fn min_radius(&self) -> f64 {
        match *self {
            Segment::Hline { r_start, r_end, .. } => r_start.min(r_end),
            Segment::Vline { r, .. } => r,
            Segment::Param { from, to } => from.0.min(to.0),
        }
    }

    /// Position and velocity at parameter `s` in `[0, 1]`.
    fn at(&self, s: f64) -> (f64, f64, f64, f64) {
        match *self {
            Segment::Hline {
                theta,
                r_start,
                r_end,
            } => (r_start + s * (r_end - r_start), theta, r_end - r_start, 0.0),
            Segment::Vline {
                r,
                theta_start,
                theta_end,
            } => (
                r,
                theta_start + s * (theta_end - theta_start),
                0.0,
                theta_end - theta_start,
            ),
            Segment::Param { from, to } => {
                let (u0, t0) = (from.0.ln(), from.1);
                let (u1, t1) = (to.0.ln(), to.1);
                let u = u0 + s * (u1 - u0);
                let r = u.exp();
                (r, t0 + s * (t1 - t0), r * (u1 - u0), t1 - t0)
            }
        }
    }
}

/// A regular curve: ordered C^1 pieces with matching endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub segments: Vec<Segment>,
    pub closed: bool,
}

const ENDPOINT_TOL: f64 = 1e-9;

impl Curve {
    pub fn new(segments: Vec<Segment>, closed: bool) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Config("curve has no segments".into()));
        }
        for seg in &segments {
            if seg.min_radius() <= 0.0 {
                return Err(Error::DomainError {
                    x: seg.min_radius(),
                });
            }
        }
        for pair in segments.windows(2) {
            let (r0, t0) = pair[0].end();
            let (r1, t1) = pair[1].start();
            if (r0 - r1).abs() > ENDPOINT_TOL || (t0 - t1).abs() > ENDPOINT_TOL {
                return Err(Error::Config(format!(
                    "segment endpoints do not match: ({r0}, {t0}) vs ({r1}, {t1})"
                )));
            }
        }
        if closed {
            let (r0, t0) = segments.first().unwrap().start();
            let (r1, t1) = segments.last().unwrap().end();
            if (r0 - r1).abs() > ENDPOINT_TOL || (t0 - t1).abs() > ENDPOINT_TOL {
                return Err(Error::Config(
                    "closed curve must end where it starts".into(),
                ));
            }
        }
        Ok(Self { segments, closed })
    }

    /// Boundary of the axis-aligned rectangle `[r_lo, r_hi] x [t_lo, t_hi]`,
    /// positively oriented. The only contour the verification suite needs.
    pub fn rectangle(r_lo: f64, r_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        Self::new(
            vec![
                Segment::Hline {
                    theta: t_lo,
                    r_start: r_lo,
                    r_end: r_hi,
                },
                Segment::Vline {
                    r: r_hi,
                    theta_start: t_lo,
                    theta_end: t_hi,
                },
                Segment::Hline {
                    theta: t_hi,
                    r_start: r_hi,
                    r_end: r_lo,
                },
                Segment::Vline {
                    r: r_lo,
                    theta_start: t_hi,
                    theta_end: t_lo,
                },
            ],
            true,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Curve = serde_json::from_str(text)?;
        Self::new(raw.segments, raw.closed)
    }

    /// Polyline length in the `(r, theta)` chart, for error normalization.
    pub fn chart_length(&self, n_panels: usize) -> f64 {
        let mut len = 0.0;
        for seg in &self.segments {
            let n = n_panels.max(1) * 8;
            for j in 0..n {
                let (_, _, dr, dtheta) = seg.at((j as f64 + 0.5) / n as f64);
                let (r, _, _, _) = seg.at((j as f64 + 0.5) / n as f64);
                len += ((dr * dr) + (r * dtheta) * (r * dtheta)).sqrt() / n as f64;
            }
        }
        len
    }
}

/// Probe set loadable from JSON: `{"probes": [{"r": 1.0, "theta": 0.5}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeSet {
    pub probes: Vec<Probe>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Probe {
    pub r: f64,
    pub theta: f64,
}

impl ProbeSet {
    pub fn from_json(text: &str) -> Result<Self> {
        let set: ProbeSet = serde_json::from_str(text)?;
        for p in &set.probes {
            if p.r <= 0.0 {
                return Err(Error::DomainError { x: p.r });
            }
        }
        Ok(set)
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.probes.iter().map(|p| (p.r, p.theta)).collect()
    }
}

/// Line integral `∫_γ f(r, theta) e^{i theta} (dr + i r dtheta)` by
/// composite 5-point Gauss-Legendre, `n_panels` panels per segment.
pub fn line_integral(f: &PolarFunction, curve: &Curve, n_panels: usize) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for seg in &curve.segments {
        let integrand = |s: f64| {
            let (r, theta, dr, dtheta) = seg.at(s);
            f.eval(r, theta)
                * Complex64::new(0.0, theta).exp()
                * Complex64::new(dr, r * dtheta)
        };
        total += quad::gauss_legendre(&integrand, 0.0, 1.0, n_panels.max(1));
    }
    Ok(total)
}

/// The entire-function side of the strip substitution:
/// `g(x + iy) = e^{c (x+iy)} f(e^x, y)`.
pub fn to_strip(f: &PolarFunction, c: f64) -> impl Fn(Complex64) -> Complex64 {
    let inner = f.clone();
    move |z: Complex64| (c * z).exp() * inner.eval(z.re.exp(), z.im)
}

/// Inverse substitution: `f(r, theta) = r^{-c} e^{-i c theta} g(log r + i theta)`.
pub fn from_strip<G>(g: G, c: f64, strip_a: f64, label: impl Into<String>) -> PolarFunction
where
    G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
{
    PolarFunction::new(label, strip_a, Some(c), move |r, theta| {
        let w = Complex64::new(r.ln(), theta);
        r.powf(-c) * Complex64::new(0.0, -c * theta).exp() * g(w)
    })
}
