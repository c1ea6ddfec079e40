//! Signals on the positive real axis, their weighted norms, Mellin
//! translation, and the pointwise Mellin differential operator.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{LogGrid, QuadratureConfig};
use crate::quad;
use crate::transform::MellinSpectrum;

/// A complex-valued function on the positive axis together with its weight
/// index `c` and, when known, its closed-form spectrum.
///
/// Evaluators must be pure: operations probe them at arbitrary positive
/// abscissas and may do so concurrently.
#[derive(Clone)]
pub struct PositiveAxisSignal {
    label: String,
    c: f64,
    eval: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    /// Weighted log-chart form `u -> e^{c u} f(e^u)`, when a closed form is
    /// known. Wide integration windows (`|u|` in the thousands) are outside
    /// the range where `x = e^u` is representable, so the plain evaluator
    /// cannot serve them.
    log_weighted: Option<Arc<dyn Fn(f64) -> Complex64 + Send + Sync>>,
    known_spectrum: Option<Arc<MellinSpectrum>>,
}

impl fmt::Debug for PositiveAxisSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PositiveAxisSignal")
            .field("label", &self.label)
            .field("c", &self.c)
            .field("known_spectrum", &self.known_spectrum.is_some())
            .finish()
    }
}

impl PositiveAxisSignal {
    pub fn new<F>(label: impl Into<String>, c: f64, eval: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            c,
            eval: Arc::new(eval),
            log_weighted: None,
            known_spectrum: None,
        }
    }

    /// Attach a closed form for `u -> e^{c u} f(e^u)`. Integrations use it
    /// directly, which keeps wide log windows exact where `e^u` itself
    /// would leave the f64 range.
    pub fn with_log_weighted<G>(mut self, g: G) -> Self
    where
        G: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        self.log_weighted = Some(Arc::new(g));
        self
    }

    /// Attach a closed-form spectrum. Its weight index must equal the
    /// signal's.
    pub fn with_spectrum(mut self, spectrum: MellinSpectrum) -> Self {
        assert!(
            (spectrum.c() - self.c).abs() < 1e-12,
            "spectrum weight {} does not match signal weight {}",
            spectrum.c(),
            self.c
        );
        self.known_spectrum = Some(Arc::new(spectrum));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn known_spectrum(&self) -> Option<&MellinSpectrum> {
        self.known_spectrum.as_deref()
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    /// Weighted value `e^{c u} f(e^u)` in the log chart.
    ///
    /// Falls back to the composition through `x = e^u` when no closed form
    /// was attached; outside the representable range of `x` the weighted
    /// integrands this crate works with all vanish, and the fallback
    /// returns zero rather than an overflow artifact.
    #[inline]
    pub fn eval_log_weighted(&self, u: f64) -> Complex64 {
        if let Some(g) = &self.log_weighted {
            return g(u);
        }
        let x = u.exp();
        if x == 0.0 || x.is_infinite() {
            return Complex64::new(0.0, 0.0);
        }
        let w = (self.c * u).exp() * (self.eval)(x);
        if w.re.is_finite() && w.im.is_finite() {
            w
        } else if u.abs() > 150.0 {
            // x^{-c}-type factors overflow before x does; far in the tails
            // this is pure representation noise.
            Complex64::new(0.0, 0.0)
        } else {
            w
        }
    }

    /// Weighted value at a foreign weight index: `e^{c u} f(e^u)` for a
    /// caller-chosen `c`, composed from the stored weighted form.
    #[inline]
    pub fn eval_log_weighted_at(&self, c: f64, u: f64) -> Complex64 {
        let base = self.eval_log_weighted(u);
        if c == self.c {
            base
        } else {
            ((c - self.c) * u).exp() * base
        }
    }

    /// Scaled copy `λ f`; used by homogeneity checks.
    pub fn scaled(&self, lambda: Complex64) -> Self {
        let inner = Arc::clone(&self.eval);
        let log_weighted = self.log_weighted.as_ref().map(|g| {
            let g = Arc::clone(g);
            Arc::new(move |u: f64| lambda * g(u)) as Arc<dyn Fn(f64) -> Complex64 + Send + Sync>
        });
        Self {
            label: format!("{}*scaled", self.label),
            c: self.c,
            eval: Arc::new(move |x| lambda * inner(x)),
            log_weighted,
            known_spectrum: None,
        }
    }
}

/// The `X^p_c` norm of `f`, computed on the log axis.
///
/// For finite `p` this is `(∫ |x^c f(x)|^p dx/x)^{1/p}`, evaluated as an
/// adaptive trapezoid sum in `u = log x` starting from `grid`. For
/// `p = infinity` it is the supremum of `x^c |f(x)|` over the grid nodes
/// (the grid is the caller's responsibility and should be recorded in any
/// report that quotes the value).
pub fn xnorm(
    f: &PositiveAxisSignal,
    c: f64,
    p: f64,
    grid: &LogGrid,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent { p });
    }
    if p.is_infinite() {
        let sup = grid
            .log_nodes()
            .map(|u| f.eval_log_weighted_at(c, u).norm())
            .fold(0.0f64, f64::max);
        return Ok(sup);
    }
    let integrand =
        move |u: f64| Complex64::new(f.eval_log_weighted_at(c, u).norm().powf(p), 0.0);
    let integral = quad::integrate_line(&integrand, grid, cfg, &format!("xnorm({})", f.label()))?;
    Ok(integral.re.max(0.0).powf(1.0 / p))
}

/// Mellin translation `(τ_h^c f)(x) = h^c f(h x)`.
///
/// In the log chart the translation is a pure shift of the weighted form:
/// `e^{c u} (τ_h^c f)(e^u) = e^{c (u + log h)} f(e^{u + log h})`.
pub fn mellin_translate(f: &PositiveAxisSignal, h: f64, c: f64) -> Result<PositiveAxisSignal> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidScale { h });
    }
    let weight = h.powf(c);
    let inner = f.clone();
    let shifted = f.clone();
    let log_h = h.ln();
    Ok(PositiveAxisSignal::new(
        format!("tau[{h}]{}", f.label()),
        c,
        move |x| weight * inner.eval(h * x),
    )
    .with_log_weighted(move |u| shifted.eval_log_weighted_at(c, u + log_h)))
}

/// Default finite-difference step at abscissa `r`.
pub fn default_fd_step(r: f64) -> f64 {
    (1e-4 * r).max(1e-8)
}

// O(h^4) central stencils. The wide stencils keep the rounding error of the
// second and third derivatives below the tolerances the property checks ask
// for; three-point stencils cannot reach 1e-8 relative accuracy in f64.
fn d1<F: Fn(f64) -> Complex64>(f: &F, x: f64, h: f64) -> Complex64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

fn d2<F: Fn(f64) -> Complex64>(f: &F, x: f64, h: f64) -> Complex64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

fn d3<F: Fn(f64) -> Complex64>(f: &F, x: f64, h: f64) -> Complex64 {
    (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h)
        - 8.0 * f(x - 2.0 * h)
        + f(x - 3.0 * h))
        / (8.0 * h * h * h)
}

/// Pointwise Mellin derivative `Θ_c^order f(r)`.
///
/// Orders 1..=3 use the explicit expansions
/// `Θ_c f = x f' + c f`,
/// `Θ_c^2 f = x^2 f'' + (2c+1) x f' + c^2 f`,
/// `Θ_c^3 f = x^3 f''' + (3c+3) x^2 f'' + (3c^2+3c+1) x f' + c^3 f`,
/// with central finite differences for the ordinary derivatives. Higher
/// orders recurse through `Θ_c^r = Θ_c(Θ_c^{r-1})`. Order 0 is the identity.
pub fn mellin_derivative(
    f: &PositiveAxisSignal,
    c: f64,
    order: u32,
    r: f64,
    fd_step: f64,
) -> Result<Complex64> {
    if r <= 0.0 {
        return Err(Error::DomainError { x: r });
    }
    let eval = |x: f64| f.eval(x);
    theta_rec(&eval, c, order, r, fd_step)
}

fn theta_rec<F>(f: &F, c: f64, order: u32, r: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let span = match order {
        0 => 0.0,
        1 | 2 => 2.0,
        _ => 3.0,
    };
    if span > 0.0 && span * h >= r {
        return Err(Error::StepTooLarge { step: h, r, span });
    }
    match order {
        0 => Ok(f(r)),
        1 => Ok(r * d1(f, r, h) + c * f(r)),
        2 => {
            let (c1, c2) = (2.0 * c + 1.0, c * c);
            Ok(r * r * d2(f, r, h) + c1 * r * d1(f, r, h) + c2 * f(r))
        }
        3 => {
            let (c1, c2, c3) = (3.0 * c + 3.0, 3.0 * c * c + 3.0 * c + 1.0, c * c * c);
            Ok(r * r * r * d3(f, r, h)
                + c1 * r * r * d2(f, r, h)
                + c2 * r * d1(f, r, h)
                + c3 * f(r))
        }
        _ => {
            // Θ_c applied to the numerically evaluated lower order.
            let lower =
                |x: f64| theta_rec(f, c, order - 1, x, h).unwrap_or(Complex64::new(f64::NAN, 0.0));
            if 2.0 * h >= r {
                return Err(Error::StepTooLarge { step: h, r, span: 2.0 });
            }
            let value = r * d1(&lower, r, h) + c * lower(r);
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::StepTooLarge { step: h, r, span: 2.0 });
            }
            Ok(value)
        }
    }
}
