//! Forward and inverse Mellin transforms on the line `s = c + it`.
//!
//! The `X1` sense is the absolutely convergent integral, handled by the
//! adaptive trapezoid driver. The `X2` sense realizes the `l.i.m.` limit as
//! symmetric truncations over an exponential radius schedule averaged over a
//! trailing Cesaro window; bandlimited spectra keep oscillating at any finite
//! radius and the averaging is what tames them.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{LimSchedule, LogGrid, QuadratureConfig, UniformGrid};
use crate::quad::{self, KahanSum};
use crate::signal::{xnorm, PositiveAxisSignal};

/// Which transform sense a spectrum was computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    X1,
    X2,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::X1 => write!(f, "X1"),
            Sense::X2 => write!(f, "X2"),
        }
    }
}

/// Diagnostic attached to a spectrum whose truncation sequence kept
/// oscillating through the whole radius schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationWarning {
    /// Largest spread of the averaged window across all grid points.
    pub max_spread: f64,
    /// Reporting threshold that was exceeded.
    pub threshold: f64,
    /// Number of grid points whose spread exceeded the threshold.
    pub affected: usize,
}

enum SpectrumData {
    Closed(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
    Grid {
        grid: UniformGrid,
        values: Vec<Complex64>,
    },
}

impl Clone for SpectrumData {
    fn clone(&self) -> Self {
        match self {
            SpectrumData::Closed(f) => SpectrumData::Closed(Arc::clone(f)),
            SpectrumData::Grid { grid, values } => SpectrumData::Grid {
                grid: *grid,
                values: values.clone(),
            },
        }
    }
}

/// Values of `t -> M_c[f](c + it)`, either as a closed form or as samples on
/// a uniform `t`-grid with linear interpolation in between.
#[derive(Clone)]
pub struct MellinSpectrum {
    label: String,
    c: f64,
    data: SpectrumData,
    support_t: Option<f64>,
    continuous: bool,
    sense: Option<Sense>,
    warning: Option<OscillationWarning>,
}

impl fmt::Debug for MellinSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MellinSpectrum")
            .field("label", &self.label)
            .field("c", &self.c)
            .field("support_t", &self.support_t)
            .field("continuous", &self.continuous)
            .field("sense", &self.sense)
            .field("warning", &self.warning)
            .field(
                "data",
                &match &self.data {
                    SpectrumData::Closed(_) => "closed-form".to_string(),
                    SpectrumData::Grid { grid, .. } => format!("grid[{}]", grid.len),
                },
            )
            .finish()
    }
}

impl MellinSpectrum {
    /// Closed-form spectrum. `support_t = Some(T)` declares the values zero
    /// for `|t| > T`; the evaluator is clamped accordingly.
    pub fn closed<F>(
        label: impl Into<String>,
        c: f64,
        support_t: Option<f64>,
        continuous: bool,
        eval: F,
    ) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            c,
            data: SpectrumData::Closed(Arc::new(eval)),
            support_t,
            continuous,
            sense: None,
            warning: None,
        }
    }

    /// Spectrum sampled on a uniform grid; evaluation between nodes is linear
    /// interpolation and zero outside the grid.
    pub fn from_grid(
        label: impl Into<String>,
        c: f64,
        grid: UniformGrid,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::InvalidGrid {
                reason: format!(
                    "spectrum has {} values on a grid of {} nodes",
                    values.len(),
                    grid.len
                ),
            });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidGrid {
                reason: "spectrum contains non-finite samples".into(),
            });
        }
        Ok(Self {
            label: label.into(),
            c,
            data: SpectrumData::Grid { grid, values },
            support_t: None,
            continuous: false,
            sense: None,
            warning: None,
        })
    }

    pub fn with_support(mut self, t: f64) -> Self {
        self.support_t = Some(t);
        self
    }

    pub fn with_continuity(mut self, continuous: bool) -> Self {
        self.continuous = continuous;
        self
    }

    fn with_sense(mut self, sense: Sense) -> Self {
        self.sense = Some(sense);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn support_t(&self) -> Option<f64> {
        self.support_t
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn sense(&self) -> Option<Sense> {
        self.sense
    }

    pub fn warning(&self) -> Option<OscillationWarning> {
        self.warning
    }

    /// Sampled `t`-grid, if this spectrum is grid-backed.
    pub fn grid(&self) -> Option<UniformGrid> {
        match &self.data {
            SpectrumData::Grid { grid, .. } => Some(*grid),
            SpectrumData::Closed(_) => None,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        if let Some(support) = self.support_t {
            if t.abs() > support {
                return Complex64::new(0.0, 0.0);
            }
        }
        match &self.data {
            SpectrumData::Closed(f) => f(t),
            SpectrumData::Grid { grid, values } => {
                let pos = (t - grid.start) / grid.step;
                if pos < 0.0 || pos > (grid.len - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let j = (pos.floor() as usize).min(grid.len - 2);
                let frac = pos - j as f64;
                values[j] * (1.0 - frac) + values[j + 1] * frac
            }
        }
    }

    /// Snapshot of the spectrum on a uniform grid (used for serialization of
    /// closed-form spectra).
    pub fn sampled(&self, grid: UniformGrid) -> Result<MellinSpectrum> {
        let values: Vec<Complex64> = grid.nodes().map(|t| self.eval(t)).collect();
        let mut out = MellinSpectrum::from_grid(self.label.clone(), self.c, grid, values)?;
        out.support_t = self.support_t;
        out.continuous = self.continuous;
        out.sense = self.sense;
        out.warning = self.warning;
        Ok(out)
    }

    /// CSV with columns `t,re,im`; comment header records the weight, sense
    /// and grid metadata.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let sense = self
            .sense
            .map(|s| s.to_string())
            .unwrap_or_else(|| "declared".into());
        let support = self
            .support_t
            .map(|t| t.to_string())
            .unwrap_or_else(|| "none".into());
        writeln!(w, "# mellin-spectrum label={}", self.label)?;
        writeln!(w, "# c={} sense={} support_T={}", self.c, sense, support)?;
        match &self.data {
            SpectrumData::Grid { grid, .. } => {
                writeln!(
                    w,
                    "# grid start={} step={} len={}",
                    grid.start, grid.step, grid.len
                )?;
            }
            SpectrumData::Closed(_) => writeln!(w, "# grid closed-form")?,
        }
        if let Some(warn) = &self.warning {
            writeln!(
                w,
                "# warning oscillation max_spread={:e} threshold={:e} affected={}",
                warn.max_spread, warn.threshold, warn.affected
            )?;
        }
        writeln!(w, "t,re,im")?;
        match &self.data {
            SpectrumData::Grid { grid, values } => {
                for (t, v) in grid.nodes().zip(values.iter()) {
                    writeln!(w, "{},{},{}", t, v.re, v.im)?;
                }
            }
            SpectrumData::Closed(_) => {
                return Err(Error::Config(
                    "closed-form spectrum must be sampled before CSV export".into(),
                ))
            }
        }
        Ok(())
    }
}

/// Single `X2`-sense value together with its window spread.
pub struct LimValue {
    pub value: Complex64,
    pub spread: f64,
    /// True when the shell sequence settled before the schedule ran out.
    pub settled: bool,
}

/// Symmetric-truncation transform value at one `t`.
///
/// `eval_log` is the integrand on the log axis without the oscillatory
/// factor: `u -> f(e^u) e^{c u}`.
pub fn lim_transform_at<F>(eval_log: &F, t: f64, cfg: &QuadratureConfig, sched: &LimSchedule) -> LimValue
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let delta = sched.rho_log_step;
    let m = ((delta * sched.samples_per_unit as f64).round() as usize).max(2);
    let g = |u: f64| eval_log(u) * Complex64::new(0.0, t * u).exp();

    let window = sched.cesaro_window.max(1);
    let mut snapshots: Vec<Complex64> = Vec::with_capacity(sched.max_steps);
    let mut running = KahanSum::new();
    let mut prev_shell = f64::INFINITY;
    let mut settle_at: Option<usize> = None;
    let mut settled = false;

    // First truncation covers [-delta, delta]; later shells append
    // [-U_k, -U_{k-1}] and [U_{k-1}, U_k] at the same step so the composite
    // trapezoid stays aligned. Once two consecutive shells drop below the
    // tolerance the sequence has settled; the schedule then runs just far
    // enough that the averaged window contains only settled truncations.
    for k in 1..=sched.max_steps.max(1) {
        let shell = if k == 1 {
            quad::trapezoid(&g, -delta, delta, 2 * m)
        } else {
            let hi = k as f64 * delta;
            let lo = hi - delta;
            quad::trapezoid(&g, lo, hi, m) + quad::trapezoid(&g, -hi, -lo, m)
        };
        running.add(shell);
        snapshots.push(running.value());
        let mag = shell.norm();
        if settle_at.is_none()
            && k >= sched.min_steps.max(2)
            && mag < cfg.abs_tol
            && prev_shell < cfg.abs_tol
        {
            settle_at = Some(k);
        }
        if settle_at.is_some_and(|k0| k >= k0 + window - 1) {
            settled = true;
            break;
        }
        prev_shell = mag;
    }

    let take = window.min(snapshots.len());
    let tail = &snapshots[snapshots.len() - take..];
    let mut avg = Complex64::new(0.0, 0.0);
    for v in tail {
        avg += *v;
    }
    avg /= take as f64;
    let spread = tail.iter().map(|v| (*v - avg).norm()).fold(0.0, f64::max);

    LimValue {
        value: avg,
        spread,
        settled,
    }
}

fn x1_transform_at(
    f: &PositiveAxisSignal,
    c: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let g = |u: f64| f.eval_log_weighted_at(c, u) * Complex64::new(0.0, t * u).exp();
    quad::integrate_line(
        &g,
        &LogGrid::default(),
        cfg,
        &format!("forward[{}](t={t})", f.label()),
    )
}

/// Forward Mellin transform of `f` sampled on `t_grid`.
pub fn mellin_forward(
    f: &PositiveAxisSignal,
    c: f64,
    t_grid: &UniformGrid,
    cfg: &QuadratureConfig,
    sense: Sense,
) -> Result<MellinSpectrum> {
    mellin_forward_with(f, c, t_grid, cfg, sense, &LimSchedule::default())
}

/// Forward transform with an explicit truncation schedule for the `X2`
/// sense; bandlimited signals need far longer schedules than decaying ones.
pub fn mellin_forward_with(
    f: &PositiveAxisSignal,
    c: f64,
    t_grid: &UniformGrid,
    cfg: &QuadratureConfig,
    sense: Sense,
    sched: &LimSchedule,
) -> Result<MellinSpectrum> {
    let mut values = Vec::with_capacity(t_grid.len);
    let mut max_spread = 0.0f64;
    let mut affected = 0usize;
    match sense {
        Sense::X1 => {
            for t in t_grid.nodes() {
                values.push(x1_transform_at(f, c, t, cfg)?);
            }
        }
        Sense::X2 => {
            let eval_log = |u: f64| f.eval_log_weighted_at(c, u);
            for t in t_grid.nodes() {
                let lim = lim_transform_at(&eval_log, t, cfg, sched);
                if !lim.settled && lim.spread > sched.warn_spread {
                    affected += 1;
                    max_spread = max_spread.max(lim.spread);
                }
                values.push(lim.value);
            }
        }
    }
    let mut spectrum =
        MellinSpectrum::from_grid(format!("M[{}]", f.label()), c, *t_grid, values)?
            .with_sense(sense);
    if affected > 0 {
        spectrum.warning = Some(OscillationWarning {
            max_spread,
            threshold: sched.warn_spread,
            affected,
        });
    }
    Ok(spectrum)
}

/// Forward transform at a single `t` (convenience for verification loops).
pub fn mellin_forward_at(
    f: &PositiveAxisSignal,
    c: f64,
    t: f64,
    cfg: &QuadratureConfig,
    sense: Sense,
    sched: &LimSchedule,
) -> Result<Complex64> {
    match sense {
        Sense::X1 => x1_transform_at(f, c, t, cfg),
        Sense::X2 => {
            let eval_log = |u: f64| f.eval_log_weighted_at(c, u);
            Ok(lim_transform_at(&eval_log, t, cfg, sched).value)
        }
    }
}

/// One inverse-transform value `(x^{-c}/2π) ∫ S(c+it) x^{-it} dt`.
pub fn mellin_inverse_at(spectrum: &MellinSpectrum, x: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if x <= 0.0 {
        return Err(Error::DomainError { x });
    }
    let c = spectrum.c;
    let u = x.ln();
    let integral = match (&spectrum.data, spectrum.support_t) {
        // Grid-backed data: integrate on the native nodes (interpolating
        // between them adds nothing), restricted to the declared support.
        (SpectrumData::Grid { grid, values }, support) => {
            let (lo, hi) = match support {
                Some(t) => (-t, t),
                None => (grid.start, grid.end()),
            };
            let mut acc = KahanSum::new();
            let mut prev: Option<(f64, Complex64)> = None;
            for (t, v) in grid.nodes().zip(values.iter()) {
                if t < lo - grid.step || t > hi + grid.step {
                    continue;
                }
                let t_cl = t.clamp(lo, hi);
                let val = *v * Complex64::new(0.0, -t_cl * u).exp();
                if let Some((t0, v0)) = prev {
                    acc.add((val + v0) * 0.5 * (t_cl - t0));
                }
                prev = Some((t_cl, val));
            }
            acc.value()
        }
        (SpectrumData::Closed(_), Some(t_max)) => {
            let g = |t: f64| spectrum.eval(t) * Complex64::new(0.0, -t * u).exp();
            let h0 = (2.0 * t_max / 256.0).min(0.05);
            quad::integrate_fixed(
                &g,
                -t_max,
                t_max,
                h0,
                cfg,
                &format!("inverse[{}](x={x})", spectrum.label),
            )?
        }
        (SpectrumData::Closed(_), None) => {
            let g = |t: f64| spectrum.eval(t) * Complex64::new(0.0, -t * u).exp();
            quad::integrate_line(
                &g,
                &LogGrid::default(),
                cfg,
                &format!("inverse[{}](x={x})", spectrum.label),
            )?
        }
    };
    Ok(integral * x.powf(-c) / (2.0 * std::f64::consts::PI))
}

/// Inverse Mellin transform as a signal on the positive axis.
///
/// The values at the nodes of `x_grid` are computed eagerly so convergence
/// problems surface here; the returned evaluator then computes the same
/// integral on demand at arbitrary abscissas.
pub fn mellin_inverse(
    spectrum: &MellinSpectrum,
    x_grid: &LogGrid,
    cfg: &QuadratureConfig,
) -> Result<PositiveAxisSignal> {
    for x in x_grid.nodes() {
        mellin_inverse_at(spectrum, x, cfg)?;
    }
    let label = format!("Minv[{}]", spectrum.label);
    let spec = spectrum.clone();
    let cfg = *cfg;
    Ok(PositiveAxisSignal::new(label, spectrum.c, move |x| {
        mellin_inverse_at(&spec, x, &cfg).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }))
}

/// Ratio `‖f‖_{X²_c} / ((2π)^{-1/2} ‖M²_c[f]‖_{L²})`; 1 for members of
/// `X²_c` by the Plancherel lemma.
pub fn plancherel_ratio(f: &PositiveAxisSignal, c: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let t_grid = UniformGrid::symmetric(16.0, 0.02)?;
    plancherel_ratio_with(f, c, cfg, &t_grid, &LimSchedule::default())
}

/// Plancherel ratio with explicit spectral grid and truncation schedule.
/// Returns `(ratio, signal_norm, spectral_norm)`.
pub fn plancherel_ratio_detailed(
    f: &PositiveAxisSignal,
    c: f64,
    cfg: &QuadratureConfig,
    t_grid: &UniformGrid,
    sched: &LimSchedule,
) -> Result<(f64, f64, f64)> {
    let left = xnorm(f, c, 2.0, &LogGrid::default(), cfg)?;
    let spectrum = mellin_forward_with(f, c, t_grid, cfg, Sense::X2, sched)?;
    let values = match &spectrum.data {
        SpectrumData::Grid { values, .. } => values,
        SpectrumData::Closed(_) => unreachable!("forward transforms are grid-backed"),
    };
    // L2 norm of the sampled spectrum by trapezoid on its own grid.
    let mut acc = KahanSum::new();
    for (j, v) in values.iter().enumerate() {
        let w = if j == 0 || j == values.len() - 1 { 0.5 } else { 1.0 };
        acc.add(Complex64::new(w * v.norm_sqr(), 0.0));
    }
    let l2 = (acc.value().re * t_grid.step).sqrt();
    let right = l2 / (2.0 * std::f64::consts::PI).sqrt();
    Ok((left / right, left, right))
}

pub fn plancherel_ratio_with(
    f: &PositiveAxisSignal,
    c: f64,
    cfg: &QuadratureConfig,
    t_grid: &UniformGrid,
    sched: &LimSchedule,
) -> Result<f64> {
    plancherel_ratio_detailed(f, c, cfg, t_grid, sched).map(|(ratio, _, _)| ratio)
}

/// Max absolute deviation between the `X1` and `X2` transform values over
/// the grid; the consistency lemma says the two coincide on `X_c ∩ X²_c`.
pub fn consistency_check(
    f: &PositiveAxisSignal,
    c: f64,
    t_grid: &UniformGrid,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let sched = LimSchedule::default();
    let eval_log = |u: f64| f.eval_log_weighted_at(c, u);
    let mut max_dev = 0.0f64;
    for t in t_grid.nodes() {
        let x1 = x1_transform_at(f, c, t, cfg)?;
        let x2 = lim_transform_at(&eval_log, t, cfg, &sched).value;
        max_dev = max_dev.max((x1 - x2).norm());
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn exp_signal(c: f64) -> PositiveAxisSignal {
        PositiveAxisSignal::new("exp", c, |x| Complex64::new((-x).exp(), 0.0))
    }

    fn log_gauss(c: f64) -> PositiveAxisSignal {
        PositiveAxisSignal::new("log-gauss", c, move |x| {
            let u = x.ln();
            Complex64::new(x.powf(-c) * (-u * u).exp(), 0.0)
        })
    }

    fn linc_signal(c: f64) -> PositiveAxisSignal {
        PositiveAxisSignal::new("linc", c, move |x| {
            Complex64::new(crate::sampling::lin_kernel(c, x).unwrap(), 0.0)
        })
    }

    /// Independent oracle for the log-Gaussian spectrum: fine fixed-step
    /// trapezoid of ∫ e^{-u^2} e^{itu} du, no adaptive machinery.
    fn gauss_fourier_oracle(t: f64) -> Complex64 {
        let (a, b, n) = (-14.0f64, 14.0f64, 280_000usize);
        let h = (b - a) / n as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..=n {
            let u = a + j as f64 * h;
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            sum += w * (-u * u).exp() * Complex64::new(0.0, t * u).exp();
        }
        sum * h
    }

    #[test]
    fn forward_exp_at_origin_is_gamma_one() {
        let f = exp_signal(1.0);
        let v = mellin_forward_at(
            &f,
            1.0,
            0.0,
            &QuadratureConfig::default(),
            Sense::X1,
            &LimSchedule::default(),
        )
        .unwrap();
        assert!((v.re - 1.0).abs() < 1e-10, "{v}");
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn forward_log_gauss_matches_gaussian_oracle_in_both_senses() {
        for &c in &[0.0, 0.7] {
            let f = log_gauss(c);
            for &t in &[0.0, 1.0, 2.5] {
                let oracle = gauss_fourier_oracle(t);
                let expected = PI.sqrt() * (-t * t / 4.0).exp();
                assert!((oracle.re - expected).abs() < 1e-10, "oracle self-check");
                for sense in [Sense::X1, Sense::X2] {
                    let v = mellin_forward_at(
                        &f,
                        c,
                        t,
                        &QuadratureConfig::default(),
                        sense,
                        &LimSchedule::default(),
                    )
                    .unwrap();
                    assert!(
                        (v - oracle).norm() < 1e-9,
                        "c={c} t={t} sense={sense}: {v} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn forward_linc_x2_approximates_band_indicator() {
        let c = 0.6;
        let f = linc_signal(c);
        let sched = LimSchedule::default()
            .with_max_steps(500)
            .with_samples_per_unit(48);
        let cfg = QuadratureConfig::default();
        let inside = mellin_forward_at(&f, c, 0.5, &cfg, Sense::X2, &sched).unwrap();
        let outside = mellin_forward_at(&f, c, 4.5, &cfg, Sense::X2, &sched).unwrap();
        assert!((inside.re - 1.0).abs() < 1e-2, "{inside}");
        assert!(inside.im.abs() < 1e-2);
        assert!(outside.norm() < 1e-2, "{outside}");
    }

    #[test]
    fn forward_x2_flags_oscillation_for_bandlimited_input() {
        let c = 0.3;
        let f = linc_signal(c);
        let grid = UniformGrid::new(0.25, 0.5, 3).unwrap();
        let sched = LimSchedule::default().with_max_steps(24);
        let s = mellin_forward_with(&f, c, &grid, &QuadratureConfig::default(), Sense::X2, &sched)
            .unwrap();
        let warn = s.warning().expect("bandlimited truncations keep oscillating");
        assert!(warn.max_spread > warn.threshold);
    }

    #[test]
    fn inverse_of_zero_spectrum_is_zero() {
        let s = MellinSpectrum::closed("zero", 0.5, None, true, |_| Complex64::new(0.0, 0.0))
            .with_support(2.0);
        let f = mellin_inverse(&s, &LogGrid::default(), &QuadratureConfig::default()).unwrap();
        assert_eq!(f.eval(1.7).norm(), 0.0);
    }

    #[test]
    fn inverse_of_band_indicator_is_linc() {
        let c = 0.8;
        let s = MellinSpectrum::closed("chi", c, Some(PI), false, |_| Complex64::new(1.0, 0.0));
        let grid = LogGrid::new(-2.0, 2.0, 0.25).unwrap();
        let f = mellin_inverse(&s, &grid, &QuadratureConfig::default()).unwrap();
        for x in grid.nodes() {
            let expect = crate::sampling::lin_kernel(c, x).unwrap();
            let got = f.eval(x);
            assert!((got.re - expect).abs() < 1e-10, "x={x}: {got} vs {expect}");
            assert!(got.im.abs() < 1e-10);
        }
    }

    #[test]
    fn forward_then_inverse_recovers_exp() {
        let c = 1.0;
        let f = exp_signal(c);
        let cfg = QuadratureConfig::default().with_tol(1e-12);
        let t_grid = UniformGrid::symmetric(25.0, 0.05).unwrap();
        let spectrum = mellin_forward(&f, c, &t_grid, &cfg, Sense::X1).unwrap();
        let back = mellin_inverse(&spectrum, &LogGrid::new(-2.0, 2.0, 0.5).unwrap(), &cfg).unwrap();
        for &x in &[0.5, 1.0, 3.0] {
            let expect = (-x as f64).exp();
            let got = back.eval(x).re;
            assert!(
                (got - expect).abs() / expect < 1e-6,
                "x={x}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn plancherel_ratio_is_one_for_log_gauss() {
        let c = 0.7;
        let f = log_gauss(c);
        let cfg = QuadratureConfig::default();
        let t_grid = UniformGrid::symmetric(16.0, 0.02).unwrap();
        let (ratio, left, _right) =
            plancherel_ratio_detailed(&f, c, &cfg, &t_grid, &LimSchedule::default()).unwrap();
        assert!((ratio - 1.0).abs() < 1e-6, "ratio={ratio}");
        // ∫ e^{-2u^2} du = sqrt(pi/2), so the squared signal norm matches it.
        assert!((left * left - (PI / 2.0).sqrt()).abs() < 1e-9, "{left}");
    }

    #[test]
    fn plancherel_ratio_is_scale_invariant() {
        let c = 0.4;
        let f = log_gauss(c);
        let scaled = f.scaled(Complex64::new(3.0, 0.0));
        let cfg = QuadratureConfig::default();
        let a = plancherel_ratio(&f, c, &cfg).unwrap();
        let b = plancherel_ratio(&scaled, c, &cfg).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn consistency_of_the_two_senses() {
        let cfg = QuadratureConfig::default();
        let grid = UniformGrid::symmetric(4.0, 0.5).unwrap();

        let f = exp_signal(1.0);
        let dev = consistency_check(&f, 1.0, &grid, &cfg).unwrap();
        assert!(dev <= 1e-6, "exp: {dev}");

        let g = log_gauss(0.5);
        let dev = consistency_check(&g, 0.5, &grid, &cfg).unwrap();
        assert!(dev <= 1e-8, "log-gauss: {dev}");

        let zero = PositiveAxisSignal::new("zero", 0.0, |_| Complex64::new(0.0, 0.0));
        let dev = consistency_check(&zero, 0.0, &grid, &cfg).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn forward_is_linear() {
        let c = 0.5;
        let f = log_gauss(c);
        let g = exp_signal(c);
        let (alpha, beta) = (Complex64::new(2.0, 1.0), Complex64::new(-0.5, 0.3));
        let fc = f.clone();
        let gc = g.clone();
        let combo = PositiveAxisSignal::new("combo", c, move |x| {
            alpha * fc.eval(x) + beta * gc.eval(x)
        });
        let cfg = QuadratureConfig::default();
        let sched = LimSchedule::default();
        for &t in &[0.0, 1.3] {
            let lhs = mellin_forward_at(&combo, c, t, &cfg, Sense::X1, &sched).unwrap();
            let rhs = alpha * mellin_forward_at(&f, c, t, &cfg, Sense::X1, &sched).unwrap()
                + beta * mellin_forward_at(&g, c, t, &cfg, Sense::X1, &sched).unwrap();
            assert!((lhs - rhs).norm() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn translation_shifts_phase() {
        let c = 0.7;
        let f = log_gauss(c);
        let h = 2.0;
        let shifted = crate::signal::mellin_translate(&f, h, c).unwrap();
        let cfg = QuadratureConfig::default();
        let sched = LimSchedule::default();
        for &t in &[0.5, 2.0] {
            let lhs = mellin_forward_at(&shifted, c, t, &cfg, Sense::X1, &sched).unwrap();
            let rhs = Complex64::new(0.0, -t * h.ln()).exp()
                * mellin_forward_at(&f, c, t, &cfg, Sense::X1, &sched).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn spectrum_csv_roundtrip_metadata() {
        let grid = UniformGrid::symmetric(1.0, 0.5).unwrap();
        let values = vec![Complex64::new(1.0, -1.0); grid.len];
        let s = MellinSpectrum::from_grid("demo", 0.25, grid, values).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("c=0.25"));
        assert!(text.contains("t,re,im"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + grid.len);
    }

    #[test]
    fn grid_spectrum_interpolates_linearly_and_vanishes_outside() {
        let grid = UniformGrid::new(0.0, 1.0, 3).unwrap();
        let values = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(4.0, 0.0),
        ];
        let s = MellinSpectrum::from_grid("ramp", 0.0, grid, values).unwrap();
        assert!((s.eval(0.5).re - 1.0).abs() < 1e-15);
        assert!((s.eval(1.75).re - 3.5).abs() < 1e-15);
        assert_eq!(s.eval(2.5).norm(), 0.0);
        assert_eq!(s.eval(-0.1).norm(), 0.0);
    }
}
