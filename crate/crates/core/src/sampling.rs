//! Exponential sampling: the `lin_c` kernel, truncated reconstruction from
//! geometrically spaced samples, the spectral-tail remainder bound, and
//! measured decay of the remainder as the sampling rate grows.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::distance::dist_tail;
use crate::error::{Error, Result};
use crate::grid::{LimSchedule, QuadratureConfig, UniformGrid};
use crate::polar::PolarFunction;
use crate::quad::KahanSum;
use crate::transform::{mellin_forward_with, MellinSpectrum, Sense};

/// `sinc` with the removable singularity handled by a Taylor branch.
#[inline]
fn sinc(w: f64) -> f64 {
    if w.abs() < 1e-6 {
        1.0 - (PI * w) * (PI * w) / 6.0
    } else {
        (PI * w).sin() / (PI * w)
    }
}

/// `lin_c(x) = x^{-c} sinc(log x)` with `lin_c(1) = 1`.
pub fn lin_kernel(c: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError { x });
    }
    Ok(lin_kernel_log(c, x.ln()))
}

/// Kernel evaluated from the log abscissa `w = log x`; sampling sums work in
/// the log domain so node hits stay exact.
#[inline]
pub fn lin_kernel_log(c: f64, w: f64) -> f64 {
    (-c * w).exp() * sinc(w)
}

/// Samples `k -> g(e^{k/T})` of a signal at the geometric nodes.
#[derive(Debug, Clone)]
pub struct SampleTable {
    values: BTreeMap<i64, Complex64>,
}

impl SampleTable {
    pub fn new(values: BTreeMap<i64, Complex64>) -> Self {
        Self { values }
    }

    /// Sample `g` at `e^{k/T}` for `|k| <= n`.
    pub fn from_signal(g: &crate::signal::PositiveAxisSignal, t_rate: f64, n: i64) -> Self {
        let mut values = BTreeMap::new();
        for k in -n..=n {
            values.insert(k, g.eval((k as f64 / t_rate).exp()));
        }
        Self { values }
    }

    pub fn get(&self, k: i64) -> Result<Complex64> {
        self.values.get(&k).copied().ok_or(Error::MissingSample { k })
    }
}

/// Truncated exponential sampling series
/// `Σ_{|k| <= n} g(e^{k/T}) lin_{c/T}(e^{-k} x^T)` at `log x = log_x`.
pub fn reconstruct_at_log(
    samples: &SampleTable,
    c: f64,
    t_rate: f64,
    log_x: f64,
    n: i64,
) -> Result<Complex64> {
    if !(t_rate > 0.0) {
        return Err(Error::Config(format!("sampling rate must be positive, got {t_rate}")));
    }
    let c_over_t = c / t_rate;
    let w = t_rate * log_x;
    let mut acc = KahanSum::new();
    for k in -n..=n {
        let g_k = samples.get(k)?;
        acc.add(g_k * lin_kernel_log(c_over_t, w - k as f64));
    }
    Ok(acc.value())
}

/// Same series at abscissa `x`.
pub fn reconstruct(
    samples: &SampleTable,
    c: f64,
    t_rate: f64,
    x: f64,
    n: i64,
) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::DomainError { x });
    }
    reconstruct_at_log(samples, c, t_rate, x.ln(), n)
}

/// Aliasing bound `(x^{-c}/π) ∫_{|t| > πT} |M[g](c+it)| dt`.
///
/// Zero when the spectrum is supported inside the sampling band.
pub fn remainder_bound(
    g_spectrum: &MellinSpectrum,
    c: f64,
    t_rate: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::DomainError { x });
    }
    if !(t_rate > 0.0) {
        return Err(Error::Config(format!("sampling rate must be positive, got {t_rate}")));
    }
    let tail = dist_tail(g_spectrum, PI * t_rate, 1.0, cfg)?;
    Ok(x.powf(-c) / PI * tail)
}

/// One sampling rate in a remainder report.
#[derive(Debug, Clone, Serialize)]
pub struct SamplingRow {
    pub t_rate: f64,
    pub n: i64,
    /// Measured `sup_x x^c |g(x) - reconstruction(x)|` over the probes.
    pub max_abs_error: f64,
    /// `(1/π) dist_1(g, band πT)`, when the spectrum tail resolved.
    pub bound: Option<f64>,
    pub slack: Option<f64>,
    /// Reported size of the dropped series tail `n < |k| <= 4n`.
    pub truncation_tail: f64,
}

/// Remainder survey over a list of sampling rates.
#[derive(Debug, Clone, Serialize)]
pub struct SamplingReport {
    pub c: f64,
    pub x_probes: Vec<f64>,
    pub rows: Vec<SamplingRow>,
    /// Least-squares slope of `log(measure)` against `T`.
    pub decay_slope: Option<f64>,
    /// Reference exponential rate `-a π` from the strip half-width.
    pub reference_slope: f64,
}

impl SamplingReport {
    /// CSV with columns `T,n,max_abs_error,bound,slack`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "T,n,max_abs_error,bound,slack")?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                row.t_rate,
                row.n,
                row.max_abs_error,
                row.bound.map(|b| b.to_string()).unwrap_or_default(),
                row.slack.map(|s| s.to_string()).unwrap_or_default(),
            )?;
        }
        Ok(())
    }
}

/// Measured remainder `sup_x x^c |g(x) - reconstruction(x)|` of the
/// truncated series over the probes.
pub fn measure_remainder(
    g: &crate::signal::PositiveAxisSignal,
    c: f64,
    t_rate: f64,
    n: i64,
    x_probes: &[f64],
) -> Result<f64> {
    let samples = SampleTable::from_signal(g, t_rate, n);
    let mut measure = 0.0f64;
    for &x in x_probes {
        if x <= 0.0 {
            return Err(Error::DomainError { x });
        }
        let u = x.ln();
        let recon = reconstruct_at_log(&samples, c, t_rate, u, n)?;
        measure = measure.max(x.powf(c) * (g.eval(x) - recon).norm());
    }
    Ok(measure)
}

/// Least-squares slope of `log(value)` against the abscissa; `None` when
/// fewer than two positive values remain.
pub fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(t, v)| (t, v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let num: f64 = pts.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_y)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mean_t) * (p.0 - mean_t)).sum();
    Some(num / den)
}

/// Weighted series tail `Σ_{n < |k| <= 4n} |ĝ_k sinc(w - k)|` at the worst
/// probe; `ĝ_k = g(e^{k/T}) e^{ck/T}` is the weighted sample.
fn truncation_tail_estimate(
    g: &crate::signal::PositiveAxisSignal,
    c: f64,
    t_rate: f64,
    n: i64,
    log_probes: &[f64],
) -> f64 {
    let mut worst = 0.0f64;
    for &u in log_probes {
        let w = t_rate * u;
        let mut acc = 0.0;
        for k in (n + 1)..=(4 * n) {
            for sk in [k, -k] {
                let node = (sk as f64 / t_rate).exp();
                let weighted = g.eval(node).norm() * (c * sk as f64 / t_rate).exp();
                acc += weighted * sinc(w - sk as f64).abs();
            }
        }
        worst = worst.max(acc);
    }
    worst
}

/// Measure the truncated-series remainder of the restriction `f(., 0)` for
/// each sampling rate, compare against the spectral-tail bound, and fit the
/// decay slope of `log(measure)` in `T`.
pub fn remainder_measure(
    f: &PolarFunction,
    a: f64,
    c: f64,
    t_list: &[f64],
    n: i64,
    x_probes: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SamplingReport> {
    if t_list.len() < 3 {
        return Err(Error::Config(format!(
            "need at least 3 sampling rates for a slope fit, got {}",
            t_list.len()
        )));
    }
    if t_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("sampling rates must be strictly increasing".into()));
    }
    for &x in x_probes {
        if x <= 0.0 {
            return Err(Error::DomainError { x });
        }
    }
    let g = f.restriction(0.0, c);
    let t_grid = UniformGrid::symmetric(26.0, 0.05)?;
    let sched = LimSchedule::default()
        .with_max_steps(512)
        .with_samples_per_unit(32);
    let psi = mellin_forward_with(&g, c, &t_grid, cfg, Sense::X2, &sched)?;

    let log_probes: Vec<f64> = x_probes.iter().map(|x| x.ln()).collect();
    let mut rows = Vec::with_capacity(t_list.len());
    for &t_rate in t_list {
        let measure = measure_remainder(&g, c, t_rate, n, x_probes)?;
        let bound = dist_tail(&psi, PI * t_rate, 1.0, cfg).ok().map(|d| d / PI);
        rows.push(SamplingRow {
            t_rate,
            n,
            max_abs_error: measure,
            bound,
            slack: bound.map(|b| b - measure),
            truncation_tail: truncation_tail_estimate(&g, c, t_rate, n, &log_probes),
        });
    }

    let decay_slope = log_slope(
        &rows
            .iter()
            .map(|r| (r.t_rate, r.max_abs_error))
            .collect::<Vec<_>>(),
    );

    Ok(SamplingReport {
        c,
        x_probes: x_probes.to_vec(),
        rows,
        decay_slope,
        reference_slope: -a * PI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::from_strip;
    use crate::signal::PositiveAxisSignal;

    fn sinc2_signal(c: f64) -> PositiveAxisSignal {
        PositiveAxisSignal::new("sinc2", c, move |x: f64| {
            let u = x.ln();
            let y = u / (2.0 * PI);
            let s = if y.abs() < 1e-8 {
                1.0 - (PI * y) * (PI * y) / 6.0
            } else {
                (PI * y).sin() / (PI * y)
            };
            Complex64::new(x.powf(-c) * s * s, 0.0)
        })
    }

    fn cauchy_hardy(c: f64) -> PolarFunction {
        from_strip(
            move |z: Complex64| (1.0 / PI) / (1.0 + z * z),
            c,
            1.0,
            "cauchy-hardy",
        )
    }

    #[test]
    fn lin_kernel_basics() {
        assert!((lin_kernel(0.7, 1.0).unwrap() - 1.0).abs() < 1e-15);
        for &k in &[-2.0f64, -1.0, 1.0, 2.0] {
            let v = lin_kernel(0.0, k.exp()).unwrap();
            assert!(v.abs() < 1e-13, "k={k}: {v}");
        }
        let v = lin_kernel(0.0, (0.5f64).exp()).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-12, "{v}");
        assert!(matches!(lin_kernel(0.0, 0.0), Err(Error::DomainError { .. })));
        assert!(matches!(lin_kernel(0.0, -1.0), Err(Error::DomainError { .. })));
    }

    #[test]
    fn lin_kernel_taylor_branch_matches_direct_formula() {
        // Both sides of the small-argument switch agree with the raw formula.
        for &w in &[9.9e-7, 1.01e-6] {
            let exact = (-0.5 * w as f64).exp() * (PI * w).sin() / (PI * w);
            assert!((lin_kernel_log(0.5, w) - exact).abs() < 1e-13, "w={w}");
        }
    }

    #[test]
    fn reconstruct_from_delta_samples_reproduces_kernel() {
        let c = 0.8;
        let mut values = BTreeMap::new();
        for k in -10..=10i64 {
            values.insert(k, Complex64::new(lin_kernel(c, (k as f64).exp()).unwrap(), 0.0));
        }
        let table = SampleTable::new(values);
        for &x in &[0.3, 1.0, 2.42, 7.0] {
            let recon = reconstruct(&table, c, 1.0, x, 10).unwrap();
            let expect = lin_kernel(c, x).unwrap();
            assert!((recon.re - expect).abs() < 1e-12, "x={x}");
            assert!(recon.im.abs() < 1e-15);
        }
    }

    #[test]
    fn reconstruction_is_exact_at_sample_nodes() {
        // Exactness in the weighted metric x^c |.|; the unweighted values
        // blow up like x^{-c} toward the origin.
        let c = 0.6;
        let g = sinc2_signal(c);
        for &t_rate in &[1.0, 2.0] {
            let n = 50;
            let table = SampleTable::from_signal(&g, t_rate, n);
            for j in [-20i64, -3, 0, 7, 20] {
                let log_x = j as f64 / t_rate;
                let recon = reconstruct_at_log(&table, c, t_rate, log_x, n).unwrap();
                let expect = g.eval(log_x.exp());
                let weighted = (c * log_x).exp() * (recon - expect).norm();
                assert!(
                    weighted <= 1e-12,
                    "T={t_rate} j={j}: weighted error {weighted:.3e}"
                );
            }
        }
    }

    #[test]
    fn reconstruct_requires_all_samples() {
        let mut values = BTreeMap::new();
        values.insert(0i64, Complex64::new(1.0, 0.0));
        let table = SampleTable::new(values);
        let err = reconstruct(&table, 0.0, 1.0, 2.0, 1);
        assert!(matches!(err, Err(Error::MissingSample { k }) if k == -1));
    }

    #[test]
    fn remainder_bound_vanishes_inside_band() {
        let chi = MellinSpectrum::closed("chi", 0.5, Some(PI), false, |_| Complex64::new(1.0, 0.0));
        // πT = π·1.2 > π: empty tail
        let b = remainder_bound(&chi, 0.5, 1.2, 2.0, &QuadratureConfig::default()).unwrap();
        assert_eq!(b, 0.0);
    }

    #[test]
    fn remainder_bound_matches_erfc_oracle_for_gaussian() {
        let gauss = MellinSpectrum::closed("gauss", 0.5, None, true, |t| {
            Complex64::new(PI.sqrt() * (-t * t / 4.0).exp(), 0.0)
        });
        // πT = 4: (1/π) ∫_{|t|>4} sqrt(π) e^{-t²/4} dt = 2 erfc(2) at x = 1
        let t_rate = 4.0 / PI;
        let b = remainder_bound(&gauss, 0.5, t_rate, 1.0, &QuadratureConfig::default()).unwrap();
        let oracle = 2.0 * statrs::function::erf::erfc(2.0);
        assert!((b - oracle).abs() < 1e-10, "{b} vs {oracle}");

        // explicit x^{-c} scaling between probes
        let b1 = remainder_bound(&gauss, 0.5, t_rate, 2.0, &QuadratureConfig::default()).unwrap();
        let b2 = remainder_bound(&gauss, 0.5, t_rate, 4.0, &QuadratureConfig::default()).unwrap();
        assert!((b2 / b1 - 2.0f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn bandlimited_reconstruction_error_is_truncation_level() {
        let c = 0.4;
        let g = sinc2_signal(c);
        // band 1 <= πT for T = 1/2: no aliasing, only series truncation
        let t_rate = 0.5;
        let n = 400;
        let table = SampleTable::from_signal(&g, t_rate, n);
        let mut worst = 0.0f64;
        for &x in &[0.25, 0.8, 1.0, 1.9, 4.2] {
            let recon = reconstruct(&table, c, t_rate, x, n).unwrap();
            let err = x.powf(c) * (g.eval(x) - recon).norm();
            worst = worst.max(err);
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn remainder_decays_like_the_strip_rate_for_exponential_spectra() {
        let c = 0.5;
        let f = cauchy_hardy(c);
        let probes: Vec<f64> = (0..12).map(|i| 0.25 * (1.3f64).powi(i)).collect();
        let report = remainder_measure(
            &f,
            1.0,
            c,
            &[1.0, 1.5, 2.0],
            300,
            &probes,
            &QuadratureConfig::default(),
        )
        .unwrap();
        for row in &report.rows {
            let bound = row.bound.expect("spectrum tail resolved");
            assert!(
                row.max_abs_error <= bound + 1e-9,
                "T={}: measured {} vs bound {bound}",
                row.t_rate,
                row.max_abs_error
            );
        }
        let slope = report.decay_slope.unwrap();
        assert!(slope < -2.5, "slope {slope} (reference {})", report.reference_slope);
    }

    #[test]
    fn csv_shape() {
        let report = SamplingReport {
            c: 0.5,
            x_probes: vec![1.0],
            rows: vec![SamplingRow {
                t_rate: 1.0,
                n: 10,
                max_abs_error: 1e-3,
                bound: Some(2e-3),
                slack: Some(1e-3),
                truncation_tail: 1e-9,
            }],
            decay_slope: Some(-3.1),
            reference_slope: -PI,
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "T,n,max_abs_error,bound,slack");
    }
}
