//! Spectral tail distances from bandlimited subspaces and the exponential
//! bounds those distances satisfy for Hardy-space members.

use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::{LimSchedule, QuadratureConfig, UniformGrid};
use crate::hardy::{hardy_norm, HardyNormEstimate};
use crate::polar::PolarFunction;
use crate::quad;
use crate::transform::{mellin_forward_with, MellinSpectrum, Sense};

/// Which case of the distance bound produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// `p = 1`, any `q` in `[1, inf]`.
    H1GeneralQ,
    /// `p = 2`, `q = 2`.
    H2Q2,
    /// `p = 2`, `q` in `[1, 2[`.
    H2QLt2,
}

/// One row of a distance audit.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub q: f64,
    pub sigma: f64,
    pub c: f64,
    pub dist_value: f64,
    pub bound_value: Option<f64>,
    pub bound_kind: Option<BoundKind>,
    pub slack: Option<f64>,
}

/// Leakage guard: a grid-backed tail whose outermost magnitude exceeds this
/// multiple of the quadrature tolerance is considered unresolved.
const LEAK_FACTOR: f64 = 1e4;

fn tail_outside_grid(mag_q_end: f64, cfg: &QuadratureConfig, context: &str) -> Result<()> {
    if mag_q_end > LEAK_FACTOR * cfg.abs_tol {
        return Err(Error::NonConvergent {
            context: format!("{context}: spectrum tail not resolved by the grid"),
            last_delta: mag_q_end,
            tol: LEAK_FACTOR * cfg.abs_tol,
        });
    }
    Ok(())
}

/// `L^q` norm of the spectrum tail `{|v| >= sigma}`:
/// `(∫_{|v|>=sigma} |ψ(v)|^q dv)^{1/q}`, or the tail supremum for `q = inf`
/// (which requires the spectrum to be declared continuous).
pub fn dist_tail(
    psi: &MellinSpectrum,
    sigma: f64,
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Config(format!("sigma must be positive, got {sigma}")));
    }
    if !(q >= 1.0) {
        return Err(Error::InvalidExponent { p: q });
    }

    if q.is_infinite() {
        if !psi.is_continuous() {
            return Err(Error::ContinuityRequired);
        }
        let hi = match (psi.grid(), psi.support_t()) {
            (Some(grid), _) => grid.end().abs().max(-grid.start),
            (None, Some(t)) => t,
            (None, None) => sigma + 32.0,
        };
        if hi <= sigma {
            return Ok(0.0);
        }
        let n = ((hi - sigma) / 0.01).ceil() as usize + 1;
        let mut sup = 0.0f64;
        for j in 0..n {
            let v = sigma + (hi - sigma) * j as f64 / (n - 1).max(1) as f64;
            sup = sup.max(psi.eval(v).norm()).max(psi.eval(-v).norm());
        }
        return Ok(sup);
    }

    let mag_q = |v: f64| psi.eval(v).norm().powf(q);

    let integral = match (psi.grid(), psi.support_t()) {
        (Some(grid), support) => {
            // Integrate on the native nodes; the support clamp is inside
            // `eval`. Check that nothing of size leaks past the grid end.
            let hi = grid.end();
            let lo = grid.start;
            if support.is_none() || support.is_some_and(|t| t > hi) {
                tail_outside_grid(mag_q(hi) + mag_q(lo), cfg, "dist_tail")?;
            }
            let mut total = 0.0;
            for (from, to) in [(sigma, hi.max(sigma)), (-(-lo).max(sigma), -sigma)] {
                if to <= from {
                    continue;
                }
                let mut nodes: Vec<f64> = vec![from];
                nodes.extend(grid.nodes().filter(|&v| v > from && v < to));
                nodes.push(to);
                for pair in nodes.windows(2) {
                    total += 0.5 * (mag_q(pair[0]) + mag_q(pair[1])) * (pair[1] - pair[0]);
                }
            }
            total
        }
        (None, Some(t_max)) => {
            if sigma >= t_max {
                0.0
            } else {
                let h0 = ((t_max - sigma) / 32.0).min(0.05);
                let pos = quad::integrate_fixed(
                    &|v: f64| num_complex::Complex64::new(mag_q(v), 0.0),
                    sigma,
                    t_max,
                    h0,
                    cfg,
                    "dist_tail+",
                )?;
                let neg = quad::integrate_fixed(
                    &|v: f64| num_complex::Complex64::new(mag_q(-v), 0.0),
                    sigma,
                    t_max,
                    h0,
                    cfg,
                    "dist_tail-",
                )?;
                pos.re + neg.re
            }
        }
        (None, None) => {
            let pos = quad::integrate_half_line(
                &|v: f64| num_complex::Complex64::new(mag_q(v), 0.0),
                sigma,
                8.0,
                0.05,
                cfg,
                "dist_tail+",
            )?;
            let neg = quad::integrate_half_line(
                &|v: f64| num_complex::Complex64::new(mag_q(-v), 0.0),
                sigma,
                8.0,
                0.05,
                cfg,
                "dist_tail-",
            )?;
            pos.re + neg.re
        }
    };
    Ok(integral.max(0.0).powf(1.0 / q))
}

/// Right-hand side of the distance bound for a Hardy member with the given
/// norm estimate. The three covered cases are `(p=1, q in [1, inf])`,
/// `(p=2, q=2)` and `(p=2, q in [1, 2[)`.
pub fn theorem6_bound(
    hardy: &HardyNormEstimate,
    sigma: f64,
    q: f64,
    p: f64,
) -> Result<(f64, BoundKind)> {
    if (hardy.p - p).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "norm estimate was taken in p = {}, bound requested for p = {p}",
            hardy.p
        )));
    }
    if !(q >= 1.0) {
        return Err(Error::InvalidExponent { p: q });
    }
    if sigma < 0.0 {
        return Err(Error::Config(format!("sigma must be nonnegative, got {sigma}")));
    }
    let a = hardy.a;
    let decay = (-a * sigma).exp();
    if p == 1.0 {
        let factor = if q.is_infinite() {
            1.0
        } else {
            (2.0 / (a * q)).powf(1.0 / q)
        };
        return Ok((2.0 * hardy.value * factor * decay, BoundKind::H1GeneralQ));
    }
    if p == 2.0 {
        if q == 2.0 {
            return Ok((2.0 * PI.sqrt() * hardy.value * decay, BoundKind::H2Q2));
        }
        if (1.0..2.0).contains(&q) {
            let factor = ((2.0 - q) / (q * a)).powf(1.0 / q - 0.5);
            return Ok((2.0 * PI.sqrt() * factor * hardy.value * decay, BoundKind::H2QLt2));
        }
        return Err(Error::UnsupportedCombination { p: 2, q });
    }
    Err(Error::UnsupportedCombination { p: p as u8, q })
}

/// Tail distance of `f(., 0)` from the bandlimited classes at each `sigma`,
/// paired with the Hardy-norm bound. The spectrum is computed once from the
/// restriction; `psi(v) = M[f(., 0)](c + iv)`.
pub fn distance_audit(
    f: &PolarFunction,
    a: f64,
    c: f64,
    p: f64,
    sigmas: &[f64],
    q: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<DistanceReport>> {
    let sense = if p == 1.0 { Sense::X1 } else { Sense::X2 };
    let t_grid = UniformGrid::symmetric(26.0, 0.05)?;
    let sched = LimSchedule::default().with_max_steps(512);
    let restriction = f.restriction(0.0, c);
    let psi = mellin_forward_with(&restriction, c, &t_grid, cfg, sense, &sched)?;
    let hardy = hardy_norm(f, a, c, p, 8, cfg)?;

    let mut rows = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let dist_value = dist_tail(&psi, sigma, q, cfg)?;
        let (bound_value, kind) = theorem6_bound(&hardy, sigma, q, p)?;
        rows.push(DistanceReport {
            q,
            sigma,
            c,
            dist_value,
            bound_value: Some(bound_value),
            bound_kind: Some(kind),
            slack: Some(bound_value - dist_value),
        });
    }
    Ok(rows)
}

/// CSV with columns `sigma,q,dist,bound,slack`.
pub fn write_distance_csv<W: Write>(rows: &[DistanceReport], w: &mut W) -> Result<()> {
    writeln!(w, "sigma,q,dist,bound,slack")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            row.sigma,
            row.q,
            row.dist_value,
            row.bound_value.map(|b| b.to_string()).unwrap_or_default(),
            row.slack.map(|s| s.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::polar::from_strip;

    fn indicator_spectrum(t: f64, c: f64) -> MellinSpectrum {
        MellinSpectrum::closed("chi", c, Some(t), false, |_| Complex64::new(1.0, 0.0))
    }

    fn gauss_spectrum(c: f64) -> MellinSpectrum {
        MellinSpectrum::closed("gauss", c, None, true, |t| {
            Complex64::new(PI.sqrt() * (-t * t / 4.0).exp(), 0.0)
        })
    }

    fn unit_hardy(a: f64, p: f64) -> HardyNormEstimate {
        HardyNormEstimate {
            a,
            c: 0.0,
            p,
            value: 1.0,
            theta_grid: vec![],
            per_theta: vec![],
        }
    }

    #[test]
    fn tail_of_band_indicator() {
        let cfg = QuadratureConfig::default();
        let psi = indicator_spectrum(2.0, 0.0);
        let v = dist_tail(&psi, 1.0, 1.0, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "{v}");
        // supported inside sigma: empty tail
        let v = dist_tail(&psi, 3.0, 1.0, &cfg).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn tail_of_gaussian_matches_erfc_oracle() {
        let cfg = QuadratureConfig::default();
        let psi = gauss_spectrum(0.0);
        let v = dist_tail(&psi, 2.0, 2.0, &cfg).unwrap();
        // (π ∫_{|v|>=2} e^{-v²/2} dv)^{1/2} = (2 π sqrt(π/2) erfc(sqrt(2)))^{1/2}
        let oracle =
            (2.0 * PI * (PI / 2.0).sqrt() * statrs::function::erf::erfc(2.0f64.sqrt())).sqrt();
        assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
    }

    #[test]
    fn tail_sup_norm_requires_continuity() {
        let cfg = QuadratureConfig::default();
        let err = dist_tail(&indicator_spectrum(2.0, 0.0), 1.0, f64::INFINITY, &cfg);
        assert!(matches!(err, Err(Error::ContinuityRequired)));

        let v = dist_tail(&gauss_spectrum(0.0), 2.0, f64::INFINITY, &cfg).unwrap();
        let expect = PI.sqrt() * (-1.0f64).exp();
        assert!((v - expect).abs() < 1e-6, "{v} vs {expect}");
    }

    #[test]
    fn tail_is_nonincreasing_in_sigma() {
        let cfg = QuadratureConfig::default();
        let psi = gauss_spectrum(0.0);
        let mut prev = f64::INFINITY;
        for &s in &[0.5, 1.0, 2.0, 4.0] {
            let v = dist_tail(&psi, s, 1.5, &cfg).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn bound_values_match_closed_forms() {
        let h2 = unit_hardy(1.0, 2.0);
        let (v, kind) = theorem6_bound(&h2, 3.0, 2.0, 2.0).unwrap();
        assert_eq!(kind, BoundKind::H2Q2);
        let expect = 2.0 * PI.sqrt() * (-3.0f64).exp();
        assert!((v - expect).abs() < 1e-14, "{v} vs {expect}");

        let h1 = unit_hardy(1.0, 1.0);
        let (v, kind) = theorem6_bound(&h1, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(kind, BoundKind::H1GeneralQ);
        assert!((v - 4.0).abs() < 1e-14, "{v}");

        // pure exponential in sigma
        let (b1, _) = theorem6_bound(&h2, 2.0, 2.0, 2.0).unwrap();
        let (b2, _) = theorem6_bound(&h2, 3.0, 2.0, 2.0).unwrap();
        assert!((b2 / b1 - (-1.0f64).exp()).abs() < 1e-14);

        let (v, kind) = theorem6_bound(&h2, 1.0, 1.5, 2.0).unwrap();
        assert_eq!(kind, BoundKind::H2QLt2);
        let factor = ((2.0 - 1.5f64) / 1.5).powf(1.0 / 1.5 - 0.5);
        assert!((v - 2.0 * PI.sqrt() * factor * (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn bound_rejects_uncovered_combinations() {
        let h2 = unit_hardy(1.0, 2.0);
        assert!(matches!(
            theorem6_bound(&h2, 1.0, 3.0, 2.0),
            Err(Error::UnsupportedCombination { .. })
        ));
        assert!(matches!(
            theorem6_bound(&h2, 1.0, f64::INFINITY, 2.0),
            Err(Error::UnsupportedCombination { .. })
        ));
    }

    #[test]
    fn audit_of_gaussian_hardy_member_has_nonnegative_slack() {
        let c = 0.5;
        let f = from_strip(|z| (-z * z).exp(), c, f64::INFINITY, "log-gauss-hardy");
        let rows = distance_audit(
            &f,
            1.0,
            c,
            2.0,
            &[1.0, 2.0, 4.0, 6.0],
            2.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        for row in &rows {
            assert!(row.slack.unwrap() >= 0.0, "{row:?}");
        }
        // Gaussian tails beat the exponential bound at large sigma.
        let far = distance_audit(&f, 1.0, c, 2.0, &[8.0], 2.0, &QuadratureConfig::default())
            .unwrap();
        let ratio = far[0].dist_value / far[0].bound_value.unwrap();
        assert!(ratio < 1e-3, "{ratio}");
    }

    #[test]
    fn audit_of_zero_function() {
        let zero = PolarFunction::new("zero", f64::INFINITY, None, |_, _| Complex64::new(0.0, 0.0));
        let rows =
            distance_audit(&zero, 1.0, 0.0, 2.0, &[1.0], 2.0, &QuadratureConfig::default())
                .unwrap();
        assert_eq!(rows[0].dist_value, 0.0);
        assert_eq!(rows[0].bound_value.unwrap(), 0.0);
    }

    #[test]
    fn hoelder_consistency_between_tail_exponents() {
        let cfg = QuadratureConfig::default();
        let grid = UniformGrid::symmetric(16.0, 0.02).unwrap();
        let psi = gauss_spectrum(0.0).sampled(grid).unwrap();
        for &sigma in &[1.0, 2.0] {
            for &q in &[1.0, 1.5] {
                let dq = dist_tail(&psi, sigma, q, &cfg).unwrap();
                let d2 = dist_tail(&psi, sigma, 2.0, &cfg).unwrap();
                let width = 2.0 * (grid.end() - sigma);
                assert!(
                    dq <= width.powf(1.0 / q - 0.5) * d2 + 1e-9,
                    "sigma={sigma} q={q}: {dq} vs holder cap"
                );
            }
        }
    }

    #[test]
    fn csv_has_expected_shape() {
        let rows = vec![DistanceReport {
            q: 2.0,
            sigma: 1.0,
            c: 0.5,
            dist_value: 0.1,
            bound_value: Some(0.5),
            bound_kind: Some(BoundKind::H2Q2),
            slack: Some(0.4),
        }];
        let mut buf = Vec::new();
        write_distance_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "sigma,q,dist,bound,slack");
        assert_eq!(text.lines().count(), 2);
    }
}
