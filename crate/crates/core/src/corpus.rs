//! Registry of named test signals with their weight-validity ranges, space
//! memberships, and closed-form spectra. User corpora extend the registry
//! from JSON descriptors referencing the built-in evaluator kinds.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::{from_strip, PolarFunction};
use crate::sampling::lin_kernel;
use crate::signal::PositiveAxisSignal;
use crate::special;
use crate::transform::MellinSpectrum;

/// Closed-form spectrum shapes for spectrum-defined members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum SpectrumKind {
    /// `χ_{[-band, band]}(v)`.
    Indicator { band: f64 },
    /// `max(0, 1 - |v|/band)`.
    Triangle { band: f64 },
    /// `sqrt(π) e^{-v²/4}` cut to `[-band, band]`.
    TruncatedGauss { band: f64 },
    /// `e^{-rate |v|}`.
    ExpAbs { rate: f64 },
    /// `1/(1 + v²)`.
    Cauchy,
}

/// Built-in evaluator families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvaluatorKind {
    /// `e^{-x}`; spectrum `Γ(c + it)`, needs `c > 0`.
    Exp,
    /// `x^{offset - c}` on `[lo, hi]`, zero elsewhere. With `offset = 0` the
    /// weight cancels and every norm is a pure box integral.
    Power { offset: f64, lo: f64, hi: f64 },
    /// `x^{-c} e^{-(log x)²}`.
    LogGauss,
    /// `lin_c`: `x^{-c} sinc(log x)`, band `π`.
    Linc,
    /// `x^{-c} sinc²(log x / 2π)`, band 1.
    Sinc2,
    /// Polar member `r^{-c} e^{-ic θ} e^{-(log r + iθ)²}` on the whole
    /// half-plane; restriction is `log-gauss`.
    LogGaussHardy,
    /// Polar member `r^{-c} e^{-ic θ} (1/π)/(1 + (log r + iθ)²)` on the unit
    /// strip; spectrum `e^{-|v|}`.
    CauchyHardy,
    /// Inverse transform of a closed-form spectrum.
    SpectrumDefined { spectrum: SpectrumKind },
}

/// Registry row: everything a verification pipeline needs to know before
/// evaluating anything.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub kind: EvaluatorKind,
    pub summary: String,
    /// Open validity interval for the weight index.
    pub c_min: f64,
    pub c_max: f64,
    pub in_x1: bool,
    pub in_x2: bool,
    /// Band edge when Mellin-bandlimited.
    pub band: Option<f64>,
    /// Largest usable strip half-width for Hardy-space checks.
    pub hardy_strip: Option<f64>,
    pub spectrum_continuous: bool,
    pub has_closed_spectrum: bool,
}

impl CorpusEntry {
    fn check_weight(&self, c: f64) -> Result<()> {
        if c > self.c_min && c < self.c_max {
            Ok(())
        } else {
            Err(Error::InvalidWeight {
                id: self.id.clone(),
                c,
                lo: self.c_min,
                hi: self.c_max,
            })
        }
    }
}

/// Descriptor format for user corpus extensions (one JSON file per entry).
#[derive(Debug, Clone, Serialize, Deserialize)]
struct UserEntry {
    id: String,
    #[serde(flatten)]
    kind: EvaluatorKind,
    #[serde(default)]
    summary: Option<String>,
    #[serde(default)]
    c_validity: Option<(f64, f64)>,
}

/// Named-signal registry.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: BTreeMap<String, CorpusEntry>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

fn entry_from_kind(id: &str, kind: EvaluatorKind, summary: String, c_validity: Option<(f64, f64)>) -> CorpusEntry {
    let (c_min, c_max) = c_validity.unwrap_or(match kind {
        EvaluatorKind::Exp => (0.0, f64::INFINITY),
        _ => (f64::NEG_INFINITY, f64::INFINITY),
    });
    let (in_x1, in_x2, band, hardy_strip, spectrum_continuous) = match kind {
        EvaluatorKind::Exp => (true, true, None, None, true),
        EvaluatorKind::Power { .. } => (true, true, None, None, true),
        EvaluatorKind::LogGauss => (true, true, None, None, true),
        EvaluatorKind::Linc => (false, true, Some(PI), None, false),
        EvaluatorKind::Sinc2 => (true, true, Some(1.0), None, true),
        EvaluatorKind::LogGaussHardy => (true, true, None, Some(f64::INFINITY), true),
        EvaluatorKind::CauchyHardy => (true, true, None, Some(1.0), true),
        EvaluatorKind::SpectrumDefined { spectrum } => match spectrum {
            SpectrumKind::Indicator { band } => (false, true, Some(band), None, false),
            SpectrumKind::Triangle { band } => (true, true, Some(band), None, true),
            SpectrumKind::TruncatedGauss { band } => (true, true, Some(band), None, true),
            SpectrumKind::ExpAbs { .. } => (true, true, None, Some(1.0), true),
            SpectrumKind::Cauchy => (true, true, None, None, true),
        },
    };
    CorpusEntry {
        id: id.to_string(),
        kind,
        summary,
        c_min,
        c_max,
        in_x1,
        in_x2,
        band,
        hardy_strip,
        spectrum_continuous,
        has_closed_spectrum: true,
    }
}

impl Registry {
    /// The built-in corpus.
    pub fn builtin() -> Self {
        let mut entries = BTreeMap::new();
        let rows = [
            entry_from_kind(
                "exp",
                EvaluatorKind::Exp,
                "e^{-x}; spectrum Gamma(c+it)".into(),
                None,
            ),
            entry_from_kind(
                "power",
                EvaluatorKind::Power {
                    offset: 0.0,
                    lo: 1.0,
                    hi: std::f64::consts::E,
                },
                "x^{-c} on [1, e]; every X^p_c norm equals 1".into(),
                None,
            ),
            entry_from_kind(
                "log-gauss",
                EvaluatorKind::LogGauss,
                "x^{-c} e^{-(log x)^2}; spectrum sqrt(pi) e^{-t^2/4}".into(),
                None,
            ),
            entry_from_kind(
                "linc",
                EvaluatorKind::Linc,
                "x^{-c} sinc(log x); band-pi member of B^2_{c,pi}".into(),
                None,
            ),
            entry_from_kind(
                "sinc2",
                EvaluatorKind::Sinc2,
                "x^{-c} sinc^2(log x / 2pi); band-1 member of B^1 and B^2".into(),
                None,
            ),
            entry_from_kind(
                "gauss-band",
                EvaluatorKind::SpectrumDefined {
                    spectrum: SpectrumKind::TruncatedGauss { band: 10.0 },
                },
                "log-gauss with its spectrum truncated to [-10, 10]".into(),
                None,
            ),
            entry_from_kind(
                "log-gauss-hardy",
                EvaluatorKind::LogGaussHardy,
                "polar extension of log-gauss; Hardy member on every strip".into(),
                None,
            ),
            entry_from_kind(
                "cauchy-hardy",
                EvaluatorKind::CauchyHardy,
                "Poisson-kernel polar member on the unit strip; spectrum e^{-|v|}".into(),
                None,
            ),
            entry_from_kind(
                "lorentz",
                EvaluatorKind::SpectrumDefined {
                    spectrum: SpectrumKind::Cauchy,
                },
                "x^{-c} e^{-|log x|}/2; slow algebraic spectrum 1/(1+v^2)".into(),
                None,
            ),
        ];
        for row in rows {
            entries.insert(row.id.clone(), row);
        }
        Self { entries }
    }

    /// Register descriptors from every `*.json` file in a directory.
    /// Returns how many entries were added. Duplicate ids are rejected.
    pub fn load_dir(&mut self, dir: &Path) -> Result<usize> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        paths.sort();
        let mut added = 0;
        for path in paths {
            let text = std::fs::read_to_string(&path)?;
            let user: UserEntry = serde_json::from_str(&text)?;
            if self.entries.contains_key(&user.id) {
                return Err(Error::Config(format!(
                    "corpus id '{}' already registered ({})",
                    user.id,
                    path.display()
                )));
            }
            let summary = user
                .summary
                .unwrap_or_else(|| format!("user-defined {:?}", user.kind));
            let entry = entry_from_kind(&user.id, user.kind, summary, user.c_validity);
            self.entries.insert(entry.id.clone(), entry);
            added += 1;
        }
        Ok(added)
    }

    pub fn get(&self, id: &str) -> Result<&CorpusEntry> {
        self.entries
            .get(id)
            .ok_or_else(|| Error::UnknownCorpus(id.to_string()))
    }

    /// Deterministic, alphabetically ordered listing.
    pub fn list(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.values()
    }

    /// The signal `f` at weight `c`, with its closed-form spectrum attached.
    pub fn signal(&self, id: &str, c: f64) -> Result<PositiveAxisSignal> {
        let entry = self.get(id)?;
        entry.check_weight(c)?;
        let signal = build_signal(entry, c);
        Ok(signal.with_spectrum(build_spectrum(entry, c)))
    }

    /// The polar form of a Hardy member.
    pub fn polar(&self, id: &str, c: f64) -> Result<PolarFunction> {
        let entry = self.get(id)?;
        entry.check_weight(c)?;
        match entry.kind {
            EvaluatorKind::LogGaussHardy => {
                Ok(from_strip(|z| (-z * z).exp(), c, f64::INFINITY, entry.id.clone()))
            }
            EvaluatorKind::CauchyHardy
            | EvaluatorKind::SpectrumDefined {
                spectrum: SpectrumKind::ExpAbs { .. },
            } => {
                let rate = match entry.kind {
                    EvaluatorKind::SpectrumDefined {
                        spectrum: SpectrumKind::ExpAbs { rate },
                    } => rate,
                    _ => 1.0,
                };
                Ok(from_strip(
                    move |z| (rate / PI) / (rate * rate + z * z),
                    c,
                    rate,
                    entry.id.clone(),
                ))
            }
            _ => Err(Error::Config(format!(
                "corpus member '{}' has no polar form",
                entry.id
            ))),
        }
    }

    /// Closed-form spectrum of a member at weight `c`.
    pub fn spectrum(&self, id: &str, c: f64) -> Result<MellinSpectrum> {
        let entry = self.get(id)?;
        entry.check_weight(c)?;
        Ok(build_spectrum(entry, c))
    }
}

fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-8 {
        1.0 - (PI * y) * (PI * y) / 6.0
    } else {
        (PI * y).sin() / (PI * y)
    }
}

fn build_signal(entry: &CorpusEntry, c: f64) -> PositiveAxisSignal {
    let id = entry.id.clone();
    match entry.kind {
        EvaluatorKind::Exp => {
            PositiveAxisSignal::new(id, c, |x: f64| Complex64::new((-x).exp(), 0.0))
        }
        EvaluatorKind::Power { offset, lo, hi } => {
            // Half-open support [lo, hi), classified in the log domain with a
            // 1e-9 guard so grid-aligned edge nodes resolve deterministically
            // (the guard shifts both edges together, leaving the integral
            // unchanged).
            let (lo_u, hi_u) = (lo.ln() - 1e-9, hi.ln() - 1e-9);
            PositiveAxisSignal::new(id, c, move |x: f64| {
                let u = x.ln();
                if u >= lo_u && u < hi_u {
                    Complex64::new(x.powf(offset - c), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        EvaluatorKind::LogGauss => PositiveAxisSignal::new(id, c, move |x: f64| {
            let u = x.ln();
            Complex64::new(x.powf(-c) * (-u * u).exp(), 0.0)
        }),
        EvaluatorKind::Linc => PositiveAxisSignal::new(id, c, move |x: f64| {
            Complex64::new(lin_kernel(c, x).unwrap_or(f64::NAN), 0.0)
        }),
        EvaluatorKind::Sinc2 => PositiveAxisSignal::new(id, c, move |x: f64| {
            let s = sinc(x.ln() / (2.0 * PI));
            Complex64::new(x.powf(-c) * s * s, 0.0)
        }),
        EvaluatorKind::LogGaussHardy => PositiveAxisSignal::new(id, c, move |x: f64| {
            let u = x.ln();
            Complex64::new(x.powf(-c) * (-u * u).exp(), 0.0)
        }),
        EvaluatorKind::CauchyHardy => PositiveAxisSignal::new(id, c, move |x: f64| {
            let u = x.ln();
            Complex64::new(x.powf(-c) / (PI * (1.0 + u * u)), 0.0)
        }),
        EvaluatorKind::SpectrumDefined { spectrum } => match spectrum {
            SpectrumKind::Indicator { band } => PositiveAxisSignal::new(id, c, move |x: f64| {
                let u = x.ln();
                Complex64::new(x.powf(-c) * (band / PI) * sinc(band * u / PI), 0.0)
            }),
            SpectrumKind::Triangle { band } => PositiveAxisSignal::new(id, c, move |x: f64| {
                let s = sinc(band * x.ln() / (2.0 * PI));
                Complex64::new(x.powf(-c) * (band / (2.0 * PI)) * s * s, 0.0)
            }),
            SpectrumKind::TruncatedGauss { .. } => {
                // The dropped tail is below 2e-12 for the built-in band.
                PositiveAxisSignal::new(id, c, move |x: f64| {
                    let u = x.ln();
                    Complex64::new(x.powf(-c) * (-u * u).exp(), 0.0)
                })
            }
            SpectrumKind::ExpAbs { rate } => PositiveAxisSignal::new(id, c, move |x: f64| {
                let u = x.ln();
                Complex64::new(x.powf(-c) * rate / (PI * (rate * rate + u * u)), 0.0)
            }),
            SpectrumKind::Cauchy => PositiveAxisSignal::new(id, c, move |x: f64| {
                let u = x.ln();
                Complex64::new(x.powf(-c) * 0.5 * (-u.abs()).exp(), 0.0)
            }),
        },
    }
}

fn build_spectrum(entry: &CorpusEntry, c: f64) -> MellinSpectrum {
    let label = format!("{}-spectrum", entry.id);
    match entry.kind {
        EvaluatorKind::Exp => MellinSpectrum::closed(label, c, None, true, move |t| {
            special::gamma(Complex64::new(c, t))
        }),
        EvaluatorKind::Power { offset, lo, hi } => {
            MellinSpectrum::closed(label, c, None, true, move |t| {
                let s = Complex64::new(offset, t);
                if s.norm() < 1e-12 {
                    Complex64::new((hi / lo).ln(), 0.0)
                } else {
                    (s * hi.ln()).exp() / s - (s * lo.ln()).exp() / s
                }
            })
        }
        EvaluatorKind::LogGauss | EvaluatorKind::LogGaussHardy => {
            MellinSpectrum::closed(label, c, None, true, |t| {
                Complex64::new(PI.sqrt() * (-t * t / 4.0).exp(), 0.0)
            })
        }
        EvaluatorKind::Linc => MellinSpectrum::closed(label, c, Some(PI), false, |_| {
            Complex64::new(1.0, 0.0)
        }),
        EvaluatorKind::Sinc2 => MellinSpectrum::closed(label, c, Some(1.0), true, |t| {
            Complex64::new(2.0 * PI * (1.0 - t.abs()).max(0.0), 0.0)
        }),
        EvaluatorKind::CauchyHardy => MellinSpectrum::closed(label, c, None, true, |t| {
            Complex64::new((-t.abs()).exp(), 0.0)
        }),
        EvaluatorKind::SpectrumDefined { spectrum } => match spectrum {
            SpectrumKind::Indicator { band } => {
                MellinSpectrum::closed(label, c, Some(band), false, |_| Complex64::new(1.0, 0.0))
            }
            SpectrumKind::Triangle { band } => {
                MellinSpectrum::closed(label, c, Some(band), true, move |t| {
                    Complex64::new((1.0 - t.abs() / band).max(0.0), 0.0)
                })
            }
            SpectrumKind::TruncatedGauss { band } => {
                MellinSpectrum::closed(label, c, Some(band), true, |t| {
                    Complex64::new(PI.sqrt() * (-t * t / 4.0).exp(), 0.0)
                })
            }
            SpectrumKind::ExpAbs { rate } => {
                MellinSpectrum::closed(label, c, None, true, move |t| {
                    Complex64::new((-rate * t.abs()).exp(), 0.0)
                })
            }
            SpectrumKind::Cauchy => MellinSpectrum::closed(label, c, None, true, |t| {
                Complex64::new(1.0 / (1.0 + t * t), 0.0)
            }),
        },
    }
}
