//! Error types shared by every module of the crate.

use thiserror::Error;

/// Crate-wide `Result` type.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in a verification run.
#[derive(Error, Debug, Clone)]
pub enum Error {
    /// Adaptive quadrature exhausted its refinement budget before two
    /// successive estimates came within the requested tolerance.
    #[error("quadrature did not converge ({context}): last delta {last_delta:.3e} vs tolerance {tol:.3e}")]
    NonConvergent {
        context: String,
        last_delta: f64,
        tol: f64,
    },

    /// Norm exponent outside `[1, +inf]`.
    #[error("norm exponent must satisfy p >= 1, got {p}")]
    InvalidExponent { p: f64 },

    /// Mellin translation requires a strictly positive scale.
    #[error("translation scale must be positive, got {h}")]
    InvalidScale { h: f64 },

    /// A finite-difference stencil would probe nonpositive abscissas.
    #[error("finite-difference step {step} too large at abscissa {r} (stencil span {span})")]
    StepTooLarge { step: f64, r: f64, span: f64 },

    /// Log grid construction failed an invariant.
    #[error("invalid log grid: {reason}")]
    InvalidGrid { reason: String },

    /// Operation requires a compactly supported spectrum.
    #[error("spectrum has no declared compact support")]
    UnboundedSpectrum,

    /// No bandwidth estimate exists inside the sampled grid.
    #[error("spectrum does not fall below {eta:.3e} of its peak within the sampled grid")]
    NoDecay { eta: f64 },

    /// Reconstruction asked for a sample index that was not supplied.
    #[error("sample for node index {k} is missing")]
    MissingSample { k: i64 },

    /// Evaluation outside the positive real axis.
    #[error("abscissa must be positive, got {x}")]
    DomainError { x: f64 },

    /// Probe outside the validity strip of a polar function.
    #[error("theta = {theta} (with margin {margin}) leaves the strip |theta| < {strip_a}")]
    OutsideStrip {
        theta: f64,
        margin: f64,
        strip_a: f64,
    },

    /// Nikol'ski node sequence violates the mesh-ratio condition.
    #[error("node ratio t[{n}]/t[{m}] = {ratio} must strictly exceed e^(2 delta) = {required}", m = n - 1)]
    RatioViolation { n: i64, ratio: f64, required: f64 },

    /// Distance bound requested for a (p, q) pair outside the covered cases.
    #[error("no distance bound is available for p = {p}, q = {q}")]
    UnsupportedCombination { p: u8, q: f64 },

    /// A per-theta norm quadrature inside a Hardy norm failed.
    #[error("Hardy norm quadrature diverged at theta = {theta}")]
    NormDivergent { theta: f64 },

    /// Distance in the sup metric requires a continuity declaration.
    #[error("dist with q = infinity requires a spectrum declared continuous")]
    ContinuityRequired,

    /// Corpus lookup failed.
    #[error("unknown corpus id '{0}'")]
    UnknownCorpus(String),

    /// Weight index outside the member's declared validity range.
    #[error("corpus member '{id}' is not valid at c = {c} (valid range {lo}..{hi})")]
    InvalidWeight { id: String, c: f64, lo: f64, hi: f64 },

    /// Configuration file or flag validation failure.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// I/O wrapper for report writing and corpus loading.
    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
