//! Exact-arithmetic and Monte Carlo toolkit for k-star decompositions of
//! random d-regular graphs.
//!
//! The crate has three layers:
//!
//! * exact arithmetic (`polyexact`, `thresholds`, `moments`, `laplace`):
//!   big-rational polynomials, Sturm root isolation, power-product
//!   comparisons, and the closed-form moment/landscape quantities, all
//!   decided without floating point;
//! * randomized models (`pairing`, `decompose`, `experiments`): the
//!   configuration model, an orientation-based decomposition solver, and
//!   seeded Monte Carlo campaigns;
//! * presentation (`highprec`, `cli`): high-precision decimal rendering
//!   (display only; never used for pass/fail decisions) and the `stardec`
//!   command-line binary.

pub mod cli;
pub mod combin;
pub mod decompose;
pub mod experiments;
pub mod highprec;
pub mod laplace;
pub mod moments;
pub mod pairing;
pub mod polyexact;
pub mod thresholds;

/// Crate-wide error type. Domain violations carry a human-readable message;
/// structural errors (zero polynomial, non-isolating interval) get their own
/// variants so callers can branch on them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Root counting on the zero polynomial has no well-defined answer.
    #[error("indeterminate root set: zero polynomial")]
    ZeroPolynomial,
    /// `refine_root` was given an interval that does not isolate exactly one root.
    #[error("interval does not isolate exactly one root (contains {0})")]
    NotIsolating(usize),
    /// Interval construction with lo >= hi.
    #[error("invalid interval: lower endpoint must be strictly below upper")]
    EmptyInterval,
    /// A parameter fell outside an operation's documented domain.
    #[error("{0}")]
    Domain(String),
    /// An enumeration guard tripped (configurable caps on oracle sizes).
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    /// Rejection sampling gave up.
    #[error("rejection sampling exhausted {tries} tries without a simple graph")]
    TriesExhausted { tries: u64 },
    /// The decomposition search hit its node or time cap.
    #[error("search cap exceeded after {nodes} nodes")]
    SearchCap { nodes: u64 },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    /// Graph file syntax or consistency problem, with its 1-based line number.
    #[error("graph parse error at line {line}: {msg}")]
    GraphParse { line: usize, msg: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Derives an independent RNG seed from a master seed and a stream index,
/// so parallel work items stay deterministic regardless of scheduling.
/// Splitmix64 finalizer over the master xored with a spread stream id.
pub(crate) fn mix_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ 0x9E3779B97F4A7C15u64.wrapping_mul(stream.wrapping_add(1));
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
