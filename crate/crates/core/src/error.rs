use thiserror::Error;

use crate::rational::Rational;

/// A coincidence of Casimir eigenvalues `alpha(k, i) == alpha(l, j)` with `l < k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct ResonanceWitness {
    pub k: usize,
    pub l: usize,
    pub i: usize,
    pub j: usize,
}

impl std::fmt::Display for ResonanceWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(k={}, l={}, i={}, j={})", self.k, self.l, self.i, self.j)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("variable index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{0} requires a parity-homogeneous input")]
    MixedParity(&'static str),
    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: String, found: String },
    #[error("matrix does not preserve the orthosymplectic form")]
    NotOsp,
    #[error("element mixes graded components; decompose it first")]
    MixedComponent,
    #[error("operator of order {order} has no principal symbol of degree {k}")]
    OrderTooHigh { order: usize, k: usize },
    #[error("harmonic index s={s} out of range for degree k={k}")]
    HarmonicIndex { k: usize, s: usize },
    #[error("delta = {delta} is resonant up to degree {k_max}: {}", fmt_witnesses(.witnesses))]
    Resonant {
        delta: String,
        k_max: usize,
        witnesses: Vec<ResonanceWitness>,
    },
    #[error("vanishing denominator {pole} at the requested parameters")]
    Pole { pole: &'static str },
    #[error("symbol degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("superdimension d = 0 is not supported by this construction")]
    ZeroSuperdimension,
    #[error("construction only applies to superdimension d = 0 (found d = {0})")]
    NonZeroSuperdimension(i64),
    #[error("symbol is not homogeneous of a single degree")]
    NotHomogeneous,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn fmt_witnesses(w: &[ResonanceWitness]) -> String {
    w.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
}

impl Error {
    pub(crate) fn resonant(delta: &Rational, k_max: usize, witnesses: Vec<ResonanceWitness>) -> Self {
        Error::Resonant {
            delta: crate::rational::fmt_rational(delta),
            k_max,
            witnesses,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
