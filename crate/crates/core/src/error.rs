use std::fmt;

/// Which precondition of the compatible-line constructor failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hypothesis {
    NotTrivalent,
    /// Quartet `(i j | k l)` of the tree violates the hull-edge condition.
    Incompatible([usize; 4]),
    /// The subdivision induced by this internal vertex is not a maximal triangulation.
    NotMaximal {
        node: usize,
    },
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::NotTrivalent => write!(f, "line is not trivalent"),
            Hypothesis::Incompatible(q) => {
                write!(f, "incompatible (quartet {}{}|{}{})", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)
            }
            Hypothesis::NotMaximal { node } => {
                write!(f, "subdivision at vertex v{node} is not maximal")
            }
        }
    }
}

fn one_based(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("empty term list")]
    EmptyTerms,
    #[error("invalid support set: {0}")]
    InvalidSupport(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate cell: points {} are collinear", one_based(.0))]
    DegenerateCell([usize; 3]),
    #[error("not a face: cell {} is not a triangle of the subdivision", one_based(.0))]
    NotAFace([usize; 3]),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("non-positive edge length on edge {0}")]
    NonPositiveLength(usize),
    #[error("not a Plücker vector: quartet {} attains its minimum once", one_based(.0))]
    NotPlucker([usize; 4]),
    #[error("line not in Pi_2")]
    NotInPi2,
    #[error("configuration size mismatch: expected {expected} points, got {got}")]
    ConfigurationSize { expected: usize, got: usize },
    #[error("no rainbow triangle")]
    NoRainbowTriangle,
    #[error("hypotheses violated: {0}")]
    HypothesesViolated(Hypothesis),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("no matching")]
    NoMatching,
    #[error("n = {0} is too large (limit {1})")]
    TooLarge(usize, usize),
    #[error("not compatible: quartet {} has both segments as diagonals", one_based(.0))]
    NotCompatible([usize; 4]),
    #[error("no strict-maximal subdivision found after {0} draws")]
    NoMaximalSubdivision(usize),
    #[error("edge-length shrinking did not reach the secondary cone after {0} halvings")]
    ShrinkLimit(usize),
    #[error("perturbation not generic")]
    PerturbationNotGeneric,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyTerms => "empty_terms",
            Error::InvalidSupport(_) => "invalid_support",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DegenerateCell(_) => "degenerate_cell",
            Error::NotAFace(_) => "not_a_face",
            Error::InvalidTree(_) => "invalid_tree",
            Error::NonPositiveLength(_) => "non_positive_length",
            Error::NotPlucker(_) => "not_plucker",
            Error::NotInPi2 => "not_in_pi2",
            Error::ConfigurationSize { .. } => "configuration_size",
            Error::NoRainbowTriangle => "no_rainbow_triangle",
            Error::HypothesesViolated(_) => "hypotheses_violated",
            Error::VerificationFailed(_) => "verification_failed",
            Error::NoMatching => "no_matching",
            Error::TooLarge(..) => "too_large",
            Error::NotCompatible(_) => "not_compatible",
            Error::NoMaximalSubdivision(_) => "no_maximal_subdivision",
            Error::ShrinkLimit(_) => "shrink_limit",
            Error::PerturbationNotGeneric => "perturbation_not_generic",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
