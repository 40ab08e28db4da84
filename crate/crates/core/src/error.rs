//! Crate-wide error type and `Result` alias.

use thiserror::Error;

/// Errors produced by the exact and numerical layers.
///
/// Variants that correspond to contract violations carry fixed messages so
/// callers (and the CLI) can rely on them; variants that wrap runtime
/// failures carry context strings.
#[derive(Debug, Error)]
pub enum Error {
    /// A polynomial or point set with no terms where at least one is needed.
    #[error("empty support")]
    EmptySupport,

    /// A volume or smoothness query on a cell that is not full-dimensional.
    #[error("degenerate cell")]
    DegenerateCell,

    /// A tropical polynomial with fewer than two distinct exponents has no
    /// non-smoothness locus.
    #[error("no corner locus")]
    NoCornerLocus,

    /// The complexified valuation of the zero series is undefined.
    #[error("w undefined at 0")]
    WUndefinedAtZero,

    /// A point cloud operation received no points.
    #[error("empty cloud")]
    EmptyCloud,

    /// Monte-Carlo order estimation did not round cleanly to integers.
    #[error("ambiguous order: point too close to amoeba")]
    AmbiguousOrder,

    /// Pants decompositions exist only for smooth tropical hypersurfaces.
    #[error("pants decomposition requires a smooth tropical hypersurface")]
    PantsRequiresSmooth,

    /// A query point was asserted to lie on a complex but does not.
    #[error("point does not lie on the tropical hypersurface")]
    NotOnHypersurface,

    /// Newton-polygon root solving hit tied leading exponents.
    #[error("non-generic; refine manually")]
    NonGeneric,

    /// A lifting value was requested for a point outside the lifting domain.
    #[error("lifting does not cover point {0}")]
    LiftingGap(String),

    /// Mismatched dimensions or other structurally invalid arguments.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative numerical routine failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Text input that does not match the documented file formats.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
