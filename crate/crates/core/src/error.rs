use crate::lattice::Hex;

/// Everything that can go wrong in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("region is empty")]
    EmptyRegion,
    #[error("site {0:?} lies outside the configured region")]
    OutsideRegion(Hex),
    #[error("malformed quad: {0}")]
    MalformedQuad(String),
    #[error("degenerate annulus: {0}")]
    DegenerateAnnulus(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("region has {sites} sites, limit is {limit}")]
    RegionTooLarge { sites: usize, limit: usize },
    #[error("sampling budget exhausted after {attempts} attempts ({accepted} accepted)")]
    BudgetExhausted { attempts: u64, accepted: u64 },
    #[error("no samples")]
    NoSamples,
    #[error("faces undefined: {0}")]
    FacesUndefined(String),
    #[error("interior sites missing from configuration")]
    InteriorMissing,
    #[error("not an ordered family: {0}")]
    NotOrdered(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExhausted { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}
