use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("lattice needs a perfect-square point count, got {0}")]
    NotPerfectSquare(usize),

    #[error("window reaches t = {t}, outside the sampled domain [{lo}, {hi}]")]
    WindowOutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("no pixel darker than threshold {threshold} in {source_name}")]
    EmptyImage { threshold: u8, source_name: String },

    #[error("distance matrix is empty")]
    EmptyDistanceMatrix,

    #[error("malformed filtration: {0}")]
    MalformedFiltration(String),

    #[error("interval has death {death} < birth {birth}")]
    DeathBeforeBirth { birth: f64, death: f64 },

    #[error("diagram has no finite off-diagonal point in dimension {0}")]
    EmptyDiagram(usize),

    #[error("covariance is singular: point with zero persistence and delta = 0")]
    SingularCovariance,

    #[error("cannot compare a {left} vector with a {right} vector")]
    MethodMismatch { left: String, right: String },

    #[error("diagram contains a point with infinite death; exclude or cap essential classes first")]
    InfiniteDeath,

    #[error("brute-force matching supports at most {limit} points per diagram, got {got}")]
    TooManyPoints { limit: usize, got: usize },

    #[error("experiment check failed: {0}")]
    Assertion(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
