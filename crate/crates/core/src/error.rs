use thiserror::Error;

use crate::instance::PackageId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A text-format error, tagged with the 1-based line it was found on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vehicle: {0}")]
    InvalidVehicle(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("instance has no clients")]
    NoClients,
    #[error("all clients coincide with the depot; the route-length normaliser is zero")]
    DegenerateStar,
    #[error("penalty factor must be positive and finite, got {0}")]
    InvalidPenalty(f64),
    #[error("client {0} appears more than once in the route")]
    DuplicateClient(usize),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("unknown package {0}")]
    UnknownPackage(PackageId),
    #[error("package {package} does not fit inside the container at the requested placement")]
    OutOfBounds { package: PackageId },
    #[error("package {package} overlaps package {other}")]
    Overlap { package: PackageId, other: PackageId },
    #[error("package {package} would exceed the vehicle weight capacity")]
    Overweight { package: PackageId },
    #[error("package {0} is already placed")]
    AlreadyPlaced(PackageId),
    #[error("the episode has already finished")]
    EpisodeDone,
    #[error("the episode is still running")]
    EpisodeNotDone,
    #[error("malformed solution: {0}")]
    MalformedSolution(String),
    #[error("solution is invalid: {0}")]
    InvalidSolution(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
