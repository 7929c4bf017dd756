use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input violates an operation's documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// J or g fail the almost-Hermitian identities at a point.
    #[error("structural error: {0}")]
    Structural(String),

    /// A structure form vanishes where it is needed as a normaliser.
    #[error("degenerate structure: {0}")]
    DegenerateStructure(String),

    /// The requested check does not apply to this background.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A mesh face is degenerate or the mesh is not a closed surface.
    #[error("mesh quality: {0}")]
    MeshQuality(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
