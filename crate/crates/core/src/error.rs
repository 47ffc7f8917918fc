use thiserror::Error;

/// Errors raised by the combinatorial model and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra parameters n={n}, m={m}: n must be at least 1")]
    InvalidAlgebra { n: i64, m: i64 },

    #[error("vertex {vertex} is outside [{lo}, {hi}]")]
    VertexOutOfRange { vertex: i32, lo: i32, hi: i32 },

    #[error("no factor path from {v} to {u}: need s(u) = s(v) and u <= v")]
    NoFactorPath { u: i32, v: i32 },

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("quadruple {0} is not an index of an indecomposable complex")]
    NotInIndexSet(String),

    #[error("invalid homotopy string: {0}")]
    InvalidString(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("membership condition fails: {0}")]
    Membership(String),

    #[error("invalid vertex of Gamma: {0}")]
    InvalidGammaVertex(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("not a chain map: {0}")]
    NotAChainMap(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("rigidity construction failed: {0}")]
    Rigidity(String),

    #[error("oracle certification failed: {0}")]
    Certification(String),

    #[error("unsupported document version {0}")]
    UnsupportedVersion(u32),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
