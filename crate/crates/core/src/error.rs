use thiserror::Error;

/// Errors raised while constructing or verifying chain-geometry objects.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    #[error("not a field: {0}")]
    NotAField(String),

    #[error("subfield is not proper: it equals the whole ring")]
    NotProper,

    #[error("element {0} is not a unit")]
    NotAUnit(String),

    #[error("pair ({0}, {1}) is not admissible")]
    NotAdmissible(String, String),

    #[error("point enumeration methods disagree: orbit gives {orbit} points, admissible scan gives {scan}")]
    MethodDisagreement { orbit: usize, scan: usize },

    #[error("connected components have different diameters: {0:?}")]
    DiameterMismatch(Vec<u32>),

    #[error("orbit exceeded the cap of {0} elements")]
    OrbitCapExceeded(usize),

    #[error("annihilator of {0} is not a cyclic submodule with an admissible generator")]
    PerpNotCyclic(String),

    #[error("map is not a ring {kind}: {reason}")]
    NotAHomomorphism { kind: &'static str, reason: String },

    #[error("subfield condition violated: no unit u' with K^phi = u'^-1 K' u'")]
    SubfieldConditionViolated,

    #[error("wrong map kind: expected {0}")]
    WrongMapKind(&'static str),

    #[error("block set is not invariant: {0}")]
    NotInvariant(String),

    #[error("residue must be taken at R(1,0)")]
    NotAtInfinity,

    #[error("regulus not found: {0}")]
    RegulusNotFound(String),

    #[error("derived structure is not an affine plane: {0}")]
    NotAPlane(String),
}

pub type Result<T> = std::result::Result<T, Error>;
