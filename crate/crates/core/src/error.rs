use thiserror::Error;

/// Errors raised by the engine's constructors and composition operators.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unknown quantale kind `{0}`")]
    UnknownKind(String),
    #[error("invalid t-norm tag `{0}` (expected godel, goguen or lukasiewicz)")]
    InvalidTNorm(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("product quantale needs at least one factor")]
    EmptyProduct,
    #[error("powerset base too large ({0} elements, at most 64 supported)")]
    PowersetTooLarge(usize),
    #[error("value `{value}` is not an element of quantale `{quantale}`")]
    ForeignValue { quantale: String, value: String },
    #[error("cannot parse `{text}` as an element of `{quantale}`")]
    BadValue { quantale: String, text: String },
    #[error("quantale mismatch: `{0}` vs `{1}`")]
    QuantaleMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("identity axiom fails at `{0}`")]
    IdentityAxiom(String),
    #[error("composition axiom fails at ({0}, {1}, {2})")]
    CompositionAxiom(String, String, String),
    #[error("bimodule condition fails at r={r}, r*={r_star}, f={f}, f*={f_star}")]
    Bimodule {
        r: String,
        r_star: String,
        f: String,
        f_star: String,
    },
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("lax map `{0}` is not verified lax")]
    UnverifiedLax(String),
    #[error("lax map `{map}` does not go {expected}")]
    LaxDirection { map: String, expected: String },
    #[error("result of an unverified lax-map override is invalid (suspect `{map}`): {cause}")]
    OverrideFailure { map: String, cause: Box<Error> },
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),
    #[error("{0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;
