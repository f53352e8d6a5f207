use thiserror::Error;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no image given for class symbol `{0}`")]
    UnknownSymbol(String),
    #[error("negative L-exponent {0} where a polynomial in L was required")]
    NegativeExponent(String),
    #[error("class label `{0}` is not a scalar")]
    NonScalarLabel(String),
    #[error("series expansion would start at T^{0}")]
    NegativeOrder(i64),
    #[error("term with T^{0} in the numerator diverges as T goes to infinity")]
    DivergentTerm(i64),
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("missing open class on {0}")]
    MissingOpenClass(String),
    #[error("missing Euler characteristic on {0}")]
    MissingChi(String),
    #[error("no component {index} on stratum {stratum}")]
    NoSuchComponent { stratum: String, index: usize },
    #[error("stratum {0} has several components and higher strata, so their incidences are unknown")]
    AmbiguousIncidence(String),
    #[error("operation needs a surface complex, got dimension {0}")]
    BadDimension(usize),
    #[error("numerical relation {relation} fails at vertex {vertex}: {detail}")]
    ValidationFailure {
        vertex: String,
        relation: &'static str,
        detail: String,
    },
    #[error("twig contraction removed every vertex")]
    EverythingContracted,
    #[error("unsupported residue configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("pole comparison failed:\n{0}")]
    ComparisonFailure(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("degenerate arrangement: {0}")]
    DegenerateArrangement(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
