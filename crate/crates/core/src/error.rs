use thiserror::Error;

/// Malformed textual input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a rational number: {0:?}")]
    Number(String),
    #[error("expected four comma-separated components, got {0:?}")]
    Class(String),
    #[error("unrecognized witness descriptor {0:?}")]
    Witness(String),
    #[error("unrecognized collection descriptor {0:?}")]
    Collection(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Euler pairing requires a variety whose numerical K-group is generated by powers of H")]
    EulerUnavailable,
    #[error("central charge vanishes")]
    ZeroCharge,
    #[error("charge vanishes on the skyscraper class")]
    Degenerate,
    #[error("charge has the wrong orientation after normalization")]
    NotGeometric,
    #[error("kernel of the central charge is not two-dimensional")]
    DegenerateKernel,
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("no lattice class qualifies in the enumeration box")]
    EmptyBox,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("mutation index {0} out of range 1..=3")]
    BadIndex(usize),
    #[error("classes do not form a basis")]
    SingularBasis,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("no Ext data tabulated for {0}")]
    UnsupportedPair(String),
    #[error("empty witness corpus")]
    EmptyCorpus,
    #[error("central charge passes through zero near t = {0}")]
    PathThroughZero(f64),
    #[error("{0}")]
    Failure(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
