use stabp3::Error;

/// Exit status 1: malformed input.
pub const EXIT_INPUT: u8 = 1;
/// Exit status 2: a numeric procedure failed.
pub const EXIT_NUMERIC: u8 = 2;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::BadInput(_)
            | Error::BadIndex(_)
            | Error::BadParams(_)
            | Error::MissingParam(_)
            | Error::UnsupportedPair(_)
            | Error::EmptyCorpus => EXIT_INPUT,
            Error::EulerUnavailable
            | Error::ZeroCharge
            | Error::Degenerate
            | Error::NotGeometric
            | Error::DegenerateKernel
            | Error::EmptyBox
            | Error::SingularBasis
            | Error::PathThroughZero(_)
            | Error::Failure(_) => EXIT_NUMERIC,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<stabp3::ParseError> for CliError {
    fn from(e: stabp3::ParseError) -> Self {
        Self::input(e.to_string())
    }
}
