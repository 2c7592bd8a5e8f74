use std::fmt;

use padic_wavelet::analysis::AnalysisError;
use padic_wavelet::haar::HaarError;
use padic_wavelet::hierarchic::HierarchicError;
use padic_wavelet::padic::PadicError;
use padic_wavelet::qudit::QuditError;
use padic_wavelet::simplex::SimplexError;

/// Exit code 2 for bad input, 3 when a numeric precondition fails.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

fn classify(numeric: bool, e: impl fmt::Display) -> CliError {
    if numeric {
        CliError::Numeric(e.to_string())
    } else {
        CliError::Invalid(e.to_string())
    }
}

fn padic_numeric(e: &PadicError) -> bool {
    matches!(e, PadicError::InsufficientPrecision { .. })
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        classify(padic_numeric(&e), e)
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        let numeric = match &e {
            AnalysisError::InsufficientResolution { .. } => true,
            AnalysisError::Padic(p) => padic_numeric(p),
            _ => false,
        };
        classify(numeric, e)
    }
}

impl From<HaarError> for CliError {
    fn from(e: HaarError) -> Self {
        let numeric = match &e {
            HaarError::PrecisionExhausted { .. } => true,
            HaarError::Padic(p) => padic_numeric(p),
            _ => false,
        };
        classify(numeric, e)
    }
}

impl From<HierarchicError> for CliError {
    fn from(e: HierarchicError) -> Self {
        let numeric = matches!(&e, HierarchicError::ZeroNorm);
        classify(numeric, e)
    }
}

impl From<QuditError> for CliError {
    fn from(e: QuditError) -> Self {
        let numeric = matches!(&e, QuditError::Unnormalized(_));
        classify(numeric, e)
    }
}

impl From<SimplexError> for CliError {
    fn from(e: SimplexError) -> Self {
        classify(false, e)
    }
}
