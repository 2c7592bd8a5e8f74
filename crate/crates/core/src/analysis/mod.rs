//! Locally constant functions on Q_p and the analysis built on them.

mod cwt;
mod fourier;
mod kozyrev;
mod test_function;
mod vladimirov;

pub use cwt::{
    admissibility_constant, cell_weight, cwt_forward, cwt_inverse, CwtGrid, GridSpec, KozyrevFrame, ScaleBlock,
    ScaleRange,
};
pub use fourier::{fourier, fourier_all, inverse_fourier_all};
pub use kozyrev::{kozyrev_atom, kozyrev_value, kozyrev_wavelet};
pub use test_function::{TestFunction, MAX_COSETS};
pub use vladimirov::vladimirov;

use thiserror::Error;

use crate::padic::PadicError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid window: support exponent {support}, resolution exponent {resolution}")]
    InvalidWindow { support: i32, resolution: i32 },
    #[error("window too large: {base}^{exponent} cosets")]
    TooLarge { base: u32, exponent: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("alpha must be a positive finite number, got {0}")]
    InvalidAlpha(f64),
    #[error("resolution p^{got} cannot resolve the wavelet; need at least p^{needed}")]
    InsufficientResolution { needed: i32, got: i32 },
    #[error("empty scale range")]
    EmptyGrid,
    #[error("admissibility constant must be positive and finite, got {0}")]
    InvalidAdmissibility(f64),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("json: {0}")]
    Json(String),
}
