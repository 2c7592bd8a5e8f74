//! p-adic numbers, p-adic wavelet analysis and hierarchic quantum states.
//!
//! * [`padic`]: exact Q_p arithmetic at fixed digit precision.
//! * [`analysis`]: locally constant test functions on Q_p, the p-adic Fourier
//!   transform, the Kozyrev wavelet, the Vladimirov operator and the
//!   continuous wavelet transform over the p-adic affine group.
//! * [`haar`]: the Haar pyramid in real and in exact p-adic arithmetic.
//! * [`hierarchic`]: p-ary trees of component wave functions.
//! * [`qudit`]: a dense state-vector simulator for p-level registers.
//! * [`simplex`]: geometry and SVG rendering of the recursive simplex partition.

pub mod analysis;
pub mod haar;
pub mod hierarchic;
pub mod padic;
pub mod qudit;
pub mod simplex;
