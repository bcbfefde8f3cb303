//! Spectral analysis of quarter-plane coined quantum walks through CMV
//! matrices.
//!
//! The crate is layered bottom-up:
//!
//! * [`coin`]: 4×4 quantum coins, their derived phases and the maps to
//!   Verblunsky parameters.
//! * [`cmv`]: truncated five-diagonal CMV operators.
//! * [`opuc`]: CMV-ordered Laurent orthonormal polynomials (first and second
//!   kind).
//! * [`spectral`]: Carathéodory functions, radial limits, point masses and
//!   spectral measures.
//! * [`walk`]: direct simulation of the Type I / Type II quarter-plane walks.
//! * [`limits`]: closed-form limit measures and localization predicates.
//! * [`cli`]: the `cgmv` command-line front end.

pub mod cli;
pub mod cmv;
pub mod coin;
pub mod error;
pub mod limits;
pub mod opuc;
pub mod spectral;
pub mod walk;

pub use num_complex::Complex64;

pub use error::{Error, Result};

/// Sign with `sgn(0) = 0`.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
