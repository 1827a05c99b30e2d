//! Exact-arithmetic toolkit for sum-product experiments over the rationals.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] exact univariate/bivariate arithmetic, resultants, gcds,
//!   factorization over the rationals and absolute factor counting;
//! * [`classify`] degeneracy and compositeness deciders with certificates;
//! * [`spectrum`] certified search for reducible fibers `f - λ`;
//! * [`geometry`] the translated-curve family, incidence counts and
//!   two-curve intersection checks;
//! * [`explorer`] set generators, sumsets, image sets and scan harness.

pub mod classify;
pub mod error;
pub mod explorer;
pub mod geometry;
pub mod par;
pub mod poly;
pub mod spectrum;

pub use error::{Error, Result};
pub use par::Execution;
pub use poly::{BiPoly, FactorList, Rat, UniPoly, Var};

/// Default total-degree cap for the exponential factorization oracle.
pub const DEFAULT_DEGREE_CAP: usize = 8;
/// Default height for the small rational sweep of fiber candidates.
pub const DEFAULT_SWEEP_HEIGHT: u32 = 5;

/// Resource limits shared by the oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Limits {
    pub degree_cap: usize,
    pub sweep_height: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            degree_cap: DEFAULT_DEGREE_CAP,
            sweep_height: DEFAULT_SWEEP_HEIGHT,
        }
    }
}
