//! Exact polynomial arithmetic over the rationals and the oracles built on it.

mod absfactor;
mod bi;
mod factor;
mod gcd;
pub(crate) mod intfactor;
mod kronecker;
pub(crate) mod linalg;
mod parse;
mod rat;
mod resultant;
mod roots;
mod uni;

pub use absfactor::{count_abs_factors, is_absolutely_reducible};
pub use bi::{BiPoly, Var};
pub use factor::{factor_rational, factor_rational_capped, FactorList};
pub use gcd::{content_in, gcd, squarefree_part};
pub use kronecker::factor_univariate;
pub use parse::{parse_poly, poly_from_json, poly_to_json};
pub use rat::{parse_rat, rat, rat_to_f64, Rat};
pub use resultant::{resultant, resultant_in};
pub use roots::rational_roots;
pub use uni::UniPoly;

pub(crate) use rat::{fmt_rat, serde_rat};
