use num_traits::Zero;

use super::bi::{BiPoly, Var};
use super::linalg::sylvester_resultant;
use super::rat::Rat;
use super::uni::UniPoly;
use crate::error::{Error, Result};

/// Resultant of two univariate polynomials: the determinant of the Sylvester
/// matrix with the rows of `p` above the rows of `q`.
///
/// A zero argument gives a zero resultant; two zero arguments are rejected.
pub fn resultant(p: &UniPoly, q: &UniPoly) -> Result<Rat> {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => Err(Error::BothZero),
        (true, false) | (false, true) => Ok(Rat::zero()),
        _ => Ok(sylvester_resultant(p.coeffs(), q.coeffs())),
    }
}

/// Eliminate `var` from `f` and `g`: the resultant of both viewed as
/// polynomials in `var`, returned as a polynomial in the other variable.
///
/// `resultant_in(xy - 1, x - y, X)` is `1 - y^2` under the row convention of
/// [`resultant`].
pub fn resultant_in(f: &BiPoly, g: &BiPoly, var: Var) -> Result<UniPoly> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => Err(Error::BothZero),
        (true, false) | (false, true) => Ok(UniPoly::zero()),
        _ => Ok(sylvester_resultant(&f.coeffs_in(var), &g.coeffs_in(var))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::int;

    #[test]
    fn univariate_examples() {
        // by hand: det [[1, -1], [1, 1]] = 2
        let r = resultant(&UniPoly::from_ints(&[-1, 1]), &UniPoly::from_ints(&[1, 1])).unwrap();
        assert_eq!(r, int(2));
        let r = resultant(
            &UniPoly::from_ints(&[0, 0, 1]),
            &UniPoly::from_ints(&[0, 1]),
        )
        .unwrap();
        assert!(r.is_zero());
        assert_eq!(
            resultant(&UniPoly::zero(), &UniPoly::zero()),
            Err(Error::BothZero)
        );
    }

    #[test]
    fn constant_argument_is_power() {
        // res(c, q) = c^deg q
        let r = resultant(&UniPoly::from_ints(&[3]), &UniPoly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(r, int(9));
    }

    #[test]
    fn bivariate_elimination() {
        // substitution oracle: x = y in xy - 1 gives y^2 - 1, so the
        // eliminant must be a constant multiple of it
        let f = BiPoly::from_int_terms(&[(1, 1, 1), (-1, 0, 0)]);
        let g = BiPoly::from_int_terms(&[(1, 1, 0), (-1, 0, 1)]);
        let r = resultant_in(&f, &g, Var::X).unwrap();
        assert_eq!(r, UniPoly::from_ints(&[1, 0, -1]));
    }
}
