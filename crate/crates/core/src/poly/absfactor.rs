//! Absolute factor count from the Ruppert-Gao differential equation
//! `f (g_y - h_x) = f_y g - f_x h`.
//!
//! For squarefree `f` with `gcd(f, f_x) = 1` the solution space over the
//! rationals has dimension equal to the number of irreducible factors of `f`
//! over the complex numbers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::bi::{BiPoly, Var};
use super::gcd::{content_in, squarefree_part};
use super::linalg::{nullspace, rank_fraction_free};
use super::rat::{int, Rat};
use crate::error::{Error, Result};

/// Unknown layout: the `g` monomials first, then the `h` monomials.
pub(crate) struct RuppertGao {
    pub rows: Vec<Vec<Rat>>,
    pub g_monomials: Vec<(u32, u32)>,
    pub h_monomials: Vec<(u32, u32)>,
}

impl RuppertGao {
    pub fn cols(&self) -> usize {
        self.g_monomials.len() + self.h_monomials.len()
    }
}

pub(crate) fn ruppert_gao_matrix(f: &BiPoly) -> RuppertGao {
    let m = f.deg_x().max(0) as u32;
    let n = f.deg_y().max(0) as u32;
    let fx = f.derivative(Var::X);
    let fy = f.derivative(Var::Y);
    let mut g_monomials = Vec::new();
    for i in 0..m {
        for j in 0..=n {
            g_monomials.push((i, j));
        }
    }
    let mut h_monomials = Vec::new();
    for i in 0..=m {
        for j in 0..n {
            h_monomials.push((i, j));
        }
    }
    let mut columns: Vec<BiPoly> = Vec::new();
    for &(i, j) in &g_monomials {
        // g = x^i y^j contributes f g_y - f_y g
        let mono = BiPoly::monomial(int(1), i, j);
        let mut col = -&(&fy * &mono);
        if j > 0 {
            col = &col + &(f * &BiPoly::monomial(int(j as i64), i, j - 1));
        }
        columns.push(col);
    }
    for &(i, j) in &h_monomials {
        // h = x^i y^j contributes -f h_x + f_x h
        let mono = BiPoly::monomial(int(1), i, j);
        let mut col = &fx * &mono;
        if i > 0 {
            col = &col - &(f * &BiPoly::monomial(int(i as i64), i - 1, j));
        }
        columns.push(col);
    }
    let mut row_index: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for col in &columns {
        for (e, _) in col.terms() {
            let next = row_index.len();
            row_index.entry(e).or_insert(next);
        }
    }
    let mut rows = vec![vec![Rat::zero(); columns.len()]; row_index.len()];
    for (c, col) in columns.iter().enumerate() {
        for (e, v) in col.terms() {
            rows[row_index[&e]][c] = v.clone();
        }
    }
    RuppertGao {
        rows,
        g_monomials,
        h_monomials,
    }
}

fn solution_dimension(f: &BiPoly) -> usize {
    let (_, prim) = f.primitive();
    let sys = ruppert_gao_matrix(&prim);
    let ints: Vec<Vec<BigInt>> = sys
        .rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_integer()).collect())
        .collect();
    sys.cols() - rank_fraction_free(ints)
}

/// The `g` parts of a nullspace basis, for `f` squarefree with both
/// univariate contents trivial.
pub(crate) fn gao_basis(f: &BiPoly) -> Vec<BiPoly> {
    let sys = ruppert_gao_matrix(f);
    let cols = sys.cols();
    nullspace(sys.rows, cols)
        .into_iter()
        .map(|v| {
            BiPoly::from_terms(
                sys.g_monomials
                    .iter()
                    .zip(&v)
                    .map(|(&(i, j), c)| ((i, j), c.clone())),
            )
        })
        .collect()
}

/// Number of irreducible factors of `f` over the complex numbers.
///
/// `f` must be squarefree and involve both variables. Factors in a single
/// variable split into linear pieces and are counted by degree.
pub fn count_abs_factors(f: &BiPoly) -> Result<usize> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if f.is_univariate() {
        return Err(Error::UnivariateInput);
    }
    let sf = squarefree_part(f)?;
    if sf.total_degree() != f.total_degree() {
        return Err(Error::NotSquarefree);
    }
    let cy = content_in(&sf, Var::X);
    let rest = sf
        .exact_div(&BiPoly::from_uni(&cy, Var::Y))
        .expect("content divides");
    let cx = content_in(&rest, Var::Y);
    let core = rest
        .exact_div(&BiPoly::from_uni(&cx, Var::X))
        .expect("content divides");
    let mut count = cy.degree().max(0) as usize + cx.degree().max(0) as usize;
    if !core.is_constant() {
        count += solution_dimension(&core);
    }
    Ok(count)
}

/// Whether `f` is reducible over the complex numbers. Repeated factors and
/// univariate polynomials of degree at least two count as reducible.
pub fn is_absolutely_reducible(f: &BiPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let d = f.total_degree();
    if f.is_univariate() {
        return Ok(d >= 2);
    }
    let sf = squarefree_part(f)?;
    if sf.total_degree() != d {
        return Ok(true);
    }
    Ok(count_abs_factors(&sf)? >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(i64, u32, u32)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn basic_counts() {
        assert_eq!(count_abs_factors(&p(&[(1, 2, 0), (-1, 0, 2)])), Ok(2));
        assert_eq!(count_abs_factors(&p(&[(1, 2, 0), (1, 0, 2)])), Ok(2));
        assert_eq!(count_abs_factors(&p(&[(1, 1, 1), (-1, 0, 0)])), Ok(1));
        assert_eq!(count_abs_factors(&p(&[(1, 1, 1)])), Ok(2));
    }

    #[test]
    fn cusp_and_cubic_irreducible() {
        // y^2 - x^3 and a smooth cubic
        assert_eq!(count_abs_factors(&p(&[(1, 0, 2), (-1, 3, 0)])), Ok(1));
        assert_eq!(
            count_abs_factors(&p(&[(1, 0, 2), (-1, 3, 0), (1, 1, 0), (-1, 0, 0)])),
            Ok(1)
        );
    }

    #[test]
    fn content_factors_counted_by_degree() {
        // (y^2 + 1) (x - y) (x^2 + 2)
        let f = &(&p(&[(1, 0, 2), (1, 0, 0)]) * &p(&[(1, 1, 0), (-1, 0, 1)]))
            * &p(&[(1, 2, 0), (2, 0, 0)]);
        assert_eq!(count_abs_factors(&f), Ok(5));
    }

    #[test]
    fn errors() {
        assert_eq!(
            count_abs_factors(&p(&[(3, 0, 0)])),
            Err(Error::ConstantPolynomial)
        );
        assert_eq!(
            count_abs_factors(&p(&[(1, 2, 0)])),
            Err(Error::UnivariateInput)
        );
        let sq = p(&[(1, 1, 0), (1, 0, 1)]).pow(2);
        assert_eq!(count_abs_factors(&sq), Err(Error::NotSquarefree));
        assert_eq!(is_absolutely_reducible(&sq), Ok(true));
    }
}
