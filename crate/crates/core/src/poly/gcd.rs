//! Bivariate gcd through the recursive view `Q[y][x]` and a primitive
//! polynomial remainder sequence.

use super::bi::{BiPoly, Var};
use super::uni::UniPoly;
use crate::error::{Error, Result};

type Recursive = Vec<UniPoly>;

fn trim(mut v: Recursive) -> Recursive {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn content(v: &[UniPoly]) -> UniPoly {
    v.iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c))
}

fn divide_content(v: &[UniPoly], c: &UniPoly) -> Recursive {
    v.iter()
        .map(|a| a.exact_div(c).expect("content divides every coefficient"))
        .collect()
}

/// Pseudo-remainder of `a` by `b` (both nonzero, coefficients in `Q[y]`).
fn prem(a: &[UniPoly], b: &[UniPoly]) -> Recursive {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut a: Recursive = a.to_vec();
    while !a.is_empty() && a.len() > db {
        let shift = a.len() - 1 - db;
        let la = a.last().unwrap().clone();
        let mut next: Recursive = a.iter().map(|c| c * lcb).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(&la * bc);
        }
        a = trim(next);
    }
    a
}

/// Content of `f` viewed as a polynomial in `main`: the monic gcd of its
/// coefficients, a univariate polynomial in the other variable.
pub fn content_in(f: &BiPoly, main: Var) -> UniPoly {
    content(&f.coeffs_in(main))
}

/// Greatest common divisor, normalised to a primitive integer polynomial
/// with positive graded-lex leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(f: &BiPoly, g: &BiPoly) -> BiPoly {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    let fc = f.x_coeffs();
    let gc = g.x_coeffs();
    let cf = content(&fc);
    let cg = content(&gc);
    let c = cf.gcd(&cg);
    let mut a = divide_content(&fc, &cf);
    let mut b = divide_content(&gc, &cg);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let pp = loop {
        if b.len() == 1 {
            break vec![UniPoly::one()];
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            break b;
        }
        let rc = content(&r);
        a = b;
        b = divide_content(&r, &rc);
    };
    let pp = BiPoly::from_coeffs_in(Var::X, &pp);
    let c = BiPoly::from_uni(&c, Var::Y);
    (&c * &pp).normalized()
}

/// Product of the distinct irreducible factors of `f`, normalised.
///
/// Uses `f / gcd(f, f_x, f_y)`: a simple factor divides both partials only
/// when it is constant.
pub fn squarefree_part(f: &BiPoly) -> Result<BiPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(BiPoly::one());
    }
    let g = gcd(&gcd(f, &f.derivative(Var::X)), &f.derivative(Var::Y));
    Ok(f.exact_div(&g).expect("gcd divides").normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(i64, u32, u32)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let common = p(&[(1, 1, 1), (-3, 0, 1), (2, 0, 0)]);
        let u = p(&[(1, 2, 0), (1, 0, 1)]);
        let v = p(&[(1, 1, 0), (-1, 0, 2), (5, 0, 0)]);
        assert_eq!(gcd(&(&common * &u), &(&common * &v)), common.normalized());
        assert_eq!(gcd(&u, &v), BiPoly::one());
    }

    #[test]
    fn gcd_with_content_in_y() {
        // y (x + 1) and y^2 x: gcd is y
        let a = p(&[(1, 1, 1), (1, 0, 1)]);
        let b = p(&[(1, 1, 2)]);
        assert_eq!(gcd(&a, &b), BiPoly::y());
    }

    #[test]
    fn squarefree_examples() {
        let s = p(&[(1, 1, 0), (1, 0, 1)]);
        assert_eq!(squarefree_part(&s.pow(2)).unwrap(), s);
        assert_eq!(squarefree_part(&p(&[(1, 1, 1)])).unwrap(), p(&[(1, 1, 1)]));
        // (x - y)^2 (x + y) written out
        let f = p(&[(1, 3, 0), (-1, 2, 1), (-1, 1, 2), (1, 0, 3)]);
        assert_eq!(squarefree_part(&f).unwrap(), p(&[(1, 2, 0), (-1, 0, 2)]));
        assert_eq!(squarefree_part(&BiPoly::zero()), Err(Error::ZeroPolynomial));
    }
}
