//! Complete factorization over the rationals.
//!
//! Univariate inputs go through Kronecker's method. Bivariate inputs are
//! split with the Ruppert-Gao solution space: for a generic solution `g`,
//! the eigenvalue polynomial `Res_x(f, g - t f_x)` has one root per absolute
//! factor, and its rational factors group those roots into the rational
//! factors of `f`.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::absfactor::gao_basis;
use super::bi::{BiPoly, Var};
use super::gcd::{content_in, gcd, squarefree_part};
use super::kronecker::factor_univariate;
use super::linalg::sylvester_resultant;
use super::rat::{fmt_rat, int, serde_rat, Rat};
use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::DEFAULT_DEGREE_CAP;

/// `constant * prod factor^multiplicity`, with every factor irreducible over
/// the rationals, primitive, and positive in its graded-lex leading term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorList {
    #[serde(with = "serde_rat")]
    pub constant: Rat,
    pub factors: Vec<(BiPoly, u32)>,
}

impl FactorList {
    pub fn expand(&self) -> BiPoly {
        self.factors
            .iter()
            .fold(BiPoly::constant(self.constant.clone()), |acc, (g, e)| {
                &acc * &g.pow(*e)
            })
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn count(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.count() == 1
    }
}

impl fmt::Display for FactorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.constant.is_one() || self.factors.is_empty() {
            parts.push(fmt_rat(&self.constant));
        }
        for (g, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("({g})"));
            } else {
                parts.push(format!("({g})^{e}"));
            }
        }
        write!(f, "{}", parts.join(" * "))
    }
}

/// [`factor_rational_capped`] with the default degree cap.
pub fn factor_rational(f: &BiPoly) -> Result<FactorList> {
    factor_rational_capped(f, DEFAULT_DEGREE_CAP)
}

/// Factor `f` over the rationals. Rejects inputs of total degree above `cap`.
pub fn factor_rational_capped(f: &BiPoly, cap: usize) -> Result<FactorList> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let degree = f.total_degree() as usize;
    if degree > cap {
        return Err(Error::DegreeCapExceeded { degree, cap });
    }
    let (content, prim) = f.primitive();
    let irreducibles = if prim.is_univariate() {
        univariate_irreducibles(&prim)
    } else {
        bivariate_irreducibles(&squarefree_part(&prim)?)?
    };
    let mut rest = prim;
    let mut factors = Vec::new();
    for q in irreducibles {
        let mut e = 0;
        while let Some(next) = rest.exact_div(&q) {
            rest = next;
            e += 1;
        }
        debug_assert!(e > 0);
        factors.push((q, e));
    }
    if !rest.is_constant() {
        return Err(Error::DecompositionFailed(format!(
            "factorization of {f} left cofactor {rest}"
        )));
    }
    factors.sort_by_cached_key(|(g, _)| (g.total_degree(), g.to_text()));
    let out = FactorList {
        constant: content * rest.constant_term(),
        factors,
    };
    if out.expand() != *f {
        return Err(Error::DecompositionFailed(format!(
            "re-expansion of {f} failed"
        )));
    }
    Ok(out)
}

fn univariate_irreducibles(f: &BiPoly) -> Vec<BiPoly> {
    let var = if f.deg_x() > 0 { Var::X } else { Var::Y };
    let p = f.coeffs_in(var);
    let uni = UniPoly::from_coeffs(p.iter().map(|c| c.coeff(0)).collect());
    lift_uni(&uni, var)
}

fn lift_uni(p: &UniPoly, var: Var) -> Vec<BiPoly> {
    if p.degree() < 1 {
        return Vec::new();
    }
    let (_, fs) = factor_univariate(p);
    fs.into_iter()
        .map(|(g, _)| BiPoly::from_uni(&g, var).normalized())
        .collect()
}

/// Irreducible factors of a squarefree bivariate polynomial.
fn bivariate_irreducibles(s: &BiPoly) -> Result<Vec<BiPoly>> {
    let cy = content_in(s, Var::X);
    let rest = s
        .exact_div(&BiPoly::from_uni(&cy, Var::Y))
        .expect("content divides");
    let cx = content_in(&rest, Var::Y);
    let core = rest
        .exact_div(&BiPoly::from_uni(&cx, Var::X))
        .expect("content divides");
    let mut out = lift_uni(&cy, Var::Y);
    out.extend(lift_uni(&cx, Var::X));
    if !core.is_constant() {
        out.extend(gao_split(&core.normalized())?);
    }
    Ok(out)
}

/// A specialization point where `s(x, y0)` keeps its x-degree and stays
/// squarefree.
fn good_fiber(s: &BiPoly) -> (Rat, UniPoly) {
    let m = s.deg_x();
    for k in 0i64.. {
        for y0 in [k, -k] {
            let y0 = int(y0);
            let u = s.specialize_y(&y0);
            if u.degree() == m && u.gcd(&u.derivative()).degree() == 0 {
                return (y0, u);
            }
        }
    }
    unreachable!("a squarefree polynomial has finitely many bad fibers")
}

/// Rational factors of `s`: squarefree, both univariate contents trivial,
/// positive x-degree.
fn gao_split(s: &BiPoly) -> Result<Vec<BiPoly>> {
    let basis = gao_basis(s);
    let r = basis.len();
    if r <= 1 {
        return Ok(vec![s.clone()]);
    }
    let sx = s.derivative(Var::X);
    let (y0, s0) = good_fiber(s);
    let sx0 = sx.specialize_y(&y0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..32 {
        let spread = 2 + attempt as i64;
        let g = basis.iter().fold(BiPoly::zero(), |acc, b| {
            let c = rng.gen_range(-spread..=spread);
            &acc + &b.scale(&int(c))
        });
        if g.is_zero() {
            continue;
        }
        let g0 = g.specialize_y(&y0);
        let rt = eigen_polynomial(&s0, &g0, &sx0);
        if rt.degree() != r as isize {
            continue;
        }
        let (_, phis) = factor_univariate(&rt);
        let mut parts = Vec::with_capacity(phis.len());
        for (phi, _) in &phis {
            let d = phi.degree() as u32;
            let mut big_phi = BiPoly::zero();
            for (l, c) in phi.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = &g.pow(l as u32) * &sx.pow(d - l as u32);
                big_phi = &big_phi + &term.scale(c);
            }
            parts.push(gcd(s, &big_phi));
        }
        let prod = parts.iter().fold(BiPoly::one(), |acc, p| &acc * p);
        if parts.iter().all(|p| !p.is_constant()) && prod.normalized() == *s {
            return Ok(parts);
        }
    }
    Err(Error::DecompositionFailed(format!(
        "no separating solution found for {s}"
    )))
}

/// Squarefree part of `Res_x(s0, g0 - t s0')` as a polynomial in `t`.
fn eigen_polynomial(s0: &UniPoly, g0: &UniPoly, sx0: &UniPoly) -> UniPoly {
    let m = s0.degree() as usize;
    let p: Vec<UniPoly> = s0
        .coeffs()
        .iter()
        .map(|c| UniPoly::constant(c.clone()))
        .collect();
    // formal degree m - 1 in x, so the resultant is taken consistently for every t
    let q: Vec<UniPoly> = (0..m)
        .map(|i| UniPoly::from_coeffs(vec![g0.coeff(i), -sx0.coeff(i)]))
        .collect();
    sylvester_resultant(&p, &q).squarefree_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(i64, u32, u32)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn difference_of_squares() {
        let fl = factor_rational(&p(&[(1, 2, 0), (-1, 0, 2)])).unwrap();
        let fs: Vec<String> = fl.factors.iter().map(|(g, _)| g.to_text()).collect();
        assert_eq!(fs, vec!["x + y", "x - y"]);
        assert!(fl.constant.is_one());
    }

    #[test]
    fn sum_of_squares_irreducible() {
        let fl = factor_rational(&p(&[(1, 2, 0), (1, 0, 2)])).unwrap();
        assert!(fl.is_irreducible());
    }

    #[test]
    fn monomial_product() {
        let fl = factor_rational(&p(&[(1, 1, 1)])).unwrap();
        let fs: Vec<String> = fl.factors.iter().map(|(g, _)| g.to_text()).collect();
        assert_eq!(fs, vec!["x", "y"]);
    }

    #[test]
    fn conjugate_pairs_group() {
        // (x^2 - 2y^2)(x - y^2 + 1)^2 * 3/2: x^2 - 2y^2 has two absolute
        // factors but is irreducible over the rationals
        let a = p(&[(1, 2, 0), (-2, 0, 2)]);
        let b = p(&[(1, 1, 0), (-1, 0, 2), (1, 0, 0)]);
        let f = (&a * &b.pow(2)).scale(&super::super::rat::rat(3, 2));
        let fl = factor_rational(&f).unwrap();
        assert_eq!(fl.expand(), f);
        assert_eq!(fl.factors.len(), 2);
        assert_eq!(fl.count(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let f = p(&[(1, 9, 0), (1, 0, 1)]);
        assert_eq!(
            factor_rational(&f),
            Err(Error::DegreeCapExceeded { degree: 9, cap: 8 })
        );
    }
}
