//! Certified search for reducible fibers.
//!
//! σ(f) is the set of λ for which `f - λ` is reducible over the complex
//! numbers. Candidates come from rational critical values, a small-height
//! sweep and user input; every reported λ carries a certificate that can be
//! checked again independently. Completeness is not claimed.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::classify::default_fiber_samples;
use crate::classify::is_composite_with;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::linalg::sylvester_resultant;
use crate::poly::{
    count_abs_factors, factor_rational_capped, gcd, rational_roots, serde_rat, BiPoly, FactorList,
    Rat, UniPoly, Var,
};
use crate::{DEFAULT_DEGREE_CAP, DEFAULT_SWEEP_HEIGHT};

/// Why `f - λ` is reducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SigmaCertificate {
    /// A factorization over the rationals with at least two factors
    /// (counted with multiplicity).
    Rational { factors: FactorList },
    /// Irreducible over the rationals but with this many absolutely
    /// irreducible factors (at least two).
    Absolute { absolute_factors: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaHit {
    #[serde(with = "serde_rat")]
    pub lambda: Rat,
    pub certificate: SigmaCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaReport {
    pub degree_k: usize,
    pub found: Vec<SigmaHit>,
    pub candidate_count: usize,
    pub stein_bound_respected: bool,
    /// Set only when the bound fails: whether `f` is composite, which is the
    /// only way the bound may fail.
    pub composite_cross_check: Option<bool>,
}

impl SigmaReport {
    pub fn lambdas(&self) -> Vec<Rat> {
        self.found.iter().map(|h| h.lambda.clone()).collect()
    }
}

/// Coefficients of `f` in `x`, each a polynomial in `y` embedded in the
/// `(y, λ)` plane as the first variable.
fn lift_to_y_lambda(f: &BiPoly) -> Vec<BiPoly> {
    f.x_coeffs()
        .iter()
        .map(|c| BiPoly::from_uni(c, Var::X))
        .collect()
}

/// `f(x, y + c x)`.
fn shear(f: &BiPoly, c: &Rat) -> BiPoly {
    f.substitute(&BiPoly::x(), &(&BiPoly::y() + &BiPoly::x().scale(c)))
}

/// Smallest `c = 0, 1, 2, ...` making every top form nonzero at `(1, c)`,
/// so each sheared polynomial has a constant leading coefficient in `x`.
fn shear_parameter(polys: &[&BiPoly]) -> Rat {
    for c in 0i64.. {
        let c = Rat::from_integer(c.into());
        let ok = polys.iter().all(|p| {
            let top = p.homogeneous_part(p.total_degree().max(0) as usize);
            !top.eval(&Rat::one(), &c).is_zero()
        });
        if ok {
            return c;
        }
    }
    unreachable!()
}

/// `Res_x(f - λ, g)` as a polynomial in `(y, λ)` (stored as `(x, y)`).
fn eliminate_x_with_lambda(f: &BiPoly, g: &BiPoly) -> BiPoly {
    let mut p = lift_to_y_lambda(f);
    if p.is_empty() {
        p.push(BiPoly::zero());
    }
    p[0] = &p[0] - &BiPoly::y();
    let q = lift_to_y_lambda(g);
    if q.len() == 1 {
        // g constant in x: Res = g^(deg_x f)
        return q[0].pow((p.len() - 1) as u32);
    }
    sylvester_resultant(&p, &q)
}

fn univariate_critical_eliminant(p: &UniPoly) -> UniPoly {
    // Res_t(p - λ, p') over Q[λ]
    let mut a: Vec<UniPoly> = p
        .coeffs()
        .iter()
        .map(|c| UniPoly::constant(c.clone()))
        .collect();
    a[0] = &a[0] - &UniPoly::var();
    let dp = p.derivative();
    if dp.degree() < 1 {
        // p' is a nonzero constant or p is linear: no critical points
        return UniPoly::one();
    }
    let b: Vec<UniPoly> = dp
        .coeffs()
        .iter()
        .map(|c| UniPoly::constant(c.clone()))
        .collect();
    sylvester_resultant(&a, &b)
}

/// Rational critical values of `f`: λ with `f - λ = f_x = f_y = 0` solvable.
/// Some spurious values may be included; none are missed.
pub fn critical_values(f: &BiPoly) -> Result<Vec<Rat>> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if f.is_univariate() {
        let var = if f.deg_x() > 0 { Var::X } else { Var::Y };
        let p = match var {
            Var::X => f.specialize_y(&Rat::zero()),
            Var::Y => f.specialize_x(&Rat::zero()),
        };
        return Ok(rational_roots(&univariate_critical_eliminant(&p)));
    }
    let fx = f.derivative(Var::X);
    let fy = f.derivative(Var::Y);
    let h = gcd(&fx, &fy);
    let u = fx.exact_div(&h).expect("gcd divides");
    let v = fy.exact_div(&h).expect("gcd divides");
    let c = shear_parameter(&[f, &h, &u, &v]);
    let (fs, hs, us, vs) = (shear(f, &c), shear(&h, &c), shear(&u, &c), shear(&v, &c));
    let mut out = BTreeSet::new();
    if !us.is_constant() && !vs.is_constant() {
        // isolated critical points
        let r1 = eliminate_x_with_lambda(&fs, &us);
        let r2 = crate::poly::resultant_in(&us, &vs, Var::X)?;
        if r2.degree() >= 1 {
            let a: Vec<UniPoly> = r1.coeffs_in(Var::X);
            let b: Vec<UniPoly> = r2
                .coeffs()
                .iter()
                .map(|c| UniPoly::constant(c.clone()))
                .collect();
            let e = if a.len() <= 1 {
                a.first()
                    .cloned()
                    .unwrap_or_default()
                    .pow(r2.degree() as u32)
            } else {
                sylvester_resultant(&a, &b)
            };
            out.extend(rational_roots(&e));
        }
    }
    if !hs.is_constant() {
        // curves of critical points: f is constant along each component
        let r = eliminate_x_with_lambda(&fs, &hs);
        let content = r
            .coeffs_in(Var::X)
            .iter()
            .fold(UniPoly::zero(), |acc, c| acc.gcd(c));
        out.extend(rational_roots(&content));
    }
    Ok(out.into_iter().collect())
}

/// All reduced `p/q` with `|p| <= height` and `1 <= q <= height`.
pub fn sweep(height: u32) -> Vec<Rat> {
    let h = height as i64;
    let mut out = BTreeSet::new();
    for q in 1..=h.max(1) {
        for p in -h..=h {
            if p.gcd(&q) == 1 || p == 0 {
                out.insert(Rat::new(BigInt::from(p), BigInt::from(q)));
            }
        }
    }
    out.into_iter().collect()
}

/// Critical values, the default sweep and nothing else.
pub fn sigma_candidates(f: &BiPoly) -> Result<Vec<Rat>> {
    sigma_candidates_with(f, DEFAULT_SWEEP_HEIGHT, &[], DEFAULT_DEGREE_CAP)
}

pub fn sigma_candidates_with(
    f: &BiPoly,
    height: u32,
    extra: &[Rat],
    cap: usize,
) -> Result<Vec<Rat>> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let degree = f.total_degree() as usize;
    if degree > cap {
        return Err(Error::DegreeCapExceeded { degree, cap });
    }
    let mut out: BTreeSet<Rat> = critical_values(f)?.into_iter().collect();
    out.extend(sweep(height));
    out.extend(extra.iter().cloned());
    Ok(out.into_iter().collect())
}

/// A certificate for the reducibility of `f - λ`, or `None` when the fiber
/// is irreducible over the complex numbers.
pub fn test_fiber(f: &BiPoly, lambda: &Rat, cap: usize) -> Result<Option<SigmaCertificate>> {
    let fiber = f - &BiPoly::constant(lambda.clone());
    if fiber.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let factors = factor_rational_capped(&fiber, cap)?;
    if factors.count() >= 2 {
        return Ok(Some(SigmaCertificate::Rational { factors }));
    }
    let absolute_factors = if fiber.is_univariate() {
        fiber.total_degree() as usize
    } else {
        count_abs_factors(&fiber)?
    };
    Ok((absolute_factors >= 2).then_some(SigmaCertificate::Absolute { absolute_factors }))
}

/// Check a hit again from scratch.
pub fn revalidate(f: &BiPoly, hit: &SigmaHit) -> Result<bool> {
    let fiber = f - &BiPoly::constant(hit.lambda.clone());
    Ok(match &hit.certificate {
        SigmaCertificate::Rational { factors } => {
            factors.expand() == fiber
                && factors.count() >= 2
                && factors.factors.iter().all(|(g, _)| !g.is_constant())
        }
        SigmaCertificate::Absolute { absolute_factors } => {
            let n = if fiber.is_univariate() {
                fiber.total_degree() as usize
            } else {
                count_abs_factors(&fiber)?
            };
            n == *absolute_factors && n >= 2
        }
    })
}

/// Test every candidate and report the reducible fibers.
pub fn sigma_scan(
    f: &BiPoly,
    candidates: &[Rat],
    exec: Execution,
    cap: usize,
) -> Result<SigmaReport> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let k = f.total_degree() as usize;
    if k > cap {
        return Err(Error::DegreeCapExceeded { degree: k, cap });
    }
    let distinct: Vec<Rat> = candidates
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let results = par::map(exec, &distinct, |l| test_fiber(f, l, cap));
    let mut found = Vec::new();
    for (lambda, r) in distinct.iter().zip(results) {
        if let Some(certificate) = r? {
            found.push(SigmaHit {
                lambda: lambda.clone(),
                certificate,
            });
        }
    }
    let stein_bound_respected = found.len() < k;
    let composite_cross_check = if stein_bound_respected {
        None
    } else {
        Some(is_composite_with(f, &default_fiber_samples(k), exec, cap)?.is_composite())
    };
    Ok(SigmaReport {
        degree_k: k,
        found,
        candidate_count: distinct.len(),
        stein_bound_respected,
        composite_cross_check,
    })
}

/// The grid `sums × values` with the rows `sums × (values ∩ σ)` removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrunedGrid {
    #[serde(with = "serde_rat::vec")]
    pub sums: Vec<Rat>,
    #[serde(with = "serde_rat::vec")]
    pub values: Vec<Rat>,
    #[serde(with = "serde_rat::vec")]
    pub removed_values: Vec<Rat>,
    pub removed_points: usize,
    pub retained_points: usize,
}

impl PrunedGrid {
    pub fn points(&self) -> impl Iterator<Item = (&Rat, &Rat)> + '_ {
        self.sums
            .iter()
            .flat_map(move |s| self.values.iter().map(move |v| (s, v)))
    }
}

pub fn remove_sigma_rows(sums: &[Rat], values: &[Rat], report: &SigmaReport) -> PrunedGrid {
    let sums: Vec<Rat> = sums
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let sigma: BTreeSet<Rat> = report.lambdas().into_iter().collect();
    let all: BTreeSet<Rat> = values.iter().cloned().collect();
    let (removed, kept): (Vec<Rat>, Vec<Rat>) = all.into_iter().partition(|v| sigma.contains(v));
    PrunedGrid {
        removed_points: sums.len() * removed.len(),
        retained_points: sums.len() * kept.len(),
        sums,
        values: kept,
        removed_values: removed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rat};

    fn p(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&a| rat(a, 1)).collect()
    }

    #[test]
    fn candidates_contain_critical_values() {
        let c = critical_values(&p("x y")).unwrap();
        assert_eq!(c, ints(&[0]));
        assert_eq!(critical_values(&p("x^2 + y^2")).unwrap(), ints(&[0]));
        assert!(critical_values(&p("x + y")).unwrap().is_empty());
        assert_eq!(
            sigma_candidates_with(&p("x + y"), 1, &[rat(7, 2)], 8).unwrap(),
            vec![rat(-1, 1), rat(0, 1), rat(1, 1), rat(7, 2)]
        );
    }

    #[test]
    fn critical_values_of_composite_and_cubic() {
        // (x y)^2: critical curve x y = 0 with value 0
        assert_eq!(critical_values(&p("x^2 y^2")).unwrap(), ints(&[0]));
        // x^3 - 3x + y^2: critical points (±1, 0), values ∓2; projection may
        // add spurious values, never drop true ones
        let c = critical_values(&p("x^3 - 3x + y^2")).unwrap();
        assert!(c.contains(&rat(-2, 1)) && c.contains(&rat(2, 1)));
    }

    #[test]
    fn scan_examples() {
        let r = sigma_scan(&p("x y"), &ints(&[-1, 0, 1]), Execution::Sequential, 8).unwrap();
        assert_eq!(r.lambdas(), ints(&[0]));
        assert!(r.stein_bound_respected);
        match &r.found[0].certificate {
            SigmaCertificate::Rational { factors } => assert_eq!(factors.count(), 2),
            other => panic!("unexpected {other:?}"),
        }
        let r = sigma_scan(&p("x^2 + y^2"), &ints(&[0, 1]), Execution::Sequential, 8).unwrap();
        assert_eq!(r.lambdas(), ints(&[0]));
        assert_eq!(
            r.found[0].certificate,
            SigmaCertificate::Absolute {
                absolute_factors: 2
            }
        );
        let r = sigma_scan(&p("(x + y)^2"), &ints(&[1, 4]), Execution::Sequential, 8).unwrap();
        assert_eq!(r.found.len(), 2);
        assert!(!r.stein_bound_respected);
        assert_eq!(r.composite_cross_check, Some(true));
        for h in &r.found {
            assert!(revalidate(&p("(x + y)^2"), h).unwrap());
        }
    }

    #[test]
    fn pruning_examples() {
        let empty = sigma_scan(&p("x y"), &ints(&[5]), Execution::Sequential, 8).unwrap();
        let g = remove_sigma_rows(&ints(&[2, 3]), &ints(&[1, 6]), &empty);
        assert_eq!((g.retained_points, g.removed_points), (4, 0));
        let zero = sigma_scan(&p("x y"), &ints(&[0]), Execution::Sequential, 8).unwrap();
        let g = remove_sigma_rows(&ints(&[2, 3]), &ints(&[0, 1]), &zero);
        assert_eq!((g.retained_points, g.removed_points), (2, 2));
        assert_eq!(g.points().count(), 2);
    }
}
