//! Degeneracy and compositeness with certificates.
//!
//! `f` is degenerate when `f = Q(αx + βy)` and composite when `f = Q(g)`
//! with `deg Q >= 2`. Compositeness is decided through fiber reducibility:
//! every fiber of a composite polynomial splits over the complex numbers,
//! while a non-composite polynomial of degree `k` has fewer than `k`
//! reducible fibers.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::{is_absolutely_reducible, serde_rat, BiPoly, Rat, UniPoly, Var};
use crate::DEFAULT_DEGREE_CAP;

/// The linear form `alpha x + beta y`, scaled so the first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    #[serde(with = "serde_rat")]
    pub alpha: Rat,
    #[serde(with = "serde_rat")]
    pub beta: Rat,
}

impl LinearForm {
    pub fn new(alpha: Rat, beta: Rat) -> Option<Self> {
        if !alpha.is_zero() {
            Some(LinearForm {
                beta: beta / &alpha,
                alpha: Rat::one(),
            })
        } else if !beta.is_zero() {
            Some(LinearForm {
                alpha: Rat::zero(),
                beta: Rat::one(),
            })
        } else {
            None
        }
    }

    pub fn to_poly(&self) -> BiPoly {
        &BiPoly::x().scale(&self.alpha) + &BiPoly::y().scale(&self.beta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DecompositionKind {
    Degenerate { form: LinearForm },
    Composite,
}

/// A certificate `f = outer(inner)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub outer: UniPoly,
    pub inner: BiPoly,
    pub kind: DecompositionKind,
}

impl Decomposition {
    pub fn expand(&self) -> BiPoly {
        BiPoly::compose_outer(&self.outer, &self.inner)
    }
}

/// Data for the shift reconstruction: `f(x, a_i) = Q(x + b_i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftSamples {
    pub pairs: Vec<(Rat, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CompositeVerdict {
    /// Every sampled fiber is reducible.
    Composite {
        #[serde(with = "serde_rat::vec")]
        witnesses: Vec<Rat>,
    },
    /// `f - certificate` is irreducible over the complex numbers.
    NotComposite {
        #[serde(with = "serde_rat")]
        certificate: Rat,
    },
}

impl CompositeVerdict {
    pub fn is_composite(&self) -> bool {
        matches!(self, CompositeVerdict::Composite { .. })
    }
}

fn require_nonconstant(f: &BiPoly) -> Result<()> {
    if f.is_constant() {
        Err(Error::ConstantPolynomial)
    } else {
        Ok(())
    }
}

/// Swap the variables when `deg_x f < deg_y f`.
pub fn normalize_orientation(f: &BiPoly) -> Result<(BiPoly, bool)> {
    require_nonconstant(f)?;
    if f.deg_x() < f.deg_y() {
        Ok((f.swap_vars(), true))
    } else {
        Ok((f.clone(), false))
    }
}

/// `Some(Q, L)` with `f = Q(L)` for a linear form `L`, or `None`.
pub fn is_degenerate(f: &BiPoly) -> Result<Option<Decomposition>> {
    require_nonconstant(f)?;
    let fx = f.derivative(Var::X);
    let fy = f.derivative(Var::Y);
    let form = if fy.is_zero() {
        LinearForm::new(Rat::one(), Rat::zero())
    } else if fx.is_zero() {
        LinearForm::new(Rat::zero(), Rat::one())
    } else {
        // f = Q(x + beta y) forces f_y = beta f_x
        let (key, cx) = {
            let (k, c) = fx.leading_term().expect("nonzero");
            (k, c.clone())
        };
        let beta = fy.coeff(key.0, key.1) / cx;
        if fy != fx.scale(&beta) {
            return Ok(None);
        }
        LinearForm::new(Rat::one(), beta)
    }
    .expect("nonzero form");
    let outer = if form.alpha.is_zero() {
        f.specialize_x(&Rat::zero())
    } else {
        f.specialize_y(&Rat::zero())
    };
    let dec = Decomposition {
        outer,
        inner: form.to_poly(),
        kind: DecompositionKind::Degenerate { form },
    };
    if dec.expand() != *f {
        return Ok(None);
    }
    Ok(Some(dec))
}

/// Default fiber schedule `λ_j = j` for `j = 1..=k`.
pub fn default_fiber_samples(k: usize) -> Vec<Rat> {
    (1..=k as i64)
        .map(|j| Rat::from_integer(j.into()))
        .collect()
}

/// Decide compositeness with the default schedule and degree cap.
pub fn is_composite(f: &BiPoly) -> Result<CompositeVerdict> {
    let k = f.total_degree().max(0) as usize;
    is_composite_with(
        f,
        &default_fiber_samples(k),
        Execution::default(),
        DEFAULT_DEGREE_CAP,
    )
}

/// Decide compositeness from the given fiber values, which must number at
/// least `deg f` and be distinct.
pub fn is_composite_with(
    f: &BiPoly,
    samples: &[Rat],
    exec: Execution,
    cap: usize,
) -> Result<CompositeVerdict> {
    require_nonconstant(f)?;
    let k = f.total_degree() as usize;
    if k > cap {
        return Err(Error::DegreeCapExceeded { degree: k, cap });
    }
    let mut lambdas: Vec<Rat> = Vec::with_capacity(k);
    for l in samples {
        if !lambdas.contains(l) {
            lambdas.push(l.clone());
        }
    }
    if lambdas.len() < k.max(1) {
        return Err(Error::InsufficientSamples {
            have: lambdas.len(),
            need: k,
        });
    }
    lambdas.truncate(k);
    if k < 2 {
        return Ok(CompositeVerdict::NotComposite {
            certificate: lambdas[0].clone(),
        });
    }
    if f.is_univariate() {
        return Ok(CompositeVerdict::Composite { witnesses: lambdas });
    }
    let outcomes = par::map(exec, &lambdas, |l| {
        is_absolutely_reducible(&(f - &BiPoly::constant(l.clone())))
    });
    for (l, r) in lambdas.iter().zip(outcomes) {
        if !r? {
            return Ok(CompositeVerdict::NotComposite {
                certificate: l.clone(),
            });
        }
    }
    Ok(CompositeVerdict::Composite { witnesses: lambdas })
}

/// Monic `r`-th root of a monic polynomial, if it exists over the rationals.
fn monic_root(p: &UniPoly, r: usize) -> Option<UniPoly> {
    let d = p.degree() as usize;
    if !d.is_multiple_of(r) {
        return None;
    }
    let e = d / r;
    // reversed series F(u) = u^d p(1/u) has F_0 = 1; G = F^(1/r)
    let f: Vec<Rat> = (0..=d).map(|k| p.coeff(d - k)).collect();
    let alpha1 = Rat::new(1.into(), (r as i64).into()) + Rat::one();
    let mut g = vec![Rat::one()];
    for n in 1..=e {
        let mut acc = Rat::zero();
        for k in 1..=n {
            let w = &alpha1 * Rat::from_integer((k as i64).into())
                - Rat::from_integer((n as i64).into());
            acc += w * &f[k] * &g[n - k];
        }
        g.push(acc / Rat::from_integer((n as i64).into()));
    }
    let root = UniPoly::from_coeffs(g.into_iter().rev().collect());
    (root.pow(r as u32) == *p).then_some(root)
}

/// Write the top form as `c h^r`.
fn top_form_root(fk: &BiPoly, k: usize, r: usize) -> Option<(Rat, BiPoly)> {
    let s = k / r;
    let phi = UniPoly::from_coeffs((0..=k as u32).map(|i| fk.coeff(i, k as u32 - i)).collect());
    let c = phi.leading_coeff();
    let psi = monic_root(&phi.scale(&c.recip()), r)?;
    let h = BiPoly::from_terms(
        psi.coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| ((i as u32, (s - i) as u32), a.clone())),
    );
    Some((c, h))
}

/// `f = Q(g)` with `deg Q = r`, `g(0, 0) = 0`, if one exists.
fn decompose_with_degree(f: &BiPoly, r: usize) -> Option<Decomposition> {
    let k = f.total_degree() as usize;
    let s = k / r;
    let (c, h) = top_form_root(&f.homogeneous_part(k), k, r)?;
    let denom = h
        .pow(r as u32 - 1)
        .scale(&Rat::from_integer((r as i64).into()));
    let mut g = h.clone();
    for j in 1..s {
        let target = f.homogeneous_part(k - j).scale(&c.recip());
        let have = g.pow(r as u32).homogeneous_part(k - j);
        let num = &target - &have;
        if !num.is_zero() {
            g = &g + &num.exact_div(&denom)?;
        }
    }
    // g-adic expansion with constant digits
    let mut rest = f.clone();
    let mut q = vec![Rat::zero(); r + 1];
    for i in (0..=r).rev() {
        let gi = g.pow(i as u32);
        let deg = (i * s) as isize;
        if rest.total_degree() == deg {
            let lead = rest.homogeneous_part(i * s);
            let top = gi.homogeneous_part(i * s);
            let (key, tc) = top.leading_term()?;
            let qi = lead.coeff(key.0, key.1) / tc;
            rest = &rest - &gi.scale(&qi);
            q[i] = qi;
        } else if rest.total_degree() > deg {
            return None;
        }
    }
    if !rest.is_zero() {
        return None;
    }
    let dec = Decomposition {
        outer: UniPoly::from_coeffs(q),
        inner: g,
        kind: DecompositionKind::Composite,
    };
    (dec.expand() == *f).then_some(dec)
}

/// A decomposition `f = Q(g)` with `deg Q >= 2` as large as possible, so
/// the inner polynomial is not composite.
pub fn find_decomposition(f: &BiPoly) -> Result<Option<Decomposition>> {
    require_nonconstant(f)?;
    let k = f.total_degree() as usize;
    if f.is_univariate() && k >= 2 {
        let var = if f.deg_x() > 0 { Var::X } else { Var::Y };
        let outer = match var {
            Var::X => f.specialize_y(&Rat::zero()),
            Var::Y => f.specialize_x(&Rat::zero()),
        };
        return Ok(Some(Decomposition {
            outer,
            inner: BiPoly::var(var),
            kind: DecompositionKind::Composite,
        }));
    }
    let mut divisors: Vec<usize> = (2..=k).filter(|r| k.is_multiple_of(*r)).collect();
    divisors.reverse();
    Ok(divisors
        .into_iter()
        .find_map(|r| decompose_with_degree(f, r)))
}

/// Strip outer polynomials until the core is not composite. Returns the core
/// and the outer chain, outermost first: `f = chain[0](chain[1](...(core)))`.
pub fn decompose_fully(f: &BiPoly) -> Result<(BiPoly, Vec<UniPoly>)> {
    if is_degenerate(f)?.is_some() {
        return Err(Error::HypothesisViolated(format!("{f} is degenerate")));
    }
    let mut core = f.clone();
    let mut chain = Vec::new();
    while is_composite(&core)?.is_composite() {
        let dec =
            find_decomposition(&core)?.ok_or_else(|| Error::DecompositionFailed(core.to_text()))?;
        chain.push(dec.outer);
        core = dec.inner;
    }
    Ok((core, chain))
}

/// Recompose a chain returned by [`decompose_fully`].
pub fn recompose(core: &BiPoly, chain: &[UniPoly]) -> BiPoly {
    chain
        .iter()
        .rev()
        .fold(core.clone(), |acc, q| BiPoly::compose_outer(q, &acc))
}

/// Recover `g = x + b(y)` with `f = Q(g)` from samples `f(x, a_i) = Q(x + b_i)`
/// by comparing the coefficients of `x^(m-1)`, `m = deg Q`.
pub fn reconstruct_shift_decomposition(
    f: &BiPoly,
    q: &UniPoly,
    samples: &ShiftSamples,
) -> Result<Option<BiPoly>> {
    require_nonconstant(f)?;
    let k = f.total_degree() as usize;
    let need = k * k + 1;
    let mut ords: Vec<&Rat> = samples.pairs.iter().map(|(a, _)| a).collect();
    ords.sort();
    ords.dedup();
    if ords.len() < need {
        return Err(Error::InsufficientSamples {
            have: ords.len(),
            need,
        });
    }
    for (a, b) in &samples.pairs {
        if f.specialize_y(a) != q.shift(b) {
            return Err(Error::HypothesisViolated(format!(
                "f(x, {a}) differs from Q(x + {b})"
            )));
        }
    }
    let m = q.degree();
    if m < 1 || f.deg_x() != m {
        return Ok(None);
    }
    let m = m as usize;
    let top = &f.x_coeffs()[m - 1];
    let qm = q.coeff(m);
    let scale = (&qm * Rat::from_integer((m as i64).into())).recip();
    let b = (top - &UniPoly::constant(q.coeff(m - 1))).scale(&scale);
    let g = &BiPoly::x() + &BiPoly::from_uni(&b, Var::Y);
    Ok((BiPoly::compose_outer(q, &g) == *f).then_some(g))
}

/// Everything `classify` reports about one polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub input: BiPoly,
    pub oriented: BiPoly,
    pub swapped: bool,
    pub degenerate: Option<Decomposition>,
    pub composite: CompositeVerdict,
    pub decomposition: Option<Decomposition>,
    pub core: Option<BiPoly>,
    pub chain: Vec<UniPoly>,
}

pub fn classify(f: &BiPoly, exec: Execution, cap: usize) -> Result<ClassifyReport> {
    let (oriented, swapped) = normalize_orientation(f)?;
    let degenerate = is_degenerate(f)?;
    let k = f.total_degree() as usize;
    let composite = is_composite_with(f, &default_fiber_samples(k), exec, cap)?;
    let decomposition = if composite.is_composite() {
        find_decomposition(f)?
    } else {
        None
    };
    let (core, chain) = if degenerate.is_some() {
        (None, Vec::new())
    } else {
        let (core, chain) = decompose_fully(f)?;
        (Some(core), chain)
    };
    Ok(ClassifyReport {
        input: f.clone(),
        oriented,
        swapped,
        degenerate,
        composite,
        decomposition,
        core,
        chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(
            normalize_orientation(&p("x + y^2")).unwrap(),
            (p("y + x^2"), true)
        );
        assert_eq!(normalize_orientation(&p("x y")).unwrap(), (p("x y"), false));
        assert_eq!(
            normalize_orientation(&p("x^2 + y")).unwrap(),
            (p("x^2 + y"), false)
        );
        assert_eq!(
            normalize_orientation(&p("7")),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn degenerate_examples() {
        let d = is_degenerate(&p("(x+2y)^3 + (x + 2y)")).unwrap().unwrap();
        assert_eq!(d.outer, UniPoly::from_ints(&[0, 1, 0, 1]));
        assert_eq!(d.inner, p("x + 2y"));
        assert!(is_degenerate(&p("x y")).unwrap().is_none());
        assert!(is_degenerate(&p("x + y^2")).unwrap().is_none());
        let d = is_degenerate(&p("y^2 + 3")).unwrap().unwrap();
        assert_eq!(d.inner, p("y"));
    }

    #[test]
    fn composite_examples() {
        assert!(is_composite(&p("(x+y)^2")).unwrap().is_composite());
        assert_eq!(
            is_composite(&p("x y")).unwrap(),
            CompositeVerdict::NotComposite {
                certificate: Rat::one()
            }
        );
        assert!(!is_composite(&p("x^2 + y^2")).unwrap().is_composite());
    }

    #[test]
    fn full_decomposition_examples() {
        let (core, chain) = decompose_fully(&p("(x y)^2 + 3")).unwrap();
        assert_eq!(core, p("x y"));
        assert_eq!(chain, vec![UniPoly::from_ints(&[3, 0, 1])]);
        let (core, chain) = decompose_fully(&p("x y")).unwrap();
        assert_eq!(core, p("x y"));
        assert!(chain.is_empty());
        let f = p("((x^2 + y)^2 + 1)^2");
        let (core, chain) = decompose_fully(&f).unwrap();
        assert_eq!(core, p("x^2 + y"));
        assert_eq!(recompose(&core, &chain), f);
    }

    #[test]
    fn shift_reconstruction_examples() {
        let pairs = |f: fn(i64) -> i64| ShiftSamples {
            pairs: (0..40)
                .map(|a| (Rat::from_integer(a.into()), Rat::from_integer(f(a).into())))
                .collect(),
        };
        let g = reconstruct_shift_decomposition(
            &p("(x+y)^2"),
            &UniPoly::from_ints(&[0, 0, 1]),
            &pairs(|a| a),
        );
        assert_eq!(g, Ok(Some(p("x + y"))));
        let g = reconstruct_shift_decomposition(
            &p("(x+y^2)^3"),
            &UniPoly::from_ints(&[0, 0, 0, 1]),
            &pairs(|a| a * a),
        );
        assert_eq!(
            g.map(|o| o.map(|g| g.to_text())),
            Ok(Some("y^2 + x".into()))
        );
        let g = reconstruct_shift_decomposition(
            &p("x y"),
            &UniPoly::from_ints(&[0, 0, 1]),
            &pairs(|a| a),
        );
        assert!(matches!(g, Err(Error::HypothesisViolated(_))));
        let few = ShiftSamples {
            pairs: vec![(Rat::one(), Rat::one())],
        };
        assert_eq!(
            reconstruct_shift_decomposition(&p("(x+y)^2"), &UniPoly::from_ints(&[0, 0, 1]), &few),
            Err(Error::InsufficientSamples { have: 1, need: 5 })
        );
    }
}
