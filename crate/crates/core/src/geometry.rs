//! The translated-curve family `T_(a,b)(x) = f(x - a, b)`, its incidences with
//! the grid `(A+A) × f(A,A)`, and intersections of two translated fibers.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::explorer::{image_set, sumset};
use crate::par::{self, Execution};
use crate::poly::{
    factor_rational, gcd, rational_roots, resultant_in, serde_rat, BiPoly, FactorList, Rat,
    UniPoly, Var,
};
use crate::spectrum::{remove_sigma_rows, SigmaReport};

/// Ascending coefficients of a translated curve; equal keys are equal curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveKey(pub Vec<Rat>);

impl CurveKey {
    pub fn from_poly(p: &UniPoly) -> Self {
        CurveKey(p.coeffs().to_vec())
    }

    pub fn to_poly(&self) -> UniPoly {
        UniPoly::from_coeffs(self.0.clone())
    }

    pub fn eval(&self, s: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * s + c)
    }
}

impl Serialize for CurveKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rat::vec::serialize(&self.0, s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFamily {
    pub classes: BTreeMap<CurveKey, Vec<(Rat, Rat)>>,
    /// The `b` in `A` with `f(x, b)` identically zero.
    pub removed_b: Vec<Rat>,
    pub set_size: usize,
}

impl CurveFamily {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.values().map(Vec::len).max().unwrap_or(0)
    }

    /// `|A|` minus the removed rows.
    pub fn retained_size(&self) -> usize {
        self.set_size - self.removed_b.len()
    }
}

fn distinct(a: &[Rat]) -> Vec<Rat> {
    a.iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn build_family(f: &BiPoly, a: &[Rat], exec: Execution) -> CurveFamily {
    let a = distinct(a);
    let rows: Vec<UniPoly> = a.iter().map(|b| f.specialize_y(b)).collect();
    let removed_b: Vec<Rat> = a
        .iter()
        .zip(&rows)
        .filter(|(_, r)| r.is_zero())
        .map(|(b, _)| b.clone())
        .collect();
    let kept: Vec<(Rat, UniPoly)> = a
        .iter()
        .cloned()
        .zip(rows)
        .filter(|(_, r)| !r.is_zero())
        .collect();
    let n = a.len();
    let keys = par::map_range(exec, n * kept.len(), |idx| {
        let (ai, bi) = (idx / kept.len().max(1), idx % kept.len().max(1));
        let (b, row) = &kept[bi];
        let key = CurveKey::from_poly(&row.shift(&-a[ai].clone()));
        (key, (a[ai].clone(), b.clone()))
    });
    let mut classes: BTreeMap<CurveKey, Vec<(Rat, Rat)>> = BTreeMap::new();
    for (key, pair) in keys {
        classes.entry(key).or_default().push(pair);
    }
    for members in classes.values_mut() {
        members.sort();
    }
    CurveFamily {
        classes,
        removed_b,
        set_size: n,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassBoundVerdict {
    pub max_class_size: usize,
    pub class_size_bound: usize,
    pub class_count: usize,
    /// `|A'|^2 / k^3`.
    #[serde(with = "serde_rat")]
    pub class_count_floor: Rat,
    pub within_bounds: bool,
    /// The largest class, reported when `f` is composite.
    pub witness: Option<(CurveKey, usize)>,
}

/// Check max class size `<= k^3` and class count `>= |A'|^2 / k^3`. A
/// violation for a non-composite `f` is an error.
pub fn check_class_bound(
    family: &CurveFamily,
    k: usize,
    composite: bool,
) -> Result<ClassBoundVerdict> {
    let k3 = k.pow(3);
    let retained = family.retained_size();
    let floor = Rat::new(
        ((retained * retained) as i64).into(),
        (k3.max(1) as i64).into(),
    );
    let max = family.max_class_size();
    let count = family.class_count();
    let within = max <= k3 && Rat::from_integer((count as i64).into()) >= floor;
    let largest = family
        .classes
        .iter()
        .max_by(|x, y| x.1.len().cmp(&y.1.len()).then_with(|| y.0.cmp(x.0)))
        .map(|(key, m)| (key.clone(), m.len()));
    if !composite && !within {
        let (key, size) = largest.unwrap_or((CurveKey(Vec::new()), 0));
        return Err(Error::BoundViolated(format!(
            "class {} has {size} members against k^3 = {k3}; {count} classes against floor {floor}",
            key.to_poly()
        )));
    }
    Ok(ClassBoundVerdict {
        max_class_size: max,
        class_size_bound: k3,
        class_count: count,
        class_count_floor: floor,
        within_bounds: within,
        witness: if composite { largest } else { None },
    })
}

/// `(class_size, count)` pairs, ascending by size.
pub fn class_size_histogram(family: &CurveFamily) -> Vec<(usize, usize)> {
    let mut h: BTreeMap<usize, usize> = BTreeMap::new();
    for m in family.classes.values() {
        *h.entry(m.len()).or_default() += 1;
    }
    h.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncidenceReport {
    pub point_count: usize,
    pub curve_count: usize,
    pub incidences: usize,
    pub alpha: usize,
    pub beta: usize,
    /// `α^(1/2) β^(1/3) |P|^(2/3) |L|^(2/3)`, `|L|` and `β |P|`.
    pub szekely_terms: [f64; 3],
    /// Incidences over the sum of the three terms; 0 when the sum is 0.
    pub szekely_ratio: f64,
    pub per_curve_min: usize,
    /// `⌈|A'| / k⌉`.
    pub per_curve_floor: usize,
    pub removed_rows: usize,
    pub sums_size: usize,
    pub values_size: usize,
}

pub fn incidence_report(
    f: &BiPoly,
    a: &[Rat],
    sigma: &SigmaReport,
    exec: Execution,
) -> IncidenceReport {
    let k = f.total_degree().max(0) as usize;
    let a = distinct(a);
    let sums = sumset(&a);
    let values = image_set(f, &a, exec);
    let grid = remove_sigma_rows(&sums, &values, sigma);
    let retained: HashSet<&Rat> = grid.values.iter().collect();
    let family = build_family(f, &a, exec);
    let reps: Vec<&CurveKey> = family.classes.keys().collect();
    let counts = par::map(exec, &reps, |key| {
        grid.sums
            .iter()
            .filter(|s| retained.contains(&key.eval(s)))
            .count()
    });
    let incidences: usize = counts.iter().sum();
    let per_curve_min = counts.iter().copied().min().unwrap_or(0);
    let p = grid.retained_points as f64;
    let l = family.class_count() as f64;
    let (alpha, beta) = (k, k * k);
    let t1 = (alpha as f64).sqrt() * (beta as f64).cbrt() * p.powf(2.0 / 3.0) * l.powf(2.0 / 3.0);
    let terms = [t1, l, beta as f64 * p];
    let total: f64 = terms.iter().sum();
    let retained_rows = family.retained_size();
    IncidenceReport {
        point_count: grid.retained_points,
        curve_count: family.class_count(),
        incidences,
        alpha,
        beta,
        szekely_terms: terms,
        szekely_ratio: if total > 0.0 {
            incidences as f64 / total
        } else {
            0.0
        },
        per_curve_min,
        per_curve_floor: if k == 0 { 0 } else { retained_rows.div_ceil(k) },
        removed_rows: family.removed_b.len(),
        sums_size: sums.len(),
        values_size: values.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PairOutcome {
    /// Rational solutions `(a, b)` found; complex ones are not counted.
    SolutionCount {
        count: usize,
        #[serde(serialize_with = "ser_pairs")]
        solutions: Vec<(Rat, Rat)>,
    },
    CommonFactor {
        factors: FactorList,
    },
}

fn ser_pairs<S: serde::Serializer>(v: &[(Rat, Rat)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (a, b) in v {
        seq.serialize_element(&[crate::poly::fmt_rat(a), crate::poly::fmt_rat(b)])?;
    }
    seq.end()
}

/// `f(x0 - x, y) - y0`.
pub fn translated_fiber(f: &BiPoly, p: &(Rat, Rat)) -> BiPoly {
    let xs = &BiPoly::constant(p.0.clone()) - &BiPoly::x();
    &f.substitute(&xs, &BiPoly::y()) - &BiPoly::constant(p.1.clone())
}

/// Common zeros `(a, b)` of the two translated fibers through `p1` and `p2`,
/// or their common factor.
pub fn curve_pair_solutions(f: &BiPoly, p1: &(Rat, Rat), p2: &(Rat, Rat)) -> Result<PairOutcome> {
    if p1 == p2 {
        return Err(Error::DegenerateSystem("the two points coincide".into()));
    }
    let f1 = translated_fiber(f, p1);
    let f2 = translated_fiber(f, p2);
    if f1.is_zero() || f2.is_zero() {
        return Err(Error::DegenerateSystem(
            "a translated fiber is identically zero".into(),
        ));
    }
    let g = gcd(&f1, &f2);
    if !g.is_constant() {
        return Ok(PairOutcome::CommonFactor {
            factors: factor_rational(&g)?,
        });
    }
    let r = resultant_in(&f1, &f2, Var::X)?;
    let mut solutions = Vec::new();
    for b in rational_roots(&r) {
        let u = f1.specialize_y(&b);
        let v = f2.specialize_y(&b);
        for a in rational_roots(&u.gcd(&v)) {
            solutions.push((a, b.clone()));
        }
    }
    solutions.sort();
    let k = f.total_degree().max(0) as usize;
    if solutions.len() > k * k {
        return Err(Error::BoundViolated(format!(
            "{} common solutions exceed k^2 = {}",
            solutions.len(),
            k * k
        )));
    }
    Ok(PairOutcome::SolutionCount {
        count: solutions.len(),
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rat};

    fn p(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    fn range(lo: i64, hi: i64) -> Vec<Rat> {
        (lo..=hi).map(|v| rat(v, 1)).collect()
    }

    #[test]
    fn family_examples() {
        let fam = build_family(&p("x y"), &range(1, 3), Execution::Sequential);
        assert_eq!(fam.class_count(), 9);
        assert_eq!(fam.max_class_size(), 1);
        let fam = build_family(&p("(x + y)^2"), &range(1, 5), Execution::Sequential);
        let diag = CurveKey::from_poly(&UniPoly::from_ints(&[0, 0, 1]));
        assert_eq!(fam.classes[&diag].len(), 5);
        let fam = build_family(&p("y"), &range(0, 1), Execution::Sequential);
        assert_eq!(fam.removed_b, vec![rat(0, 1)]);
    }

    #[test]
    fn class_bound_examples() {
        let a: Vec<Rat> = (1..=20).map(|v| rat(v, 3)).collect();
        let v = check_class_bound(
            &build_family(&p("x y"), &a, Execution::Sequential),
            2,
            false,
        )
        .unwrap();
        assert_eq!(v.max_class_size, 1);
        let v = check_class_bound(
            &build_family(&p("(x+y)^2"), &range(1, 9), Execution::Sequential),
            2,
            true,
        )
        .unwrap();
        assert!(!v.within_bounds);
        assert_eq!(v.witness.as_ref().map(|w| w.1), Some(9));
        let fam = build_family(&p("x^2 + y"), &range(1, 3), Execution::Sequential);
        assert_eq!(class_size_histogram(&fam), vec![(1, 9)]);
    }

    #[test]
    fn curve_pairs() {
        let xy = p("x y");
        let one = |a: i64, b: i64| (rat(a, 1), rat(b, 1));
        assert_eq!(
            curve_pair_solutions(&xy, &one(2, 1), &one(3, 2)).unwrap(),
            PairOutcome::SolutionCount {
                count: 1,
                solutions: vec![one(1, 1)]
            }
        );
        assert!(matches!(
            curve_pair_solutions(&xy, &one(2, 1), &one(2, 2)).unwrap(),
            PairOutcome::SolutionCount { count: 0, .. }
        ));
        match curve_pair_solutions(&xy, &one(2, 0), &one(5, 0)).unwrap() {
            PairOutcome::CommonFactor { factors } => assert_eq!(factors.expand(), p("y")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            curve_pair_solutions(&xy, &one(2, 1), &one(2, 1)),
            Err(Error::DegenerateSystem(_))
        ));
    }
}
