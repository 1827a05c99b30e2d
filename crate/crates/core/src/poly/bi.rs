use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{fmt_rat, int, Rat};
use super::uni::{forward_owned, UniPoly};

/// One of the two indeterminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

/// Sparse bivariate polynomial over the rationals: `(i, j) -> c` stands for
/// `c x^i y^j`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

/// Graded lexicographic comparison with `x > y`.
pub(crate) fn grlex(a: (u32, u32), b: (u32, u32)) -> Ordering {
    (a.0 + a.1).cmp(&(b.0 + b.1)).then(a.0.cmp(&b.0))
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rat::one(), 0, 1)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::x(),
            Var::Y => Self::y(),
        }
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rat)>>(terms: I) -> Self {
        let mut p = BiPoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Integer-coefficient shorthand: `[(c, i, j), ...]`.
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(terms.iter().map(|&(c, i, j)| ((i, j), int(c))))
    }

    /// Embed a univariate polynomial in variable `v`.
    pub fn from_uni(p: &UniPoly, v: Var) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as u32;
            let e = match v {
                Var::X => (k, 0),
                Var::Y => (0, k),
            };
            (e, c.clone())
        }))
    }

    pub(crate) fn add_term(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rat)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    /// Total degree, `-1` for the zero polynomial.
    pub fn total_degree(&self) -> isize {
        self.terms
            .keys()
            .map(|&(i, j)| (i + j) as isize)
            .max()
            .unwrap_or(-1)
    }

    /// Degree in `x`, `-1` for the zero polynomial.
    pub fn deg_x(&self) -> isize {
        self.terms
            .keys()
            .map(|&(i, _)| i as isize)
            .max()
            .unwrap_or(-1)
    }

    /// Degree in `y`, `-1` for the zero polynomial.
    pub fn deg_y(&self) -> isize {
        self.terms
            .keys()
            .map(|&(_, j)| j as isize)
            .max()
            .unwrap_or(-1)
    }

    pub fn deg_in(&self, v: Var) -> isize {
        match v {
            Var::X => self.deg_x(),
            Var::Y => self.deg_y(),
        }
    }

    /// True when the polynomial involves at most one of the variables.
    pub fn is_univariate(&self) -> bool {
        self.deg_x() <= 0 || self.deg_y() <= 0
    }

    /// Leading term in graded lex order (`x > y`).
    pub fn leading_term(&self) -> Option<((u32, u32), &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex(*a.0, *b.0))
            .map(|(k, v)| (*k, v))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.specialize_y(y).eval(x)
    }

    /// `f(x, b)` as a polynomial in `x`.
    pub fn specialize_y(&self, b: &Rat) -> UniPoly {
        let dx = self.deg_x().max(0) as usize;
        let mut c = vec![Rat::zero(); dx + 1];
        let mut powers: Vec<Rat> = vec![Rat::one()];
        for (&(i, j), v) in &self.terms {
            while powers.len() <= j as usize {
                let next = powers.last().unwrap() * b;
                powers.push(next);
            }
            c[i as usize] += v * &powers[j as usize];
        }
        UniPoly::from_coeffs(c)
    }

    /// `f(a, y)` as a polynomial in `y`.
    pub fn specialize_x(&self, a: &Rat) -> UniPoly {
        self.swap_vars().specialize_y(a)
    }

    /// The x-translation `f(x - a, y)`.
    pub fn shift_x(&self, a: &Rat) -> BiPoly {
        if a.is_zero() {
            return self.clone();
        }
        // f = sum_j c_j(x) y^j; shift each column c_j
        let by_y = self.y_coeffs();
        let mut out = BiPoly::zero();
        for (j, col) in by_y.iter().enumerate() {
            let shifted = col.shift(&-a);
            for (i, c) in shifted.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, c.clone());
            }
        }
        out
    }

    /// The reflection `f(-x, y)`.
    pub fn reflect_x(&self) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i, j), if i % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// `f(y, x)`.
    pub fn swap_vars(&self) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        }
    }

    /// General substitution `f(X(x,y), Y(x,y))`.
    pub fn substitute(&self, xs: &BiPoly, ys: &BiPoly) -> BiPoly {
        let mut xp: Vec<BiPoly> = vec![BiPoly::one()];
        let mut yp: Vec<BiPoly> = vec![BiPoly::one()];
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            while xp.len() <= i as usize {
                let n = xp.last().unwrap() * xs;
                xp.push(n);
            }
            while yp.len() <= j as usize {
                let n = yp.last().unwrap() * ys;
                yp.push(n);
            }
            out = &out + &(&xp[i as usize] * &yp[j as usize]).scale(c);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i > 0 => out.add_term(i - 1, j, c * int(i as i64)),
                Var::Y if j > 0 => out.add_term(i, j - 1, c * int(j as i64)),
                _ => {}
            }
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| (i + j) as usize == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// `q(self)` for a univariate outer polynomial `q`.
    pub fn compose_outer(q: &UniPoly, inner: &BiPoly) -> BiPoly {
        let mut acc = BiPoly::zero();
        for c in q.coeffs().iter().rev() {
            acc = &(&acc * inner) + &BiPoly::constant(c.clone());
        }
        acc
    }

    /// Coefficients as a polynomial in `x` over `Q[y]`: entry `i` is the
    /// coefficient of `x^i`.
    pub fn x_coeffs(&self) -> Vec<UniPoly> {
        let dx = self.deg_x();
        if dx < 0 {
            return Vec::new();
        }
        let dy = self.deg_y().max(0) as usize;
        let mut cols = vec![vec![Rat::zero(); dy + 1]; dx as usize + 1];
        for (&(i, j), c) in &self.terms {
            cols[i as usize][j as usize] = c.clone();
        }
        cols.into_iter().map(UniPoly::from_coeffs).collect()
    }

    /// Coefficients as a polynomial in `y` over `Q[x]`.
    pub fn y_coeffs(&self) -> Vec<UniPoly> {
        self.swap_vars().x_coeffs()
    }

    pub fn coeffs_in(&self, main: Var) -> Vec<UniPoly> {
        match main {
            Var::X => self.x_coeffs(),
            Var::Y => self.y_coeffs(),
        }
    }

    /// Inverse of [`BiPoly::coeffs_in`].
    pub fn from_coeffs_in(main: Var, coeffs: &[UniPoly]) -> BiPoly {
        let mut out = BiPoly::zero();
        for (i, col) in coeffs.iter().enumerate() {
            for (j, c) in col.coeffs().iter().enumerate() {
                let (a, b) = match main {
                    Var::X => (i as u32, j as u32),
                    Var::Y => (j as u32, i as u32),
                };
                out.add_term(a, b, c.clone());
            }
        }
        out
    }

    /// Exact division using the graded-lex leading term. Returns `None`
    /// when `d` does not divide `self`.
    pub fn exact_div(&self, d: &BiPoly) -> Option<BiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let ((di, dj), dc) = d.leading_term().map(|(k, c)| (k, c.clone()))?;
        let mut rem = self.clone();
        let mut quot = BiPoly::zero();
        while let Some(((ri, rj), rc)) = rem.leading_term().map(|(k, c)| (k, c.clone())) {
            if ri < di || rj < dj {
                return None;
            }
            let (qi, qj) = (ri - di, rj - dj);
            let qc = rc / &dc;
            for (&(ti, tj), tc) in &d.terms {
                rem.add_term(ti + qi, tj + qj, -(tc * &qc));
            }
            quot.add_term(qi, qj, qc);
        }
        Some(quot)
    }

    /// Split off the rational content: returns `(c, p)` with `self = c * p`,
    /// `p` having coprime integer coefficients and positive leading
    /// coefficient in graded lex order.
    pub fn primitive(&self) -> (Rat, BiPoly) {
        if self.is_zero() {
            return (Rat::zero(), BiPoly::zero());
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * Rat::from_integer(den.clone())).to_integer());
        }
        if self.leading_coeff().is_negative() {
            g = -g;
        }
        let content = Rat::new(g, den);
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Primitive part with positive leading coefficient (the canonical
    /// normalisation for factors and gcds).
    pub fn normalized(&self) -> BiPoly {
        self.primitive().1
    }

    /// Canonical graded-lex rendering, e.g. `x^2 - 3/2*x*y + 5`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| grlex(*b, *a));
        let mut out = String::new();
        for k in keys {
            let c = &self.terms[&k];
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = Vec::new();
            match k.0 {
                0 => {}
                1 => mono.push("x".to_string()),
                e => mono.push(format!("x^{e}")),
            }
            match k.1 {
                0 => {}
                1 => mono.push("y".to_string()),
                e => mono.push(format!("y^{e}")),
            }
            if mono.is_empty() {
                out.push_str(&fmt_rat(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&fmt_rat(&mag));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl serde::Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-Rat::one())
    }
}

forward_owned!(BiPoly, Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::rat;

    fn p(t: &[(i64, u32, u32)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[(1, 1, 0), (1, 0, 1)]);
        let b = p(&[(1, 1, 0), (-1, 0, 1)]);
        assert_eq!(&a * &b, p(&[(1, 2, 0), (-1, 0, 2)]));
        assert_eq!(&a + &BiPoly::zero(), a);
    }

    #[test]
    fn cube_of_linear_form_by_repeated_convolution() {
        // oracle: binomial expansion sum C(3,k) x^(3-k) (2y)^k
        let l = p(&[(1, 1, 0), (2, 0, 1)]);
        let cube = &(&l * &l) * &l;
        assert_eq!(cube, p(&[(1, 3, 0), (6, 2, 1), (12, 1, 2), (8, 0, 3)]));
        assert_eq!(l.pow(3), cube);
    }

    #[test]
    fn specialize_examples() {
        assert_eq!(
            p(&[(1, 1, 1)]).specialize_y(&rat(3, 1)),
            UniPoly::from_ints(&[0, 3])
        );
        assert_eq!(
            p(&[(1, 1, 0), (1, 0, 2)]).specialize_y(&rat(0, 1)),
            UniPoly::from_ints(&[0, 1])
        );
        let f = p(&[(1, 2, 0), (1, 1, 1), (1, 0, 2)]);
        assert_eq!(
            f.specialize_y(&rat(1, 2)),
            UniPoly::from_coeffs(vec![rat(1, 4), rat(1, 2), rat(1, 1)])
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(
            p(&[(1, 2, 0)]).shift_x(&rat(1, 1)),
            p(&[(1, 2, 0), (-2, 1, 0), (1, 0, 0)])
        );
        let f = p(&[(3, 2, 1), (-1, 0, 3), (5, 1, 0)]);
        assert_eq!(f.shift_x(&rat(0, 1)), f);
        assert_eq!(
            p(&[(1, 1, 1)]).shift_x(&rat(2, 1)),
            p(&[(1, 1, 1), (-2, 0, 1)])
        );
        // cross-check against general substitution x -> x - a
        let a = rat(-5, 3);
        let xs = &BiPoly::x() - &BiPoly::constant(a.clone());
        assert_eq!(f.shift_x(&a), f.substitute(&xs, &BiPoly::y()));
    }

    #[test]
    fn derivative_examples() {
        let f = p(&[(1, 1, 0), (1, 0, 2)]);
        assert_eq!(f.derivative(Var::X), BiPoly::one());
        assert_eq!(f.derivative(Var::Y), p(&[(2, 0, 1)]));
        assert_eq!(p(&[(1, 3, 2)]).derivative(Var::X), p(&[(3, 2, 2)]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[(1, 1, 0), (1, 0, 1), (-3, 0, 0)]);
        let b = p(&[(2, 2, 1), (-1, 0, 0), (1, 1, 1)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a));
        assert_eq!((&prod + &BiPoly::one()).exact_div(&b), None);
    }

    #[test]
    fn degrees_and_sentinel() {
        let f = p(&[(1, 3, 1), (1, 0, 5)]);
        assert_eq!((f.total_degree(), f.deg_x(), f.deg_y()), (5, 3, 5));
        assert_eq!(BiPoly::zero().total_degree(), -1);
    }

    #[test]
    fn text_is_graded_lex() {
        let f = p(&[(5, 0, 0), (1, 0, 2), (-3, 1, 1), (1, 2, 0)]);
        assert_eq!(f.to_text(), "x^2 - 3*x*y + y^2 + 5");
    }
}
