//! Fraction-free elimination over exact rings.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bi::BiPoly;
use super::rat::Rat;
use super::uni::UniPoly;

/// An integral domain with exact division, enough for Bareiss elimination.
pub(crate) trait ExactRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / d`, where the caller guarantees divisibility.
    fn exact_div(&self, d: &Self) -> Self;
}

impl ExactRing for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, d: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % d)));
        self / d
    }
}

impl ExactRing for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, d: &Self) -> Self {
        UniPoly::exact_div(self, d).expect("Bareiss division is exact")
    }
}

impl ExactRing for BiPoly {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::one()
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, d: &Self) -> Self {
        BiPoly::exact_div(self, d).expect("Bareiss division is exact")
    }
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub(crate) fn determinant<R: ExactRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_div(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Sylvester matrix of two coefficient vectors (ascending order, formal
/// degrees `p.len() - 1` and `q.len() - 1`), rows of `p` first.
pub(crate) fn sylvester_matrix<R: ExactRing>(p: &[R], q: &[R]) -> Vec<Vec<R>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![R::zero(); size];
        for (k, c) in p.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![R::zero(); size];
        for (k, c) in q.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two polynomials given by nonempty coefficient vectors whose
/// last entries are the formal leading coefficients.
pub(crate) fn sylvester_resultant<R: ExactRing>(p: &[R], q: &[R]) -> R {
    determinant(sylvester_matrix(p, q))
}

/// Rank of an integer matrix by fraction-free row echelon elimination.
pub(crate) fn rank_fraction_free(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = <BigInt as One>::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !Zero::is_zero(&m[r][c])) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[r][j] - &m[r][c] * &m[rank][j];
                m[r][j] = v.exact_div(&prev);
            }
            m[r][c] = <BigInt as Zero>::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Basis of the right nullspace `{v : M v = 0}` over the rationals, via
/// reduced row echelon form.
pub(crate) fn nullspace(mut m: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !Zero::is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r][c..].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !Zero::is_zero(&row[c]) {
                let factor = row[c].clone();
                for (v, pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![<Rat as Zero>::zero(); cols];
        v[free] = <Rat as One>::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}
