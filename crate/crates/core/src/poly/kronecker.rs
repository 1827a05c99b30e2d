//! Kronecker's method over the integers: a factor of degree `s` is fixed by
//! its values at `s + 1` integer nodes, and each value divides the value of
//! the input there, so the candidates are finitely many.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::intfactor::{divisor_count, divisors};
use super::rat::Rat;
use super::uni::UniPoly;

fn eval_int(f: &[BigInt], z: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn degree(f: &[BigInt]) -> usize {
    f.len() - 1
}

/// Exact division over Z; `None` if `g` does not divide `f`.
fn div_int(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem: Vec<BigInt> = f.to_vec();
    let dg = degree(g);
    if rem.len() < g.len() {
        return None;
    }
    let lc = &g[dg];
    let mut quot = vec![BigInt::zero(); rem.len() - dg];
    for i in (0..quot.len()).rev() {
        let (q, r) = rem[i + dg].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, c) in g.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
        }
        quot[i] = q;
    }
    rem[..dg].iter().all(|c| c.is_zero()).then_some(quot)
}

fn normalize(mut g: Vec<BigInt>) -> Vec<BigInt> {
    while g.last().is_some_and(|c| c.is_zero()) {
        g.pop();
    }
    let mut c = BigInt::zero();
    for a in &g {
        c = c.gcd(a);
    }
    if g.last().is_some_and(|a| a.is_negative()) {
        c = -c;
    }
    g.iter().map(|a| a / &c).collect()
}

/// Integer-scaled Lagrange basis for the nodes: `basis[i]` has coefficients
/// `den * L_i`, with one common denominator `den > 0`.
fn lagrange_basis(nodes: &[BigInt]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut polys: Vec<UniPoly> = Vec::new();
    for (i, zi) in nodes.iter().enumerate() {
        let mut l = UniPoly::one();
        for (j, zj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let lin = UniPoly::from_coeffs(vec![Rat::from_integer(-zj), Rat::one()]);
            l = &l * &lin.scale(&Rat::from_integer(zi - zj).recip());
        }
        polys.push(l);
    }
    let mut den = BigInt::one();
    for p in &polys {
        for c in p.coeffs() {
            den = den.lcm(c.denom());
        }
    }
    let s = nodes.len();
    let basis = polys
        .iter()
        .map(|p| {
            (0..s)
                .map(|k| (p.coeff(k) * Rat::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    (basis, den)
}

struct Search<'a> {
    f: &'a [BigInt],
    s: usize,
    basis: Vec<Vec<BigInt>>,
    den: BigInt,
    choices: Vec<Vec<BigInt>>,
    filters: Vec<(BigInt, BigInt)>,
    lc: BigInt,
}

impl Search<'_> {
    fn candidate(&self, idx: &[usize]) -> Option<Vec<BigInt>> {
        let vals: Vec<&BigInt> = idx.iter().zip(&self.choices).map(|(&k, c)| &c[k]).collect();
        // leading coefficient first: cheapest rejection
        let top: BigInt = vals
            .iter()
            .zip(&self.basis)
            .map(|(v, b)| *v * &b[self.s])
            .sum();
        if top.is_zero() {
            return None;
        }
        let (lead, r) = top.div_rem(&self.den);
        if !r.is_zero() || !(&self.lc % &lead).is_zero() {
            return None;
        }
        let mut g = Vec::with_capacity(self.s + 1);
        for k in 0..=self.s {
            let c: BigInt = vals.iter().zip(&self.basis).map(|(v, b)| *v * &b[k]).sum();
            let (q, r) = c.div_rem(&self.den);
            if !r.is_zero() {
                return None;
            }
            g.push(q);
        }
        for (z, fz) in &self.filters {
            let gz = eval_int(&g, z);
            if gz.is_zero() || !(fz % &gz).is_zero() {
                return None;
            }
        }
        div_int(self.f, &g).map(|_| normalize(g))
    }

    fn run(&self) -> Option<Vec<BigInt>> {
        let k = self.choices.len();
        let mut idx = vec![0usize; k];
        loop {
            if let Some(g) = self.candidate(&idx) {
                return Some(g);
            }
            let mut pos = 0;
            loop {
                if pos == k {
                    return None;
                }
                idx[pos] += 1;
                if idx[pos] < self.choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn integer_nodes() -> impl Iterator<Item = BigInt> {
    (0i64..)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .map(BigInt::from)
}

/// A factor of `f` of degree exactly `s`, if one exists.
fn find_factor(f: &[BigInt], s: usize) -> Option<Vec<BigInt>> {
    let want = 2 * (s + 1) + 4;
    let mut pts: Vec<(BigInt, BigInt)> = Vec::new();
    for z in integer_nodes().take(8 * (degree(f) + want)) {
        let v = eval_int(f, &z);
        if v.is_zero() {
            if s == 1 {
                return Some(vec![-z, BigInt::one()]);
            }
            continue;
        }
        pts.push((z, v));
        if pts.len() == want {
            break;
        }
    }
    if pts.len() < s + 1 {
        return None;
    }
    let mut ranked: Vec<(u64, usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, (_, v))| (divisor_count(v.magnitude()), i))
        .collect();
    ranked.sort();
    let nodes: Vec<usize> = ranked[..s + 1].iter().map(|&(_, i)| i).collect();
    let filters: Vec<(BigInt, BigInt)> = ranked[s + 1..]
        .iter()
        .map(|&(_, i)| pts[i].clone())
        .collect();
    let node_z: Vec<BigInt> = nodes.iter().map(|&i| pts[i].0.clone()).collect();
    let (basis, den) = lagrange_basis(&node_z);
    let choices: Vec<Vec<BigInt>> = nodes
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let ds = divisors(pts[i].1.magnitude());
            let mut out: Vec<BigInt> = Vec::new();
            for d in ds {
                let d = BigInt::from_biguint(Sign::Plus, d);
                out.push(d.clone());
                // a factor and its negative are the same; fix one sign
                if pos > 0 {
                    out.push(-d);
                }
            }
            out
        })
        .collect();
    Search {
        f,
        s,
        basis,
        den,
        choices,
        filters,
        lc: f[degree(f)].clone(),
    }
    .run()
}

/// Irreducible factorization of a primitive integer polynomial with positive
/// leading coefficient. Factors are primitive with positive leading
/// coefficient, sorted by degree then coefficients.
pub(crate) fn factor_int_poly(f: &[BigInt]) -> Vec<(Vec<BigInt>, u32)> {
    let mut work: Vec<BigInt> = f.to_vec();
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    let zeros = work.iter().take_while(|c| c.is_zero()).count();
    for _ in 0..zeros {
        found.push(vec![BigInt::zero(), BigInt::one()]);
    }
    work.drain(..zeros);
    let mut s = 1;
    while 2 * s <= degree(&work) {
        match find_factor(&work, s) {
            Some(g) => {
                work = div_int(&work, &g).expect("factor divides");
                found.push(g);
            }
            None => s += 1,
        }
    }
    if degree(&work) >= 1 {
        found.push(normalize(work));
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut out: Vec<(Vec<BigInt>, u32)> = Vec::new();
    for g in found {
        match out.last_mut() {
            Some((h, e)) if *h == g => *e += 1,
            _ => out.push((g, 1)),
        }
    }
    out
}

/// Factor a nonzero univariate polynomial over the rationals into a
/// constant times primitive integer irreducibles.
pub fn factor_univariate(p: &UniPoly) -> (Rat, Vec<(UniPoly, u32)>) {
    assert!(!p.is_zero(), "factor_univariate(0)");
    let (content, ints) = p.to_primitive_ints();
    if ints.len() == 1 {
        return (p.leading_coeff(), Vec::new());
    }
    let factors = factor_int_poly(&ints)
        .into_iter()
        .map(|(g, e)| (UniPoly::from_big_ints(&g), e))
        .collect();
    (content, factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(c: &Rat, fs: &[(UniPoly, u32)]) -> UniPoly {
        fs.iter().fold(UniPoly::constant(c.clone()), |acc, (g, e)| {
            &acc * &g.pow(*e)
        })
    }

    #[test]
    fn splits_quartic_into_quadratics() {
        // (t^2 + 1)(t^2 - 2t + 3)
        let p = &UniPoly::from_ints(&[1, 0, 1]) * &UniPoly::from_ints(&[3, -2, 1]);
        let (c, fs) = factor_univariate(&p);
        assert_eq!(fs.len(), 2);
        assert_eq!(expand(&c, &fs), p);
    }

    #[test]
    fn multiplicities_and_zero_roots() {
        let lin = UniPoly::from_ints(&[-3, 2]);
        let p =
            &(&lin.pow(3) * &UniPoly::from_ints(&[0, 0, 5])) * &UniPoly::from_ints(&[7, 0, 0, 1]);
        let (c, fs) = factor_univariate(&p);
        assert_eq!(expand(&c, &fs), p);
        let mults: Vec<u32> = fs.iter().map(|(_, e)| *e).collect();
        assert_eq!(mults, vec![3, 2, 1]);
    }

    #[test]
    fn irreducible_stays_whole() {
        let p = UniPoly::from_ints(&[2, 0, 0, 0, 1]); // t^4 + 2, Eisenstein
        let (_, fs) = factor_univariate(&p);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 1);
    }
}
