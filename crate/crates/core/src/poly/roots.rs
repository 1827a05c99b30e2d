//! Rational roots by working modulo a word-sized prime, lifting each simple
//! root p-adically and reconstructing the fraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;
use super::uni::UniPoly;

type ModPoly = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn reduce(f: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    trim(
        f.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (ModPoly, ModPoly) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let li = inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = mulmod(r[i + db], li, p);
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mulmod(c, bj, p)) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn mul(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn gcd(mut a: ModPoly, mut b: ModPoly, p: u64) -> ModPoly {
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = inv(l, p);
        a = a.iter().map(|&c| mulmod(c, li, p)).collect();
    }
    a
}

/// `base^e mod m`.
fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> ModPoly {
    let mut r: ModPoly = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = divrem(&mul(&r, &b, p), m, p).1;
        }
        b = divrem(&mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

fn derivative(f: &[u64], p: u64) -> ModPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

/// Roots of a monic product of distinct linear factors (Cantor-Zassenhaus).
fn split_linear(g: ModPoly, p: u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(mulmod(p - g[0], inv(g[1], p), p)),
        _ => {
            for delta in 1u64.. {
                let mut w = powmod_poly(&[delta % p, 1], (p - 1) / 2, &g, p);
                if w.is_empty() {
                    continue;
                }
                w[0] = (w[0] + p - 1) % p;
                let d = gcd(g.clone(), trim(w), p);
                if d.len() > 1 && d.len() < g.len() {
                    let (q, _) = divrem(&g, &d, p);
                    split_linear(d, p, out);
                    split_linear(q, p, out);
                    return;
                }
            }
        }
    }
}

fn eval_int(f: &[BigInt], z: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
}

/// Newton iteration from a simple root mod `p` to a root mod a power of `p`
/// exceeding `bound`. Returns the lifted root and the modulus.
fn lift(f: &[BigInt], df: &[BigInt], r0: u64, p: u64, bound: &BigInt) -> (BigInt, BigInt) {
    let mut m = BigInt::from(p);
    let mut r = BigInt::from(r0);
    while &m <= bound {
        m = &m * &m;
        let fr = eval_int(f, &r).mod_floor(&m);
        let dr = eval_int(df, &r).mod_floor(&m);
        let ext = dr.extended_gcd(&m);
        // the derivative is a unit mod p, hence mod every power
        debug_assert!(ext.gcd.is_one());
        r = (r - fr * ext.x).mod_floor(&m);
    }
    (r, m)
}

/// Fraction `a/b` with `|a| <= n`, `0 < b <= d` and `a = b r mod m`.
fn reconstruct(r: &BigInt, m: &BigInt, n: &BigInt, d: &BigInt) -> Option<Rat> {
    let (mut r0, mut t0) = (m.clone(), BigInt::zero());
    let (mut r1, mut t1) = (r.clone(), BigInt::one());
    while &r1 > n {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *d {
        return None;
    }
    Some(Rat::new(r1, t1))
}

/// Distinct rational roots of `p`, ascending. Empty for zero or constants.
pub fn rational_roots(p: &UniPoly) -> Vec<Rat> {
    if p.degree() < 1 {
        return Vec::new();
    }
    let (_, mut f) = p.squarefree_part().to_primitive_ints();
    let mut roots = Vec::new();
    if f[0].is_zero() {
        roots.push(Rat::zero());
        f.remove(0);
    }
    if f.len() >= 2 {
        roots.extend(nonzero_roots(&f));
    }
    roots.sort();
    roots.dedup();
    roots
}

fn nonzero_roots(f: &[BigInt]) -> Vec<Rat> {
    let lc = f.last().unwrap().abs();
    let a0 = f[0].abs();
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut p: u64 = (1 << 31) - 1;
    let fp = loop {
        let lc_mod = (&lc % BigInt::from(p)).is_zero();
        if !lc_mod {
            let fp = reduce(f, p);
            if gcd(fp.clone(), derivative(&fp, p), p).len() == 1 {
                break fp;
            }
        }
        p -= 2;
        while !super::intfactor::is_probable_prime(&p.into()) {
            p -= 2;
        }
    };
    let xp = powmod_poly(&[0, 1], p, &fp, p);
    let mut xp_minus_x = xp;
    xp_minus_x.resize(xp_minus_x.len().max(2), 0);
    xp_minus_x[1] = (xp_minus_x[1] + p - 1) % p;
    let g = gcd(fp.clone(), trim(xp_minus_x), p);
    let mut modroots = Vec::new();
    split_linear(g, p, &mut modroots);
    let bound = BigInt::from(2u32) * &a0 * &lc;
    let frac = |r: &BigInt, m: &BigInt| {
        // a root a/b of a primitive polynomial has a | a0 and b | lc
        let cand = reconstruct(r, m, &a0, &lc)?;
        let num = cand.numer().clone();
        let den = cand.denom().clone();
        let val: BigInt = f
            .iter()
            .enumerate()
            .map(|(i, c)| c * num.pow(i as u32) * den.pow((f.len() - 1 - i) as u32))
            .sum();
        val.is_zero().then_some(cand)
    };
    modroots
        .into_iter()
        .filter_map(|r0| {
            let (r, m) = lift(f, &df, r0, p, &bound);
            frac(&r, &m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::{int, rat};

    fn from_roots(rs: &[Rat]) -> UniPoly {
        rs.iter().fold(UniPoly::one(), |acc, r| {
            &acc * &UniPoly::from_coeffs(vec![-r.clone(), Rat::one()])
        })
    }

    #[test]
    fn finds_mixed_rational_roots() {
        let rs = vec![rat(-7, 3), int(0), rat(1, 2), int(5), rat(1234567, 89)];
        let p = &from_roots(&rs) * &UniPoly::from_ints(&[1, 0, 1]);
        let mut want = rs.clone();
        want.sort();
        assert_eq!(rational_roots(&p), want);
    }

    #[test]
    fn repeated_roots_reported_once() {
        let p = &from_roots(&[int(2), int(2), int(-1)]) * &UniPoly::from_ints(&[0, 0, 3]);
        assert_eq!(rational_roots(&p), vec![int(-1), int(0), int(2)]);
    }

    #[test]
    fn no_roots() {
        assert!(rational_roots(&UniPoly::from_ints(&[-2, 0, 1])).is_empty());
        assert!(rational_roots(&UniPoly::from_ints(&[5])).is_empty());
        assert!(rational_roots(&UniPoly::zero()).is_empty());
    }
}
