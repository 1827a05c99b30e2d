//! Integer factorization for divisor enumeration in the Kronecker oracle.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIME_LIMIT: u32 = 10_000;

fn small_primes() -> &'static [u32] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SMALL_PRIME_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

/// Miller-Rabin with the first twenty prime bases (deterministic far beyond
/// 64 bits, probabilistic above).
pub(crate) fn is_probable_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &p in &small_primes()[..20] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &a in &small_primes()[..20] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint, c: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let m: u64 = 64;
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let limit: u64 = 1 << 22;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > limit {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if g != one {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn split_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    for c in 1..64u64 {
        if let Some(d) = pollard_brent(&n, c) {
            let other = &n / &d;
            split_into(d, out);
            split_into(other, out);
            return;
        }
    }
    // give up on a stubborn composite: treat it as a prime power of itself,
    // which only loses divisors (the Kronecker search then misses factors
    // rather than inventing them)
    out.push(n);
}

/// Prime factorization `n = prod p^e`, sorted by prime. `n` must be nonzero.
pub(crate) fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut n = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        while (&n % &pb).is_zero() {
            n /= &pb;
            primes.push(pb.clone());
        }
    }
    if n.to_u64()
        .is_some_and(|v| v < (SMALL_PRIME_LIMIT as u64).pow(2))
    {
        if !n.is_one() {
            primes.push(n);
        }
    } else {
        split_into(n, &mut primes);
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Number of positive divisors of `n`.
pub(crate) fn divisor_count(n: &BigUint) -> u64 {
    factorize(n).iter().map(|(_, e)| *e as u64 + 1).product()
}

/// All positive divisors of `n`, ascending.
pub(crate) fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_mixed_sizes() {
        let n = BigUint::from(2u64.pow(4) * 3 * 1_000_003u64 * 999_983u64);
        let f = factorize(&n);
        let primes: Vec<u64> = f.iter().map(|(p, _)| p.to_u64().unwrap()).collect();
        assert_eq!(primes, vec![2, 3, 999_983, 1_000_003]);
        assert_eq!(f[0].1, 4);
        let back: BigUint = f.iter().map(|(p, e)| p.pow(*e)).product();
        assert_eq!(back, n);
    }

    #[test]
    fn divisors_of_twelve() {
        let d: Vec<u64> = divisors(&BigUint::from(12u32))
            .iter()
            .map(|v| v.to_u64().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisor_count(&BigUint::from(12u32)), 6);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigUint::from(1_000_000_007u64)));
        assert!(!is_probable_prime(&BigUint::from(561u32)));
    }
}
