//! Exact integer utilities: valuations, gcd-stripping, perfect powers,
//! primality, bounded factoring, and rational reconstruction.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigUint, p: &BigUint) -> u64 {
    assert!(!n.is_zero(), "valuation of zero is infinite");
    assert!(*p >= BigUint::from(2u32));
    let mut v = 0u64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// Valuation of a nonzero rational written as v(num) - v(den).
pub fn valuation_int(n: &BigInt, p: &BigUint) -> u64 {
    valuation(n.magnitude(), p)
}

/// Largest divisor of `n` coprime to `m`, by iterated gcd-stripping; no
/// factorization of either argument. `coprime_part(n, 0)` would strip all of
/// `n`, so `m` must be nonzero.
pub fn coprime_part(n: &BigUint, m: &BigUint) -> BigUint {
    assert!(!n.is_zero() && !m.is_zero());
    let mut n = n.clone();
    let mut g = n.gcd(m);
    while !g.is_one() {
        n /= &g;
        g = n.gcd(&g);
    }
    n
}

/// Maximal perfect-power decomposition: returns (u, k) with n = u^k and k as
/// large as possible. By convention 1 -> (1, 0); a non-power returns (n, 1).
pub fn perfect_power(n: &BigUint) -> (BigUint, u64) {
    if n.is_one() {
        return (BigUint::one(), 0);
    }
    let mut u = n.clone();
    let mut k = 1u64;
    'outer: loop {
        let maxexp = u.bits() - 1; // floor(log2 u)
        for q in small_primes(maxexp.max(2)) {
            if q > maxexp {
                break;
            }
            let r = u.nth_root(q as u32);
            if r.pow(q as u32) == u {
                u = r;
                k *= q;
                continue 'outer;
            }
        }
        return (u, k);
    }
}

/// Exact integer square root, if one exists.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact k-th root, if one exists (k >= 1).
pub fn exact_nth_root(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

/// Primes up to and including `bound`, by sieve.
pub fn small_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Miller-Rabin with fixed prime bases. Deterministic for n < 3.3e24; above
/// that the verdict "prime" is probabilistic (error < 4^-28), "composite" is
/// always certain.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    const BASES: [u64; 28] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97, 101, 103, 107,
    ];
    for b in BASES {
        if *n == BigUint::from(b) {
            return true;
        }
        if (n % BigUint::from(b)).is_zero() {
            return false;
        }
    }
    let n1 = n - BigUint::one();
    let s = valuation(&n1, &two);
    let d = &n1 >> s;
    'base: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Factor `n` by trial division up to `bound`; returns the factors found and
/// the unfactored cofactor (1 when complete).
pub fn trial_division(n: &BigUint, bound: u64) -> (Vec<(BigUint, u64)>, BigUint) {
    assert!(!n.is_zero());
    let mut rest = n.clone();
    let mut out = Vec::new();
    for p in small_primes(bound) {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let v = valuation(&rest, &pb);
        if v > 0 {
            rest /= pb.pow(v as u32);
            out.push((BigUint::from(p), v));
        }
    }
    if !rest.is_one() {
        // A leftover with no prime factor <= bound and size <= bound^2 is prime.
        let bound_sq = BigUint::from(bound) * BigUint::from(bound);
        if rest <= bound_sq || is_probable_prime(&rest) {
            out.push((rest.clone(), 1));
            rest = BigUint::one();
        }
    }
    (out, rest)
}

/// Complete factorization or an explicit budget error; never a wrong answer.
pub fn factor_with_budget(n: &BigUint, bound: u64) -> Result<Vec<(BigUint, u64)>> {
    let (factors, rest) = trial_division(n, bound);
    if rest.is_one() {
        Ok(factors)
    } else {
        Err(Error::Budget(format!(
            "composite cofactor {rest} survives trial division to {bound}"
        )))
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let x = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x);
        let y = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y);
    }
    if r0.is_negative() {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Inverse of a modulo m, when gcd(a, m) = 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(a, m);
    if g.is_one() {
        Some(x.mod_floor(m))
    } else {
        None
    }
}

/// Rational reconstruction: the unique r/s with r = a*s mod m,
/// |r|, s <= sqrt((m-1)/2), gcd(s, m) = 1, if it exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    assert!(m > &BigInt::one());
    let bound = ((m - BigInt::one()) / BigInt::from(2)).sqrt();
    let mut r0 = m.clone();
    let mut r1 = a.mod_floor(m);
    let mut s0 = BigInt::zero();
    let mut s1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    if s1.is_negative() {
        r1 = -r1;
        s1 = -s1;
    }
    if s1.gcd(m).is_one() && r1.gcd(&s1).is_one() {
        Some((r1, s1))
    } else {
        None
    }
}
