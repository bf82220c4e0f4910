//! Integer helpers: modular arithmetic, primality, factorization, orders.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `None` once `budget` iterations are spent.
fn rho(n: u64, budget: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1..u64::MAX {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return Some(d);
        }
    }
    None
}

/// Prime factorization of a 64-bit integer, trial division then Pollard rho.
pub fn factor_u64(n: u64, budget: &mut u64) -> Option<BTreeMap<u64, u32>> {
    let mut out = BTreeMap::new();
    let mut m = n;
    for p in 2..1000u64 {
        while m % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            m /= p;
        }
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            *out.entry(x).or_insert(0) += 1;
            continue;
        }
        let d = rho(x, budget)?;
        stack.push(d);
        stack.push(x / d);
    }
    Some(out)
}

/// Factor a big integer given as a product of 64-bit pieces.
pub fn factor_product(pieces: &[u64], budget: &mut u64) -> Option<BTreeMap<u64, u32>> {
    let mut out = BTreeMap::new();
    for &x in pieces {
        for (p, e) in factor_u64(x, budget)? {
            *out.entry(p).or_insert(0) += e;
        }
    }
    Some(out)
}

pub fn from_factors(f: &BTreeMap<u64, u32>) -> BigUint {
    f.iter().fold(BigUint::from(1u32), |acc, (&p, &e)| acc * BigUint::from(p).pow(e))
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1`).
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let phi = totient(m);
    let mut budget = 1 << 20;
    let f = factor_u64(phi, &mut budget)?;
    let mut ord = phi;
    for (&q, _) in &f {
        while ord % q == 0 && pow_mod(a, (ord / q) as u128, m) == 1 {
            ord /= q;
        }
    }
    Some(ord)
}

pub fn totient(m: u64) -> u64 {
    let mut budget = 1 << 20;
    let f = factor_u64(m, &mut budget).expect("small totient argument");
    f.iter().fold(m, |acc, (&p, _)| acc / p * (p - 1))
}

/// Smallest `k ≥ 0` with `p^k ≥ x`.
pub fn ceil_log(p: u64, x: u64) -> u32 {
    let mut k = 0;
    let mut v = 1u128;
    while v < x as u128 {
        v *= p as u128;
        k += 1;
    }
    k
}

/// `p`-adic valuation and the cofactor.
pub fn split_power(mut x: u64, p: u64) -> (u32, u64) {
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    (e, x)
}

/// If `l = (p^k − 1)/(p − 1)` for some `k ≥ 1`, return `k`.
pub fn repunit_length(l: u64, p: u64) -> Option<u32> {
    let (mut acc, mut pw, mut k) = (0u64, 1u64, 0u32);
    while acc < l {
        acc += pw;
        pw = pw.checked_mul(p)?;
        k += 1;
    }
    (acc == l).then_some(k)
}
