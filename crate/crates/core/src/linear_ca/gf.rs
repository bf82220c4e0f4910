//! Exact arithmetic over `F_p` and its extensions `F_{p^n}`.

use serde::{Deserialize, Serialize};

use super::arith::{factor_u64, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

pub fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p > u32::MAX as u64 || !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime below 2^32")));
    }
    Ok(())
}

/// Dense matrix over `F_p`, entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMat {
    pub p: u64,
    pub n: usize,
    pub data: Vec<u64>,
}

impl FpMat {
    pub fn zeros(p: u64, n: usize) -> Self {
        FpMat { p, n, data: vec![0; n * n] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v.rem_euclid(self.p as i64) as u64;
    }

    pub fn mul(&self, o: &FpMat) -> FpMat {
        let n = self.n;
        let p = self.p;
        let mut out = FpMat::zeros(p, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let row = &o.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = (*d + a * b) % p;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(a, b)| a * b % self.p).sum::<u64>() % self.p)
            .collect()
    }

    /// `self^e` for an exponent given in binary, most significant bit first.
    pub fn pow_bits(&self, bits: &[bool]) -> FpMat {
        let mut r = FpMat::identity(self.p, self.n);
        for &b in bits {
            r = r.mul(&r);
            if b {
                r = r.mul(self);
            }
        }
        r
    }

    pub fn pow_big(&self, e: &num_bigint::BigUint) -> FpMat {
        let bits: Vec<bool> = (0..e.bits()).rev().map(|i| e.bit(i)).collect();
        self.pow_bits(&bits)
    }

    pub fn is_identity(&self) -> bool {
        *self == FpMat::identity(self.p, self.n)
    }

    pub fn sub(&self, o: &FpMat) -> FpMat {
        let p = self.p;
        FpMat { p, n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| (a + p - b) % p).collect() }
    }

    /// Rank and determinant by Gaussian elimination.
    pub fn rank_det(&self) -> (usize, u64) {
        let p = self.p;
        let n = self.n;
        let mut m = self.data.clone();
        let mut rank = 0;
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for c in 0..n {
                    m.swap(piv * n + c, rank * n + c);
                }
                det = (p - det) % p;
            }
            let pv = m[rank * n + col];
            det = mul_mod(det, pv, p);
            let inv = pow_mod(pv, (p - 2) as u128, p);
            for r in 0..n {
                if r == rank || m[r * n + col] == 0 {
                    continue;
                }
                let f = mul_mod(m[r * n + col], inv, p);
                for c in 0..n {
                    m[r * n + c] = (m[r * n + c] + p - mul_mod(f, m[rank * n + c], p)) % p;
                }
            }
            rank += 1;
        }
        (rank, if rank < n { 0 } else { det })
    }
}

/// Polynomials over `F_p`, coefficients lowest degree first, no trailing zeros.
pub type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let inv = pow_mod(m[dm], (p - 2) as u128, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let f = mul_mod(*r.last().expect("nonempty"), inv, p);
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(f, c, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Poly {
    let mut r: Poly = vec![1];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = poly_rem(&poly_mul(&r, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

/// Rabin's test for a monic polynomial of degree `n`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // x^{p^k} mod f by repeated p-th powers
    let frob = |k: usize| -> Poly {
        let mut r = x.clone();
        for _ in 0..k {
            r = poly_powmod(&r, p as u128, f, p);
        }
        r
    };
    if poly_sub(&frob(n), &x, p) != Vec::<u64>::new() {
        return false;
    }
    let mut budget = 1 << 16;
    let primes = factor_u64(n as u64, &mut budget).expect("small degree");
    for (&r, _) in &primes {
        let g = poly_gcd(f, &poly_sub(&frob(n / r as usize), &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `n` whose coefficient vector
/// `(c_{n−1}, …, c_0)` is lexicographically smallest.
pub fn smallest_irreducible(p: u64, n: usize) -> Poly {
    let count = (p as u128).pow(n as u32);
    for k in 0..count {
        let mut f = vec![0u64; n + 1];
        let mut r = k;
        for c in f.iter_mut().take(n) {
            *c = (r % p as u128) as u64;
            r /= p as u128;
        }
        f[n] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// `F_{p^n} = F_p[x]/(f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gf {
    pub p: u64,
    pub n: usize,
    /// Monic modulus, lowest degree first.
    pub modulus: Poly,
}

/// An element as `n` coefficients, lowest degree first.
pub type GfElem = Vec<u64>;

impl Gf {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        check_odd_prime(p)?;
        if n == 0 {
            return Err(Error::Precondition("extension degree must be at least 1".into()));
        }
        Ok(Gf { p, n, modulus: smallest_irreducible(p, n) })
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    pub fn zero(&self) -> GfElem {
        vec![0; self.n]
    }

    pub fn one(&self) -> GfElem {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> GfElem {
        let mut e = self.zero();
        e[0] = k.rem_euclid(self.p as i64) as u64;
        e
    }

    fn pad(&self, mut a: Poly) -> GfElem {
        a.resize(self.n, 0);
        a
    }

    pub fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &GfElem) -> GfElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        self.pad(poly_rem(&poly_mul(&trim(a.clone()), &trim(b.clone()), self.p), &self.modulus, self.p))
    }

    pub fn pow(&self, a: &GfElem, e: u128) -> GfElem {
        self.pad(poly_powmod(&trim(a.clone()), e, &self.modulus, self.p))
    }

    pub fn inv(&self, a: &GfElem) -> Result<GfElem> {
        if self.is_zero(a) {
            return Err(Error::Precondition("inverse of zero".into()));
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn is_zero(&self, a: &GfElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: &GfElem) -> u128 {
        let q1 = self.order() - 1;
        let mut ord = q1;
        let mut budget = 1 << 24;
        let f = factor_u64(q1 as u64, &mut budget).expect("q − 1 below 2^64");
        for (&r, _) in &f {
            while ord % r as u128 == 0 && self.pow(a, ord / r as u128) == self.one() {
                ord /= r as u128;
            }
        }
        ord
    }

    /// The smallest generator of the multiplicative group, in the order of
    /// [`Gf::from_index`].
    pub fn primitive_element(&self) -> GfElem {
        let q1 = self.order() - 1;
        (1..self.order()).map(|k| self.from_index(k)).find(|g| self.elem_order(g) == q1).expect("cyclic group")
    }

    /// Element with base-`p` digits of `k` as coefficients.
    pub fn from_index(&self, mut k: u128) -> GfElem {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = (k % self.p as u128) as u64;
            k /= self.p as u128;
        }
        e
    }

    /// Render as a polynomial in `x`.
    pub fn show(&self, a: &GfElem) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 if c == 1 => "x".into(),
                1 => format!("{c}x"),
                _ if c == 1 => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() { "0".into() } else { terms.join("+") }
    }
}

/// 2×2 matrix over `F_{p^n}`, row-major.
pub type Gf2 = [GfElem; 4];

pub fn gf2_mul(f: &Gf, a: &Gf2, b: &Gf2) -> Gf2 {
    let e = |i: usize, j: usize| f.add(&f.mul(&a[2 * i], &b[j]), &f.mul(&a[2 * i + 1], &b[2 + j]));
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

pub fn gf2_pow(f: &Gf, a: &Gf2, mut e: u128) -> Gf2 {
    let mut r: Gf2 = [f.one(), f.zero(), f.zero(), f.one()];
    let mut b = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = gf2_mul(f, &r, &b);
        }
        b = gf2_mul(f, &b, &b);
        e >>= 1;
    }
    r
}

pub fn gf2_is_identity(f: &Gf, a: &Gf2) -> bool {
    a[0] == f.one() && a[3] == f.one() && f.is_zero(&a[1]) && f.is_zero(&a[2])
}
