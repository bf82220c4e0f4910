//! Computational checks of the order bounds for the linear brickwork matrix.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::arith::{factor_product, from_factors, mult_order, pow_mod, repunit_length};
use super::brickwork::{build_v, shift};
use super::gf::{check_odd_prime, gf2_is_identity, gf2_pow, FpMat, Gf, Gf2};
use super::order::{big_str, matrix_order, opt_big_str, parity_rule_s, OrderOptions};
use crate::error::{Error, Result};

pub fn order_of(l: usize, p: u64, opts: &OrderOptions) -> Result<BigUint> {
    Ok(matrix_order(&build_v(l, p)?, opts)?.t)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryRow {
    pub m: u32,
    pub l: usize,
    #[serde(rename = "T", serialize_with = "big_str")]
    pub t: BigUint,
    /// `μ` with `T = a·p^μ`, if `T` has that shape.
    pub mu: Option<u32>,
    pub mu_in_range: bool,
    pub mu_equals_m: bool,
    pub methods_agree: Option<bool>,
    pub lower_bound_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub p: u64,
    /// Twice the order of `−4` in `F_p^×`.
    pub a: u64,
    pub rows: Vec<CorollaryRow>,
    pub ok: bool,
}

/// `T(2p^m) = a·p^μ` with `μ ∈ {m−2, m−1, m}`, for `m = 0..=m_max`.
pub fn verify_corollary_2pm(p: u64, m_max: u32, opts: &OrderOptions) -> Result<CorollaryReport> {
    check_odd_prime(p)?;
    let a = 2 * mult_order((p - 4 % p) % p, p).expect("−4 is a unit for odd p");
    let mut rows = Vec::new();
    for m in 0..=m_max {
        let l = 2 * (p as usize).pow(m);
        let r = matrix_order(&build_v(l, p)?, opts)?;
        let t = r.t.clone();
        let (q, rem) = t.div_rem(&BigUint::from(a));
        let mut mu = None;
        if rem.is_zero() {
            let mut q = q;
            let mut e = 0;
            while (&q % p).is_zero() {
                q /= p;
                e += 1;
            }
            if q.is_one() {
                mu = Some(e);
            }
        }
        let mu_in_range = mu.is_some_and(|u| u <= m && u + 2 >= m);
        rows.push(CorollaryRow {
            m,
            l,
            lower_bound_ok: &t * 4u32 >= BigUint::from(l),
            t,
            mu,
            mu_in_range,
            mu_equals_m: mu == Some(m),
            methods_agree: r.methods_agree,
        });
    }
    let ok = rows.iter().all(|r| r.mu_in_range && r.lower_bound_ok);
    Ok(CorollaryReport { p, a, rows, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundRow {
    pub p: u64,
    pub l: usize,
    #[serde(rename = "T", serialize_with = "big_str")]
    pub t: BigUint,
    pub ok: bool,
}

/// `T ≥ L/4` for every even `L ≤ l_max` and each `p`.
pub fn lower_bound_sweep(primes: &[u64], l_max: usize, opts: &OrderOptions) -> Result<Vec<LowerBoundRow>> {
    let mut out = Vec::new();
    for &p in primes {
        for l in (2..=l_max).step_by(2) {
            let t = order_of(l, p, opts)?;
            out.push(LowerBoundRow { p, l, ok: &t * 4u32 >= BigUint::from(l), t });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RepunitCheck {
    /// `ℓ = (p^k − 1)/(p − 1)`.
    pub k: u32,
    /// `p(p−1)ℓ((p−1)ℓ+1)`.
    #[serde(serialize_with = "big_str")]
    pub quadratic_bound: BigUint,
    pub within: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityReport {
    pub p: u64,
    pub l: usize,
    pub ell: u64,
    pub n: u64,
    /// `s = n` for odd `n`, `n/2` for even `n`.
    pub s: u64,
    #[serde(rename = "T", serialize_with = "big_str")]
    pub t: BigUint,
    #[serde(serialize_with = "big_str")]
    pub bound: BigUint,
    pub divides: bool,
    #[serde(serialize_with = "opt_big_str")]
    pub quotient: Option<BigUint>,
    /// The same test with `s = n`, i.e. `p(p^{2n} − 1)`.
    #[serde(serialize_with = "big_str")]
    pub bound_s_equals_n: BigUint,
    pub divides_s_equals_n: bool,
    /// Whether `−1` is a power of `p` modulo `ℓ`.
    pub minus_one_in_p_powers: bool,
    #[serde(serialize_with = "big_str")]
    pub exponential_bound: BigUint,
    /// `None` for `ℓ = 1`, where the bound does not apply.
    pub within_exponential_bound: Option<bool>,
    pub repunit: Option<RepunitCheck>,
}

pub fn verify_divisibility(p: u64, l: usize, opts: &OrderOptions) -> Result<DivisibilityReport> {
    check_odd_prime(p)?;
    let ell = (l / 2) as u64;
    let n = mult_order(p, ell)
        .filter(|_| l % 2 == 0 && l >= 2)
        .ok_or_else(|| Error::Precondition(format!("needs even L and gcd(ℓ, p) = 1, got L={l}, p={p}")))?;
    let s = parity_rule_s(n);
    let t = order_of(l, p, opts)?;
    let pb = BigUint::from(p);
    let bound_for = |s: u64| &pb * (pb.pow(2 * s as u32) - 1u32);
    let bound = bound_for(s);
    let (q, r) = bound.div_rem(&t);
    let bound_n = bound_for(n);
    let exp = pb.pow(l as u32 - 1) - &pb;
    let repunit = repunit_length(ell, p).map(|k| {
        let e = BigUint::from(ell);
        let pm = BigUint::from(p - 1);
        let qb = &pb * &pm * &e * (&pm * &e + 1u32);
        RepunitCheck { k, within: t <= qb, quadratic_bound: qb }
    });
    Ok(DivisibilityReport {
        p,
        l,
        ell,
        n,
        s,
        divides: r.is_zero(),
        quotient: r.is_zero().then_some(q),
        divides_s_equals_n: (&bound_n % &t).is_zero(),
        bound_s_equals_n: bound_n,
        minus_one_in_p_powers: (0..n).any(|k| pow_mod(p, k as u128, ell) == ell - 1),
        within_exponential_bound: (ell >= 2).then(|| t <= exp),
        exponential_bound: exp,
        bound,
        t,
        repunit,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Generic,
    /// `ω = −1`: the block is `−2·I`.
    MinusOne,
    /// `ω + ω⁻¹ = 6`: double eigenvalue 2, not diagonalizable.
    TraceSix,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockInfo {
    /// `ω = ω₀^k`.
    pub k: u64,
    pub omega: String,
    pub kind: BlockKind,
    /// `λ² + (2 − ω − ω⁻¹)λ + 4` matches trace and determinant of the block.
    pub charpoly_ok: bool,
    pub order: u128,
    /// For the special kinds: whether the order is the predicted one.
    pub special_order_ok: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSpectrumReport {
    pub p: u64,
    pub l: usize,
    pub ell: u64,
    pub n: u64,
    /// Irreducible modulus of `F_{p^n}`, lowest degree first.
    pub modulus: Vec<u64>,
    pub omega0: String,
    pub blocks: Vec<BlockInfo>,
    pub lcm: u128,
    #[serde(rename = "T", serialize_with = "big_str")]
    pub t: BigUint,
    pub lcm_equals_t: bool,
}

/// `V(ω) = (ω⁻¹−1, −ω⁻¹−1; ω+1, ω−1)`.
pub fn block(f: &Gf, w: &[u64]) -> Result<Gf2> {
    let w = w.to_vec();
    let wi = f.inv(&w)?;
    let one = f.one();
    Ok([f.sub(&wi, &one), f.neg(&f.add(&wi, &one)), f.add(&w, &one), f.sub(&w, &one)])
}

/// Order of an invertible 2×2 matrix over `F_q`; it divides `p(q² − 1)`.
pub fn block_order(f: &Gf, m: &Gf2) -> Result<u128> {
    let q = u64::try_from(f.order()).map_err(|_| Error::Precondition("field too large".into()))?;
    let mut budget = 1 << 22;
    let fac = factor_product(&[f.p, q - 1, q.checked_add(1).ok_or_else(|| Error::Precondition("field too large".into()))?], &mut budget)
        .ok_or_else(|| Error::CapExceeded { what: "factoring p(q²−1)".into(), needed: 1 << 23, cap: 1 << 22 })?;
    let mut t = from_factors(&fac).to_u128().expect("fits");
    if !gf2_is_identity(f, &gf2_pow(f, m, t)) {
        return Err(Error::Verification("block order does not divide p(q²−1)".into()));
    }
    for (&r, &e) in &fac {
        for _ in 0..e {
            if gf2_is_identity(f, &gf2_pow(f, m, t / r as u128)) {
                t /= r as u128;
            } else {
                break;
            }
        }
    }
    Ok(t)
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 { a } else { gcd_u128(b, a % b) }
}

pub fn block_spectrum(p: u64, l: usize, opts: &OrderOptions) -> Result<BlockSpectrumReport> {
    check_odd_prime(p)?;
    let ell = (l / 2) as u64;
    let n = mult_order(p, ell)
        .filter(|_| l % 2 == 0 && l >= 2)
        .ok_or_else(|| Error::Precondition(format!("needs even L and gcd(ℓ, p) = 1, got L={l}, p={p}")))?;
    let f = Gf::new(p, n as usize)?;
    let g = f.primitive_element();
    let w0 = f.pow(&g, (f.order() - 1) / ell as u128);
    let two = f.from_int(2);
    let six = f.from_int(6);
    let four = f.from_int(4);
    let minus_one = f.from_int(-1);
    let mut blocks = Vec::new();
    let mut lcm = 1u128;
    for k in 0..ell {
        let w = f.pow(&w0, k as u128);
        let b = block(&f, &w)?;
        let tr_w = f.add(&w, &f.inv(&w)?);
        let tr = f.add(&b[0], &b[3]);
        let det = f.sub(&f.mul(&b[0], &b[3]), &f.mul(&b[1], &b[2]));
        let charpoly_ok = tr == f.sub(&tr_w, &two) && det == four;
        let order = block_order(&f, &b)?;
        let kind = if w == minus_one {
            BlockKind::MinusOne
        } else if tr_w == six {
            BlockKind::TraceSix
        } else {
            BlockKind::Generic
        };
        let special_order_ok = match kind {
            BlockKind::Generic => None,
            BlockKind::MinusOne => {
                let m2 = f.neg(&two);
                let is_m2 = b[0] == m2 && b[3] == m2 && f.is_zero(&b[1]) && f.is_zero(&b[2]);
                Some(is_m2 && order == mult_order(p - 2, p).expect("unit") as u128)
            }
            BlockKind::TraceSix => {
                let not_scalar = !(f.is_zero(&b[1]) && f.is_zero(&b[2]));
                Some(not_scalar && order == p as u128 * mult_order(2, p).expect("unit") as u128)
            }
        };
        lcm = lcm / gcd_u128(lcm, order) * order;
        blocks.push(BlockInfo { k, omega: f.show(&w), kind, charpoly_ok, order, special_order_ok });
    }
    let t = order_of(l, p, opts)?;
    Ok(BlockSpectrumReport {
        p,
        l,
        ell,
        n,
        modulus: f.modulus.clone(),
        omega0: f.show(&w0),
        lcm_equals_t: BigUint::from(lcm) == t,
        blocks,
        lcm,
        t,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoprimeReport {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    #[serde(serialize_with = "big_str")]
    pub t_2a: BigUint,
    #[serde(serialize_with = "big_str")]
    pub t_2b: BigUint,
    #[serde(serialize_with = "big_str")]
    pub t_2ab: BigUint,
    #[serde(serialize_with = "big_str")]
    pub lcm: BigUint,
    /// Smallest `d | p−1` with `lcm | T(2ab)·d` and `T(2ab) | lcm·d`.
    pub d: Option<u64>,
}

pub fn coprime_decomposition_check(p: u64, a: u64, b: u64, opts: &OrderOptions) -> Result<CoprimeReport> {
    check_odd_prime(p)?;
    if a == 0 || b == 0 || a.gcd(&b) != 1 {
        return Err(Error::Precondition(format!("{a} and {b} must be coprime and positive")));
    }
    let t_2a = order_of(2 * a as usize, p, opts)?;
    let t_2b = order_of(2 * b as usize, p, opts)?;
    let t_2ab = order_of(2 * (a * b) as usize, p, opts)?;
    let lcm = t_2a.lcm(&t_2b);
    let d = (1..p).filter(|d| (p - 1) % d == 0).find(|&d| {
        (&t_2ab * d % &lcm).is_zero() && (&lcm * d % &t_2ab).is_zero()
    });
    Ok(CoprimeReport { p, a, b, t_2a, t_2b, t_2ab, lcm, d })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub p: u64,
    pub m: u32,
    pub l: usize,
    /// `dim ker(C² − I)`.
    pub kernel_dim: usize,
    /// `(V² + 4)^L = 0`, i.e. `V²` has the single eigenvalue `−4`.
    pub v2_single_eigenvalue: bool,
}

/// Kernel of the nilpotent part of the two-site shift at `L = 2p^m`.
pub fn kernel_check(p: u64, m: u32) -> Result<KernelReport> {
    check_odd_prime(p)?;
    let l = 2 * (p as usize).pow(m);
    let c2 = shift(l, p).mul(&shift(l, p));
    let (rank, _) = c2.sub(&FpMat::identity(p, l)).rank_det();
    let v = build_v(l, p)?.v;
    let mut four = FpMat::zeros(p, l);
    for i in 0..l {
        four.set(i, i, -4);
    }
    let nil = v.mul(&v).sub(&four);
    let z = nil.pow_big(&BigUint::from(l));
    Ok(KernelReport { p, m, l, kernel_dim: l - rank, v2_single_eigenvalue: z.data.iter().all(|&x| x == 0) })
}
