//! Exact multiplicative order of the brickwork matrix in `GL_L(F_p)`.
//!
//! Two independent routes. Direct iteration follows the orbits of `e_0` and
//! `e_1`: `V` commutes with the two-site shift, whose images of these two
//! vectors span `F_p^L`, so the lcm of the two orbit lengths is the order.
//! Divisor descent starts from a multiple `M` with `V^M = I` (checked by
//! exact powering) and strips prime factors while the power stays trivial.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::arith::{ceil_log, factor_product, from_factors, mult_order, split_power};
use super::brickwork::BrickworkMatrix;
use super::gf::FpMat;
use crate::error::{Error, Result};

pub fn big_str<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn opt_big_str<S: Serializer>(x: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OrderOptions {
    /// Floquet steps per basis-vector orbit for the direct route.
    pub direct_budget: u64,
    /// Pollard-rho iterations for factoring the multiple.
    pub factor_budget: u64,
}

impl Default for OrderOptions {
    fn default() -> Self {
        OrderOptions { direct_budget: 2_000_000, factor_budget: 1 << 22 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MultipleKind {
    /// `p(p^{2s} − 1)`, `s = n` for odd `n`, `s = n/2` for even `n`.
    ParityRule,
    /// `p^k (p^{2n'} − 1)` with `p^k ≥ L` and `n'` the order of `p` modulo
    /// the `p`-free part of `ℓ`; valid for every `L`.
    Universal,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorCertificate {
    pub kind: MultipleKind,
    #[serde(serialize_with = "big_str")]
    pub multiple: BigUint,
    pub multiple_factors: Vec<(u64, u32)>,
    pub t_factors: Vec<(u64, u32)>,
    /// `V^T = I` and `V^{T/q} ≠ I` for every prime `q | T`, by exact powering.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub l: usize,
    pub p: u64,
    #[serde(rename = "T", serialize_with = "big_str")]
    pub t: BigUint,
    pub ell: u64,
    /// Order of `p` modulo `ℓ` (absent when `p | ℓ`).
    pub n: Option<u64>,
    /// `s` from the parity rule.
    pub s: Option<u64>,
    /// Whether `V^{p(p^{2s}−1)} = I` for the parity-rule `s`.
    pub parity_multiple_annihilates: Option<bool>,
    pub divisor_certificate: Option<DivisorCertificate>,
    #[serde(serialize_with = "opt_big_str")]
    pub direct: Option<BigUint>,
    pub direct_budget_exhausted: bool,
    pub methods_agree: Option<bool>,
}

/// Sparse rows of `V`.
fn sparse_rows(v: &FpMat) -> Vec<Vec<(usize, u64)>> {
    (0..v.n).map(|i| (0..v.n).filter(|&j| v.get(i, j) != 0).map(|j| (j, v.get(i, j))).collect()).collect()
}

fn orbit_length(rows: &[Vec<(usize, u64)>], p: u64, start: &[u64], budget: u64) -> Option<u64> {
    let mut x = start.to_vec();
    let mut next = vec![0u64; x.len()];
    for k in 1..=budget {
        for (o, row) in next.iter_mut().zip(rows) {
            *o = row.iter().map(|&(j, c)| c * x[j] % p).sum::<u64>() % p;
        }
        std::mem::swap(&mut x, &mut next);
        if x == start {
            return Some(k);
        }
    }
    None
}

/// Order by following the orbits of `e_0` and `e_1`.
pub fn direct_order(m: &BrickworkMatrix, budget: u64) -> Option<BigUint> {
    let rows = sparse_rows(&m.v);
    let mut t = BigUint::one();
    for i in 0..2.min(m.l) {
        let mut e = vec![0u64; m.l];
        e[i] = 1;
        let k = orbit_length(&rows, m.p, &e, budget)?;
        t = t.lcm(&BigUint::from(k));
    }
    Some(t)
}

fn pow_checked(p: u64, e: u64) -> Result<u64> {
    u32::try_from(e)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .filter(|x| x.checked_add(1).is_some())
        .ok_or_else(|| Error::CapExceeded { what: format!("{p}^{e} in 64 bits"), needed: e as u128, cap: 64 })
}

/// Pieces whose product is the multiple, as 64-bit integers.
fn multiple_pieces(kind: &MultipleKind, p: u64, l: usize, ell: u64, n: Option<u64>) -> Result<Vec<u64>> {
    match kind {
        MultipleKind::ParityRule => {
            let n = n.expect("parity rule needs gcd(ℓ, p) = 1");
            let s = if n % 2 == 1 { n } else { n / 2 };
            let ps = pow_checked(p, s)?;
            Ok(vec![p, ps - 1, ps + 1])
        }
        MultipleKind::Universal => {
            let (_, free) = split_power(ell, p);
            let n1 = mult_order(p, free).expect("coprime by construction");
            let ps = pow_checked(p, n1)?;
            let k = ceil_log(p, l as u64);
            let mut v = vec![p; k as usize];
            v.push(ps - 1);
            v.push(ps + 1);
            Ok(v)
        }
    }
}

pub fn parity_rule_s(n: u64) -> u64 {
    if n % 2 == 1 { n } else { n / 2 }
}

/// Strip prime factors of `multiple` while `V^{T/q} = I`.
fn descend(v: &FpMat, factors: &std::collections::BTreeMap<u64, u32>) -> (BigUint, Vec<(u64, u32)>, bool) {
    let mut t = from_factors(factors);
    let mut tf = factors.clone();
    for (&q, e) in factors.iter() {
        let qb = BigUint::from(q);
        for _ in 0..*e {
            let cand = &t / &qb;
            if v.pow_big(&cand).is_identity() {
                t = cand;
                *tf.get_mut(&q).expect("present") -= 1;
            } else {
                break;
            }
        }
    }
    tf.retain(|_, e| *e > 0);
    let ok = v.pow_big(&t).is_identity() && tf.keys().all(|&q| !v.pow_big(&(&t / BigUint::from(q))).is_identity());
    (t, tf.into_iter().collect(), ok)
}

pub fn matrix_order(m: &BrickworkMatrix, opts: &OrderOptions) -> Result<OrderReport> {
    let (l, p) = (m.l, m.p);
    let ell = (l / 2) as u64;
    let n = mult_order(p, ell);
    let s = n.map(parity_rule_s);

    let mut parity_ok = None;
    let mut cert = None;
    let mut kinds = Vec::new();
    if n.is_some() {
        kinds.push(MultipleKind::ParityRule);
    }
    kinds.push(MultipleKind::Universal);
    for kind in kinds {
        let pieces = match multiple_pieces(&kind, p, l, ell, n) {
            Ok(x) => x,
            Err(_) => break,
        };
        let mut budget = opts.factor_budget;
        let Some(factors) = factor_product(&pieces, &mut budget) else { break };
        let multiple = from_factors(&factors);
        let annihilates = m.v.pow_big(&multiple).is_identity();
        if kind == MultipleKind::ParityRule {
            parity_ok = Some(annihilates);
        }
        if !annihilates {
            if kind == MultipleKind::Universal {
                return Err(Error::Verification(format!("V^M ≠ I for the universal multiple at L={l}, p={p}")));
            }
            continue;
        }
        let (t, t_factors, verified) = descend(&m.v, &factors);
        cert = Some((
            t,
            DivisorCertificate { kind, multiple, multiple_factors: factors.into_iter().collect(), t_factors, verified },
        ));
        break;
    }

    let direct = direct_order(m, opts.direct_budget);
    let t = match (&cert, &direct) {
        (Some((t, _)), _) => t.clone(),
        (None, Some(d)) => d.clone(),
        (None, None) => {
            return Err(Error::CapExceeded {
                what: format!("order of V at L={l}, p={p}: factorization and direct iteration both over budget"),
                needed: opts.direct_budget as u128 + 1,
                cap: opts.direct_budget as u128,
            })
        }
    };
    let methods_agree = match (&cert, &direct) {
        (Some((t, _)), Some(d)) => Some(t == d),
        _ => None,
    };
    if methods_agree == Some(false) {
        return Err(Error::Verification(format!("direct and divisor orders differ at L={l}, p={p}")));
    }
    if let Some((_, c)) = &cert {
        if !c.verified {
            return Err(Error::Verification(format!("minimality certificate failed at L={l}, p={p}")));
        }
    }
    Ok(OrderReport {
        l,
        p,
        t,
        ell,
        n,
        s,
        parity_multiple_annihilates: parity_ok,
        divisor_certificate: cert.map(|(_, c)| c),
        direct_budget_exhausted: direct.is_none(),
        direct,
        methods_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_ca::brickwork::build_v;

    fn brute(m: &BrickworkMatrix) -> u64 {
        let mut x = m.v.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(&m.v);
            k += 1;
        }
        k
    }

    #[test]
    fn both_routes_match_repeated_multiplication() {
        for p in [3, 5, 7] {
            for l in (2..=12).step_by(2) {
                let m = build_v(l, p).unwrap();
                let r = matrix_order(&m, &OrderOptions::default()).unwrap();
                assert_eq!(r.t, BigUint::from(brute(&m)), "L={l} p={p}");
                assert_eq!(r.methods_agree, Some(true));
            }
        }
    }

    #[test]
    fn descent_alone_when_direct_is_starved() {
        let m = build_v(20, 3).unwrap();
        let r = matrix_order(&m, &OrderOptions { direct_budget: 10, ..Default::default() }).unwrap();
        assert!(r.direct_budget_exhausted);
        assert!(r.divisor_certificate.as_ref().unwrap().verified);
        assert!(m.v.pow_big(&r.t).is_identity());
    }
}
