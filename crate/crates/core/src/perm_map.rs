//! Permutation gates `U(a, b) = (c, d)` stored as the pair of squares `C`, `D`.
//!
//! Labels are `1..=N` in text and JSON, zero-based in memory.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cmatrix::{CMat, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tensor::Gate;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermMap {
    n: usize,
    // row-major over (a, b)
    c: Vec<u8>,
    d: Vec<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFlags {
    pub bijective: bool,
    pub dual_unitary: bool,
    pub perfect: bool,
    pub self_orthogonal: bool,
}

impl PermMap {
    /// Squares with zero-based entries, row index `a`, column index `b`.
    pub fn new(n: usize, c: Vec<u8>, d: Vec<u8>) -> Result<Self> {
        if n == 0 || n > 255 {
            return Err(Error::Malformed(format!("N = {n} out of range")));
        }
        if c.len() != n * n || d.len() != n * n {
            return Err(Error::Malformed(format!("squares must have {} cells", n * n)));
        }
        if let Some(&x) = c.iter().chain(&d).find(|&&x| x as usize >= n) {
            return Err(Error::Malformed(format!("label {} out of 1..={n}", x as usize + 1)));
        }
        Ok(PermMap { n, c, d })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> (usize, usize)) -> Result<Self> {
        let mut c = Vec::with_capacity(n * n);
        let mut d = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (x, y) = f(a, b);
                if x >= n || y >= n {
                    return Err(Error::Malformed(format!("image ({x},{y}) out of range")));
                }
                c.push(x as u8);
                d.push(y as u8);
            }
        }
        Ok(PermMap { n, c, d })
    }

    pub fn swap(n: usize) -> Self {
        Self::from_fn(n, |a, b| (b, a)).expect("in range")
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |a, b| (a, b)).expect("in range")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, a: usize, b: usize) -> (usize, usize) {
        let k = a * self.n + b;
        (self.c[k] as usize, self.d[k] as usize)
    }

    pub fn c_square(&self) -> &[u8] {
        &self.c
    }

    pub fn d_square(&self) -> &[u8] {
        &self.d
    }

    /// `(c, d)` pairs in row-major `(a, b)` order; the lex order used for canonical forms.
    pub fn serialize_cd(&self) -> Vec<u8> {
        self.c.iter().zip(&self.d).flat_map(|(&x, &y)| [x, y]).collect()
    }

    fn pairing_bijective(&self, f: impl Fn(usize, usize, usize, usize) -> ((usize, usize), (usize, usize))) -> bool {
        let n = self.n;
        let mut seen_key = vec![false; n * n];
        let mut seen_val = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                let (c, d) = self.apply(a, b);
                let ((k0, k1), (v0, v1)) = f(a, b, c, d);
                let (k, v) = (k0 * n + k1, v0 * n + v1);
                if seen_key[k] || seen_val[v] {
                    return false;
                }
                seen_key[k] = true;
                seen_val[v] = true;
            }
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.pairing_bijective(|a, b, c, d| ((a, b), (c, d)))
    }

    pub fn is_dual_unitary(&self) -> bool {
        self.is_bijective() && self.pairing_bijective(|a, b, c, d| ((a, c), (b, d)))
    }

    pub fn is_perfect(&self) -> bool {
        self.is_dual_unitary() && self.pairing_bijective(|a, b, c, d| ((a, d), (b, c)))
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| (0..n).all(|b| self.d[a * n + b] == self.c[b * n + a]))
    }

    /// `c` depends only on `b` and `d` only on `a`: a SWAP dressed by one-site permutations.
    pub fn is_non_interacting(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| self.c[a * n + b] == self.c[b] && self.d[a * n + b] == self.d[a * n])
        })
    }

    pub fn check_flags(&self) -> MapFlags {
        MapFlags {
            bijective: self.is_bijective(),
            dual_unitary: self.is_dual_unitary(),
            perfect: self.is_perfect(),
            self_orthogonal: self.is_self_orthogonal(),
        }
    }

    pub fn inverse(&self) -> Result<PermMap> {
        if !self.is_bijective() {
            return Err(Error::NotPermutation("map is not a bijection".into()));
        }
        let n = self.n;
        let mut c = vec![0u8; n * n];
        let mut d = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let (x, y) = self.apply(a, b);
                c[x * n + y] = a as u8;
                d[x * n + y] = b as u8;
            }
        }
        Ok(PermMap { n, c, d })
    }

    /// `P U P`.
    pub fn space_reflect(&self) -> PermMap {
        PermMap::from_fn(self.n, |a, b| {
            let (c, d) = self.apply(b, a);
            (d, c)
        })
        .expect("in range")
    }

    /// `U^t`, which for a permutation gate is the inverse map.
    pub fn time_reflect(&self) -> Result<PermMap> {
        self.inverse()
    }

    /// `(A⊗B) U (B⁻¹⊗A⁻¹)` for one-site permutations `A`, `B` (zero-based images).
    pub fn diag_sim(&self, a_perm: &[usize], b_perm: &[usize]) -> Result<PermMap> {
        let n = self.n;
        let a_inv = invert_perm(a_perm, n)?;
        let b_inv = invert_perm(b_perm, n)?;
        PermMap::from_fn(n, |x, y| {
            let (c, d) = self.apply(b_inv[x], a_inv[y]);
            (a_perm[c], b_perm[d])
        })
    }

    /// `(A⊗B) U (C⊗D)` for one-site permutations.
    pub fn dress(&self, a: &[usize], b: &[usize], c: &[usize], d: &[usize]) -> Result<PermMap> {
        let n = self.n;
        for p in [a, b, c, d] {
            invert_perm(p, n)?;
        }
        PermMap::from_fn(n, |x, y| {
            let (u, v) = self.apply(c[x], d[y]);
            (a[u], b[v])
        })
    }

    /// `U^R(c, a) = (d, b)`; defined for dual-unitary maps.
    pub fn reshuffle_r(&self) -> Result<PermMap> {
        if !self.is_dual_unitary() {
            return Err(Error::NotDualUnitary("U^R is a permutation only for DU maps".into()));
        }
        let n = self.n;
        let mut c = vec![0u8; n * n];
        let mut d = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let (x, y) = self.apply(a, b);
                c[x * n + a] = y as u8;
                d[x * n + a] = b as u8;
            }
        }
        Ok(PermMap { n, c, d })
    }

    pub fn to_gate(&self) -> Gate {
        Gate::from_components(self.n, self.n, |a, b, c, d| {
            if self.apply(a, b) == (c, d) {
                ONE
            } else {
                ZERO
            }
        })
    }

    /// Recover a map from a 0/1 gate, if it is one.
    pub fn from_gate(g: &Gate, tol: f64) -> Result<PermMap> {
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous { n: g.n(), m: g.m() });
        }
        let n = g.n();
        let e = g.entries();
        let cols = e.as_monomial(tol).ok_or_else(|| Error::NotPermutation("gate is not monomial".into()))?;
        for (j, &i) in cols.iter().enumerate() {
            if (e[(i, j)] - ONE).norm() > tol {
                return Err(Error::NotPermutation("non-unit entry".into()));
            }
        }
        PermMap::from_fn(n, |a, b| {
            let row = cols[a * n + b];
            (row / n, row % n)
        })
    }

    pub fn to_cmat(&self) -> CMat {
        self.to_gate().into_entries()
    }

    /// Set-theoretic Yang-Baxter relation `U12 U23 U12 = U23 U12 U23` on all of `X³`.
    pub fn yang_baxter(&self) -> bool {
        let n = self.n;
        let u12 = |x: [usize; 3]| {
            let (p, q) = self.apply(x[0], x[1]);
            [p, q, x[2]]
        };
        let u23 = |x: [usize; 3]| {
            let (p, q) = self.apply(x[1], x[2]);
            [x[0], p, q]
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let x = [a, b, c];
                    // rightmost factor acts first
                    if u12(u23(u12(x))) != u23(u12(u23(x))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn transform(&self, op: &MapTransform) -> Result<PermMap> {
        match op {
            MapTransform::SpaceReflect => Ok(self.space_reflect()),
            MapTransform::TimeReflect => self.time_reflect(),
            MapTransform::DiagSim { a, b } => self.diag_sim(a, b),
            MapTransform::ReshuffleR => self.reshuffle_r(),
        }
    }

    /// Orbit under space reflection, time reflection and diagonal similarities,
    /// optionally also closing under `U^R`.
    pub fn orbit(&self, with_reshuffle: bool) -> Result<BTreeSet<PermMap>> {
        let n = self.n;
        let mut gens: Vec<MapTransform> = vec![MapTransform::SpaceReflect, MapTransform::TimeReflect];
        let id: Vec<usize> = (0..n).collect();
        for p in symmetric_group_generators(n) {
            gens.push(MapTransform::DiagSim { a: p.clone(), b: id.clone() });
            gens.push(MapTransform::DiagSim { a: id.clone(), b: p });
        }
        if with_reshuffle {
            gens.push(MapTransform::ReshuffleR);
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.clone()];
        seen.insert(self.clone());
        while let Some(m) = stack.pop() {
            for g in &gens {
                let img = m.transform(g)?;
                if seen.insert(img.clone()) {
                    stack.push(img);
                }
            }
        }
        Ok(seen)
    }

    /// Lexicographically least element of the orbit under
    /// {space reflection, time reflection} × {diag_sim(A, B)}.
    pub fn canonical_form(&self) -> Result<PermMap> {
        if !self.is_bijective() {
            return Err(Error::NotPermutation("canonical form needs a bijection".into()));
        }
        let n = self.n;
        let perms = all_permutations(n);
        let mut best: Option<Vec<u8>> = None;
        let mut best_map = None;
        let inv = self.inverse()?;
        let bases = [self.clone(), self.space_reflect(), inv.clone(), inv.space_reflect()];
        for base in &bases {
            for a in &perms {
                for b in &perms {
                    let img = base.diag_sim(a, b)?;
                    let key = img.serialize_cd();
                    if best.as_ref().is_none_or(|k| key < *k) {
                        best = Some(key);
                        best_map = Some(img);
                    }
                }
            }
        }
        Ok(best_map.expect("nonempty group"))
    }

    pub fn render(&self) -> String {
        let n = self.n;
        let rows: Vec<String> = (0..n)
            .map(|a| {
                let cells: Vec<String> = (0..n)
                    .map(|b| {
                        let (c, d) = self.apply(a, b);
                        if n < 10 {
                            format!("{}{}", c + 1, d + 1)
                        } else {
                            format!("({},{})", c + 1, d + 1)
                        }
                    })
                    .collect();
                cells.join(" ")
            })
            .collect();
        rows.join(" / ")
    }

    /// Parse the compact `CD` notation, rows separated by `/` or newlines.
    pub fn parse(s: &str) -> Result<PermMap> {
        let rows: Vec<&str> = s.split(['/', '\n', ';']).map(str::trim).filter(|r| !r.is_empty()).collect();
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("empty map".into()));
        }
        let mut c = Vec::with_capacity(n * n);
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let cells = parse_row(row)?;
            if cells.len() != n {
                return Err(Error::Parse(format!("row {} has {} cells, expected {n}", i + 1, cells.len())));
            }
            for (x, y) in cells {
                if x == 0 || y == 0 || x > n || y > n {
                    return Err(Error::Parse(format!("label out of 1..={n} in row {}", i + 1)));
                }
                c.push((x - 1) as u8);
                d.push((y - 1) as u8);
            }
        }
        PermMap::new(n, c, d)
    }
}

fn parse_row(row: &str) -> Result<Vec<(usize, usize)>> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad label `{t}`")));
    if row.contains('(') {
        let mut out = vec![];
        for part in row.split(')') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let inner = part
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(c,d)`, got `{part}`")))?;
            let (x, y) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected `(c,d)`, got `{part}`")))?;
            out.push((num(x)?, num(y)?));
        }
        Ok(out)
    } else {
        row.split_whitespace()
            .map(|tok| {
                let ch: Vec<char> = tok.chars().collect();
                if ch.len() != 2 || !ch.iter().all(|c| c.is_ascii_digit()) {
                    return Err(Error::Parse(format!("cell `{tok}` is not two digits")));
                }
                Ok((ch[0] as usize - '0' as usize, ch[1] as usize - '0' as usize))
            })
            .collect()
    }
}

impl fmt::Display for PermMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for PermMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PermMap::parse(s)
    }
}

#[derive(Serialize, Deserialize)]
struct PermMapJson {
    n: usize,
    cd: String,
}

impl Serialize for PermMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermMapJson { n: self.n, cd: self.render() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PermMapJson::deserialize(d)?;
        let m = PermMap::parse(&j.cd).map_err(serde::de::Error::custom)?;
        if m.n != j.n {
            return Err(serde::de::Error::custom(format!("n = {} but table has {} rows", j.n, m.n)));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapTransform {
    SpaceReflect,
    TimeReflect,
    DiagSim { a: Vec<usize>, b: Vec<usize> },
    ReshuffleR,
}

pub fn invert_perm(p: &[usize], n: usize) -> Result<Vec<usize>> {
    if p.len() != n {
        return Err(Error::NotPermutation(format!("length {} ≠ {n}", p.len())));
    }
    let mut inv = vec![usize::MAX; n];
    for (i, &x) in p.iter().enumerate() {
        if x >= n || inv[x] != usize::MAX {
            return Err(Error::NotPermutation(format!("{p:?}")));
        }
        inv[x] = i;
    }
    Ok(inv)
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn symmetric_group_generators(n: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return vec![];
    }
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(0, 1);
    let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    vec![t, cyc]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivClassReport {
    pub n: usize,
    pub total_maps: u64,
    pub class_count: usize,
    pub non_interacting_classes: usize,
    pub perfect_classes: usize,
    pub representatives: Vec<PermMap>,
    pub class_sizes: Vec<u64>,
    pub group_order: u64,
    /// Classes when `U^R` is added to the equivalence group (diagnostic).
    pub reshuffle_inclusive_count: usize,
}

/// Row-Latin squares (each row a permutation), as zero-based row-major cells.
fn row_latin_squares(n: usize) -> Vec<Vec<u8>> {
    let perms = all_permutations(n);
    let mut out = vec![];
    let mut idx = vec![0usize; n];
    loop {
        let sq: Vec<u8> = idx.iter().flat_map(|&k| perms[k].iter().map(|&x| x as u8)).collect();
        out.push(sq);
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < perms.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

fn transpose_square(sq: &[u8], n: usize) -> Vec<u8> {
    (0..n * n).map(|k| sq[(k % n) * n + k / n]).collect()
}

/// Every DU permutation map of size `n`, sorted by the canonical serialization.
pub fn all_du_maps(n: usize) -> Result<Vec<PermMap>> {
    match n {
        0 => Err(Error::Precondition("n must be positive".into())),
        1..=3 => Ok(all_du_maps_product(n)),
        4 => Ok(all_du_maps_backtrack(n)),
        _ => Err(refusal(n)),
    }
}

fn refusal(n: usize) -> Error {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let pairs = fact.powi(2 * n as i32);
    Error::TooLarge {
        n,
        reason: format!(
            "exhaustive search over row-Latin × column-Latin pairs is {pairs:.3e} candidates \
             before the orthogonality filter; only n ≤ 4 is supported"
        ),
    }
}

fn all_du_maps_product(n: usize) -> Vec<PermMap> {
    let rows = row_latin_squares(n);
    let cols: Vec<Vec<u8>> = rows.iter().map(|s| transpose_square(s, n)).collect();
    let mut out = vec![];
    for c in &rows {
        for d in &cols {
            // orthogonality: all (c, d) pairs distinct
            let mut seen = vec![false; n * n];
            let ok = c.iter().zip(d).all(|(&x, &y)| {
                let k = x as usize * n + y as usize;
                !std::mem::replace(&mut seen[k], true)
            });
            if ok {
                let m = PermMap { n, c: c.clone(), d: d.clone() };
                debug_assert!(m.is_dual_unitary());
                out.push(m);
            }
        }
    }
    out.sort_by_key(|m| m.serialize_cd());
    out
}

/// Cell-by-cell search with row-Latin, column-Latin and orthogonality pruning.
fn all_du_maps_backtrack(n: usize) -> Vec<PermMap> {
    struct S {
        n: usize,
        c: Vec<u8>,
        d: Vec<u8>,
        row_used: Vec<bool>,
        col_used: Vec<bool>,
        pair_used: Vec<bool>,
        out: Vec<PermMap>,
    }
    fn go(s: &mut S, k: usize) {
        let n = s.n;
        if k == n * n {
            s.out.push(PermMap { n, c: s.c.clone(), d: s.d.clone() });
            return;
        }
        let (a, b) = (k / n, k % n);
        for x in 0..n {
            if s.row_used[a * n + x] {
                continue;
            }
            for y in 0..n {
                if s.col_used[b * n + y] || s.pair_used[x * n + y] {
                    continue;
                }
                s.row_used[a * n + x] = true;
                s.col_used[b * n + y] = true;
                s.pair_used[x * n + y] = true;
                s.c[k] = x as u8;
                s.d[k] = y as u8;
                go(s, k + 1);
                s.row_used[a * n + x] = false;
                s.col_used[b * n + y] = false;
                s.pair_used[x * n + y] = false;
            }
        }
    }
    let mut s = S {
        n,
        c: vec![0; n * n],
        d: vec![0; n * n],
        row_used: vec![false; n * n],
        col_used: vec![false; n * n],
        pair_used: vec![false; n * n],
        out: vec![],
    };
    go(&mut s, 0);
    s.out.sort_by_key(|m| m.serialize_cd());
    s.out
}

/// Enumerate DU permutation maps and group them into equivalence classes.
pub fn enumerate_du(n: usize) -> Result<EquivClassReport> {
    let maps = all_du_maps(n)?;
    let total = maps.len() as u64;
    let fact: u64 = (1..=n as u64).product();
    let group_order = 4 * fact * fact;

    // Maps are sorted, so the first unseen map of each orbit is its lex-min.
    let mut seen: HashSet<PermMap> = HashSet::with_capacity(maps.len());
    let mut reps = vec![];
    let mut sizes = vec![];
    for m in &maps {
        if seen.contains(m) {
            continue;
        }
        let orbit = m.orbit(false)?;
        sizes.push(orbit.len() as u64);
        reps.push(m.clone());
        seen.extend(orbit);
    }

    let mut seen_r: HashSet<PermMap> = HashSet::with_capacity(maps.len());
    let mut r_count = 0;
    for m in &maps {
        if seen_r.contains(m) {
            continue;
        }
        r_count += 1;
        seen_r.extend(m.orbit(true)?);
    }

    Ok(EquivClassReport {
        n,
        total_maps: total,
        class_count: reps.len(),
        non_interacting_classes: reps.iter().filter(|m| m.is_non_interacting()).count(),
        perfect_classes: reps.iter().filter(|m| m.is_perfect()).count(),
        representatives: reps,
        class_sizes: sizes,
        group_order,
        reshuffle_inclusive_count: r_count,
    })
}

/// Histogram of class sizes, handy for orbit-stabilizer audits.
pub fn class_size_histogram(r: &EquivClassReport) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for &s in &r.class_sizes {
        *h.entry(s).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = "33 23 13 / 31 12 21 / 32 11 22";

    #[test]
    fn render_round_trip() {
        let m = PermMap::parse(TABLE1).unwrap();
        assert_eq!(m.render(), TABLE1);
        assert_eq!(m.apply(0, 0), (2, 2));
        assert_eq!(m.apply(2, 1), (0, 0));
    }

    #[test]
    fn wide_format_for_large_n() {
        let m = PermMap::swap(11);
        let s = m.render();
        assert!(s.starts_with("(1,1) (2,1)"));
        assert_eq!(PermMap::parse(&s).unwrap(), m);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PermMap::parse("12 21 / 11").is_err());
        assert!(PermMap::parse("13 21 / 11 22").is_err());
        assert!(PermMap::parse("1x 21 / 11 22").is_err());
    }

    #[test]
    fn table1_flags() {
        let f = PermMap::parse(TABLE1).unwrap().check_flags();
        assert!(f.bijective && f.dual_unitary && !f.perfect);
    }

    #[test]
    fn swap_is_yang_baxter() {
        assert!(PermMap::swap(3).yang_baxter());
        assert!(PermMap::swap(3).is_non_interacting());
    }

    #[test]
    fn space_reflect_matches_gate() {
        let m = PermMap::parse(TABLE1).unwrap();
        let p = Gate::swap(3, 3);
        let pup = p.matmul(&m.to_gate()).unwrap().matmul(&p).unwrap();
        assert_eq!(m.space_reflect().to_gate(), pup);
        assert_eq!(m.space_reflect().space_reflect(), m);
    }

    #[test]
    fn time_reflect_is_transpose() {
        let m = PermMap::parse(TABLE1).unwrap();
        let t = Gate::homogeneous(3, m.to_cmat().transpose()).unwrap();
        assert_eq!(m.time_reflect().unwrap().to_gate(), t);
    }

    #[test]
    fn reshuffle_r_matches_gate() {
        let m = PermMap::parse(TABLE1).unwrap();
        assert_eq!(m.reshuffle_r().unwrap().to_gate(), m.to_gate().reshuffle_r());
    }

    #[test]
    fn diag_sim_matches_gate() {
        let m = PermMap::parse(TABLE1).unwrap();
        let (a, b) = (vec![1, 2, 0], vec![0, 2, 1]);
        let pa = CMat::permutation(&a);
        let pb = CMat::permutation(&b);
        let g = m.to_gate().diag_sim(&pa, &pb).unwrap();
        assert_eq!(m.diag_sim(&a, &b).unwrap().to_gate(), g);
        assert_eq!(m.diag_sim(&[0, 1, 2], &[0, 1, 2]).unwrap(), m);
    }

    #[test]
    fn permutations_in_lex_order() {
        let p = all_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }

    #[test]
    fn canonical_form_is_orbit_min() {
        let m = PermMap::parse(TABLE1).unwrap();
        let orbit = m.orbit(false).unwrap();
        let min = orbit.iter().min_by_key(|x| x.serialize_cd()).unwrap();
        assert_eq!(&m.canonical_form().unwrap(), min);
    }

    #[test]
    fn refuses_large_n() {
        assert!(matches!(enumerate_du(5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn backtracking_agrees_with_product_search() {
        assert_eq!(all_du_maps_backtrack(3), all_du_maps_product(3));
        assert_eq!(all_du_maps_backtrack(2), all_du_maps_product(2));
    }
}
