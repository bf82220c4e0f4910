//! Spectra of transfer matrices and glider counts.
//!
//! The matrix is split into strongly connected blocks of its nonzero pattern;
//! its spectrum is the union of the block spectra, each computed densely.

use num_complex::Complex64 as C64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::transfer::{transfer_matrix, Direction, TransferMatrix};
use crate::error::{Error, Result};
use crate::tensor::{Gate, Tolerance};

/// Strongly connected components of the graph `y → x` for nonzero `t[x, y]`,
/// in reverse topological order (sinks first). Iterative Tarjan.
pub fn strongly_connected(t: &TransferMatrix) -> Vec<Vec<usize>> {
    let n = t.dim;
    let succ = |v: usize| t.cols[v].iter().map(|e| e.0 as usize);
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // call stack of (vertex, position in successor list)
        let mut calls: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if let Some(w) = succ(v).nth(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

fn block_position(t: &TransferMatrix, block: &[usize]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; t.dim];
    for (k, &v) in block.iter().enumerate() {
        pos[v] = k;
    }
    pos
}

/// Dense eigenvalues of one block.
pub fn block_eigenvalues(t: &TransferMatrix, block: &[usize]) -> Result<Vec<C64>> {
    if block.len() == 1 {
        return Ok(vec![t.get(block[0], block[0])]);
    }
    let pos = block_position(t, block);
    let k = block.len();
    let real = block.iter().all(|&y| t.cols[y].iter().all(|e| e.1.im == 0.0));
    let err = |e: faer::linalg::evd::EvdError| Error::Eigen(format!("{e:?}"));
    if real {
        let mut m = faer::Mat::<f64>::zeros(k, k);
        for (j, &y) in block.iter().enumerate() {
            for &(x, v) in &t.cols[y] {
                if pos[x as usize] != usize::MAX {
                    m[(pos[x as usize], j)] = v.re;
                }
            }
        }
        m.eigenvalues().map_err(err)
    } else {
        let mut m = faer::Mat::<C64>::zeros(k, k);
        for (j, &y) in block.iter().enumerate() {
            for &(x, v) in &t.cols[y] {
                if pos[x as usize] != usize::MAX {
                    m[(pos[x as usize], j)] = v;
                }
            }
        }
        m.eigenvalues().map_err(err)
    }
}

/// Best rational approximation `p/q` (`q ≤ qmax`) of the phase of `λ` in turns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseApprox {
    pub re: f64,
    pub im: f64,
    pub p: u64,
    pub q: u64,
    pub error: f64,
}

pub fn rational_phase(z: C64, qmax: u64) -> PhaseApprox {
    let turns = (z.arg() / std::f64::consts::TAU).rem_euclid(1.0);
    let (mut bp, mut bq, mut be) = (0u64, 1u64, turns.min(1.0 - turns));
    if turns > 0.5 {
        bp = 1;
    }
    // continued fraction convergents and their semiconvergents
    let (mut h0, mut h1, mut k0, mut k1) = (0u64, 1u64, 1u64, 0u64);
    let mut x = turns;
    for _ in 0..64 {
        let a = x.floor();
        let ai = a as u64;
        for s in [ai.div_ceil(2).max(1), ai] {
            let (h, k) = (s * h1 + h0, s * k1 + k0);
            if k == 0 || k > qmax {
                continue;
            }
            let e = (turns - h as f64 / k as f64).abs();
            if e < be - 1e-15 {
                (bp, bq, be) = (h, k, e);
            }
        }
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > qmax {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = x - a;
        if f < 1e-14 {
            break;
        }
        x = 1.0 / f;
    }
    let g = bp.gcd(&bq).max(1);
    PhaseApprox { re: z.re, im: z.im, p: (bp / g) % (bq / g), q: bq / g, error: be }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub alpha: usize,
    pub direction: Direction,
    pub dim: usize,
    /// `[re, im]` pairs, by decreasing modulus then phase.
    pub eigenvalues: Vec<[f64; 2]>,
    pub unimodular_count: usize,
    /// The identity fixed point, not counted as a glider.
    pub trivial_subtracted: usize,
    pub unimodular: Vec<PhaseApprox>,
    pub blocks: usize,
    pub largest_block: usize,
    /// Exact count from closed classes (permutation gates only).
    pub exact_unimodular_count: Option<usize>,
}

pub fn spectrum(t: &TransferMatrix, tol: &Tolerance) -> Result<SpectrumReport> {
    let comps = strongly_connected(t);
    let mut ev = Vec::with_capacity(t.dim);
    for c in &comps {
        ev.extend(block_eigenvalues(t, c)?);
    }
    let max = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max > 1.0 + tol.tau_lambda {
        return Err(Error::Verification(format!("spectral radius {max} exceeds 1")));
    }
    let mut order: Vec<C64> = ev;
    order.sort_by(|a, b| {
        b.norm()
            .partial_cmp(&a.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.arg().partial_cmp(&b.arg()).unwrap_or(std::cmp::Ordering::Equal))
    });
    let qmax = 2 * t.dim as u64;
    let unimodular: Vec<PhaseApprox> = order
        .iter()
        .filter(|z| (z.norm() - 1.0).abs() <= tol.tau_lambda)
        .map(|&z| rational_phase(z, qmax))
        .collect();
    Ok(SpectrumReport {
        alpha: t.alpha,
        direction: t.direction,
        dim: t.dim,
        eigenvalues: order.iter().map(|z| [z.re, z.im]).collect(),
        unimodular_count: unimodular.len(),
        trivial_subtracted: 1,
        unimodular,
        blocks: comps.len(),
        largest_block: comps.iter().map(Vec::len).max().unwrap_or(0),
        exact_unimodular_count: exact_unimodular_count(t, &comps),
    })
}

/// Unimodular count from one dense eigendecomposition of the whole matrix,
/// without the block split. Used as a cross-check.
pub fn dense_unimodular_count(t: &TransferMatrix, tol: &Tolerance) -> Result<usize> {
    let all: Vec<usize> = (0..t.dim).collect();
    let ev = block_eigenvalues(t, &all)?;
    Ok(ev.iter().filter(|z| (z.norm() - 1.0).abs() <= tol.tau_lambda).count())
}

/// `N·t` is a nonnegative integer matrix with column sums at most `N`. A block's
/// spectral radius is 1 exactly when no weight leaves or is lost from it, and
/// then its unimodular eigenvalues are the `h`-th roots of unity for the period
/// `h` of the block. Everything else sits strictly inside the unit disk.
pub fn exact_unimodular_count(t: &TransferMatrix, comps: &[Vec<usize>]) -> Option<usize> {
    let ints = t.integer.as_ref()?;
    let n = t.n as u32;
    let mut comp_of = vec![0usize; t.dim];
    for (k, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = k;
        }
    }
    let mut total = 0;
    for (k, c) in comps.iter().enumerate() {
        let closed = c.iter().all(|&y| {
            let inside: u32 = ints[y].iter().filter(|e| comp_of[e.0 as usize] == k).map(|e| e.1).sum();
            inside == n
        });
        if closed {
            total += period(ints, c, &comp_of, k);
        }
    }
    Some(total)
}

/// Period of an irreducible block: gcd of `level(u) + 1 − level(v)` over its edges.
fn period(ints: &[Vec<(u32, u32)>], comp: &[usize], comp_of: &[usize], k: usize) -> usize {
    let mut level = std::collections::HashMap::new();
    level.insert(comp[0], 0i64);
    let mut queue = std::collections::VecDeque::from([comp[0]]);
    let mut g = 0i64;
    while let Some(u) = queue.pop_front() {
        let lu = level[&u];
        for &(x, _) in &ints[u] {
            let v = x as usize;
            if comp_of[v] != k {
                continue;
            }
            match level.get(&v) {
                Some(&lv) => g = g.gcd(&(lu + 1 - lv)),
                None => {
                    level.insert(v, lu + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    g.unsigned_abs().max(1) as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialSpectrumCheck {
    pub alpha: usize,
    pub direction: Direction,
    pub dim: usize,
    /// `Tr (N·t)^k` for `k = 1, 2, …`; a spectrum `{1, 0, …, 0}` forces `N^k`.
    pub power_traces: Vec<u128>,
    pub traces_match: bool,
    /// Smallest `k` with `t^{k+1} = t^k`, found within the budget.
    pub stabilization_index: Option<usize>,
    /// `Tr t^k` at that index, i.e. the multiplicity of the eigenvalue 1.
    pub unit_multiplicity: Option<u64>,
    /// Exact verdict on `{1, 0, …, 0}`; `None` if undecided within the budget.
    pub trivial: Option<bool>,
}

/// `A v` for the integer matrix `A = N·t`; `None` on overflow.
fn int_apply(ints: &[Vec<(u32, u32)>], v: &[u128]) -> Option<Vec<u128>> {
    let mut out = vec![0u128; v.len()];
    for (y, col) in ints.iter().enumerate() {
        if v[y] == 0 {
            continue;
        }
        for &(x, c) in col {
            let o = &mut out[x as usize];
            *o = o.checked_add((c as u128).checked_mul(v[y])?)?;
        }
    }
    Some(out)
}

/// Exact test of `spec t = {1, 0, …, 0}` for permutation gates, in integer
/// arithmetic on `A = N·t`. Floating eigenvalues cannot settle this: a zero
/// eigenvalue in a Jordan block of size `k` comes out near `ε^{1/k}`.
///
/// Refutation: `Tr A^k ≠ N^k` for some `k ≤ trace_powers`. Proof: every column
/// `e_y` reaches `A^{k_y+1} e_y = N·A^{k_y} e_y` within `budget` steps, so
/// the minimal polynomial of `t` divides `x^K (x − 1)`, and `Tr t^K = 1`.
pub fn trivial_spectrum_check(t: &TransferMatrix, trace_powers: usize, budget: usize) -> Result<TrivialSpectrumCheck> {
    let ints = t
        .integer
        .as_ref()
        .ok_or_else(|| Error::Precondition("exact spectrum check needs a permutation gate".into()))?;
    let n = t.n as u128;
    let overflow = || Error::CapExceeded { what: "integer powers of N·t".into(), needed: u128::MAX, cap: u128::MAX };
    let mut power_traces = vec![0u128; trace_powers];
    for y in 0..t.dim {
        let mut v = vec![0u128; t.dim];
        v[y] = 1;
        for tr in power_traces.iter_mut() {
            v = int_apply(ints, &v).ok_or_else(overflow)?;
            *tr += v[y];
        }
    }
    let traces_match = power_traces.iter().enumerate().all(|(k, &tr)| Some(tr) == n.checked_pow(k as u32 + 1));
    let mut report = TrivialSpectrumCheck {
        alpha: t.alpha,
        direction: t.direction,
        dim: t.dim,
        power_traces,
        traces_match,
        stabilization_index: None,
        unit_multiplicity: None,
        trivial: None,
    };
    if !traces_match {
        report.trivial = Some(false);
        return Ok(report);
    }
    // (k_y, (A^{k_y} e_y)_y)
    let mut fixed = Vec::with_capacity(t.dim);
    for y in 0..t.dim {
        let mut v = vec![0u128; t.dim];
        v[y] = 1;
        let mut found = None;
        for k in 0..budget {
            let Some(w) = int_apply(ints, &v) else { break };
            if w.iter().zip(&v).all(|(&a, &b)| b.checked_mul(n) == Some(a)) {
                found = Some((k, v[y]));
                break;
            }
            v = w;
        }
        match found {
            Some(f) => fixed.push(f),
            None => return Ok(report),
        }
    }
    let kmax = fixed.iter().map(|f| f.0).max().unwrap_or(0);
    let nb = num_bigint::BigUint::from(t.n);
    // Tr t^K · N^K with K = kmax
    let scaled: num_bigint::BigUint = fixed.iter().map(|&(k, d)| num_bigint::BigUint::from(d) * nb.pow((kmax - k) as u32)).sum();
    let (mult, rem) = scaled.div_rem(&nb.pow(kmax as u32));
    report.stabilization_index = Some(kmax);
    if rem == num_bigint::BigUint::from(0u32) {
        let m = u64::try_from(mult).unwrap_or(u64::MAX);
        report.unit_multiplicity = Some(m);
        report.trivial = Some(m == 1);
    } else {
        return Err(Error::Verification("trace of a stabilized power is not an integer".into()));
    }
    Ok(report)
}

/// Compare two eigenvalue multisets. Eigenvalues closer than `radius` are
/// grouped; groups must have equal sizes and centroids within `tol`. Centroids
/// are used because a defective eigenvalue of multiplicity `k` is only resolved
/// to about `ε^{1/k}` individually, while the mean of its cluster is accurate to `ε`.
/// Returns the largest centroid deviation, or `None` when the groupings differ.
pub fn spectra_deviation(a: &[C64], b: &[C64], radius: f64) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let ca = clusters(a, radius);
    let mut cb = clusters(b, radius);
    let mut worst = 0.0f64;
    for (za, ka) in ca {
        let pos = cb
            .iter()
            .enumerate()
            .filter(|(_, c)| c.1 == ka)
            .min_by(|x, y| (x.1 .0 - za).norm().partial_cmp(&(y.1 .0 - za).norm()).unwrap())?
            .0;
        worst = worst.max((cb[pos].0 - za).norm());
        cb.swap_remove(pos);
    }
    Some(worst)
}

fn clusters(v: &[C64], radius: f64) -> Vec<(C64, usize)> {
    // single linkage
    let n = v.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (v[i] - v[j]).norm() < radius {
                let (ri, rj) = (find(&mut label, i), find(&mut label, j));
                label[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut acc: std::collections::BTreeMap<usize, (C64, usize)> = Default::default();
    for i in 0..n {
        let r = find(&mut label, i);
        let e = acc.entry(r).or_insert((C64::new(0.0, 0.0), 0));
        e.0 += v[i];
        e.1 += 1;
    }
    acc.into_values().map(|(s, k)| (s / k as f64, k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GliderCount {
    pub alpha: usize,
    pub right: SpectrumReport,
    pub left: SpectrumReport,
    /// Unimodular eigenvalues of both directions minus the two trivial ones.
    pub count: i64,
    pub exact_count: Option<i64>,
}

pub fn glider_count(g: &Gate, alpha: usize, tol: &Tolerance, cap: usize) -> Result<GliderCount> {
    let right = spectrum(&transfer_matrix(g, alpha, Direction::Right, cap)?, tol)?;
    let left = spectrum(&transfer_matrix(g, alpha, Direction::Left, cap)?, tol)?;
    let count = (right.unimodular_count + left.unimodular_count) as i64 - 2;
    let exact_count = match (right.exact_unimodular_count, left.exact_unimodular_count) {
        (Some(r), Some(l)) => Some((r + l) as i64 - 2),
        _ => None,
    };
    Ok(GliderCount { alpha, right, left, count, exact_count })
}
