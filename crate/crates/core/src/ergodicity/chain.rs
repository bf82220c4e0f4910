//! Periodic brickwork chains: state vectors and operators with local support.
//!
//! Sites are `0..L`; site 0 is the most significant digit of a basis index.
//! Layer one pairs `(0,1), (2,3), …`, layer two pairs `(1,2), …, (L−1,0)`, and
//! the Floquet operator applies layer one first.

use num_complex::Complex64 as C64;

use crate::cmatrix::{CMat, ZERO};
use crate::error::{Error, Result};

pub fn layer_pairs(l: usize, layer: usize) -> Vec<(usize, usize)> {
    let off = layer % 2;
    (0..l / 2).map(|k| ((2 * k + off) % l, (2 * k + off + 1) % l)).collect()
}

/// Apply a two-site operator `g` (first factor on site `i`) to a state vector.
pub fn apply_two_site(psi: &mut [C64], n: usize, l: usize, g: &CMat, i: usize, j: usize) {
    let si = n.pow((l - 1 - i) as u32);
    let sj = n.pow((l - 1 - j) as u32);
    let mut buf = vec![ZERO; n * n];
    let mut out = vec![ZERO; n * n];
    for base in 0..psi.len() {
        if (base / si) % n != 0 || (base / sj) % n != 0 {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                buf[a * n + b] = psi[base + a * si + b * sj];
            }
        }
        for (r, o) in out.iter_mut().enumerate() {
            *o = g.row(r).iter().zip(&buf).map(|(x, y)| x * y).sum();
        }
        for a in 0..n {
            for b in 0..n {
                psi[base + a * si + b * sj] = out[a * n + b];
            }
        }
    }
}

/// `ψ ↦ V ψ` with `V = V₂V₁`, or `ψ ↦ V†ψ` when `adjoint`.
pub fn apply_floquet(psi: &mut [C64], n: usize, l: usize, u: &CMat, adjoint: bool) {
    if adjoint {
        let ud = u.adjoint();
        for layer in [1, 0] {
            for (i, j) in layer_pairs(l, layer) {
                apply_two_site(psi, n, l, &ud, i, j);
            }
        }
    } else {
        for layer in [0, 1] {
            for (i, j) in layer_pairs(l, layer) {
                apply_two_site(psi, n, l, u, i, j);
            }
        }
    }
}

/// An operator acting on the listed sites of a ring and as the identity elsewhere.
/// Tensor factors follow the order of `sites`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOp {
    pub n: usize,
    pub sites: Vec<usize>,
    pub mat: CMat,
}

impl LocalOp {
    pub fn new(n: usize, sites: Vec<usize>, mat: CMat) -> Result<Self> {
        let d = n.pow(sites.len() as u32);
        if mat.rows() != d || mat.cols() != d {
            return Err(Error::Dimension(format!("{} sites need a {d}×{d} matrix", sites.len())));
        }
        let mut s = sites.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != sites.len() {
            return Err(Error::Dimension("repeated site".into()));
        }
        Ok(LocalOp { n, sites, mat })
    }

    pub fn one_site(n: usize, site: usize, o: CMat) -> Result<Self> {
        Self::new(n, vec![site], o)
    }

    pub fn identity(n: usize) -> Self {
        LocalOp { n, sites: vec![], mat: CMat::identity(1) }
    }

    /// Add identity factors so that `extra` sites are covered (appended at the end).
    pub fn extend(&self, extra: &[usize]) -> LocalOp {
        let new: Vec<usize> = extra.iter().copied().filter(|s| !self.sites.contains(s)).collect();
        if new.is_empty() {
            return self.clone();
        }
        let mut sites = self.sites.clone();
        sites.extend(&new);
        let id = CMat::identity(self.n.pow(new.len() as u32));
        LocalOp { n: self.n, sites, mat: self.mat.kron(&id) }
    }

    /// Reorder tensor factors to follow `order` (a permutation of `self.sites`).
    pub fn reorder(&self, order: &[usize]) -> LocalOp {
        assert_eq!(order.len(), self.sites.len());
        let k = self.sites.len();
        let n = self.n;
        // pos[t] = position in the old ordering of the site at new position t
        let pos: Vec<usize> = order
            .iter()
            .map(|s| self.sites.iter().position(|x| x == s).expect("same site set"))
            .collect();
        let d = n.pow(k as u32);
        let map = |idx: usize| -> usize {
            let mut digits = vec![0; k];
            let mut r = idx;
            for t in (0..k).rev() {
                digits[t] = r % n;
                r /= n;
            }
            let mut old = vec![0; k];
            for t in 0..k {
                old[pos[t]] = digits[t];
            }
            old.iter().fold(0, |acc, &x| acc * n + x)
        };
        let perm: Vec<usize> = (0..d).map(map).collect();
        let mat = CMat::from_fn(d, d, |i, j| self.mat[(perm[i], perm[j])]);
        LocalOp { n, sites: order.to_vec(), mat }
    }

    pub fn sorted(&self) -> LocalOp {
        let mut s = self.sites.clone();
        s.sort_unstable();
        self.reorder(&s)
    }

    /// `G† O G` (`heisenberg`) or `G O G†` for a two-site `g` on `(i, j)`.
    pub fn conjugate(&self, g: &CMat, i: usize, j: usize, heisenberg: bool) -> LocalOp {
        if !self.sites.contains(&i) && !self.sites.contains(&j) {
            return self.clone();
        }
        let ext = self.extend(&[i, j]);
        let k = ext.sites.len();
        let pi = ext.sites.iter().position(|&s| s == i).expect("covered");
        let pj = ext.sites.iter().position(|&s| s == j).expect("covered");
        let (left, right) = if heisenberg { (g.adjoint(), g.clone()) } else { (g.clone(), g.adjoint()) };
        let a = act_left(&ext.mat, &left, self.n, k, pi, pj);
        let b = act_right(&a, &right, self.n, k, pi, pj);
        LocalOp { n: self.n, sites: ext.sites, mat: b }
    }

    /// Drop sites on which the operator acts as a multiple of the identity.
    pub fn trim(&self, tol: f64) -> LocalOp {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            for s in cur.sites.clone() {
                let rest: Vec<usize> = cur.sites.iter().copied().filter(|&x| x != s).collect();
                let reduced = cur.partial_trace(&rest).mat.scale(C64::new(1.0 / self.n as f64, 0.0));
                let back = LocalOp { n: self.n, sites: rest.clone(), mat: reduced.clone() }.extend(&[s]);
                let back = back.reorder(&cur.sites);
                if back.mat.max_abs_diff(&cur.mat) <= tol {
                    cur = LocalOp { n: self.n, sites: rest, mat: reduced };
                    changed = true;
                    break;
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// Trace out every site not in `keep` (order of `keep` is kept).
    pub fn partial_trace(&self, keep: &[usize]) -> LocalOp {
        let n = self.n;
        let k = self.sites.len();
        let keep: Vec<usize> = keep.iter().copied().filter(|s| self.sites.contains(s)).collect();
        let traced: Vec<usize> = self.sites.iter().copied().filter(|s| !keep.contains(s)).collect();
        let mut order = keep.clone();
        order.extend(&traced);
        let r = self.reorder(&order);
        let dk = n.pow(keep.len() as u32);
        let dt = n.pow((k - keep.len()) as u32);
        let mat = CMat::from_fn(dk, dk, |i, j| (0..dt).map(|t| r.mat[(i * dt + t, j * dt + t)]).sum());
        LocalOp { n, sites: keep, mat }
    }

    pub fn shift(&self, by: isize, l: usize) -> LocalOp {
        let sites = self.sites.iter().map(|&s| ((s as isize + by).rem_euclid(l as isize)) as usize).collect();
        LocalOp { n: self.n, sites, mat: self.mat.clone() }
    }

    /// Mirror image under `s ↦ L−1−s`.
    pub fn mirror(&self, l: usize) -> LocalOp {
        let sites = self.sites.iter().map(|&s| l - 1 - s).collect();
        LocalOp { n: self.n, sites, mat: self.mat.clone() }
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.frobenius()
    }

    pub fn scale(&self, s: C64) -> LocalOp {
        LocalOp { n: self.n, sites: self.sites.clone(), mat: self.mat.scale(s) }
    }

    /// `ψ ↦ O ψ` on a chain of length `l`.
    pub fn apply(&self, psi: &[C64], l: usize) -> Vec<C64> {
        let n = self.n;
        let k = self.sites.len();
        let strides: Vec<usize> = self.sites.iter().map(|&s| n.pow((l - 1 - s) as u32)).collect();
        let d = n.pow(k as u32);
        let mut out = vec![ZERO; psi.len()];
        let mut offs = vec![0usize; d];
        for (idx, off) in offs.iter_mut().enumerate() {
            let mut r = idx;
            let mut o = 0;
            for t in (0..k).rev() {
                o += (r % n) * strides[t];
                r /= n;
            }
            *off = o;
        }
        for base in 0..psi.len() {
            if strides.iter().any(|&st| (base / st) % n != 0) {
                continue;
            }
            for (r, &or) in offs.iter().enumerate() {
                let row = self.mat.row(r);
                let mut acc = ZERO;
                for (c, &oc) in offs.iter().enumerate() {
                    acc += row[c] * psi[base + oc];
                }
                out[base + or] = acc;
            }
        }
        out
    }
}

fn digit(idx: usize, pos: usize, n: usize, k: usize) -> usize {
    (idx / n.pow((k - 1 - pos) as u32)) % n
}

/// `G · M` with `G` acting on factors `(pi, pj)` of a `k`-factor space.
fn act_left(m: &CMat, g: &CMat, n: usize, k: usize, pi: usize, pj: usize) -> CMat {
    let d = m.rows();
    let si = n.pow((k - 1 - pi) as u32);
    let sj = n.pow((k - 1 - pj) as u32);
    let mut out = CMat::zeros(d, d);
    for r in 0..d {
        let (a, b) = (digit(r, pi, n, k), digit(r, pj, n, k));
        let base = r - a * si - b * sj;
        for a2 in 0..n {
            for b2 in 0..n {
                let coef = g[(a * n + b, a2 * n + b2)];
                if coef == ZERO {
                    continue;
                }
                let src = base + a2 * si + b2 * sj;
                for c in 0..d {
                    out[(r, c)] += coef * m[(src, c)];
                }
            }
        }
    }
    out
}

/// `M · G` with `G` acting on factors `(pi, pj)`.
fn act_right(m: &CMat, g: &CMat, n: usize, k: usize, pi: usize, pj: usize) -> CMat {
    let d = m.rows();
    let si = n.pow((k - 1 - pi) as u32);
    let sj = n.pow((k - 1 - pj) as u32);
    let mut out = CMat::zeros(d, d);
    for c in 0..d {
        let (a, b) = (digit(c, pi, n, k), digit(c, pj, n, k));
        let base = c - a * si - b * sj;
        for a2 in 0..n {
            for b2 in 0..n {
                let coef = g[(a2 * n + b2, a * n + b)];
                if coef == ZERO {
                    continue;
                }
                let src = base + a2 * si + b2 * sj;
                for r in 0..d {
                    out[(r, c)] += m[(r, src)] * coef;
                }
            }
        }
    }
    out
}

/// `Tr(A B)` over the full ring of `l` sites, for local operators.
pub fn trace_product(a: &LocalOp, b: &LocalOp, l: usize) -> C64 {
    let n = a.n;
    let overlap: Vec<usize> = a.sites.iter().copied().filter(|s| b.sites.contains(s)).collect();
    let ra = a.partial_trace(&overlap);
    let rb = b.partial_trace(&overlap);
    let mut union = a.sites.clone();
    union.extend(b.sites.iter().filter(|s| !a.sites.contains(s)));
    let free = l - union.len();
    let t = ra.mat.matmul(&rb.mat).trace();
    t * (n as f64).powi(free as i32)
}
