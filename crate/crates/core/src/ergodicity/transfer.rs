//! Light-cone transfer matrices `t_α`.
//!
//! `t_α = Tr_A[V'_{2α,A} ⋯ V'_{α+1,A} V_{α,A} ⋯ V_{1,A}] / N` with `V = P U†`,
//! `V' = P U^R`. In components, with auxiliary indices `a_0 … a_{2α} = a_0`,
//!
//! ```text
//! t[x, y] = 1/N Σ_a Π_{j≤α} conj(U^{y_j a_{j-1}}_{a_j x_j}) Π_{j>α} U^{y_j a_j}_{a_{j-1} x_j}
//! ```
//!
//! Multi-indices are packed row-major with `x_1` most significant. The first α
//! slots carry the ket legs of an operator on a light-cone diagonal, slot
//! `2α+1−j` carries the bra partner of slot `j`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::CMat;
use crate::error::{Error, Result};
use crate::perm_map::PermMap;
use crate::tensor::{Gate, Tolerance};

pub const DEFAULT_CAP: usize = 6561;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Right => "right",
            Direction::Left => "left",
        }
    }
}

/// `t_α`, stored column-wise as sparse lists (columns of permutation gates
/// hold at most `N` entries).
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub alpha: usize,
    pub direction: Direction,
    pub n: usize,
    pub dim: usize,
    /// `cols[y]` lists `(x, t[x, y])`, sorted by `x`.
    pub cols: Vec<Vec<(u32, C64)>>,
    /// For permutation gates: `N·t` as exact integer counts, same layout.
    pub integer: Option<Vec<Vec<(u32, u32)>>>,
}

impl TransferMatrix {
    pub fn get(&self, x: usize, y: usize) -> C64 {
        self.cols[y]
            .binary_search_by_key(&(x as u32), |e| e.0)
            .map(|k| self.cols[y][k].1)
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (y, col) in self.cols.iter().enumerate() {
            for &(x, v) in col {
                m[(x as usize, y)] = v;
            }
        }
        m
    }

    pub fn is_real(&self) -> bool {
        self.cols.iter().flatten().all(|e| e.1.im == 0.0)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// `t v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (y, col) in self.cols.iter().enumerate() {
            if v[y] == C64::new(0.0, 0.0) {
                continue;
            }
            for &(x, t) in col {
                out[x as usize] += t * v[y];
            }
        }
        out
    }
}

/// The gate seen by the left-moving light cone: `P U P`.
pub fn reflected(g: &Gate) -> Gate {
    let n = g.n();
    Gate::from_components(n, n, |a, b, c, d| g.get(b, a, d, c))
}

pub fn dimension(n: usize, alpha: usize) -> Option<usize> {
    n.checked_pow(2 * alpha as u32)
}

pub fn transfer_matrix(g: &Gate, alpha: usize, direction: Direction, cap: usize) -> Result<TransferMatrix> {
    if alpha == 0 {
        return Err(Error::Precondition("alpha must be at least 1".into()));
    }
    if !g.is_homogeneous() {
        return Err(Error::NotHomogeneous { n: g.n(), m: g.m() });
    }
    let tol = Tolerance::default();
    if !g.is_unitary(&tol) {
        return Err(Error::NotUnitary(format!("defect {:.3e}", g.unitarity_defect())));
    }
    let n = g.n();
    let dim = dimension(n, alpha).filter(|&d| d <= cap).ok_or(Error::CapExceeded {
        what: format!("transfer matrix dimension N^(2α) for N={n}, α={alpha}"),
        needed: (n as u128).saturating_pow(2 * alpha as u32),
        cap: cap as u128,
    })?;
    let g = match direction {
        Direction::Right => g.clone(),
        Direction::Left => reflected(g),
    };
    if let Ok(map) = PermMap::from_gate(&g, tol.tau_u) {
        if map.is_dual_unitary() {
            return Ok(from_integer(n, alpha, direction, dim, permutation_counts(&map, alpha)));
        }
    }
    Ok(TransferMatrix { alpha, direction, n, dim, cols: dense_columns(&g, alpha), integer: None })
}

/// Exact `N·t_α` of a DU permutation gate: for each input `y` and each starting
/// auxiliary value the path through the chain is unique; a closed path adds one.
pub fn permutation_counts(map: &PermMap, alpha: usize) -> Vec<Vec<(u32, u32)>> {
    let n = map.n();
    let len = 2 * alpha;
    let dim = n.pow(len as u32);
    // inverse of the map, and b from (a, c) along a row-Latin C square
    let mut inv = vec![(0usize, 0usize); n * n];
    let mut row_inv = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            let (c, d) = map.apply(a, b);
            inv[c * n + d] = (a, b);
            row_inv[a * n + c] = b;
        }
    }
    let mut cols = Vec::with_capacity(dim);
    let mut y = vec![0usize; len];
    for yi in 0..dim {
        let mut r = yi;
        for j in (0..len).rev() {
            y[j] = r % n;
            r /= n;
        }
        let mut col: Vec<(u32, u32)> = Vec::with_capacity(n);
        for a0 in 0..n {
            let mut a = a0;
            let mut x = 0usize;
            for (j, &yj) in y.iter().enumerate() {
                let xj;
                if j < alpha {
                    let (an, xn) = inv[yj * n + a];
                    a = an;
                    xj = xn;
                } else {
                    xj = row_inv[a * n + yj];
                    a = map.apply(a, xj).1;
                }
                x = x * n + xj;
            }
            if a == a0 {
                match col.iter_mut().find(|e| e.0 as usize == x) {
                    Some(e) => e.1 += 1,
                    None => col.push((x as u32, 1)),
                }
            }
        }
        col.sort_unstable();
        cols.push(col);
    }
    cols
}

fn from_integer(n: usize, alpha: usize, direction: Direction, dim: usize, ints: Vec<Vec<(u32, u32)>>) -> TransferMatrix {
    let inv = 1.0 / n as f64;
    let cols = ints
        .iter()
        .map(|col| col.iter().map(|&(x, k)| (x, C64::new(k as f64 * inv, 0.0))).collect())
        .collect();
    TransferMatrix { alpha, direction, n, dim, cols, integer: Some(ints) }
}

/// General gates: contract the auxiliary chain column by column.
fn dense_columns(g: &Gate, alpha: usize) -> Vec<Vec<(u32, C64)>> {
    let n = g.n();
    let len = 2 * alpha;
    let dim = n.pow(len as u32);
    let zero = C64::new(0.0, 0.0);
    // coef[side][y][a_old][a_new][x]
    let idx = |y: usize, ao: usize, an: usize, x: usize| ((y * n + ao) * n + an) * n + x;
    let mut vc = vec![zero; n * n * n * n];
    let mut vp = vec![zero; n * n * n * n];
    for y in 0..n {
        for ao in 0..n {
            for an in 0..n {
                for x in 0..n {
                    vc[idx(y, ao, an, x)] = g.get(an, x, y, ao).conj();
                    vp[idx(y, ao, an, x)] = g.get(ao, x, y, an);
                }
            }
        }
    }
    let inv = 1.0 / n as f64;
    let mut cols = Vec::with_capacity(dim);
    let mut y = vec![0usize; len];
    let mut colv = vec![zero; dim];
    for yi in 0..dim {
        let mut r = yi;
        for j in (0..len).rev() {
            y[j] = r % n;
            r /= n;
        }
        colv.iter_mut().for_each(|z| *z = zero);
        for a0 in 0..n {
            // cur[(prefix, a)]
            let mut cur = vec![zero; n];
            cur[a0] = C64::new(1.0, 0.0);
            for (j, &yj) in y.iter().enumerate() {
                let table = if j < alpha { &vc } else { &vp };
                let mut next = vec![zero; cur.len() * n];
                for (pa, &amp) in cur.iter().enumerate() {
                    if amp == zero {
                        continue;
                    }
                    let (p, ao) = (pa / n, pa % n);
                    for an in 0..n {
                        for x in 0..n {
                            let c = table[idx(yj, ao, an, x)];
                            if c != zero {
                                next[(p * n + x) * n + an] += amp * c;
                            }
                        }
                    }
                }
                cur = next;
            }
            for (x, z) in colv.iter_mut().enumerate() {
                *z += cur[x * n + a0] * inv;
            }
        }
        cols.push(colv.iter().enumerate().filter(|e| *e.1 != zero).map(|(x, &z)| (x as u32, z)).collect());
    }
    cols
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::ergodicity::channel::{channel_m, Sign};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn alpha_one_is_the_right_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Gate::homogeneous(2, CMat::haar_unitary(4, &mut rng)).unwrap();
        let t = transfer_matrix(&g, 1, Direction::Right, DEFAULT_CAP).unwrap().to_dense();
        let m = channel_m(&g, Sign::Plus, &Tolerance::default()).unwrap();
        assert!(t.max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn left_alpha_one_is_the_minus_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = Gate::homogeneous(3, CMat::haar_unitary(9, &mut rng)).unwrap();
        let t = transfer_matrix(&g, 1, Direction::Left, DEFAULT_CAP).unwrap().to_dense();
        let m = channel_m(&g, Sign::Minus, &Tolerance::default()).unwrap();
        assert!(t.max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn integer_route_matches_contraction() {
        for name in ["C1", "I2", "E1", "Z3"] {
            let g = builtins::builtin(name).unwrap().gate();
            for alpha in 1..=2 {
                for dir in [Direction::Right, Direction::Left] {
                    let fast = transfer_matrix(&g, alpha, dir, DEFAULT_CAP).unwrap();
                    assert!(fast.integer.is_some());
                    let gg = match dir {
                        Direction::Right => g.clone(),
                        Direction::Left => reflected(&g),
                    };
                    let slow = TransferMatrix {
                        alpha,
                        direction: dir,
                        n: 3,
                        dim: fast.dim,
                        cols: dense_columns(&gg, alpha),
                        integer: None,
                    };
                    assert!(fast.to_dense().max_abs_diff(&slow.to_dense()) < 1e-13, "{name} {alpha}");
                }
            }
        }
    }

    #[test]
    fn identity_pairing_is_fixed() {
        // vec of the identity on α diagonal legs, bra slot 2α+1−j paired with ket slot j
        let g = builtins::builtin("E2").unwrap().gate();
        let alpha = 2;
        let t = transfer_matrix(&g, alpha, Direction::Right, DEFAULT_CAP).unwrap();
        let n = 3usize;
        let v: Vec<C64> = (0..t.dim)
            .map(|i| {
                let d: Vec<usize> = (0..4).rev().map(|k| (i / n.pow(k)) % n).collect();
                if d[0] == d[3] && d[1] == d[2] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
            })
            .collect();
        let w = t.apply(&v);
        let err = v.iter().zip(&w).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-14);
    }

    #[test]
    fn cap_is_enforced() {
        let g = builtins::builtin("C1").unwrap().gate();
        assert!(matches!(
            transfer_matrix(&g, 5, Direction::Right, DEFAULT_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }
}
