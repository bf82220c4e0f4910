//! Glider extraction: unimodular eigenvectors of `t_α` turned into local
//! operators and checked against the Floquet exchange relation.
//!
//! An eigenvector lives on a light-cone diagonal: slot `j` (ket) and slot
//! `2α+1−j` (bra) sit on the outgoing left leg of the `j`-th gate of a staircase
//! descending to the left, at site `s−j+1` and time `T−j+1`. The operator at
//! time `T` is obtained by pushing the lower legs forward through the gates to
//! the left of the staircase. Right movers then satisfy
//! `V† O V = λ² O(x+2)` with `V = V₂V₁`; left movers are mirror images of the
//! right movers of `P U P`.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::chain::{apply_floquet, LocalOp};
use super::spectrum::{rational_phase, strongly_connected, PhaseApprox};
use super::transfer::{reflected, transfer_matrix, Direction, TransferMatrix};
use crate::cmatrix::CMat;
use crate::constructions::MatrixJson;
use crate::error::{Error, Result};
use crate::tensor::{Gate, Tolerance};

pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GliderCandidate {
    pub direction: Direction,
    pub alpha: usize,
    /// Eigenvalue `λ` of `t_α`.
    pub eigenvalue: [f64; 2],
    /// `e^{2iφ} = λ²`, the phase picked up per Floquet period.
    pub phase: [f64; 2],
    pub phase_rational: PhaseApprox,
    /// Number of consecutive sites after dropping identity factors.
    pub support_range: usize,
    pub chain_length: usize,
    pub sites: Vec<usize>,
    /// Frobenius-normalized operator on `sites` (in increasing order).
    pub operator: MatrixJson,
    pub residual: f64,
    pub verified: bool,
}

/// Unimodular eigenpairs of `t`. For permutation gates only closed blocks can
/// carry them and their eigenvectors are the block eigenvectors padded by zero.
pub fn unimodular_eigenvectors(t: &TransferMatrix, tol: &Tolerance) -> Result<Vec<(C64, Vec<C64>)>> {
    let blocks: Vec<Vec<usize>> = match &t.integer {
        Some(ints) => {
            let comps = strongly_connected(t);
            let mut comp_of = vec![0usize; t.dim];
            for (k, c) in comps.iter().enumerate() {
                for &v in c {
                    comp_of[v] = k;
                }
            }
            comps
                .iter()
                .enumerate()
                .filter(|(k, c)| {
                    c.iter().all(|&y| {
                        ints[y].iter().filter(|e| comp_of[e.0 as usize] == *k).map(|e| e.1).sum::<u32>()
                            == t.n as u32
                    })
                })
                .map(|(_, c)| c.clone())
                .collect()
        }
        None => vec![(0..t.dim).collect()],
    };
    let mut out = Vec::new();
    for b in blocks {
        let mut pos = vec![usize::MAX; t.dim];
        for (k, &v) in b.iter().enumerate() {
            pos[v] = k;
        }
        let k = b.len();
        let mut m = faer::Mat::<C64>::zeros(k, k);
        for (j, &y) in b.iter().enumerate() {
            for &(x, v) in &t.cols[y] {
                if pos[x as usize] != usize::MAX {
                    m[(pos[x as usize], j)] = v;
                }
            }
        }
        let evd = m.eigen().map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S();
        let u = evd.U();
        for i in 0..k {
            let lam = s[i];
            if (lam.norm() - 1.0).abs() > tol.tau_lambda {
                continue;
            }
            let mut v = vec![C64::new(0.0, 0.0); t.dim];
            for (r, &y) in b.iter().enumerate() {
                v[y] = u[(r, i)];
            }
            out.push((lam, v));
        }
    }
    Ok(out)
}

/// Rotate the `λ = 1` eigenspace so that the identity on the diagonal is its
/// first basis vector. Fails if the identity is not in the span.
pub fn identity_first(t: &TransferMatrix, pairs: Vec<(C64, Vec<C64>)>, tol: &Tolerance) -> Result<Vec<(C64, Vec<C64>)>> {
    let one = C64::new(1.0, 0.0);
    let (ones, mut rest): (Vec<_>, Vec<_>) = pairs.into_iter().partition(|(l, _)| (l - one).norm() <= tol.tau_lambda);
    let n = t.n;
    let len = 2 * t.alpha;
    let mut id: Vec<C64> = (0..t.dim)
        .map(|y| {
            let d: Vec<usize> = (0..len).map(|j| (y / n.pow((len - 1 - j) as u32)) % n).collect();
            if (0..t.alpha).all(|j| d[j] == d[len - 1 - j]) { one } else { C64::new(0.0, 0.0) }
        })
        .collect();
    normalize(&mut id);
    let mut basis = vec![id];
    let mut residuals = Vec::new();
    for (_, v) in &ones {
        let mut w = v.clone();
        for b in &basis {
            let p: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            w.iter_mut().zip(b).for_each(|(y, x)| *y -= p * x);
        }
        let r = normalize(&mut w);
        residuals.push(r);
        basis.push(w);
    }
    // the most dependent vector is the one replaced by the identity
    let drop = residuals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(k, _)| k)
        .ok_or_else(|| Error::Verification("no unit eigenvalue in the spectrum".into()))?;
    if residuals[drop] > 1e-6 {
        return Err(Error::Verification(format!("identity not in the λ=1 eigenspace (residual {:.2e})", residuals[drop])));
    }
    // redo Gram-Schmidt without the dependent vector for a clean basis
    let mut out = vec![basis[0].clone()];
    for (k, (_, v)) in ones.iter().enumerate() {
        if k == drop {
            continue;
        }
        let mut w = v.clone();
        for b in &out {
            let p: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            w.iter_mut().zip(b).for_each(|(y, x)| *y -= p * x);
        }
        normalize(&mut w);
        out.push(w);
    }
    let mut res: Vec<(C64, Vec<C64>)> = out.into_iter().map(|v| (one, v)).collect();
    res.append(&mut rest);
    Ok(res)
}

fn normalize(v: &mut [C64]) -> f64 {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        v.iter_mut().for_each(|z| *z /= nrm);
    }
    nrm
}

/// The operator at time `T` for a diagonal eigenvector of `t_α(g)`, on a chain
/// of length `2α+4` with the top of the staircase at site `2α−1`.
pub fn diagonal_to_operator(g: &Gate, alpha: usize, v: &[C64]) -> Result<LocalOp> {
    let n = g.n();
    let dk = n.pow(alpha as u32);
    let len = 2 * alpha;
    let s = 2 * alpha - 1;
    let mut m = CMat::zeros(dk, dk);
    let mut digits = vec![0usize; len];
    for (y, &val) in v.iter().enumerate() {
        if val == C64::new(0.0, 0.0) {
            continue;
        }
        let mut r = y;
        for j in (0..len).rev() {
            digits[j] = r % n;
            r /= n;
        }
        let ket = (0..alpha).fold(0, |acc, j| acc * n + digits[j]);
        let bra = (0..alpha).fold(0, |acc, j| acc * n + digits[len - 1 - j]);
        m[(ket, bra)] += val;
    }
    let sites: Vec<usize> = (0..alpha).map(|j| s - j).collect();
    let mut op = LocalOp::new(n, sites, m)?;
    let u = g.entries();
    let lowest = s + 2 - 2 * alpha;
    for j in (0..alpha.saturating_sub(1)).rev() {
        let mut left = s - j;
        while left >= lowest + 2 {
            let (a, b) = (left - 2, left - 1);
            op = op.conjugate(u, a, b, false);
            left -= 2;
        }
    }
    let op = op.sorted();
    let norm = op.frobenius();
    if norm == 0.0 {
        return Err(Error::Verification("zero eigenvector".into()));
    }
    Ok(op.scale(C64::new(1.0 / norm, 0.0)))
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> =
        (0..dim).map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Relative residual of `V† O V = phase · O(x + shift)` on random states.
pub fn exchange_residual(g: &Gate, l: usize, op: &LocalOp, phase: C64, shift: isize, seed: u64) -> f64 {
    let n = g.n();
    let dim = n.pow(l as u32);
    let u = g.entries();
    let moved = op.shift(shift, l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..2 {
        let psi = random_state(dim, &mut rng);
        let mut x = psi.clone();
        apply_floquet(&mut x, n, l, u, false);
        let mut y = op.apply(&x, l);
        let scale_l = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        apply_floquet(&mut y, n, l, u, true);
        let r = moved.apply(&psi, l);
        let scale_r = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let diff = y.iter().zip(&r).map(|(a, b)| (a - phase * b).norm_sqr()).sum::<f64>().sqrt();
        let scale = scale_l.max(scale_r).max(1e-300);
        worst = worst.max(diff / scale);
    }
    worst
}

/// All unimodular eigenvectors of `t_α` in both directions, as verified operators.
pub fn extract_gliders(g: &Gate, alpha: usize, tol: &Tolerance, cap: usize, seed: u64) -> Result<Vec<GliderCandidate>> {
    let n = g.n();
    let l = 2 * alpha + 4;
    let chain_cap = 1usize << 22;
    if n.checked_pow(l as u32).is_none_or(|d| d > chain_cap) {
        return Err(Error::CapExceeded {
            what: format!("verification chain N^L for N={n}, L={l}"),
            needed: (n as u128).saturating_pow(l as u32),
            cap: chain_cap as u128,
        });
    }
    let mut out = Vec::new();
    for dir in [Direction::Right, Direction::Left] {
        let t = transfer_matrix(g, alpha, dir, cap)?;
        let seen = match dir {
            Direction::Right => g.clone(),
            Direction::Left => reflected(g),
        };
        let pairs = identity_first(&t, unimodular_eigenvectors(&t, tol)?, tol)?;
        for (lam, v) in pairs {
            let mut op = diagonal_to_operator(&seen, alpha, &v)?;
            let shift = match dir {
                Direction::Right => 2,
                Direction::Left => {
                    op = op.mirror(l).sorted();
                    -2
                }
            };
            let phase = lam * lam;
            let residual = exchange_residual(g, l, &op, phase, shift, seed);
            let trimmed = op.trim(1e-12);
            let support_range = match (trimmed.sites.first(), trimmed.sites.last()) {
                (Some(a), Some(b)) => b - a + 1,
                _ => 0,
            };
            out.push(GliderCandidate {
                direction: dir,
                alpha,
                eigenvalue: [lam.re, lam.im],
                phase: [phase.re, phase.im],
                phase_rational: rational_phase(phase, 2 * t.dim as u64),
                support_range,
                chain_length: l,
                sites: op.sites.clone(),
                operator: MatrixJson::from_cmat(&op.mat),
                residual,
                verified: residual <= RESIDUAL_TOL,
            });
        }
    }
    Ok(out)
}
