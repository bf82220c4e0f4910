//! Infinite-temperature two-point functions on a periodic brickwork chain.
//!
//! `⟨o1(x,t) o2(y,0)⟩ = Tr(V^{-k} o1 V^k o2) / N^L` with `t = 2k` layers. The
//! evolution is split as `Tr((V^{-k1} o1 V^{k1})(V^{k2} o2 V^{-k2}))`,
//! `k1 + k2 = k`, so both factors stay local and the trace is taken over their
//! overlap only. The result is exact.

use num_complex::Complex64 as C64;

use super::chain::{layer_pairs, trace_product, LocalOp};
use crate::cmatrix::{root_of_unity, CMat};
use crate::error::{Error, Result};
use crate::tensor::{Gate, Tolerance};

pub const DEFAULT_CHAIN_CAP: u128 = 6561;

/// `V^{-k} O V^{k}` with `V = V₂V₁` (each step conjugates by `V₂` first).
pub fn heisenberg(u: &CMat, op: &LocalOp, l: usize, steps: usize) -> LocalOp {
    let mut cur = op.clone();
    for _ in 0..steps {
        for layer in [1, 0] {
            for (i, j) in layer_pairs(l, layer) {
                cur = cur.conjugate(u, i, j, true);
            }
        }
    }
    cur
}

/// `V^{k} O V^{-k}`.
pub fn schrodinger(u: &CMat, op: &LocalOp, l: usize, steps: usize) -> LocalOp {
    let mut cur = op.clone();
    for _ in 0..steps {
        for layer in [0, 1] {
            for (i, j) in layer_pairs(l, layer) {
                cur = cur.conjugate(u, i, j, false);
            }
        }
    }
    cur
}

fn check(g: &Gate, l: usize, t: usize, cap: u128) -> Result<()> {
    if !g.is_homogeneous() {
        return Err(Error::NotHomogeneous { n: g.n(), m: g.m() });
    }
    if !g.is_unitary(&Tolerance::default()) {
        return Err(Error::NotUnitary(format!("defect {:.3e}", g.unitarity_defect())));
    }
    if l < 2 || l % 2 == 1 {
        return Err(Error::Precondition(format!("chain length {l} must be even and at least 2")));
    }
    if t % 2 == 1 {
        return Err(Error::Precondition(format!("t = {t} layers must be even")));
    }
    let need = (g.n() as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    if need > cap {
        return Err(Error::CapExceeded { what: format!("N^L for N={}, L={l}", g.n()), needed: need, cap });
    }
    // local supports grow by two sites per layer and side
    let reach = (1 + 2 * t.div_ceil(2)).min(l);
    if (g.n() as u128).pow(reach as u32) > 1 << 16 {
        return Err(Error::CapExceeded {
            what: format!("local operator dimension after {t} layers"),
            needed: (g.n() as u128).pow(reach as u32),
            cap: 1 << 16,
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn correlator(g: &Gate, l: usize, t: usize, o1: &CMat, o2: &CMat, x: usize, y: usize, cap: u128) -> Result<C64> {
    check(g, l, t, cap)?;
    if x >= l || y >= l {
        return Err(Error::Precondition(format!("sites {x}, {y} outside the chain of length {l}")));
    }
    let n = g.n();
    let a = LocalOp::one_site(n, x, o1.clone())?;
    let b = LocalOp::one_site(n, y, o2.clone())?;
    Ok(split_trace(g.entries(), &a, &b, l, t))
}

fn split_trace(u: &CMat, a: &LocalOp, b: &LocalOp, l: usize, t: usize) -> C64 {
    let k = t / 2;
    let k1 = k / 2;
    let a = heisenberg(u, a, l, k1);
    let b = schrodinger(u, b, l, k - k1);
    trace_product(&a, &b, l) / (a.n as f64).powi(l as i32)
}

/// The `N²−1` traceless clock-and-shift operators `X^p Z^q`, `(p,q) ≠ (0,0)`.
pub fn traceless_basis(n: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if p == 0 && q == 0 {
                continue;
            }
            out.push(CMat::from_fn(n, n, |i, j| {
                if i == (j + p) % n { root_of_unity((q * j) as i64, n as u64) } else { C64::new(0.0, 0.0) }
            }));
        }
    }
    out
}

/// Largest `|⟨o1(x,t) o2(y,0)⟩|` over traceless basis pairs and all site pairs
/// selected by `keep(x, y)`.
pub fn max_correlation(g: &Gate, l: usize, t: usize, cap: u128, keep: impl Fn(usize, usize) -> bool) -> Result<f64> {
    check(g, l, t, cap)?;
    let n = g.n();
    let u = g.entries();
    let basis = traceless_basis(n);
    let k = t / 2;
    let k1 = k / 2;
    let evolved = |site: usize, fwd: bool| -> Result<Vec<LocalOp>> {
        basis
            .iter()
            .map(|o| {
                let op = LocalOp::one_site(n, site, o.clone())?;
                Ok(if fwd { heisenberg(u, &op, l, k1) } else { schrodinger(u, &op, l, k - k1) })
            })
            .collect()
    };
    let norm = (n as f64).powi(l as i32);
    let mut worst = 0.0f64;
    let mut right = Vec::with_capacity(l);
    for y in 0..l {
        right.push(evolved(y, false)?);
    }
    for x in 0..l {
        let left = evolved(x, true)?;
        for (y, bs) in right.iter().enumerate() {
            if !keep(x, y) {
                continue;
            }
            for a in &left {
                for b in bs {
                    worst = worst.max((trace_product(a, b, l) / norm).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Whether `(x, y)` lies on the light cone `|x − y| = t` of a ring of length `l`.
pub fn on_light_cone(x: usize, y: usize, t: usize, l: usize) -> bool {
    let d = (x + l - y) % l;
    d == t % l || (l - d) % l == t % l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::ergodicity::channel::{apply_channel, channel_m, Sign};
    use crate::ergodicity::chain::apply_floquet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn full_matrix(op: &LocalOp, l: usize) -> CMat {
        let dim = op.n.pow(l as u32);
        let mut m = CMat::zeros(dim, dim);
        for j in 0..dim {
            let mut e = vec![C64::new(0.0, 0.0); dim];
            e[j] = C64::new(1.0, 0.0);
            let col = op.apply(&e, l);
            for i in 0..dim {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    fn floquet_matrix(u: &CMat, n: usize, l: usize) -> CMat {
        let dim = n.pow(l as u32);
        let mut m = CMat::zeros(dim, dim);
        for j in 0..dim {
            let mut e = vec![C64::new(0.0, 0.0); dim];
            e[j] = C64::new(1.0, 0.0);
            apply_floquet(&mut e, n, l, u, false);
            for i in 0..dim {
                m[(i, j)] = e[i];
            }
        }
        m
    }

    #[test]
    fn split_matches_dense_evolution() {
        let (n, l) = (2, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = Gate::homogeneous(n, CMat::haar_unitary(4, &mut rng)).unwrap();
        let o1 = CMat::haar_unitary(2, &mut rng);
        let o2 = CMat::haar_unitary(2, &mut rng);
        let v = floquet_matrix(g.entries(), n, l);
        for t in [0, 2, 4] {
            for (x, y) in [(0, 3), (1, 1), (2, 5), (3, 0)] {
                let a = full_matrix(&LocalOp::one_site(n, x, o1.clone()).unwrap(), l);
                let b = full_matrix(&LocalOp::one_site(n, y, o2.clone()).unwrap(), l);
                let mut ev = a;
                for _ in 0..t / 2 {
                    ev = v.adjoint().matmul(&ev).matmul(&v);
                }
                let want = ev.matmul(&b).trace() / 64.0;
                let got = correlator(&g, l, t, &o1, &o2, x, y, DEFAULT_CHAIN_CAP).unwrap();
                assert!((got - want).norm() < 1e-12, "t={t} x={x} y={y}");
            }
        }
    }

    #[test]
    fn light_cone_value_is_a_channel_power() {
        let (n, l, t) = (2, 8, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = crate::constructions::n2_family(0.37).dress(
            &CMat::haar_unitary(2, &mut rng),
            &CMat::haar_unitary(2, &mut rng),
            &CMat::haar_unitary(2, &mut rng),
            &CMat::haar_unitary(2, &mut rng),
        )
        .unwrap();
        let tol = Tolerance::default();
        let mp = channel_m(&g, Sign::Plus, &tol).unwrap();
        let mm = channel_m(&g, Sign::Minus, &tol).unwrap();
        for o1 in traceless_basis(n) {
            for o2 in traceless_basis(n) {
                // x odd: left leg of the last layer's gate, moves right
                let mut e = o1.clone();
                let mut f = o1.clone();
                for _ in 0..t {
                    e = apply_channel(&mp, &e);
                    f = apply_channel(&mm, &f);
                }
                let want_r = e.matmul(&o2).trace() / n as f64;
                let want_l = f.matmul(&o2).trace() / n as f64;
                let got_r = correlator(&g, l, t, &o1, &o2, 3, 5, DEFAULT_CHAIN_CAP).unwrap();
                let got_l = correlator(&g, l, t, &o1, &o2, 4, 2, DEFAULT_CHAIN_CAP).unwrap();
                assert!((got_r - want_r).norm() < 1e-12);
                assert!((got_l - want_l).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn perfect_gate_has_no_correlations() {
        let g = builtins::builtin("Z3").unwrap().gate();
        let w = max_correlation(&g, 6, 2, DEFAULT_CHAIN_CAP, |_, _| true).unwrap();
        assert!(w < 1e-12);
    }

    #[test]
    fn preconditions() {
        let g = builtins::builtin("Z3").unwrap().gate();
        let o = CMat::identity(3);
        assert!(correlator(&g, 8, 3, &o, &o, 0, 0, DEFAULT_CHAIN_CAP).is_err());
        assert!(matches!(
            correlator(&g, 10, 2, &o, &o, 0, 0, DEFAULT_CHAIN_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }
}
