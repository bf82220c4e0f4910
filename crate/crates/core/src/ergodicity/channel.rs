//! One-site channels `M±` on vectorized operators.
//!
//! An operator `o` is vectorized as `vec(o)[r·N + c] = o[r][c]`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::CMat;
use crate::error::{Error, Result};
use crate::tensor::{Gate, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// `M+(o) = Tr₁(U†(o⊗1)U)/N` and `M−(o) = Tr₂(U†(1⊗o)U)/N`.
pub fn channel_m(g: &Gate, sign: Sign, tol: &Tolerance) -> Result<CMat> {
    if !g.is_homogeneous() {
        return Err(Error::NotHomogeneous { n: g.n(), m: g.m() });
    }
    if !g.is_unitary(tol) {
        return Err(Error::NotUnitary(format!("defect {:.3e}", g.unitarity_defect())));
    }
    let n = g.n();
    let inv = 1.0 / n as f64;
    let mut m = CMat::zeros(n * n, n * n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for x in 0..n {
                        for y in 0..n {
                            acc += match sign {
                                // out (b,b') = (p,q), in (c,c') = (r,s); sum over a=x, d=y
                                Sign::Plus => g.get(x, p, r, y).conj() * g.get(x, q, s, y),
                                // out (a,a') = (p,q), in (d,d') = (r,s); sum over b=x, c=y
                                Sign::Minus => g.get(p, x, y, r).conj() * g.get(q, x, y, s),
                            };
                        }
                    }
                    m[(p * n + q, r * n + s)] = acc * inv;
                }
            }
        }
    }
    Ok(m)
}

/// Apply a channel matrix to an operator.
pub fn apply_channel(m: &CMat, o: &CMat) -> CMat {
    let n = o.rows();
    let v = m.matvec(o.as_slice());
    CMat::from_rows(n, n, v).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::cmatrix::ONE;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Direct evaluation of the defining partial traces.
    fn direct(g: &Gate, o: &CMat, sign: Sign) -> CMat {
        let n = g.n();
        let id = CMat::identity(n);
        let u = g.entries();
        let big = match sign {
            Sign::Plus => o.kron(&id),
            Sign::Minus => id.kron(o),
        };
        let h = u.adjoint().matmul(&big).matmul(u);
        CMat::from_fn(n, n, |i, j| {
            let s: C64 = (0..n)
                .map(|t| match sign {
                    Sign::Plus => h[(t * n + i, t * n + j)],
                    Sign::Minus => h[(i * n + t, j * n + t)],
                })
                .sum();
            s / n as f64
        })
    }

    #[test]
    fn matches_partial_trace_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Gate::homogeneous(3, CMat::haar_unitary(9, &mut rng)).unwrap();
        let o = CMat::haar_unitary(3, &mut rng);
        let tol = Tolerance::default();
        for sign in [Sign::Plus, Sign::Minus] {
            let m = channel_m(&g, sign, &tol).unwrap();
            assert!(apply_channel(&m, &o).max_abs_diff(&direct(&g, &o, sign)) < 1e-12);
            // trace preservation
            assert!((apply_channel(&m, &o).trace() - o.trace()).norm() < 1e-12);
            let id = apply_channel(&m, &CMat::identity(3));
            assert!(id.max_abs_diff(&CMat::identity(3)) < 1e-12);
        }
    }

    #[test]
    fn perfect_gate_has_trivial_spectrum() {
        let g = builtins::builtin("Z3").unwrap().gate();
        let m = channel_m(&g, Sign::Plus, &Tolerance::default()).unwrap();
        let ev = m.eigenvalues().unwrap();
        let ones = ev.iter().filter(|z| (*z - ONE).norm() < 1e-9).count();
        let zeros = ev.iter().filter(|z| z.norm() < 1e-9).count();
        assert_eq!((ones, zeros), (1, 8));
    }

    #[test]
    fn rejects_non_unitary() {
        let g = Gate::homogeneous(2, CMat::zeros(4, 4)).unwrap();
        assert!(channel_m(&g, Sign::Plus, &Tolerance::default()).is_err());
    }
}
