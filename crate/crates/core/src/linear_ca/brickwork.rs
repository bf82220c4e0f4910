//! The brickwork matrix `V = A·B` of the linear map `(a,b) ↦ (a+b, a−b)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf::{check_odd_prime, FpMat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickworkMatrix {
    pub l: usize,
    pub p: u64,
    pub v: FpMat,
}

/// Block diagonal with `(1 1; 1 −1)` on the pairs `(2j, 2j+1)`.
pub fn matrix_a(l: usize, p: u64) -> FpMat {
    let mut a = FpMat::zeros(p, l);
    for j in 0..l / 2 {
        let (y, z) = (2 * j, 2 * j + 1);
        a.set(y, y, 1);
        a.set(y, z, 1);
        a.set(z, y, 1);
        a.set(z, z, -1);
    }
    a
}

/// Cyclic shift, `(Cx)_i = x_{i−1}`.
pub fn shift(l: usize, p: u64) -> FpMat {
    let mut c = FpMat::zeros(p, l);
    for i in 0..l {
        c.set(i, (i + l - 1) % l, 1);
    }
    c
}

pub fn shift_inv(l: usize, p: u64) -> FpMat {
    let mut c = FpMat::zeros(p, l);
    for i in 0..l {
        c.set(i, (i + 1) % l, 1);
    }
    c
}

fn check(l: usize, p: u64) -> Result<()> {
    check_odd_prime(p)?;
    if l < 2 || l % 2 == 1 {
        return Err(Error::Precondition(format!("L = {l} must be even and at least 2")));
    }
    Ok(())
}

/// `A·B` with `B = C A C⁻¹`.
pub fn build_v(l: usize, p: u64) -> Result<BrickworkMatrix> {
    check(l, p)?;
    let a = matrix_a(l, p);
    let c = shift(l, p);
    let c_inv = shift_inv(l, p);
    let b = c.mul(&a).mul(&c_inv);
    let v = a.mul(&b);
    let (_, det) = v.rank_det();
    if det == 0 {
        return Err(Error::Verification(format!("V singular for L={l}, p={p}")));
    }
    Ok(BrickworkMatrix { l, p, v })
}

/// One Floquet step of the circuit on `F_p^L`, written with pairs
/// `(y_j, z_j) = (x_{2j}, x_{2j+1})`:
/// `Y_j = y_{j−1} − y_j − z_{j−1} − z_j`, `Z_j = y_j + y_{j+1} − z_j + z_{j+1}`.
/// This is `B·A` (the pairs `(2j, 2j+1)` act first), conjugate to `A·B`.
pub fn component_step(x: &[u64], p: u64) -> Vec<u64> {
    let l = x.len();
    let h = l / 2;
    let y = |j: usize| x[2 * (j % h)] as i64;
    let z = |j: usize| x[2 * (j % h) + 1] as i64;
    let m = p as i64;
    let mut out = vec![0; l];
    for j in 0..h {
        let jm = j + h - 1;
        out[2 * j] = (y(jm) - y(j) - z(jm) - z(j)).rem_euclid(m) as u64;
        out[2 * j + 1] = (y(j) + y(j + 1) - z(j) + z(j + 1)).rem_euclid(m) as u64;
    }
    out
}

/// Checks the component formula against `B·A` on random vectors.
pub fn check_component_formula(l: usize, p: u64, trials: usize, seed: u64) -> Result<bool> {
    check(l, p)?;
    let a = matrix_a(l, p);
    let c = shift(l, p);
    let c_inv = shift_inv(l, p);
    let ba = c.mul(&a).mul(&c_inv).mul(&a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x: Vec<u64> = (0..l).map(|_| rng.random_range(0..p)).collect();
        if ba.matvec(&x) != component_step(&x, p) {
            return Ok(false);
        }
    }
    Ok(true)
}
