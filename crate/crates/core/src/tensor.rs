//! Two-site gates and their reshufflings.
//!
//! A gate of type `(N, M)` maps `C^N ⊗ C^M → C^M ⊗ C^N`. The component
//! `U^{cd}_{ab}` (incoming `a < N`, `b < M`; outgoing `c < M`, `d < N`, all
//! zero-based) sits at row `c·N + d`, column `a·M + b`. Composite indices are
//! always packed row-major: `(x, y) ↦ x·dim(y) + y`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::{CMat, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Algebraic identities (unitarity, equality of gates).
    pub tau_u: f64,
    /// Unimodularity of eigenvalues.
    pub tau_lambda: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { tau_u: 1e-10, tau_lambda: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(tau_u: f64, tau_lambda: f64) -> Result<Self> {
        if !(tau_u > 0.0 && tau_lambda > 0.0) {
            return Err(Error::Precondition("tolerances must be positive".into()));
        }
        Ok(Tolerance { tau_u, tau_lambda })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    n: usize,
    m: usize,
    entries: CMat,
}

impl Gate {
    pub fn new(n: usize, m: usize, entries: CMat) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Dimension("local dimensions must be positive".into()));
        }
        if entries.rows() != n * m || entries.cols() != n * m {
            return Err(Error::Dimension(format!(
                "type ({n},{m}) needs a {0}×{0} matrix, got {1}×{2}",
                n * m,
                entries.rows(),
                entries.cols()
            )));
        }
        Ok(Gate { n, m, entries })
    }

    pub fn homogeneous(n: usize, entries: CMat) -> Result<Self> {
        Self::new(n, n, entries)
    }

    /// Build from the tensor components `f(a, b, c, d) = U^{cd}_{ab}`.
    pub fn from_components(n: usize, m: usize, mut f: impl FnMut(usize, usize, usize, usize) -> C64) -> Self {
        let mut e = CMat::zeros(n * m, n * m);
        for a in 0..n {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..n {
                        e[(c * n + d, a * m + b)] = f(a, b, c, d);
                    }
                }
            }
        }
        Gate { n, m, entries: e }
    }

    /// The SWAP of type `(N, M)`: `|a⟩⊗|b⟩ ↦ |b⟩⊗|a⟩`.
    pub fn swap(n: usize, m: usize) -> Self {
        Self::from_components(n, m, |a, b, c, d| if a == d && b == c { ONE } else { ZERO })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_components(n, n, |a, b, c, d| if a == c && b == d { ONE } else { ZERO })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_homogeneous(&self) -> bool {
        self.n == self.m
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    /// `U^{cd}_{ab}`.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C64 {
        self.entries[(c * self.n + d, a * self.m + b)]
    }

    fn require_homogeneous(&self) -> Result<()> {
        if self.n != self.m {
            return Err(Error::NotHomogeneous { n: self.n, m: self.m });
        }
        Ok(())
    }

    /// `(U^R)^{db}_{ca} = U^{cd}_{ab}`; the result has type `(M, N)`.
    pub fn reshuffle_r(&self) -> Gate {
        let (n, m) = (self.n, self.m);
        // new type (n', m') = (m, n): incoming (c, a), outgoing (d, b)
        Gate::from_components(m, n, |c, a, d, b| self.get(a, b, c, d))
    }

    /// Inverse index map of [`Gate::reshuffle_r`].
    pub fn reshuffle_r_inverse(&self) -> Gate {
        let (n, m) = (self.m, self.n);
        Gate::from_components(n, m, |a, b, c, d| self.get(c, a, d, b))
    }

    /// `(U^D)^{bc}_{ad} = U^{cd}_{ab}`, homogeneous gates only.
    pub fn reshuffle_d(&self) -> Result<Gate> {
        self.require_homogeneous()?;
        Ok(Gate::from_components(self.n, self.n, |a, d, b, c| self.get(a, b, c, d)))
    }

    /// Inverse index map of [`Gate::reshuffle_d`]. The map itself has order 3.
    pub fn reshuffle_d_inverse(&self) -> Result<Gate> {
        self.require_homogeneous()?;
        Ok(Gate::from_components(self.n, self.n, |a, b, c, d| self.get(a, d, b, c)))
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.entries.unitarity_defect()
    }

    pub fn is_unitary(&self, tol: &Tolerance) -> bool {
        self.entries.is_unitary(tol.tau_u)
    }

    pub fn is_dual_unitary(&self, tol: &Tolerance) -> bool {
        self.is_unitary(tol) && self.reshuffle_r().is_unitary(tol)
    }

    pub fn is_perfect(&self, tol: &Tolerance) -> bool {
        self.is_homogeneous()
            && self.is_dual_unitary(tol)
            && self.reshuffle_d().map(|d| d.is_unitary(tol)).unwrap_or(false)
    }

    pub fn flags(&self, tol: &Tolerance) -> GateFlags {
        GateFlags {
            unitary: self.is_unitary(tol),
            dual_unitary: self.is_dual_unitary(tol),
            perfect: self.is_perfect(tol),
        }
    }

    /// `(A⊗B)·U·(C⊗D)` with `A: M×M`, `B: N×N`, `C: N×N`, `D: M×M`.
    pub fn dress(&self, a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> Result<Gate> {
        let (n, m) = (self.n, self.m);
        for (name, x, dim) in [("A", a, m), ("B", b, n), ("C", c, n), ("D", d, m)] {
            if x.rows() != dim || x.cols() != dim {
                return Err(Error::Dimension(format!(
                    "{name} must be {dim}×{dim}, got {}×{}",
                    x.rows(),
                    x.cols()
                )));
            }
        }
        let left = a.kron(b);
        let right = c.kron(d);
        Ok(Gate { n, m, entries: left.matmul(&self.entries).matmul(&right) })
    }

    /// `(A⊗B)·U·(B†⊗A†)`, homogeneous gates. Equivalent circuits.
    pub fn diag_sim(&self, a: &CMat, b: &CMat) -> Result<Gate> {
        self.dress(a, b, &b.adjoint(), &a.adjoint())
    }

    pub fn matmul(&self, other: &Gate) -> Result<Gate> {
        if self.n != self.m || other.n != self.n || other.m != self.m {
            return Err(Error::Dimension("products are defined for equal homogeneous gates".into()));
        }
        Ok(Gate { n: self.n, m: self.m, entries: self.entries.matmul(&other.entries) })
    }

    pub fn adjoint(&self) -> Gate {
        // U† maps C^M⊗C^N → C^N⊗C^M, which is type (M, N).
        Gate { n: self.m, m: self.n, entries: self.entries.adjoint() }
    }

    /// Apply a leg permutation `T'[x] = T[x∘σ]`, where `T[a,b,c,d] = U^{cd}_{ab}`.
    pub fn permute_legs(&self, sigma: [usize; 4]) -> Result<Gate> {
        self.require_homogeneous()?;
        Ok(Gate::from_components(self.n, self.n, |a, b, c, d| {
            let x = [a, b, c, d];
            self.get(x[sigma[0]], x[sigma[1]], x[sigma[2]], x[sigma[3]])
        }))
    }

    pub fn d4_transform(&self, g: D4) -> Result<Gate> {
        self.permute_legs(g.sigma())
    }

    pub fn max_abs_diff(&self, other: &Gate) -> f64 {
        if (self.n, self.m) != (other.n, other.m) {
            return f64::INFINITY;
        }
        self.entries.max_abs_diff(&other.entries)
    }

    /// Equality up to a global phase, measured as max-entry difference.
    pub fn phase_distance(&self, other: &Gate) -> f64 {
        if (self.n, self.m) != (other.n, other.m) {
            return f64::INFINITY;
        }
        let (x, y) = (self.entries.as_slice(), other.entries.as_slice());
        let k = (0..x.len()).max_by(|&i, &j| x[i].norm().total_cmp(&x[j].norm()));
        let Some(k) = k else { return 0.0 };
        if y[k].norm() == 0.0 {
            return self.entries.max_abs().max(other.entries.max_abs());
        }
        let phase = x[k] / y[k];
        let phase = phase / phase.norm();
        self.entries.max_abs_diff(&other.entries.scale(phase))
    }

    pub fn four_leg_state(&self) -> Result<FourLegState> {
        self.require_homogeneous()?;
        let n = self.n;
        let mut comps = vec![ZERO; n * n * n * n];
        let s = 1.0 / n as f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        comps[((a * n + b) * n + c) * n + d] = self.get(a, b, c, d) * s;
                    }
                }
            }
        }
        Ok(FourLegState { n, comps })
    }

    pub fn reduced_density(&self, pair: LegPair) -> Result<CMat> {
        Ok(self.four_leg_state()?.reduced_density(pair))
    }

    pub fn diagonal_entanglement(&self) -> Result<Entanglement> {
        let rho = self.reduced_density(LegPair::P14)?;
        let ev = rho.hermitian_eigenvalues()?;
        let entropy: f64 = ev.iter().filter(|&&l| l > 1e-15).map(|&l| -l * l.ln()).sum();
        let max = 2.0 * (self.n as f64).ln();
        Ok(Entanglement { entropy: entropy.max(0.0), max })
    }

    pub fn to_json(&self) -> GateJson {
        let e = &self.entries;
        let re = (0..e.rows()).map(|i| e.row(i).iter().map(|z| z.re).collect()).collect();
        let im = (0..e.rows()).map(|i| e.row(i).iter().map(|z| z.im).collect()).collect();
        GateJson { n: self.n, m: self.m, re, im }
    }

    pub fn from_json(j: &GateJson) -> Result<Gate> {
        let d = j.n * j.m;
        if j.re.len() != d || j.im.len() != d {
            return Err(Error::Dimension(format!("expected {d} rows")));
        }
        let mut data = Vec::with_capacity(d * d);
        for (r, i) in j.re.iter().zip(&j.im) {
            if r.len() != d || i.len() != d {
                return Err(Error::Dimension(format!("expected {d} columns")));
            }
            data.extend(r.iter().zip(i).map(|(&x, &y)| C64::new(x, y)));
        }
        Gate::new(j.n, j.m, CMat::from_rows(d, d, data)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    pub n: usize,
    pub m: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl Serialize for Gate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GateJson::deserialize(d)?;
        Gate::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateFlags {
    pub unitary: bool,
    pub dual_unitary: bool,
    pub perfect: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entanglement {
    /// von Neumann entropy of ρ_14, natural log.
    pub entropy: f64,
    /// 2 ln N.
    pub max: f64,
}

/// A pair of legs of the four-leg state, labelled 1..4 = a, b, c, d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LegPair {
    P12,
    P34,
    P13,
    P24,
    P14,
    P23,
}

impl LegPair {
    pub const ALL: [LegPair; 6] =
        [LegPair::P12, LegPair::P34, LegPair::P13, LegPair::P24, LegPair::P14, LegPair::P23];

    pub fn legs(self) -> (usize, usize) {
        match self {
            LegPair::P12 => (0, 1),
            LegPair::P34 => (2, 3),
            LegPair::P13 => (0, 2),
            LegPair::P24 => (1, 3),
            LegPair::P14 => (0, 3),
            LegPair::P23 => (1, 2),
        }
    }
}

impl std::str::FromStr for LegPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "12" => LegPair::P12,
            "34" => LegPair::P34,
            "13" => LegPair::P13,
            "24" => LegPair::P24,
            "14" => LegPair::P14,
            "23" => LegPair::P23,
            _ => return Err(Error::Parse(format!("unknown leg pair `{s}`"))),
        })
    }
}

/// `u_{abcd} = U^{cd}_{ab} / N`, stored with `a` slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct FourLegState {
    n: usize,
    comps: Vec<C64>,
}

impl FourLegState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn norm(&self) -> f64 {
        self.comps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[inline]
    fn at(&self, x: [usize; 4]) -> C64 {
        let n = self.n;
        self.comps[((x[0] * n + x[1]) * n + x[2]) * n + x[3]]
    }

    /// `ρ_{ij} = Tr_{rest} |u⟩⟨u|`, indexed by `(x_i, x_j)` packed row-major.
    pub fn reduced_density(&self, pair: LegPair) -> CMat {
        let n = self.n;
        let (i, j) = pair.legs();
        let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
        let mut rho = CMat::zeros(n * n, n * n);
        for xi in 0..n {
            for xj in 0..n {
                for yi in 0..n {
                    for yj in 0..n {
                        let mut acc = ZERO;
                        for r0 in 0..n {
                            for r1 in 0..n {
                                let mut x = [0; 4];
                                let mut y = [0; 4];
                                x[i] = xi;
                                x[j] = xj;
                                y[i] = yi;
                                y[j] = yj;
                                x[rest[0]] = r0;
                                x[rest[1]] = r1;
                                y[rest[0]] = r0;
                                y[rest[1]] = r1;
                                acc += self.at(x) * self.at(y).conj();
                            }
                        }
                        rho[(xi * n + xj, yi * n + yj)] = acc;
                    }
                }
            }
        }
        rho
    }
}

/// Elements of the dihedral group acting on the four legs, written `s^e · r^k`
/// with `r` the reshuffling and `s` the space reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct D4 {
    pub reflect: bool,
    pub rot: u8,
}

impl D4 {
    pub const IDENTITY: D4 = D4 { reflect: false, rot: 0 };
    pub const RESHUFFLE_R: D4 = D4 { reflect: false, rot: 1 };
    pub const SPACE_REFLECT: D4 = D4 { reflect: true, rot: 0 };

    const R: [usize; 4] = [1, 3, 0, 2];
    const S: [usize; 4] = [1, 0, 3, 2];

    /// Time reflection `U ↦ U^t` (no complex conjugation).
    pub fn time_reflect() -> D4 {
        D4::all().into_iter().find(|g| g.sigma() == [2, 3, 0, 1]).expect("U^t lies in the group")
    }

    pub fn all() -> Vec<D4> {
        let mut v = Vec::with_capacity(8);
        for reflect in [false, true] {
            for rot in 0..4 {
                v.push(D4 { reflect, rot });
            }
        }
        v
    }

    /// Leg permutation: applying `g` sends `T` to `T[x∘σ]`.
    pub fn sigma(self) -> [usize; 4] {
        // applying σ then τ gives the leg map i ↦ τ[σ[i]]
        let mut s = [0, 1, 2, 3];
        for _ in 0..self.rot {
            s = then(s, Self::R);
        }
        if self.reflect {
            s = then(s, Self::S);
        }
        s
    }

    /// The element equal to applying `self` first, then `other`.
    pub fn then(self, other: D4) -> D4 {
        let target = then(self.sigma(), other.sigma());
        D4::all().into_iter().find(|g| g.sigma() == target).expect("closed under composition")
    }

    pub fn inverse(self) -> D4 {
        D4::all().into_iter().find(|g| self.then(*g) == D4::IDENTITY).expect("group inverse")
    }

    pub fn name(self) -> String {
        match (self.reflect, self.rot) {
            (false, 0) => "identity".into(),
            (false, k) => format!("r{k}"),
            (true, 0) => "s".into(),
            (true, k) => format!("r{k}s"),
        }
    }
}

fn then(first: [usize; 4], second: [usize; 4]) -> [usize; 4] {
    [second[first[0]], second[first[1]], second[first[2]], second[first[3]]]
}

impl std::str::FromStr for D4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<D4> {
        match s {
            "identity" | "id" => Ok(D4::IDENTITY),
            "space_reflect" | "s" => Ok(D4::SPACE_REFLECT),
            "time_reflect" | "t" => Ok(D4::time_reflect()),
            "reshuffle_r" | "r" | "r1" => Ok(D4::RESHUFFLE_R),
            _ => D4::all()
                .into_iter()
                .find(|g| g.name() == s)
                .ok_or_else(|| Error::Parse(format!("unknown D4 element `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_gate(n: usize, m: usize, seed: u64) -> Gate {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Gate::new(n, m, CMat::haar_unitary(n * m, &mut rng)).unwrap()
    }

    #[test]
    fn swap_components() {
        let p = Gate::swap(2, 3);
        assert_eq!(p.get(1, 2, 2, 1), ONE);
        assert_eq!(p.get(1, 2, 1, 2), ZERO);
        assert!(p.is_unitary(&Tolerance::default()));
    }

    #[test]
    fn reshuffle_r_round_trip_is_exact() {
        for (n, m) in [(2, 2), (2, 3), (3, 2)] {
            let g = random_gate(n, m, 7);
            assert_eq!(g.reshuffle_r().reshuffle_r_inverse(), g);
            assert_eq!(g.reshuffle_r_inverse().reshuffle_r(), g);
            let r = g.reshuffle_r();
            assert_eq!((r.n(), r.m()), (m, n));
        }
    }

    #[test]
    fn reshuffle_r_of_swap() {
        // U^{cd}_{ab} = δ_ad δ_bc, so (U^R)^{db}_{ca} = δ_ad δ_bc: again a SWAP
        let r = Gate::swap(3, 3).reshuffle_r();
        for c in 0..3 {
            for a in 0..3 {
                for d in 0..3 {
                    for b in 0..3 {
                        let want = if a == d && b == c { ONE } else { ZERO };
                        assert_eq!(r.get(c, a, d, b), want);
                    }
                }
            }
        }
        assert_eq!(r, Gate::swap(3, 3));
        assert!(r.is_unitary(&Tolerance::default()));
    }

    #[test]
    fn reshuffle_d_has_order_three() {
        let g = random_gate(3, 3, 11);
        let d1 = g.reshuffle_d().unwrap();
        assert_eq!(d1.reshuffle_d_inverse().unwrap(), g);
        let d3 = d1.reshuffle_d().unwrap().reshuffle_d().unwrap();
        assert_eq!(d3, g);
        assert!(Gate::swap(2, 3).reshuffle_d().is_err());
    }

    #[test]
    fn swap_is_dual_unitary_not_perfect() {
        let t = Tolerance::default();
        let p = Gate::swap(3, 3);
        assert!(p.is_dual_unitary(&t));
        assert!(!p.is_perfect(&t));
        assert!(!p.reshuffle_d().unwrap().is_unitary(&t));
    }

    #[test]
    fn zeroed_swap_entry_is_not_unitary() {
        let mut e = Gate::swap(2, 2).into_entries();
        e[(0, 0)] = ZERO;
        assert!(!Gate::homogeneous(2, e).unwrap().is_unitary(&Tolerance::default()));
    }

    #[test]
    fn d4_closes_with_eight_elements() {
        let all = D4::all();
        let sigmas: std::collections::BTreeSet<_> = all.iter().map(|g| g.sigma()).collect();
        assert_eq!(sigmas.len(), 8);
        assert_eq!(D4::SPACE_REFLECT.sigma(), [1, 0, 3, 2]);
        assert_eq!(D4::RESHUFFLE_R.sigma(), [1, 3, 0, 2]);
        assert_eq!(D4::time_reflect().sigma(), [2, 3, 0, 1]);
        for g in &all {
            assert_eq!(g.then(g.inverse()), D4::IDENTITY);
        }
    }

    #[test]
    fn d4_action_is_a_group_action() {
        let g = random_gate(2, 2, 21);
        for x in D4::all() {
            for y in D4::all() {
                let lhs = g.d4_transform(x).unwrap().d4_transform(y).unwrap();
                let rhs = g.d4_transform(x.then(y)).unwrap();
                assert_eq!(lhs, rhs, "{} then {}", x.name(), y.name());
            }
        }
    }

    #[test]
    fn d4_generators_match_matrix_forms() {
        let g = random_gate(3, 3, 5);
        let p = Gate::swap(3, 3);
        let pup = p.matmul(&g).unwrap().matmul(&p).unwrap();
        assert!(g.d4_transform(D4::SPACE_REFLECT).unwrap().max_abs_diff(&pup) < 1e-14);
        let ut = Gate::homogeneous(3, g.entries().transpose()).unwrap();
        assert_eq!(g.d4_transform(D4::time_reflect()).unwrap(), ut);
        assert_eq!(g.d4_transform(D4::RESHUFFLE_R).unwrap(), g.reshuffle_r());
    }

    #[test]
    fn density_matrices_of_swap() {
        let p = Gate::swap(2, 2);
        let eye = CMat::identity(4).scale(C64::new(0.25, 0.0));
        for pair in [LegPair::P12, LegPair::P34, LegPair::P13, LegPair::P24] {
            assert!(p.reduced_density(pair).unwrap().max_abs_diff(&eye) < 1e-14);
        }
        let rho = p.reduced_density(LegPair::P14).unwrap();
        assert!((rho.matmul(&rho).trace() - ONE).norm() < 1e-14);
        assert!(p.diagonal_entanglement().unwrap().entropy.abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let g = random_gate(2, 3, 9);
        let s = serde_json::to_string(&g).unwrap();
        let back: Gate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
