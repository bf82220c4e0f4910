//! Factories for dual-unitary gates and permutation maps.

use num_complex::Complex64 as C64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::builtins;
use crate::cmatrix::{root_of_unity, CMat, ZERO};
use crate::error::{Error, Result};
use crate::perm_map::{invert_perm, PermMap};
use crate::tensor::{Gate, GateFlags, GateJson, Tolerance};

/// The qubit family `diag(e^{-iJ}) ⊕ −i e^{iJ}·SWAP` on the middle block.
pub fn n2_family(j: f64) -> Gate {
    let p = C64::from_polar(1.0, -j);
    let q = C64::new(0.0, -1.0) * C64::from_polar(1.0, j);
    let mut e = CMat::zeros(4, 4);
    e[(0, 0)] = p;
    e[(1, 2)] = q;
    e[(2, 1)] = q;
    e[(3, 3)] = p;
    Gate::homogeneous(2, e).expect("4×4")
}

/// `U = D·P` for a diagonal unitary `D` of size `N²`.
pub fn dressed_swap(d: &CMat, tol: &Tolerance) -> Result<Gate> {
    if !d.is_square() {
        return Err(Error::Dimension("D must be square".into()));
    }
    let n = (d.rows() as f64).sqrt().round() as usize;
    if n * n != d.rows() {
        return Err(Error::Dimension(format!("size {} is not a square N²", d.rows())));
    }
    if !d.is_diagonal(tol.tau_u) {
        return Err(Error::Precondition("D is not diagonal".into()));
    }
    if (0..d.rows()).any(|i| (d[(i, i)].norm() - 1.0).abs() > tol.tau_u) {
        return Err(Error::NotUnitary("diagonal entries of D must be unimodular".into()));
    }
    let p = Gate::swap(n, n);
    Gate::homogeneous(n, d.matmul(p.entries()))
}

/// `D·P` with `D = diag(e^{iφ})`.
pub fn dressed_swap_phases(n: usize, phases: &[f64]) -> Result<Gate> {
    if phases.len() != n * n {
        return Err(Error::Dimension(format!("need {} phases", n * n)));
    }
    let d: Vec<C64> = phases.iter().map(|&f| C64::from_polar(1.0, f)).collect();
    dressed_swap(&CMat::diag(&d), &Tolerance::default())
}

/// Block embedding of gates of types `(N1, M)` and `(N2, M)` into type `(N1+N2, M)`.
pub fn direct_sum(u1: &Gate, u2: &Gate) -> Result<Gate> {
    if u1.m() != u2.m() {
        return Err(Error::Dimension(format!("second dimensions differ: {} vs {}", u1.m(), u2.m())));
    }
    let (n1, n2, m) = (u1.n(), u2.n(), u1.m());
    Ok(Gate::from_components(n1 + n2, m, |a, b, c, d| match (a < n1, d < n1) {
        (true, true) => u1.get(a, b, c, d),
        (false, false) => u2.get(a - n1, b, c, d - n1),
        _ => ZERO,
    }))
}

/// A one-site unitary `u` viewed as a gate of type `(1, M)`.
pub fn one_dimensional_block(u: &CMat) -> Result<Gate> {
    if !u.is_square() {
        return Err(Error::Dimension("block must be square".into()));
    }
    let m = u.rows();
    Ok(Gate::from_components(1, m, |_, b, c, _| u[(c, b)]))
}

/// `U = P·Σ_j P^j ⊗ U^{(j)}`: `|a, b⟩ ↦ U^{(a)}|b⟩ ⊗ |a⟩`.
pub fn controlled_unitary(us: &[CMat]) -> Result<Gate> {
    let n = us.len();
    if n == 0 {
        return Err(Error::Dimension("need at least one unitary".into()));
    }
    for (j, u) in us.iter().enumerate() {
        if u.rows() != n || u.cols() != n {
            return Err(Error::Dimension(format!("U^({}) must be {n}×{n}", j + 1)));
        }
    }
    Ok(Gate::from_components(n, n, |a, b, c, d| if d == a { us[a][(c, b)] } else { ZERO }))
}

/// The controlled unitary as an iterated direct sum of `(1, N)` blocks.
pub fn controlled_unitary_by_direct_sums(us: &[CMat]) -> Result<Gate> {
    let mut acc = one_dimensional_block(&us[0])?;
    for u in &us[1..] {
        acc = direct_sum(&acc, &one_dimensional_block(u)?)?;
    }
    Ok(acc)
}

/// `Z^{β,cd}_{ab,α} = Σ_γ U^{βc}_{aγ} V^{γd}_{bα}` for `U: (N1, M)`, `V: (N2, M)`.
pub fn diagonal_compose(u: &Gate, v: &Gate) -> Result<Gate> {
    if u.m() != v.m() {
        return Err(Error::Dimension(format!(
            "contracted index has dimension {} on U and {} on V",
            u.m(),
            v.m()
        )));
    }
    let (n1, n2, m) = (u.n(), v.n(), u.m());
    Ok(Gate::from_components(n1 * n2, m, |ab, alpha, beta, cd| {
        let (a, b) = (ab / n2, ab % n2);
        let (c, d) = (cd / n2, cd % n2);
        (0..m).map(|g| u.get(a, g, beta, c) * v.get(b, alpha, g, d)).sum()
    }))
}

/// Embed a two-qubit operator on qubits `(q, q+1)` of four (zero-based, `q` most significant first).
fn on_qubits(g: &CMat, q: usize) -> CMat {
    let left = CMat::identity(1 << q);
    let right = CMat::identity(1 << (2 - q));
    left.kron(g).kron(&right)
}

/// `U = Z_23 Y_34 C_23 V_12 X_23` on four qubits, read as an `N = 4` gate with
/// site one = qubits (1, 2) and site two = qubits (3, 4).
pub fn compose_n4(x: &Gate, y: &Gate, v: &Gate, z: &Gate, c: &CMat, tol: &Tolerance) -> Result<Gate> {
    for (name, g) in [("X", x), ("Y", y), ("V", v), ("Z", z)] {
        if g.n() != 2 || g.m() != 2 {
            return Err(Error::Dimension(format!("{name} must be a qubit gate")));
        }
        if !g.is_dual_unitary(tol) {
            return Err(Error::NotDualUnitary(format!("{name} fails the DU check")));
        }
    }
    if c.rows() != 4 || c.cols() != 4 {
        return Err(Error::Dimension("C must be 4×4".into()));
    }
    if !c.is_unitary(tol.tau_u) {
        return Err(Error::NotUnitary("C is not unitary".into()));
    }
    // rightmost factor acts first
    let ops = [
        on_qubits(z.entries(), 1),
        on_qubits(y.entries(), 2),
        on_qubits(c, 1),
        on_qubits(v.entries(), 0),
        on_qubits(x.entries(), 1),
    ];
    let mut u = CMat::identity(16);
    for op in &ops {
        u = u.matmul(op);
    }
    Gate::homogeneous(4, u)
}

/// How ring elements `0..N` are written as basis labels `1..=N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelConvention {
    /// label = element + 1
    #[default]
    PlusOne,
    /// label = element, with 0 written as N
    ZeroAsN,
}

impl LabelConvention {
    pub fn index_of(self, e: usize, n: usize) -> usize {
        match self {
            LabelConvention::PlusOne => e % n,
            LabelConvention::ZeroAsN => (e + n - 1) % n,
        }
    }

    pub fn element_of(self, idx: usize, n: usize) -> usize {
        match self {
            LabelConvention::PlusOne => idx,
            LabelConvention::ZeroAsN => (idx + 1) % n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingLinearParams {
    pub n: u64,
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
    pub delta: u64,
}

impl RingLinearParams {
    pub fn new(n: u64, alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        let r = |x: i64| x.rem_euclid(n as i64) as u64;
        RingLinearParams { n, alpha: r(alpha), beta: r(beta), gamma: r(gamma), delta: r(delta) }
    }

    pub fn det(&self) -> u64 {
        let n = self.n as u128;
        let ad = self.alpha as u128 * self.delta as u128 % n;
        let bc = self.beta as u128 * self.gamma as u128 % n;
        ((ad + n - bc) % n) as u64
    }

    pub fn flags(&self) -> GateFlags {
        let u = |x: u64| is_unit(x, self.n);
        let unitary = u(self.det());
        let dual_unitary = unitary && u(self.beta) && u(self.gamma);
        let perfect = dual_unitary && u(self.alpha) && u(self.delta);
        GateFlags { unitary, dual_unitary, perfect }
    }
}

pub fn is_unit(x: u64, n: u64) -> bool {
    n == 1 || (x % n).gcd(&n) == 1
}

/// `(a, b) ↦ (αa + βb, γa + δb)` over `Z_N`.
pub fn ring_linear(p: &RingLinearParams, labels: LabelConvention) -> Result<PermMap> {
    if p.n < 1 || p.n > 255 {
        return Err(Error::Precondition(format!("N = {} out of range", p.n)));
    }
    if !is_unit(p.det(), p.n) {
        return Err(Error::NotPermutation(format!(
            "determinant {} is not invertible in Z_{}",
            p.det(),
            p.n
        )));
    }
    let n = p.n as usize;
    let (al, be, ga, de) = (p.alpha as usize, p.beta as usize, p.gamma as usize, p.delta as usize);
    PermMap::from_fn(n, |ia, ib| {
        let a = labels.element_of(ia, n);
        let b = labels.element_of(ib, n);
        let c = (al * a + be * b) % n;
        let d = (ga * a + de * b) % n;
        (labels.index_of(c, n), labels.index_of(d, n))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStateParams {
    pub n: u64,
    pub alpha: [u64; 2],
    pub beta: [u64; 2],
    pub gamma: [u64; 2],
}

impl GraphStateParams {
    pub fn new(n: u64, alpha: [i64; 2], beta: [i64; 2], gamma: [i64; 2]) -> Self {
        let r = |x: i64| x.rem_euclid(n as i64) as u64;
        GraphStateParams {
            n,
            alpha: [r(alpha[0]), r(alpha[1])],
            beta: [r(beta[0]), r(beta[1])],
            gamma: [r(gamma[0]), r(gamma[1])],
        }
    }

    /// The kicked-Ising choice (cluster state): α = β = 1, γ = 0.
    pub fn c_state(n: u64) -> Self {
        Self::new(n, [1, 1], [1, 1], [0, 0])
    }

    /// γ = 0, α₁ = α₂ = β₁ = 1, β₂ = −1.
    pub fn p_state(n: u64) -> Self {
        Self::new(n, [1, 1], [1, -1], [0, 0])
    }

    fn diff_of_products(&self, x: [u64; 2], y: [u64; 2]) -> u64 {
        let n = self.n as u128;
        let a = x[0] as u128 * x[1] as u128 % n;
        let b = y[0] as u128 * y[1] as u128 % n;
        ((a + n - b) % n) as u64
    }

    /// Flags predicted from the unit conditions on `β₁β₂−γ₁γ₂`, `α₁α₂−γ₁γ₂`, `α₁α₂−β₁β₂`.
    pub fn predicted_flags(&self) -> GateFlags {
        let n = self.n;
        let unitary = is_unit(self.diff_of_products(self.beta, self.gamma), n);
        let dual_unitary = unitary && is_unit(self.diff_of_products(self.alpha, self.gamma), n);
        let perfect = dual_unitary && is_unit(self.diff_of_products(self.alpha, self.beta), n);
        GateFlags { unitary, dual_unitary, perfect }
    }

    /// `F(i,j,k,l) = α₁ij + α₂kl + β₁ik + β₂jl + γ₁il + γ₂jk mod N`.
    pub fn f(&self, i: u64, j: u64, k: u64, l: u64) -> u64 {
        let n = self.n;
        let t = self.alpha[0] * i % n * j
            + self.alpha[1] * k % n * l
            + self.beta[0] * i % n * k
            + self.beta[1] * j % n * l
            + self.gamma[0] * i % n * l
            + self.gamma[1] * j % n * k;
        t % n
    }
}

/// `U^{ij}_{kl} = ω^{F(i,j,k,l)} / N` with outgoing `(i, j)` and incoming `(k, l)`.
pub fn graph_state_gate(p: &GraphStateParams) -> Gate {
    let n = p.n as usize;
    let s = 1.0 / n as f64;
    Gate::from_components(n, n, |k, l, i, j| {
        root_of_unity(p.f(i as u64, j as u64, k as u64, l as u64) as i64, p.n) * s
    })
}

/// `F_{jk} = ω^{−jk} / √N`.
pub fn fourier_matrix(n: usize) -> CMat {
    let s = 1.0 / (n as f64).sqrt();
    CMat::from_fn(n, n, |j, k| root_of_unity(-((j * k) as i64), n as u64) * s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierReduction {
    pub map: PermMap,
    /// max |(F⊗F)U − e^{iθ}·P_map| over entries.
    pub residual: f64,
}

/// For `α₁ = α₂ = 0`, `(F⊗F)·U` is the permutation of `(k, l) ↦ (β₁k + γ₁l, γ₂k + β₂l)`.
pub fn fourier_reduce(p: &GraphStateParams, tol: &Tolerance) -> Result<FourierReduction> {
    if p.alpha != [0, 0] {
        return Err(Error::Precondition("fourier_reduce needs α₁ = α₂ = 0".into()));
    }
    let lin = RingLinearParams {
        n: p.n,
        alpha: p.beta[0],
        beta: p.gamma[0],
        gamma: p.gamma[1],
        delta: p.beta[1],
    };
    let map = ring_linear(&lin, LabelConvention::PlusOne)?;
    let n = p.n as usize;
    let f = fourier_matrix(n);
    let g = graph_state_gate(p);
    let ff = f.kron(&f);
    let reduced = Gate::homogeneous(n, ff.matmul(g.entries()))?;
    let residual = reduced.phase_distance(&map.to_gate());
    if residual > tol.tau_u {
        return Err(Error::Verification(format!(
            "(F⊗F)U differs from the permutation gate by {residual:e}"
        )));
    }
    Ok(FourierReduction { map, residual })
}

/// `U|a, b⟩ = e^{iφ_{cd}} |c, d⟩` with `(c, d) = m(a, b)`; phases indexed row-major by `(c, d)`.
pub fn phase_dress_perm(m: &PermMap, phases: &[f64]) -> Result<Gate> {
    let n = m.n();
    if phases.len() != n * n {
        return Err(Error::Dimension(format!("need {} phases", n * n)));
    }
    Ok(Gate::from_components(n, n, |a, b, c, d| {
        if m.apply(a, b) == (c, d) {
            C64::from_polar(1.0, phases[c * n + d])
        } else {
            ZERO
        }
    }))
}

/// Dense complex matrix in JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn to_cmat(&self) -> Result<CMat> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * cols);
        for (i, r) in self.re.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension("ragged matrix".into()));
            }
            for (j, &x) in r.iter().enumerate() {
                let y = if self.im.is_empty() {
                    0.0
                } else {
                    *self.im.get(i).and_then(|row| row.get(j)).ok_or_else(|| {
                        Error::Dimension("imaginary part has the wrong shape".into())
                    })?
                };
                data.push(C64::new(x, y));
            }
        }
        CMat::from_rows(rows, cols, data)
    }

    pub fn from_cmat(m: &CMat) -> Self {
        MatrixJson {
            re: (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.re).collect()).collect(),
            im: (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.im).collect()).collect(),
        }
    }
}

/// A construction recipe, as accepted by the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    N2Family {
        j: f64,
    },
    DressedSwap {
        n: usize,
        phases: Vec<f64>,
    },
    DirectSum {
        first: Box<Descriptor>,
        second: Box<Descriptor>,
    },
    ControlledUnitary {
        unitaries: Vec<MatrixJson>,
    },
    /// Controlled one-site permutations, one-based images.
    ControlledPermutation {
        perms: Vec<Vec<usize>>,
    },
    DiagonalCompose {
        u: Box<Descriptor>,
        v: Box<Descriptor>,
    },
    ComposeN4 {
        x: Box<Descriptor>,
        y: Box<Descriptor>,
        v: Box<Descriptor>,
        z: Box<Descriptor>,
        c: MatrixJson,
    },
    RingLinear {
        n: u64,
        abcd: [i64; 4],
        #[serde(default)]
        labels: LabelConvention,
    },
    GraphState {
        n: u64,
        alpha: [i64; 2],
        beta: [i64; 2],
        gamma: [i64; 2],
    },
    FourierReduce {
        n: u64,
        beta: [i64; 2],
        gamma: [i64; 2],
    },
    PhaseDressPerm {
        map: String,
        phases: Vec<f64>,
    },
    Map {
        cd: String,
    },
    Gate(GateJson),
    Builtin {
        name: String,
    },
}

/// What a [`Descriptor`] produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Built {
    pub label: String,
    pub gate: Gate,
    pub map: Option<PermMap>,
    /// Flags the construction guarantees or predicts, if any.
    pub claimed: Option<GateFlags>,
}

impl Built {
    fn gate(label: impl Into<String>, gate: Gate) -> Self {
        Built { label: label.into(), gate, map: None, claimed: None }
    }

    fn map(label: impl Into<String>, map: PermMap) -> Self {
        Built { label: label.into(), gate: map.to_gate(), map: Some(map), claimed: None }
    }

    fn claims(mut self, f: GateFlags) -> Self {
        self.claimed = Some(f);
        self
    }
}

const DU: GateFlags = GateFlags { unitary: true, dual_unitary: true, perfect: false };

impl Descriptor {
    pub fn build(&self, tol: &Tolerance) -> Result<Built> {
        Ok(match self {
            Descriptor::N2Family { j } => Built::gate(format!("n2_family(J={j})"), n2_family(*j)).claims(DU),
            Descriptor::DressedSwap { n, phases } => {
                Built::gate(format!("dressed_swap(N={n})"), dressed_swap_phases(*n, phases)?).claims(DU)
            }
            Descriptor::DirectSum { first, second } => {
                let (a, b) = (first.build(tol)?, second.build(tol)?);
                let g = direct_sum(&a.gate, &b.gate)?;
                Built::gate(format!("direct_sum({}, {})", a.label, b.label), g)
            }
            Descriptor::ControlledUnitary { unitaries } => {
                let us = unitaries.iter().map(MatrixJson::to_cmat).collect::<Result<Vec<_>>>()?;
                for u in &us {
                    if !u.is_unitary(tol.tau_u) {
                        return Err(Error::NotUnitary("controlled block is not unitary".into()));
                    }
                }
                Built::gate(format!("controlled_unitary(N={})", us.len()), controlled_unitary(&us)?).claims(DU)
            }
            Descriptor::ControlledPermutation { perms } => {
                let n = perms.len();
                let mut us = vec![];
                for p in perms {
                    let z: Vec<usize> = p.iter().map(|&x| x.wrapping_sub(1)).collect();
                    invert_perm(&z, n)?;
                    us.push(CMat::permutation(&z));
                }
                let g = controlled_unitary(&us)?;
                let m = PermMap::from_gate(&g, tol.tau_u)?;
                Built { label: format!("controlled_permutation(N={n})"), gate: g, map: Some(m), claimed: Some(DU) }
            }
            Descriptor::DiagonalCompose { u, v } => {
                let (a, b) = (u.build(tol)?, v.build(tol)?);
                let g = diagonal_compose(&a.gate, &b.gate)?;
                Built::gate(format!("diagonal_compose({}, {})", a.label, b.label), g)
            }
            Descriptor::ComposeN4 { x, y, v, z, c } => {
                let parts = [x, y, v, z].map(|d| d.build(tol));
                let [x, y, v, z] = parts;
                let (x, y, v, z) = (x?, y?, v?, z?);
                let g = compose_n4(&x.gate, &y.gate, &v.gate, &z.gate, &c.to_cmat()?, tol)?;
                Built::gate("compose_n4", g).claims(DU)
            }
            Descriptor::RingLinear { n, abcd, labels } => {
                let p = RingLinearParams::new(*n, abcd[0], abcd[1], abcd[2], abcd[3]);
                let m = ring_linear(&p, *labels)?;
                Built::map(
                    format!("ring_linear(N={n}, {}, {}, {}, {})", p.alpha, p.beta, p.gamma, p.delta),
                    m,
                )
                .claims(p.flags())
            }
            Descriptor::GraphState { n, alpha, beta, gamma } => {
                let p = GraphStateParams::new(*n, *alpha, *beta, *gamma);
                Built::gate(format!("graph_state(N={n})"), graph_state_gate(&p)).claims(p.predicted_flags())
            }
            Descriptor::FourierReduce { n, beta, gamma } => {
                let p = GraphStateParams::new(*n, [0, 0], *beta, *gamma);
                let r = fourier_reduce(&p, tol)?;
                let flags = r.map.to_gate().flags(tol);
                Built::map(format!("fourier_reduce(N={n})"), r.map).claims(flags)
            }
            Descriptor::PhaseDressPerm { map, phases } => {
                let m = PermMap::parse(map)?;
                let g = phase_dress_perm(&m, phases)?;
                let claimed = m.is_dual_unitary().then_some(DU);
                Built { label: "phase_dress_perm".into(), gate: g, map: None, claimed }
            }
            Descriptor::Map { cd } => Built::map("map", PermMap::parse(cd)?),
            Descriptor::Gate(j) => Built::gate("gate", Gate::from_json(j)?),
            Descriptor::Builtin { name } => {
                let b = builtins::builtin(name)?;
                Built { label: format!("builtin:{}", b.name), gate: b.gate(), map: b.map.clone(), claimed: Some(b.claimed) }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::ONE;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn n2_family_at_zero() {
        let g = n2_family(0.0);
        assert_eq!(g.get(0, 0, 0, 0), ONE);
        assert_eq!(g.get(0, 1, 1, 0), C64::new(0.0, -1.0));
        assert!(g.is_dual_unitary(&t()));
        assert!(!g.is_perfect(&t()));
    }

    #[test]
    fn dressed_swap_identity_is_swap() {
        let g = dressed_swap(&CMat::identity(9), &t()).unwrap();
        assert_eq!(g, Gate::swap(3, 3));
    }

    #[test]
    fn dressed_swap_rejects_bad_d() {
        let mut d = CMat::identity(4);
        d[(0, 1)] = ONE;
        assert!(dressed_swap(&d, &t()).is_err());
        let d = CMat::identity(4).scale(C64::new(0.5, 0.0));
        assert!(dressed_swap(&d, &t()).is_err());
    }

    #[test]
    fn controlled_identity_is_swap() {
        let us = vec![CMat::identity(3); 3];
        assert_eq!(controlled_unitary(&us).unwrap(), Gate::swap(3, 3));
    }

    #[test]
    fn controlled_unitary_is_iterated_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let us: Vec<CMat> = (0..3).map(|_| CMat::haar_unitary(3, &mut rng)).collect();
        let a = controlled_unitary(&us).unwrap();
        let b = controlled_unitary_by_direct_sums(&us).unwrap();
        assert_eq!(a, b);
        assert!(a.is_dual_unitary(&t()));
    }

    #[test]
    fn direct_sum_mixed_type() {
        let u1 = n2_family(0.4);
        let u2 = one_dimensional_block(&CMat::haar_unitary(2, &mut ChaCha8Rng::seed_from_u64(4))).unwrap();
        let g = direct_sum(&u1, &u2).unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert!(g.is_dual_unitary(&t()));
        assert!(direct_sum(&n2_family(0.1), &Gate::swap(2, 3)).is_err());
    }

    #[test]
    fn diagonal_compose_of_swaps() {
        let z = diagonal_compose(&Gate::swap(2, 2), &Gate::swap(2, 2)).unwrap();
        assert_eq!((z.n(), z.m()), (4, 2));
        assert!(z.is_dual_unitary(&t()));
        assert!(diagonal_compose(&Gate::swap(2, 2), &Gate::swap(2, 3)).is_err());
    }

    #[test]
    fn compose_n4_of_swaps_is_permutation() {
        let s = Gate::swap(2, 2);
        let g = compose_n4(&s, &s, &s, &s, &CMat::identity(4), &t()).unwrap();
        assert!(g.entries().as_monomial(1e-12).is_some());
        assert!(g.is_dual_unitary(&t()));
    }

    #[test]
    fn compose_n4_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let mut du = || {
                let j = rng.random_range(0.0..6.3);
                let a = CMat::haar_unitary(2, &mut rng);
                let b = CMat::haar_unitary(2, &mut rng);
                let c = CMat::haar_unitary(2, &mut rng);
                let d = CMat::haar_unitary(2, &mut rng);
                n2_family(j).dress(&a, &b, &c, &d).unwrap()
            };
            let (x, y, v, z) = (du(), du(), du(), du());
            let c = CMat::haar_unitary(4, &mut rng);
            let g = compose_n4(&x, &y, &v, &z, &c, &t()).unwrap();
            assert!(g.is_dual_unitary(&t()));
        }
    }

    #[test]
    fn compose_n4_rejects_non_unitary_c() {
        let s = Gate::swap(2, 2);
        let c = CMat::identity(4).scale(C64::new(2.0, 0.0));
        assert!(matches!(compose_n4(&s, &s, &s, &s, &c, &t()), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn z4_example_with_vacuum_labels() {
        let p = RingLinearParams::new(4, 2, 1, 1, 2);
        let m = ring_linear(&p, LabelConvention::ZeroAsN).unwrap();
        assert_eq!(m.render(), "33 41 13 21 / 14 22 34 42 / 31 43 11 23 / 12 24 32 44");
        let f = p.flags();
        assert!(f.dual_unitary && !f.perfect);
        assert!(m.is_dual_unitary() && !m.is_perfect());
    }

    #[test]
    fn z3_linear_is_perfect() {
        let p = RingLinearParams::new(3, 1, 1, 1, -1);
        assert!(p.flags().perfect);
        let m = ring_linear(&p, LabelConvention::PlusOne).unwrap();
        assert!(m.is_perfect());
        assert!(m.to_gate().is_perfect(&t()));
    }

    #[test]
    fn singular_ring_map_is_rejected() {
        let p = RingLinearParams::new(4, 2, 0, 0, 2);
        assert!(matches!(ring_linear(&p, LabelConvention::PlusOne), Err(Error::NotPermutation(_))));
    }

    #[test]
    fn kicked_ising_is_du_not_perfect() {
        for n in 2..=5 {
            let p = GraphStateParams::c_state(n);
            let g = graph_state_gate(&p);
            assert!(g.is_dual_unitary(&t()), "N={n}");
            assert!(!g.is_perfect(&t()), "N={n}");
            assert_eq!(g.flags(&t()), p.predicted_flags());
        }
    }

    #[test]
    fn p_state_perfect_for_odd_n() {
        for n in [3, 5, 7] {
            let p = GraphStateParams::p_state(n);
            assert!(graph_state_gate(&p).is_perfect(&t()));
        }
    }

    #[test]
    fn fourier_reduction_of_lin3() {
        let p = GraphStateParams::new(3, [0, 0], [1, -1], [1, 1]);
        let r = fourier_reduce(&p, &t()).unwrap();
        let lin3 = ring_linear(&RingLinearParams::new(3, 1, 1, 1, -1), LabelConvention::PlusOne).unwrap();
        assert_eq!(r.map, lin3);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn fourier_reduction_identity_matrix() {
        let p = GraphStateParams::new(5, [0, 0], [1, 1], [0, 0]);
        let r = fourier_reduce(&p, &t()).unwrap();
        assert_eq!(r.map, PermMap::identity(5));
        assert!(!r.map.is_dual_unitary());
    }

    #[test]
    fn phase_dress_of_swap_is_dressed_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ph: Vec<f64> = (0..9).map(|_| rng.random_range(0.0..6.0)).collect();
        let a = phase_dress_perm(&PermMap::swap(3), &ph).unwrap();
        let b = dressed_swap_phases(3, &ph).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn descriptor_json() {
        let d: Descriptor = serde_json::from_str(r#"{"kind":"ring_linear","n":5,"abcd":[1,1,1,4]}"#).unwrap();
        let b = d.build(&t()).unwrap();
        assert!(b.claimed.unwrap().perfect);
        assert_eq!(b.map.unwrap().render().split(" / ").next().unwrap(), "11 25 34 43 52");
    }
}
