//! Classical brickwork circuits of permutation gates.
//!
//! A state is one byte per site, values `0..N`. One Floquet step applies the
//! gate to the pairs `(0,1), (2,3), …` and then to `(1,2), …, (L−1,0)`, the
//! same ordering as the quantum chain. Orbit lengths count Floquet steps.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{ring_linear, LabelConvention, RingLinearParams};
use crate::error::{Error, Result};
use crate::linear_ca::{self, arith::is_prime, order::big_str, OrderOptions};
use crate::perm_map::PermMap;

pub const DEFAULT_STEP_BUDGET: u64 = 100_000_000;
/// Largest state space handled by exhaustive cycle decomposition.
pub const DEFAULT_STATE_CAP: u64 = 1 << 24;
/// Largest state space for the exhaustive bijectivity check.
pub const BIJECTIVITY_CAP: u64 = 1 << 16;

/// Lookup table form of a permutation gate.
#[derive(Clone, Debug)]
pub struct Circuit {
    pub n: usize,
    lut: Vec<(u8, u8)>,
}

impl Circuit {
    pub fn new(m: &PermMap) -> Self {
        let n = m.n();
        let lut = (0..n * n)
            .map(|k| {
                let (c, d) = m.apply(k / n, k % n);
                (c as u8, d as u8)
            })
            .collect();
        Circuit { n, lut }
    }

    /// One layer: `parity` 0 acts on `(2j, 2j+1)`, 1 on `(2j+1, 2j+2)`.
    #[inline]
    pub fn layer(&self, s: &mut [u8], parity: usize) {
        let l = s.len();
        let n = self.n;
        let mut i = parity % 2;
        while i < l {
            let j = if i + 1 == l { 0 } else { i + 1 };
            let (c, d) = self.lut[s[i] as usize * n + s[j] as usize];
            s[i] = c;
            s[j] = d;
            i += 2;
        }
    }

    #[inline]
    pub fn floquet(&self, s: &mut [u8]) {
        self.layer(s, 0);
        self.layer(s, 1);
    }

    pub fn encode(&self, s: &[u8]) -> u64 {
        s.iter().fold(0u64, |acc, &x| acc * self.n as u64 + x as u64)
    }

    pub fn decode(&self, mut k: u64, s: &mut [u8]) {
        for x in s.iter_mut().rev() {
            *x = (k % self.n as u64) as u8;
            k /= self.n as u64;
        }
    }
}

fn check_state(n: usize, s: &[u8]) -> Result<()> {
    if s.is_empty() || s.len() % 2 == 1 {
        return Err(Error::Precondition(format!("L = {} must be even and positive", s.len())));
    }
    if let Some(&x) = s.iter().find(|&&x| x as usize >= n) {
        return Err(Error::Precondition(format!("site value {x} out of range for N = {n}")));
    }
    Ok(())
}

/// One layer of the circuit on `state`.
pub fn step(state: &mut [u8], m: &PermMap, parity: usize) -> Result<()> {
    check_state(m.n(), state)?;
    Circuit::new(m).layer(state, parity);
    Ok(())
}

pub fn floquet(state: &mut [u8], m: &PermMap) -> Result<()> {
    check_state(m.n(), state)?;
    Circuit::new(m).floquet(state);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orbit {
    Length(u64),
    BudgetExceeded(u64),
}

impl Orbit {
    /// The length, or the budget as a lower bound.
    pub fn value(self) -> u64 {
        match self {
            Orbit::Length(k) | Orbit::BudgetExceeded(k) => k,
        }
    }
}

fn follow(c: &Circuit, start: &[u8], budget: u64) -> Orbit {
    let mut s = start.to_vec();
    for k in 1..=budget {
        c.floquet(&mut s);
        if s == start {
            return Orbit::Length(k);
        }
    }
    Orbit::BudgetExceeded(budget)
}

/// Smallest `k ≥ 1` with `Floquet^k(state) = state`.
pub fn orbit_length(state: &[u8], m: &PermMap, budget: u64) -> Result<Orbit> {
    check_state(m.n(), state)?;
    Ok(follow(&Circuit::new(m), state, budget))
}

fn state_count(n: usize, l: usize) -> Option<u64> {
    (n as u64).checked_pow(l as u32)
}

/// Cycle length of every state, indexed by [`Circuit::encode`].
pub fn cycle_table(m: &PermMap, l: usize, cap: u64) -> Result<Vec<u32>> {
    let n = m.n();
    let total = state_count(n, l).filter(|&t| t <= cap).ok_or_else(|| Error::CapExceeded {
        what: format!("state space N^L for N={n}, L={l}"),
        needed: (n as u128).saturating_pow(l as u32),
        cap: cap as u128,
    })?;
    if l == 0 || l % 2 == 1 {
        return Err(Error::Precondition(format!("L = {l} must be even and positive")));
    }
    let c = Circuit::new(m);
    let mut len = vec![0u32; total as usize];
    let mut s = vec![0u8; l];
    for k in 0..total {
        if len[k as usize] != 0 {
            continue;
        }
        // first pass measures the cycle, second pass labels it
        c.decode(k, &mut s);
        let mut steps = 0u32;
        loop {
            c.floquet(&mut s);
            steps += 1;
            let e = c.encode(&s);
            if e == k {
                break;
            }
            if len[e as usize] != 0 {
                return Err(Error::NotPermutation(format!("Floquet step merges orbits at L={l}")));
            }
        }
        loop {
            c.floquet(&mut s);
            let e = c.encode(&s);
            len[e as usize] = steps;
            if e == k {
                break;
            }
        }
    }
    Ok(len)
}

/// Exhaustive check that one Floquet step permutes the `N^L` states.
pub fn is_floquet_bijective(m: &PermMap, l: usize) -> Result<bool> {
    let n = m.n();
    let total = state_count(n, l).filter(|&t| t <= BIJECTIVITY_CAP).ok_or_else(|| Error::CapExceeded {
        what: format!("bijectivity check N^L for N={n}, L={l}"),
        needed: (n as u128).saturating_pow(l as u32),
        cap: BIJECTIVITY_CAP as u128,
    })?;
    let c = Circuit::new(m);
    let mut hit = vec![false; total as usize];
    let mut s = vec![0u8; l];
    for k in 0..total {
        c.decode(k, &mut s);
        c.floquet(&mut s);
        let e = c.encode(&s) as usize;
        if hit[e] {
            return Ok(false);
        }
        hit[e] = true;
    }
    Ok(true)
}

/// Initial state for sample `i` of repetition `rep`: ChaCha8 seeded with
/// `seed`, stream `rep·samples + i`, one uniform draw per site.
pub fn sample_state(n: usize, l: usize, seed: u64, stream: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..l).map(|_| rng.random_range(0..n) as u8).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitStats {
    pub l: usize,
    pub n: usize,
    pub samples: usize,
    pub repetitions: usize,
    pub seed: u64,
    /// Repetition-major, `repetitions × samples` entries.
    pub orbit_lengths: Vec<u64>,
    pub mean: f64,
    /// `log_N(mean)`.
    pub log_mean: f64,
    /// `log_N` of each repetition's mean.
    pub rep_log_means: Vec<f64>,
    /// Standard deviation of `rep_log_means` over their mean.
    pub rel_variance_log: f64,
    /// Samples whose orbit hit the step budget; their entry is the budget.
    pub budget_exceeded: usize,
    /// Orbit lengths read from an exhaustive cycle table instead of followed.
    pub from_cycle_table: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitOptions {
    pub samples: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub step_budget: u64,
    /// Use the cycle table when `N^L` is at most this.
    pub table_cap: u64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { samples: 200, repetitions: 10, seed: 1, step_budget: DEFAULT_STEP_BUDGET, table_cap: DEFAULT_STATE_CAP }
    }
}

fn par_map<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

pub fn average_orbit_length(m: &PermMap, l: usize, opts: &OrbitOptions) -> Result<OrbitStats> {
    let n = m.n();
    if l == 0 || l % 2 == 1 {
        return Err(Error::Precondition(format!("L = {l} must be even and positive")));
    }
    if opts.samples == 0 || opts.repetitions == 0 {
        return Err(Error::Precondition("samples and repetitions must be positive".into()));
    }
    let total = opts.samples * opts.repetitions;
    let table = match state_count(n, l) {
        Some(t) if t <= opts.table_cap => Some(cycle_table(m, l, opts.table_cap)?),
        _ => None,
    };
    let c = Circuit::new(m);
    let orbits: Vec<Orbit> = par_map(total, |i| {
        let s = sample_state(n, l, opts.seed, i as u64);
        match &table {
            Some(t) => Orbit::Length(t[c.encode(&s) as usize] as u64),
            None => follow(&c, &s, opts.step_budget),
        }
    });
    let lengths: Vec<u64> = orbits.iter().map(|o| o.value()).collect();
    let logn = (n as f64).ln();
    let mean = lengths.iter().map(|&x| x as f64).sum::<f64>() / total as f64;
    let rep_log_means: Vec<f64> = lengths
        .chunks(opts.samples)
        .map(|ch| (ch.iter().map(|&x| x as f64).sum::<f64>() / ch.len() as f64).ln() / logn)
        .collect();
    let r = rep_log_means.len() as f64;
    let mu = rep_log_means.iter().sum::<f64>() / r;
    let var = rep_log_means.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / r;
    Ok(OrbitStats {
        l,
        n,
        samples: opts.samples,
        repetitions: opts.repetitions,
        seed: opts.seed,
        budget_exceeded: orbits.iter().filter(|o| matches!(o, Orbit::BudgetExceeded(_))).count(),
        from_cycle_table: table.is_some(),
        orbit_lengths: lengths,
        mean,
        log_mean: mean.ln() / logn,
        rel_variance_log: if mu.abs() > 0.0 { var.sqrt() / mu.abs() } else { 0.0 },
        rep_log_means,
    })
}

/// Least-squares slope of `log_N(mean)` against `L`.
pub fn log_slope(stats: &[OrbitStats]) -> Option<f64> {
    if stats.len() < 2 {
        return None;
    }
    let k = stats.len() as f64;
    let mx = stats.iter().map(|s| s.l as f64).sum::<f64>() / k;
    let my = stats.iter().map(|s| s.log_mean).sum::<f64>() / k;
    let sxy: f64 = stats.iter().map(|s| (s.l as f64 - mx) * (s.log_mean - my)).sum();
    let sxx: f64 = stats.iter().map(|s| (s.l as f64 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrenceMethod {
    ExhaustiveLcm,
    MatrixOrder,
    SampledLowerBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceResult {
    pub l: usize,
    pub n: usize,
    #[serde(rename = "T", serialize_with = "big_str")]
    pub t: BigUint,
    pub method: RecurrenceMethod,
    pub lower_bound: bool,
    /// States whose return was checked directly.
    pub states_tested: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct RecurrenceOptions {
    pub state_cap: u64,
    pub samples: usize,
    pub seed: u64,
    pub step_budget: u64,
    pub order: OrderOptions,
}

impl Default for RecurrenceOptions {
    fn default() -> Self {
        RecurrenceOptions {
            state_cap: DEFAULT_STATE_CAP,
            samples: 200,
            seed: 1,
            step_budget: DEFAULT_STEP_BUDGET,
            order: OrderOptions::default(),
        }
    }
}

/// Whether `m` is `(a, b) ↦ (a+b, a−b)` over `Z_p`, `p` an odd prime, under
/// either label convention.
pub fn is_linear_block_map(m: &PermMap) -> bool {
    let n = m.n() as u64;
    if n < 3 || !is_prime(n) {
        return false;
    }
    let params = RingLinearParams::new(n, 1, 1, 1, -1);
    [LabelConvention::PlusOne, LabelConvention::ZeroAsN]
        .iter()
        .any(|&lc| ring_linear(&params, lc).is_ok_and(|r| r == *m))
}

pub fn recurrence_time(m: &PermMap, l: usize, method: RecurrenceMethod, opts: &RecurrenceOptions) -> Result<RecurrenceResult> {
    let n = m.n();
    if l == 0 || l % 2 == 1 {
        return Err(Error::Precondition(format!("L = {l} must be even and positive")));
    }
    match method {
        RecurrenceMethod::ExhaustiveLcm => {
            let table = cycle_table(m, l, opts.state_cap)?;
            let lengths: std::collections::BTreeSet<u32> = table.iter().copied().collect();
            let t = lengths.iter().fold(BigUint::from(1u32), |t, &k| t.lcm(&BigUint::from(k)));
            Ok(RecurrenceResult { l, n, t, method, lower_bound: false, states_tested: table.len() as u64 })
        }
        RecurrenceMethod::MatrixOrder => {
            if !is_linear_block_map(m) {
                return Err(Error::Precondition(
                    "matrix_order needs the map (a,b) -> (a+b, a-b) over Z_p, p an odd prime".into(),
                ));
            }
            let r = linear_ca::matrix_order(&linear_ca::build_v(l, n as u64)?, &opts.order)?;
            Ok(RecurrenceResult { l, n, t: r.t, method, lower_bound: false, states_tested: 0 })
        }
        RecurrenceMethod::SampledLowerBound => {
            let c = Circuit::new(m);
            let mut t = BigUint::from(1u32);
            let mut exceeded = false;
            let lens = par_map(opts.samples, |i| follow(&c, &sample_state(n, l, opts.seed, i as u64), opts.step_budget));
            for o in lens {
                match o {
                    Orbit::Length(k) => t = t.lcm(&BigUint::from(k)),
                    Orbit::BudgetExceeded(_) => exceeded = true,
                }
            }
            if exceeded && t == BigUint::from(1u32) {
                return Err(Error::CapExceeded {
                    what: format!("every sampled orbit at L={l}"),
                    needed: opts.step_budget as u128 + 1,
                    cap: opts.step_budget as u128,
                });
            }
            Ok(RecurrenceResult { l, n, t, method, lower_bound: true, states_tested: opts.samples as u64 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn swap_translates_by_two() {
        let m = PermMap::swap(3);
        let s: Vec<u8> = (0..8).map(|i| (i * 7 % 3) as u8).collect();
        let mut t = s.clone();
        floquet(&mut t, &m).unwrap();
        // even sites move right, odd sites left
        for i in 0..8 {
            let to = if i % 2 == 0 { (i + 2) % 8 } else { (i + 6) % 8 };
            assert_eq!(t[to], s[i]);
        }
        assert!(orbit_length(&s, &m, 100).unwrap().value() <= 4);
    }

    #[test]
    fn z3_exhaustive_matches_matrix_order() {
        let m = builtins::map("Z3").unwrap();
        assert!(is_linear_block_map(&m));
        for l in (2..=10).step_by(2) {
            let e = recurrence_time(&m, l, RecurrenceMethod::ExhaustiveLcm, &Default::default()).unwrap();
            let o = recurrence_time(&m, l, RecurrenceMethod::MatrixOrder, &Default::default()).unwrap();
            assert_eq!(e.t, o.t, "L={l}");
        }
    }

    #[test]
    fn bijective_and_budget() {
        let m = builtins::map("C1").unwrap();
        assert!(is_floquet_bijective(&m, 6).unwrap());
        let s = sample_state(3, 12, 4, 0);
        assert_eq!(orbit_length(&s, &m, 1).unwrap(), Orbit::BudgetExceeded(1));
        assert!(recurrence_time(&m, 40, RecurrenceMethod::ExhaustiveLcm, &Default::default()).is_err());
        assert!(recurrence_time(&m, 4, RecurrenceMethod::MatrixOrder, &Default::default()).is_err());
    }

    #[test]
    fn table_and_following_agree() {
        let m = builtins::map("C2").unwrap();
        let opts = OrbitOptions { samples: 20, repetitions: 2, ..Default::default() };
        let a = average_orbit_length(&m, 8, &opts).unwrap();
        let b = average_orbit_length(&m, 8, &OrbitOptions { table_cap: 0, ..opts }).unwrap();
        assert!(a.from_cycle_table && !b.from_cycle_table);
        assert_eq!(a.orbit_lengths, b.orbit_lengths);
    }
}
