//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion.
//!
//! Some criteria are red for reasons analysed outside the code; `KNOWN_RED`
//! lists them. The target fails if the set of failing criteria differs from
//! that list in either direction, so a regression and an unexpected
//! improvement are both reported.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use duc_core::builtins::{self, GLIDER_MODELS};
use duc_core::ca::{self, OrbitOptions, RecurrenceMethod};
use duc_core::constructions::{
    dressed_swap_phases, fourier_reduce, graph_state_gate, n2_family, ring_linear, GraphStateParams, LabelConvention,
    RingLinearParams,
};
use duc_core::ergodicity::spectrum::spectra_deviation;
use duc_core::ergodicity::{
    channel_m, glider_count, max_correlation, on_light_cone, spectrum, transfer_matrix, trivial_spectrum_check,
    Direction, Sign, DEFAULT_CAP,
};
use duc_core::linear_ca::{build_v, checks, matrix_order, OrderOptions};
use duc_core::{CMat, Gate, PermMap, Tolerance, C64};

const KNOWN_RED: [u32; 3] = [1, 5, 7];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn duc(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_duc")).args(args).output().expect("run duc");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn duc_json(args: &[&str]) -> Value {
    let (code, out) = duc(args);
    assert_eq!(code, 0, "duc {args:?}");
    serde_json::from_slice(&out).expect("json report")
}

fn c1_enumeration() -> Verdict {
    let r2 = duc_json(&["enumerate", "--n", "2"]);
    let start = Instant::now();
    let r3 = duc_json(&["enumerate", "--n", "3"]);
    let secs = start.elapsed().as_secs_f64();
    let res = &r3["result"];
    let n2_ok = r2["result"]["class_count"] == 5 && r2["result"]["non_interacting_classes"] == 3;
    let n3 = res["class_count"].as_u64().unwrap();
    let diag = res["reshuffle_inclusive_count"].as_u64().unwrap();
    let diag_reported = r3["caveats"].as_array().unwrap().iter().any(|c| c["message"].as_str().unwrap().contains(&diag.to_string()));
    verdict(
        n2_ok && n3 == 227 && secs < 60.0,
        format!(
            "N=2: {} classes ({} non-interacting); N=3: {n3} classes (want 227) from {} maps, reshuffle-inclusive {diag} \
             (in caveats: {diag_reported}); N=3 took {secs:.2} s",
            r2["result"]["class_count"], r2["result"]["non_interacting_classes"], res["total_maps"]
        ),
    )
}

const TABLE_II: [[i64; 4]; 6] =
    [[0, 0, 0, 0], [0, 0, 0, 0], [4, 40, 364, 3280], [8, 80, 728, 6560], [0, 2, 11, 54], [0, 0, 1, 3]];

fn c2_table_ii() -> Verdict {
    let tol = Tolerance::default();
    let start = Instant::now();
    let mut bad = vec![];
    for (name, row) in GLIDER_MODELS.iter().zip(TABLE_II) {
        let g = builtins::builtin(name).unwrap().gate();
        for (k, &want) in row.iter().enumerate() {
            let r = glider_count(&g, k + 1, &tol, DEFAULT_CAP).unwrap();
            if r.count != want || r.exact_count != Some(want) {
                bad.push(format!("{name} α={}: {} (exact {:?}) vs {want}", k + 1, r.count, r.exact_count));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(bad.is_empty() && secs < 1800.0, format!("24 counts, {} mismatches {bad:?}; {secs:.1} s", bad.len()))
}

const TABLE_III: [u64; 24] =
    [4, 4, 12, 12, 20, 12, 52, 60, 36, 40, 244, 36, 364, 364, 60, 240, 820, 36, 1036, 4920, 156, 244, 354292, 180];

fn c3_table_iii() -> Verdict {
    let start = Instant::now();
    let mut bad = vec![];
    for (i, l) in (2..=48).step_by(2).enumerate() {
        let r = matrix_order(&build_v(l, 3).unwrap(), &OrderOptions::default()).unwrap();
        if r.t != BigUint::from(TABLE_III[i]) {
            bad.push(format!("L={l}: {}", r.t));
        }
    }
    let z3 = builtins::map("Z3").unwrap();
    let mut cross = 0;
    for l in (2..=14).step_by(2) {
        let e = ca::recurrence_time(&z3, l, RecurrenceMethod::ExhaustiveLcm, &Default::default()).unwrap();
        let o = ca::recurrence_time(&z3, l, RecurrenceMethod::MatrixOrder, &Default::default()).unwrap();
        if e.t != o.t {
            bad.push(format!("L={l}: exhaustive {} vs matrix {}", e.t, o.t));
        }
        cross += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        bad.is_empty() && secs < 300.0,
        format!("24 values, {cross} exhaustive cross-checks, mismatches {bad:?}; {secs:.1} s"),
    )
}

fn c4_corollary() -> Verdict {
    let o = OrderOptions::default();
    let r = checks::verify_corollary_2pm(3, 3, &o).unwrap();
    let shapes: Vec<String> = r.rows.iter().map(|x| format!("T({})={}, μ={:?}", x.l, x.t, x.mu)).collect();
    let mu_in_range = r.rows.iter().all(|x| x.mu_in_range);
    let mu_eq_m = r.rows.iter().all(|x| x.mu_equals_m);
    let l54 = matrix_order(&build_v(54, 3).unwrap(), &o).unwrap();
    let l54_ok = l54.t == BigUint::from(108u32)
        && l54.direct == Some(BigUint::from(108u32))
        && l54.divisor_certificate.as_ref().is_some_and(|c| c.verified);
    let sweep = checks::lower_bound_sweep(&[3, 5, 7], 40, &o).unwrap();
    let lb_bad: Vec<_> = sweep.iter().filter(|x| !x.ok).map(|x| (x.p, x.l)).collect();
    verdict(
        r.a == 4 && mu_in_range && mu_eq_m && l54_ok && lb_bad.is_empty(),
        format!(
            "{}; μ=m everywhere: {mu_eq_m}; L=54 by descent and direct iteration: {l54_ok}; T ≥ L/4 over {} (p, L): failures {lb_bad:?}",
            shapes.join(", "),
            sweep.len()
        ),
    )
}

fn c5_divisibility() -> Verdict {
    let o = OrderOptions::default();
    let mut fails = vec![];
    let mut checked = 0;
    for l in (2..=48).step_by(2) {
        if (l / 2) % 3 == 0 {
            continue;
        }
        let r = checks::verify_divisibility(3, l, &o).unwrap();
        checked += 1;
        if !r.divides {
            fails.push(format!("L={l} (ℓ={}, n={}, s={}, T={})", r.ell, r.n, r.s, r.t));
        }
    }
    let rep: Vec<(usize, bool)> = [8, 26]
        .iter()
        .map(|&l| (l, checks::verify_divisibility(3, l, &o).unwrap().repunit.is_some_and(|q| q.within)))
        .collect();
    let rep_ok = rep.iter().all(|x| x.1);
    verdict(
        fails.is_empty() && rep_ok,
        format!(
            "T | p(p^2s − 1) on {checked} coprime volumes, fails at {fails:?} (s = n/2 for even n); repunit ℓ=4, 13 within the quadratic bound: {rep:?}"
        ),
    )
}

/// Random DU gates at N = 2, 3 from the four constructions.
fn random_du_gates(count: usize, seed: u64) -> Vec<(String, Gate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    let mut k = 0;
    while out.len() < count {
        let n = 2 + (k % 2) as u64;
        match k % 4 {
            0 => {
                let j: f64 = rng.random_range(-2.0..2.0);
                out.push((format!("n2_family(J={j:.3})"), n2_family(j)));
            }
            1 => {
                let ph: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
                out.push((format!("dressed_swap(N={n})"), dressed_swap_phases(n as usize, &ph).unwrap()));
            }
            2 => loop {
                let mut r = || rng.random_range(0..n as i64);
                let p = GraphStateParams::new(n, [r(), r()], [r(), r()], [r(), r()]);
                if p.predicted_flags().dual_unitary {
                    out.push((format!("graph_state({p:?})"), graph_state_gate(&p)));
                    break;
                }
            },
            _ => loop {
                let mut r = || rng.random_range(0..n as i64);
                let p = RingLinearParams::new(n, r(), r(), r(), r());
                if p.flags().dual_unitary {
                    out.push((format!("ring_linear({p:?})"), ring_linear(&p, LabelConvention::PlusOne).unwrap().to_gate()));
                    break;
                }
            },
        }
        k += 1;
    }
    out
}

fn c6_light_cone() -> Verdict {
    let l = 8;
    let cap = 6561;
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    let gates = random_du_gates(20, 2024);
    for (label, g) in &gates {
        for t in [2, 4] {
            let m = max_correlation(g, l, t, cap, |x, y| !on_light_cone(x, y, t, l)).unwrap();
            if m > worst {
                worst = m;
                worst_at = format!("{label} t={t}");
            }
        }
    }
    let z3 = builtins::builtin("Z3").unwrap().gate();
    let mut z3_worst = 0.0f64;
    for t in [2, 4] {
        z3_worst = z3_worst.max(max_correlation(&z3, l, t, cap, |_, _| true).unwrap());
    }
    verdict(
        worst < 1e-10 && z3_worst < 1e-10,
        format!(
            "{} random DU gates, L=8, t ∈ {{2, 4}}: largest off-cone |C| = {worst:.1e} {worst_at}; Z3 all pairs: {z3_worst:.1e}",
            gates.len()
        ),
    )
}

fn c7_spectra() -> Verdict {
    let tol = Tolerance::default();
    let mut dev_max = 0.0f64;
    let mut mism = vec![];
    let names = builtins::names();
    for name in &names {
        let g = builtins::builtin(name).unwrap().gate();
        let t = transfer_matrix(&g, 1, Direction::Right, DEFAULT_CAP).unwrap();
        let a: Vec<C64> = spectrum(&t, &tol).unwrap().eigenvalues.iter().map(|e| C64::new(e[0], e[1])).collect();
        let b = channel_m(&g, Sign::Plus, &tol).unwrap().eigenvalues().unwrap();
        match spectra_deviation(&a, &b, 1e-6) {
            Some(d) if d < 1e-9 => dev_max = dev_max.max(d),
            other => mism.push(format!("{name}: {other:?}")),
        }
    }
    let mut trivial = vec![];
    let mut nontrivial = vec![];
    for name in ["Z3", "V1", "V2", "MOLS7"] {
        let g = builtins::builtin(name).unwrap().gate();
        for alpha in 1..=2 {
            for dir in [Direction::Right, Direction::Left] {
                let t = transfer_matrix(&g, alpha, dir, DEFAULT_CAP).unwrap();
                let c = trivial_spectrum_check(&t, 4, t.dim).unwrap();
                let tag = format!("{name} α={alpha} {}", dir.name());
                match c.trivial {
                    Some(true) => trivial.push(tag),
                    _ => nontrivial.push(format!("{tag} Tr(Nt)^k={:?}", c.power_traces)),
                }
            }
        }
    }
    verdict(
        mism.is_empty() && nontrivial.is_empty(),
        format!(
            "t_1 vs M_+ on {} builtins: max centroid deviation {dev_max:.1e}, mismatches {mism:?}; exact {{1, 0, …}} holds for {} of 16 \
             (perfect × α × direction); not trivial: {nontrivial:?}",
            names.len(),
            trivial.len()
        ),
    )
}

fn c8_orbits() -> Verdict {
    let opts = OrbitOptions::default();
    let mut notes = vec![];
    let mut ok = true;
    let mut worst_rel = 0.0f64;
    let run = |name: &str, ls: &[usize]| -> Vec<ca::OrbitStats> {
        let m = builtins::map(name).unwrap();
        ls.iter().map(|&l| ca::average_orbit_length(&m, l, &opts).unwrap()).collect()
    };
    let evens = |a: usize, b: usize| (a..=b).step_by(2).collect::<Vec<_>>();
    for name in ["I1", "I2"] {
        let st = run(name, &evens(8, 16));
        for s in &st {
            worst_rel = worst_rel.max(s.rel_variance_log);
            let r = s.mean / s.l as f64;
            if !(1.0 / 3.0..=3.0).contains(&r) || s.budget_exceeded > 0 {
                ok = false;
                notes.push(format!("{name} L={} mean {}", s.l, s.mean));
            }
        }
        notes.push(format!("{name} mean/L ∈ [{:.2}, {:.2}]", min_of(st.iter().map(|s| s.mean / s.l as f64)), max_of(st.iter().map(|s| s.mean / s.l as f64))));
    }
    let i1 = builtins::map("I1").unwrap();
    let mut half = true;
    for l in evens(2, 14) {
        let r = ca::recurrence_time(&i1, l, RecurrenceMethod::ExhaustiveLcm, &Default::default()).unwrap();
        half &= r.t == BigUint::from(l as u64 / 2);
    }
    ok &= half;
    notes.push(format!("I1 T = L/2 for L = 2..14 exhaustive: {half}"));
    for (name, ls, lo, hi) in [("C1", evens(4, 14), 0.8, 1.1), ("C2", evens(4, 14), 0.4, 0.6), ("V2", evens(4, 8), 0.8, 1.1)] {
        let st = run(name, &ls);
        for s in &st {
            worst_rel = worst_rel.max(s.rel_variance_log);
            ok &= s.budget_exceeded == 0;
        }
        let slope = ca::log_slope(&st).unwrap();
        ok &= (lo..=hi).contains(&slope);
        notes.push(format!("{name} slope {slope:.3} over L={}..{} (want [{lo}, {hi}])", ls[0], ls[ls.len() - 1]));
    }
    ok &= worst_rel < 0.03;
    notes.push(format!("largest rel. variance of log-mean {:.2}%", 100.0 * worst_rel));
    verdict(ok, notes.join("; "))
}

fn min_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::INFINITY, f64::min)
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(f64::NEG_INFINITY, f64::max)
}

fn random_local(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::haar_unitary(n, rng)
}

fn c9_predicates() -> Verdict {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples = 100;
    let mut bad: Vec<String> = vec![];
    let mut check = |what: &str, ok: bool| {
        if !ok {
            bad.push(what.to_string());
        }
    };
    for _ in 0..samples {
        let g = n2_family(rng.random_range(-10.0..10.0));
        check("n2_family", g.is_dual_unitary(&tol) && !g.is_perfect(&tol));
        let n = rng.random_range(2..=4usize);
        let ph: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let g = dressed_swap_phases(n, &ph).unwrap();
        check("dressed_swap", g.is_dual_unitary(&tol) && !g.is_perfect(&tol));
    }
    let dressed = |g: &Gate, rng: &mut ChaCha8Rng| {
        let n = g.n();
        g.dress(&random_local(n, rng), &random_local(n, rng), &random_local(n, rng), &random_local(n, rng)).unwrap()
    };
    for n in [3u64, 5] {
        let g = graph_state_gate(&GraphStateParams::p_state(n));
        check("P-state perfect", g.is_perfect(&tol));
        for _ in 0..samples {
            check("dressed P-state perfect", dressed(&g, &mut rng).is_perfect(&tol));
        }
    }
    for n in 2u64..=5 {
        let g = graph_state_gate(&GraphStateParams::c_state(n));
        check("C-state DU not perfect", g.is_dual_unitary(&tol) && !g.is_perfect(&tol));
        for _ in 0..samples / 4 {
            let h = dressed(&g, &mut rng);
            check("dressed C-state DU not perfect", h.is_dual_unitary(&tol) && !h.is_perfect(&tol));
        }
    }
    let mols = builtins::map("MOLS7").unwrap();
    check("MOLS7 perfect (squares)", mols.check_flags().perfect);
    check("MOLS7 perfect (gate)", mols.to_gate().is_perfect(&tol));
    let perms = |rng: &mut ChaCha8Rng| {
        let mut p: Vec<usize> = (0..7).collect();
        for i in (1..7).rev() {
            p.swap(i, rng.random_range(0..=i));
        }
        p
    };
    for _ in 0..samples {
        let (a, b, c, d) = (perms(&mut rng), perms(&mut rng), perms(&mut rng), perms(&mut rng));
        let m: PermMap = mols.dress(&a, &b, &c, &d).unwrap();
        check("dressed MOLS7 perfect", m.is_perfect());
    }
    let mut fourier = 0;
    let mut worst = 0.0f64;
    for n in [3u64, 5] {
        let mut k = 0;
        while k < samples {
            let mut r = || rng.random_range(0..n as i64);
            let p = GraphStateParams::new(n, [0, 0], [r(), r()], [r(), r()]);
            if !p.predicted_flags().unitary {
                continue;
            }
            match fourier_reduce(&p, &tol) {
                Ok(f) => worst = worst.max(f.residual),
                Err(e) => bad.push(format!("fourier_reduce {p:?}: {e}")),
            }
            k += 1;
            fourier += 1;
        }
    }
    let mut graph = 0;
    for n in 2u64..=5 {
        for _ in 0..samples / 2 {
            let mut r = || rng.random_range(0..n as i64);
            let p = GraphStateParams::new(n, [r(), r()], [r(), r()], [r(), r()]);
            let f = graph_state_gate(&p).flags(&tol);
            if f != p.predicted_flags() {
                bad.push(format!("graph_state {p:?}: {f:?}"));
            }
            graph += 1;
        }
    }
    bad.dedup();
    verdict(
        bad.is_empty() && worst <= 1e-10,
        format!(
            "{samples} samples per family; {fourier} Fourier reductions, worst phase residual {worst:.1e}; \
             {graph} graph-state parameter draws against predicted flags; failures {bad:?}"
        ),
    )
}

fn c10_determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("duc-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs: [&[&str]; 6] = [
        &["enumerate", "--n", "3"],
        &["gliders", "--builtin", "E1", "--alpha", "1..3", "--extract"],
        &["orbits", "--builtin", "C1", "--l", "4..10", "--samples", "50", "--repetitions", "3", "--full"],
        &["recurrence", "--builtin", "C2", "--l", "10,12,14", "--format", "csv"],
        &["ffield", "order", "--p", "3", "--L", "2..48", "--format", "csv"],
        &["correlate", "--builtin", "C1", "--l", "6", "--t", "4"],
    ];
    let mut bad = vec![];
    for args in runs {
        let (c1, a) = duc(args);
        let (c2, b) = duc(args);
        let path = dir.join("r.json");
        let replay = if args.contains(&"csv") {
            None
        } else {
            std::fs::write(&path, &a).unwrap();
            Some(duc(&["replay", "--config", path.to_str().unwrap()]).1)
        };
        if c1 != 0 || c2 != 0 || a != b || replay.is_some_and(|r| r != a) {
            bad.push(args.join(" "));
        }
    }
    // the thread count is part of the configuration, but the result must not depend on it
    let one = duc_json(&["orbits", "--builtin", "C2", "--l", "6..12", "--threads", "1"]);
    let four = duc_json(&["orbits", "--builtin", "C2", "--l", "6..12", "--threads", "4"]);
    let threads_ok = one["result"] == four["result"];
    let _ = std::fs::remove_dir_all(&dir);
    verdict(
        bad.is_empty() && threads_ok,
        format!("{} commands run twice and replayed, differing: {bad:?}; results equal across 1 and 4 threads: {threads_ok}", runs.len()),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Verdict); 10] = [
        (1, "enumeration", c1_enumeration),
        (2, "glider table", c2_table_ii),
        (3, "recurrence table", c3_table_iii),
        (4, "2p^m orders and lower bound", c4_corollary),
        (5, "divisibility and repunit bound", c5_divisibility),
        (6, "light-cone correlators", c6_light_cone),
        (7, "spectral oracle and perfect gates", c7_spectra),
        (8, "orbit statistics", c8_orbits),
        (9, "predicate sweeps", c9_predicates),
        (10, "determinism", c10_determinism),
    ];
    let mut failing = vec![];
    for (k, title, f) in criteria {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took: Duration = start.elapsed();
        println!(
            "criterion {k:>2}: {} | {title} | {} | {:.1} s",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64()
        );
        if !v.pass {
            failing.push(k);
        }
    }
    println!("failing: {failing:?}; known red: {KNOWN_RED:?}");
    if failing != KNOWN_RED {
        eprintln!("the failing set differs from the known red set");
        std::process::exit(1);
    }
}
