use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use duc_core::builtins;
use duc_core::ca::{self, OrbitOptions, RecurrenceMethod, RecurrenceOptions};
use duc_core::constructions::{Built, Descriptor};
use duc_core::ergodicity::{
    extract_gliders, glider_count, max_correlation, on_light_cone, transfer_matrix, trivial_spectrum_check,
    Direction, SpectrumReport,
};
use duc_core::linear_ca::{arith, checks, matrix_order, OrderOptions};
use duc_core::perm_map::{class_size_histogram, enumerate_du};
use duc_core::{GateFlags, PermMap, Tolerance};

use crate::report::{Caveat, Output, Table};
use crate::{
    CliError, Command, ConstructArgs, CorrelateArgs, Corollary, EnumerateArgs, FfieldOp, GliderArgs, MethodArg,
    OrbitArgs, OrderBudget, RecurrenceArgs, Source, VerifyArgs,
};

type Res<T> = Result<T, CliError>;

pub fn run(cmd: &Command) -> Res<Output> {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Construct(a) => construct(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Gliders(a) => gliders(a),
        Command::Correlate(a) => correlate(a),
        Command::Orbits(a) => orbits(a),
        Command::Recurrence(a) => recurrence(a),
        Command::Ffield(a) => ffield(&a.op),
        Command::Replay(_) => Err(CliError::Usage("nested replay".into())),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Inline JSON, or `@path`.
fn json_arg(s: &str) -> Res<String> {
    match s.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{p}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn descriptor(s: &str) -> Res<Descriptor> {
    serde_json::from_str(&json_arg(s)?).map_err(|e| CliError::Usage(format!("bad descriptor: {e}")))
}

fn resolve(src: &Source, tol: &Tolerance) -> Res<Built> {
    let d = match (&src.builtin, &src.map, &src.descriptor) {
        (Some(name), None, None) => Descriptor::Builtin { name: name.clone() },
        (None, Some(cd), None) => Descriptor::Map { cd: cd.clone() },
        (None, None, Some(s)) => descriptor(s)?,
        _ => return Err(CliError::Usage("give exactly one of --builtin, --map, --descriptor".into())),
    };
    Ok(d.build(tol)?)
}

fn require_map(b: &Built) -> Res<&PermMap> {
    b.map.as_ref().ok_or_else(|| CliError::Usage(format!("{} is not a permutation map", b.label)))
}

/// `7`, `2..10`, `1,3,5`. Ranges are inclusive; with `even` they step by two.
pub fn parse_list(s: &str, even: bool) -> Res<Vec<usize>> {
    let bad = || CliError::Usage(format!("bad list `{s}`: use `k`, `a..b` or `a,b,c`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let v: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        (a..=b).step_by(if even { 2 } else { 1 }).collect()
    } else {
        s.split(',').map(num).collect::<Res<_>>()?
    };
    if v.is_empty() {
        return Err(bad());
    }
    if even && v.iter().any(|&l| l == 0 || l % 2 == 1) {
        return Err(CliError::Usage(format!("volumes must be even and positive, got `{s}`")));
    }
    Ok(v)
}

fn flags_json(f: &GateFlags) -> Value {
    json!({ "unitary": f.unitary, "dual_unitary": f.dual_unitary, "perfect": f.perfect })
}

fn claims_hold(claimed: Option<GateFlags>, got: &GateFlags) -> Option<bool> {
    claimed.map(|c| c == *got)
}

fn verify(a: &VerifyArgs) -> Res<Output> {
    let tol = Tolerance::default();
    let b = resolve(&a.source, &tol)?;
    let f = b.gate.flags(&tol);
    let mut caveats = vec![];
    let hold = claims_hold(b.claimed, &f);
    if hold == Some(false) {
        caveats.push(Caveat::new("claimed_flags_violated", format!("{}: claimed {:?}, found {:?}", b.label, b.claimed, f)));
    }
    let ent = b.gate.diagonal_entanglement().ok();
    let m = b.map.as_ref();
    let result = json!({
        "label": b.label,
        "n": b.gate.n(),
        "m": b.gate.m(),
        "unitary": f.unitary,
        "bijective": m.map(|m| m.is_bijective()),
        "dual_unitary": f.dual_unitary,
        "perfect": f.perfect,
        "self_orthogonal": m.map(|m| m.is_self_orthogonal()),
        "non_interacting": m.map(|m| m.is_non_interacting()),
        "yang_baxter": m.map(|m| m.yang_baxter()),
        "map": m.map(|m| m.render()),
        "claimed": b.claimed.as_ref().map(flags_json),
        "claims_hold": hold,
        "diagonal_entanglement": ent,
    });
    let table = Table {
        columns: vec!["label", "unitary", "bijective", "dual_unitary", "perfect", "self_orthogonal"],
        rows: vec![vec![
            b.label.clone(),
            f.unitary.to_string(),
            m.map_or(String::new(), |m| m.is_bijective().to_string()),
            f.dual_unitary.to_string(),
            f.perfect.to_string(),
            m.map_or(String::new(), |m| m.is_self_orthogonal().to_string()),
        ]],
    };
    Ok(Output { result, table: Some(table), caveats })
}

fn construct(a: &ConstructArgs) -> Res<Output> {
    let tol = Tolerance::default();
    if a.list {
        let mut rows = vec![];
        let list: Vec<Value> = builtins::names()
            .into_iter()
            .map(|name| {
                let b = builtins::builtin(name).expect("listed");
                let cd = b.map.as_ref().map(|m| m.render());
                rows.push(vec![name.to_string(), b.description.to_string(), cd.clone().unwrap_or_default()]);
                json!({ "name": name, "description": b.description, "map": cd, "claimed": flags_json(&b.claimed), "yang_baxter": b.yang_baxter })
            })
            .collect();
        let table = Table { columns: vec!["name", "description", "map"], rows };
        return Ok(Output { result: json!({ "builtins": list }), table: Some(table), caveats: vec![] });
    }
    let d = descriptor(a.descriptor.as_deref().expect("clap requires it"))?;
    let b = d.build(&tol)?;
    let f = b.gate.flags(&tol);
    let hold = claims_hold(b.claimed, &f);
    let mut caveats = vec![];
    if hold == Some(false) {
        caveats.push(Caveat::new("claimed_flags_violated", format!("{}: claimed {:?}, found {:?}", b.label, b.claimed, f)));
    }
    let result = json!({
        "label": b.label,
        "descriptor": to_value(&d),
        "gate": to_value(&b.gate),
        "map": b.map.as_ref().map(|m| m.render()),
        "flags": flags_json(&f),
        "claimed": b.claimed.as_ref().map(flags_json),
        "claims_hold": hold,
    });
    Ok(Output { result, table: None, caveats })
}

/// Class counts quoted for comparison; a mismatch is reported, not hidden.
fn reference_class_count(n: usize) -> Option<usize> {
    match n {
        2 => Some(5),
        3 => Some(227),
        _ => None,
    }
}

fn enumerate(a: &EnumerateArgs) -> Res<Output> {
    let r = enumerate_du(a.n)?;
    let hist: serde_json::Map<String, Value> =
        class_size_histogram(&r).into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let mut caveats = vec![];
    let reference = reference_class_count(a.n);
    if let Some(want) = reference.filter(|&w| w != r.class_count) {
        caveats.push(Caveat::new(
            "class_count_differs_from_reference",
            format!(
                "found {} classes under leg relabellings and the four space-time reflections; reference count is {want}; \
                 adding U -> U^R to the group gives {}",
                r.class_count, r.reshuffle_inclusive_count
            ),
        ));
    }
    let mut result = json!({
        "n": r.n,
        "total_maps": r.total_maps,
        "group_order": r.group_order,
        "class_count": r.class_count,
        "reference_class_count": reference,
        "non_interacting_classes": r.non_interacting_classes,
        "perfect_classes": r.perfect_classes,
        "reshuffle_inclusive_count": r.reshuffle_inclusive_count,
        "class_size_histogram": hist,
    });
    if a.representatives {
        result["representatives"] = r
            .representatives
            .iter()
            .zip(&r.class_sizes)
            .map(|(m, s)| json!({ "map": m.render(), "class_size": s, "flags": to_value(&m.check_flags()) }))
            .collect();
    }
    let table = Table {
        columns: vec!["n", "total_maps", "class_count", "non_interacting_classes", "perfect_classes", "reshuffle_inclusive_count"],
        rows: vec![vec![
            r.n.to_string(),
            r.total_maps.to_string(),
            r.class_count.to_string(),
            r.non_interacting_classes.to_string(),
            r.perfect_classes.to_string(),
            r.reshuffle_inclusive_count.to_string(),
        ]],
    };
    Ok(Output { result, table: Some(table), caveats })
}

fn spectrum_summary(s: &SpectrumReport) -> Value {
    json!({
        "direction": s.direction,
        "dim": s.dim,
        "blocks": s.blocks,
        "largest_block": s.largest_block,
        "largest_other_modulus": s.eigenvalues.iter().find(|e| (e[0].hypot(e[1]) - 1.0).abs() > 1e-9).map(|e| e[0].hypot(e[1])),
        "unimodular_count": s.unimodular_count,
        "exact_unimodular_count": s.exact_unimodular_count,
        "unimodular_phases": to_value(&s.unimodular),
    })
}

fn gliders(a: &GliderArgs) -> Res<Output> {
    let tol = Tolerance::new(a.tau_u, a.tau_lambda)?;
    let b = resolve(&a.source, &tol)?;
    let alphas = parse_list(&a.alpha, false)?;
    if alphas.contains(&0) {
        return Err(CliError::Usage("alpha starts at 1".into()));
    }
    let g = &b.gate;
    let rows: Vec<Res<(Value, Vec<String>, Vec<Caveat>)>> = alphas
        .par_iter()
        .map(|&alpha| {
            let c = glider_count(g, alpha, &tol, a.cap)?;
            let mut cav = vec![];
            if c.exact_count.is_some_and(|e| e != c.count) {
                cav.push(Caveat::new(
                    "float_and_exact_counts_differ",
                    format!("alpha={alpha}: floating count {} vs exact {}", c.count, c.exact_count.unwrap()),
                ));
            }
            let mut row = json!({
                "alpha": alpha,
                "count": c.count,
                "exact_count": c.exact_count,
                "right": spectrum_summary(&c.right),
                "left": spectrum_summary(&c.left),
            });
            if a.exact_spectrum {
                if b.map.is_some() {
                    let mut checks = vec![];
                    for dir in [Direction::Right, Direction::Left] {
                        let t = transfer_matrix(g, alpha, dir, a.cap)?;
                        checks.push(trivial_spectrum_check(&t, 4, t.dim)?);
                    }
                    row["trivial_spectrum"] = to_value(&checks);
                } else {
                    cav.push(Caveat::new("exact_spectrum_skipped", "the exact spectrum test needs a permutation map"));
                }
            }
            if a.extract {
                let cands = extract_gliders(g, alpha, &tol, a.cap, a.seed)?;
                let bad = cands.iter().filter(|c| !c.verified).count();
                if bad > 0 {
                    cav.push(Caveat::new(
                        "glider_verification_failed",
                        format!("alpha={alpha}: {bad} candidates fail the exchange relation"),
                    ));
                }
                row["candidates"] = to_value(&cands);
            }
            let csv = vec![
                alpha.to_string(),
                c.count.to_string(),
                c.exact_count.map_or(String::new(), |e| e.to_string()),
                c.right.unimodular_count.to_string(),
                c.left.unimodular_count.to_string(),
            ];
            Ok((row, csv, cav))
        })
        .collect();
    let mut out_rows = vec![];
    let mut csv_rows = vec![];
    let mut caveats = vec![];
    for r in rows {
        let (v, c, cav) = r?;
        out_rows.push(v);
        csv_rows.push(c);
        caveats.extend(cav);
    }
    let result = json!({ "label": b.label, "n": g.n(), "rows": out_rows });
    let table = Table { columns: vec!["alpha", "count", "exact_count", "right_unimodular", "left_unimodular"], rows: csv_rows };
    Ok(Output { result, table: Some(table), caveats })
}

fn correlate(a: &CorrelateArgs) -> Res<Output> {
    let tol = Tolerance::default();
    let b = resolve(&a.source, &tol)?;
    if a.t < 2 || a.t % 2 == 1 {
        return Err(CliError::Usage("--t must be even and at least 2".into()));
    }
    let g = &b.gate;
    let l = a.l;
    let mut caveats = vec![];
    let f = g.flags(&tol);
    if !f.dual_unitary {
        caveats.push(Caveat::new("not_dual_unitary", "off-light-cone correlators need not vanish"));
    }
    let mut rows = vec![];
    let mut csv = vec![];
    for t in (2..=a.t).step_by(2) {
        let off = max_correlation(g, l, t, a.cap as u128, |x, y| !on_light_cone(x, y, t, l))?;
        let on = max_correlation(g, l, t, a.cap as u128, |x, y| on_light_cone(x, y, t, l))?;
        rows.push(json!({
            "t": t,
            "off_cone_max": off,
            "on_cone_max": on,
            "off_cone_vanishes": off <= a.zero,
            "all_vanish": off.max(on) <= a.zero,
        }));
        csv.push(vec![t.to_string(), format!("{off:e}"), format!("{on:e}")]);
    }
    let result = json!({ "label": b.label, "n": g.n(), "l": l, "flags": flags_json(&f), "zero": a.zero, "rows": rows });
    Ok(Output { result, table: Some(Table { columns: vec!["t", "off_cone_max", "on_cone_max"], rows: csv }), caveats })
}

fn orbits(a: &OrbitArgs) -> Res<Output> {
    let tol = Tolerance::default();
    let b = resolve(&a.source, &tol)?;
    let m = require_map(&b)?;
    let ls = parse_list(&a.l, true)?;
    let opts = OrbitOptions {
        samples: a.samples,
        repetitions: a.repetitions,
        seed: a.seed,
        step_budget: a.step_budget,
        table_cap: a.state_cap,
    };
    let mut stats = vec![];
    let mut caveats = vec![];
    for &l in &ls {
        let s = ca::average_orbit_length(m, l, &opts)?;
        if s.budget_exceeded > 0 {
            caveats.push(Caveat::new(
                "step_budget_exceeded",
                format!("L={l}: {} orbits truncated at {} steps; the mean is a lower bound", s.budget_exceeded, a.step_budget),
            ));
        }
        stats.push(s);
    }
    let rows: Vec<Value> = stats
        .iter()
        .map(|s| {
            let mut v = json!({
                "l": s.l,
                "mean": s.mean,
                "log_mean": s.log_mean,
                "rep_log_means": s.rep_log_means,
                "rel_variance_log": s.rel_variance_log,
                "budget_exceeded": s.budget_exceeded,
                "from_cycle_table": s.from_cycle_table,
            });
            if a.full {
                v["orbit_lengths"] = json!(s.orbit_lengths);
            }
            v
        })
        .collect();
    let csv = stats
        .iter()
        .map(|s| {
            vec![
                s.l.to_string(),
                s.n.to_string(),
                s.samples.to_string(),
                s.repetitions.to_string(),
                s.seed.to_string(),
                s.mean.to_string(),
                s.log_mean.to_string(),
                s.rel_variance_log.to_string(),
                s.budget_exceeded.to_string(),
                s.from_cycle_table.to_string(),
            ]
        })
        .collect();
    let result = json!({
        "label": b.label,
        "n": m.n(),
        "samples": a.samples,
        "repetitions": a.repetitions,
        "seed": a.seed,
        "rows": rows,
        "log_slope": ca::log_slope(&stats),
    });
    let table = Table {
        columns: vec![
            "l", "n", "samples", "repetitions", "seed", "mean", "log_mean", "rel_variance_log", "budget_exceeded",
            "from_cycle_table",
        ],
        rows: csv,
    };
    Ok(Output { result, table: Some(table), caveats })
}

fn recurrence(a: &RecurrenceArgs) -> Res<Output> {
    let tol = Tolerance::default();
    let b = resolve(&a.source, &tol)?;
    let m = require_map(&b)?;
    let ls = parse_list(&a.l, true)?;
    let opts = RecurrenceOptions {
        state_cap: a.state_cap,
        samples: a.samples,
        seed: a.seed,
        step_budget: a.step_budget,
        order: OrderOptions::default(),
    };
    let linear = ca::is_linear_block_map(m);
    let mut rows = vec![];
    let mut caveats = vec![];
    for &l in &ls {
        let method = match a.method {
            MethodArg::Exhaustive => RecurrenceMethod::ExhaustiveLcm,
            MethodArg::Matrix => RecurrenceMethod::MatrixOrder,
            MethodArg::Sampled => RecurrenceMethod::SampledLowerBound,
            MethodArg::Auto if linear => RecurrenceMethod::MatrixOrder,
            MethodArg::Auto => match (m.n() as u64).checked_pow(l as u32) {
                Some(s) if s <= a.state_cap => RecurrenceMethod::ExhaustiveLcm,
                _ => RecurrenceMethod::SampledLowerBound,
            },
        };
        let r = ca::recurrence_time(m, l, method, &opts)?;
        if r.lower_bound {
            caveats.push(Caveat::new(
                "lower_bound",
                format!("L={l}: lcm over {} sampled orbits is only a divisor of T", r.states_tested),
            ));
        }
        rows.push(r);
    }
    let csv = rows
        .iter()
        .map(|r| {
            vec![
                r.l.to_string(),
                r.n.to_string(),
                r.t.to_string(),
                to_value(&r.method).as_str().unwrap_or_default().to_string(),
                r.lower_bound.to_string(),
                r.states_tested.to_string(),
            ]
        })
        .collect();
    let result = json!({ "label": b.label, "n": m.n(), "rows": to_value(&rows) });
    let table = Table { columns: vec!["l", "n", "T", "method", "lower_bound", "states_tested"], rows: csv };
    Ok(Output { result, table: Some(table), caveats })
}

fn order_opts(b: &OrderBudget) -> OrderOptions {
    OrderOptions { direct_budget: b.direct_budget, factor_budget: b.factor_budget }
}

fn primes(s: &str) -> Res<Vec<u64>> {
    let v: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("bad prime list `{s}`"))))
        .collect::<Res<_>>()?;
    if v.iter().any(|&p| p < 3 || !arith::is_prime(p)) {
        return Err(CliError::Usage(format!("odd primes only, got `{s}`")));
    }
    Ok(v)
}

fn single_prime(s: &str) -> Res<u64> {
    match primes(s)?.as_slice() {
        [p] => Ok(*p),
        _ => Err(CliError::Usage("this check takes a single --p".into())),
    }
}

fn ffield(op: &FfieldOp) -> Res<Output> {
    match op {
        FfieldOp::Order { p, l, budget } => ffield_order(*p, l, &order_opts(budget)),
        FfieldOp::Blocks { p, l, budget } => {
            let r = checks::block_spectrum(*p, *l, &order_opts(budget))?;
            let mut caveats = vec![];
            if !r.lcm_equals_t {
                caveats.push(Caveat::new("block_lcm_differs", format!("lcm of block orders {} vs T {}", r.lcm, r.t)));
            }
            Ok(Output { result: to_value(&r), table: None, caveats })
        }
        FfieldOp::Verify { corollary, p, m_max, l, k_max, a, b, budget } => {
            let opts = order_opts(budget);
            ffield_verify(*corollary, p, *m_max, l, *k_max, *a, *b, &opts)
        }
    }
}

fn ffield_order(p: u64, l: &str, opts: &OrderOptions) -> Res<Output> {
    if p < 3 || !arith::is_prime(p) {
        return Err(CliError::Usage(format!("--p must be an odd prime, got {p}")));
    }
    let ls = parse_list(l, true)?;
    let reports: Vec<_> = ls
        .par_iter()
        .map(|&l| Ok(matrix_order(&duc_core::linear_ca::build_v(l, p)?, opts)?))
        .collect::<Res<Vec<_>>>()?;
    let mut caveats = vec![];
    for r in &reports {
        if r.parity_multiple_annihilates == Some(false) {
            caveats.push(Caveat::new(
                "parity_rule_multiple_fails",
                format!("L={}: V^(p(p^(2s)-1)) != I for s={}; certified with the universal multiple", r.l, r.s.unwrap_or(0)),
            ));
        }
        if r.methods_agree.is_none() {
            caveats.push(Caveat::new("single_method", format!("L={}: only one of the two order routes finished", r.l)));
        }
    }
    let csv = reports
        .iter()
        .map(|r| {
            let opt = |x: Option<u64>| x.map_or(String::new(), |v| v.to_string());
            let ob = |x: Option<bool>| x.map_or(String::new(), |v| v.to_string());
            vec![
                r.l.to_string(),
                r.p.to_string(),
                r.t.to_string(),
                r.ell.to_string(),
                opt(r.n),
                opt(r.s),
                ob(r.parity_multiple_annihilates),
                r.divisor_certificate
                    .as_ref()
                    .map_or(String::new(), |c| to_value(&c.kind).as_str().unwrap_or_default().to_string()),
                ob(r.methods_agree),
                r.direct_budget_exhausted.to_string(),
            ]
        })
        .collect();
    let table = Table {
        columns: vec![
            "l", "p", "T", "ell", "n", "s", "parity_multiple_annihilates", "certificate", "methods_agree",
            "direct_budget_exhausted",
        ],
        rows: csv,
    };
    Ok(Output { result: json!({ "p": p, "rows": to_value(&reports) }), table: Some(table), caveats })
}

#[allow(clippy::too_many_arguments)]
fn ffield_verify(c: Corollary, p: &str, m_max: u32, l: &str, k_max: u32, a: u64, b: u64, opts: &OrderOptions) -> Res<Output> {
    let mut caveats = vec![];
    let (detail, holds, table) = match c {
        Corollary::TwoPm => {
            let p = single_prime(p)?;
            let r = checks::verify_corollary_2pm(p, m_max, opts)?;
            for row in r.rows.iter().filter(|r| !r.mu_equals_m) {
                caveats.push(Caveat::new("mu_below_m", format!("L={}: mu={:?}, m={}", row.l, row.mu, row.m)));
            }
            let rows = r
                .rows
                .iter()
                .map(|x| vec![x.m.to_string(), x.l.to_string(), x.t.to_string(), x.mu.map_or(String::new(), |u| u.to_string())])
                .collect();
            (to_value(&r), r.ok, Some(Table { columns: vec!["m", "l", "T", "mu"], rows }))
        }
        Corollary::Div => {
            let p = single_prime(p)?;
            let mut reports = vec![];
            let mut skipped = vec![];
            for l in parse_list(l, true)? {
                if ((l / 2) as u64).gcd(&p) != 1 {
                    skipped.push(l);
                    continue;
                }
                let r = checks::verify_divisibility(p, l, opts)?;
                if !r.divides {
                    caveats.push(Caveat::new(
                        "divisibility_fails",
                        format!("L={}: T={} does not divide p(p^(2s)-1) with s={} (n={})", r.l, r.t, r.s, r.n),
                    ));
                }
                reports.push(r);
            }
            if !skipped.is_empty() {
                caveats.push(Caveat::new("not_coprime_skipped", format!("p divides L/2 for L in {skipped:?}")));
            }
            let holds = reports.iter().all(|r| r.divides);
            let rows = reports
                .iter()
                .map(|r| {
                    vec![
                        r.l.to_string(),
                        r.ell.to_string(),
                        r.n.to_string(),
                        r.s.to_string(),
                        r.t.to_string(),
                        r.divides.to_string(),
                        r.divides_s_equals_n.to_string(),
                        r.minus_one_in_p_powers.to_string(),
                        r.within_exponential_bound.map_or(String::new(), |b| b.to_string()),
                    ]
                })
                .collect();
            let table = Table {
                columns: vec![
                    "l", "ell", "n", "s", "T", "divides", "divides_s_equals_n", "minus_one_in_p_powers",
                    "within_exponential_bound",
                ],
                rows,
            };
            (json!({ "p": p, "rows": to_value(&reports), "skipped": skipped }), holds, Some(table))
        }
        Corollary::Repunit => {
            let p = single_prime(p)?;
            let mut reports = vec![];
            for k in 2..=k_max {
                let ell = (p.pow(k) - 1) / (p - 1);
                reports.push(checks::verify_divisibility(p, 2 * ell as usize, opts)?);
            }
            let holds = reports.iter().all(|r| r.repunit.as_ref().is_some_and(|q| q.within));
            (json!({ "p": p, "rows": to_value(&reports) }), holds, None)
        }
        Corollary::Coprime => {
            let p = single_prime(p)?;
            let r = checks::coprime_decomposition_check(p, a, b, opts)?;
            if r.d.is_none() {
                caveats.push(Caveat::new("no_small_factor", format!("no d | p-1 relates T(2ab) and lcm(T(2a), T(2b)) for a={a}, b={b}")));
            }
            (to_value(&r), r.d.is_some(), None)
        }
        Corollary::LowerBound => {
            let ps = primes(p)?;
            let l_max = *parse_list(l, true)?.iter().max().expect("non-empty");
            let rows = checks::lower_bound_sweep(&ps, l_max, opts)?;
            let holds = rows.iter().all(|r| r.ok);
            let csv = rows.iter().map(|r| vec![r.p.to_string(), r.l.to_string(), r.t.to_string(), r.ok.to_string()]).collect();
            (json!({ "rows": to_value(&rows) }), holds, Some(Table { columns: vec!["p", "l", "T", "ok"], rows: csv }))
        }
        Corollary::Kernel => {
            let p = single_prime(p)?;
            let rows = (0..=m_max).map(|m| checks::kernel_check(p, m)).collect::<duc_core::Result<Vec<_>>>()?;
            let holds = rows.iter().all(|r| r.kernel_dim == 2 && r.v2_single_eigenvalue);
            (json!({ "rows": to_value(&rows) }), holds, None)
        }
    };
    if !holds {
        caveats.push(Caveat::new("check_failed", format!("{} does not hold on the requested range", to_value(&c).as_str().unwrap_or_default())));
    }
    Ok(Output { result: json!({ "corollary": c, "holds": holds, "detail": detail }), table, caveats })
}
