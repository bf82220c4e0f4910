//! Browser bindings: a spacetime diagram for a permutation circuit, the
//! recurrence time of the linear automaton over `F_p`, and glider counts
//! for a pasted map. Every function returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use duc_core::ca::{self, Circuit};
use duc_core::ergodicity::{glider_count, DEFAULT_CAP};
use duc_core::linear_ca::{build_v, matrix_order, OrderOptions};
use duc_core::{builtins, PermMap, Tolerance};

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn parse_map(cd: &str) -> Result<PermMap, duc_core::Error> {
    let cd = cd.trim();
    match builtins::map(cd) {
        Ok(m) => Ok(m),
        Err(_) => PermMap::parse(cd),
    }
}

/// Permutation builtins as `{name, description, cd}`.
pub fn builtin_list() -> Value {
    let items: Vec<Value> = builtins::names()
        .into_iter()
        .filter_map(|n| {
            let b = builtins::builtin(n).ok()?;
            let m = b.map.as_ref()?;
            Some(json!({ "name": b.name, "description": b.description, "n": m.n(), "cd": m.render() }))
        })
        .collect();
    Value::Array(items)
}

/// Rows of site values after each layer, starting from a seeded random
/// state (or `initial`, comma separated, if non-empty).
pub fn spacetime(cd: &str, l: usize, layers: usize, seed: u64, initial: &str) -> Result<Value, duc_core::Error> {
    let m = parse_map(cd)?;
    if l == 0 || l % 2 == 1 || l > 512 || layers > 4096 {
        return Err(duc_core::Error::Precondition("need even 2 ≤ L ≤ 512 and at most 4096 layers".into()));
    }
    let mut s = if initial.trim().is_empty() {
        ca::sample_state(m.n(), l, seed, 0)
    } else {
        let v: Result<Vec<u8>, _> = initial.split([',', ' ']).filter(|t| !t.is_empty()).map(str::parse::<u8>).collect();
        v.map_err(|e| duc_core::Error::Parse(format!("initial state: {e}")))?
    };
    if s.len() != l || s.iter().any(|&x| x as usize >= m.n()) {
        return Err(duc_core::Error::Precondition(format!("initial state needs {l} values in 0..{}", m.n())));
    }
    let c = Circuit::new(&m);
    let start = s.clone();
    let mut rows = vec![s.clone()];
    let mut period = None;
    for k in 0..layers {
        c.layer(&mut s, k % 2);
        rows.push(s.clone());
        if period.is_none() && k % 2 == 1 && s == start {
            period = Some((k + 1) / 2);
        }
    }
    Ok(json!({ "n": m.n(), "l": l, "rows": rows, "period": period }))
}

/// `T(L)` of `(a, b) ↦ (a+b, a−b)` over `F_p` for the even `L` in range.
pub fn recurrence(p: u64, l_min: usize, l_max: usize) -> Result<Value, duc_core::Error> {
    if l_max > 400 || l_min > l_max {
        return Err(duc_core::Error::Precondition("need L_min ≤ L_max ≤ 400".into()));
    }
    let opts = OrderOptions::default();
    let mut rows = vec![];
    for l in (l_min.max(2)..=l_max).filter(|l| l % 2 == 0) {
        let r = matrix_order(&build_v(l, p)?, &opts)?;
        let t = r.t.to_string();
        let log_p = t.parse::<f64>().map(|x| x.ln() / (p as f64).ln()).unwrap_or(f64::NAN);
        rows.push(json!({ "L": l, "T": t, "log_p_T": log_p }));
    }
    Ok(json!({ "p": p, "rows": rows }))
}

/// Glider counts for `α = 1..=alpha_max`.
pub fn gliders(cd: &str, alpha_max: usize) -> Result<Value, duc_core::Error> {
    let m = parse_map(cd)?;
    let g = m.to_gate();
    let tol = Tolerance::default();
    let flags = m.check_flags();
    if !flags.dual_unitary {
        return Err(duc_core::Error::Precondition("the map is not dual-unitary".into()));
    }
    let mut rows = vec![];
    for alpha in 1..=alpha_max.min(4) {
        let r = glider_count(&g, alpha, &tol, DEFAULT_CAP)?;
        rows.push(json!({
            "alpha": alpha,
            "count": r.count,
            "exact_count": r.exact_count,
            "right": r.right.unimodular_count - r.right.trivial_subtracted,
            "left": r.left.unimodular_count - r.left.trivial_subtracted,
        }));
    }
    Ok(json!({ "n": m.n(), "cd": m.render(), "flags": flags, "rows": rows }))
}

#[wasm_bindgen(js_name = builtinList)]
pub fn builtin_list_js() -> String {
    builtin_list().to_string()
}

#[wasm_bindgen(js_name = spacetime)]
pub fn spacetime_js(cd: &str, l: usize, layers: usize, seed: u64, initial: &str) -> Result<String, JsValue> {
    spacetime(cd, l, layers, seed, initial).map(|v| v.to_string()).map_err(err)
}

#[wasm_bindgen(js_name = recurrence)]
pub fn recurrence_js(p: u64, l_min: usize, l_max: usize) -> Result<String, JsValue> {
    recurrence(p, l_min, l_max).map(|v| v.to_string()).map_err(err)
}

#[wasm_bindgen(js_name = gliders)]
pub fn gliders_js(cd: &str, alpha_max: usize) -> Result<String, JsValue> {
    gliders(cd, alpha_max).map(|v| v.to_string()).map_err(err)
}
