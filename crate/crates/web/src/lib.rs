//! Browser bindings. Each export takes plain numbers or JSON text and returns
//! JSON text; the `*_json` functions are the same operations for native use.

use liouwave::cmc::{delta_bar, f_lambda, gap_check, ground_state_gradient_norm, GROUND_STATE_ENERGY};
use liouwave::liouville::{evolve, lambda_report, CouplingSpec, MonitorConfig, SystemState};
use liouwave::sphere::{SphereField, SphereGrid};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// f on `points` nodes of `[0, lambda_max]`, plus where `(gradient_norm, energy)` sits relative to the trap.
pub fn energy_gap_json(gradient_norm: f64, energy: f64, delta: f64, lambda_max: f64, points: usize) -> Result<String, String> {
    if !(lambda_max > 0.0) || !(2..=100_000).contains(&points) {
        return Err("need lambda_max > 0 and 2 <= points <= 100000".into());
    }
    let curve: Vec<[f64; 2]> = (0..points)
        .map(|i| {
            let l = lambda_max * i as f64 / (points - 1) as f64;
            Ok([l, f_lambda(l)?])
        })
        .collect::<liouwave::Result<_>>()
        .map_err(err)?;
    let (below, above) = delta_bar(delta).map_err(err)?;
    let trap = match gap_check(gradient_norm, energy, delta) {
        Ok(r) => serde_json::to_value(r).map_err(err)?,
        Err(e) => json!({ "not_applicable": e.to_string() }),
    };
    Ok(json!({
        "curve": curve,
        "peak": [ground_state_gradient_norm(), GROUND_STATE_ENERGY],
        "delta_bar": [below, above],
        "trap": trap,
    })
    .to_string())
}

/// Scalar run from `u0 = beta x3`, `u1 = velocity x3`.
pub fn liouville_run_json(alpha: f64, beta: f64, velocity: f64, lmax: usize, horizon: f64) -> Result<String, String> {
    if !(2..=48).contains(&lmax) || !(horizon > 0.0 && horizon <= 200.0) {
        return Err("need 2 <= lmax <= 48 and 0 < horizon <= 200".into());
    }
    let g = SphereGrid::new(lmax).map_err(err)?;
    let u = SphereField::from_fn(&g, |x| beta * x[2]);
    let v = SphereField::from_fn(&g, |x| velocity * x[2]);
    let s = SystemState::scalar(u, v).map_err(err)?;
    let dt = 0.5 / lmax as f64;
    let every = ((horizon / dt) / 400.0).ceil().max(1.0) as usize;
    let run = evolve(&s, &CouplingSpec::scalar(alpha), horizon, dt, &MonitorConfig { sample_every: every, ..Default::default() })
        .map_err(err)?;
    let col = |f: &dyn Fn(&liouwave::diagnostics::DiagnosticsRecord) -> f64| -> Vec<f64> { run.records.iter().map(f).collect() };
    Ok(json!({
        "dt": dt,
        "steps": run.steps,
        "t": col(&|r| r.t),
        "energy": col(&|r| r.energy),
        "cm": col(&|r| r.max_cm()),
        "norm": col(&|r| r.monitored_norm()),
        "max_2u": col(&|r| r.max_2u),
        "overflow": run.overflow.map(|o| o.t),
    })
    .to_string())
}

/// `{"a": [[..]], "m": [..]}` to the Lambda_J table and hypothesis checklist.
pub fn lambda_json(spec: &str) -> Result<String, String> {
    let v: Value = serde_json::from_str(spec).map_err(err)?;
    let parse = |k: &str| v.get(k).cloned().ok_or(format!("missing {k:?}"));
    let a: Vec<Vec<f64>> = serde_json::from_value(parse("a")?).map_err(err)?;
    let m: Vec<f64> = serde_json::from_value(parse("m")?).map_err(err)?;
    let r = lambda_report(&CouplingSpec::system(a, m).map_err(err)?).map_err(err)?;
    Ok(json!({
        "entries": r.entries,
        "feasibility": r.feasibility,
        "all_positive": r.all_positive,
        "global_existence": r.global_existence_hypotheses(),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn energy_gap(gradient_norm: f64, energy: f64, delta: f64, lambda_max: f64, points: usize) -> Result<String, JsValue> {
    energy_gap_json(gradient_norm, energy, delta, lambda_max, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn liouville_run(alpha: f64, beta: f64, velocity: f64, lmax: usize, horizon: f64) -> Result<String, JsValue> {
    liouville_run_json(alpha, beta, velocity, lmax, horizon).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lambda_table(spec: &str) -> Result<String, JsValue> {
    lambda_json(spec).map_err(|e| JsValue::from_str(&e))
}
