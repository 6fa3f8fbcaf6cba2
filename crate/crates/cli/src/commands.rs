use std::path::PathBuf;
use std::time::Instant;

use liouwave::cmc::{
    blowup_certificate, delta_bar, f_at_ground_state, f_shape_check, gap_check, ground_state_gradient_norm,
    ground_state_identities, leapfrog_evolve, quantization_check, sobolev_constant, sobolev_sweep, CmcOptions,
    PlaneGrid, RationalMapSpec, DEFAULT_CFL, GROUND_STATE_ENERGY,
};
use liouwave::diagnostics::{blowup_monitor, mt_sweep, system_floor_sweep, BlowupFlag};
use liouwave::liouville::{evolve, lambda_report, CouplingSpec, EquationKind, LambdaReport, MonitorConfig};
use liouwave::sphere::SphereGrid;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Equation, GroundStateConfig, MtCheckConfig, RunConfig, SpecConfig};
use crate::output::{plane_csv, sphere_csv, to_json, versions, write_all, Summary};
use crate::recipes::{plane_state, sphere_state};
use crate::CliError;

/// Options shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub config: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub quiet: bool,
}

impl Context {
    fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed JSON: {e}")))
}

fn from_value<T: DeserializeOwned>(v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Config(e.to_string()))
}

fn load<T: DeserializeOwned + Default>(ctx: &Context) -> Result<T, CliError> {
    match &ctx.config {
        None => Ok(T::default()),
        Some(text) => from_value(parse_json(text)?),
    }
}

/// User keys laid over the equation's defaults (top level only; nested
/// sections fill their own defaults).
pub fn load_run_config(text: Option<&str>, equation: Equation) -> Result<RunConfig, CliError> {
    let defaults = serde_json::to_value(RunConfig::default_for(equation)).expect("serializable");
    let Some(text) = text else {
        return from_value(defaults);
    };
    let Value::Object(user) = parse_json(text)? else {
        return Err(CliError::Config("config must be a JSON object".into()));
    };
    let Value::Object(mut merged) = defaults else { unreachable!() };
    if let Some(e) = user.get("equation") {
        let e: Equation = from_value(e.clone())?;
        if e != equation {
            return Err(CliError::Config(format!("config is for {e:?}, not {equation:?}")));
        }
    }
    merged.extend(user);
    from_value(Value::Object(merged))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn flag_name(f: BlowupFlag) -> String {
    to_value(&f).as_str().unwrap_or_default().to_string()
}

fn coupling(spec: &SpecConfig) -> Result<CouplingSpec, CliError> {
    Ok(match spec {
        SpecConfig::Scalar { alpha } => {
            if !alpha.is_finite() {
                return Err(CliError::Config("alpha must be finite".into()));
            }
            CouplingSpec::scalar(*alpha)
        }
        SpecConfig::System { a, m } => CouplingSpec::system(a.clone(), m.clone())?,
    })
}

fn lambda_json(r: &LambdaReport) -> Value {
    json!({
        "entries": r.entries,
        "feasibility": r.feasibility,
        "all_positive": r.all_positive,
        "all_nonnegative": r.all_nonnegative,
        "global_existence_hypotheses": r.global_existence_hypotheses(),
    })
}

/// `liouville` and `system`.
pub fn cmd_sphere(ctx: &Context, equation: Equation) -> Result<u8, CliError> {
    let mut cfg = load_run_config(ctx.config.as_deref(), equation)?;
    if let Some(s) = ctx.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let spec = coupling(&cfg.spec)?;
    let grid = SphereGrid::new(cfg.lmax)?;
    let state = sphere_state(&grid, &cfg.initial, cfg.seed)?;
    let dt = cfg.dt.unwrap_or(0.5 / cfg.lmax as f64);
    let monitors = MonitorConfig {
        sample_every: cfg.monitors.sample_every,
        concentration_eps: cfg.monitors.concentration_eps,
        keep_states: false,
        even_symmetry: cfg.monitors.even_symmetry,
    };
    let clock = Instant::now();
    let run = evolve(&state, &spec, cfg.horizon, dt, &monitors)?;
    let assessment = blowup_monitor(&run.records, &spec, &cfg.monitors.thresholds)?;
    let r0 = &run.records[0];
    let e0 = r0.energy;
    let energy_drift = run.records.iter().map(|r| (r.energy - e0).abs()).fold(0.0, f64::max) / e0.abs().max(1.0);
    let mean_drift = run
        .records
        .iter()
        .flat_map(|r| r.means.iter().zip(&r0.means).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    let n0 = r0.monitored_norm();
    let norm_max = run.records.iter().map(|r| r.monitored_norm()).fold(0.0, f64::max);
    let last = run.records.last().unwrap();
    let mut results = json!({
        "dt": dt,
        "steps": run.steps,
        "final_time": run.final_state.t,
        "initial_energy": e0,
        "energy_drift": energy_drift,
        "mean_drift": mean_drift,
        "initial_norm": n0,
        "max_norm": norm_max,
        "norm_ratio": if n0 > 0.0 { norm_max / n0 } else { 0.0 },
        "max_cm": assessment.cm.max,
        "max_mass": assessment.mass.max,
        "max_gradient": assessment.gradient.max,
        "final_max_2u": last.max_2u,
        "overflow": run.overflow,
        "assessment": assessment,
    });
    if spec.kind() == EquationKind::System {
        results["lambda"] = lambda_json(&lambda_report(&spec)?);
    }
    let flags: Vec<String> = assessment.flags.iter().map(|f| flag_name(*f)).collect();
    let summary = Summary { config_echo: &cfg, results, flags: flags.clone(), versions: versions() };
    write_all(
        &ctx.out_dir(),
        &[(cfg.outputs.series.as_str(), sphere_csv(&run.records)), (cfg.outputs.summary.as_str(), to_json(&summary)?)],
    )?;
    ctx.say(format!(
        "t = {:.4} ({} steps)  energy drift {:.3e}  mean drift {:.3e}  norm ratio {:.3}  max |CM| {:.4}",
        run.final_state.t,
        run.steps,
        energy_drift,
        mean_drift,
        if n0 > 0.0 { norm_max / n0 } else { 0.0 },
        assessment.cm.max
    ));
    if !ctx.quiet {
        eprintln!("elapsed {:.2?}", clock.elapsed());
    }
    if flags.is_empty() {
        Ok(0)
    } else {
        ctx.say(format!("blow-up flags: {}", flags.join(", ")));
        Ok(2)
    }
}

pub fn cmd_cmc(ctx: &Context) -> Result<u8, CliError> {
    let mut cfg = load_run_config(ctx.config.as_deref(), Equation::Cmc)?;
    if let Some(s) = ctx.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let grid = PlaneGrid::new(cfg.n, cfg.length)?;
    let data = plane_state(&grid, &cfg.plane_initial)?;
    let dt = cfg.dt.unwrap_or(DEFAULT_CFL * grid.spacing());
    let options = CmcOptions { sample_every: cfg.monitors.sample_every, ..CmcOptions::default() };
    let clock = Instant::now();
    let run = leapfrog_evolve(&data.state, cfg.horizon, dt, &options)?;
    let series = &run.series;
    let first = series.samples[0];
    let e0 = series.initial_energy;
    let valid_until = series.samples.last().unwrap().t;
    let energy_drift =
        series.samples.iter().map(|s| (s.energy - e0).abs()).fold(0.0, f64::max) / e0.abs().max(1.0);
    // largest delta with E(u) <= (1 - delta) E(W), shaved for rounding
    let trap = series.epsilon.map(|eps| gap_check(first.gradient_sq.sqrt(), e0, eps / GROUND_STATE_ENERGY * (1.0 - 1e-12)));
    let certificate = blowup_certificate(series);
    let results = json!({
        "dt": dt,
        "spacing": grid.spacing(),
        "steps": run.steps,
        "final_time": run.final_state.t,
        "last_sample_time": valid_until,
        "support_radius": data.state.support_radius,
        "s": data.s,
        "data_search": data.search.as_ref().map(|d| json!({
            "gradient_sq": d.gradient_sq,
            "cubic": d.cubic,
            "sign": d.sign,
            "gradient_threshold": d.gradient_threshold,
            "energy_threshold": d.energy_threshold,
            "admissible_count": d.admissible.len(),
            "admissible_min": d.admissible.iter().map(|s| s.abs()).fold(f64::INFINITY, f64::min),
        })),
        "initial_energy": e0,
        "initial_gradient_norm": first.gradient_sq.sqrt(),
        "epsilon": series.epsilon,
        "energy_drift": energy_drift,
        "overflow_time": run.overflow_time,
        "trap_at_start": match trap {
            Some(Ok(r)) => to_value(&r),
            Some(Err(e)) => json!({ "not_applicable": e.to_string() }),
            None => Value::Null,
        },
        "certificate": match &certificate {
            Ok(c) => json!({ "report": c, "verified": c.verified() }),
            Err(e) => json!({ "declined": e.to_string() }),
        },
    });
    let flags: Vec<String> = if series.overflow { vec!["overflow".into()] } else { Vec::new() };
    let summary = Summary { config_echo: &cfg, results, flags: flags.clone(), versions: versions() };
    write_all(
        &ctx.out_dir(),
        &[
            (cfg.outputs.series.as_str(), plane_csv(&series.samples, series.overflow.then_some("overflow"))),
            (cfg.outputs.summary.as_str(), to_json(&summary)?),
        ],
    )?;
    ctx.say(format!(
        "t = {:.4} ({} steps)  E0 = {:.6}  energy drift {:.3e}  overflow {:?}",
        run.final_state.t, run.steps, e0, energy_drift, run.overflow_time
    ));
    if let Ok(c) = &certificate {
        ctx.say(format!(
            "certificate: inequality {} (first failure {:?})  t1 {:?}  trap margin {:.4}  bound {:?}",
            if c.inequality_holds { "holds" } else { "fails" },
            c.first_failure,
            c.t1,
            c.trap_margin,
            c.blowup_bound
        ));
    }
    if !ctx.quiet {
        eprintln!("elapsed {:.2?}", clock.elapsed());
    }
    Ok(if flags.is_empty() { 0 } else { 2 })
}

pub fn cmd_groundstate(ctx: &Context) -> Result<u8, CliError> {
    let mut cfg: GroundStateConfig = load(ctx)?;
    if let (Some(s), Some(f)) = (ctx.seed, cfg.sobolev_family.as_mut()) {
        f.seed = s;
    }
    if !(cfg.quadrature.r_cut > 0.0 && cfg.identity_tolerance > 0.0 && cfg.quantization_tolerance > 0.0) {
        return Err(CliError::Config("r_cut and tolerances must be positive".into()));
    }
    let id = ground_state_identities(&cfg.quadrature);
    let mut ok = id.within(cfg.identity_tolerance);
    ctx.say(format!("{:<28}{:>18}{:>18}{:>12}", "quantity", "measured", "expected", "rel. error"));
    for (name, i) in [
        ("|grad W|^2", id.gradient_sq),
        ("int W.(W_x x W_y)", id.cubic),
        ("E(W)", id.energy),
        ("Sobolev constant", id.sobolev_constant),
    ] {
        ctx.say(format!("{name:<28}{:>18.10}{:>18.10}{:>12.2e}", i.measured, i.expected, i.relative_error));
    }
    let mut quant = Vec::new();
    for &d in &cfg.degrees {
        let q = quantization_check(&RationalMapSpec::monomial(d), &cfg.quadrature)?;
        ok &= q.relative_error <= cfg.quantization_tolerance;
        ctx.say(format!("{:<28}{:>18.10}{:>18.10}{:>12.2e}", format!("|grad pi(z^{d})|^2"), q.measured, q.expected, q.relative_error));
        quant.push(q);
    }
    let f_err = (f_at_ground_state() - GROUND_STATE_ENERGY).abs();
    let shape = f_shape_check(cfg.shape_points, 3.0 * ground_state_gradient_norm());
    ok &= f_err <= 1e-12 && shape.increasing_below && shape.decreasing_above;
    ctx.say(format!(
        "f(sqrt(8 pi)) - 4 pi/3 = {f_err:.2e}; increasing below {}, decreasing above {} ({} points)",
        shape.increasing_below, shape.decreasing_above, shape.points
    ));
    let (below, above) = delta_bar(cfg.delta)?;
    ctx.say(format!("delta = {}: delta_bar = {:.10} (below {:.10}, above {:.10})", cfg.delta, below.min(above), below, above));
    let sobolev = match &cfg.sobolev_family {
        Some(f) => {
            let r = sobolev_sweep(f)?;
            ok &= r.reference_deviation <= 0.02 && r.max_excess_over_reference <= 0.005;
            ctx.say(format!(
                "Sobolev ratio: W {:.10} vs sharp {:.10}; family max {:.10} at #{} (ground state: {}); best other exceeds W by {:.3e}",
                r.reference_ratio, r.sharp_ratio, r.max_ratio, r.argmax, r.argmax_is_ground_state, r.max_excess_over_reference
            ));
            json!({
                "size": f.size,
                "seed": f.seed,
                "sharp_ratio": r.sharp_ratio,
                "reference_ratio": r.reference_ratio,
                "reference_deviation": r.reference_deviation,
                "empirical_constant": r.max_ratio,
                "argmax": r.argmax,
                "argmax_is_ground_state": r.argmax_is_ground_state,
                "max_excess_over_reference": r.max_excess_over_reference,
            })
        }
        None => Value::Null,
    };
    let results = json!({
        "identities": id,
        "quantization": quant,
        "sobolev_constant": sobolev_constant(),
        "f_at_ground_state_error": f_err,
        "shape": shape,
        "delta_bar": { "delta": cfg.delta, "below": below, "above": above },
        "sobolev_family": sobolev,
        "pass": ok,
    });
    if let Some(dir) = &ctx.out {
        let summary = Summary { config_echo: &cfg, results, flags: Vec::new(), versions: versions() };
        write_all(dir, &[("groundstate.json", to_json(&summary)?)])?;
    }
    ctx.say(if ok { "all identities within tolerance" } else { "identity check FAILED" });
    Ok(if ok { 0 } else { 1 })
}

pub fn cmd_lambda(ctx: &Context) -> Result<u8, CliError> {
    let text = ctx.config.as_deref().ok_or_else(|| CliError::Config("lambda needs --config <spec.json>".into()))?;
    let spec_cfg: SpecConfig = from_value(parse_json(text)?)?;
    let spec = coupling(&spec_cfg)?;
    let report = lambda_report(&spec)?;
    for e in &report.entries {
        let name: Vec<String> = e.subset.iter().map(|j| j.to_string()).collect();
        ctx.say(format!("Lambda_{{{}}} = {:.16e}", name.join(","), e.value));
    }
    let f = report.feasibility;
    let mark = |b: bool| if b { "yes" } else { "NO" };
    ctx.say(format!("positive definite A     {}", mark(f.positive_definite)));
    ctx.say(format!("nonnegative entries     {}", mark(f.nonnegative_entries)));
    ctx.say(format!("M_j > 0                 {}", mark(f.positive_masses)));
    ctx.say(format!("all Lambda_J > 0        {}", mark(report.all_positive)));
    let ok = report.global_existence_hypotheses();
    if let Some(dir) = &ctx.out {
        let summary = Summary { config_echo: &spec_cfg, results: lambda_json(&report), flags: Vec::new(), versions: versions() };
        write_all(dir, &[("lambda.json", to_json(&summary)?)])?;
    }
    Ok(if ok { 0 } else { 1 })
}

pub fn cmd_mt_check(ctx: &Context) -> Result<u8, CliError> {
    let mut cfg: MtCheckConfig = load(ctx)?;
    if let Some(s) = ctx.seed {
        cfg.family.seed = s;
    }
    if cfg.family.size == 0 || cfg.output.is_empty() || cfg.output.contains('/') {
        return Err(CliError::Config("family size must be positive and output a plain file name".into()));
    }
    let report = mt_sweep(&cfg.family)?;
    ctx.say(format!(
        "slack floors: general (mu = 1) {:.6e}, even (mu = 1/2) {:.6e}, |CM| <= {} (mu = 0.6) {:.6e} over {} members",
        report.general.floor, report.even.floor, report.cm_bound, report.balanced.floor, report.balanced.members
    ));
    let mut results = Map::new();
    results.insert("family".into(), to_value(&report));
    if let Some(s) = &cfg.system {
        let spec = CouplingSpec::system(s.a.clone(), s.m.clone())?;
        let r = system_floor_sweep(&spec, s.samples, s.lmax, s.max_lambda, cfg.family.seed)?;
        ctx.say(format!("system functional floor {:.6e} over {} samples", r.floor, r.samples));
        results.insert("system".into(), to_value(&r));
    }
    let summary = Summary { config_echo: &cfg, results: Value::Object(results), flags: Vec::new(), versions: versions() };
    write_all(&ctx.out_dir(), &[(cfg.output.as_str(), to_json(&summary)?)])?;
    Ok(0)
}
