//! CSV series and JSON summaries, written atomically (temp file + rename).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use liouwave::cmc::SeriesSample;
use liouwave::diagnostics::DiagnosticsRecord;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// 17 significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";")
}

pub const SPHERE_HEADER: &str =
    "t,kinetic,dirichlet,mt_term,energy,means,masses,cm_norms,grad_norm,velocity_norm,concentration,max_2u,flags";

/// One row per record; per-component columns hold `;`-separated values.
pub fn sphere_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::from(SPHERE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            num(r.t),
            num(r.kinetic),
            num(r.dirichlet),
            num(r.mt_term),
            num(r.energy),
            list(&r.means),
            list(&r.masses),
            list(&r.cm_norms),
            num(r.grad_norm),
            num(r.velocity_norm),
            r.concentration.map(num).unwrap_or_default(),
            num(r.max_2u),
            r.flags.join(";"),
        );
    }
    out
}

pub const PLANE_HEADER: &str = "t,y,dy,ddy,kinetic,gradient_sq,cubic,energy,max_abs,flags";

/// `flag` is attached to the last row.
pub fn plane_csv(samples: &[SeriesSample], flag: Option<&str>) -> String {
    let mut out = String::from(PLANE_HEADER);
    out.push('\n');
    for (i, s) in samples.iter().enumerate() {
        let f = if i + 1 == samples.len() { flag.unwrap_or("") } else { "" };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{f}",
            num(s.t),
            num(s.y),
            num(s.dy),
            num(s.ddy),
            num(s.kinetic),
            num(s.gradient_sq),
            num(s.cubic),
            num(s.energy),
            num(s.max_abs),
        );
    }
    out
}

#[derive(Serialize)]
pub struct Summary<'a, C: Serialize> {
    pub config_echo: &'a C,
    pub results: Value,
    pub flags: Vec<String>,
    pub versions: Value,
}

pub fn versions() -> Value {
    serde_json::json!({
        "liouwave": liouwave::VERSION,
        "liouwave-cli": env!("CARGO_PKG_VERSION"),
        "format": 1,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes every `(name, contents)` pair into `dir` via `name.tmp` and rename.
pub fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        let tmp = dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, contents).map_err(|e| CliError::Io(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, &path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        out.push(path);
    }
    Ok(out)
}
