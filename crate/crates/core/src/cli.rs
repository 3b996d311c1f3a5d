//! Problem files and machine-readable reports for the command-line front end.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::Rational;
use crate::cad::{format_signs, Cad};
use crate::error::Error;
use crate::exec::Exec;
use crate::oracle::{ball_decomposition, chi_direct, chi_on_sphere, Combine, OracleResult};
use crate::pencil::{form_from_poly, QuadraticForm};
use crate::pipeline::{
    chi_general, chi_homogeneous, chi_union, homogenizing_var, omega_decomposition, EpsMode, GeneralCaseConfig,
    GeneralReport, HomogeneousReport, OmegaChiReport, Shortcut, UnionOptions,
};
use crate::poly::{parse_poly, MultiPoly, PolyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    General,
    Homogeneous,
    Union,
    Oracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Homogeneous => "homogeneous",
            Mode::Union => "union",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    /// Fixed `ε` as a rational string; disables stabilization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_stabilize: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
}

impl ProblemOptions {
    fn is_default(&self) -> bool {
        *self == ProblemOptions::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub vars: Vec<String>,
    pub mode: Mode,
    /// Each polynomial is asserted `≤ 0`.
    pub inequalities: Vec<String>,
    #[serde(default, skip_serializing_if = "ProblemOptions::is_default")]
    pub options: ProblemOptions,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] Error),
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    /// 2 for resource and convergence failures, 1 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ResourceLimit { .. } | Error::NoStabilization { .. } | Error::OddHomogeneousChi { .. }) => 2,
            _ => 1,
        }
    }
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, Error> {
    s.trim().parse::<Rational>().map_err(|_| Error::Invalid(format!("{what}: not a rational number: {s:?}")))
}

impl ProblemFile {
    pub fn var_list(&self) -> Arc<[String]> {
        self.vars.iter().cloned().collect()
    }

    /// Parses the inequalities and checks them against `mode`.
    pub fn polys_for(&self, mode: Mode) -> Result<Vec<MultiPoly>, Error> {
        if self.vars.is_empty() {
            return Err(Error::Invalid("no variables".into()));
        }
        for (i, v) in self.vars.iter().enumerate() {
            if self.vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v}")));
            }
        }
        let vars = self.var_list();
        let mut out = Vec::with_capacity(self.inequalities.len());
        for src in &self.inequalities {
            let p = parse_poly(src, &vars)?;
            if let Some(d) = p.total_degree() {
                if d > 2 {
                    return Err(PolyError::DegreeTooHigh { degree: d, max: 2 }.into());
                }
            }
            if matches!(mode, Mode::Homogeneous | Mode::Union) && (p.is_zero() || !p.is_homogeneous(2)) {
                return Err(Error::NotHomogeneousQuadratic { poly: src.clone() });
            }
            out.push(p);
        }
        if out.is_empty() && mode != Mode::General {
            return Err(Error::Invalid(format!("{} mode needs at least one inequality", mode.name())));
        }
        if let Some(e) = &self.options.eps {
            parse_rational(e, "eps")?;
        }
        if let Some(e) = &self.options.initial_eps {
            parse_rational(e, "initial_eps")?;
        }
        Ok(out)
    }
}

/// Parses and validates a problem file.
pub fn parse_input(text: &str) -> Result<ProblemFile, CliError> {
    let p: ProblemFile = serde_json::from_str(text)?;
    p.polys_for(p.mode)?;
    Ok(p)
}

/// Canonical JSON text of a problem file.
pub fn emit(p: &ProblemFile) -> String {
    serde_json::to_string_pretty(p).expect("serializable")
}

/// Command-line overrides of a problem file's settings.
#[derive(Debug, Clone, Default)]
pub struct RunSettings {
    pub mode: Option<Mode>,
    pub eps_mode: Option<EpsMode>,
    pub max_cells: Option<usize>,
    pub oracle: bool,
    pub dump_cells: bool,
    pub exec: Exec,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub chi: i64,
    pub report: Value,
    /// 0, or 3 when the oracle disagrees.
    pub exit_code: i32,
    /// Cell dump when requested.
    pub dump: Option<String>,
}

fn omega_json(r: &OmegaChiReport) -> Value {
    json!({
        "charpoly": r.charpoly.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "omega": r.entries.iter().map(|e| json!({
            "signs": format_signs(&e.signs),
            "n": e.n,
            "chi_bm": e.chi_bm,
            "contribution": e.contribution,
        })).collect::<Vec<_>>(),
        "chi": r.chi(),
    })
}

fn homogeneous_json(h: &HomogeneousReport, vars: &Arc<[String]>) -> Value {
    json!({
        "forms": h.forms.iter().map(|f| f.to_poly(vars.clone()).to_string()).collect::<Vec<_>>(),
        "subsets": h.subsets.iter().map(|s| {
            let mut v = omega_json(&s.union);
            v["subset"] = json!(s.subset.iter().map(|i| i + 1).collect::<Vec<_>>());
            v
        }).collect::<Vec<_>>(),
    })
}

fn oracle_json(o: &OracleResult, chi: Option<i64>) -> Value {
    let mut v = json!({
        "chi": o.chi,
        "radius_used": o.radius_used.to_string(),
        "cells_in_set": o.cells_in_set,
        "trail": o.trail.iter().map(|(r, c)| json!({"radius": r.to_string(), "chi": c})).collect::<Vec<_>>(),
    });
    if let Some(c) = chi {
        v["agrees"] = json!(o.chi == c);
    }
    v
}

fn dump_section(out: &mut String, label: &str, cad: &Cad) {
    out.push_str("# ");
    out.push_str(label);
    out.push('\n');
    out.push_str(&cad.dump());
}

fn dump_homogeneous(h: &HomogeneousReport, opts: &UnionOptions) -> Result<String, Error> {
    let mut out = String::new();
    for s in &h.subsets {
        let forms: Vec<QuadraticForm> = s.subset.iter().map(|&i| h.forms[i].clone()).collect();
        let (_, cad) = omega_decomposition(&forms, opts)?;
        let label: Vec<String> = s.subset.iter().map(|i| (i + 1).to_string()).collect();
        dump_section(&mut out, &format!("subset {}", label.join(",")), &cad);
    }
    Ok(out)
}

/// Runs a validated problem.
pub fn run(p: &ProblemFile, settings: &RunSettings) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let mode = settings.mode.unwrap_or(p.mode);
    let polys = p.polys_for(mode)?;
    let vars = p.var_list();

    let mut cfg = GeneralCaseConfig::default().with_exec(settings.exec);
    if let Some(n) = settings.max_cells.or(p.options.max_cells) {
        cfg.union.cad.max_cells = n;
        cfg.oracle.cad.max_cells = n;
    }
    if let Some(e) = &p.options.initial_eps {
        cfg.initial_eps = parse_rational(e, "initial_eps")?;
    }
    cfg.eps_mode = match (&settings.eps_mode, &p.options.eps, p.options.eps_stabilize) {
        (Some(m), _, _) => m.clone(),
        (None, _, Some(true)) => EpsMode::SubstituteStabilize,
        (None, Some(e), _) => EpsMode::Fixed(parse_rational(e, "eps")?),
        (None, None, _) => EpsMode::SubstituteStabilize,
    };
    let oracle = settings.oracle || p.options.oracle.unwrap_or(false);
    cfg.oracle_check = oracle && mode == Mode::General;

    let mut exit_code = 0;
    let mut dump = settings.dump_cells.then(String::new);
    let (chi, cells, mut details) = match mode {
        Mode::Union => {
            let forms = polys.iter().map(form_from_poly).collect::<Result<Vec<_>, _>>()?;
            let r = chi_union(&forms, &cfg.union)?;
            if let Some(d) = dump.as_mut() {
                dump_section(d, "union", &omega_decomposition(&forms, &cfg.union)?.1);
            }
            (r.chi(), r.cells, omega_json(&r))
        }
        Mode::Homogeneous => {
            let forms = polys.iter().map(form_from_poly).collect::<Result<Vec<_>, _>>()?;
            let h = chi_homogeneous(&forms, &cfg.union)?;
            if let Some(d) = dump.as_mut() {
                d.push_str(&dump_homogeneous(&h, &cfg.union)?);
            }
            (h.chi, h.cells(), homogeneous_json(&h, &vars))
        }
        Mode::General => {
            let r = chi_general(&polys, &cfg)?;
            if let (Some(d), Some(h)) = (dump.as_mut(), &r.homogeneous) {
                d.push_str(&dump_homogeneous(h, &cfg.union)?);
            }
            if r.oracle_agrees() == Some(false) {
                exit_code = 3;
            }
            (r.chi, r.cells(), general_json(&r, &vars))
        }
        Mode::Oracle => {
            let o = chi_direct(&polys, &cfg.oracle)?;
            if let Some(d) = dump.as_mut() {
                dump_section(d, "ball", &ball_decomposition(&polys, &o.radius_used, &cfg.oracle.cad)?);
            }
            (o.chi, o.cells_in_set, json!({ "oracle": oracle_json(&o, None) }))
        }
    };
    if oracle && matches!(mode, Mode::Union | Mode::Homogeneous) {
        let combine = if mode == Mode::Union { Combine::Union } else { Combine::Intersection };
        let direct = chi_on_sphere(&polys, combine, &cfg.union.cad)?;
        details["oracle"] = json!({ "chi": direct, "agrees": direct == chi });
        if direct != chi {
            exit_code = 3;
        }
    }
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let report = json!({
        "chi": chi,
        "mode": mode.name(),
        "details": details,
        "stats": { "cells": cells, "elapsed_ms": elapsed_ms },
    });
    Ok(RunOutput { chi, report, exit_code, dump })
}

fn general_json(r: &GeneralReport, vars: &Arc<[String]>) -> Value {
    let hvars: Arc<[String]> = std::iter::once(homogenizing_var(vars)).chain(vars.iter().cloned()).collect();
    let shortcut = r.shortcut.as_ref().map(|s| match s {
        Shortcut::WholeSpace => "whole_space",
        Shortcut::Empty => "empty",
    });
    json!({
        "constraints": r.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "shortcut": shortcut,
        "eps_trail": r.eps_trail.iter().map(|s| json!({
            "eps": s.eps.to_string(),
            "chi_homogeneous": s.chi_homogeneous,
        })).collect::<Vec<_>>(),
        "homogeneous": r.homogeneous.as_ref().map(|h| homogeneous_json(h, &hvars)),
        "oracle": r.oracle.as_ref().map(|o| oracle_json(o, Some(r.chi))),
    })
}

/// The report text with `elapsed_ms` zeroed, for determinism checks.
pub fn normalized_report(v: &Value) -> String {
    let mut v = v.clone();
    v["stats"]["elapsed_ms"] = json!(0);
    serde_json::to_string_pretty(&v).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONES: &str = r#"{"vars":["X0","X1","X2"],"mode":"union","inequalities":["X0^2 + X1^2 - X2^2","X0^2 - X1^2 - X2^2"]}"#;

    #[test]
    fn parse_examples() {
        let p = parse_input(r#"{"vars":["X1","X2"],"mode":"general","inequalities":["X1^2 + X2^2 - 1"]}"#).unwrap();
        assert_eq!(p.inequalities.len(), 1);
        assert_eq!(p.vars.len(), 2);
        assert!(parse_input(CONES).is_ok());
        let e = parse_input(r#"{"vars":["X1"],"mode":"general","inequalities":["X1^3 - 1"]}"#).unwrap_err();
        assert!(matches!(e, CliError::Core(Error::Poly(PolyError::DegreeTooHigh { degree: 3, .. }))));
        let e = parse_input(r#"{"vars":["X1","X2"],"mode":"union","inequalities":["X1 - 1"]}"#).unwrap_err();
        assert!(matches!(e, CliError::Core(Error::NotHomogeneousQuadratic { .. })));
        let e = parse_input(r#"{"vars":["X1"],"mode":"general","inequalities":["Y - 1"]}"#).unwrap_err();
        assert!(matches!(e, CliError::Core(Error::Poly(PolyError::UnknownVariable { .. }))));
        assert_eq!(e.exit_code(), 1);
        assert_eq!(parse_input("{").unwrap_err().exit_code(), 1);
    }

    #[test]
    fn round_trip() {
        let mut p = parse_input(CONES).unwrap();
        p.options.eps = Some("1/8".into());
        assert_eq!(parse_input(&emit(&p)).unwrap(), p);
    }

    #[test]
    fn cones_report() {
        let out = run(&parse_input(CONES).unwrap(), &RunSettings::default()).unwrap();
        assert_eq!(out.chi, 0);
        let omega = out.report["details"]["omega"].as_array().unwrap();
        let mut rows: Vec<(u64, i64)> =
            omega.iter().map(|e| (e["n"].as_u64().unwrap(), e["chi_bm"].as_i64().unwrap())).collect();
        rows.sort();
        assert_eq!(rows, vec![(1, 0), (1, 1), (2, 0)]);
    }

    #[test]
    fn general_reports() {
        let run_src = |s: &str| run(&parse_input(s).unwrap(), &RunSettings { oracle: true, ..Default::default() });
        let out = run_src(r#"{"vars":["X1","X2"],"mode":"general","inequalities":["X1^2 + X2^2 - 1"]}"#).unwrap();
        assert_eq!(out.chi, 1);
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.report["details"]["oracle"]["agrees"], json!(true));
        let out = run_src(r#"{"vars":["X1","X2"],"mode":"general","inequalities":["X1^2 + X2^2 + 1"]}"#).unwrap();
        assert_eq!(out.chi, 0);
    }
}
