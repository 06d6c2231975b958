//! Command-line front end and verification scenarios.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 exploration budget
//! exceeded, 3 a scenario assertion failed.

pub mod args;
pub mod report;
pub mod scenarios;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use serde_json::json;
use thiserror::Error;

use crate::asymptotics::{
    alpha_estimate, eccentricity_diameter, ratio_profile, smoothing_convergence, word_quotient_convergence,
    AsymptoticsError, ProfileParams,
};
use crate::geometry::{
    chain_infimum, geodesicity_scan, homogeneity_scan, FiniteMetricSpace, GeometryError, IsometryAction, SampleParams,
};
use crate::groups::{GroupDescriptor, GroupError};
use crate::lengths::{Budget, LengthError, LengthFunction, DEFAULT_MAX_NODES};
use args::{Cli, Command, Common, Format};
use report::{annulus_rows, AlphaReport, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

pub const BUDGET_ENV: &str = "COARSE_BUDGET";

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Length(#[from] LengthError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn is_budget(&self) -> bool {
        let budget = |e: &LengthError| {
            matches!(e, LengthError::BudgetExceeded { .. } | LengthError::TooManyGenerators { .. })
        };
        match self {
            CliError::Length(e) | CliError::Asymptotics(AsymptoticsError::Length(e)) => budget(e),
            _ => false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_budget() {
            EXIT_BUDGET
        } else {
            EXIT_USAGE
        }
    }
}

/// Node cap from `--budget`, else `COARSE_BUDGET`, else the default.
pub fn resolve_budget(flag: Option<usize>) -> Result<Budget, CliError> {
    let nodes = match flag {
        Some(n) => n,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a node count")))?,
            Err(_) => DEFAULT_MAX_NODES,
        },
    };
    if nodes == 0 {
        return Err(CliError::Usage("budget must be positive".into()));
    }
    Ok(Budget::with_nodes(nodes))
}

fn group(s: &str) -> Result<GroupDescriptor, CliError> {
    Ok(s.parse::<GroupDescriptor>()?)
}

fn json_line(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn csv_rows<R: serde::Serialize>(out: &mut dyn Write, rows: impl IntoIterator<Item = R>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes JSON objects as CSV rows; columns follow the first object's keys.
fn csv_values(out: &mut dyn Write, rows: &[serde_json::Value]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let keys: Vec<String> = match rows.first() {
        Some(serde_json::Value::Object(m)) => m.keys().cloned().collect(),
        _ => Vec::new(),
    };
    w.write_record(&keys)?;
    for r in rows {
        let cells = keys.iter().map(|k| match &r[k] {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Null => String::new(),
            v => v.to_string(),
        });
        w.write_record(cells)?;
    }
    w.flush()?;
    Ok(())
}

fn load_space(spec: &str) -> Result<FiniteMetricSpace, CliError> {
    if Path::new(spec).is_file() {
        Ok(FiniteMetricSpace::from_csv(std::fs::File::open(spec)?)?)
    } else {
        Ok(FiniteMetricSpace::from_spec(spec)?)
    }
}

fn load_action(space: &FiniteMetricSpace, spec: &str) -> Result<IsometryAction, CliError> {
    if Path::new(spec).is_file() {
        Ok(IsometryAction::from_csv(space, std::fs::File::open(spec)?)?)
    } else {
        Ok(IsometryAction::from_spec(space, spec)?)
    }
}

#[derive(serde::Serialize)]
struct ElementRow {
    element: String,
    length: f64,
}

fn profile_params(common: &Common, rmax: f64, width: f64, rmin: f64) -> Result<ProfileParams, CliError> {
    Ok(ProfileParams {
        r_max: rmax,
        width,
        r_min: rmin,
        budget: resolve_budget(common.budget)?,
    })
}

/// Runs one parsed command, writing its report to `out`; returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Ball(a) => {
            let g = group(&a.group)?;
            let budget = resolve_budget(a.common.budget)?;
            let l = LengthFunction::parse(g, &a.length, budget)?;
            let ball = l.enumerate_ball(a.radius, budget)?;
            let rows = ball.entries().iter().map(|(x, v)| ElementRow {
                element: x.to_string(),
                length: *v,
            });
            match a.common.out.unwrap_or(Format::Csv) {
                Format::Csv => csv_rows(out, rows)?,
                Format::Json => json_line(
                    out,
                    &json!({
                        "group": g.to_string(),
                        "length": l.label(),
                        "radius": a.radius,
                        "count": ball.len(),
                        "entries": rows.collect::<Vec<_>>(),
                    }),
                )?,
            }
        }
        Command::Length(a) => {
            let g = group(&a.group)?;
            let budget = resolve_budget(a.common.budget)?;
            let l = LengthFunction::parse(g, &a.length, budget)?;
            let xs = a.elements.iter().map(|e| g.parse_element(e)).collect::<Result<Vec<_>, _>>()?;
            let values = l.evaluate_many(&xs, budget)?;
            let rows = xs.iter().zip(values).map(|(x, v)| ElementRow {
                element: x.to_string(),
                length: v,
            });
            match a.common.out.unwrap_or(Format::Csv) {
                Format::Csv => csv_rows(out, rows)?,
                Format::Json => json_line(out, &rows.collect::<Vec<_>>())?,
            }
        }
        Command::Ratio(a) => {
            let g = group(&a.group)?;
            let params = profile_params(&a.common, a.rmax, a.width, a.rmin)?;
            let l1 = LengthFunction::parse(g, &a.l1, params.budget)?;
            let l2 = LengthFunction::parse(g, &a.l2, params.budget)?;
            let profile = ratio_profile(&l1, &l2, params)?;
            match a.common.out.unwrap_or(Format::Csv) {
                Format::Csv => csv_rows(out, annulus_rows(&profile))?,
                Format::Json => json_line(
                    out,
                    &json!({
                        "group": g.to_string(),
                        "l1": profile.l1,
                        "l2": profile.l2,
                        "annuli": annulus_rows(&profile),
                        "skipped": profile.skipped(),
                        "zero_denominator": profile.zero_denominator,
                    }),
                )?,
            }
        }
        Command::Alpha(a) => {
            let g = group(&a.group)?;
            let params = profile_params(&a.common, a.rmax, a.width, a.rmin)?;
            let l1 = LengthFunction::parse(g, &a.l1, params.budget)?;
            let l2 = LengthFunction::parse(g, &a.l2, params.budget)?;
            let profile = ratio_profile(&l1, &l2, params)?;
            let est = alpha_estimate(&profile, a.window)?;
            match a.common.out.unwrap_or(Format::Json) {
                Format::Csv => csv_rows(out, annulus_rows(&profile))?,
                Format::Json => json_line(out, &AlphaReport::new(&g.to_string(), &profile, &est))?,
            }
        }
        Command::Diameter(a) => {
            let g = group(&a.group)?;
            let params = profile_params(&a.common, a.rmax, a.width, 1.0)?;
            let family = a
                .lengths
                .iter()
                .map(|s| LengthFunction::parse(g, s, params.budget))
                .collect::<Result<Vec<_>, _>>()?;
            let d = eccentricity_diameter(&family, params, a.window)?;
            let value = json!({
                "group": g.to_string(),
                "labels": d.labels,
                "matrix": d.matrix,
                "diameter": d.diameter,
                "r_max": a.rmax,
                "heuristic": true,
            });
            match a.common.out.unwrap_or(Format::Json) {
                Format::Json => json_line(out, &value)?,
                Format::Csv => {
                    let rows = d.pairs.iter().map(|((i, j), e)| (d.labels[*i].clone(), d.labels[*j].clone(), e.alpha_hat));
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["l1", "l2", "alpha_hat"])?;
                    for r in rows {
                        w.serialize(r)?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::SmoothConv(a) => {
            let g = group(&a.group)?;
            let budget = resolve_budget(a.common.budget)?;
            let l = LengthFunction::parse(g, &a.length, budget)?;
            let rows = smoothing_convergence(&l, &a.radii, a.radius, budget)?;
            let rows: Vec<_> = rows.iter().map(scenarios::smoothing_row_json).collect();
            match a.common.out.unwrap_or(Format::Json) {
                Format::Json => json_line(out, &json!({"group": g.to_string(), "length": l.label(), "ball_radius": a.radius, "rows": rows, "heuristic": true}))?,
                Format::Csv => csv_values(out, &rows)?,
            }
        }
        Command::WordConv(a) => {
            let g = group(&a.group)?;
            let params = profile_params(&a.common, a.rmax, 1.0, 1.0)?;
            let l = LengthFunction::parse(g, &a.length, params.budget)?;
            let rows = word_quotient_convergence(&l, &a.radii, params, a.window)?;
            let rows: Vec<_> = rows.iter().map(scenarios::word_row_json).collect();
            match a.common.out.unwrap_or(Format::Json) {
                Format::Json => json_line(out, &json!({"group": g.to_string(), "length": l.label(), "r_max": a.rmax, "rows": rows, "heuristic": true}))?,
                Format::Csv => csv_values(out, &rows)?,
            }
        }
        Command::Chains(a) => {
            let space = load_space(&a.space)?;
            if let (Some(from), Some(to)) = (&a.from, &a.to) {
                let (x, y) = (space.find(from)?, space.find(to)?);
                let rows: Vec<_> = a
                    .radii
                    .iter()
                    .map(|&r| {
                        let c = chain_infimum(&space, x, y, r)?;
                        Ok(json!({
                            "step_bound": r,
                            "value": c.value,
                            "distance": space.d(x, y),
                            "witness": c.witness.iter().map(|&i| space.label(i)).collect::<Vec<_>>(),
                        }))
                    })
                    .collect::<Result<_, CliError>>()?;
                json_line(out, &json!({"space": a.space, "from": from, "to": to, "chains": rows}))?;
            } else {
                let rows = geodesicity_scan(&space, &a.radii, SampleParams { count: a.sources, seed: a.seed })?;
                let rows: Vec<_> = rows.iter().map(|r| scenarios::geodesicity_row_json(&space, r)).collect();
                match a.out.unwrap_or(Format::Json) {
                    Format::Json => json_line(
                        out,
                        &json!({"space": a.space, "sources": a.sources, "seed": a.seed, "version": VERSION, "rows": rows}),
                    )?,
                    Format::Csv => csv_values(out, &rows)?,
                }
            }
        }
        Command::Homog(a) => {
            let space = load_space(&a.space)?;
            let action = load_action(&space, &a.action)?;
            let r = homogeneity_scan(&space, &action, a.samples, a.margin, a.seed)?;
            let value = scenarios::homogeneity_json(&space, &r, true);
            match a.out.unwrap_or(Format::Json) {
                Format::Json => json_line(out, &json!({"space": a.space, "action": a.action, "version": VERSION, "scan": value}))?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(out);
                    w.write_record(["x", "y", "z", "u", "gap", "hausdorff"])?;
                    for p in &r.scatter {
                        w.write_record([
                            space.label(p.x).to_string(),
                            space.label(p.y).to_string(),
                            space.label(p.z).to_string(),
                            space.label(p.u).to_string(),
                            p.gap.to_string(),
                            p.hausdorff.to_string(),
                        ])?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Verify(a) => {
            if a.scenario == "list" {
                for s in scenarios::SCENARIOS {
                    writeln!(out, "{:<18} {}", s.id, s.summary)?;
                }
                return Ok(EXIT_OK);
            }
            let options = scenarios::ScenarioOptions {
                group: a.group,
                gens: a.gens,
                r_max: a.rmax,
                window: a.window,
                margin: a.margin,
                seed: a.seed,
                budget: resolve_budget(a.common.budget)?,
            };
            let report = scenarios::run(&a.scenario, &options)?;
            match a.common.out.unwrap_or(Format::Json) {
                Format::Json => write!(out, "{}", report.to_json())?,
                Format::Csv => csv_rows(out, &report.assertions)?,
            }
            return Ok(if report.passed { EXIT_OK } else { EXIT_ASSERTION });
        }
    }
    Ok(EXIT_OK)
}

/// Entry point used by the binary: parses arguments, runs, reports errors
/// to stderr and returns the process exit code.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
