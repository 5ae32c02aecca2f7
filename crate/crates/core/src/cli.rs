//! Command-line front end: run specifications, versioned reports and the
//! `optimize`, `asymptotics`, `simulate` and `bound` commands.
//!
//! A [`RunSpec`] is assembled from three layers, later ones winning: an
//! optional TOML file (`--config`), `OPTSCHWARZ_*` environment variables and
//! command-line flags. Nested policy keys use `__` in variable names, e.g.
//! `OPTSCHWARZ_POLICY__MULTISTART=4`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    limiting_bound, sweep, sweep_exponents, AsymptoticModel, AsymptoticVariant, ParameterRule, SweepExponents,
    SweepPoint,
};
use crate::closed::ConvergenceFactor;
use crate::config::{OuterBc, ParamVariant, ProblemConfig, TransmissionParams};
use crate::error::{Error, Result};
use crate::optimizer::{log_grid, optimize, OptimizationResult};
use crate::search::SearchPolicy;
use crate::simulator::{discretize, modewise_rates, run_osm, ModeRate, SimulatorReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENV_PREFIX: &str = "OPTSCHWARZ_";

/// Keys whose flag or environment values are comma-separated lists.
const LIST_KEYS: [&str; 3] = ["deltas", "modes", "params"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    #[default]
    Optimize,
    Asymptotics,
    Simulate,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterKind {
    #[default]
    Robin,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

/// Everything a run needs; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub command: Command,
    pub subdomains: usize,
    pub sigma: f64,
    pub epsilon: f64,
    pub width: f64,
    pub height: f64,
    pub outer: OuterKind,
    pub pa: f64,
    pub pb: f64,
    pub variant: ParamVariant,
    pub deltas: Vec<f64>,
    /// Fixed parameters for `simulate` and `bound`; optimized when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    pub h: f64,
    pub iterations: usize,
    pub seed: u64,
    pub modes: Vec<usize>,
    pub k_max: f64,
    pub k_samples: usize,
    pub policy: SearchPolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunSpec {
    fn default() -> Self {
        let cfg = ProblemConfig::default();
        Self {
            command: Command::Optimize,
            subdomains: cfg.subdomains,
            sigma: cfg.sigma,
            epsilon: cfg.epsilon,
            width: cfg.width,
            height: cfg.height,
            outer: OuterKind::Robin,
            pa: 1.0,
            pb: 1.0,
            variant: ParamVariant::Uniform,
            deltas: vec![cfg.overlap],
            params: None,
            h: 0.01,
            iterations: crate::simulator::DEFAULT_ITERATIONS,
            seed: 1,
            modes: Vec::new(),
            k_max: 1e4,
            k_samples: 200,
            policy: SearchPolicy::default(),
            output: None,
            format: Format::Json,
        }
    }
}

impl RunSpec {
    /// Problem configuration at overlap `delta`.
    pub fn problem(&self, delta: f64) -> Result<ProblemConfig> {
        let outer = match self.outer {
            OuterKind::Robin => OuterBc::Robin {
                p_a: self.pa,
                p_b: self.pb,
            },
            OuterKind::Dirichlet => OuterBc::Dirichlet,
        };
        let cfg = ProblemConfig {
            sigma: self.sigma,
            epsilon: self.epsilon,
            width: self.width,
            height: self.height,
            overlap: delta,
            subdomains: self.subdomains,
            outer,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.deltas.is_empty() {
            return Err(Error::InvalidConfig("at least one overlap is required".into()));
        }
        for &d in &self.deltas {
            let cfg = self.problem(d)?;
            if !(d > 0.0) {
                return Err(Error::InvalidConfig(format!("overlap must be positive, got {d}")));
            }
            if let Some(p) = &self.params {
                self.fixed_params(p)?.validate(cfg.subdomains)?;
            }
        }
        self.policy.validate()?;
        if self.command == Command::Bound && !(self.k_max > 0.0 && self.k_samples >= 2) {
            return Err(Error::InvalidConfig("bound needs k_max > 0 and k_samples >= 2".into()));
        }
        Ok(())
    }

    fn fixed_params(&self, values: &[f64]) -> Result<TransmissionParams> {
        let expected = TransmissionParams::dimension(self.variant, self.subdomains);
        if values.len() != expected {
            return Err(Error::InvalidParams(format!(
                "{} parameters given, variant {} with J = {} needs {expected}",
                values.len(),
                self.variant,
                self.subdomains
            )));
        }
        Ok(TransmissionParams::from_vec(self.variant, values))
    }

    /// Layers `file < env < flags` into one spec.
    pub fn layered(
        file: Option<&Path>,
        env: impl IntoIterator<Item = (String, String)>,
        flags: toml::Table,
    ) -> Result<Self> {
        let mut table = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
                text.parse::<toml::Table>()
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
            }
            None => toml::Table::new(),
        };
        for (name, raw) in env {
            let Some(key) = name.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let path: Vec<String> = key.to_ascii_lowercase().split("__").map(str::to_owned).collect();
            insert_path(&mut table, &path, parse_value(path.last().map(String::as_str).unwrap_or(""), &raw)?);
        }
        merge(&mut table, flags);
        let spec: RunSpec = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::InvalidConfig(e.message().to_owned()))?;
        spec.validate()?;
        Ok(spec)
    }
}

fn merge(into: &mut toml::Table, from: toml::Table) {
    for (k, v) in from {
        match (into.get_mut(&k), v) {
            (Some(toml::Value::Table(a)), toml::Value::Table(b)) => merge(a, b),
            (_, v) => {
                into.insert(k, v);
            }
        }
    }
}

fn insert_path(table: &mut toml::Table, path: &[String], value: toml::Value) {
    match path {
        [] => {}
        [last] => {
            table.insert(last.clone(), value);
        }
        [head, rest @ ..] => {
            let entry = table
                .entry(head.clone())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            if !entry.is_table() {
                *entry = toml::Value::Table(toml::Table::new());
            }
            if let toml::Value::Table(t) = entry {
                insert_path(t, rest, value);
            }
        }
    }
}

fn parse_scalar(raw: &str) -> toml::Value {
    let raw = raw.trim();
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()))
}

/// Parses a flag or environment value; list keys take comma-separated items.
pub fn parse_value(key: &str, raw: &str) -> Result<toml::Value> {
    if LIST_KEYS.contains(&key) {
        let items: Vec<toml::Value> = raw
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_scalar)
            .collect();
        if items.iter().any(|v| v.is_str()) {
            return Err(Error::InvalidConfig(format!("`{key}` expects a list of numbers, got `{raw}`")));
        }
        return Ok(toml::Value::Array(items));
    }
    Ok(parse_scalar(raw))
}

/// Column labels of a parameter vector in table order.
pub fn param_labels(variant: ParamVariant, subdomains: usize) -> Vec<String> {
    match variant {
        ParamVariant::Uniform => vec!["p".into()],
        ParamVariant::TwoSided => vec!["p-".into(), "p+".into()],
        ParamVariant::Full => (1..subdomains)
            .flat_map(|j| [format!("p{j}+"), format!("p{}-", j + 1)])
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeRow {
    pub delta: f64,
    pub result: OptimizationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub variant: AsymptoticVariant,
    /// `None` when the constant needs Robin outer data and the run has none.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsSection {
    pub constants: Vec<ConstantEntry>,
    pub model: Option<AsymptoticModel>,
    pub points: Vec<SweepPoint>,
    /// Present when the sweep spans enough overlaps for a fit.
    pub exponents: Option<SweepExponents>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRow {
    pub delta: f64,
    pub params: TransmissionParams,
    pub report: SimulatorReport,
    pub modes: Vec<ModeRate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub delta: f64,
    pub k: f64,
    pub rho: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSection {
    pub params: Vec<(f64, TransmissionParams)>,
    pub rows: Vec<BoundRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Optimize { rows: Vec<OptimizeRow> },
    Asymptotics(AsymptoticsSection),
    Simulate { rows: Vec<SimulateRow> },
    Bound(BoundSection),
}

/// A complete, versioned report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub spec: RunSpec,
    pub results: Results,
}

impl Report {
    pub fn converged(&self) -> bool {
        match &self.results {
            Results::Optimize { rows } => rows.iter().all(|r| r.result.converged),
            Results::Asymptotics(a) => a.points.iter().all(|p| p.optimized.converged),
            Results::Simulate { .. } | Results::Bound(_) => true,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Report =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("report does not parse: {e}")))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "schema version {} is not {SCHEMA_VERSION}",
                report.schema_version
            )));
        }
        Ok(report)
    }

    /// Header and records of the plot series.
    pub fn series(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let labels = param_labels(self.spec.variant, self.spec.subdomains);
        let num = |v: f64| v.to_string();
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        match &self.results {
            Results::Optimize { rows } => {
                let mut header = vec!["delta".to_string(), "rho".to_string()];
                header.extend(labels);
                header.extend(["residual", "evaluations", "converged"].map(String::from));
                let records = rows
                    .iter()
                    .map(|r| {
                        let mut rec = vec![num(r.delta), num(r.result.rho_star)];
                        rec.extend(r.result.params.as_vec().into_iter().map(num));
                        rec.push(opt(r.result.equioscillation_residual));
                        rec.push(r.result.evaluations.to_string());
                        rec.push(r.result.converged.to_string());
                        rec
                    })
                    .collect();
                (header, records)
            }
            Results::Asymptotics(a) => {
                let mut header = vec!["delta".to_string(), "predicted_rho".to_string(), "rho".to_string()];
                header.extend(labels.iter().map(|l| format!("predicted_{l}")));
                header.extend(labels.iter().cloned());
                let width = labels.len();
                let records = a
                    .points
                    .iter()
                    .map(|p| {
                        let mut rec = vec![
                            num(p.overlap),
                            opt(p.predicted.as_ref().map(|q| q.rho)),
                            num(p.optimized.rho_star),
                        ];
                        let predicted = p.predicted.as_ref().map(|q| {
                            if q.params.variant() == self.spec.variant {
                                q.params.as_vec()
                            } else {
                                q.params.to_full(self.spec.subdomains).as_vec()
                            }
                        });
                        for i in 0..width {
                            rec.push(opt(predicted.as_ref().and_then(|v| v.get(i).copied())));
                        }
                        rec.extend(p.optimized.params.as_vec().into_iter().map(num));
                        rec
                    })
                    .collect();
                (header, records)
            }
            Results::Simulate { rows } => {
                let header = ["delta", "iteration", "error"].map(String::from).to_vec();
                let records = rows
                    .iter()
                    .flat_map(|r| {
                        r.report
                            .errors
                            .iter()
                            .enumerate()
                            .map(move |(n, e)| vec![num(r.delta), (n + 1).to_string(), num(*e)])
                    })
                    .collect();
                (header, records)
            }
            Results::Bound(b) => {
                let header = ["delta", "k", "rho", "bound"].map(String::from).to_vec();
                let records = b
                    .rows
                    .iter()
                    .map(|r| vec![num(r.delta), num(r.k), num(r.rho), num(r.bound)])
                    .collect();
                (header, records)
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let (header, records) = self.series();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for r in &records {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    /// Right-aligned text table in the column order of the series.
    pub fn to_table(&self) -> String {
        let (header, records) = self.series();
        let shorten = |s: &str| match s.parse::<f64>() {
            Ok(v) if s.contains('.') || s.contains('e') => {
                if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e6) {
                    format!("{v:.4e}")
                } else {
                    format!("{v:.4}")
                }
            }
            _ => s.to_owned(),
        };
        let cells: Vec<Vec<String>> = records.iter().map(|r| r.iter().map(|c| shorten(c)).collect()).collect();
        let widths: Vec<usize> = (0..header.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].len())
                    .chain([header[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |row: &[String], out: &mut String| {
            let parts: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&header, &mut out);
        let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        for r in &cells {
            line(r, &mut out);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
        }
    }
}

fn optimize_rows(spec: &RunSpec) -> Result<Vec<OptimizeRow>> {
    spec.deltas
        .par_iter()
        .map(|&delta| {
            let cfg = spec.problem(delta)?;
            Ok(OptimizeRow {
                delta,
                result: optimize(&cfg, spec.variant, &spec.policy)?,
            })
        })
        .collect()
}

fn asymptotics(spec: &RunSpec) -> Result<AsymptoticsSection> {
    let cfg = spec.problem(spec.deltas[0])?;
    let constants = AsymptoticVariant::ALL
        .iter()
        .map(|&variant| match variant.constant(&cfg) {
            Ok(value) => Ok(ConstantEntry {
                variant,
                value: Some(value),
            }),
            Err(Error::InvalidConfig(_)) => Ok(ConstantEntry { variant, value: None }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let rule = match spec.variant {
        ParamVariant::Uniform => ParameterRule::OneParam,
        _ => ParameterRule::TwoParam,
    };
    let model = AsymptoticVariant::for_config(&cfg)
        .map(|v| AsymptoticModel::new(&cfg, v, rule))
        .transpose()?;
    let points = sweep(&cfg, spec.variant, &spec.deltas, model.as_ref(), &spec.policy)?;
    let exponents = match sweep_exponents(&points) {
        Ok(e) => Some(e),
        Err(Error::DegenerateFit(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(AsymptoticsSection {
        constants,
        model,
        points,
        exponents,
    })
}

fn params_for(spec: &RunSpec, cfg: &ProblemConfig) -> Result<TransmissionParams> {
    match &spec.params {
        Some(v) => spec.fixed_params(v),
        None => {
            let policy = SearchPolicy {
                k_min: spec.policy.k_min.max(cfg.lowest_frequency()),
                ..spec.policy.clone()
            };
            Ok(optimize(cfg, spec.variant, &policy)?.ensure_converged()?.params)
        }
    }
}

fn simulate(spec: &RunSpec) -> Result<Vec<SimulateRow>> {
    spec.deltas
        .par_iter()
        .map(|&delta| {
            let cfg = spec.problem(delta)?;
            crate::simulator::Mesh::new(&cfg, spec.h)?;
            let params = params_for(spec, &cfg)?;
            let disc = discretize(&cfg, spec.h, &params)?;
            let report = run_osm(&disc, spec.iterations, spec.seed)?;
            let modes = modewise_rates(&disc, &spec.modes, spec.iterations)?;
            Ok(SimulateRow {
                delta,
                params,
                report,
                modes,
            })
        })
        .collect()
}

fn bound(spec: &RunSpec) -> Result<BoundSection> {
    if spec.variant == ParamVariant::Full {
        return Err(Error::InvalidParams(
            "the limiting bound is defined for uniform and two-sided parameters".into(),
        ));
    }
    let lo = spec.policy.k_min.max(1e-2).min(spec.k_max / 10.0);
    let ks = log_grid(lo, spec.k_max, spec.k_samples);
    let sections = spec
        .deltas
        .par_iter()
        .map(|&delta| {
            let cfg = spec.problem(delta)?;
            let params = params_for(spec, &cfg)?;
            let evaluator = ConvergenceFactor::new(&params, &cfg)?;
            let rows = ks
                .iter()
                .map(|&k| {
                    Ok(BoundRow {
                        delta,
                        k,
                        rho: evaluator.rho(k)?,
                        bound: limiting_bound(k, &params, &cfg)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(((delta, params), rows))
        })
        .collect::<Result<Vec<_>>>()?;
    let (params, rows): (Vec<_>, Vec<_>) = sections.into_iter().unzip();
    Ok(BoundSection {
        params,
        rows: rows.into_iter().flatten().collect(),
    })
}

/// Executes the command of a run spec.
pub fn run(spec: &RunSpec) -> Result<Report> {
    spec.validate()?;
    let results = match spec.command {
        Command::Optimize => Results::Optimize {
            rows: optimize_rows(spec)?,
        },
        Command::Asymptotics => Results::Asymptotics(asymptotics(spec)?),
        Command::Simulate => Results::Simulate { rows: simulate(spec)? },
        Command::Bound => Results::Bound(bound(spec)?),
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        spec: spec.clone(),
        results,
    })
}

/// Process exit code for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_)
        | Error::InvalidParams(_)
        | Error::IndexOutOfRange { .. }
        | Error::MeshMismatch { .. } => 2,
        _ => 1,
    }
}

#[derive(Debug, Parser)]
#[command(name = "optschwarz", version, about = "Optimized Robin transmission conditions for Schwarz methods")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Optimize the transmission parameters for each overlap.
    Optimize(Flags),
    /// Compare optimized parameters with their small-overlap predictions.
    Asymptotics(Flags),
    /// Run the finite-difference iteration and measure its contraction.
    Simulate(Flags),
    /// Sample the convergence factor against its many-subdomain bound.
    Bound(Flags),
}

#[derive(Debug, Args)]
pub struct Flags {
    /// TOML file with RunSpec keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of subdomains.
    #[arg(long = "J")]
    pub subdomains: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Subdomain width.
    #[arg(long = "L")]
    pub width: Option<f64>,
    /// Domain height.
    #[arg(long = "Lhat")]
    pub height: Option<f64>,
    /// Outer boundary condition: robin or dirichlet.
    #[arg(long)]
    pub outer: Option<String>,
    #[arg(long)]
    pub pa: Option<f64>,
    #[arg(long)]
    pub pb: Option<f64>,
    /// uniform, two_sided or full.
    #[arg(long)]
    pub variant: Option<String>,
    /// Comma-separated overlaps.
    #[arg(long)]
    pub deltas: Option<String>,
    /// Comma-separated fixed parameters in table order.
    #[arg(long)]
    pub params: Option<String>,
    /// Mesh size.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated sine modes for per-mode rates.
    #[arg(long)]
    pub modes: Option<String>,
    #[arg(long = "k-max")]
    pub k_max: Option<f64>,
    #[arg(long = "k-samples")]
    pub k_samples: Option<usize>,
    #[arg(long)]
    pub multistart: Option<usize>,
    #[arg(long = "max-evaluations")]
    pub max_evaluations: Option<usize>,
    /// Lower end of the frequency range.
    #[arg(long = "k-min")]
    pub k_min: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// json, csv or table.
    #[arg(long)]
    pub format: Option<String>,
}

impl Flags {
    /// The flags that were given, as spec keys.
    pub fn to_table(&self, command: Command) -> Result<toml::Table> {
        let mut t = toml::Table::new();
        let command = toml::Value::try_from(command).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        t.insert("command".into(), command);
        let mut put = |k: &str, v: Option<toml::Value>| {
            if let Some(v) = v {
                t.insert(k.into(), v);
            }
        };
        let float = |v: Option<f64>| v.map(toml::Value::Float);
        let int = |v: Option<usize>| v.map(|v| toml::Value::Integer(v as i64));
        let text = |v: &Option<String>| v.as_ref().map(|s| toml::Value::String(s.to_ascii_lowercase().replace('-', "_")));
        put("subdomains", int(self.subdomains));
        put("sigma", float(self.sigma));
        put("epsilon", float(self.epsilon));
        put("width", float(self.width));
        put("height", float(self.height));
        put("outer", text(&self.outer));
        put("pa", float(self.pa));
        put("pb", float(self.pb));
        put("variant", text(&self.variant));
        put("h", float(self.h));
        put("iterations", int(self.iterations));
        put("seed", self.seed.map(|s| toml::Value::Integer(s as i64)));
        put("k_max", float(self.k_max));
        put("k_samples", int(self.k_samples));
        put("format", text(&self.format));
        put(
            "output",
            self.output.as_ref().map(|p| toml::Value::String(p.display().to_string())),
        );
        for (key, raw) in [("deltas", &self.deltas), ("params", &self.params), ("modes", &self.modes)] {
            if let Some(raw) = raw {
                t.insert(key.into(), parse_value(key, raw)?);
            }
        }
        let mut policy = toml::Table::new();
        if let Some(v) = self.multistart {
            policy.insert("multistart".into(), toml::Value::Integer(v as i64));
        }
        if let Some(v) = self.max_evaluations {
            policy.insert("max_evaluations".into(), toml::Value::Integer(v as i64));
        }
        if let Some(v) = self.k_min {
            policy.insert("k_min".into(), toml::Value::Float(v));
        }
        if !policy.is_empty() {
            t.insert("policy".into(), toml::Value::Table(policy));
        }
        Ok(t)
    }
}

/// Writes the rendered report; simulate JSON output also gets a sibling
/// per-iteration CSV.
pub fn write_report(report: &Report) -> Result<()> {
    let text = report.render(report.spec.format);
    match &report.spec.output {
        Some(path) => {
            let io = |e: std::io::Error| Error::InvalidConfig(format!("cannot write {}: {e}", path.display()));
            std::fs::write(path, text).map_err(io)?;
            if report.spec.command == Command::Simulate && report.spec.format == Format::Json {
                std::fs::write(path.with_extension("csv"), report.to_csv()).map_err(io)?;
            }
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Error::InvalidConfig(format!("cannot write to stdout: {e}")))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Entry point of the binary; returns the process exit code.
pub fn main_from<I, E>(args: I, env: E) -> i32
where
    I: IntoIterator,
    I::Item: Into<OsString> + Clone,
    E: IntoIterator<Item = (String, String)>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, flags) = match &cli.command {
        CliCommand::Optimize(f) => (Command::Optimize, f),
        CliCommand::Asymptotics(f) => (Command::Asymptotics, f),
        CliCommand::Simulate(f) => (Command::Simulate, f),
        CliCommand::Bound(f) => (Command::Bound, f),
    };
    let outcome = flags
        .to_table(command)
        .and_then(|t| RunSpec::layered(flags.config.as_deref(), env, t))
        .and_then(|spec| run(&spec));
    match outcome {
        Ok(report) => {
            if let Err(e) = write_report(&report) {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
            if report.converged() {
                0
            } else {
                eprintln!("error: the optimizer did not converge for every overlap");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
