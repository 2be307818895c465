//! `ringspectra` command line.
//!
//! Exit codes: 0 when every comparison matches or is unsupported, 1 on any
//! mismatch, 2 on invalid input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringspectra_core::formulas::{classify_with, Classification};
use ringspectra_core::local::is_local;
use ringspectra_core::{
    parse_ring_spec, ElementId, FactoredPoly, FiniteRing, LocalProfile, OrderingPlan, OrderingTag, ProductMatrix,
    StructureBasis, DEFAULT_ORDER_CAP,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::export::{write_reports_csv, MatrixExport};
use crate::report::{count_checks, verify_instance, PolyRecord, VerifyOptions, SCHEMA};
use crate::sweep::{run_sweep, SweepOutcome, SweepPlan};
use crate::{Error, Result};

pub const MIN_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Dense,
    Lowrank,
    Both,
}

#[derive(Parser, Debug)]
#[command(name = "ringspectra", version, about = "Exact spectra of product matrices over finite commutative rings")]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Largest ring order that may be built.
    #[arg(long, global = true, env = "RINGSPECTRA_CAP", default_value_t = DEFAULT_ORDER_CAP)]
    pub cap: usize,
    /// Largest number of sweep instances.
    #[arg(long, global = true)]
    pub sweep_limit: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include per-phase wall times.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order, locality, radical filtration and structure basis.
    Info { spec: String },
    /// Dump A_u(R).
    Matrix {
        spec: String,
        u: String,
        /// natural, proof, or a named layout (zero_block, unit_pairing, stratum_pairing, j2_block).
        #[arg(long, default_value = "natural")]
        ordering: String,
    },
    /// Exact characteristic polynomial det(A_u - λI).
    Charpoly {
        spec: String,
        u: String,
        #[arg(long, default_value = "natural")]
        ordering: String,
        #[arg(long, value_enum, default_value_t = Method::Lowrank)]
        method: Method,
    },
    /// Case classification and closed-form prediction, without the oracle.
    Predict { spec: String, u: String },
    /// Compare prediction and oracle for one instance or a sweep file.
    Verify {
        spec: Option<String>,
        u: Option<String>,
        #[arg(long)]
        sweep: Option<std::path::PathBuf>,
    },
    /// Run a sweep plan file.
    Sweep { plan: std::path::PathBuf },
}

/// Result of a command: rendered output plus whether a mismatch was seen.
struct Output {
    text: String,
    mismatch: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, mismatch: false }
    }
}

fn json_text<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_text(rows: &[(String, String)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn text_lines(rows: &[(String, String)]) -> String {
    rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

/// Renders a flat key/value record in the configured format.
fn render_record(format: Format, json: &Value, rows: &[(String, String)]) -> Result<String> {
    match format {
        Format::Json => json_text(json),
        Format::Csv => csv_text(rows),
        Format::Text => Ok(text_lines(rows)),
    }
}

fn build_ring(spec: &str, cap: usize) -> Result<FiniteRing> {
    Ok(parse_ring_spec(spec)?.build(cap)?)
}

/// Elements are addressed by label; integers are also read as `n·1`.
pub fn parse_element(ring: &FiniteRing, text: &str) -> Result<ElementId> {
    let t = text.trim();
    if let Some(e) = ring.find_label(t) {
        return Ok(e);
    }
    if let Ok(n) = t.parse::<i64>() {
        return Ok(ring.from_integer(n));
    }
    Err(Error::Input(format!("no element labelled `{t}`")))
}

fn plan_for(ring: &FiniteRing, u: ElementId, ordering: &str) -> Result<OrderingPlan> {
    match ordering {
        "proof" => Ok(OrderingPlan::proof(ring, u)?),
        other => {
            let tag: OrderingTag = other.parse()?;
            Ok(OrderingPlan::make(ring, u, tag)?)
        }
    }
}

fn classification(ring: &FiniteRing, u: ElementId) -> Result<(Classification, Option<LocalProfile>)> {
    if !is_local(ring) {
        return Ok((ringspectra_core::classify(ring, u)?, None));
    }
    let p = LocalProfile::compute(ring)?;
    Ok((classify_with(ring, u, &p)?, Some(p)))
}

fn cmd_info(spec: &str, cfg: &CliConfig) -> Result<Output> {
    let ring = build_ring(spec, cfg.cap)?;
    let mut rows = vec![
        ("spec".to_string(), spec.to_string()),
        ("order".into(), ring.order().to_string()),
        ("characteristic".into(), ring.characteristic().to_string()),
    ];
    let mut j = json!({ "schema": SCHEMA, "spec": spec, "order": ring.order(), "characteristic": ring.characteristic() });
    if !is_local(&ring) {
        rows.push(("local".into(), "not local".into()));
        j["local"] = json!(false);
        return Ok(Output::ok(render_record(cfg.format, &j, &rows)?));
    }
    let p = LocalProfile::compute(&ring)?;
    let sizes = p.stratum_sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    rows.extend([
        ("local".to_string(), "true".to_string()),
        ("p".into(), p.p.to_string()),
        ("r".into(), p.r.to_string()),
        ("q".into(), p.q.to_string()),
        ("n".into(), p.n.to_string()),
        ("nil_index".into(), p.nil_index.to_string()),
        ("maximal_nilpotency".into(), p.is_maximal().to_string()),
        ("radical_squares_to_zero".into(), p.radical_squares_to_zero().to_string()),
        ("stratum_sizes".into(), sizes),
    ]);
    j["local"] = json!(true);
    j["profile"] = json!({
        "p": p.p, "r": p.r, "q": p.q, "n": p.n, "nil_index": p.nil_index,
        "maximal_nilpotency": p.is_maximal(), "radical_squares_to_zero": p.radical_squares_to_zero(),
        "stratum_sizes": p.stratum_sizes,
    });
    if let Ok(b) = StructureBasis::find(&ring, &p) {
        rows.push(("basis_g".into(), ring.label(b.g).to_string()));
        rows.push(("basis_x".into(), ring.label(b.x).to_string()));
        j["structure_basis"] = json!({ "g": ring.label(b.g), "x": ring.label(b.x) });
    }
    let counts = count_checks(&ring, &p);
    for c in &counts {
        rows.push((format!("squares[{}]", c.scope), format!("{} (claimed {})", c.observed, c.claimed)));
    }
    j["square_counts"] = serde_json::to_value(&counts)?;
    Ok(Output::ok(render_record(cfg.format, &j, &rows)?))
}

fn cmd_matrix(spec: &str, u: &str, ordering: &str, cfg: &CliConfig) -> Result<Output> {
    let ring = build_ring(spec, cfg.cap)?;
    let u = parse_element(&ring, u)?;
    let a = ProductMatrix::build(&ring, u, plan_for(&ring, u, ordering)?)?;
    let e = MatrixExport::from_matrix(&ring, spec, &a);
    let text = match cfg.format {
        Format::Json => json_text(&e)?,
        Format::Text => e.to_text()?,
        Format::Csv => {
            let mut buf = Vec::new();
            e.write_csv(&mut buf)?;
            String::from_utf8_lossy(&buf).into_owned()
        }
    };
    Ok(Output::ok(text))
}

fn cmd_charpoly(spec: &str, u: &str, ordering: &str, method: Method, cfg: &CliConfig) -> Result<Output> {
    let ring = build_ring(spec, cfg.cap)?;
    let u = parse_element(&ring, u)?;
    let a = ProductMatrix::build(&ring, u, plan_for(&ring, u, ordering)?)?;
    let poly = match method {
        Method::Dense => a.charpoly_dense()?,
        Method::Lowrank => a.charpoly_lowrank()?,
        Method::Both => {
            let (d, l) = (a.charpoly_dense()?, a.charpoly_lowrank()?);
            if d != l {
                let text = format!("dense: {d}\nlowrank: {l}\nmethods disagree\n");
                return Ok(Output { text, mismatch: true });
            }
            d
        }
    };
    let (class, _) = classification(&ring, u)?;
    let predicted = class.predict()?;
    let matched = predicted.as_ref().map(|f| f.expand() == poly);
    let bound = a.row_sums().into_iter().max().unwrap_or(0) as u64;
    let factored = match (&predicted, matched) {
        (Some(f), Some(true)) => f.to_string(),
        _ => FactoredPoly::split_integer_roots(&poly, bound).to_string(),
    };
    let mut rows = vec![
        ("spec".to_string(), spec.to_string()),
        ("u".into(), ring.label(u).to_string()),
        ("case".into(), class.tag.to_string()),
        ("factored".into(), factored.clone()),
        ("expanded".into(), poly.to_string()),
    ];
    if let Some(f) = &predicted {
        rows.push(("predicted".into(), f.to_string()));
        rows.push(("match".into(), matched.unwrap_or(false).to_string()));
    }
    let j = json!({
        "schema": SCHEMA, "spec": spec, "u": ring.label(u), "case": class.tag.to_string(),
        "ordering": a.ordering().tag().to_string(),
        "method": format!("{method:?}").to_lowercase(),
        "factored": factored, "expanded": poly.to_string(), "coefficients": poly.to_decimal_strings(),
        "predicted": predicted.as_ref().map(PolyRecord::from_factored), "match": matched,
    });
    Ok(Output::ok(render_record(cfg.format, &j, &rows)?))
}

fn cmd_predict(spec: &str, u: &str, cfg: &CliConfig) -> Result<Output> {
    let ring = build_ring(spec, cfg.cap)?;
    let u = parse_element(&ring, u)?;
    let (class, _) = classification(&ring, u)?;
    let predicted = class.predict()?;
    let mut rows = vec![
        ("spec".to_string(), spec.to_string()),
        ("u".into(), ring.label(u).to_string()),
        ("case".into(), class.tag.to_string()),
        ("q".into(), class.q.to_string()),
        ("n".into(), class.n.to_string()),
    ];
    if let Some(k) = class.k {
        rows.push(("k".into(), k.to_string()));
    }
    rows.push(("square".into(), class.is_square.to_string()));
    if class.scrutiny {
        rows.push(("scrutiny".into(), "true".into()));
    }
    match &predicted {
        Some(f) => {
            rows.push(("predicted".into(), f.to_string()));
            rows.push(("expanded".into(), f.expand().to_string()));
        }
        None => rows.push(("predicted".into(), class.tag.to_string())),
    }
    let j = json!({
        "schema": SCHEMA, "spec": spec, "u": ring.label(u), "case": class.tag.to_string(),
        "q": class.q, "n": class.n, "k": class.k, "square": class.is_square, "scrutiny": class.scrutiny,
        "predicted": predicted.as_ref().map(PolyRecord::from_factored),
    });
    Ok(Output::ok(render_record(cfg.format, &j, &rows)?))
}

fn opts(cfg: &CliConfig) -> VerifyOptions {
    VerifyOptions { timings: cfg.timings, ..VerifyOptions::default() }
}

fn cmd_verify_one(spec: &str, u: &str, cfg: &CliConfig) -> Result<Output> {
    let ring = build_ring(spec, cfg.cap)?;
    let u = parse_element(&ring, u)?;
    let rep = verify_instance(&ring, spec, u, &opts(cfg))?;
    let mismatch = rep.matched == Some(false);
    let text = match cfg.format {
        Format::Json => json_text(&rep)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_reports_csv(&mut buf, [&rep])?;
            String::from_utf8_lossy(&buf).into_owned()
        }
        Format::Text => {
            let mut rows = vec![
                ("spec".to_string(), rep.ring_spec.clone()),
                ("u".into(), rep.u_label.clone()),
                ("case".into(), rep.case.clone()),
                ("oracle".into(), rep.oracle.factored.clone()),
            ];
            if let Some(p) = &rep.predicted {
                rows.push(("predicted".into(), p.factored.clone()));
            }
            let m = rep.matched.map_or("n/a".to_string(), |m| m.to_string());
            rows.push(("match".into(), m));
            for (k, v) in &rep.aux_checks {
                rows.push((format!("check[{k}]"), if *v { "pass" } else { "fail" }.to_string()));
            }
            text_lines(&rows)
        }
    };
    Ok(Output { text, mismatch })
}

fn render_sweep(out: &SweepOutcome, format: Format) -> Result<String> {
    match format {
        Format::Json => json_text(out),
        Format::Csv => {
            let mut buf = Vec::new();
            write_reports_csv(&mut buf, &out.reports)?;
            Ok(String::from_utf8_lossy(&buf).into_owned())
        }
        Format::Text => {
            let mut s = format!("{:<28} {:>7} {:>7} {:>9} {:>11}\n", "case", "total", "match", "mismatch", "unsupported");
            for (case, c) in &out.per_case {
                s += &format!("{case:<28} {:>7} {:>7} {:>9} {:>11}\n", c.total, c.matched, c.mismatched, c.unsupported);
            }
            let t = &out.totals;
            s += &format!("{:<28} {:>7} {:>7} {:>9} {:>11}\n", "total", t.total, t.matched, t.mismatched, t.unsupported);
            for r in out.reports.iter().filter(|r| r.matched == Some(false)) {
                s += &format!("mismatch {} u={} {}\n", r.ring_spec, r.u_label, r.case);
            }
            if out.aux_failures > 0 {
                s += &format!("auxiliary check failures: {}\n", out.aux_failures);
            }
            Ok(s)
        }
    }
}

fn cmd_sweep(path: &std::path::Path, cfg: &CliConfig) -> Result<Output> {
    let text = fs::read_to_string(path)?;
    let mut plan: SweepPlan = serde_json::from_str(&text).map_err(|e| Error::Input(format!("sweep plan: {e}")))?;
    if let Some(l) = cfg.sweep_limit {
        plan.limit = Some(plan.limit.map_or(l, |p| p.min(l)));
    }
    let out = run_sweep(&plan, cfg.cap, cfg.threads, &opts(cfg))?;
    Ok(Output { text: render_sweep(&out, cfg.format)?, mismatch: out.has_mismatch() })
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let cfg = &cli.config;
    if cfg.cap < MIN_CAP {
        return Err(Error::Input(format!("--cap must be at least {MIN_CAP}")));
    }
    match &cli.command {
        Command::Info { spec } => cmd_info(spec, cfg),
        Command::Matrix { spec, u, ordering } => cmd_matrix(spec, u, ordering, cfg),
        Command::Charpoly { spec, u, ordering, method } => cmd_charpoly(spec, u, ordering, *method, cfg),
        Command::Predict { spec, u } => cmd_predict(spec, u, cfg),
        Command::Verify { sweep: Some(path), .. } => cmd_sweep(path, cfg),
        Command::Verify { spec: Some(spec), u: Some(u), sweep: None } => cmd_verify_one(spec, u, cfg),
        Command::Verify { .. } => Err(Error::Input("verify needs SPEC and U, or --sweep FILE".into())),
        Command::Sweep { plan } => cmd_sweep(plan, cfg),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let out = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.config.output {
        Some(path) => fs::write(path, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.mismatch {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
