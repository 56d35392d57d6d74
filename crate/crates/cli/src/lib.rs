//! Command-line front end for the `kwidth` library.

pub mod output;
pub mod problem;
pub mod suites;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use kwidth::arith::{PowerProduct, Real};
use kwidth::ball_widths::{lower_bound_plan, phi, prop2_order, LowerPlan, PhiReport};
use kwidth::exponents::{embedding_margin, h_family_minimize, theorem1_exponent, theorem2_exponent, Smoothness, WidthOrder};
use kwidth::width_oracle::{append_ledger, sandwich_report, SandwichReport};
use kwidth::{Error, Result};
use serde::Serialize;

use output::{render_report, render_rows, Format, Table};
use problem::{Kind, ProblemFile};
use suites::{Budget, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_DESK_SCALE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "kwidth", version, about = "Kolmogorov width exponents and desk-scale width verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "small")]
    pub budget: Budget,
    /// Directory for CSV/JSON artifacts and the sandwich ledger.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Width exponent of a Sobolev or Nikol'skii class.
    Exponent {
        #[arg(long)]
        input: PathBuf,
    },
    /// Order function of a mixed-norm ball width.
    Phi {
        #[arg(long)]
        input: PathBuf,
    },
    /// Certified lower and numerical upper bounds for a small ball.
    Sandwich {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Plot data: Φ against n for a ball, the exponent against a smoothness scale otherwise.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Output text plus exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DeskScale(_) | Error::Budget(_) => EXIT_DESK_SCALE,
        _ => EXIT_VALIDATION,
    }
}

/// Parses arguments and runs; errors are printed to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Exponent { input } => cmd_exponent(&ProblemFile::load(input)?, cli.format),
        Command::Phi { input } => cmd_phi(&ProblemFile::load(input)?, cli.format),
        Command::Sandwich { input } => cmd_sandwich(&ProblemFile::load(input)?, cli),
        Command::Verify { suite } => cmd_verify(*suite, cli),
        Command::Report { input } => cmd_report(&ProblemFile::load(input)?, cli.format),
    }
}

fn ok(stdout: String) -> Outcome {
    Outcome { stdout, code: EXIT_OK }
}

#[derive(Serialize)]
struct HCrossCheck {
    s_star: Real,
    value: Real,
    agrees: bool,
}

#[derive(Serialize)]
struct ExponentReport {
    kind: &'static str,
    p: Vec<String>,
    q: Vec<String>,
    r: Smoothness,
    nu: Option<usize>,
    exponent_f64: f64,
    #[serde(flatten)]
    order: WidthOrder,
    embedding_margin: Option<Real>,
    h_minimization: Option<HCrossCheck>,
}

fn strings(p: &kwidth::mixed_norm::ExponentVector) -> Vec<String> {
    p.iter().map(|e| e.to_string()).collect()
}

pub fn cmd_exponent(f: &ProblemFile, fmt: Format) -> Result<Outcome> {
    let kind = match f.kind {
        Kind::Sobolev => "sobolev",
        Kind::Nikolskii => "nikolskii",
        _ => return Err(Error::InvalidInput("`exponent` needs kind sobolev or nikolskii".into())),
    };
    let r = f.smoothness()?;
    let (order, margin, hmin) = match f.nu {
        Some(nu) => (theorem2_exponent(&f.p, &f.q, &r, nu)?, None, None),
        None => {
            let order = theorem1_exponent(&f.p, &f.q, &r)?;
            let h = h_family_minimize(&f.p, &f.q, &r)?;
            let (a, b) = (h.value.to_f64(), order.exponent.to_f64());
            let agrees = (a - b).abs() <= 1e-12 * b.abs().max(1.0);
            let margin = embedding_margin(&f.p, &f.q, &r)?;
            (order, Some(margin), Some(HCrossCheck { s_star: h.s_star, value: h.value, agrees }))
        }
    };
    let violated = hmin.as_ref().is_some_and(|h| !h.agrees);
    let report = ExponentReport {
        kind,
        p: strings(&f.p),
        q: strings(&f.q),
        r,
        nu: f.nu,
        exponent_f64: order.exponent.to_f64(),
        order,
        embedding_margin: margin,
        h_minimization: hmin,
    };
    Ok(Outcome { stdout: render_report(&report, fmt)?, code: if violated { EXIT_VIOLATION } else { EXIT_OK } })
}

#[derive(Serialize)]
struct PhiRow {
    n: u64,
    #[serde(flatten)]
    phi: PhiReport,
    forms_agree: bool,
    lower_plan: LowerPlan,
}

#[derive(Serialize)]
struct PhiOutput {
    k: Vec<u64>,
    p: Vec<String>,
    q: Vec<String>,
    rows: Vec<PhiRow>,
}

#[derive(Serialize)]
struct Prop2Output {
    k: Vec<u64>,
    p: Vec<String>,
    q: Vec<String>,
    nu: usize,
    order: PowerProduct,
    order_f64: f64,
}

pub fn cmd_phi(f: &ProblemFile, fmt: Format) -> Result<Outcome> {
    match f.kind {
        Kind::Ball => {
            let mut rows = Vec::new();
            for n in f.ns() {
                let prob = f.ball(n)?;
                let ph = phi(&prob)?;
                let forms_agree = ph.value.exact_cmp(&ph.all_terms_value) == std::cmp::Ordering::Equal;
                rows.push(PhiRow { n, phi: ph, forms_agree, lower_plan: lower_bound_plan(&prob)? });
            }
            let violated = rows.iter().any(|r| !r.forms_agree);
            let out = PhiOutput { k: f.k.clone().unwrap_or_default(), p: strings(&f.p), q: strings(&f.q), rows };
            Ok(Outcome { stdout: render_report(&out, fmt)?, code: if violated { EXIT_VIOLATION } else { EXIT_OK } })
        }
        Kind::Prop2 => {
            let k = f.k.clone().unwrap_or_default();
            let nu = f.nu.unwrap_or(0);
            let prob = kwidth::ball_widths::BallProblem::new_unguarded(k.clone(), f.n.unwrap_or(0), f.p.clone(), f.q.clone())?;
            let order = prop2_order(&prob, nu)?;
            let out = Prop2Output { k, p: strings(&f.p), q: strings(&f.q), nu, order_f64: order.to_f64(), order };
            Ok(ok(render_report(&out, fmt)?))
        }
        _ => Err(Error::InvalidInput("`phi` needs kind ball or prop2".into())),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

pub fn cmd_sandwich(f: &ProblemFile, cli: &Cli) -> Result<Outcome> {
    if f.kind != Kind::Ball {
        return Err(Error::InvalidInput("`sandwich` needs kind ball".into()));
    }
    let cfg = f.oracle(cli.budget.oracle(cli.seed))?;
    let reports: Vec<SandwichReport> = f.ns().into_iter().map(|n| sandwich_report(&f.ball(n)?, &cfg)).collect::<Result<_>>()?;
    if let Some(dir) = &cli.out {
        ensure_dir(dir)?;
        append_ledger(&dir.join("sandwich_ledger.csv"), &reports, &cfg)?;
    }
    let code = if reports.iter().all(|r| r.holds) { EXIT_OK } else { EXIT_VIOLATION };
    let stdout = if reports.len() == 1 { render_report(&reports[0], cli.format)? } else { render_report(&reports, cli.format)? };
    Ok(Outcome { stdout, code })
}

pub fn cmd_verify(suite: Suite, cli: &Cli) -> Result<Outcome> {
    let (rows, reports) = suites::run(suite, cli.seed, cli.budget)?;
    let table = suites::rows_table(&rows);
    if let Some(dir) = &cli.out {
        ensure_dir(dir)?;
        let name = format!("verify_{}", format!("{suite:?}").to_lowercase());
        std::fs::write(dir.join(format!("{name}.csv")), table.csv()?)?;
        std::fs::write(dir.join(format!("{name}.json")), serde_json::to_string_pretty(&rows)? + "\n")?;
        if !reports.is_empty() {
            append_ledger(&dir.join("sandwich_ledger.csv"), &reports, &cli.budget.oracle(cli.seed))?;
        }
    }
    let code = if rows.iter().all(|r| r.ok) { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Outcome { stdout: render_rows(&rows, &table, cli.format)?, code })
}

#[derive(Serialize)]
struct PlotRow {
    x: f64,
    y: Option<f64>,
    note: String,
}

pub fn cmd_report(f: &ProblemFile, fmt: Format) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut table;
    match f.kind {
        Kind::Ball => {
            table = Table::new(&["n", "phi", "predicted_lower", "regime"]);
            let total: u64 = f.k.as_ref().map(|k| k.iter().product()).unwrap_or(0);
            for n in 1..=total / 2 {
                let prob = f.ball(n)?;
                let ph = phi(&prob)?;
                let plan = lower_bound_plan(&prob)?;
                let regime = serde_json::to_value(plan.regime)?.to_string();
                table.push(vec![n.to_string(), ph.value_f64.to_string(), plan.predicted_f64.to_string(), regime.clone()]);
                rows.push(PlotRow { x: n as f64, y: Some(ph.value_f64), note: regime });
            }
        }
        Kind::Sobolev | Kind::Nikolskii => {
            table = Table::new(&["scale", "exponent", "note"]);
            let r = f.smoothness()?;
            for i in 1..=12 {
                let c = Real::ratio(i, 4);
                let rc = r.scaled(&c)?;
                let res = match f.nu {
                    Some(nu) => theorem2_exponent(&f.p, &f.q, &rc, nu),
                    None => theorem1_exponent(&f.p, &f.q, &rc),
                };
                let (y, note) = match res {
                    Ok(o) => (Some(o.exponent.to_f64()), o.regime_note),
                    Err(Error::NotCompact { .. }) => (None, "not compactly embedded".to_string()),
                    Err(e) => return Err(e),
                };
                table.push(vec![c.to_f64().to_string(), y.map(|v| v.to_string()).unwrap_or_default(), note.clone()]);
                rows.push(PlotRow { x: c.to_f64(), y, note });
            }
        }
        Kind::Prop2 => return Err(Error::InvalidInput("`report` needs kind ball, sobolev or nikolskii".into())),
    }
    Ok(ok(render_rows(&rows, &table, fmt)?))
}
