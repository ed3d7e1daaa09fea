//! `infmaj`: majorization checks, zeta diagnostics, trumping and self tests
//! from the command line.
//!
//! Exit codes: 0 holds, 1 fails, 2 inconclusive, 3 the characterizations
//! disagree, 64 unreadable or invalid input and configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use infmaj::order::{majorize_hockey_stick, majorize_partial_sums};
use infmaj::selftest::{self, SelftestConfig};
use infmaj::trumping::{
    append_evidence, catalyst_search, conjecture_probe, trump_check, CatalystSearchConfig, ProbeConfig,
};
use infmaj::zeta::{
    cm_refute_adaptive, cm_test, f_jet_bounded, zeta_jet, CmConfig, CmReport, Grid, RefuteBudget, ZetaPair,
};
use infmaj::{with_precision, Exact, ExactSeq, Outcome, Precision, Real, Scalar, Verdict, Witness};
use serde_json::{json, Value};

const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "infmaj", version, about = "Majorization of summable sequences")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Significand bits for floating-point work (rounded up to 53, 128, 256, ... 4096).
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: u32,
    /// Highest derivative order sampled by the complete-monotonicity test.
    #[arg(long, global = true, default_value_t = 24)]
    order_max: usize,
    #[arg(long, global = true, default_value_t = 1.001)]
    s_min: f64,
    #[arg(long, global = true, default_value_t = 1000.0)]
    s_max: f64,
    /// Points of the grid, spaced geometrically in s - 1.
    #[arg(long, global = true, default_value_t = 64)]
    grid_points: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Reject sequences whose total mass is not 1.
    #[arg(long, global = true)]
    require_normalized: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    min_dim: usize,
    #[arg(long, default_value_t = 4)]
    max_dim: usize,
    /// Catalyst entries are multiples of 1/resolution.
    #[arg(long, default_value_t = 20)]
    resolution: usize,
    /// Largest number of candidate catalysts tried.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a ≺ b by partial sums, hockey-stick sums and complete monotonicity.
    Check { a: PathBuf, b: PathBuf },
    /// Tabulate ζ(s), f(s) and three derivatives of f on the grid.
    Zeta {
        a: PathBuf,
        b: PathBuf,
        /// Number of grid points (overrides --grid-points).
        #[arg(long)]
        samples: Option<usize>,
        /// Emit CSV regardless of --format.
        #[arg(long)]
        csv: bool,
    },
    /// Decide whether x is trumped by y, with a given catalyst or by search.
    Trump {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        catalyst_file: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Collect evidence on the catalytic reading of positivity of ζ.
    ProbeConjecture {
        a: PathBuf,
        b: PathBuf,
        /// Append the evidence record to this JSON-lines file.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

/// Errors in user input, reported with exit code 64.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

struct Report {
    json: Value,
    text: String,
    csv: String,
    exit: u8,
}

impl RunArgs {
    fn precision(&self) -> Result<Precision> {
        Precision::at_least(self.precision_bits).map_err(|e| input(format!("--precision-bits: {e}")))
    }

    fn grid(&self, points: usize) -> Result<Grid> {
        Grid::new(self.s_min, self.s_max, points).map_err(|e| input(format!("--s-min/--s-max: {e}")))
    }

    fn cm_config(&self) -> Result<CmConfig> {
        Ok(CmConfig {
            order_max: self.order_max,
            grid: self.grid(self.grid_points)?,
            precision: self.precision()?,
            ..CmConfig::default()
        })
    }

    fn search_config(&self, s: &SearchArgs) -> CatalystSearchConfig {
        CatalystSearchConfig {
            min_dim: s.min_dim,
            max_dim: s.max_dim,
            resolution: s.resolution,
            budget: s.budget,
            threads: self.threads,
            ..CatalystSearchConfig::default()
        }
    }

    fn load(&self, path: &Path) -> Result<ExactSeq> {
        let name = path.display();
        let text = fs::read_to_string(path).map_err(|e| input(format!("{name}: {e}")))?;
        let seq = ExactSeq::from_json_str(&text).map_err(|e| input(format!("{name}: {e}")))?;
        if let Some(Witness::Invariant { index, reason }) = seq.validate().witness() {
            let at = index.map_or("$.tail".to_string(), |i| format!("$.prefix[{i}]"));
            return Err(input(format!("{name}: {at}: {reason}")));
        }
        if self.require_normalized && seq.total_mass() != Exact::from_integer(1.into()) {
            return Err(input(format!("{name}: $: total mass is {}, expected 1", seq.total_mass().to_decimal())));
        }
        Ok(seq)
    }
}

fn exit_for(o: Outcome) -> u8 {
    match o {
        Outcome::Holds => 0,
        Outcome::Fails => 1,
        Outcome::Inconclusive => 2,
    }
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Holds => "holds",
        Outcome::Fails => "fails",
        Outcome::Inconclusive => "inconclusive",
    }
}

fn describe<T: Scalar>(v: &Verdict<T>) -> String {
    match v {
        Verdict::Holds => "holds".into(),
        Verdict::Fails { witness } => format!("fails, witness {}", to_value(witness)),
        Verdict::Inconclusive { gap } => format!("inconclusive, margin {}", gap.to_decimal()),
    }
}

fn to_value(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verdict_csv<T: Scalar>(name: &str, v: &Verdict<T>) -> String {
    let witness = v.witness().map(|w| to_value(w).to_string()).unwrap_or_default();
    format!("{name},{},{}\n", outcome_name(v.outcome()), csv_field(&witness))
}

fn cm_text(r: &CmReport) -> String {
    let mut s = format!(
        "  complete monotonicity: {} (orders 0..={}, {} points, {} bits)\n",
        describe(&r.verdict),
        r.orders_checked,
        r.grid.len(),
        r.precision_bits
    );
    if let (Some(v), Some(at)) = (&r.min_signed_value, &r.min_location) {
        s += &format!("    smallest signed derivative {v} at n={}, s={}\n", at.order, at.s);
    }
    for n in &r.notes {
        s += &format!("    note: {n}\n");
    }
    s
}

fn cmd_check(run: &RunArgs, a: &Path, b: &Path) -> Result<Report> {
    let (sa, sb) = (run.load(a)?, run.load(b)?);
    let partial = majorize_partial_sums(&sa, &sb)?;
    let hockey = majorize_hockey_stick(&sa, &sb)?;
    let pair = ZetaPair::new(sa.clone(), sb.clone())?;
    let config = run.cm_config()?;
    let mut notes = Vec::new();
    let cm = if sa.total_mass() == sb.total_mass() {
        let mut r = cm_test(&pair, &config)?;
        if !r.verdict.is_fails() && (partial.is_fails() || hockey.is_fails()) {
            let budget = RefuteBudget {
                max_bits: RefuteBudget::default().max_bits.max(config.precision.bits()),
                ..RefuteBudget::default()
            };
            r = cm_refute_adaptive(&pair, &budget)?;
            if !r.verdict.is_fails() {
                notes.push("no complete-monotonicity witness found within the refutation budget".to_string());
            }
        }
        Some(r)
    } else {
        notes.push("complete-monotonicity test skipped: total masses differ".to_string());
        None
    };

    let exact = [partial.outcome(), hockey.outcome()];
    let exact_holds = exact.contains(&Outcome::Holds);
    let exact_fails = exact.contains(&Outcome::Fails);
    let cm_contradicts =
        cm.as_ref().is_some_and(|r| r.verdict.is_fails()) && exact_holds && !pair.has_entries_above_one();
    let disagreement = (exact_holds && exact_fails) || cm_contradicts;
    let outcome = if exact_fails {
        Outcome::Fails
    } else if exact_holds {
        Outcome::Holds
    } else {
        Outcome::Inconclusive
    };
    let exit = if disagreement { EXIT_DISAGREEMENT } else { exit_for(outcome) };

    let json = json!({
        "command": "check",
        "seed": run.seed,
        "a": to_value(&sa),
        "b": to_value(&sb),
        "partial_sums": to_value(&partial),
        "hockey_stick": to_value(&hockey),
        "complete_monotonicity": cm.as_ref().map(to_value),
        "outcome": outcome_name(outcome),
        "disagreement": disagreement,
        "exit_code": exit,
        "notes": notes,
    });
    let mut text = format!("check {} ≺ {} (seed {})\n", a.display(), b.display(), run.seed);
    text += &format!("  partial sums: {}\n", describe(&partial));
    text += &format!("  hockey stick: {}\n", describe(&hockey));
    if let Some(r) = &cm {
        text += &cm_text(r);
    }
    for n in &notes {
        text += &format!("  note: {n}\n");
    }
    text += &format!(
        "  result: {}{}\n",
        outcome_name(outcome),
        if disagreement { " (characterizations disagree)" } else { "" }
    );
    let mut csv = String::from("characterization,outcome,witness\n");
    csv += &verdict_csv("partial_sums", &partial);
    csv += &verdict_csv("hockey_stick", &hockey);
    if let Some(r) = &cm {
        csv += &verdict_csv("complete_monotonicity", &r.verdict);
    }
    Ok(Report { json, text, csv, exit })
}

const ZETA_COLUMNS: [&str; 6] = ["s", "zeta", "f", "df", "d2f", "d3f"];

fn zeta_rows<T: Real>(pair: &ZetaPair<Exact>, grid: &[f64]) -> Result<Vec<Vec<String>>> {
    let digits = (T::precision_bits() as f64 * std::f64::consts::LOG10_2).ceil() as usize;
    grid.iter()
        .map(|&s| {
            let st = T::from_f64_lossless(s);
            let z = zeta_jet::<T, _>(pair, &st, 0)?.value().clone();
            let f = f_jet_bounded::<T, _>(pair, &st, 3, 64)?.jet;
            let mut row = vec![format!("{s}"), z.to_sci(digits)];
            row.extend((0..=3).map(|k| f.derivative(k).to_sci(digits)));
            Ok(row)
        })
        .collect()
}

fn cmd_zeta(run: &RunArgs, a: &Path, b: &Path, samples: Option<usize>, csv_only: bool) -> Result<Report> {
    let pair = ZetaPair::new(run.load(a)?, run.load(b)?)?;
    let grid = run.grid(samples.unwrap_or(run.grid_points))?.values();
    let rows = with_precision!(run.precision()?, T => zeta_rows::<T>(&pair, &grid))?;
    let mut csv = ZETA_COLUMNS.join(",") + "\n";
    for r in &rows {
        csv += &(r.join(",") + "\n");
    }
    let json = json!({
        "command": "zeta",
        "seed": run.seed,
        "precision_bits": run.precision()?.bits(),
        "columns": ZETA_COLUMNS,
        "rows": rows,
    });
    let text = if csv_only { csv.clone() } else { format!("# seed {}\n{csv}", run.seed) };
    Ok(Report { json, text, csv, exit: 0 })
}

fn cmd_trump(run: &RunArgs, x: &Path, y: &Path, catalyst: Option<&Path>, search: &SearchArgs) -> Result<Report> {
    let (sx, sy) = (run.load(x)?, run.load(y)?);
    let (verdict, catalyst, tried, plain) = match catalyst {
        Some(path) => {
            let c = run.load(path)?;
            let v = trump_check(&sx, &sy, &c).map_err(|e| input(format!("{}: {e}", path.display())))?;
            (v, Some(c), 1, majorize_partial_sums(&sx, &sy)?)
        }
        None => {
            let config = run.search_config(search);
            let r = catalyst_search(&sx, &sy, &config).map_err(|e| input(e.to_string()))?;
            (r.verdict, r.catalyst, r.candidates_tried, r.plain)
        }
    };
    let exit = exit_for(verdict.outcome());
    let json = json!({
        "command": "trump",
        "seed": run.seed,
        "x": to_value(&sx),
        "y": to_value(&sy),
        "plain": to_value(&plain),
        "verdict": to_value(&verdict),
        "catalyst": catalyst.as_ref().map(to_value),
        "candidates_tried": tried,
        "exit_code": exit,
    });
    let entries = |c: &ExactSeq| c.prefix().iter().map(|e| e.to_decimal()).collect::<Vec<_>>().join(" ");
    let mut text = format!("trump {} by {} (seed {})\n", x.display(), y.display(), run.seed);
    text += &format!("  plain majorization: {}\n", describe(&plain));
    text += &format!("  with catalyst: {}\n", describe(&verdict));
    text += &format!(
        "  catalyst: {}\n  candidates tried: {tried}\n",
        catalyst.as_ref().map_or("none".to_string(), entries)
    );
    let mut csv = String::from("characterization,outcome,witness\n");
    csv += &verdict_csv("plain", &plain);
    csv += &verdict_csv("catalysed", &verdict);
    Ok(Report { json, text, csv, exit })
}

fn cmd_probe(run: &RunArgs, a: &Path, b: &Path, log: Option<&Path>, search: &SearchArgs) -> Result<Report> {
    let pair = ZetaPair::new(run.load(a)?, run.load(b)?)?;
    let config = ProbeConfig {
        positivity_grid: run.grid(run.grid_points)?,
        search: run.search_config(search),
        cm: run.cm_config()?,
    };
    let ev = conjecture_probe(&pair, &config).map_err(|e| input(e.to_string()))?;
    if let Some(path) = log {
        append_evidence(path, &ev).with_context(|| format!("appending to {}", path.display()))?;
    }
    let exit = if ev.product_cm.as_ref().is_some_and(|v| v.is_fails()) {
        EXIT_DISAGREEMENT
    } else if ev.catalyst_found {
        0
    } else if ev.notes.iter().any(|n| n.starts_with("conjecture hypothesis unmet")) {
        1
    } else {
        2
    };
    let mut json = to_value(&ev);
    json["command"] = json!("probe-conjecture");
    json["seed"] = json!(run.seed);
    json["exit_code"] = json!(exit);
    let mut text = format!("probe {} against {} (seed {})\n", a.display(), b.display(), run.seed);
    text += &format!("  zeta(1) = 0: {}\n", describe(&ev.zeta_at_one));
    if let Some(p) = &ev.positivity {
        text += &format!("  zeta > 0 on the grid: {}\n", describe(p));
    }
    text += &format!("  catalyst found: {} ({} candidates)\n", ev.catalyst_found, ev.candidates_tried);
    if let Some(p) = &ev.product_cm {
        text += &format!("  product complete monotonicity: {}\n", describe(p));
    }
    for n in &ev.notes {
        text += &format!("  note: {n}\n");
    }
    let csv = format!(
        "zeta_at_one,positivity,catalyst_found,candidates_tried,product_cm\n{},{},{},{},{}\n",
        outcome_name(ev.zeta_at_one.outcome()),
        ev.positivity.as_ref().map_or("", |v| outcome_name(v.outcome())),
        ev.catalyst_found,
        ev.candidates_tried,
        ev.product_cm.as_ref().map_or("", |v| outcome_name(v.outcome())),
    );
    Ok(Report { json, text, csv, exit })
}

fn cmd_selftest(run: &RunArgs, cases: usize) -> Result<Report> {
    let r = selftest::run(&SelftestConfig { seed: run.seed, cases, threads: run.threads })?;
    let exit = if r.passed { 0 } else { 1 };
    let mut json = to_value(&r);
    json["command"] = json!("selftest");
    let mut text = format!("selftest seed {} cases {} digest {}\n", r.seed, r.cases, r.case_digest);
    let mut csv = String::from("suite,checked,failures,first_failure\n");
    for s in &r.suites {
        text += &format!("  {:<30} {:>5} checked {:>3} failed\n", s.name, s.checked, s.failures);
        if let Some(f) = &s.first_failure {
            text += &format!("    first failure: {f}\n");
        }
        csv += &format!("{},{},{},{}\n", s.name, s.checked, s.failures, csv_field(s.first_failure.as_deref().unwrap_or("")));
    }
    text += if r.passed { "  passed\n" } else { "  FAILED\n" };
    Ok(Report { json, text, csv, exit })
}

fn execute(cli: &Cli) -> Result<Report> {
    let run = &cli.run;
    run.precision()?;
    if run.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(run.threads).build_global().map_err(|e| anyhow!(e))?;
    }
    match &cli.command {
        Command::Check { a, b } => cmd_check(run, a, b),
        Command::Zeta { a, b, samples, csv } => cmd_zeta(run, a, b, *samples, *csv),
        Command::Trump { x, y, catalyst_file, search } => cmd_trump(run, x, y, catalyst_file.as_deref(), search),
        Command::ProbeConjecture { a, b, log, search } => cmd_probe(run, a, b, log.as_deref(), search),
        Command::Selftest { cases } => cmd_selftest(run, *cases),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let csv_forced = matches!(cli.command, Command::Zeta { csv: true, .. });
            let out = match cli.run.format {
                _ if csv_forced => report.csv,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n",
                Format::Csv => report.csv,
                Format::Text => report.text,
            };
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
