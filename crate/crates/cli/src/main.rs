use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use motilt::ageing::{classify_all, Window};
use motilt::interchange::{finite_to_json, DistributionSpec};
use motilt::lab::{
    preservation_table, reproduce_all, reproduce_case, search_counterexample, CaseReport,
    PreservationClaim, SearchBudget, SearchOutcome,
};
use motilt::orders::{check_order, OrderRelation};
use motilt::tilt::{tilt_pmf, TiltParameter, Tilted};
use motilt::{SurvivalCurve, Verdict};

#[derive(Parser)]
#[command(
    name = "motilt",
    version,
    about = "Exact analysis of tilted discrete lifetime distributions"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for searches and tables (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verdicts for all ten ageing classes.
    Classify {
        #[arg(long)]
        dist: PathBuf,
        /// Index window A..B (default: full support or horizon).
        #[arg(long)]
        window: Option<Window>,
    },
    /// Tilt a finite distribution.
    Tilt {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        alpha: TiltParameter,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a stochastic order, before and optionally after a tilt.
    Order {
        #[arg(long)]
        rel: OrderRelation,
        #[arg(long)]
        d1: PathBuf,
        #[arg(long)]
        d2: PathBuf,
        #[arg(long)]
        alpha: Option<TiltParameter>,
    },
    /// Recompute the pinned counterexamples.
    Reproduce {
        #[arg(long, conflicts_with = "all")]
        case: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Search for a counterexample to one table cell, e.g. `ifr-lt1`.
    Search {
        #[arg(long)]
        claim: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Settle every cell of both preservation tables.
    Table {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, env = "MO_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_support: u64,
    #[arg(long, default_value_t = 20)]
    max_denominator: u64,
    /// Comma-separated tilts below 1.
    #[arg(long, value_delimiter = ',', default_value = "1/5,2/5,4/5")]
    alpha_below: Vec<TiltParameter>,
    /// Comma-separated tilts above 1.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    alpha_above: Vec<TiltParameter>,
    #[arg(long, default_value_t = 5000)]
    trial_limit: u64,
    /// Seconds per searched cell.
    #[arg(long, default_value_t = 60)]
    time_limit: u64,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_support: self.max_support,
            max_denominator: self.max_denominator,
            alpha_below: self.alpha_below.clone(),
            alpha_above: self.alpha_above.clone(),
            trial_limit: self.trial_limit,
            time_limit: Duration::from_secs(self.time_limit),
            seed: self.seed,
        }
    }
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A verdict-level failure: exit 1.
    Verdict,
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load(path: &Path) -> Result<DistributionSpec, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("{}: cannot read: {e}", path.display())))?;
    DistributionSpec::from_json_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn classify(json: bool, dist: &Path, window: Option<Window>) -> Outcome {
    let spec = load(dist)?;
    let (window, verdicts) = match &spec {
        DistributionSpec::Finite(d) => classify_on(d, window)?,
        DistributionSpec::Parametric(s) => classify_on(s, window)?,
    };
    if json {
        println!(
            "{}",
            pretty(&json!({ "window": window.to_string(), "verdicts": verdicts }))
        );
    } else {
        println!("window {window}");
        for (p, v) in &verdicts {
            println!("{:<6} {v}", p.tag());
        }
    }
    Ok(())
}

type Verdicts = std::collections::BTreeMap<motilt::ageing::AgeingProperty, Verdict>;

fn classify_on<C: SurvivalCurve>(
    c: &C,
    window: Option<Window>,
) -> Result<(Window, Verdicts), Failure> {
    let verdicts = classify_all(c, window).map_err(|e| usage(e.to_string()))?;
    Ok((window.unwrap_or_else(|| Window::full(c)), verdicts))
}

fn tilt(dist: &Path, alpha: &TiltParameter, out: Option<&Path>) -> Outcome {
    let DistributionSpec::Finite(d) = load(dist)? else {
        return Err(usage(format!(
            "{}: tilt writes finite distributions only",
            dist.display()
        )));
    };
    let text = pretty(&finite_to_json(&tilt_pmf(&d, alpha)));
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| usage(format!("{}: cannot write: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn order(
    json: bool,
    rel: OrderRelation,
    d1: &Path,
    d2: &Path,
    alpha: Option<&TiltParameter>,
) -> Outcome {
    let (before, after) = match (load(d1)?, load(d2)?) {
        (DistributionSpec::Finite(a), DistributionSpec::Finite(b)) => {
            let after = alpha.map(|t| check_order(rel, &tilt_pmf(&a, t), &tilt_pmf(&b, t)));
            (check_order(rel, &a, &b), after)
        }
        (DistributionSpec::Parametric(a), DistributionSpec::Parametric(b)) => {
            let after = alpha.map(|t| {
                let t = t.to_real();
                check_order(rel, &Tilted::new(&a, t), &Tilted::new(&b, t))
            });
            (check_order(rel, &a, &b), after)
        }
        _ => {
            return Err(usage(
                "--d1 and --d2 must both be finite or both be parametric",
            ))
        }
    };
    if json {
        let mut v = json!({ "relation": rel.tag(), "before": before });
        if let (Some(a), Some(after)) = (alpha, &after) {
            v["alpha"] = json!(a.to_string());
            v["after"] = json!(after);
        }
        println!("{}", pretty(&v));
    } else {
        println!("X1 <={} X2: {before}", rel.tag());
        if let (Some(a), Some(after)) = (alpha, &after) {
            println!("Y1 <={} Y2 (alpha = {a}): {after}", rel.tag());
        }
    }
    Ok(())
}

fn case_line(r: &CaseReport) -> String {
    let ok_values = r.values.iter().filter(|v| v.passed).count();
    let ok_concl = r.conclusions.iter().filter(|c| c.confirmed()).count();
    let mut line = format!(
        "{:<20} {:<4} values {}/{}, conclusions {}/{} confirmed",
        r.id,
        if r.passed() { "pass" } else { "FAIL" },
        ok_values,
        r.values.len(),
        ok_concl,
        r.conclusions.len()
    );
    for c in r.conclusions.iter().filter(|c| !c.confirmed()) {
        line.push_str(&format!(
            "; not confirmed: {} (printed {}, computed {})",
            c.statement,
            yes_no(c.printed),
            yes_no(c.computed)
        ));
    }
    line
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn reproduce(json: bool, case: Option<&str>) -> Outcome {
    let reports = match case {
        Some(id) => vec![reproduce_case(id).map_err(|e| usage(e.to_string()))?],
        None => reproduce_all(),
    };
    let passed = reports.iter().filter(|r| r.passed()).count();
    if json {
        println!("{}", pretty(&reports));
    } else {
        for r in &reports {
            println!("{}", case_line(r));
            if case.is_some() {
                println!("  {}", r.description);
                for v in &r.values {
                    println!(
                        "  {:<14} printed {:<12} computed {:<14} {}",
                        v.label,
                        v.printed.to_string(),
                        v.computed.to_string(),
                        if v.passed { "ok" } else { "MISMATCH" }
                    );
                }
                for c in &r.conclusions {
                    println!(
                        "  {:<24} printed {:<3} computed {:<3} {}",
                        c.statement,
                        yes_no(c.printed),
                        yes_no(c.computed),
                        if c.confirmed() { "ok" } else { "not confirmed" }
                    );
                }
            }
        }
        println!("{passed}/{} cases pass", reports.len());
    }
    if passed == reports.len() {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn search(json: bool, claim: &str, budget: &SearchBudget) -> Outcome {
    let claim = PreservationClaim::from_cell_id(claim).map_err(|e| usage(e.to_string()))?;
    let outcome = search_counterexample(&claim, budget).map_err(|e| usage(e.to_string()))?;
    if json {
        println!("{}", pretty(&outcome));
    }
    match outcome {
        SearchOutcome::Found { certificate } => {
            if !json {
                println!("{}", certificate.to_json());
            }
            Ok(())
        }
        SearchOutcome::Exhausted { candidates } => {
            if !json {
                println!("exhausted: no violation of {claim} among {candidates} candidates");
            }
            Err(Failure::Verdict)
        }
    }
}

fn table(json: bool, trials: u64, budget: &SearchBudget) -> Outcome {
    let report = preservation_table(budget, trials).map_err(|e| usage(e.to_string()))?;
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    if report.all_agree() {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    let json = cli.json;
    match &cli.command {
        Command::Classify { dist, window } => classify(json, dist, *window),
        Command::Tilt { dist, alpha, out } => tilt(dist, alpha, out.as_deref()),
        Command::Order { rel, d1, d2, alpha } => order(json, *rel, d1, d2, alpha.as_ref()),
        Command::Reproduce { case, all: _ } => reproduce(json, case.as_deref()),
        Command::Search { claim, budget } => search(json, claim, &budget.budget()),
        Command::Table { trials, budget } => table(json, *trials, &budget.budget()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
