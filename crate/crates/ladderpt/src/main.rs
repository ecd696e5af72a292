//! Command-line interface: `run` prints a perturbation series, `spectrum`
//! evaluates perturbed energies for chosen states, `verify` runs the
//! self-check suite. Exit codes: 0 success, 1 failed checks, 2 usage or
//! validation errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ladderpt::config::{
    apply_overrides, config_from_preset, parse_config, OutputFormat, RunConfig,
};
use ladderpt::engine::SeriesResult;
use ladderpt::error::Error;
use ladderpt::models::{evaluate_spectrum, SpectrumRow};
use ladderpt::render::{expr_to_json, expr_to_latex, expr_to_text, scalar_to_text};
use ladderpt::verify::{run_checks, Outcome};

const CONVENTIONS: &str = "\
Conventions:
  oscillator bracket [a, a†] = 1; canonical words a†^m a^n
  spin brackets [L0, L±] = ±ħ L±, [L+, L−] = 2ħ L0; canonical words L+^m L0^p L-^n
  `gap` is the level spacing of H0 along the ladder grading
  the inverse level shift is zero on diagonal terms by definition
  expressions are sums of `*`-separated products, e.g. \"1/2 * u * L+ + 1/2 * u_conj * L-\"
  state labels: oscillator occupation \"3\"; spin multiplet \"l:m\" such as \"1:-1\"";

#[derive(Parser)]
#[command(
    name = "ladderpt",
    version,
    about = "Exact operator perturbation series on ladder algebras",
    after_help = CONVENTIONS
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProblemArgs {
    /// Built-in problem: "stark" (driven oscillator) or "zeeman" (tilted spin)
    #[arg(long)]
    preset: Option<String>,
    /// TOML problem definition (alternative to --preset)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Expansion order (overrides the config file)
    #[arg(long)]
    order: Option<u32>,
    /// Output format: text, json, or latex
    #[arg(long)]
    format: Option<String>,
    /// Numeric parameter bindings, e.g. "hbar=1,kappa=5,u=0.6+0.8i"
    #[arg(long)]
    params: Option<String>,
    /// Comma-separated state labels, e.g. "0,1,2" or "1:1,1:0,1:-1"
    #[arg(long)]
    states: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and print the perturbation series
    Run(ProblemArgs),
    /// Evaluate perturbed energies for the chosen states
    Spectrum(ProblemArgs),
    /// Run the self-check suite
    Verify {
        /// Check scope: all, superops, goldens, structural, or oracle
        #[arg(long, default_value = "all")]
        scope: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run(args) => {
            let cfg = resolve(&args)?;
            print!("{}", render_run(&cfg)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum(args) => {
            let cfg = resolve(&args)?;
            print!("{}", render_spectrum(&cfg)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { scope } => {
            let scope = scope.parse()?;
            let checks = run_checks(scope);
            let mut passed = 0usize;
            let mut failed = 0usize;
            let mut skipped = 0usize;
            for c in &checks {
                println!("{c}");
                match c.outcome {
                    Outcome::Pass => passed += 1,
                    Outcome::Fail(_) => failed += 1,
                    Outcome::Skip(_) => skipped += 1,
                }
            }
            println!();
            println!("checks: {passed} passed, {failed} failed, {skipped} skipped");
            Ok(if failed > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn resolve(args: &ProblemArgs) -> Result<RunConfig, Error> {
    let format = args
        .format
        .as_deref()
        .map(str::parse::<OutputFormat>)
        .transpose()?;
    match (&args.preset, &args.config) {
        (Some(_), Some(_)) => Err(Error::Config(
            "choose either --preset or --config, not both".into(),
        )),
        (Some(name), None) => config_from_preset(
            name,
            args.order,
            format,
            args.params.as_deref(),
            args.states.as_deref(),
        ),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read `{}`: {e}", path.display()))
            })?;
            let cfg = parse_config(&text, args.order)?;
            apply_overrides(cfg, format, args.params.as_deref(), args.states.as_deref())
        }
        (None, None) => Err(Error::Config(
            "provide --preset <stark|zeeman> or --config <file>".into(),
        )),
    }
}

fn render_run(cfg: &RunConfig) -> Result<String, Error> {
    let problem = &cfg.problem;
    let series = problem.iterate();
    let mut out = String::new();
    match cfg.format {
        OutputFormat::Text => {
            let _ = writeln!(
                out,
                "problem: {} algebra, max order {}",
                problem.algebra(),
                problem.max_order()
            );
            let _ = writeln!(out, "gap = {}", scalar_to_text(problem.gap().gap()));
            if !problem.h0_central().is_zero() {
                let _ = writeln!(
                    out,
                    "H0 central part = {}",
                    scalar_to_text(problem.h0_central())
                );
            }
            let _ = writeln!(out, "V = {}", expr_to_text(problem.v()));
            let _ = writeln!(out);
            for o in &series.orders {
                let _ = writeln!(out, "A_{} = {}", o.order, expr_to_text(&o.a));
                let _ = writeln!(out, "W_{} = {}", o.order, expr_to_text(&o.w));
                let _ = writeln!(out, "G_{} = {}", o.order, expr_to_text(&o.g));
                let _ = writeln!(out);
            }
            let _ = writeln!(out, "W_total = {}", expr_to_text(&series.w_total()));
            let _ = writeln!(out, "G_total = {}", expr_to_text(&series.g_total()));
            let zeros = series.zero_orders();
            if zeros.is_empty() {
                let _ = writeln!(out, "vanishing orders: none");
            } else {
                let list: Vec<String> = zeros.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "vanishing orders: {}", list.join(", "));
            }
        }
        OutputFormat::Json => {
            let orders: Vec<serde_json::Value> = series
                .orders
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "order": o.order,
                        "a": expr_to_json(&o.a),
                        "w": expr_to_json(&o.w),
                        "g": expr_to_json(&o.g),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "algebra": problem.algebra().to_string(),
                "max_order": problem.max_order(),
                "gap": scalar_to_text(problem.gap().gap()),
                "h0_central": scalar_to_text(problem.h0_central()),
                "v": expr_to_json(problem.v()),
                "orders": orders,
                "w_total": expr_to_json(&series.w_total()),
                "g_total": expr_to_json(&series.g_total()),
                "zero_orders": series.zero_orders(),
            });
            out = serde_json::to_string_pretty(&doc).expect("series serialization");
            out.push('\n');
        }
        OutputFormat::Latex => {
            let _ = writeln!(out, "\\begin{{aligned}}");
            for o in &series.orders {
                let _ = writeln!(out, "A_{{{}}} &= {} \\\\", o.order, expr_to_latex(&o.a));
                let _ = writeln!(out, "W_{{{}}} &= {} \\\\", o.order, expr_to_latex(&o.w));
                let _ = writeln!(out, "G_{{{}}} &= {} \\\\", o.order, expr_to_latex(&o.g));
            }
            let _ = writeln!(
                out,
                "W_{{\\text{{total}}}} &= {} \\\\",
                expr_to_latex(&series.w_total())
            );
            let _ = writeln!(
                out,
                "G_{{\\text{{total}}}} &= {}",
                expr_to_latex(&series.g_total())
            );
            let _ = writeln!(out, "\\end{{aligned}}");
        }
    }
    Ok(out)
}

fn spectrum_rows(cfg: &RunConfig) -> Result<(SeriesResult, Vec<SpectrumRow>), Error> {
    if cfg.states.is_empty() {
        return Err(Error::Config(
            "no states given; pass --states or set `states` in the config".into(),
        ));
    }
    let series = cfg.problem.iterate();
    let rows = evaluate_spectrum(&cfg.problem, &series, &cfg.states, &cfg.values)?;
    Ok((series, rows))
}

fn render_spectrum(cfg: &RunConfig) -> Result<String, Error> {
    let (series, rows) = spectrum_rows(cfg)?;
    let orders: Vec<u32> = series.orders.iter().map(|o| o.order).collect();
    let mut out = String::new();
    match cfg.format {
        OutputFormat::Text => {
            let _ = write!(out, "{:<12}", "state");
            let _ = write!(out, "{:>15}", "eps0");
            for n in &orders {
                let _ = write!(out, "{:>15}", format!("d{n}"));
            }
            let _ = writeln!(out, "{:>15}", "energy");
            for row in &rows {
                let _ = write!(out, "{:<12}", row.state.to_string());
                let _ = write!(out, "{:>15.8}", row.eps0);
                for (_, c) in &row.corrections {
                    let _ = write!(out, "{:>15.8}", c);
                }
                let _ = writeln!(out, "{:>15.8}", row.energy);
            }
        }
        OutputFormat::Json => {
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "state": r.state.to_string(),
                        "eps0": r.eps0,
                        "corrections": r.corrections,
                        "energy": r.energy,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "algebra": cfg.problem.algebra().to_string(),
                "max_order": cfg.problem.max_order(),
                "rows": rows_json,
            });
            out = serde_json::to_string_pretty(&doc).expect("spectrum serialization");
            out.push('\n');
        }
        OutputFormat::Latex => {
            let cols = "r".repeat(orders.len() + 2);
            let _ = writeln!(out, "\\begin{{tabular}}{{l|{cols}}}");
            let mut header = String::from("state & $\\varepsilon^{(0)}$");
            for n in &orders {
                let _ = write!(header, " & $\\Delta_{{{n}}}$");
            }
            let _ = writeln!(out, "{header} & energy \\\\ \\hline");
            for row in &rows {
                let _ = write!(out, "{} & {:.8}", row.state, row.eps0);
                for (_, c) in &row.corrections {
                    let _ = write!(out, " & {c:.8}");
                }
                let _ = writeln!(out, " & {:.8} \\\\", row.energy);
            }
            let _ = writeln!(out, "\\end{{tabular}}");
        }
    }
    Ok(out)
}
