use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use implicit_jet::coeffs::VerificationReport;
use implicit_jet::formula::{
    delta_formula, elementary_formula, fx_zero_formula, inverse_function_formula, Format, Formula,
};
use implicit_jet::numeric::{builtin_problem, eval_any, AnyJet, AnyReport, FdConfig};
use implicit_jet::partitions::Limits;
use implicit_jet::verify::{run_suite, Suite, DEFAULT_SEED};
use implicit_jet::{Error, Result};
use serde_json::json;

const DEFAULT_CAP: u32 = 12;
const CAP_ENV: &str = "IMPLICIT_JET_MAX_N";

/// Closed-form higher derivatives of implicit functions.
#[derive(Debug, Parser)]
#[command(name = "implicit-jet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the formula for y^(n).
    Formula {
        n: u32,
        #[arg(long, value_enum, default_value_t = Form::Delta)]
        form: Form,
        #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
        format: FormatArg,
    },
    /// Run identity suites; one JSON line per report.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluate y^(n) on a jet file or a built-in problem.
    Eval {
        n: u32,
        #[arg(long, conflicts_with = "problem", required_unless_present = "problem")]
        jet: Option<String>,
        #[arg(long)]
        problem: Option<String>,
        #[arg(long, value_enum, default_value_t = EvalForm::Delta)]
        form: EvalForm,
        /// Use a binary64 jet even when the problem has an exact one.
        #[arg(long)]
        float: bool,
        /// Compare against finite differences of the Newton-solved curve.
        #[arg(long, requires = "problem")]
        check_fd: bool,
    },
    /// Count the partition families per order and stratum.
    Count {
        #[arg(long, value_enum, ignore_case = true)]
        family: FamilyArg,
        #[arg(long)]
        max_n: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    Delta,
    Elementary,
    Inverse,
    Fx0,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EvalForm {
    Delta,
    Elementary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Plain,
    Latex,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Recursion,
    Oracle,
    Johnson,
    Shift,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

fn cap() -> Result<u32> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("{CAP_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::UnknownFormat(_) | Error::UnknownProblem(_) => 2,
        Error::InsufficientOrder { .. } => 2,
        Error::OverCap { .. } => 3,
        Error::SingularJet => 4,
        Error::Parse(_) | Error::MixedKinds | Error::MissingPartial { .. } => 5,
        _ => 1,
    }
}

fn build_formula(n: u32, form: Form) -> Result<Formula> {
    Ok(match form {
        Form::Delta => delta_formula(n)?.into(),
        Form::Elementary => elementary_formula(n)?.into(),
        Form::Inverse => inverse_function_formula(n)?.into(),
        Form::Fx0 => fx_zero_formula(n)?.into(),
    })
}

fn report_line(r: &VerificationReport) -> String {
    json!({
        "check": r.name,
        "n": r.n,
        "checked": r.checked,
        "passed": r.passed(),
        "failures": r.failures,
    })
    .to_string()
}

fn run(command: Command, out: &mut impl Write) -> Result<u8> {
    let limits = Limits::new(cap()?);
    let io = |e: std::io::Error| Error::Internal(format!("writing output: {e}"));
    match command {
        Command::Formula { n, form, format } => {
            limits.check(n)?;
            let format = match format {
                FormatArg::Plain => Format::Plain,
                FormatArg::Latex => Format::Latex,
                FormatArg::Json => Format::Json,
            };
            let f = build_formula(n, form)?;
            writeln!(out, "{}", f.render(format)).map_err(io)?;
            Ok(0)
        }
        Command::Verify { max_n, suite, seed } => {
            limits.check(max_n)?;
            let suite = match suite {
                SuiteArg::Recursion => Suite::Recursion,
                SuiteArg::Oracle => Suite::Oracle,
                SuiteArg::Johnson => Suite::Johnson,
                SuiteArg::Shift => Suite::Shift,
                SuiteArg::All => Suite::All,
            };
            let reports = run_suite(suite, max_n, seed)?;
            let checks: usize = reports.iter().map(|r| r.checked).sum();
            let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed()).collect();
            for r in &reports {
                writeln!(out, "{}", report_line(r)).map_err(io)?;
            }
            let summary = json!({
                "summary": {
                    "reports": reports.len(),
                    "checks": checks,
                    "failed_reports": failed.len(),
                    "passed": failed.is_empty(),
                }
            });
            writeln!(out, "{summary}").map_err(io)?;
            eprintln!(
                "verify: {} reports, {checks} checks, {} failing",
                reports.len(),
                failed.len()
            );
            for r in &failed {
                eprintln!("  FAIL {} n={}: {}", r.name, r.n, r.failures.join(" | "));
            }
            Ok(if failed.is_empty() { 0 } else { 1 })
        }
        Command::Eval {
            n,
            jet,
            problem,
            form,
            float,
            check_fd,
        } => {
            limits.check(n)?;
            let formula: Formula = match form {
                EvalForm::Delta => delta_formula(n)?.into(),
                EvalForm::Elementary => elementary_formula(n)?.into(),
            };
            let report: AnyReport = match (jet, problem) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
                    eval_any(&formula, &AnyJet::from_json(&text)?)?
                }
                (None, Some(name)) => {
                    let spec = builtin_problem(&name)?;
                    let fd = check_fd.then(FdConfig::default);
                    spec.evaluate(&formula, !float, fd.as_ref())?
                }
                (None, None) => return Err(Error::Domain("need --jet or --problem".into())),
            };
            writeln!(out, "{}", report.to_json()).map_err(io)?;
            eprintln!("y^({n}) = {}", report.value_f64());
            for c in report.comparisons() {
                eprintln!("  vs {}: relative error {:e}", c.target, c.rel_error);
            }
            Ok(0)
        }
        Command::Count { family, max_n } => {
            limits.check(max_n)?;
            let (name, first) = match family {
                FamilyArg::A => ("A", 2),
                FamilyArg::B => ("B", 1),
            };
            writeln!(out, "family\tn\tstratum\tcount").map_err(io)?;
            for n in first..=max_n {
                let members = match family {
                    FamilyArg::A => limits.enumerate_a(n)?,
                    FamilyArg::B => limits.enumerate_b(n)?,
                };
                let mut strata: BTreeMap<u64, usize> = BTreeMap::new();
                for m in &members {
                    *strata.entry(m.total()).or_insert(0) += 1;
                }
                for (s, c) in strata {
                    writeln!(out, "{name}\t{n}\t{s}\t{c}").map_err(io)?;
                }
                writeln!(out, "{name}\t{n}\ttotal\t{}", members.len()).map_err(io)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("implicit-jet: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
