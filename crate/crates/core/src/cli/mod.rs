//! The `templikit` command line.
//!
//! Exit status: 0 pass, 1 property fails, 2 invalid input, 3 hypothesis
//! failure (`verify` only), 64 usage error.

pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coeff::{Factor, Module, Ring, RingExtension};
use crate::constructors::{builtin, BUILTINS, BUILTIN_LEVEL};
use crate::deform::{base_change_templicial, verify_degproj_lift, verify_thm_main, verify_wings_tensor, Outcome};
use crate::kan::{
    check_deg_projective, check_levelwise, check_lifts_wings_templicial, check_quasicategory, ez_check, CheckReport,
    Levelwise,
};
use crate::templicial::{validate_templicial, TemplicialModule};

use format::{load_instance, load_pair, serialize_instance, DeformationFile, Instance};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

const DEFAULT_MAX_LEVEL: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "templikit", version, about = "Exact checks for truncated templicial modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Kan,
    Wings,
    Degproj,
    LevelwiseFlat,
    LevelwiseProjective,
    Ez,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Main,
    DegprojLift,
    WingsTensor,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the templicial identities of an instance file.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Decide one property up to a truncation level.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long)]
        max_level: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Base change along a supported surjection of rings.
    Basechange {
        file: PathBuf,
        #[arg(long)]
        to: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a builtin example.
    Example {
        /// One of s0_times_2, paper_P, paper_P_deformed.
        name: String,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = BUILTIN_LEVEL)]
        max_level: usize,
    },
    /// Run a theorem harness.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Free module of this rank (wings-tensor).
        #[arg(long, conflicts_with = "module")]
        module_rank: Option<usize>,
        /// Comma separated cyclic factors, e.g. `free,free` or `2` (wings-tensor).
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        max_level: Option<usize>,
        /// Skip the proof-skeleton diagnostics.
        #[arg(long)]
        no_diagnostics: bool,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Validate and run every property check; without files, on the builtins.
    Report {
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
        #[arg(long)]
        max_level: Option<usize>,
    },
}

/// An error carrying its exit status.
#[derive(Debug)]
struct Exit(i32, anyhow::Error);

fn invalid(e: impl Into<anyhow::Error>) -> Exit {
    Exit(EXIT_INVALID, e.into())
}

/// What a command prints and its status.
struct Output {
    status: i32,
    json: Value,
    text: String,
}

/// Parse `args` (program name first), run, write the report to `out` and
/// diagnostics to `err`, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    threads_hint(err);
    let format = match &cli.command {
        Command::Validate { format, .. }
        | Command::Check { format, .. }
        | Command::Verify { format, .. }
        | Command::Report { format, .. } => *format,
        _ => OutputFormat::Text,
    };
    match dispatch(cli.command) {
        Ok(o) => {
            let _ = match format {
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json")),
                OutputFormat::Text => write!(out, "{}", o.text),
            };
            o.status
        }
        Err(Exit(code, e)) => {
            let _ = writeln!(err, "error: {e:#}");
            code
        }
    }
}

/// `TEMPLIKIT_THREADS` is a hint only; checks run on one thread and give the
/// same reports either way.
fn threads_hint(err: &mut dyn Write) {
    if let Ok(v) = std::env::var("TEMPLIKIT_THREADS") {
        if v.parse::<usize>().map_or(true, |n| n == 0) {
            let _ = writeln!(err, "warning: ignoring TEMPLIKIT_THREADS={v}");
        }
    }
}

fn load(file: &Path) -> Result<Instance, Exit> {
    load_instance(file).map_err(|e| invalid(anyhow!(e).context(format!("reading {}", file.display()))))
}

/// Load and require the templicial identities.
fn load_valid(file: &Path) -> Result<Instance, Exit> {
    let inst = load(file)?;
    let v = validate_templicial(&inst.module).map_err(invalid)?;
    if let Some(first) = v.violations.first() {
        return Err(invalid(anyhow!("{} is not templicial: {first}", file.display())));
    }
    Ok(inst)
}

fn max_level(x: &TemplicialModule, requested: Option<usize>) -> Result<usize, Exit> {
    match requested {
        None => Ok(DEFAULT_MAX_LEVEL.min(x.max_level())),
        Some(0) => Err(Exit(EXIT_USAGE, anyhow!("--max-level must be positive"))),
        Some(n) if n > x.max_level() => {
            Err(invalid(anyhow!("--max-level {n} exceeds the file's truncation {}", x.max_level())))
        }
        Some(n) => Ok(n),
    }
}

fn run_property(x: &TemplicialModule, p: Property, n: usize) -> crate::Result<CheckReport> {
    match p {
        Property::Kan => check_quasicategory(x, n),
        Property::Wings => check_lifts_wings_templicial(x, n),
        Property::Degproj => check_deg_projective(x, n),
        Property::Ez => ez_check(x, n),
        Property::LevelwiseFlat => Ok(check_levelwise(&x.truncate(n)?, Levelwise::Flat)),
        Property::LevelwiseProjective => Ok(check_levelwise(&x.truncate(n)?, Levelwise::Projective)),
    }
}

fn check_status(r: &CheckReport) -> i32 {
    if r.passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn parse_module(ring: &Ring, rank: Option<usize>, spec: Option<&str>) -> anyhow::Result<Module> {
    match (rank, spec) {
        (_, Some(s)) => {
            let factors = s
                .split(',')
                .map(|t| {
                    let t = t.trim();
                    let f = if t == "free" { Factor::Free } else { Factor::Torsion(t.parse().context("bad factor")?) };
                    ring.check_factor(&f)?;
                    Ok(f)
                })
                .collect::<anyhow::Result<_>>()?;
            Ok(Module::new(ring, factors)?)
        }
        (Some(r), None) => Ok(Module::free(ring, r)),
        (None, None) => Ok(Module::free(ring, 1)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(invalid)
}

fn dispatch(cmd: Command) -> Result<Output, Exit> {
    match cmd {
        Command::Validate { file, .. } => {
            let inst = load(&file)?;
            let v = validate_templicial(&inst.module).map_err(invalid)?;
            let input = file.display().to_string();
            Ok(Output {
                status: if v.passed() { EXIT_PASS } else { EXIT_INVALID },
                json: report::envelope("validate", Some(&input), report::validation_json(&v)),
                text: report::validation_text(&v),
            })
        }
        Command::Check { file, property, max_level: ml, .. } => {
            let inst = load_valid(&file)?;
            let n = max_level(&inst.module, ml)?;
            let r = run_property(&inst.module, property, n).map_err(invalid)?;
            let input = file.display().to_string();
            let mut body = report::check_json(&r);
            body["max_level"] = json!(n);
            Ok(Output { status: check_status(&r), json: report::envelope("check", Some(&input), body), text: report::check_text(&r) })
        }
        Command::Basechange { file, to, output } => {
            let inst = load_valid(&file)?;
            let target: Ring = to.parse().map_err(invalid)?;
            let theta = RingExtension::new(inst.module.ring(), &target).map_err(invalid)?;
            let y = base_change_templicial(&theta, &inst.module).map_err(invalid)?;
            write_file(&output, &serialize_instance(&y, None))?;
            let text = format!("wrote {} over {target}\n", output.display());
            Ok(Output { status: EXIT_PASS, json: json!({}), text })
        }
        Command::Example { name, output, max_level } => {
            if max_level == 0 {
                return Err(Exit(EXIT_USAGE, anyhow!("--max-level must be positive")));
            }
            let x = builtin(&name, max_level)
                .map_err(|e| Exit(EXIT_USAGE, anyhow!(e).context(format!("builtins are {}", BUILTINS.join(", ")))))?;
            let deformation = (name == "paper_P_deformed").then(|| DeformationFile { target: "F_2".into(), fiber: None });
            write_file(&output, &serialize_instance(&x, deformation))?;
            Ok(Output { status: EXIT_PASS, json: json!({}), text: format!("wrote {}\n", output.display()) })
        }
        Command::Verify { file, theorem, module_rank, module, max_level: ml, no_diagnostics, .. } => {
            let inst = load_valid(&file)?;
            let n = max_level(&inst.module, ml)?;
            let diagnostics = !no_diagnostics;
            let r = match theorem {
                Theorem::Main | Theorem::DegprojLift => {
                    let pair = load_pair(&file, &inst).map_err(invalid)?;
                    if theorem == Theorem::Main {
                        verify_thm_main(&pair, n, diagnostics)
                    } else {
                        verify_degproj_lift(&pair, n, diagnostics)
                    }
                }
                Theorem::WingsTensor => {
                    let m = parse_module(inst.module.ring(), module_rank, module.as_deref()).map_err(invalid)?;
                    verify_wings_tensor(&inst.module, &m, n, diagnostics)
                }
            }
            .map_err(invalid)?;
            let status = match r.outcome {
                Outcome::Pass => EXIT_PASS,
                Outcome::Fail => EXIT_FAIL,
                Outcome::HypothesisFailure => EXIT_HYPOTHESIS,
            };
            let input = file.display().to_string();
            let mut body = report::harness_json(&r);
            body["max_level"] = json!(n);
            Ok(Output { status, json: report::envelope("verify", Some(&input), body), text: report::harness_text(&r) })
        }
        Command::Report { files, max_level: ml, .. } => {
            let mut entries = Vec::new();
            let mut text = String::new();
            let mut status = EXIT_PASS;
            let mut items: Vec<(String, TemplicialModule)> = Vec::new();
            if files.is_empty() {
                for name in BUILTINS {
                    items.push((name.to_string(), builtin(name, BUILTIN_LEVEL).map_err(invalid)?));
                }
            } else {
                for f in &files {
                    items.push((f.display().to_string(), load(f)?.module));
                }
            }
            for (name, x) in items {
                let n = max_level(&x, ml)?;
                let v = validate_templicial(&x).map_err(invalid)?;
                let mut checks = Vec::new();
                text += &format!("== {name} over {} (max level {n})\n", x.ring());
                text += &report::validation_text(&v);
                if v.passed() {
                    for p in Property::value_variants() {
                        let r = run_property(&x, *p, n).map_err(invalid)?;
                        text += &report::check_text(&r);
                        checks.push(report::check_json(&r));
                    }
                } else {
                    status = EXIT_INVALID;
                }
                entries.push(json!({
                    "input": name,
                    "ring": x.ring().to_string(),
                    "max_level": n,
                    "validation": report::validation_json(&v),
                    "checks": checks,
                }));
            }
            Ok(Output { status, json: report::envelope("report", None, json!(entries)), text })
        }
    }
}

/// Entry point of the binary.
pub fn main_exit() -> ! {
    let code = run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code)
}
