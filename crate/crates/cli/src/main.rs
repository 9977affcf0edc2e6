use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sdg_cli::demo::{demo, DemoTarget};
use sdg_cli::{suites, Suite, SuiteConfig};
use sdg_core::connection::ConnectionSymbol;
use sdg_core::liegroup::GroupTag;
use sdg_core::rational::parse_rational;

#[derive(Parser)]
#[command(name = "sdg", version, about = "Exact checks of second-order infinitesimal geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Gl2,
    Gl3,
    Heisenberg,
}

impl From<GroupArg> for GroupTag {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Gl2 => GroupTag::Gl(2),
            GroupArg::Gl3 => GroupTag::Gl(3),
            GroupArg::Heisenberg => GroupTag::Heisenberg,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and report every check.
    Verify {
        #[arg(long, env = "SDG_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Chart dimension for the generic connection and group-law checks.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        dim: u64,
        /// Sampled coefficients are p/q with |p|, q up to this bound.
        #[arg(long, default_value_t = sdg_core::sample::DEFAULT_RANGE, value_parser = clap::value_parser!(u64).range(1..))]
        range: u64,
        /// Comma-separated subset of weil, spaces, calculus, connection, igroup, liegroup.
        #[arg(long, value_delimiter = ',', value_parser = parse_suite)]
        suites: Vec<Suite>,
        #[arg(long, value_enum, default_value = "gl2")]
        group: GroupArg,
        /// Check neighbourhood preconditions before every operation.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        strict: bool,
        /// Also run corrupted group laws that must be caught.
        #[arg(long)]
        negative_controls: bool,
        /// Record per-check wall-clock time (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Trace the chart quantities for two tangent directions.
    Demo {
        /// A built-in group (gl2, gl3, heisenberg) or a connection-symbol JSON file.
        target: String,
        /// First direction: a matrix unit such as E12, a coordinate such as e1, or a list like 1,0,-1/2.
        v1: String,
        /// Second direction.
        v2: String,
        /// Base point for a connection file, as a comma-separated list (default: origin).
        #[arg(long)]
        base: Option<String>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn fail_usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Verify {
            seed,
            trials,
            dim,
            range,
            suites: selected,
            group,
            strict,
            negative_controls,
            timings,
            out,
            format,
        } => {
            let cfg = SuiteConfig {
                seed,
                trials: trials as usize,
                dim: dim as usize,
                coefficient_range: range,
                suites: if selected.is_empty() {
                    Suite::ALL.to_vec()
                } else {
                    selected
                },
                group: group.into(),
                strict,
                negative_controls,
            };
            if let Err(e) = cfg.validate() {
                return fail_usage(&e);
            }
            let report = suites::run_with_timings(&cfg, timings);
            let body = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    print!("{}", summary_line(&report));
                }
                None => print!("{body}"),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Demo { target, v1, v2, base } => {
            let target = match target.parse::<GroupTag>() {
                Ok(tag) => DemoTarget::Group(tag),
                Err(_) => {
                    let text = match std::fs::read_to_string(&target) {
                        Ok(t) => t,
                        Err(e) => {
                            return fail_usage(&format!("`{target}` is neither a group nor a readable file: {e}"))
                        }
                    };
                    let symbol = match ConnectionSymbol::from_json(&text) {
                        Ok(s) => s,
                        Err(e) => return fail_usage(&format!("{target}: {e}")),
                    };
                    let base = match base {
                        Some(b) => match b.split(',').map(|x| parse_rational(x.trim())).collect() {
                            Ok(v) => v,
                            Err(e) => return fail_usage(&format!("--base: {e}")),
                        },
                        None => vec![sdg_core::rational::int(0); symbol.dim()],
                    };
                    DemoTarget::Connection { symbol, base }
                }
            };
            let dirs = target
                .parse_direction(&v1)
                .and_then(|a| Ok((a, target.parse_direction(&v2)?)));
            let (a, b) = match dirs {
                Ok(d) => d,
                Err(e) => return fail_usage(&e),
            };
            match demo(&target, &a, &b) {
                Ok(trace) => {
                    print!("{trace}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

fn summary_line(report: &sdg_cli::Report) -> String {
    let s = &report.summary;
    format!(
        "{} checks: {} passed, {} failed, {} expected failures\n",
        s.total, s.pass, s.fail, s.expected_fail
    )
}
