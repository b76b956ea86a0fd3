//! Command-line front end: validate models, build state spaces, run the
//! deadlock and termination detectors, and export DOT, Promela or JSON.
//!
//! Exit codes: 0 success, 1 model or limit error, 2 I/O error, 3 policy
//! failure (`--fail-on-deadlock` with a deadlock found).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use imds::ctl::{parse_formula, Evaluator};
use imds::detect::check_all;
use imds::export::{
    build_report, report_json, text_report, to_dot, to_promela, DotOptions, LabelMode,
};
use imds::lts::{Lts, LtsLimits};
use imds::model::{validate_spec, SourceView, SystemSpec};
use imds::parse::{load_source, render};

const EXIT_OK: u8 = 0;
const EXIT_MODEL: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_POLICY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "imds",
    version,
    about = "Deadlock and termination analysis for server/agent message-passing models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, instantiate and validate a model file
    Validate {
        /// Model source (.imds)
        file: PathBuf,
    },
    /// Build the reachable state space and run the detectors
    Check {
        file: PathBuf,
        /// Evaluate a single formula instead of the detector batch
        #[arg(long)]
        formula: Option<String>,
        /// Emit the machine-readable JSON report
        #[arg(long)]
        json: bool,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 3 when any deadlock verdict is TRUE
        #[arg(long)]
        fail_on_deadlock: bool,
        #[arg(long, default_value_t = LtsLimits::default().max_states)]
        max_states: usize,
        #[arg(long, default_value_t = LtsLimits::default().max_transitions)]
        max_transitions: usize,
    },
    /// Build the reachable state space and print its statistics
    Lts {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = LtsLimits::default().max_states)]
        max_states: usize,
        #[arg(long, default_value_t = LtsLimits::default().max_transitions)]
        max_transitions: usize,
    },
    /// Serialize the state space, the model or the analysis report
    Export {
        file: PathBuf,
        /// What to emit
        what: ExportKind,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Node limit for DOT rendering
        #[arg(long, default_value_t = 2000)]
        render_limit: usize,
        /// Label DOT nodes with full configurations instead of indices
        #[arg(long)]
        config_labels: bool,
        #[arg(long, default_value_t = LtsLimits::default().max_states)]
        max_states: usize,
        #[arg(long, default_value_t = LtsLimits::default().max_transitions)]
        max_transitions: usize,
    },
    /// Re-render the model grouped by servers or by agents
    Views {
        file: PathBuf,
        /// Target grouping
        #[arg(long, value_enum)]
        view: ViewKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    /// Graph description of the state space
    LtsDot,
    /// Spin model following the channel-per-pair scheme
    Promela,
    /// Canonical JSON analysis report
    ReportJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewKind {
    Server,
    Agent,
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Check {
            file,
            formula,
            json,
            out,
            fail_on_deadlock,
            max_states,
            max_transitions,
        } => cmd_check(
            &file,
            formula.as_deref(),
            json,
            out.as_deref(),
            fail_on_deadlock,
            LtsLimits {
                max_states,
                max_transitions,
            },
        ),
        Command::Lts {
            file,
            json,
            max_states,
            max_transitions,
        } => cmd_lts(
            &file,
            json,
            LtsLimits {
                max_states,
                max_transitions,
            },
        ),
        Command::Export {
            file,
            what,
            out,
            render_limit,
            config_labels,
            max_states,
            max_transitions,
        } => cmd_export(
            &file,
            what,
            out.as_deref(),
            render_limit,
            config_labels,
            LtsLimits {
                max_states,
                max_transitions,
            },
        ),
        Command::Views { file, view, out } => cmd_views(&file, view, out.as_deref()),
    }
}

/// Reads, parses, instantiates and validates; prints diagnostics to
/// standard error.
fn load_checked(path: &Path) -> Result<SystemSpec, u8> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(EXIT_IO);
        }
    };
    let loaded = match load_source(&text) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return Err(EXIT_MODEL);
        }
    };
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    let report = validate_spec(&loaded.spec);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if !report.errors.is_empty() {
        for e in &report.errors {
            eprintln!("error: {e}");
        }
        return Err(EXIT_MODEL);
    }
    Ok(loaded.spec)
}

fn emit(out: Option<&Path>, payload: &str) -> u8 {
    match out {
        None => {
            print!("{payload}");
            EXIT_OK
        }
        Some(path) => match std::fs::write(path, payload) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_IO
            }
        },
    }
}

fn build(spec: &SystemSpec, limits: &LtsLimits) -> Result<Lts, u8> {
    Lts::build(spec, limits).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_MODEL
    })
}

fn cmd_validate(file: &Path) -> u8 {
    match load_checked(file) {
        Ok(spec) => {
            eprintln!(
                "ok: {} agents, {} servers, {} actions",
                spec.agent_count(),
                spec.server_count(),
                spec.action_count()
            );
            EXIT_OK
        }
        Err(code) => code,
    }
}

fn cmd_check(
    file: &Path,
    formula: Option<&str>,
    json: bool,
    out: Option<&Path>,
    fail_on_deadlock: bool,
    limits: LtsLimits,
) -> u8 {
    let spec = match load_checked(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let lts = match build(&spec, &limits) {
        Ok(l) => l,
        Err(code) => return code,
    };

    if let Some(text) = formula {
        let f = match parse_formula(text, &spec) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_MODEL;
            }
        };
        let ev = Evaluator::new(&lts, &spec);
        let sat = ev.eval(&f);
        let holds = sat.contains(0);
        let payload = if json {
            let value = serde_json::json!({
                "formula": f.to_text(&spec),
                "holds": holds,
                "satisfying_states": sat.count(),
                "states": lts.state_count(),
            });
            format!("{}\n", serde_json::to_string_pretty(&value).unwrap())
        } else {
            format!(
                "formula {}: {} (satisfied by {} of {} states)\n",
                f.to_text(&spec),
                if holds { "TRUE" } else { "FALSE" },
                sat.count(),
                lts.state_count()
            )
        };
        return emit(out, &payload);
    }

    let analysis = check_all(&lts, &spec);
    let payload = if json {
        report_json(&build_report(&spec, &lts, &analysis))
    } else {
        text_report(&spec, &lts, &analysis)
    };
    let code = emit(out, &payload);
    if code == EXIT_OK && fail_on_deadlock && analysis.any_deadlock() {
        return EXIT_POLICY;
    }
    code
}

fn cmd_lts(file: &Path, json: bool, limits: LtsLimits) -> u8 {
    let spec = match load_checked(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let lts = match build(&spec, &limits) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let terminals = lts.terminal_states();
    let payload = if json {
        let value = serde_json::json!({
            "states": lts.stats().state_count,
            "transitions": lts.stats().transition_count,
            "terminals": {
                "clean": terminals.clean,
                "stuck": terminals.stuck,
            },
        });
        format!("{}\n", serde_json::to_string_pretty(&value).unwrap())
    } else {
        format!(
            "states: {}\ntransitions: {}\nclean terminals: {}\nstuck terminals: {}\n",
            lts.stats().state_count,
            lts.stats().transition_count,
            terminals.clean.len(),
            terminals.stuck.len()
        )
    };
    emit(None, &payload)
}

fn cmd_export(
    file: &Path,
    what: ExportKind,
    out: Option<&Path>,
    render_limit: usize,
    config_labels: bool,
    limits: LtsLimits,
) -> u8 {
    let spec = match load_checked(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let payload = match what {
        ExportKind::Promela => match to_promela(&spec) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_MODEL;
            }
        },
        ExportKind::LtsDot => {
            let lts = match build(&spec, &limits) {
                Ok(l) => l,
                Err(code) => return code,
            };
            let options = DotOptions {
                max_states: render_limit,
                label_mode: if config_labels {
                    LabelMode::Configuration
                } else {
                    LabelMode::Index
                },
            };
            match to_dot(&lts, &spec, &options) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_MODEL;
                }
            }
        }
        ExportKind::ReportJson => {
            let lts = match build(&spec, &limits) {
                Ok(l) => l,
                Err(code) => return code,
            };
            report_json(&build_report(&spec, &lts, &check_all(&lts, &spec)))
        }
    };
    emit(out, &payload)
}

fn cmd_views(file: &Path, view: ViewKind, out: Option<&Path>) -> u8 {
    let spec = match load_checked(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let rendered = render(
        &spec,
        match view {
            ViewKind::Server => SourceView::Server,
            ViewKind::Agent => SourceView::Agent,
        },
    );
    emit(out, &rendered)
}
