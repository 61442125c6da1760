//! Batch front end: consistency checks, model extraction, the
//! propositional encoding, and the first-order export.
//!
//! Exit codes: 0 for a consistent verdict (or agreement under
//! `sat-encode --check`), 1 for inconsistent (or disagreement), 2 for usage,
//! parse or well-formedness errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use setlog::solver::{BranchOrder, SolveResult, SolverConfig};
use setlog::{fol, parse, sat, Signature, SourceText, Term};

#[derive(Parser)]
#[command(name = "setlog", version, about = "Consistency checking for feature terms with set descriptions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SolveOpts {
    /// Safety fuse on rule applications.
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    /// Randomize branch order, reproducibly, from this seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl SolveOpts {
    fn config(&self, trace: bool) -> SolverConfig {
        SolverConfig {
            max_steps: self.max_steps,
            branch_order: match self.seed {
                Some(s) => BranchOrder::Randomized(s),
                None => BranchOrder::Deterministic,
            },
            trace,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check consistency of the term in FILE.
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Print the rule-application trace to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Check consistency and write the extracted model as JSON.
    Model {
        file: PathBuf,
        /// Where to write the model.
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Encode a propositional formula as a term.
    SatEncode {
        /// Formula literal, e.g. "(a \/ ~a)".
        formula: Option<String>,
        /// Read the formula from a file instead.
        #[arg(long, conflicts_with = "formula")]
        file: Option<PathBuf>,
        /// Read a DIMACS CNF file instead.
        #[arg(long, conflicts_with_all = ["formula", "file"])]
        dimacs: Option<PathBuf>,
        /// Print the encoded term.
        #[arg(long)]
        emit: bool,
        /// Solve the encoding and compare against the truth table.
        #[arg(long, conflicts_with = "emit")]
        check: bool,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Translate the term in FILE into the existential-universal fragment.
    TranslateFol {
        file: PathBuf,
        /// Where to write the clause listing (stdout if omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, default_value = "tptp-like")]
        format: String,
    },
    /// Check consistency and print the rule-application trace.
    Trace {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
}

/// Errors on the input side: exit 2.
fn load_term(path: &PathBuf) -> Result<Term, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let src = SourceText::new(text, path.display().to_string());
    let mut sig = Signature::new();
    let term = parse(&src, &mut sig).map_err(|e| e.to_string())?;
    let report = term.validate(&sig);
    if !report.is_empty() {
        let mut msg = String::new();
        for violation in &report {
            msg.push_str(&format!(
                "{}: {}: `{}`\n",
                path.display(),
                violation.rule,
                violation.subterm
            ));
        }
        return Err(msg.trim_end().to_string());
    }
    Ok(term.desugar())
}

/// A root variable not occurring in the term.
fn pick_root(term: &Term) -> String {
    let used = term.free_vars();
    if !used.contains("x") {
        return "x".to_string();
    }
    let mut i = 0;
    loop {
        let cand = format!("x{i}");
        if !used.contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

fn solve_term(term: &Term, config: &SolverConfig) -> Result<(String, SolveResult), String> {
    let root = pick_root(term);
    let result = setlog::solve(term, &root, config).map_err(|e| e.to_string())?;
    Ok((root, result))
}

fn verdict_line(result: &SolveResult) -> (String, ExitCode) {
    match result {
        SolveResult::Consistent { .. } => ("CONSISTENT".to_string(), ExitCode::SUCCESS),
        SolveResult::Inconsistent {
            clashes_per_branch, ..
        } => {
            let first = &clashes_per_branch[0];
            (
                format!("INCONSISTENT clash={} var={}", first.condition, first.witness),
                ExitCode::from(1),
            )
        }
    }
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("setlog: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, opts, trace } => {
            let term = match load_term(&file) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let (_, result) = match solve_term(&term, &opts.config(trace)) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            if trace {
                for ev in result.trace() {
                    eprintln!("{ev}");
                }
            }
            let (line, code) = verdict_line(&result);
            println!("{line}");
            code
        }
        Command::Model { file, out, opts } => {
            let term = match load_term(&file) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let (_, result) = match solve_term(&term, &opts.config(false)) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            if let SolveResult::Consistent { model, .. } = &result {
                let json = model.to_json_string();
                if let Err(e) = std::fs::write(&out, json + "\n") {
                    return fail(&format!("cannot write {}: {e}", out.display()));
                }
            }
            let (line, code) = verdict_line(&result);
            println!("{line}");
            code
        }
        Command::SatEncode {
            formula,
            file,
            dimacs,
            emit,
            check,
            opts,
        } => {
            let phi = if let Some(path) = dimacs {
                let text = match std::fs::read_to_string(&path) {
                    Ok(t) => t,
                    Err(e) => return fail(&format!("cannot read {}: {e}", path.display())),
                };
                sat::parse_dimacs(&text)
            } else {
                let text = if let Some(path) = file {
                    match std::fs::read_to_string(&path) {
                        Ok(t) => t,
                        Err(e) => return fail(&format!("cannot read {}: {e}", path.display())),
                    }
                } else if let Some(lit) = formula {
                    lit
                } else {
                    return fail("sat-encode needs a formula, --file or --dimacs");
                };
                sat::parse_prop(text.trim())
            };
            let phi = match phi {
                Ok(p) => p,
                Err(e) => return fail(&e.to_string()),
            };
            let encoding = match sat::encode(&phi) {
                Ok(e) => e,
                Err(e) => return fail(&e.to_string()),
            };
            if emit {
                println!("{}", setlog::render(&encoding.term));
                return ExitCode::SUCCESS;
            }
            if !check {
                return fail("sat-encode needs --emit or --check");
            }
            let (_, result) = match solve_term(&encoding.term, &opts.config(false)) {
                Ok(r) => r,
                Err(e) => return fail(&e.to_string()),
            };
            let table = match sat::truth_table_sat(&phi) {
                Ok(t) => t,
                Err(e) => return fail(&e.to_string()),
            };
            let solver = result.is_consistent();
            let agree = solver == table;
            println!(
                "solver={} sat={} {}",
                if solver { "CONSISTENT" } else { "INCONSISTENT" },
                if table { "TRUE" } else { "FALSE" },
                if agree { "AGREE" } else { "DISAGREE" }
            );
            if agree {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::TranslateFol { file, out, format } => {
            if format != "tptp-like" {
                return fail(&format!("unknown format `{format}`"));
            }
            let term = match load_term(&file) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let root = pick_root(&term);
            let output = match fol::translate(&root, &term) {
                Ok(o) => o,
                Err(e) => return fail(&e.to_string()),
            };
            let rendered = fol::render_output(&output);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, rendered) {
                        return fail(&format!("cannot write {}: {e}", path.display()));
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::SUCCESS
        }
        Command::Trace { file, opts } => {
            let term = match load_term(&file) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let (root, result) = match solve_term(&term, &opts.config(true)) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            println!("root ${root} = {term}");
            for ev in result.trace() {
                println!("{ev}");
            }
            let (line, code) = verdict_line(&result);
            println!("{line}");
            code
        }
    }
}
