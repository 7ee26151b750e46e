//! Batch driver for the normalization kernel.
//!
//! Runs script files of directives (`check`, `monoid`) or one-shot queries
//! (`norm`, `conv`, `injtp`). `--json` switches every report to a stable
//! machine-readable form; exit codes are 0 for clean runs, 1 for script or
//! type errors (including failed `--expect` annotations), 2 for usage
//! errors.

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use nbe_core::nbe::{conv, fun_tp_injective, normalize};
use nbe_core::script::{run_script, single_entry, Outcome, Report, ScriptOptions};
use nbe_core::surface::{is_ident, parse_term_in, parse_type, print_nf};
use nbe_core::syntax::{check, Context, Type};

#[derive(Parser)]
#[command(name = "nbe", version, about = "Normalization, conversion, and injectivity queries for a small typed lambda calculus")]
struct Cli {
    /// Emit structured JSON reports instead of human-readable output
    #[arg(long, global = true)]
    json: bool,

    /// Record script errors per directive and keep running
    #[arg(long, global = true)]
    keep_going: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script file of directives
    Check { file: PathBuf },

    /// Normalize a term at a type
    Norm {
        /// The term to normalize
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// The type to normalize at
        #[arg(short = 't', long = "type")]
        ty: String,
        /// Ambient context, e.g. "f : O -> O, v : O"
        #[arg(short = 'c', long = "context")]
        context: Option<String>,
    },

    /// Decide convertibility of two terms at a type
    Conv {
        /// Left-hand term
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Right-hand term
        #[arg(long = "e2")]
        expr2: String,
        /// The type to compare at
        #[arg(short = 't', long = "type")]
        ty: String,
        /// Ambient context, e.g. "f : O -> O, v : O"
        #[arg(short = 'c', long = "context")]
        context: Option<String>,
    },

    /// Compare two function types through normalization
    Injtp {
        /// Left-hand type
        #[arg(short = 'a', long = "lhs")]
        a: String,
        /// Right-hand type
        #[arg(short = 'b', long = "rhs")]
        b: String,
    },

    /// Run a script file of monoid directives
    Monoid { file: PathBuf },
}

fn color_enabled() -> bool {
    match std::env::var("NBE_COLOR").ok().as_deref() {
        Some("1") => true,
        Some("0") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

fn paint(s: &str, code: &str, on: bool) -> String {
    if on {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn print_report_human(report: &Report) {
    let color = color_enabled();
    for entry in &report.entries {
        println!("{}", entry.directive);
        let ok = !entry.outcome.is_error() && entry.expect_ok.unwrap_or(true);
        let rendered = entry.outcome.display_string();
        let code = if ok { "32" } else { "31" };
        println!("  => {}", paint(&rendered, code, color));
        if let (Some(expect), Some(false)) = (&entry.expect, entry.expect_ok) {
            println!("  !! expected {}", paint(expect, "31", color));
        }
    }
    let failed = report
        .entries
        .iter()
        .filter(|e| e.outcome.is_error() || e.expect_ok == Some(false))
        .count();
    println!("{} directives, {} failed", report.entries.len(), failed);
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print_report_human(report);
    }
    if report.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn run_script_file(path: &PathBuf, json: bool, keep_going: bool) -> ExitCode {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return fail(format_args!("cannot read {}: {e}", path.display())),
    };
    match run_script(&src, &ScriptOptions { keep_going }) {
        Ok(report) => emit(&report, json),
        Err(e) => fail(e),
    }
}

/// Parse "f : O -> O, v : O" into a context and its names, leftmost
/// binding outermost.
fn parse_context(src: &str) -> Result<(Context, Vec<String>), String> {
    let mut ctx = Context::empty();
    let mut names = Vec::new();
    for binding in src.split(',') {
        let binding = binding.trim();
        if binding.is_empty() {
            continue;
        }
        let (name, ty) = binding
            .split_once(':')
            .ok_or_else(|| format!("binding `{binding}` is not of the form `name : type`"))?;
        let name = name.trim();
        if !is_ident(name) {
            return Err(format!("`{name}` is not a valid identifier"));
        }
        if names.iter().any(|n| n == name) {
            return Err(format!("duplicate context name `{name}`"));
        }
        let ty = parse_type(ty).map_err(|e| e.to_string())?;
        names.push(name.to_string());
        ctx = ctx.extend(ty);
    }
    Ok((ctx, names))
}

fn cmd_norm(expr: &str, ty: &str, context: Option<&str>, json: bool) -> ExitCode {
    let (ctx, names) = match parse_context(context.unwrap_or("")) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let ty = match parse_type(ty) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let term = match parse_term_in(&names, expr) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    if let Err(e) = check(&ctx, &term, &ty) {
        return fail(e);
    }
    let start = Instant::now();
    let nf = match normalize(&ctx, &ty, &term) {
        Ok(nf) => nf,
        Err(e) => return fail(e),
    };
    let ms = start.elapsed().as_millis() as u64;
    let pretty = print_nf(&names, &nf);
    if json {
        let directive = format!("norm {} : {}", expr.trim(), ty);
        let report = single_entry(directive, Outcome::Normal { nf, pretty }, ms);
        println!("{}", report.to_json());
    } else {
        println!("{pretty}");
    }
    ExitCode::SUCCESS
}

fn cmd_conv(expr: &str, expr2: &str, ty: &str, context: Option<&str>, json: bool) -> ExitCode {
    let (ctx, names) = match parse_context(context.unwrap_or("")) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let ty = match parse_type(ty) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let lhs = match parse_term_in(&names, expr) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let rhs = match parse_term_in(&names, expr2) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let start = Instant::now();
    let verdict = match conv(&ctx, &ty, &lhs, &rhs) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let ms = start.elapsed().as_millis() as u64;
    if json {
        let directive = format!("conv {} = {} : {}", expr.trim(), expr2.trim(), ty);
        let report = single_entry(directive, Outcome::Convertible(verdict), ms);
        println!("{}", report.to_json());
    } else {
        println!("{verdict}");
    }
    ExitCode::SUCCESS
}

fn cmd_injtp(a: &str, b: &str, json: bool) -> ExitCode {
    let lhs = match parse_type(a) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let rhs = match parse_type(b) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let ((da, ca), (db, cb)) = match (lhs, rhs) {
        (Type::Fun(da, ca), Type::Fun(db, cb)) => ((*da, *ca), (*db, *cb)),
        _ => return fail("injtp requires function types on both sides"),
    };
    let start = Instant::now();
    let verdict = fun_tp_injective(&da, &ca, &db, &cb);
    let ms = start.elapsed().as_millis() as u64;
    let outcome = Outcome::Injectivity(verdict);
    if json {
        let directive = format!("injtp {} = {}", a.trim(), b.trim());
        let report = single_entry(directive, outcome, ms);
        println!("{}", report.to_json());
    } else {
        println!("{}", outcome.display_string());
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    // accept the documented single-dash form of the second term flag
    let args = std::env::args().map(|a| if a == "-e2" { "--e2".to_string() } else { a });
    let cli = Cli::parse_from(args);
    match &cli.command {
        Command::Check { file } => run_script_file(file, cli.json, cli.keep_going),
        Command::Monoid { file } => run_script_file(file, cli.json, cli.keep_going),
        Command::Norm { expr, ty, context } => {
            cmd_norm(expr, ty, context.as_deref(), cli.json)
        }
        Command::Conv {
            expr,
            expr2,
            ty,
            context,
        } => cmd_conv(expr, expr2, ty, context.as_deref(), cli.json),
        Command::Injtp { a, b } => cmd_injtp(a, b, cli.json),
    }
}
