//! Batch scripts: parse directives, run them against an accumulating
//! context, and report results.
//!
//! A script is a sequence of directives, one per line; `#` starts a comment.
//!
//! ```text
//! assume f : O -> O
//! norm (\z:O. z) yes : O --expect yes
//! conv f = \x:O. f x : O -> O --expect true
//! injtp (O -> O) = (O -> O) --expect equal O, O
//! moneq (mu (gen a) eps) = (gen a) --expect true
//! monnorm (mu (gen a) (gen b)) --expect [a b]
//! ```
//!
//! `--expect <value>` makes a directive self-checking: the value is compared
//! byte for byte against the directive's rendered outcome. Semantic results
//! like `false` or `unequal` are ordinary outcomes, never errors; only parse
//! and type problems abort a run (or are recorded per directive under
//! keep-going mode).
//!
//! Directives are resolved and type-checked in order, because `assume`
//! extends the context; the checked jobs are then pure and independent, so
//! the heavy normalization work runs in parallel when the `parallel` feature
//! is enabled. Reports are assembled in input order either way.

use std::time::Instant;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::monoid::{eval_expr, expr_eq, print_list, FreeList, MonExpr};
use crate::nbe::{conv, fun_tp_injective, normalize, InjectivityVerdict, NbeError};
use crate::nf::NfTm;
use crate::surface::{
    is_ident, parse_mon_expr, parse_term, parse_type, print_nf, print_nftp, resolve, NamedTerm,
};
use crate::syntax::{check, Context, Term, Type};

/// One line of a script.
#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    /// Bind a fresh name in the ambient context.
    Assume(String, Type),
    /// Normalize a term at a type.
    Norm(NamedTerm, Type),
    /// Decide convertibility of two terms at a type.
    Conv(NamedTerm, NamedTerm, Type),
    /// Compare two function types through normalization.
    InjTp(Type, Type),
    /// Decide the word problem for two monoid expressions.
    MonEq(MonExpr, MonExpr),
    /// Normalize a monoid expression to its list form.
    MonNorm(MonExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {detail}")]
    Directive { line: usize, detail: String },
}

/// Result of one directive.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Assumed,
    Normal { nf: NfTm, pretty: String },
    Convertible(bool),
    Injectivity(InjectivityVerdict),
    MonoidEqual(bool),
    MonoidNormal { list: FreeList, pretty: String },
    Error(String),
}

impl Outcome {
    /// The canonical textual rendering, used for human output and for
    /// `--expect` comparison.
    pub fn display_string(&self) -> String {
        match self {
            Outcome::Assumed => "ok".to_string(),
            Outcome::Normal { pretty, .. } => pretty.clone(),
            Outcome::Convertible(b) | Outcome::MonoidEqual(b) => b.to_string(),
            Outcome::Injectivity(InjectivityVerdict::Unequal) => "unequal".to_string(),
            Outcome::Injectivity(InjectivityVerdict::Equal { dom, cod }) => {
                format!("equal {}, {}", print_nftp(dom), print_nftp(cod))
            }
            Outcome::MonoidNormal { pretty, .. } => pretty.clone(),
            Outcome::Error(msg) => format!("error: {msg}"),
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, Outcome::Error(_))
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Outcome::Assumed => s.serialize_str("ok"),
            Outcome::Convertible(b) | Outcome::MonoidEqual(b) => s.serialize_bool(*b),
            Outcome::Normal { nf, pretty } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("nf", nf)?;
                m.serialize_entry("pretty", pretty)?;
                m.end()
            }
            Outcome::Injectivity(InjectivityVerdict::Unequal) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("verdict", "unequal")?;
                m.end()
            }
            Outcome::Injectivity(InjectivityVerdict::Equal { dom, cod }) => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("verdict", "equal")?;
                m.serialize_entry("dom", dom)?;
                m.serialize_entry("cod", cod)?;
                m.end()
            }
            Outcome::MonoidNormal { list, pretty } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("list", list)?;
                m.serialize_entry("pretty", pretty)?;
                m.end()
            }
            Outcome::Error(msg) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("error", msg)?;
                m.end()
            }
        }
    }
}

/// One row of a report: the directive as written, its outcome, wall time,
/// and expectation bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub directive: String,
    pub outcome: Outcome,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_ok: Option<bool>,
}

impl ReportEntry {
    pub fn new(directive: String, outcome: Outcome, ms: u64, expect: Option<String>) -> Self {
        let expect_ok = expect
            .as_ref()
            .map(|e| *e == outcome.display_string());
        ReportEntry {
            directive,
            outcome,
            ms,
            expect,
            expect_ok,
        }
    }
}

/// All directive results of a script run, in input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// True iff no directive errored and every expectation matched.
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| {
            !e.outcome.is_error() && e.expect_ok.unwrap_or(true)
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScriptOptions {
    /// Record parse/type errors as per-directive outcomes and keep running
    /// instead of aborting at the first one.
    pub keep_going: bool,
}

/// Split a raw line into directive text and an optional expectation.
/// Comments are stripped first; blank lines yield `None`.
fn split_line(raw: &str) -> Option<(String, Option<String>)> {
    let uncommented = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    };
    let (body, expect) = match uncommented.find("--expect") {
        Some(i) => {
            let value = uncommented[i + "--expect".len()..].trim().to_string();
            (&uncommented[..i], Some(value))
        }
        None => (uncommented, None),
    };
    let body = body.trim();
    if body.is_empty() {
        return None;
    }
    Some((body.to_string(), expect))
}

/// Parse one directive. The last top-level `:` separates a term from its
/// type (types contain no colons), and `=` separates the two sides of a
/// comparison (terms and types contain no `=`).
pub fn parse_directive(body: &str) -> Result<Directive, String> {
    let (keyword, rest) = match body.split_once(char::is_whitespace) {
        Some((k, r)) => (k, r.trim()),
        None => (body, ""),
    };
    match keyword {
        "assume" => {
            let (name, ty) = rest
                .split_once(':')
                .ok_or("assume takes `name : type`")?;
            let name = name.trim();
            if !is_ident(name) {
                return Err(format!("`{name}` is not a valid identifier"));
            }
            let ty = parse_type(ty).map_err(|e| e.to_string())?;
            Ok(Directive::Assume(name.to_string(), ty))
        }
        "norm" => {
            let split = rest.rfind(':').ok_or("norm takes `term : type`")?;
            let term = parse_term(&rest[..split]).map_err(|e| e.to_string())?;
            let ty = parse_type(&rest[split + 1..]).map_err(|e| e.to_string())?;
            Ok(Directive::Norm(term, ty))
        }
        "conv" => {
            let split = rest.rfind(':').ok_or("conv takes `term = term : type`")?;
            let (lhs, rhs) = rest[..split]
                .split_once('=')
                .ok_or("conv takes `term = term : type`")?;
            let t = parse_term(lhs).map_err(|e| e.to_string())?;
            let u = parse_term(rhs).map_err(|e| e.to_string())?;
            let ty = parse_type(&rest[split + 1..]).map_err(|e| e.to_string())?;
            Ok(Directive::Conv(t, u, ty))
        }
        "injtp" => {
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or("injtp takes `type = type`")?;
            let a = parse_type(lhs).map_err(|e| e.to_string())?;
            let b = parse_type(rhs).map_err(|e| e.to_string())?;
            Ok(Directive::InjTp(a, b))
        }
        "moneq" => {
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or("moneq takes `mexpr = mexpr`")?;
            let u = parse_mon_expr(lhs).map_err(|e| e.to_string())?;
            let v = parse_mon_expr(rhs).map_err(|e| e.to_string())?;
            Ok(Directive::MonEq(u, v))
        }
        "monnorm" => {
            let e = parse_mon_expr(rest).map_err(|e| e.to_string())?;
            Ok(Directive::MonNorm(e))
        }
        other => Err(format!("unknown directive `{other}`")),
    }
}

/// A directive after resolution and type checking: pure data, independent of
/// every other job, safe to execute in any order.
#[derive(Debug, Clone)]
enum Job {
    Assume,
    Norm {
        ctx: Context,
        names: Vec<String>,
        ty: Type,
        term: Term,
    },
    Conv {
        ctx: Context,
        ty: Type,
        lhs: Term,
        rhs: Term,
    },
    InjTp {
        dom_a: Type,
        cod_a: Type,
        dom_b: Type,
        cod_b: Type,
    },
    MonEq(MonExpr, MonExpr),
    MonNorm(MonExpr),
    Failed(String),
}

fn nbe_err(e: NbeError) -> Outcome {
    Outcome::Error(e.to_string())
}

fn execute(job: &Job) -> Outcome {
    match job {
        Job::Assume => Outcome::Assumed,
        Job::Norm {
            ctx,
            names,
            ty,
            term,
        } => match normalize(ctx, ty, term) {
            Ok(nf) => {
                let pretty = print_nf(names, &nf);
                Outcome::Normal { nf, pretty }
            }
            Err(e) => nbe_err(e),
        },
        Job::Conv { ctx, ty, lhs, rhs } => match conv(ctx, ty, lhs, rhs) {
            Ok(b) => Outcome::Convertible(b),
            Err(e) => nbe_err(e),
        },
        Job::InjTp {
            dom_a,
            cod_a,
            dom_b,
            cod_b,
        } => Outcome::Injectivity(fun_tp_injective(dom_a, cod_a, dom_b, cod_b)),
        Job::MonEq(u, v) => Outcome::MonoidEqual(expr_eq(u, v)),
        Job::MonNorm(e) => {
            let list = eval_expr(e);
            let pretty = print_list(&list);
            Outcome::MonoidNormal { list, pretty }
        }
        Job::Failed(msg) => Outcome::Error(msg.clone()),
    }
}

fn execute_timed(job: &Job) -> (Outcome, u64) {
    let start = Instant::now();
    let outcome = execute(job);
    (outcome, start.elapsed().as_millis() as u64)
}

/// Run a script. Directives execute in input order against the accumulated
/// `assume` context; results are independent of evaluation order.
pub fn run_script(src: &str, opts: &ScriptOptions) -> Result<Report, ScriptError> {
    let mut ctx = Context::empty();
    let mut names: Vec<String> = Vec::new();
    let mut jobs: Vec<(String, Option<String>, Job)> = Vec::new();

    for (lineno, raw) in src.lines().enumerate() {
        let line = lineno + 1;
        let Some((body, expect)) = split_line(raw) else {
            continue;
        };
        let directive = match parse_directive(&body) {
            Ok(d) => d,
            Err(message) => {
                if opts.keep_going {
                    jobs.push((body, expect, Job::Failed(message)));
                    continue;
                }
                return Err(ScriptError::Parse { line, message });
            }
        };
        match prepare(&mut ctx, &mut names, directive) {
            Ok(job) => jobs.push((body, expect, job)),
            Err(detail) => {
                if opts.keep_going {
                    jobs.push((body, expect, Job::Failed(detail)));
                    continue;
                }
                return Err(ScriptError::Directive { line, detail });
            }
        }
    }

    let outcomes = run_jobs(&jobs);
    let entries = jobs
        .into_iter()
        .zip(outcomes)
        .map(|((body, expect, _), (outcome, ms))| ReportEntry::new(body, outcome, ms, expect))
        .collect();
    Ok(Report { entries })
}

#[cfg(feature = "parallel")]
fn run_jobs(jobs: &[(String, Option<String>, Job)]) -> Vec<(Outcome, u64)> {
    jobs.par_iter().map(|(_, _, j)| execute_timed(j)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_jobs(jobs: &[(String, Option<String>, Job)]) -> Vec<(Outcome, u64)> {
    jobs.iter().map(|(_, _, j)| execute_timed(j)).collect()
}

/// Resolve and type-check one directive against the ambient context,
/// extending it on `assume`.
fn prepare(
    ctx: &mut Context,
    names: &mut Vec<String>,
    directive: Directive,
) -> Result<Job, String> {
    match directive {
        Directive::Assume(name, ty) => {
            if names.contains(&name) {
                return Err(format!("duplicate assumption `{name}`"));
            }
            names.push(name);
            *ctx = ctx.extend(ty);
            Ok(Job::Assume)
        }
        Directive::Norm(named, ty) => {
            let term = resolve(names, &named).map_err(|e| e.to_string())?;
            check(ctx, &term, &ty).map_err(|e| e.to_string())?;
            Ok(Job::Norm {
                ctx: ctx.clone(),
                names: names.clone(),
                ty,
                term,
            })
        }
        Directive::Conv(named_l, named_r, ty) => {
            let lhs = resolve(names, &named_l).map_err(|e| e.to_string())?;
            let rhs = resolve(names, &named_r).map_err(|e| e.to_string())?;
            check(ctx, &lhs, &ty).map_err(|e| e.to_string())?;
            check(ctx, &rhs, &ty).map_err(|e| e.to_string())?;
            Ok(Job::Conv {
                ctx: ctx.clone(),
                ty,
                lhs,
                rhs,
            })
        }
        Directive::InjTp(a, b) => match (a, b) {
            (Type::Fun(dom_a, cod_a), Type::Fun(dom_b, cod_b)) => Ok(Job::InjTp {
                dom_a: *dom_a,
                cod_a: *cod_a,
                dom_b: *dom_b,
                cod_b: *cod_b,
            }),
            _ => Err("injtp requires function types on both sides".to_string()),
        },
        Directive::MonEq(u, v) => Ok(Job::MonEq(u, v)),
        Directive::MonNorm(e) => Ok(Job::MonNorm(e)),
    }
}

/// Build a single-entry report outside of any script, for one-shot queries.
pub fn single_entry(directive: String, outcome: Outcome, ms: u64) -> Report {
    Report {
        entries: vec![ReportEntry::new(directive, outcome, ms, None)],
    }
}
