//! The inductive algebra of normal and neutral forms.
//!
//! Three sorts: normal types, neutral terms, and normal terms, with eight
//! constructors in total. Neutral terms name their head variable by de Bruijn
//! *level* so that a spine survives context extension unchanged; normal terms
//! are eta-long, meaning a normal inhabitant of an arrow type is always a
//! lambda and `Ne` wraps neutrals at the base type only. Well-formedness is
//! enforced by [`validate_nf`] rather than by type-indexed families, which
//! keeps the data plainly serializable and comparable.
//!
//! Serialization uses a `"con"` tag carrying the constructor name
//! (`"nfO"`, `"nfFun"`, `"neVar"`, `"neApp"`, `"nfNeO"`, `"nfYes"`, `"nfNo"`,
//! `"nfLam"`); this is the wire format of the CLI's `--json` output.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{lvl_to_idx, Context, Lvl, Term, Type};

/// Normal forms of types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "con")]
pub enum NfTp {
    #[serde(rename = "nfO")]
    O,
    #[serde(rename = "nfFun")]
    Fun { dom: Box<NfTp>, cod: Box<NfTp> },
}

impl NfTp {
    pub fn fun(dom: NfTp, cod: NfTp) -> NfTp {
        NfTp::Fun {
            dom: Box::new(dom),
            cod: Box::new(cod),
        }
    }
}

/// Neutral terms: a variable, or a neutral applied to a normal argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "con")]
pub enum NeTm {
    #[serde(rename = "neVar")]
    Var { ty: NfTp, level: usize },
    #[serde(rename = "neApp")]
    App {
        dom: NfTp,
        cod: NfTp,
        fun: Box<NeTm>,
        arg: Box<NfTm>,
    },
}

impl NeTm {
    pub fn var(ty: NfTp, level: Lvl) -> NeTm {
        NeTm::Var { ty, level: level.0 }
    }

    pub fn app(dom: NfTp, cod: NfTp, fun: NeTm, arg: NfTm) -> NeTm {
        NeTm::App {
            dom,
            cod,
            fun: Box::new(fun),
            arg: Box::new(arg),
        }
    }
}

/// Normal terms: the two constants, neutrals at base type, and lambdas.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "con")]
pub enum NfTm {
    #[serde(rename = "nfNeO")]
    Ne { ne: Box<NeTm> },
    #[serde(rename = "nfYes")]
    Yes,
    #[serde(rename = "nfNo")]
    No,
    #[serde(rename = "nfLam")]
    Lam {
        dom: NfTp,
        cod: NfTp,
        body: Box<NfTm>,
    },
}

impl NfTm {
    pub fn ne(e: NeTm) -> NfTm {
        NfTm::Ne { ne: Box::new(e) }
    }

    pub fn lam(dom: NfTp, cod: NfTp, body: NfTm) -> NfTm {
        NfTm::Lam {
            dom,
            cod,
            body: Box::new(body),
        }
    }

    /// Number of term-level constructors (type annotations not counted).
    pub fn size(&self) -> usize {
        match self {
            NfTm::Yes | NfTm::No => 1,
            NfTm::Ne { ne } => 1 + ne.size(),
            NfTm::Lam { body, .. } => 1 + body.size(),
        }
    }
}

impl NeTm {
    pub fn size(&self) -> usize {
        match self {
            NeTm::Var { .. } => 1,
            NeTm::App { fun, arg, .. } => 1 + fun.size() + arg.size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NfError {
    #[error("neutral variable level {level} out of range for context of length {ctx_len}")]
    LevelOutOfRange { level: usize, ctx_len: usize },
    #[error("ill-formed normal form at {path}: {reason}")]
    IllFormedNormal { path: String, reason: String },
}

/// Erase a normal type back to syntax. Total and injective.
pub fn erase_nftp(n: &NfTp) -> Type {
    match n {
        NfTp::O => Type::O,
        NfTp::Fun { dom, cod } => Type::fun(erase_nftp(dom), erase_nftp(cod)),
    }
}

/// Erase a normal term to the syntax it stands for, under `ctx`.
pub fn erase_nftm(ctx: &Context, n: &NfTm) -> Result<Term, NfError> {
    match n {
        NfTm::Yes => Ok(Term::Yes),
        NfTm::No => Ok(Term::No),
        NfTm::Ne { ne } => erase_netm(ctx, ne),
        NfTm::Lam { dom, body, .. } => {
            let dom_ty = erase_nftp(dom);
            let inner = ctx.extend(dom_ty.clone());
            Ok(Term::lam(dom_ty, erase_nftm(&inner, body)?))
        }
    }
}

/// Erase a neutral term to syntax, converting head levels to indices.
pub fn erase_netm(ctx: &Context, e: &NeTm) -> Result<Term, NfError> {
    match e {
        NeTm::Var { level, .. } => {
            if *level < ctx.len() {
                Ok(Term::Var(lvl_to_idx(ctx.len(), Lvl(*level))))
            } else {
                Err(NfError::LevelOutOfRange {
                    level: *level,
                    ctx_len: ctx.len(),
                })
            }
        }
        NeTm::App { fun, arg, .. } => {
            Ok(Term::app(erase_netm(ctx, fun)?, erase_nftm(ctx, arg)?))
        }
    }
}

/// Split a normal arrow type into its components. `Fun` is a free
/// constructor, so the decomposition is exact: `Some` on `Fun`, `None` on `O`.
pub fn decompose_fun(n: &NfTp) -> Option<(NfTp, NfTp)> {
    match n {
        NfTp::Fun { dom, cod } => Some(((**dom).clone(), (**cod).clone())),
        NfTp::O => None,
    }
}

/// Check that `n` is a well-formed, eta-long normal form of type `ty`
/// under `ctx`.
pub fn validate_nf(ctx: &Context, ty: &Type, n: &NfTm) -> Result<(), NfError> {
    validate_nf_at(ctx, ty, n, "nf")
}

fn ill(path: &str, reason: impl Into<String>) -> NfError {
    NfError::IllFormedNormal {
        path: path.to_string(),
        reason: reason.into(),
    }
}

fn validate_nf_at(ctx: &Context, ty: &Type, n: &NfTm, path: &str) -> Result<(), NfError> {
    match (ty, n) {
        (Type::Fun(dom, cod), NfTm::Lam { dom: nd, cod: nc, body }) => {
            if erase_nftp(nd) != **dom {
                return Err(ill(path, format!("lambda domain annotation {:?} does not erase to {}", nd, dom)));
            }
            if erase_nftp(nc) != **cod {
                return Err(ill(path, format!("lambda codomain annotation {:?} does not erase to {}", nc, cod)));
            }
            let inner = ctx.extend((**dom).clone());
            validate_nf_at(&inner, cod, body, &format!("{path}.body"))
        }
        (Type::Fun(_, _), _) => Err(ill(
            path,
            "normal form at arrow type must be a lambda (eta-long)",
        )),
        (Type::O, NfTm::Yes) | (Type::O, NfTm::No) => Ok(()),
        (Type::O, NfTm::Ne { ne }) => {
            let got = validate_ne_at(ctx, ne, &format!("{path}.ne"))?;
            if got == Type::O {
                Ok(())
            } else {
                Err(ill(path, format!("nfNeO wraps a neutral of type {}, not O", got)))
            }
        }
        (Type::O, NfTm::Lam { .. }) => Err(ill(path, "lambda at base type")),
    }
}

/// Validate a neutral and synthesize its erased type.
fn validate_ne_at(ctx: &Context, e: &NeTm, path: &str) -> Result<Type, NfError> {
    match e {
        NeTm::Var { ty, level } => {
            let annot = erase_nftp(ty);
            match ctx.lookup_level(Lvl(*level)) {
                None => Err(ill(
                    path,
                    format!("variable level {} out of range (context length {})", level, ctx.len()),
                )),
                Some(bound) if *bound == annot => Ok(annot),
                Some(bound) => Err(ill(
                    path,
                    format!("variable annotation {} disagrees with context type {}", annot, bound),
                )),
            }
        }
        NeTm::App { dom, cod, fun, arg } => {
            let dom_ty = erase_nftp(dom);
            let cod_ty = erase_nftp(cod);
            let fun_ty = validate_ne_at(ctx, fun, &format!("{path}.fun"))?;
            let expected = Type::fun(dom_ty.clone(), cod_ty.clone());
            if fun_ty != expected {
                return Err(ill(
                    path,
                    format!("application head has type {}, annotations demand {}", fun_ty, expected),
                ));
            }
            validate_nf_at(ctx, &dom_ty, arg, &format!("{path}.arg"))?;
            Ok(cod_ty)
        }
    }
}
