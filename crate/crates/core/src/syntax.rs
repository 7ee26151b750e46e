//! Abstract syntax of the object theory: types, terms, contexts, and
//! bidirectional typing.
//!
//! Terms bind variables with de Bruijn indices (0 = innermost binder), so
//! alpha-equivalence is plain structural equality. A one-step beta reduction
//! oracle lives here too; it exists only so tests can cross-check the
//! normalizer against an independent notion of reduction. The kernel path
//! never reduces terms directly.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A de Bruijn index: distance to the binder, innermost = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Idx(pub usize);

/// A de Bruijn level: distance from the context root, outermost = 0.
///
/// Levels are stable under context extension, which is why neutral spines
/// (see `nf`) use them while terms use indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lvl(pub usize);

impl Lvl {
    pub fn next(self) -> Lvl {
        Lvl(self.0 + 1)
    }
}

/// Convert an index to a level under a context of length `len`.
pub fn idx_to_lvl(len: usize, idx: Idx) -> Lvl {
    debug_assert!(idx.0 < len);
    Lvl(len - 1 - idx.0)
}

/// Convert a level to an index under a context of length `len`.
pub fn lvl_to_idx(len: usize, lvl: Lvl) -> Idx {
    debug_assert!(lvl.0 < len);
    Idx(len - 1 - lvl.0)
}

/// Types of the object theory: the base type `O` and function spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    O,
    Fun(Box<Type>, Box<Type>),
}

impl Type {
    pub fn fun(dom: Type, cod: Type) -> Type {
        Type::Fun(Box::new(dom), Box::new(cod))
    }

    /// Nesting depth: `O` has depth 0, `Fun(a, b)` has `1 + max(depth a, depth b)`.
    pub fn depth(&self) -> usize {
        match self {
            Type::O => 0,
            Type::Fun(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Terms: two constants at `O`, annotated lambdas, applications, variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Idx),
    Lam(Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Yes,
    No,
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(Idx(i))
    }

    pub fn lam(annot: Type, body: Term) -> Term {
        Term::Lam(annot, Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Yes | Term::No => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, u) => 1 + f.size() + u.size(),
        }
    }
}

/// A typing context: a telescope of types, one per variable in scope.
///
/// Internally stored outermost-first, so `lookup(Idx(0))` is the most recent
/// binding and entry positions coincide with de Bruijn levels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<Type>,
}

impl Context {
    pub fn empty() -> Context {
        Context::default()
    }

    /// Bind a new innermost variable of type `ty`.
    pub fn extend(&self, ty: Type) -> Context {
        let mut entries = self.entries.clone();
        entries.push(ty);
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, idx: Idx) -> Option<&Type> {
        if idx.0 < self.entries.len() {
            Some(&self.entries[self.entries.len() - 1 - idx.0])
        } else {
            None
        }
    }

    /// Type of the variable at `lvl`, outermost = 0.
    pub fn lookup_level(&self, lvl: Lvl) -> Option<&Type> {
        self.entries.get(lvl.0)
    }

    /// Entries in binding order (outermost first); position = level.
    pub fn iter_levels(&self) -> impl Iterator<Item = (Lvl, &Type)> {
        self.entries.iter().enumerate().map(|(i, t)| (Lvl(i), t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable {0}")]
    UnboundVariable(usize),
    #[error("applied a term of non-function type {0}")]
    NotAFunction(Type),
    #[error("argument type mismatch: expected {expected}, got {got}")]
    ArgumentMismatch { expected: Type, got: Type },
    #[error("type mismatch: expected {expected}, inferred {inferred}")]
    TypeMismatch { expected: Type, inferred: Type },
}

/// Infer the unique type of `t` under `ctx`. Syntax-directed and deterministic.
pub fn infer(ctx: &Context, t: &Term) -> Result<Type, TypeError> {
    match t {
        Term::Var(idx) => ctx
            .lookup(*idx)
            .cloned()
            .ok_or(TypeError::UnboundVariable(idx.0)),
        Term::Yes | Term::No => Ok(Type::O),
        Term::Lam(annot, body) => {
            let cod = infer(&ctx.extend(annot.clone()), body)?;
            Ok(Type::fun(annot.clone(), cod))
        }
        Term::App(fun, arg) => match infer(ctx, fun)? {
            Type::Fun(dom, cod) => {
                let got = infer(ctx, arg)?;
                if got == *dom {
                    Ok(*cod)
                } else {
                    Err(TypeError::ArgumentMismatch {
                        expected: *dom,
                        got,
                    })
                }
            }
            other => Err(TypeError::NotAFunction(other)),
        },
    }
}

/// Check `t` against `a` under `ctx`; succeeds iff inference agrees structurally.
pub fn check(ctx: &Context, t: &Term, a: &Type) -> Result<(), TypeError> {
    let inferred = infer(ctx, t)?;
    if inferred == *a {
        Ok(())
    } else {
        Err(TypeError::TypeMismatch {
            expected: a.clone(),
            inferred,
        })
    }
}

/// Shift free variables of `t` with index >= `cutoff` up by `by`.
pub fn shift_above(t: &Term, cutoff: usize, by: usize) -> Term {
    match t {
        Term::Var(Idx(i)) => {
            if *i >= cutoff {
                Term::var(i + by)
            } else {
                Term::var(*i)
            }
        }
        Term::Lam(a, b) => Term::lam(a.clone(), shift_above(b, cutoff + 1, by)),
        Term::App(f, u) => Term::app(shift_above(f, cutoff, by), shift_above(u, cutoff, by)),
        Term::Yes => Term::Yes,
        Term::No => Term::No,
    }
}

/// Shift all free variables of `t` up by `by`.
pub fn shift(t: &Term, by: usize) -> Term {
    shift_above(t, 0, by)
}

/// Capture-avoiding substitution of `s` for index `j` in `t`.
///
/// Free variables of `t` above `j` move down by one, so contracting a redex
/// `App(Lam(A, b), u)` is `subst(b, 0, u)` and the result is well scoped in
/// the redex's own context.
pub fn subst(t: &Term, j: usize, s: &Term) -> Term {
    match t {
        Term::Var(Idx(i)) => {
            if *i == j {
                shift(s, j)
            } else if *i > j {
                Term::var(i - 1)
            } else {
                Term::var(*i)
            }
        }
        Term::Lam(a, b) => Term::lam(a.clone(), subst(b, j + 1, s)),
        Term::App(f, u) => Term::app(subst(f, j, s), subst(u, j, s)),
        Term::Yes => Term::Yes,
        Term::No => Term::No,
    }
}

/// All terms obtained from `t` by contracting exactly one beta redex, at any
/// position. Empty on beta-normal terms. Testing oracle only.
pub fn step_beta(t: &Term) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    match t {
        Term::Var(_) | Term::Yes | Term::No => {}
        Term::Lam(a, b) => {
            for b2 in step_beta(b) {
                out.insert(Term::lam(a.clone(), b2));
            }
        }
        Term::App(f, u) => {
            if let Term::Lam(_, body) = f.as_ref() {
                out.insert(subst(body, 0, u));
            }
            for f2 in step_beta(f) {
                out.insert(Term::app(f2, (**u).clone()));
            }
            for u2 in step_beta(u) {
                out.insert(Term::app((**f).clone(), u2));
            }
        }
    }
    out
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::O => write!(f, "O"),
            Type::Fun(a, b) => {
                if matches!(a.as_ref(), Type::Fun(_, _)) {
                    write!(f, "({}) -> {}", a, b)
                } else {
                    write!(f, "{} -> {}", a, b)
                }
            }
        }
    }
}
