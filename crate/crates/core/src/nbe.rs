//! Normalization by evaluation.
//!
//! Terms are evaluated into a semantic domain and read back as eta-long
//! beta-normal forms. Each semantic type comes with a reflection map taking
//! neutral terms into the domain and a reification map taking domain elements
//! to normal forms; the two maps are defined by mutual recursion on the type.
//!
//! Values at the base type are normal-form data: the constants, or a neutral
//! waiting for its spine to be read back. Values at arrow types are closures,
//! either a suspended term body with its environment or a neutral head.
//! Neutral spines hold unreified argument *values*; readback walks the spine
//! and reifies each argument at the depth where the spine finally lands. This
//! is what keeps freshly bound variables fresh: an argument reified at
//! application time could be placed under binders created later and capture
//! them.
//!
//! Conversion checking compares normal forms structurally, which decides
//! beta-eta equality. Injectivity of the function-space constructor falls out
//! of normalization landing in a free algebra: `nfFun` decomposes exactly.

use std::rc::Rc;

use thiserror::Error;

use crate::nf::{decompose_fun, NeTm, NfTm, NfTp};
use crate::syntax::{check, Context, Idx, Lvl, Term, Type, TypeError};

/// Semantic types. Structurally identical to `Type`, but the match arms of
/// `reflect` and `reify` are what give each constructor its behavior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemType {
    O,
    Fun(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn fun(dom: SemType, cod: SemType) -> SemType {
        SemType::Fun(Box::new(dom), Box::new(cod))
    }
}

/// Semantic values, stratified by the type they inhabit.
#[derive(Debug, Clone)]
pub enum Value {
    /// A value at the base type.
    Base(BaseValue),
    /// A value at an arrow type.
    Fun(Closure),
}

/// What a base-type value can be: a constant, or a blocked neutral.
#[derive(Debug, Clone)]
pub enum BaseValue {
    Yes,
    No,
    Neutral(NeutralValue),
}

/// A blocked computation: a neutral head together with the values it has
/// been applied to. Arguments are reified only at readback, when the final
/// binding depth is known.
#[derive(Debug, Clone)]
pub struct NeutralValue {
    pub head: NeTm,
    pub spine: Vec<SpineApp>,
}

/// One pending application on a neutral spine.
#[derive(Debug, Clone)]
pub struct SpineApp {
    pub dom: SemType,
    pub cod: SemType,
    pub arg: Rc<Value>,
}

/// Functions in the domain.
#[derive(Debug, Clone)]
pub enum Closure {
    /// A lambda body suspended in its environment.
    Term(TermClosure),
    /// A neutral head behaving as a function: applying it extends the spine.
    Neutral(NeutralClosure),
}

#[derive(Debug, Clone)]
pub struct TermClosure {
    pub env: Env,
    pub annot: SemType,
    pub body: Term,
}

#[derive(Debug, Clone)]
pub struct NeutralClosure {
    pub dom: SemType,
    pub cod: SemType,
    pub neutral: NeutralValue,
}

/// An evaluation environment, parallel to a context: position `i` (from the
/// innermost end) holds the value of `Var i`.
#[derive(Debug, Clone, Default)]
pub struct Env {
    values: Vec<Rc<Value>>,
}

impl Env {
    pub fn empty() -> Env {
        Env::default()
    }

    pub fn extend(&self, v: Rc<Value>) -> Env {
        let mut values = self.values.clone();
        values.push(v);
        Env { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lookup(&self, idx: Idx) -> Option<&Rc<Value>> {
        if idx.0 < self.values.len() {
            Some(&self.values[self.values.len() - 1 - idx.0])
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NbeError {
    #[error("evaluation hit an unbound variable {0} (ill-scoped input)")]
    UnboundVariable(usize),
    #[error("applied a base-type value (ill-typed input or kernel bug)")]
    NotApplicable,
    #[error("value does not inhabit the type it is reified at (kernel bug)")]
    ShapeMismatch,
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Interpret a syntactic type as a semantic one.
pub fn sem_of_type(a: &Type) -> SemType {
    match a {
        Type::O => SemType::O,
        Type::Fun(dom, cod) => SemType::fun(sem_of_type(dom), sem_of_type(cod)),
    }
}

/// The normal form of a semantic type.
pub fn sem_to_nftp(a: &SemType) -> NfTp {
    match a {
        SemType::O => NfTp::O,
        SemType::Fun(dom, cod) => NfTp::fun(sem_to_nftp(dom), sem_to_nftp(cod)),
    }
}

/// Normalize a type. Structural (types have no equations), injective, and a
/// section of erasure.
pub fn normalize_tp(a: &Type) -> NfTp {
    match a {
        Type::O => NfTp::O,
        Type::Fun(dom, cod) => NfTp::fun(normalize_tp(dom), normalize_tp(cod)),
    }
}

fn value_of_neutral(a: &SemType, ne: NeutralValue) -> Value {
    match a {
        SemType::O => Value::Base(BaseValue::Neutral(ne)),
        SemType::Fun(dom, cod) => Value::Fun(Closure::Neutral(NeutralClosure {
            dom: (**dom).clone(),
            cod: (**cod).clone(),
            neutral: ne,
        })),
    }
}

/// Reflection: inject a neutral term into the domain at type `a`.
pub fn reflect(a: &SemType, e: NeTm) -> Rc<Value> {
    Rc::new(value_of_neutral(
        a,
        NeutralValue {
            head: e,
            spine: Vec::new(),
        },
    ))
}

/// Hydrate a variable: reflect its neutral form at its own type.
pub fn hydrate(a: &SemType, level: Lvl) -> Rc<Value> {
    reflect(a, NeTm::var(sem_to_nftp(a), level))
}

/// The environment interpreting `ctx` by its own hydrated variables.
pub fn initial_env(ctx: &Context) -> Env {
    let mut values = Vec::with_capacity(ctx.len());
    for (lvl, ty) in ctx.iter_levels() {
        values.push(hydrate(&sem_of_type(ty), lvl));
    }
    Env { values }
}

/// Evaluate a term in an environment. Total on well-typed input.
pub fn eval(env: &Env, t: &Term) -> Result<Rc<Value>, NbeError> {
    match t {
        Term::Yes => Ok(Rc::new(Value::Base(BaseValue::Yes))),
        Term::No => Ok(Rc::new(Value::Base(BaseValue::No))),
        Term::Var(idx) => env
            .lookup(*idx)
            .cloned()
            .ok_or(NbeError::UnboundVariable(idx.0)),
        Term::Lam(annot, body) => Ok(Rc::new(Value::Fun(Closure::Term(TermClosure {
            env: env.clone(),
            annot: sem_of_type(annot),
            body: (**body).clone(),
        })))),
        Term::App(fun, arg) => {
            let f = eval(env, fun)?;
            let u = eval(env, arg)?;
            apply(&f, u)
        }
    }
}

/// Apply a function value to an argument value.
pub fn apply(f: &Value, arg: Rc<Value>) -> Result<Rc<Value>, NbeError> {
    match f {
        Value::Fun(Closure::Term(c)) => eval(&c.env.extend(arg), &c.body),
        Value::Fun(Closure::Neutral(c)) => {
            let mut ne = c.neutral.clone();
            ne.spine.push(SpineApp {
                dom: c.dom.clone(),
                cod: c.cod.clone(),
                arg,
            });
            Ok(Rc::new(value_of_neutral(&c.cod, ne)))
        }
        Value::Base(_) => Err(NbeError::NotApplicable),
    }
}

/// Reify a value as a normal form at type `a`. `depth` is the number of
/// variables in scope, i.e. the next fresh level.
pub fn reify(depth: usize, a: &SemType, v: &Value) -> Result<NfTm, NbeError> {
    match (a, v) {
        (SemType::O, Value::Base(BaseValue::Yes)) => Ok(NfTm::Yes),
        (SemType::O, Value::Base(BaseValue::No)) => Ok(NfTm::No),
        (SemType::O, Value::Base(BaseValue::Neutral(ne))) => {
            Ok(NfTm::ne(readback_neutral(depth, ne)?))
        }
        (SemType::Fun(dom, cod), Value::Fun(_)) => {
            let fresh = hydrate(dom, Lvl(depth));
            let body = apply(v, fresh)?;
            Ok(NfTm::lam(
                sem_to_nftp(dom),
                sem_to_nftp(cod),
                reify(depth + 1, cod, &body)?,
            ))
        }
        _ => Err(NbeError::ShapeMismatch),
    }
}

/// Read a blocked neutral back to a neutral term, reifying the spine
/// arguments at the current depth.
fn readback_neutral(depth: usize, ne: &NeutralValue) -> Result<NeTm, NbeError> {
    let mut acc = ne.head.clone();
    for app in &ne.spine {
        let arg = reify(depth, &app.dom, &app.arg)?;
        acc = NeTm::app(sem_to_nftp(&app.dom), sem_to_nftp(&app.cod), acc, arg);
    }
    Ok(acc)
}

/// Normalize `t` at type `a` under `ctx`: evaluate in the hydrated
/// environment, then reify at the context's depth.
///
/// Precondition: `check(ctx, t, a)` succeeds.
pub fn normalize(ctx: &Context, a: &Type, t: &Term) -> Result<NfTm, NbeError> {
    let env = initial_env(ctx);
    let v = eval(&env, t)?;
    reify(ctx.len(), &sem_of_type(a), &v)
}

/// Decide beta-eta convertibility of `t` and `u` at type `a` under `ctx`.
pub fn conv(ctx: &Context, a: &Type, t: &Term, u: &Term) -> Result<bool, NbeError> {
    check(ctx, t, a)?;
    check(ctx, u, a)?;
    Ok(normalize(ctx, a, t)? == normalize(ctx, a, u)?)
}

/// A normalization request: a typed term under its context.
#[derive(Debug, Clone)]
pub struct NormJob {
    pub ctx: Context,
    pub ty: Type,
    pub term: Term,
}

/// Normalize a batch of independent jobs sequentially.
pub fn normalize_batch_seq(jobs: &[NormJob]) -> Vec<Result<NfTm, NbeError>> {
    jobs.iter()
        .map(|j| normalize(&j.ctx, &j.ty, &j.term))
        .collect()
}

/// Normalize a batch of independent jobs, in parallel when the `parallel`
/// feature is enabled. Results are in job order and identical to the
/// sequential ones: every job is a pure function of its inputs.
#[cfg(feature = "parallel")]
pub fn normalize_batch(jobs: &[NormJob]) -> Vec<Result<NfTm, NbeError>> {
    use rayon::prelude::*;
    jobs.par_iter()
        .map(|j| normalize(&j.ctx, &j.ty, &j.term))
        .collect()
}

/// Normalize a batch of independent jobs, in parallel when the `parallel`
/// feature is enabled. Results are in job order and identical to the
/// sequential ones: every job is a pure function of its inputs.
#[cfg(not(feature = "parallel"))]
pub fn normalize_batch(jobs: &[NormJob]) -> Vec<Result<NfTm, NbeError>> {
    normalize_batch_seq(jobs)
}

/// Verdict of the function-space injectivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectivityVerdict {
    /// The two arrow types are equal, with the common normalized components.
    Equal { dom: NfTp, cod: NfTp },
    Unequal,
}

/// Compare `Fun(a, b)` with `Fun(a2, b2)` through normalization, extracting
/// the components when the normal forms coincide. Equality of the wholes
/// forces equality of the parts: the normal-form constructor is free.
pub fn fun_tp_injective(a: &Type, b: &Type, a2: &Type, b2: &Type) -> InjectivityVerdict {
    // normalize_tp(Fun(a, b)) by its own defining clause
    let n = NfTp::fun(normalize_tp(a), normalize_tp(b));
    let n2 = NfTp::fun(normalize_tp(a2), normalize_tp(b2));
    if n == n2 {
        let (dom, cod) = decompose_fun(&n).expect("normal form of an arrow type is nfFun");
        InjectivityVerdict::Equal { dom, cod }
    } else {
        InjectivityVerdict::Unequal
    }
}
