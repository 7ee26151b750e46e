//! Deterministic generators and enumerators for well-typed terms and
//! well-formed normal forms.
//!
//! Everything here is seeded and platform-independent, so test corpora and
//! benchmark inputs are reproducible byte for byte. Generated terms always
//! typecheck at their requested type; generated normal forms always pass
//! `validate_nf`.

use crate::nbe::normalize_tp;
use crate::nf::{NeTm, NfTm, NfTp};
use crate::syntax::{Context, Idx, Lvl, Term, Type};

/// SplitMix64: a small, fast, well-distributed PRNG. Good enough for test
/// data, trivially seedable, no external dependency.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`. `n` must be nonzero.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// A random type of depth at most `depth`.
pub fn random_type(rng: &mut SplitMix64, depth: usize) -> Type {
    if depth == 0 || rng.below(3) == 0 {
        Type::O
    } else {
        Type::fun(random_type(rng, depth - 1), random_type(rng, depth - 1))
    }
}

/// All types of depth at most `depth`.
pub fn enumerate_types(depth: usize) -> Vec<Type> {
    let mut out = vec![Type::O];
    if depth > 0 {
        let inner = enumerate_types(depth - 1);
        for a in &inner {
            for b in &inner {
                out.push(Type::fun(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// A random term of type `ty` under `ctx`, with roughly `fuel` nodes.
/// Always well-typed; biased toward creating beta redexes so reduction
/// oracles have work to do.
pub fn random_term(rng: &mut SplitMix64, ctx: &Context, ty: &Type, fuel: usize) -> Term {
    // cheap closed canonical inhabitant, used when fuel runs out
    fn fallback(ctx: &Context, ty: &Type, rng: &mut SplitMix64) -> Term {
        let vars: Vec<usize> = (0..ctx.len())
            .filter(|i| ctx.lookup(Idx(*i)) == Some(ty))
            .collect();
        if !vars.is_empty() && rng.below(2) == 0 {
            return Term::var(vars[rng.below(vars.len())]);
        }
        match ty {
            Type::O => {
                if rng.below(2) == 0 {
                    Term::Yes
                } else {
                    Term::No
                }
            }
            Type::Fun(dom, cod) => Term::lam(
                (**dom).clone(),
                fallback(&ctx.extend((**dom).clone()), cod, rng),
            ),
        }
    }

    if fuel <= 1 {
        return fallback(ctx, ty, rng);
    }

    // candidate moves: 0 = fallback leaf, 1 = lambda (arrow only),
    // 2 = application with a random argument type, 3 = applied variable spine
    let roll = rng.below(10);
    match ty {
        Type::Fun(dom, cod) if roll < 5 => Term::lam(
            (**dom).clone(),
            random_term(rng, &ctx.extend((**dom).clone()), cod, fuel - 1),
        ),
        _ if roll < 8 => {
            // build a redex-prone application f u with f : dom -> ty
            let dom = random_type(rng, 2);
            let fun_ty = Type::fun(dom.clone(), ty.clone());
            let fuel_fun = fuel / 2;
            let fuel_arg = fuel - 1 - fuel_fun;
            let f = random_term(rng, ctx, &fun_ty, fuel_fun.max(1));
            let u = random_term(rng, ctx, &dom, fuel_arg.max(1));
            Term::app(f, u)
        }
        _ => fallback(ctx, ty, rng),
    }
}

/// A random closed term of base type.
pub fn random_closed_base_term(rng: &mut SplitMix64, fuel: usize) -> Term {
    random_term(rng, &Context::empty(), &Type::O, fuel)
}

/// The suffix types reachable by applying context variables: every neutral's
/// type is one of these.
fn spine_types(ctx: &Context) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    for (_, ty) in ctx.iter_levels() {
        let mut cur = ty;
        loop {
            if !out.contains(cur) {
                out.push(cur.clone());
            }
            match cur {
                Type::Fun(_, cod) => cur = cod,
                Type::O => break,
            }
        }
    }
    out
}

/// All well-formed, eta-long normal forms of `ty` under `ctx` with at most
/// `max_size` term-level constructors.
pub fn enumerate_nfs(ctx: &Context, ty: &Type, max_size: usize) -> Vec<NfTm> {
    if max_size == 0 {
        return Vec::new();
    }
    match ty {
        Type::Fun(dom, cod) => {
            let inner = ctx.extend((**dom).clone());
            enumerate_nfs(&inner, cod, max_size - 1)
                .into_iter()
                .map(|body| NfTm::lam(normalize_tp(dom), normalize_tp(cod), body))
                .collect()
        }
        Type::O => {
            let mut out = vec![NfTm::Yes, NfTm::No];
            out.extend(
                enumerate_neutrals(ctx, &Type::O, max_size - 1)
                    .into_iter()
                    .map(NfTm::ne),
            );
            out
        }
    }
}

/// All well-formed neutrals of `ty` under `ctx` with at most `max_size`
/// constructors.
pub fn enumerate_neutrals(ctx: &Context, ty: &Type, max_size: usize) -> Vec<NeTm> {
    if max_size == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (lvl, bound) in ctx.iter_levels() {
        if bound == ty {
            out.push(NeTm::var(normalize_tp(ty), lvl));
        }
    }
    // applications: a neutral at Fun(dom, ty) applied to a normal at dom.
    // Only suffix types of context entries can host a neutral, which bounds
    // the recursion.
    let reachable = spine_types(ctx);
    for dom in &reachable {
        let fun_ty = Type::fun(dom.clone(), ty.clone());
        if !reachable.contains(&fun_ty) {
            continue;
        }
        for fun_size in 1..max_size {
            let arg_size = max_size - 1 - fun_size;
            if arg_size == 0 {
                continue;
            }
            // exact fun size avoids emitting the same pair at several splits
            for fun in enumerate_neutrals(ctx, &fun_ty, fun_size) {
                if fun.size() != fun_size {
                    continue;
                }
                for arg in enumerate_nfs(ctx, dom, arg_size) {
                    out.push(NeTm::app(
                        normalize_tp(dom),
                        normalize_tp(ty),
                        fun.clone(),
                        arg,
                    ));
                }
            }
        }
    }
    out
}

/// A random well-formed eta-long normal form at `ty` under `ctx`.
pub fn random_nf(rng: &mut SplitMix64, ctx: &Context, ty: &Type, fuel: usize) -> NfTm {
    match ty {
        Type::Fun(dom, cod) => {
            let inner = ctx.extend((**dom).clone());
            NfTm::lam(
                normalize_tp(dom),
                normalize_tp(cod),
                random_nf(rng, &inner, cod, fuel.saturating_sub(1)),
            )
        }
        Type::O => {
            if fuel > 1 {
                if let Some(ne) = random_neutral(rng, ctx, &Type::O, fuel - 1) {
                    return NfTm::ne(ne);
                }
            }
            if rng.below(2) == 0 {
                NfTm::Yes
            } else {
                NfTm::No
            }
        }
    }
}

/// A random neutral at `ty`, if the context can produce one.
fn random_neutral(rng: &mut SplitMix64, ctx: &Context, ty: &Type, fuel: usize) -> Option<NeTm> {
    let vars: Vec<Lvl> = ctx
        .iter_levels()
        .filter(|(_, t)| *t == ty)
        .map(|(l, _)| l)
        .collect();
    let app_doms: Vec<Type> = if fuel > 2 {
        spine_types(ctx)
            .into_iter()
            .filter_map(|t| match t {
                Type::Fun(dom, cod) if *cod == *ty => Some(*dom),
                _ => None,
            })
            .collect()
    } else {
        Vec::new()
    };

    // prefer spines when available so generated forms exercise application
    if !app_doms.is_empty() && (vars.is_empty() || rng.below(3) > 0) {
        let dom = app_doms[rng.below(app_doms.len())].clone();
        let fun_ty = Type::fun(dom.clone(), ty.clone());
        if let Some(fun) = random_neutral(rng, ctx, &fun_ty, fuel / 2) {
            let arg = random_nf(rng, ctx, &dom, fuel / 2);
            return Some(NeTm::app(normalize_tp(&dom), normalize_tp(ty), fun, arg));
        }
    }
    if vars.is_empty() {
        return None;
    }
    Some(NeTm::var(normalize_tp(ty), vars[rng.below(vars.len())]))
}

/// All normal types whose erased depth is at most `depth`.
pub fn enumerate_nftps(depth: usize) -> Vec<NfTp> {
    enumerate_types(depth).iter().map(normalize_tp).collect()
}
