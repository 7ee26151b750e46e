//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p nbe-core --test acceptance -- --nocapture` to see
//! the per-criterion report. The CLI golden corpus lives with the `nbe-cli`
//! crate (`cargo test -p nbe-cli --test golden`).

use std::time::{Duration, Instant};

use nbe_core::gen::{
    enumerate_nfs, enumerate_types, random_closed_base_term, random_nf, random_term, random_type,
    SplitMix64,
};
use nbe_core::monoid::{
    enumerate_exprs_up_to, enumerate_lists, eval_expr, expr_eq, list_eps, list_mu, retract_p,
    rewrite_closure_oracle, MonExpr,
};
use nbe_core::nbe::{fun_tp_injective, normalize, normalize_tp, InjectivityVerdict};
use nbe_core::nf::{erase_nftm, erase_nftp, validate_nf, NfTm};
use nbe_core::syntax::{check, infer, shift, step_beta, Context, Term, Type};

const PER_TERM_BUDGET: Duration = Duration::from_millis(100);

fn report(id: &str, name: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("[{id}] {name}: PASS ({detail})"),
        Err(msg) => {
            println!("[{id}] {name}: FAIL ({msg})");
            panic!("{id} {name} failed: {msg}");
        }
    }
}

/// Normalize with a per-term wall-clock budget (criterion 8 applies to every
/// term the suite generates).
fn normalize_timed(
    ctx: &Context,
    ty: &Type,
    t: &Term,
    slowest: &mut Duration,
) -> Result<NfTm, String> {
    let start = Instant::now();
    let nf = normalize(ctx, ty, t).map_err(|e| format!("normalize failed: {e}"))?;
    let took = start.elapsed();
    if took > *slowest {
        *slowest = took;
    }
    if took > PER_TERM_BUDGET {
        return Err(format!(
            "term of size {} took {took:?}, budget is {PER_TERM_BUDGET:?}",
            t.size()
        ));
    }
    Ok(nf)
}

/// A context of hypotheses that keeps neutral spines interesting.
fn sample_context(rng: &mut SplitMix64) -> Context {
    let mut ctx = Context::empty();
    for _ in 0..rng.below(4) {
        ctx = ctx.extend(random_type(rng, 2));
    }
    ctx
}

/// A random well-typed term of at most `max_size` nodes (the generator's
/// fuel is a soft budget, so reject the occasional overshoot).
fn random_term_capped(
    rng: &mut SplitMix64,
    ctx: &Context,
    ty: &Type,
    fuel: usize,
    max_size: usize,
) -> Term {
    loop {
        let t = random_term(rng, ctx, ty, fuel);
        if t.size() <= max_size {
            return t;
        }
    }
}

#[test]
fn accept_1_motivating_example() {
    let run = || -> Result<String, String> {
        let t = Term::app(Term::lam(Type::O, Term::var(0)), Term::Yes);
        let start = Instant::now();
        let nf = normalize(&Context::empty(), &Type::O, &t)
            .map_err(|e| format!("normalize failed: {e}"))?;
        let took = start.elapsed();
        if nf != NfTm::Yes {
            return Err(format!("expected nfYes, got {nf:?}"));
        }
        if took > Duration::from_millis(1) {
            return Err(format!("took {took:?}, budget 1 ms"));
        }
        Ok(format!("(\\z:O. z) yes normalizes to yes in {took:?}"))
    };
    report("A1", "motivating example, exact", run());
}

#[test]
fn accept_2_beta_invariance() {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let mut rng = SplitMix64::new(0xBE7A);
        let mut slowest = Duration::ZERO;
        let mut reducts_checked = 0usize;
        for round in 0..1000 {
            let ctx = sample_context(&mut rng);
            let ty = random_type(&mut rng, 4);
            let t = random_term_capped(&mut rng, &ctx, &ty, 38, 40);
            let nf = normalize_timed(&ctx, &ty, &t, &mut slowest)?;
            for reduct in step_beta(&t) {
                if infer(&ctx, &reduct).as_ref() != Ok(&ty) {
                    return Err(format!("round {round}: subject reduction broken"));
                }
                let nf2 = normalize_timed(&ctx, &ty, &reduct, &mut slowest)?;
                if nf2 != nf {
                    return Err(format!(
                        "round {round}: normal form changed under beta:\n  t = {t:?}\n  reduct = {reduct:?}"
                    ));
                }
                reducts_checked += 1;
            }
        }
        let took = start.elapsed();
        if took > Duration::from_secs(10) {
            return Err(format!("took {took:?}, budget 10 s"));
        }
        Ok(format!(
            "1000 terms, {reducts_checked} one-step reducts, slowest normalize {slowest:?}, total {took:?}"
        ))
    };
    report("A2", "beta-invariance of normalization", run());
}

#[test]
fn accept_3_eta_law() {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let mut rng = SplitMix64::new(0xE7A);
        let mut slowest = Duration::ZERO;
        for round in 0..500 {
            let ctx = sample_context(&mut rng);
            let dom = random_type(&mut rng, 3);
            let cod = random_type(&mut rng, 3);
            let ty = Type::fun(dom.clone(), cod.clone());
            let t = random_term(&mut rng, &ctx, &ty, 30);
            let expanded = Term::lam(dom, Term::app(shift(&t, 1), Term::var(0)));
            let nf = normalize_timed(&ctx, &ty, &t, &mut slowest)?;
            let nf2 = normalize_timed(&ctx, &ty, &expanded, &mut slowest)?;
            if nf != nf2 {
                return Err(format!("round {round}: eta expansion changed the normal form of {t:?}"));
            }
        }
        let took = start.elapsed();
        if took > Duration::from_secs(5) {
            return Err(format!("took {took:?}, budget 5 s"));
        }
        Ok(format!(
            "500 arrow-type terms, slowest normalize {slowest:?}, total {took:?}"
        ))
    };
    report("A3", "eta-law: t ~ \\x. t x", run());
}

#[test]
fn accept_4_section_property() {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let oo = Type::fun(Type::O, Type::O);
        let o2 = Type::fun(Type::O, oo.clone());
        let hoo = Type::fun(oo.clone(), Type::O);

        // type level, all types of depth <= 4 both ways around
        for ty in enumerate_types(4) {
            let n = normalize_tp(&ty);
            if erase_nftp(&n) != ty {
                return Err(format!("erase(normalize_tp({ty})) != {ty}"));
            }
            if normalize_tp(&erase_nftp(&n)) != n {
                return Err(format!("normalize_tp(erase({n:?})) != {n:?}"));
            }
        }

        // term level: exhaustive over representative contexts and types
        let combos: Vec<(Context, Type)> = vec![
            (Context::empty(), Type::O),
            (Context::empty(), oo.clone()),
            (Context::empty(), hoo.clone()),
            (Context::empty(), o2.clone()),
            (Context::empty().extend(oo.clone()), Type::O),
            (Context::empty().extend(oo.clone()), oo.clone()),
            (Context::empty().extend(o2.clone()), Type::O),
            (Context::empty().extend(hoo.clone()), oo.clone()),
            (
                Context::empty().extend(Type::O).extend(oo.clone()),
                Type::O,
            ),
            (
                Context::empty()
                    .extend(o2.clone())
                    .extend(oo.clone())
                    .extend(Type::O),
                Type::O,
            ),
            (
                Context::empty().extend(hoo.clone()).extend(oo.clone()),
                oo.clone(),
            ),
        ];
        let mut slowest = Duration::ZERO;
        let mut enumerated = 0usize;
        for (ctx, ty) in &combos {
            for nf in enumerate_nfs(ctx, ty, 12) {
                validate_nf(ctx, ty, &nf).map_err(|e| format!("enumerated form invalid: {e}"))?;
                let term = erase_nftm(ctx, &nf).map_err(|e| format!("erasure failed: {e}"))?;
                check(ctx, &term, ty).map_err(|e| format!("erased term ill-typed: {e}"))?;
                let back = normalize_timed(ctx, ty, &term, &mut slowest)?;
                if back != nf {
                    return Err(format!("normalize(erase(n)) != n for {nf:?}"));
                }
                enumerated += 1;
            }
        }

        // and 500 random larger normal forms
        let mut rng = SplitMix64::new(0x5EC);
        let mut random_checked = 0usize;
        let mut attempts = 0usize;
        while random_checked < 500 {
            attempts += 1;
            if attempts > 50_000 {
                return Err("could not generate 500 large random normal forms".to_string());
            }
            let ctx = Context::empty()
                .extend(o2.clone())
                .extend(oo.clone())
                .extend(Type::O)
                .extend(hoo.clone());
            let ty = if rng.below(2) == 0 { Type::O } else { oo.clone() };
            let nf = random_nf(&mut rng, &ctx, &ty, 30);
            if nf.size() <= 12 {
                continue;
            }
            validate_nf(&ctx, &ty, &nf).map_err(|e| format!("random form invalid: {e}"))?;
            let term = erase_nftm(&ctx, &nf).map_err(|e| format!("erasure failed: {e}"))?;
            let back = normalize_timed(&ctx, &ty, &term, &mut slowest)?;
            if back != nf {
                return Err(format!("normalize(erase(n)) != n for random {nf:?}"));
            }
            random_checked += 1;
        }

        let took = start.elapsed();
        if took > Duration::from_secs(10) {
            return Err(format!("took {took:?}, budget 10 s"));
        }
        Ok(format!(
            "{enumerated} enumerated forms (size <= 12), {random_checked} random larger, slowest normalize {slowest:?}, total {took:?}"
        ))
    };
    report("A4", "section property: normalize after erase is the identity", run());
}

#[test]
fn accept_5_injectivity_exhaustive() {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        // all arrow types Fun(A, B) of depth <= 4: components of depth <= 3
        let components = enumerate_types(3);
        let normals: Vec<_> = components.iter().map(normalize_tp).collect();
        let mut tuples = 0usize;
        for (ia, a) in components.iter().enumerate() {
            for (ib, b) in components.iter().enumerate() {
                for (ia2, a2) in components.iter().enumerate() {
                    for (ib2, b2) in components.iter().enumerate() {
                        let verdict = fun_tp_injective(a, b, a2, b2);
                        let structurally = a == a2 && b == b2;
                        let componentwise =
                            normals[ia] == normals[ia2] && normals[ib] == normals[ib2];
                        if structurally != componentwise {
                            return Err("normalize_tp not injective on components".to_string());
                        }
                        match verdict {
                            InjectivityVerdict::Equal { dom, cod } => {
                                if !componentwise {
                                    return Err(format!(
                                        "false equal: ({a}, {b}) vs ({a2}, {b2})"
                                    ));
                                }
                                if dom != normals[ia] || cod != normals[ib] {
                                    return Err("equal verdict carries wrong components".to_string());
                                }
                            }
                            InjectivityVerdict::Unequal => {
                                if componentwise {
                                    return Err(format!(
                                        "false unequal: ({a}, {b}) vs ({a2}, {b2})"
                                    ));
                                }
                            }
                        }
                        tuples += 1;
                    }
                }
            }
        }
        let took = start.elapsed();
        if took > Duration::from_secs(2) {
            return Err(format!("took {took:?}, budget 2 s"));
        }
        Ok(format!(
            "{tuples} component tuples ({} types of depth <= 3), total {took:?}",
            components.len()
        ))
    };
    report("A5", "injectivity of the function-space constructor, exhaustive", run());
}

#[test]
fn accept_6_base_type_adequacy() {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let empty = Context::empty();
        let mut rng = SplitMix64::new(0xADE);
        let mut slowest = Duration::ZERO;
        for round in 0..300 {
            let t = random_closed_base_term(&mut rng, 40);
            let nf = normalize_timed(&empty, &Type::O, &t, &mut slowest)?;
            if nf != NfTm::Yes && nf != NfTm::No {
                return Err(format!("round {round}: closed term at O gave {nf:?}"));
            }
            // independent oracle: reduce to beta-normal form by brute force
            let mut current = t.clone();
            let mut steps = 0usize;
            loop {
                let reducts = step_beta(&current);
                match reducts.into_iter().next() {
                    None => break,
                    Some(next) => current = next,
                }
                steps += 1;
                if steps > 10_000 {
                    return Err(format!("round {round}: oracle exceeded 10000 steps"));
                }
            }
            let expected = erase_nftm(&empty, &nf).map_err(|e| e.to_string())?;
            if current != expected {
                return Err(format!(
                    "round {round}: oracle reached {current:?}, normalizer said {expected:?}"
                ));
            }
        }
        let took = start.elapsed();
        if took > Duration::from_secs(10) {
            return Err(format!("took {took:?}, budget 10 s"));
        }
        Ok(format!(
            "300 closed base terms agree with exhaustive beta-reduction, slowest normalize {slowest:?}, total {took:?}"
        ))
    };
    report("A6", "base-type adequacy against the reduction oracle", run());
}

#[test]
fn accept_7_monoid_suite() {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let alphabet3 = ["a", "b", "c"];
        let lists6 = enumerate_lists(&alphabet3, 6);

        // unit laws, exhaustive over all 1093 lists of length <= 6
        for m in &lists6 {
            if &list_mu(&list_eps(), m) != m || &list_mu(m, &list_eps()) != m {
                return Err(format!("unit law broken on {m:?}"));
            }
        }

        // associativity, exhaustive over all triples of length <= 4
        // (length-6 triples would be 1093^3 = 1.3e9 concatenations)
        let lists4 = enumerate_lists(&alphabet3, 4);
        for l in &lists4 {
            for m in &lists4 {
                for n in &lists4 {
                    if list_mu(&list_mu(l, m), n) != list_mu(l, &list_mu(m, n)) {
                        return Err(format!("associativity broken on {l:?}, {m:?}, {n:?}"));
                    }
                }
            }
        }

        // retraction, exhaustive
        for m in &lists6 {
            if &eval_expr(&retract_p(m)) != m {
                return Err(format!("retraction broken on {m:?}"));
            }
        }

        // scalar multiplication (cons) is injective on lists, exhaustive
        let mut seen = std::collections::HashMap::new();
        for a in &alphabet3 {
            for m in &lists6 {
                let mut cons = vec![(*a).to_string()];
                cons.extend(m.iter().cloned());
                if let Some(prev) = seen.insert(cons, (*a, m.clone())) {
                    return Err(format!("cons collision with {prev:?}"));
                }
            }
        }

        // injectivity on the quotient, all expression pairs of size <= 6
        let exprs = enumerate_exprs_up_to(&["a", "b"], 6);
        for u in &exprs {
            for v in &exprs {
                for a in ["a", "b"] {
                    for a2 in ["a", "b"] {
                        let left = MonExpr::mu(MonExpr::gen(a), u.clone());
                        let right = MonExpr::mu(MonExpr::gen(a2), v.clone());
                        if expr_eq(&left, &right) && !(a == a2 && expr_eq(u, v)) {
                            return Err(format!(
                                "quotient injectivity broken: {left} = {right}"
                            ));
                        }
                    }
                }
            }
        }

        // word problem vs the bounded rewrite-closure oracle; the closures
        // are independent, so compute them in parallel
        let wanted: std::collections::BTreeSet<(MonExpr, usize)> = exprs
            .iter()
            .flat_map(|u| exprs.iter().map(move |v| (u.clone(), u.size() + v.size() + 4)))
            .collect();
        let closures: std::collections::HashMap<(MonExpr, usize), _> = {
            use rayon::prelude::*;
            wanted
                .into_iter()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|(u, bound)| ((u.clone(), *bound), rewrite_closure_oracle(u, *bound)))
                .collect()
        };
        let mut oracle_pairs = 0usize;
        for u in &exprs {
            for v in &exprs {
                let bound = u.size() + v.size() + 4;
                let closure = &closures[&(u.clone(), bound)];
                let reachable = closure.contains(v);
                if expr_eq(u, v) != reachable {
                    return Err(format!(
                        "oracle disagreement: u = {u}, v = {v}, expr_eq = {}, reachable = {reachable}",
                        expr_eq(u, v)
                    ));
                }
                oracle_pairs += 1;
            }
        }

        let took = start.elapsed();
        if took > Duration::from_secs(30) {
            return Err(format!("took {took:?}, budget 30 s"));
        }
        Ok(format!(
            "{} lists, {} assoc triples, {oracle_pairs} oracle pairs, total {took:?}",
            lists6.len(),
            lists4.len().pow(3)
        ))
    };
    report("A7", "free-monoid warm-up suite", run());
}

#[test]
fn accept_8_termination_throughput() {
    let run = || -> Result<String, String> {
        let start = Instant::now();
        let mut rng = SplitMix64::new(0x7E12);
        let mut slowest = Duration::ZERO;
        for _ in 0..250 {
            let t = random_closed_base_term(&mut rng, 40);
            normalize_timed(&Context::empty(), &Type::O, &t, &mut slowest)?;
        }
        for _ in 0..250 {
            let ctx = sample_context(&mut rng);
            let ty = random_type(&mut rng, 4);
            let t = random_term(&mut rng, &ctx, &ty, 40);
            normalize_timed(&ctx, &ty, &t, &mut slowest)?;
        }
        let took = start.elapsed();
        Ok(format!(
            "500 fresh terms, slowest normalize {slowest:?} (budget {PER_TERM_BUDGET:?} each), total {took:?}"
        ))
    };
    report("A8", "termination and throughput sanity", run());
}
