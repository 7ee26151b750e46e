//! Free-monoid expressions and their list normal forms.
//!
//! Expressions are the raw trees of the monoid theory over a set of
//! generators; lists are their normal forms. Evaluation into lists is the
//! section of the quotient, `retract_p` goes back, and their composite is the
//! identity on lists — which transports injectivity of cons on lists to
//! injectivity of scalar multiplication on the quotient. A bounded
//! rewrite-closure oracle lets tests confirm that list equality really does
//! decide the word problem.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

/// An expression in the theory of monoids over generator symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonExpr {
    Gen(String),
    Eps,
    Mu(Box<MonExpr>, Box<MonExpr>),
}

impl MonExpr {
    pub fn gen(sym: impl Into<String>) -> MonExpr {
        MonExpr::Gen(sym.into())
    }

    pub fn mu(left: MonExpr, right: MonExpr) -> MonExpr {
        MonExpr::Mu(Box::new(left), Box::new(right))
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            MonExpr::Gen(_) | MonExpr::Eps => 1,
            MonExpr::Mu(l, r) => 1 + l.size() + r.size(),
        }
    }
}

impl fmt::Display for MonExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonExpr::Gen(s) => write!(f, "(gen {})", s),
            MonExpr::Eps => write!(f, "eps"),
            MonExpr::Mu(l, r) => write!(f, "(mu {} {})", l, r),
        }
    }
}

/// Lists of generators: the normal forms.
pub type FreeList = Vec<String>;

/// Render a list as `[a b c]`.
pub fn print_list(m: &FreeList) -> String {
    format!("[{}]", m.join(" "))
}

pub fn list_eta(a: impl Into<String>) -> FreeList {
    vec![a.into()]
}

pub fn list_eps() -> FreeList {
    Vec::new()
}

/// Concatenation, by the defining recursion on the left list.
pub fn list_mu(m: &FreeList, n: &FreeList) -> FreeList {
    match m.split_first() {
        None => n.clone(),
        Some((a, rest)) => {
            let mut out = Vec::with_capacity(m.len() + n.len());
            out.push(a.clone());
            out.extend(list_mu(&rest.to_vec(), n));
            out
        }
    }
}

/// Evaluate an expression to its list normal form. A monoid homomorphism by
/// construction.
pub fn eval_expr(e: &MonExpr) -> FreeList {
    match e {
        MonExpr::Gen(a) => list_eta(a.clone()),
        MonExpr::Eps => list_eps(),
        MonExpr::Mu(u, v) => list_mu(&eval_expr(u), &eval_expr(v)),
    }
}

/// The retraction: rebuild a right-nested expression from a list, so that
/// `eval_expr(retract_p(m)) = m`.
pub fn retract_p(m: &FreeList) -> MonExpr {
    match m.split_first() {
        None => MonExpr::Eps,
        Some((a, rest)) => MonExpr::mu(MonExpr::gen(a.clone()), retract_p(&rest.to_vec())),
    }
}

/// Decide the word problem: two expressions denote the same element of the
/// free monoid iff their list normal forms coincide.
pub fn expr_eq(u: &MonExpr, v: &MonExpr) -> bool {
    eval_expr(u) == eval_expr(v)
}

/// All expressions of size <= `bound` reachable from `u` by single
/// applications of the three monoid laws, in either direction, at any
/// subterm. Brute-force oracle for validating [`expr_eq`] on small inputs.
pub fn rewrite_closure_oracle(u: &MonExpr, bound: usize) -> BTreeSet<MonExpr> {
    let mut seen: HashSet<MonExpr> = HashSet::new();
    let mut queue: VecDeque<MonExpr> = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    while let Some(e) = queue.pop_front() {
        for next in rewrites(&e) {
            if next.size() <= bound && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// Single-step rewrites of `e`: each law applied once, both ways, at the root
/// or inside either child of a `Mu`.
fn rewrites(e: &MonExpr) -> Vec<MonExpr> {
    let mut out = Vec::new();
    // root contractions
    if let MonExpr::Mu(l, r) = e {
        if **l == MonExpr::Eps {
            out.push((**r).clone());
        }
        if **r == MonExpr::Eps {
            out.push((**l).clone());
        }
        if let MonExpr::Mu(ll, lr) = l.as_ref() {
            out.push(MonExpr::mu((**ll).clone(), MonExpr::mu((**lr).clone(), (**r).clone())));
        }
        if let MonExpr::Mu(rl, rr) = r.as_ref() {
            out.push(MonExpr::mu(MonExpr::mu((**l).clone(), (**rl).clone()), (**rr).clone()));
        }
    }
    // root expansions
    out.push(MonExpr::mu(MonExpr::Eps, e.clone()));
    out.push(MonExpr::mu(e.clone(), MonExpr::Eps));
    // congruence
    if let MonExpr::Mu(l, r) = e {
        for l2 in rewrites(l) {
            out.push(MonExpr::mu(l2, (**r).clone()));
        }
        for r2 in rewrites(r) {
            out.push(MonExpr::mu((**l).clone(), r2));
        }
    }
    out
}

/// Every expression over `alphabet` with exactly `size` nodes.
pub fn enumerate_exprs(alphabet: &[&str], size: usize) -> Vec<MonExpr> {
    match size {
        0 => Vec::new(),
        1 => {
            let mut out: Vec<MonExpr> = alphabet.iter().map(|a| MonExpr::gen(*a)).collect();
            out.push(MonExpr::Eps);
            out
        }
        n => {
            let mut out = Vec::new();
            for left in 1..(n - 1) {
                let right = n - 1 - left;
                for l in enumerate_exprs(alphabet, left) {
                    for r in enumerate_exprs(alphabet, right) {
                        out.push(MonExpr::mu(l.clone(), r.clone()));
                    }
                }
            }
            out
        }
    }
}

/// Every expression over `alphabet` with at most `max_size` nodes.
pub fn enumerate_exprs_up_to(alphabet: &[&str], max_size: usize) -> Vec<MonExpr> {
    (1..=max_size)
        .flat_map(|s| enumerate_exprs(alphabet, s))
        .collect()
}

/// Every list over `alphabet` of length at most `max_len`.
pub fn enumerate_lists(alphabet: &[&str], max_len: usize) -> Vec<FreeList> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for m in &frontier {
            for a in alphabet {
                let mut m2 = m.clone();
                m2.push((*a).to_string());
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
