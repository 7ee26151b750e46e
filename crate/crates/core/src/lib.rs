//! A normalization kernel for a simply typed lambda calculus over a base
//! type `O` with two constants `yes` and `no`.
//!
//! The kernel normalizes by evaluation: terms are interpreted into a
//! semantic domain and read back as eta-long beta-normal forms, giving a
//! decidable conversion check and, because normal types form a free algebra,
//! an effective injectivity check for the function-space constructor. A
//! self-contained free-monoid module plays the same game one size smaller:
//! lists as normal forms of monoid expressions, with a retraction that
//! transports injectivity back to the quotient.
//!
//! Module map:
//!
//! - [`syntax`]: types, terms, contexts, bidirectional typing, and a one-step
//!   beta-reduction oracle used only by tests.
//! - [`nf`]: the normal-form algebra (normal types, neutral terms, normal
//!   terms), erasure back to syntax, and well-formedness validation.
//! - [`nbe`]: evaluation, reflection/reification, normalization, conversion,
//!   and the function-space injectivity verdict.
//! - [`monoid`]: free-monoid expressions, list normal forms, and the bounded
//!   rewrite-closure oracle.
//! - [`surface`]: parser and pretty-printer for the concrete syntax.
//! - [`script`]: the batch directive engine behind the CLI; runs independent
//!   directives in parallel when the `parallel` feature (default) is on.
//! - [`gen`]: seeded generators and enumerators for well-typed terms and
//!   well-formed normal forms, shared by tests and benches.

pub mod gen;
pub mod monoid;
pub mod nbe;
pub mod nf;
pub mod script;
pub mod surface;
pub mod syntax;
