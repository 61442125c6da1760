//! Consistency checking for feature terms extended with set descriptions
//! and set operations.
//!
//! The term language has features (`f: T`), existential and restricted
//! universal role quantification (`some f: T`, `all f: P`), set
//! descriptions plain and fixed-cardinality (`f: {T1, .., Tn}`,
//! `f: {T1, .., Tn}=`), set union, intersection, subset and disjointness
//! over relation applications, conjunction, and negation of primitives.
//! Disjoint union (`dunion`) is sugar for disjointness plus union and is
//! removed by [`Term::desugar`]. The motivating use is constraint-based
//! grammar development, where set-valued attributes (subcategorisation
//! frames, semantic indices) need exactly this vocabulary.
//!
//! [`solver::solve`] decides consistency by rewriting the constraint
//! `root = term` to a normal form and extracting a finite model from
//! clash-free normal forms. Three independent routes keep it honest:
//!
//! * [`semantics`] implements the denotation function directly over finite
//!   interpretations and can enumerate small models exhaustively;
//! * [`sat`] encodes propositional satisfiability into term consistency,
//!   checkable against a truth table;
//! * [`fol`] translates terms into the existential-universal (function-free)
//!   first-order fragment and decides the output by ground instantiation.
//!
//! ```
//! use setlog::{parse, solve, Signature, SolverConfig, SourceText};
//!
//! let mut sig = Signature::new();
//! let term = parse(&SourceText::from_str("subcat: np($x) dunion vp($y)"), &mut sig)?;
//! let result = solve(&term.desugar(), "root", &SolverConfig::default())?;
//! assert!(result.is_consistent());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod constraint;
pub mod fol;
pub mod sat;
pub mod semantics;
pub mod sig;
pub mod solver;
pub mod syntax;
pub mod term;

pub use constraint::{Constraint, ConstraintSystem};
pub use semantics::{denote, enumerate_models, satisfies, Assignment, FiniteInterpretation, Model};
pub use sig::{NameKind, SigError, Signature, BOT, TOP};
pub use solver::{
    detect_clash, extract_model, simplify_step, solve, to_basic, BranchOrder, Clash, RuleId,
    SolveError, SolveResult, SolverConfig, StepResult, TraceEvent,
};
pub use syntax::{parse, parse_corpus, render, ParseError, SourceText};
pub use term::{PropP, Term, Violation};
