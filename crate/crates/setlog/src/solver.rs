//! The consistency-checking procedure.
//!
//! Solving runs in two phases. Decomposition breaks the initial constraint
//! `root = T` into *basic* constraints whose subterms under relation
//! constructors are variables, introducing fresh variables as it goes.
//! Simplification then rewrites the basic system to a fixpoint: equations
//! are eliminated by substitution, interacting constraints are merged, and
//! constraints of the form `x = C̄` accumulate. Only two rules branch — the
//! resolution of a disjunctive constraint, and pushing a union's successor
//! down one of its two sides — and the search over those choices is
//! depth-first with chronological backtracking.
//!
//! A system to which no rule applies is in *normal form*; a clash-free
//! normal form yields a finite model via [`extract_model`]. Clashes are
//! checked eagerly after every rewrite (the six conditions are monotone in
//! the entailment closure, so early cuts are sound) and once more at normal
//! form, where the successor sets have stopped growing.
//!
//! Implementation notes, where behaviour is forced beyond the obvious rule
//! reading:
//!
//! * A fixed-cardinality set with all-variable members gets its plain
//!   companion `x = f:{x1..xn}` added during decomposition (the mixed-member
//!   case produces the companion anyway). Without it the set rules never see
//!   the members, and extraction would not cover the successor set.
//! * `SForallE`'s existential premise is matched through the entailment
//!   closure (any successor), not as a literal `some f:` constraint;
//!   otherwise `x = f:y & x = all f: !a` reaches a "normal form" whose
//!   extracted model violates the universal.
//! * The set-interaction rules `SSet`, `SSetF`, `SSetSet` and `SSetE` keep
//!   their premises and only add the linking constraints (feature forms,
//!   equations, disjunctions). Consuming a premise either shrinks `succ`
//!   (which the guard-driven propagation rules would then re-derive,
//!   looping) or deletes the plain set that the fixed-cardinality companion
//!   invariant and the successor-cover argument rely on. The added
//!   constraints are exactly the printed consequents, so satisfaction is
//!   preserved both ways.
//! * `x = Bot` and `x = !Top` are clashes (condition 3): `Bot` denotes the
//!   empty set in every model, so no assignment can satisfy them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use std::collections::BTreeSet;

use crate::constraint::{Constraint, ConstraintSystem};
use crate::semantics::{Assignment, FiniteInterpretation, Model};
use crate::sig::{BOT, TOP};
use crate::term::Term;

/// Every rewrite rule, decomposition and simplification alike.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    DFeat,
    DForall,
    DSet,
    DSetF,
    DConj,
    SEquals,
    SConst,
    SFeat,
    SExists,
    SForallE,
    SSetF,
    SSet,
    SDup,
    SForall,
    SSetE,
    SSetSet,
    SDis,
    Subset,
    UnionLeft,
    UnionRight,
    UnionDown,
    IsectDown,
    IsectUp,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RuleId::DFeat => "DFeat",
            RuleId::DForall => "DForall",
            RuleId::DSet => "DSet",
            RuleId::DSetF => "DSetF",
            RuleId::DConj => "DConj",
            RuleId::SEquals => "SEquals",
            RuleId::SConst => "SConst",
            RuleId::SFeat => "SFeat",
            RuleId::SExists => "SExists",
            RuleId::SForallE => "SForallE",
            RuleId::SSetF => "SSetF",
            RuleId::SSet => "SSet",
            RuleId::SDup => "SDup",
            RuleId::SForall => "SForall",
            RuleId::SSetE => "SSetE",
            RuleId::SSetSet => "SSetSet",
            RuleId::SDis => "SDis",
            RuleId::Subset => "Subset",
            RuleId::UnionLeft => "UnionLeft",
            RuleId::UnionRight => "UnionRight",
            RuleId::UnionDown => "UnionDown",
            RuleId::IsectDown => "IsectDown",
            RuleId::IsectUp => "IsectUp",
        })
    }
}

/// Evidence that a normal-form system is unsatisfiable: which of the six
/// clash conditions fired, on which variable, and the entailed constraints
/// that triggered it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clash {
    pub condition: u8,
    pub witness: String,
    pub detail: Vec<Constraint>,
}

impl std::fmt::Display for Clash {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "clash {} @ ${}", self.condition, self.witness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchOrder {
    /// Branches in the order the rule lists them.
    Deterministic,
    /// Branch order shuffled per choice point, reproducibly from the seed.
    Randomized(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Safety fuse on rule applications. Termination makes it unreachable;
    /// exceeding it signals an implementation bug.
    pub max_steps: u64,
    pub branch_order: BranchOrder,
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_steps: 1_000_000,
            branch_order: BranchOrder::Deterministic,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Apply { rule: RuleId, var: String },
    BranchOpen { rule: RuleId, var: String, choice: usize, arity: usize },
    Backtrack,
    ClashFound { condition: u8, var: String },
}

impl std::fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TraceEvent::Apply { rule, var } => write!(f, "{rule} @ ${var}"),
            TraceEvent::BranchOpen {
                rule,
                var,
                choice,
                arity,
            } => write!(f, "branch {rule} @ ${var} [{choice}/{arity}]"),
            TraceEvent::Backtrack => write!(f, "backtrack"),
            TraceEvent::ClashFound { condition, var } => write!(f, "clash {condition} @ ${var}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub steps: u64,
    pub branches_explored: u64,
    /// Fresh-variable counter after decomposition and at the end; equal by
    /// the termination argument (simplification introduces no variables).
    pub fresh_after_decomposition: u64,
    pub fresh_final: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Consistent {
        normal_form: ConstraintSystem,
        model: Model,
        trace: Vec<TraceEvent>,
        stats: SolveStats,
    },
    Inconsistent {
        clashes_per_branch: Vec<Clash>,
        branches_explored: u64,
        trace: Vec<TraceEvent>,
        stats: SolveStats,
    },
}

impl SolveResult {
    pub fn is_consistent(&self) -> bool {
        matches!(self, SolveResult::Consistent { .. })
    }

    pub fn trace(&self) -> &[TraceEvent] {
        match self {
            SolveResult::Consistent { trace, .. } => trace,
            SolveResult::Inconsistent { trace, .. } => trace,
        }
    }

    pub fn stats(&self) -> &SolveStats {
        match self {
            SolveResult::Consistent { stats, .. } => stats,
            SolveResult::Inconsistent { stats, .. } => stats,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("step budget of {max_steps} rule applications exceeded")]
    StepBudgetExceeded { max_steps: u64 },
    #[error("root variable `{root}` occurs in the term")]
    RootOccursInTerm { root: String },
    #[error("term contains disjoint union sugar; desugar before solving")]
    NotDesugared,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("system is not in normal form")]
    NotNormalForm,
    #[error("system contains a clash: {0}")]
    HasClash(Clash),
}

/// Outcome of one simplification attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    /// No rule applies: the system is in normal form.
    Unchanged,
    Deterministic {
        next: ConstraintSystem,
        rule: RuleId,
        var: String,
    },
    /// Only `SDis` and `UnionDown` branch.
    Branch {
        options: Vec<ConstraintSystem>,
        rule: RuleId,
        var: String,
    },
}

// ---------------------------------------------------------------------------
// decomposition

fn find_decomposition(cs: &ConstraintSystem) -> Option<(RuleId, usize)> {
    let items = cs.constraints();
    for rule in [
        RuleId::DFeat,
        RuleId::DForall,
        RuleId::DSet,
        RuleId::DSetF,
        RuleId::DConj,
    ] {
        for (i, c) in items.iter().enumerate() {
            let Constraint::Contain { var: x, term } = c else {
                continue;
            };
            let hit = match (rule, term) {
                (RuleId::DFeat, Term::Feature(_, t)) | (RuleId::DFeat, Term::Exists(_, t)) => {
                    !matches!(t.as_ref(), Term::Var(_))
                }
                (RuleId::DForall, Term::Forall(_, t)) => {
                    matches!(t.as_ref(), Term::Atom(_) | Term::Const(_))
                }
                (RuleId::DSet, Term::SetDesc(_, ts)) => {
                    ts.iter().any(|t| !matches!(t, Term::Var(_)))
                }
                (RuleId::DSetF, Term::FixedSet(f, ts)) => {
                    if ts.iter().any(|t| !matches!(t, Term::Var(_))) {
                        true
                    } else {
                        // all-variable members: ensure a plain set with the
                        // same member set accompanies the fixed one
                        let members: BTreeSet<&str> = ts
                            .iter()
                            .filter_map(|t| match t {
                                Term::Var(v) => Some(v.as_str()),
                                _ => None,
                            })
                            .collect();
                        !cs.index().facts_of(x).plain_sets.iter().any(|(pf, pm)| {
                            pf == f
                                && pm.iter().map(String::as_str).collect::<BTreeSet<_>>()
                                    == members
                        })
                    }
                }
                (RuleId::DConj, Term::Conj(..)) => true,
                _ => false,
            };
            if hit {
                return Some((rule, i));
            }
        }
    }
    None
}

fn apply_decomposition(cs: &ConstraintSystem, rule: RuleId, idx: usize) -> (ConstraintSystem, String) {
    let mut next = cs.clone();
    let Constraint::Contain { var: x, term } = next.constraints()[idx].clone() else {
        unreachable!("decomposition only matches containments");
    };
    // insert consequents starting at the consumed position, skipping
    // constraints already present
    let mut insert_from = idx;
    let mut insert = |next: &mut ConstraintSystem, c: Constraint| {
        if !next.contains(&c) {
            next.insert_at(insert_from, c);
            insert_from += 1;
        }
    };
    match (rule, term) {
        (RuleId::DFeat, Term::Feature(f, t)) => {
            next.remove_at(idx);
            let y = next.fresh_var();
            insert(
                &mut next,
                Constraint::contain(x.clone(), Term::Feature(f, Box::new(Term::Var(y.clone())))),
            );
            insert(&mut next, Constraint::contain(y, *t));
        }
        (RuleId::DFeat, Term::Exists(f, t)) => {
            next.remove_at(idx);
            let y = next.fresh_var();
            insert(
                &mut next,
                Constraint::contain(x.clone(), Term::Exists(f, Box::new(Term::Var(y.clone())))),
            );
            insert(&mut next, Constraint::contain(y, *t));
        }
        (RuleId::DForall, Term::Forall(f, t)) => {
            next.remove_at(idx);
            let y = next.fresh_var();
            insert(
                &mut next,
                Constraint::contain(x.clone(), Term::Forall(f, Box::new(Term::Var(y.clone())))),
            );
            insert(&mut next, Constraint::contain(y, *t));
        }
        (RuleId::DSet, Term::SetDesc(f, ts)) => {
            next.remove_at(idx);
            let fresh: Vec<String> = ts.iter().map(|_| next.fresh_var()).collect();
            insert(
                &mut next,
                Constraint::contain(
                    x.clone(),
                    Term::SetDesc(f, fresh.iter().cloned().map(Term::Var).collect()),
                ),
            );
            for (v, t) in fresh.iter().zip(ts) {
                insert(&mut next, Constraint::contain(v.clone(), t));
            }
        }
        (RuleId::DSetF, Term::FixedSet(f, ts)) => {
            if ts.iter().any(|t| !matches!(t, Term::Var(_))) {
                next.remove_at(idx);
                let fresh: Vec<String> = ts.iter().map(|_| next.fresh_var()).collect();
                let members: Vec<Term> = fresh.iter().cloned().map(Term::Var).collect();
                insert(
                    &mut next,
                    Constraint::contain(x.clone(), Term::SetDesc(f.clone(), members.clone())),
                );
                insert(
                    &mut next,
                    Constraint::contain(x.clone(), Term::FixedSet(f, members)),
                );
                for (v, t) in fresh.iter().zip(ts) {
                    insert(&mut next, Constraint::contain(v.clone(), t));
                }
            } else {
                // all-variable members: add the plain companion before the
                // fixed set, which stays
                insert(
                    &mut next,
                    Constraint::contain(x.clone(), Term::SetDesc(f, ts)),
                );
            }
        }
        (RuleId::DConj, Term::Conj(s, t)) => {
            next.remove_at(idx);
            insert(&mut next, Constraint::contain(x.clone(), *s));
            insert(&mut next, Constraint::contain(x.clone(), *t));
        }
        _ => unreachable!("find_decomposition only returns matching rules"),
    }
    (next, x)
}

/// Exhaustively apply the decomposition rules. The result is in basic form:
/// every containment right-hand side has variables under its relation
/// constructors.
pub fn to_basic(cs: &ConstraintSystem) -> Result<ConstraintSystem, SolveError> {
    let config = SolverConfig::default();
    let mut ctx = Ctx::new(&config);
    to_basic_inner(cs.clone(), &mut ctx)
}

fn to_basic_inner(mut cs: ConstraintSystem, ctx: &mut Ctx) -> Result<ConstraintSystem, SolveError> {
    while let Some((rule, idx)) = find_decomposition(&cs) {
        ctx.step()?;
        let (next, var) = apply_decomposition(&cs, rule, idx);
        ctx.trace(|| TraceEvent::Apply { rule, var });
        cs = next;
    }
    Ok(cs)
}

// ---------------------------------------------------------------------------
// simplification

fn set_members(ts: &[Term]) -> Option<Vec<&str>> {
    ts.iter()
        .map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            _ => None,
        })
        .collect()
}

/// Is the body in the `C̄` range of `SForallE`/`SForall`: `C`, `!C`, `!a`,
/// `!c`, `!z`?
fn is_cbar(t: &Term) -> bool {
    matches!(
        t,
        Term::Concept(_)
            | Term::NegConcept(_)
            | Term::NegAtom(_)
            | Term::NegConst(_)
            | Term::NegVar(_)
    )
}

fn occurs_in(c: &Constraint, x: &str) -> bool {
    match c {
        Constraint::Contain { var, term } => var == x || term.free_vars().contains(x),
        Constraint::Disjunctive { var, choices } => var == x || choices.iter().any(|c| c == x),
    }
}

fn exists_goal(x: &str, f: &str, y: &str) -> Constraint {
    Constraint::contain(x, Term::Exists(f.to_string(), Box::new(Term::Var(y.to_string()))))
}

/// Apply the first applicable simplification rule under the fixed priority
/// order. The system must be basic.
pub fn simplify_step(cs: &ConstraintSystem) -> StepResult {
    debug_assert!(find_decomposition(cs).is_none(), "simplify_step needs basic form");
    let items = cs.constraints();

    // SEquals: x = y and x occurs elsewhere -> substitute x by y
    for (i, c) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: Term::Var(y) } = c else {
            continue;
        };
        if x == y {
            continue;
        }
        if !items
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && occurs_in(other, x))
        {
            continue;
        }
        let kept = c.clone();
        let mut out: Vec<Constraint> = Vec::with_capacity(items.len());
        for (j, other) in items.iter().enumerate() {
            let mapped = if j == i { kept.clone() } else { other.rename_var(x, y) };
            // drop trivial self-equations and duplicates created by the merge
            if let Constraint::Contain { var, term: Term::Var(w) } = &mapped {
                if var == w {
                    continue;
                }
            }
            if !out.contains(&mapped) {
                out.push(mapped);
            }
        }
        let mut next = ConstraintSystem::from_constraints(out);
        next.raise_fresh_floor(cs.fresh_counter());
        return StepResult::Deterministic {
            next,
            rule: RuleId::SEquals,
            var: x.clone(),
        };
    }

    // SConst: x = c̄ and y = c̄ -> x = y, keep x = c̄
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: t } = ci else {
            continue;
        };
        if !matches!(t, Term::Atom(_) | Term::Const(_)) {
            continue;
        }
        for (j, cj) in items.iter().enumerate() {
            if j <= i {
                continue;
            }
            let Constraint::Contain { var: y, term: t2 } = cj else {
                continue;
            };
            if t2 == t && y != x {
                let mut next = cs.clone();
                next.replace_at(j, Constraint::contain(x.clone(), Term::Var(y.clone())));
                return StepResult::Deterministic {
                    next,
                    rule: RuleId::SConst,
                    var: x.clone(),
                };
            }
        }
    }

    // SFeat: x = f:y and x = F:z (F in {f, some f, all f}) -> keep f:y, y = z
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: Term::Feature(f, ty) } = ci else {
            continue;
        };
        let Term::Var(y) = ty.as_ref() else { continue };
        for (j, cj) in items.iter().enumerate() {
            if j == i {
                continue;
            }
            let Constraint::Contain { var: x2, term: t2 } = cj else {
                continue;
            };
            if x2 != x {
                continue;
            }
            let z = match t2 {
                Term::Feature(f2, tz) | Term::Exists(f2, tz) | Term::Forall(f2, tz)
                    if f2 == f =>
                {
                    match tz.as_ref() {
                        Term::Var(z) => z.clone(),
                        _ => continue,
                    }
                }
                _ => continue,
            };
            let mut next = cs.clone();
            if z == *y {
                next.remove_at(j);
            } else {
                next.replace_at(j, Constraint::contain(y.clone(), Term::Var(z)));
            }
            return StepResult::Deterministic {
                next,
                rule: RuleId::SFeat,
                var: x.clone(),
            };
        }
    }

    // SExists: x = some f:y and x = all f:z -> x = f:y, y = z
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: Term::Exists(f, ty) } = ci else {
            continue;
        };
        let Term::Var(y) = ty.as_ref() else { continue };
        for (j, cj) in items.iter().enumerate() {
            if j == i {
                continue;
            }
            let Constraint::Contain { var: x2, term: Term::Forall(f2, tz) } = cj else {
                continue;
            };
            if x2 != x || f2 != f {
                continue;
            }
            let Term::Var(z) = tz.as_ref() else { continue };
            let mut next = cs.clone();
            next.replace_at(
                i,
                Constraint::contain(x.clone(), Term::Feature(f.clone(), Box::new(Term::Var(y.clone())))),
            );
            if z == y {
                next.remove_at(j);
            } else {
                next.replace_at(j, Constraint::contain(y.clone(), Term::Var(z.clone())));
            }
            return StepResult::Deterministic {
                next,
                rule: RuleId::SExists,
                var: x.clone(),
            };
        }
    }

    // SForallE: x = all f:C̄ and x = some f:y (through entailment) -> y = C̄
    for ci in items.iter() {
        let Constraint::Contain { var: x, term: Term::Forall(f, body) } = ci else {
            continue;
        };
        if !is_cbar(body) {
            continue;
        }
        for y in cs.succ(x, f) {
            let goal = Constraint::contain(y.clone(), body.as_ref().clone());
            if !cs.entails(&goal) {
                let mut next = cs.clone();
                next.push_unique(goal);
                return StepResult::Deterministic {
                    next,
                    rule: RuleId::SForallE,
                    var: x.clone(),
                };
            }
        }
    }

    // SSetF: x = F:y (F in {f, all f}) and x = f:{x1..xn}: the set members
    // all coincide with y. The premises are kept; a universal premise also
    // yields the feature form (the set is non-empty, so the value is
    // exactly y).
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: t } = ci else {
            continue;
        };
        let (f, y, from_forall) = match t {
            Term::Feature(f, ty) => match ty.as_ref() {
                Term::Var(y) => (f, y, false),
                _ => continue,
            },
            Term::Forall(f, ty) => match ty.as_ref() {
                Term::Var(y) => (f, y, true),
                _ => continue,
            },
            _ => continue,
        };
        for (j, cj) in items.iter().enumerate() {
            if j == i {
                continue;
            }
            let Constraint::Contain { var: x2, term: Term::SetDesc(f2, ts) } = cj else {
                continue;
            };
            if x2 != x || f2 != f {
                continue;
            }
            let Some(members) = set_members(ts) else { continue };
            let feature = Constraint::contain(
                x.clone(),
                Term::Feature(f.clone(), Box::new(Term::Var(y.clone()))),
            );
            let mut additions = Vec::new();
            if from_forall && !cs.entails(&feature) {
                additions.push(feature);
            }
            for m in &members {
                if *m != y {
                    let eq = Constraint::contain(y.clone(), Term::Var(m.to_string()));
                    if !cs.entails(&eq) {
                        additions.push(eq);
                    }
                }
            }
            if additions.is_empty() {
                continue;
            }
            let mut next = cs.clone();
            for c in additions {
                next.push_unique(c);
            }
            return StepResult::Deterministic {
                next,
                rule: RuleId::SSetF,
                var: x.clone(),
            };
        }
    }

    // SSet: x = f:{y} also pins the feature form x = f:y
    for ci in items.iter() {
        let Constraint::Contain { var: x, term: Term::SetDesc(f, ts) } = ci else {
            continue;
        };
        if ts.len() != 1 {
            continue;
        }
        let Term::Var(y) = &ts[0] else { continue };
        let feature = Constraint::contain(
            x.clone(),
            Term::Feature(f.clone(), Box::new(Term::Var(y.clone()))),
        );
        if cs.entails(&feature) {
            continue;
        }
        let mut next = cs.clone();
        next.push_unique(feature);
        return StepResult::Deterministic {
            next,
            rule: RuleId::SSet,
            var: x.clone(),
        };
    }

    // SDup: drop a duplicated member of a set description
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: Term::SetDesc(f, ts) } = ci else {
            continue;
        };
        let Some(members) = set_members(ts) else { continue };
        let mut dup_at = None;
        'outer: for a in 0..members.len() {
            for b in (a + 1)..members.len() {
                if members[a] == members[b] {
                    dup_at = Some(b);
                    break 'outer;
                }
            }
        }
        let Some(b) = dup_at else { continue };
        let mut shorter = ts.clone();
        shorter.remove(b);
        let mut next = cs.clone();
        next.replace_at(i, Constraint::contain(x.clone(), Term::SetDesc(f.clone(), shorter)));
        next.dedup();
        return StepResult::Deterministic {
            next,
            rule: RuleId::SDup,
            var: x.clone(),
        };
    }

    // SForall: x = all f:C̄ and x = f:{x1..xn} -> drop the universal,
    // constrain every member
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: Term::Forall(f, body) } = ci else {
            continue;
        };
        if !is_cbar(body) {
            continue;
        }
        for cj in items.iter() {
            let Constraint::Contain { var: x2, term: Term::SetDesc(f2, ts) } = cj else {
                continue;
            };
            if x2 != x || f2 != f {
                continue;
            }
            let Some(members) = set_members(ts) else { continue };
            let fires = members.iter().any(|m| {
                !cs.entails(&Constraint::contain(m.to_string(), body.as_ref().clone()))
            });
            if !fires {
                continue;
            }
            let members: Vec<String> = members.iter().map(|s| s.to_string()).collect();
            let mut next = cs.clone();
            next.remove_at(i);
            for m in members {
                next.push_unique(Constraint::contain(m, body.as_ref().clone()));
            }
            return StepResult::Deterministic {
                next,
                rule: RuleId::SForall,
                var: x.clone(),
            };
        }
    }

    // SSetE: x = some f:y and x = f:{x1..xn} -> y = x1 | ... | xn
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: Term::Exists(f, ty) } = ci else {
            continue;
        };
        let Term::Var(y) = ty.as_ref() else { continue };
        for (j, cj) in items.iter().enumerate() {
            if j == i {
                continue;
            }
            let Constraint::Contain { var: x2, term: Term::SetDesc(f2, ts) } = cj else {
                continue;
            };
            if x2 != x || f2 != f {
                continue;
            }
            let Some(members) = set_members(ts) else { continue };
            let disj = Constraint::Disjunctive {
                var: y.clone(),
                choices: members.iter().map(|s| s.to_string()).collect(),
            };
            if cs.contains(&disj) {
                continue;
            }
            let mut next = cs.clone();
            next.push_unique(disj);
            return StepResult::Deterministic {
                next,
                rule: RuleId::SSetE,
                var: x.clone(),
            };
        }
    }

    // SSetSet: two set descriptions on the same (x, f) cross-link their
    // members: each member of one set equals one of the other's members.
    // Both sets are kept.
    for (i, ci) in items.iter().enumerate() {
        let Constraint::Contain { var: x, term: Term::SetDesc(f, ts_a) } = ci else {
            continue;
        };
        let Some(a) = set_members(ts_a) else { continue };
        for (j, cj) in items.iter().enumerate() {
            if j <= i {
                continue;
            }
            let Constraint::Contain { var: x2, term: Term::SetDesc(f2, ts_b) } = cj else {
                continue;
            };
            if x2 != x || f2 != f {
                continue;
            }
            let Some(b) = set_members(ts_b) else { continue };
            let a: Vec<String> = a.iter().map(|s| s.to_string()).collect();
            let b: Vec<String> = b.iter().map(|s| s.to_string()).collect();
            // guard as printed: the smaller set's members choose among the
            // larger set's
            let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
            let mut additions = Vec::new();
            for m in small {
                let d = Constraint::Disjunctive {
                    var: m.clone(),
                    choices: large.clone(),
                };
                if !cs.contains(&d) {
                    additions.push(d);
                }
            }
            for m in large {
                let d = Constraint::Disjunctive {
                    var: m.clone(),
                    choices: small.clone(),
                };
                if !cs.contains(&d) {
                    additions.push(d);
                }
            }
            if additions.is_empty() {
                continue;
            }
            let mut next = cs.clone();
            for c in additions {
                next.push_unique(c);
            }
            return StepResult::Deterministic {
                next,
                rule: RuleId::SSetSet,
                var: x.clone(),
            };
        }
    }

    // Subset: x = f: >= g(y) propagates g-successors of y into f-successors
    for ci in items.iter() {
        let Constraint::Contain { var: x, term: Term::Superset { f, g, x: y } } = ci else {
            continue;
        };
        for yi in cs.succ(y, g) {
            if !cs.entails(&exists_goal(x, f, &yi)) {
                let mut next = cs.clone();
                next.push_unique(exists_goal(x, f, &yi));
                return StepResult::Deterministic {
                    next,
                    rule: RuleId::Subset,
                    var: x.clone(),
                };
            }
        }
    }

    // UnionLeft / UnionRight: a union is a superset of both sides
    for rule in [RuleId::UnionLeft, RuleId::UnionRight] {
        for ci in items.iter() {
            let Constraint::Contain { var: x, term: Term::Union { f, g, x: y, h, y: z } } = ci
            else {
                continue;
            };
            let (side_rel, side_var) = if rule == RuleId::UnionLeft { (g, y) } else { (h, z) };
            let sup = Constraint::contain(
                x.clone(),
                Term::Superset {
                    f: f.clone(),
                    g: side_rel.clone(),
                    x: side_var.clone(),
                },
            );
            if !cs.entails(&sup) {
                let mut next = cs.clone();
                next.push_unique(sup);
                return StepResult::Deterministic {
                    next,
                    rule,
                    var: x.clone(),
                };
            }
        }
    }

    // IsectDown: an f-successor of x is both a g-successor of y and an
    // h-successor of z
    for ci in items.iter() {
        let Constraint::Contain { var: x, term: Term::Intersection { f, g, x: y, h, y: z } } = ci
        else {
            continue;
        };
        for xi in cs.succ(x, f) {
            let left = exists_goal(y, g, &xi);
            let right = exists_goal(z, h, &xi);
            if !cs.entails(&left) || !cs.entails(&right) {
                let mut next = cs.clone();
                next.push_unique(left);
                next.push_unique(right);
                return StepResult::Deterministic {
                    next,
                    rule: RuleId::IsectDown,
                    var: x.clone(),
                };
            }
        }
    }

    // IsectUp: a common g/h-successor is an f-successor
    for ci in items.iter() {
        let Constraint::Contain { var: x, term: Term::Intersection { f, g, x: y, h, y: z } } = ci
        else {
            continue;
        };
        for xi in cs.succ(y, g) {
            if cs.entails(&exists_goal(z, h, &xi)) && !cs.entails(&exists_goal(x, f, &xi)) {
                let mut next = cs.clone();
                next.push_unique(exists_goal(x, f, &xi));
                return StepResult::Deterministic {
                    next,
                    rule: RuleId::IsectUp,
                    var: x.clone(),
                };
            }
        }
    }

    // SDis: resolve a disjunctive constraint (n-ary choice)
    for ci in items.iter() {
        let Constraint::Disjunctive { var: x, choices } = ci else {
            continue;
        };
        if choices
            .iter()
            .any(|xi| cs.entails(&Constraint::contain(x.clone(), Term::Var(xi.clone()))))
        {
            continue;
        }
        let options = choices
            .iter()
            .map(|xi| {
                let mut next = cs.clone();
                next.push_unique(Constraint::contain(x.clone(), Term::Var(xi.clone())));
                next
            })
            .collect();
        return StepResult::Branch {
            options,
            rule: RuleId::SDis,
            var: x.clone(),
        };
    }

    // UnionDown: push an f-successor of x down one of the union's sides
    for ci in items.iter() {
        let Constraint::Contain { var: x, term: Term::Union { f, g, x: y, h, y: z } } = ci else {
            continue;
        };
        for xi in cs.succ(x, f) {
            let left = exists_goal(y, g, &xi);
            let right = exists_goal(z, h, &xi);
            if !cs.entails(&left) && !cs.entails(&right) {
                let mut lhs = cs.clone();
                lhs.push_unique(left);
                let mut rhs = cs.clone();
                rhs.push_unique(right);
                return StepResult::Branch {
                    options: vec![lhs, rhs],
                    rule: RuleId::UnionDown,
                    var: x.clone(),
                };
            }
        }
    }

    StepResult::Unchanged
}

// ---------------------------------------------------------------------------
// clash detection

/// Check the six clash conditions, in condition order then variable order.
/// Callable on any system; the conditions are monotone in the entailment
/// closure, so a clash found early persists to the normal form.
pub fn detect_clash(cs: &ConstraintSystem) -> Option<Clash> {
    let vars: Vec<String> = cs.variables().iter().cloned().collect();
    let ix = cs.index();

    // 1: two distinct atoms
    for x in &vars {
        let facts = ix.facts_of(x);
        if facts.atoms.len() >= 2 {
            let mut it = facts.atoms.iter();
            let a1 = it.next().unwrap().clone();
            let a2 = it.next().unwrap().clone();
            return Some(Clash {
                condition: 1,
                witness: x.clone(),
                detail: vec![
                    Constraint::contain(x.clone(), Term::Atom(a1)),
                    Constraint::contain(x.clone(), Term::Atom(a2)),
                ],
            });
        }
    }

    // 2: two distinct constants
    for x in &vars {
        let facts = ix.facts_of(x);
        if facts.consts.len() >= 2 {
            let mut it = facts.consts.iter();
            let c1 = it.next().unwrap().clone();
            let c2 = it.next().unwrap().clone();
            return Some(Clash {
                condition: 2,
                witness: x.clone(),
                detail: vec![
                    Constraint::contain(x.clone(), Term::Const(c1)),
                    Constraint::contain(x.clone(), Term::Const(c2)),
                ],
            });
        }
    }

    // 3: x = S̄ and x = !S̄ for S̄ a variable, atom, constant or concept;
    // plus the Bot/!Top cases, unsatisfiable on their own
    for x in &vars {
        let facts = ix.facts_of(x);
        for y in &vars {
            if ix.same_class(x, y) && ix.neg_pair(x, y) {
                return Some(Clash {
                    condition: 3,
                    witness: x.clone(),
                    detail: vec![
                        Constraint::contain(x.clone(), Term::Var(y.clone())),
                        Constraint::contain(x.clone(), Term::NegVar(y.clone())),
                    ],
                });
            }
        }
        if let Some(a) = facts.atoms.intersection(&facts.neg_atoms).next() {
            return Some(Clash {
                condition: 3,
                witness: x.clone(),
                detail: vec![
                    Constraint::contain(x.clone(), Term::Atom(a.clone())),
                    Constraint::contain(x.clone(), Term::NegAtom(a.clone())),
                ],
            });
        }
        if let Some(c) = facts.consts.intersection(&facts.neg_consts).next() {
            return Some(Clash {
                condition: 3,
                witness: x.clone(),
                detail: vec![
                    Constraint::contain(x.clone(), Term::Const(c.clone())),
                    Constraint::contain(x.clone(), Term::NegConst(c.clone())),
                ],
            });
        }
        if let Some(c) = facts.concepts.intersection(&facts.neg_concepts).next() {
            return Some(Clash {
                condition: 3,
                witness: x.clone(),
                detail: vec![
                    Constraint::contain(x.clone(), Term::Concept(c.clone())),
                    Constraint::contain(x.clone(), Term::NegConcept(c.clone())),
                ],
            });
        }
        if facts.concepts.contains(BOT) {
            return Some(Clash {
                condition: 3,
                witness: x.clone(),
                detail: vec![Constraint::contain(x.clone(), Term::Concept(BOT.into()))],
            });
        }
        if facts.neg_concepts.contains(TOP) {
            return Some(Clash {
                condition: 3,
                witness: x.clone(),
                detail: vec![Constraint::contain(x.clone(), Term::NegConcept(TOP.into()))],
            });
        }
    }

    // 4: an atom with a successor
    for x in &vars {
        let facts = ix.facts_of(x);
        if let Some(a) = facts.atoms.iter().next() {
            if let Some((f, ys)) = facts.succ.iter().find(|(_, ys)| !ys.is_empty()) {
                return Some(Clash {
                    condition: 4,
                    witness: x.clone(),
                    detail: vec![
                        exists_goal(x, f, &ys[0]),
                        Constraint::contain(x.clone(), Term::Atom(a.clone())),
                    ],
                });
            }
        }
    }

    // 5: f(x) != g(y) with a shared successor (successor sets compared on
    // the equality closure)
    for x in &vars {
        let rx = ix.rep_of(x);
        for (f, dx, g, dy) in ix.disjoint.iter() {
            if dx != rx {
                continue;
            }
            let sx = cs.succ_classes(dx, f);
            let sy = cs.succ_classes(dy, g);
            if let Some(shared) = sx.intersection(&sy).next() {
                return Some(Clash {
                    condition: 5,
                    witness: x.clone(),
                    detail: vec![
                        Constraint::contain(
                            x.clone(),
                            Term::Disjointness {
                                f: f.clone(),
                                x: dx.clone(),
                                g: g.clone(),
                                y: dy.clone(),
                            },
                        ),
                        exists_goal(dx, f, shared),
                        exists_goal(dy, g, shared),
                    ],
                });
            }
        }
    }

    // 6: x = f:{x1..xn}= with fewer than n distinct successors
    for x in &vars {
        let facts = ix.facts_of(x);
        for (f, members) in &facts.fixed_sets {
            let n = members.len();
            let distinct = cs.succ_classes(x, f).len();
            if distinct < n {
                return Some(Clash {
                    condition: 6,
                    witness: x.clone(),
                    detail: vec![Constraint::contain(
                        x.clone(),
                        Term::FixedSet(f.clone(), members.iter().cloned().map(Term::Var).collect()),
                    )],
                });
            }
        }
    }

    None
}

// ---------------------------------------------------------------------------
// model extraction

/// Build a model from a clash-free normal form, following the completeness
/// construction: the universe is the occurring variables, atoms and
/// constants; a variable denotes its entailed atom or its class
/// representative; constants follow their variable if one is equated, else
/// themselves; a concept collects the variables entailed to lie in it; and
/// `f` maps each variable's image to the image of `succ(x, f)`.
pub fn extract_model(cs: &ConstraintSystem) -> Result<Model, ExtractError> {
    if find_decomposition(cs).is_some() || simplify_step(cs) != StepResult::Unchanged {
        return Err(ExtractError::NotNormalForm);
    }
    if let Some(clash) = detect_clash(cs) {
        return Err(ExtractError::HasClash(clash));
    }

    let ix = cs.index();
    let vars = cs.variables();
    let atoms = cs.occurring_atoms();
    let consts = cs.occurring_consts();
    let concepts = cs.occurring_concepts();
    let relations = cs.occurring_relations();

    let mut universe: BTreeSet<String> = BTreeSet::new();
    universe.extend(vars.iter().cloned());
    universe.extend(atoms.iter().cloned());
    universe.extend(consts.iter().cloned());

    let alpha = |x: &str| -> String {
        let facts = ix.facts_of(x);
        match facts.atoms.iter().next() {
            Some(a) => a.clone(),
            None => ix.rep_of(x).to_string(),
        }
    };

    let var_map: std::collections::BTreeMap<String, String> =
        vars.iter().map(|x| (x.clone(), alpha(x))).collect();

    let mut const_map = std::collections::BTreeMap::new();
    for c in consts {
        let carrier = vars.iter().find(|x| ix.facts_of(x).consts.contains(c));
        let e = match carrier {
            Some(x) => alpha(x),
            None => c.clone(),
        };
        const_map.insert(c.clone(), e);
    }

    let mut concept_map = std::collections::BTreeMap::new();
    for k in concepts {
        if k == TOP || k == BOT {
            continue;
        }
        let set: BTreeSet<String> = vars
            .iter()
            .filter(|x| ix.facts_of(x).concepts.contains(k))
            .map(|x| alpha(x))
            .collect();
        concept_map.insert(k.clone(), set);
    }
    concept_map.insert(TOP.to_string(), universe.clone());
    concept_map.insert(BOT.to_string(), BTreeSet::new());

    let mut rel_tables = std::collections::BTreeMap::new();
    for f in relations {
        let mut table = BTreeSet::new();
        for x in vars {
            for y in cs.succ(x, f) {
                table.insert((alpha(x), alpha(&y)));
            }
        }
        rel_tables.insert(f.clone(), table);
    }

    let atom_map = atoms.iter().map(|a| (a.clone(), a.clone())).collect();

    let model = Model {
        interp: FiniteInterpretation {
            universe,
            relations: rel_tables,
            atom_map,
        },
        assign: Assignment {
            vars: var_map,
            consts: const_map,
            concepts: concept_map,
        },
    };
    debug_assert!(model.check_wellformed().is_ok());
    Ok(model)
}

// ---------------------------------------------------------------------------
// the search

struct Ctx {
    steps: u64,
    max_steps: u64,
    tracing: bool,
    trace: Vec<TraceEvent>,
    rng: Option<ChaCha8Rng>,
    clashes: Vec<Clash>,
    branches: u64,
}

impl Ctx {
    fn new(config: &SolverConfig) -> Self {
        Ctx {
            steps: 0,
            max_steps: config.max_steps,
            tracing: config.trace,
            trace: Vec::new(),
            rng: match config.branch_order {
                BranchOrder::Randomized(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
                BranchOrder::Deterministic => None,
            },
            clashes: Vec::new(),
            branches: 0,
        }
    }

    fn step(&mut self) -> Result<(), SolveError> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(SolveError::StepBudgetExceeded {
                max_steps: self.max_steps,
            });
        }
        Ok(())
    }

    fn trace(&mut self, ev: impl FnOnce() -> TraceEvent) {
        if self.tracing {
            self.trace.push(ev());
        }
    }
}

fn dfs(mut cs: ConstraintSystem, ctx: &mut Ctx) -> Result<Option<ConstraintSystem>, SolveError> {
    loop {
        if let Some(clash) = detect_clash(&cs) {
            ctx.trace(|| TraceEvent::ClashFound {
                condition: clash.condition,
                var: clash.witness.clone(),
            });
            ctx.clashes.push(clash);
            ctx.branches += 1;
            return Ok(None);
        }
        match simplify_step(&cs) {
            StepResult::Unchanged => {
                ctx.branches += 1;
                return Ok(Some(cs));
            }
            StepResult::Deterministic { next, rule, var } => {
                ctx.step()?;
                ctx.trace(|| TraceEvent::Apply { rule, var });
                cs = next;
            }
            StepResult::Branch { options, rule, var } => {
                let arity = options.len();
                let mut order: Vec<usize> = (0..arity).collect();
                if let Some(rng) = ctx.rng.as_mut() {
                    order.shuffle(rng);
                }
                for (attempt, idx) in order.into_iter().enumerate() {
                    ctx.step()?;
                    ctx.trace(|| TraceEvent::BranchOpen {
                        rule,
                        var: var.clone(),
                        choice: attempt + 1,
                        arity,
                    });
                    if let Some(nf) = dfs(options[idx].clone(), ctx)? {
                        return Ok(Some(nf));
                    }
                    ctx.trace(|| TraceEvent::Backtrack);
                }
                return Ok(None);
            }
        }
    }
}

/// Decide consistency of `term`, starting from the constraint
/// `root = term`. `term` must be desugared and `root` must not occur in it.
pub fn solve(term: &Term, root: &str, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    if !term.is_desugared() {
        return Err(SolveError::NotDesugared);
    }
    if term.free_vars().contains(root) {
        return Err(SolveError::RootOccursInTerm {
            root: root.to_string(),
        });
    }
    let mut ctx = Ctx::new(config);
    let cs0 = ConstraintSystem::from_root(root, term);
    let basic = to_basic_inner(cs0, &mut ctx)?;
    let fresh_after_decomposition = basic.fresh_counter();

    let found = dfs(basic, &mut ctx)?;
    match found {
        Some(nf) => {
            let stats = SolveStats {
                steps: ctx.steps,
                branches_explored: ctx.branches,
                fresh_after_decomposition,
                fresh_final: nf.fresh_counter(),
            };
            debug_assert_eq!(stats.fresh_after_decomposition, stats.fresh_final);
            let model = extract_model(&nf).expect("clash-free normal form must extract");
            Ok(SolveResult::Consistent {
                normal_form: nf,
                model,
                trace: std::mem::take(&mut ctx.trace),
                stats,
            })
        }
        None => {
            let stats = SolveStats {
                steps: ctx.steps,
                branches_explored: ctx.branches,
                fresh_after_decomposition,
                fresh_final: fresh_after_decomposition,
            };
            Ok(SolveResult::Inconsistent {
                clashes_per_branch: std::mem::take(&mut ctx.clashes),
                branches_explored: ctx.branches,
                trace: std::mem::take(&mut ctx.trace),
                stats,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::Signature;
    use crate::syntax::{parse, SourceText};

    fn t(s: &str) -> Term {
        let mut sig = Signature::new();
        parse(&SourceText::from_str(s), &mut sig).unwrap()
    }

    fn run(s: &str) -> SolveResult {
        solve(&t(s).desugar(), "r", &SolverConfig::default()).unwrap()
    }

    fn clash_of(result: &SolveResult) -> u8 {
        match result {
            SolveResult::Inconsistent {
                clashes_per_branch, ..
            } => clashes_per_branch[0].condition,
            SolveResult::Consistent { .. } => panic!("expected inconsistent"),
        }
    }

    #[test]
    fn decomposes_nested_features() {
        // {x = f:(g:a)} -> {x = f:_0, _0 = g:_1, _1 = a}
        let cs = ConstraintSystem::from_root("x", &t("f: g: a"));
        let basic = to_basic(&cs).unwrap();
        assert_eq!(
            basic.dump(),
            "$x = f: $_0.\n$_0 = g: $_1.\n$_1 = a.\n"
        );
    }

    #[test]
    fn decomposes_conjunctions() {
        let cs = ConstraintSystem::from_root("x", &t("some f: $y & a"));
        let basic = to_basic(&cs).unwrap();
        assert_eq!(basic.dump(), "$x = some f: $y.\n$x = a.\n");
    }

    #[test]
    fn basic_systems_are_untouched() {
        let cs = ConstraintSystem::from_root("x", &t("f: {$x1, $x2}"));
        let basic = to_basic(&cs).unwrap();
        assert_eq!(basic, cs);
    }

    #[test]
    fn fixed_set_gets_plain_companion() {
        let cs = ConstraintSystem::from_root("x", &t("f: {$u, $v}="));
        let basic = to_basic(&cs).unwrap();
        assert_eq!(
            basic.dump(),
            "$x = f: {$u, $v}.\n$x = f: {$u, $v}=.\n"
        );
    }

    #[test]
    fn clash_two_atoms() {
        let cs = ConstraintSystem::from_constraints(vec![
            Constraint::contain("x", Term::Atom("a1".into())),
            Constraint::contain("x", Term::Atom("a2".into())),
        ]);
        let clash = detect_clash(&cs).unwrap();
        assert_eq!((clash.condition, clash.witness.as_str()), (1, "x"));
    }

    #[test]
    fn clash_disjointness_with_shared_successor() {
        // f(x) != g(y), x = f:z, y = g:z
        let cs = ConstraintSystem::from_constraints(vec![
            Constraint::contain(
                "w",
                Term::Disjointness {
                    f: "f".into(),
                    x: "x".into(),
                    g: "g".into(),
                    y: "y".into(),
                },
            ),
            Constraint::contain("x", Term::Feature("f".into(), Box::new(Term::Var("z".into())))),
            Constraint::contain("y", Term::Feature("g".into(), Box::new(Term::Var("z".into())))),
        ]);
        let clash = detect_clash(&cs).unwrap();
        assert_eq!(clash.condition, 5);
    }

    #[test]
    fn single_feature_is_clash_free() {
        let cs = ConstraintSystem::from_constraints(vec![Constraint::contain(
            "x",
            Term::Feature("f".into(), Box::new(Term::Var("y".into()))),
        )]);
        assert_eq!(detect_clash(&cs), None);
    }

    #[test]
    fn sexists_merges_exists_and_forall() {
        let cs = ConstraintSystem::from_constraints(vec![
            Constraint::contain("x", Term::Exists("f".into(), Box::new(Term::Var("y".into())))),
            Constraint::contain("x", Term::Forall("f".into(), Box::new(Term::Var("z".into())))),
        ]);
        match simplify_step(&cs) {
            StepResult::Deterministic { next, rule, .. } => {
                assert_eq!(rule, RuleId::SExists);
                assert_eq!(next.dump(), "$x = f: $y.\n$y = $z.\n");
            }
            other => panic!("expected SExists, got {other:?}"),
        }
    }

    #[test]
    fn ssete_adds_the_cover_disjunction() {
        let cs = ConstraintSystem::from_constraints(vec![
            Constraint::contain("x", Term::Exists("f".into(), Box::new(Term::Var("y".into())))),
            Constraint::contain(
                "x",
                Term::SetDesc("f".into(), vec![Term::Var("x1".into()), Term::Var("x2".into())]),
            ),
        ]);
        match simplify_step(&cs) {
            StepResult::Deterministic { next, rule, .. } => {
                assert_eq!(rule, RuleId::SSetE);
                assert!(next.contains(&Constraint::Disjunctive {
                    var: "y".into(),
                    choices: vec!["x1".into(), "x2".into()],
                }));
            }
            other => panic!("expected SSetE, got {other:?}"),
        }
    }

    #[test]
    fn sdis_branches_in_listed_order() {
        let cs = ConstraintSystem::from_constraints(vec![Constraint::Disjunctive {
            var: "x".into(),
            choices: vec!["x1".into(), "x2".into()],
        }]);
        match simplify_step(&cs) {
            StepResult::Branch { options, rule, .. } => {
                assert_eq!(rule, RuleId::SDis);
                assert_eq!(options.len(), 2);
                assert!(options[0].contains(&Constraint::contain("x", Term::Var("x1".into()))));
                assert!(options[1].contains(&Constraint::contain("x", Term::Var("x2".into()))));
            }
            other => panic!("expected SDis branch, got {other:?}"),
        }
    }

    #[test]
    fn distinct_atoms_clash() {
        assert_eq!(clash_of(&run("a & b")), 1);
    }

    #[test]
    fn forall_contradicts_feature_value() {
        assert_eq!(clash_of(&run("f: a & all f: !a")), 3);
    }

    #[test]
    fn fixed_set_collapsed_by_forall_clashes_on_cardinality() {
        assert_eq!(clash_of(&run("f: {$x, $y}= & all f: a")), 6);
    }

    #[test]
    fn two_element_fixed_set_is_consistent() {
        assert!(run("f: {a, b}=").is_consistent());
    }

    #[test]
    fn distinct_constants_clash() {
        assert_eq!(clash_of(&run("#c1 & #c2")), 2);
    }

    #[test]
    fn atom_with_successor_clashes() {
        assert_eq!(clash_of(&run("a & some f: b")), 4);
    }

    #[test]
    fn bot_is_inconsistent_and_top_is_not() {
        assert_eq!(clash_of(&run("Bot")), 3);
        assert_eq!(clash_of(&run("!Top")), 3);
        assert!(run("Top").is_consistent());
        assert!(run("!Bot").is_consistent());
    }

    #[test]
    fn extraction_maps_entailed_atoms() {
        let cs = ConstraintSystem::from_constraints(vec![Constraint::contain(
            "x",
            Term::Atom("a".into()),
        )]);
        let m = extract_model(&cs).unwrap();
        assert_eq!(m.assign.vars["x"], "a");
        assert!(m.interp.universe.contains("a"));
    }

    #[test]
    fn extraction_builds_relation_tables_from_succ() {
        let cs = to_basic(&ConstraintSystem::from_root("x", &t("f: {a, b}"))).unwrap();
        // solve the remaining steps by hand: the system is already normal
        let m = extract_model(&cs).unwrap();
        let row: BTreeSet<String> = m.interp.relations["f"]
            .iter()
            .filter(|(e, _)| *e == m.assign.vars["x"])
            .map(|(_, e2)| e2.clone())
            .collect();
        assert_eq!(row, BTreeSet::from(["a".to_string(), "b".to_string()]));
    }

    #[test]
    fn extraction_requires_normal_form() {
        let cs = ConstraintSystem::from_root("x", &t("a & b"));
        assert_eq!(extract_model(&cs), Err(ExtractError::NotNormalForm));
    }

    #[test]
    fn consistent_results_carry_satisfying_models() {
        for s in ["f: a", "f: {a, b}=", "some f: ($x & A) & all f: A", "f($x) != g($y)"] {
            let term = t(s).desugar();
            match solve(&term, "r", &SolverConfig::default()).unwrap() {
                SolveResult::Consistent { model, .. } => {
                    let cs = ConstraintSystem::from_root("r", &term);
                    assert_eq!(
                        crate::semantics::satisfies(&model, &cs),
                        Ok(true),
                        "model of `{s}` must satisfy the root constraint"
                    );
                }
                SolveResult::Inconsistent { .. } => panic!("`{s}` should be consistent"),
            }
        }
    }

    #[test]
    fn subcat_style_disjoint_union_clashes_on_shared_member() {
        // shared $z between the two sides of a disjoint union
        let term = t("syn: ($y & some subcat: $z) \
                      & dtrs: ($x & some cdtrs: $z \
                               & hdtr: subcat: cdtrs($x) dunion subcat($y))")
        .desugar();
        let result = solve(&term, "r", &SolverConfig::default()).unwrap();
        assert_eq!(clash_of(&result), 5);
    }

    #[test]
    fn equivalence_family_spot_check() {
        assert!(run("f: a").is_consistent());
        assert!(run("f: {a}").is_consistent());
        assert!(run("f: {a}=").is_consistent());
        assert_eq!(clash_of(&run("all f: !a & f: a")), 3);
        assert_eq!(clash_of(&run("all f: !a & f: {a}")), 3);
        assert_eq!(clash_of(&run("all f: !a & f: {a}=")), 3);
    }

    #[test]
    fn results_are_deterministic_including_traces() {
        let config = SolverConfig {
            trace: true,
            ..SolverConfig::default()
        };
        let term = t("f: {$u, $v} & some f: $w & all f: A").desugar();
        let a = solve(&term, "r", &config).unwrap();
        let b = solve(&term, "r", &config).unwrap();
        assert_eq!(a, b);

        let seeded = SolverConfig {
            trace: true,
            branch_order: BranchOrder::Randomized(7),
            ..SolverConfig::default()
        };
        let c = solve(&term, "r", &seeded).unwrap();
        let d = solve(&term, "r", &seeded).unwrap();
        assert_eq!(c, d);
        assert_eq!(a.is_consistent(), c.is_consistent());
    }

    #[test]
    fn root_occurring_in_term_is_rejected() {
        let err = solve(&t("f: $r"), "r", &SolverConfig::default()).unwrap_err();
        assert_eq!(err, SolveError::RootOccursInTerm { root: "r".into() });
    }

    #[test]
    fn sugar_is_rejected() {
        let err = solve(&t("f: g($x) dunion h($y)"), "r", &SolverConfig::default()).unwrap_err();
        assert_eq!(err, SolveError::NotDesugared);
    }

    #[test]
    fn simplification_introduces_no_fresh_variables() {
        let term = t("f: {a, b} & some f: $w & g: #c & all g: A").desugar();
        match solve(&term, "r", &SolverConfig::default()).unwrap() {
            SolveResult::Consistent { stats, .. } | SolveResult::Inconsistent { stats, .. } => {
                assert_eq!(stats.fresh_after_decomposition, stats.fresh_final);
            }
        }
    }
}
