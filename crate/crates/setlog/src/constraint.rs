//! Constraint systems and syntactic entailment.
//!
//! A constraint system is a conjunction of containment constraints `x = T`
//! and disjunctive constraints `x = x1 | ... | xn`. The solver rewrites
//! systems; everything here is the state being rewritten plus the derived
//! queries the rewrite rules guard on.
//!
//! Entailment `⊢` is the fixed point of the deduction rules: membership,
//! reflexivity, symmetry and transitivity of variable equations, negation
//! symmetry (`x = !y` yields `y = !x`), `x = f:y` yields both `x = some f:y`
//! and `x = all f:y`, and set membership `x = f:{.., y, ..}` yields
//! `x = some f:y` (fixed-cardinality sets included, since their members are
//! successors too). Transitivity chains a variable equation into any
//! right-hand side, so facts propagate across the equality closure; queries
//! are answered from a union-find over equations plus per-class fact tables.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::term::Term;

/// One constraint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    /// `x = T`
    Contain { var: String, term: Term },
    /// `x = x1 | ... | xn` — x equals one of the choices
    Disjunctive { var: String, choices: Vec<String> },
}

impl Constraint {
    pub fn contain(var: impl Into<String>, term: Term) -> Constraint {
        Constraint::Contain {
            var: var.into(),
            term,
        }
    }

    pub fn rename_var(&self, from: &str, to: &str) -> Constraint {
        let r = |n: &String| {
            if n == from {
                to.to_string()
            } else {
                n.clone()
            }
        };
        match self {
            Constraint::Contain { var, term } => Constraint::Contain {
                var: r(var),
                term: term.rename_var(from, to),
            },
            Constraint::Disjunctive { var, choices } => Constraint::Disjunctive {
                var: r(var),
                choices: choices.iter().map(r).collect(),
            },
        }
    }
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Constraint::Contain { var, term } => write!(f, "${var} = {term}"),
            Constraint::Disjunctive { var, choices } => {
                write!(f, "${var} = ")?;
                for (i, c) in choices.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "${c}")?;
                }
                Ok(())
            }
        }
    }
}

/// Facts known about one equivalence class of variables.
#[derive(Debug, Default, Clone)]
pub(crate) struct ClassFacts {
    pub atoms: BTreeSet<String>,
    pub consts: BTreeSet<String>,
    pub concepts: BTreeSet<String>,
    pub neg_atoms: BTreeSet<String>,
    pub neg_consts: BTreeSet<String>,
    pub neg_concepts: BTreeSet<String>,
    /// rel -> successors in encounter order, deduplicated, raw names
    pub succ: BTreeMap<String, Vec<String>>,
    /// rel -> targets of `x = f: y`
    pub feat: BTreeMap<String, Vec<String>>,
    /// rel -> variable bodies of `x = all f: y`
    pub forall_var: BTreeMap<String, Vec<String>>,
    /// rel -> non-variable bodies of `x = all f: P`
    pub forall_body: BTreeMap<String, Vec<Term>>,
    /// `x = f: >= g(y)` facts as (f, g, rep of y)
    pub supersets: Vec<(String, String, String)>,
    /// `x = f:{..}=` facts as (rel, member list with duplicates)
    pub fixed_sets: Vec<(String, Vec<String>)>,
    /// `x = f:{..}` facts (variables only) as (rel, member list)
    pub plain_sets: Vec<(String, Vec<String>)>,
}

/// Derived indexes over a system, rebuilt after each rewrite.
#[derive(Debug, Default, Clone)]
pub(crate) struct EntailIndex {
    /// variable -> representative (lexicographically least class member)
    rep: BTreeMap<String, String>,
    pub vars: BTreeSet<String>,
    pub atoms: BTreeSet<String>,
    pub consts: BTreeSet<String>,
    pub concepts: BTreeSet<String>,
    pub relations: BTreeSet<String>,
    facts: BTreeMap<String, ClassFacts>,
    /// entailed `x = !y` facts, stored as ordered rep pairs
    neg_pairs: BTreeSet<(String, String)>,
    /// disjointness facts `f(x) != g(y)` as (f, rep x, g, rep y), encounter order
    pub disjoint: Vec<(String, String, String, String)>,
}

static EMPTY_FACTS: OnceLock<ClassFacts> = OnceLock::new();

impl EntailIndex {
    pub fn rep_of<'s>(&'s self, x: &'s str) -> &'s str {
        self.rep.get(x).map(String::as_str).unwrap_or(x)
    }

    pub fn same_class(&self, x: &str, y: &str) -> bool {
        self.rep_of(x) == self.rep_of(y)
    }

    pub fn facts_of(&self, x: &str) -> &ClassFacts {
        self.facts
            .get(self.rep_of(x))
            .unwrap_or_else(|| EMPTY_FACTS.get_or_init(ClassFacts::default))
    }

    fn norm_pair(&self, x: &str, y: &str) -> (String, String) {
        let a = self.rep_of(x).to_string();
        let b = self.rep_of(y).to_string();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn neg_pair(&self, x: &str, y: &str) -> bool {
        self.neg_pairs.contains(&self.norm_pair(x, y))
    }
}

/// A conjunction of constraints (deduplicated, insertion-ordered) plus the
/// fresh-variable counter.
#[derive(Debug)]
pub struct ConstraintSystem {
    items: Vec<Constraint>,
    fresh: u64,
    cache: OnceLock<EntailIndex>,
}

impl Clone for ConstraintSystem {
    fn clone(&self) -> Self {
        ConstraintSystem {
            items: self.items.clone(),
            fresh: self.fresh,
            cache: OnceLock::new(),
        }
    }
}

impl PartialEq for ConstraintSystem {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items && self.fresh == other.fresh
    }
}
impl Eq for ConstraintSystem {}

impl ConstraintSystem {
    pub fn new() -> Self {
        ConstraintSystem {
            items: Vec::new(),
            fresh: 0,
            cache: OnceLock::new(),
        }
    }

    /// The initial system `{root = term}`.
    pub fn from_root(root: &str, term: &Term) -> Self {
        let mut cs = ConstraintSystem::new();
        cs.items.push(Constraint::contain(root, term.clone()));
        cs.fresh = cs.scan_fresh_floor();
        cs
    }

    pub fn from_constraints(items: Vec<Constraint>) -> Self {
        let mut cs = ConstraintSystem::new();
        for c in items {
            cs.push_unique(c);
        }
        cs.fresh = cs.scan_fresh_floor();
        cs
    }

    fn scan_fresh_floor(&self) -> u64 {
        let mut floor = 0;
        for v in self.index().vars.iter() {
            if let Some(rest) = v.strip_prefix('_') {
                if let Ok(k) = rest.parse::<u64>() {
                    floor = floor.max(k + 1);
                }
            }
        }
        floor
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.items.contains(c)
    }

    fn invalidate(&mut self) {
        self.cache = OnceLock::new();
    }

    /// Append unless an identical constraint is already present.
    pub fn push_unique(&mut self, c: Constraint) -> bool {
        if self.items.contains(&c) {
            return false;
        }
        self.items.push(c);
        self.invalidate();
        true
    }

    pub(crate) fn remove_at(&mut self, idx: usize) -> Constraint {
        self.invalidate();
        self.items.remove(idx)
    }

    pub(crate) fn replace_at(&mut self, idx: usize, c: Constraint) {
        self.items[idx] = c;
        self.invalidate();
    }

    pub(crate) fn insert_at(&mut self, idx: usize, c: Constraint) {
        self.items.insert(idx, c);
        self.invalidate();
    }

    /// Keep-first deduplication.
    pub fn dedup(&mut self) {
        let mut seen = Vec::new();
        self.items.retain(|c| {
            if seen.contains(c) {
                false
            } else {
                seen.push(c.clone());
                true
            }
        });
        self.invalidate();
    }

    /// A variable not occurring anywhere in the system. Drawn from the
    /// counter, which only moves forward.
    pub fn fresh_var(&mut self) -> String {
        loop {
            let name = format!("_{}", self.fresh);
            self.fresh += 1;
            if !self.index().vars.contains(&name) {
                return name;
            }
        }
    }

    pub fn fresh_counter(&self) -> u64 {
        self.fresh
    }

    /// The counter never moves backwards, even when high-numbered variables
    /// are substituted away.
    pub(crate) fn raise_fresh_floor(&mut self, floor: u64) {
        self.fresh = self.fresh.max(floor);
    }

    /// Replace every occurrence of `x` by `y`. Preserves the constraint
    /// count; the caller deduplicates afterwards if collapses are wanted.
    pub fn substitute(&self, x: &str, y: &str) -> ConstraintSystem {
        ConstraintSystem {
            items: self.items.iter().map(|c| c.rename_var(x, y)).collect(),
            fresh: self.fresh,
            cache: OnceLock::new(),
        }
    }

    pub(crate) fn index(&self) -> &EntailIndex {
        self.cache.get_or_init(|| build_index(&self.items))
    }

    /// Syntactic entailment of a single constraint.
    pub fn entails(&self, goal: &Constraint) -> bool {
        let ix = self.index();
        match goal {
            Constraint::Contain { var: x, term } => match term {
                Term::Var(y) => ix.same_class(x, y),
                Term::NegVar(y) => ix.neg_pair(x, y),
                Term::Atom(a) => ix.facts_of(x).atoms.contains(a),
                Term::Const(c) => ix.facts_of(x).consts.contains(c),
                Term::Concept(c) => ix.facts_of(x).concepts.contains(c),
                Term::NegAtom(a) => ix.facts_of(x).neg_atoms.contains(a),
                Term::NegConst(c) => ix.facts_of(x).neg_consts.contains(c),
                Term::NegConcept(c) => ix.facts_of(x).neg_concepts.contains(c),
                Term::Feature(f, t) => match t.as_ref() {
                    Term::Var(y) => ix
                        .facts_of(x)
                        .feat
                        .get(f)
                        .is_some_and(|ys| ys.iter().any(|v| v == y)),
                    _ => self.literal_on_class(x, term),
                },
                Term::Exists(f, t) => match t.as_ref() {
                    Term::Var(y) => ix
                        .facts_of(x)
                        .succ
                        .get(f)
                        .is_some_and(|ys| ys.iter().any(|v| v == y)),
                    _ => self.literal_on_class(x, term),
                },
                Term::Forall(f, t) => match t.as_ref() {
                    // x = f:y also entails x = all f:y
                    Term::Var(y) => {
                        let facts = ix.facts_of(x);
                        facts
                            .forall_var
                            .get(f)
                            .is_some_and(|ys| ys.iter().any(|v| v == y))
                            || facts.feat.get(f).is_some_and(|ys| ys.iter().any(|v| v == y))
                    }
                    body => ix
                        .facts_of(x)
                        .forall_body
                        .get(f)
                        .is_some_and(|bs| bs.iter().any(|b| b == body)),
                },
                Term::Superset { f, g, x: opx } => {
                    let want = ix.rep_of(opx);
                    ix.facts_of(x)
                        .supersets
                        .iter()
                        .any(|(sf, sg, sy)| sf == f && sg == g && sy == want)
                }
                _ => self.literal_on_class(x, term),
            },
            Constraint::Disjunctive { var, choices } => {
                let ix = self.index();
                self.items.iter().any(|c| match c {
                    Constraint::Disjunctive {
                        var: v,
                        choices: cs,
                    } => ix.same_class(v, var) && cs == choices,
                    _ => false,
                })
            }
        }
    }

    fn literal_on_class(&self, x: &str, term: &Term) -> bool {
        let ix = self.index();
        self.items.iter().any(|c| match c {
            Constraint::Contain { var, term: t } => ix.same_class(var, x) && t == term,
            _ => false,
        })
    }

    /// `succ(x, f)`: the variables entailed to be `f`-successors of `x`,
    /// in encounter order.
    pub fn succ(&self, x: &str, f: &str) -> Vec<String> {
        self.index()
            .facts_of(x)
            .succ
            .get(f)
            .cloned()
            .unwrap_or_default()
    }

    /// `succ(x, f)` mapped onto class representatives.
    pub(crate) fn succ_classes(&self, x: &str, f: &str) -> BTreeSet<String> {
        let ix = self.index();
        ix.facts_of(x)
            .succ
            .get(f)
            .map(|ys| ys.iter().map(|y| ix.rep_of(y).to_string()).collect())
            .unwrap_or_default()
    }

    /// Partition of the occurring variables under the entailment closure of
    /// the variable equations. Each class is sorted; its first element is
    /// the representative.
    pub fn equiv_classes(&self) -> Vec<Vec<String>> {
        let ix = self.index();
        let mut by_rep: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for v in &ix.vars {
            by_rep.entry(ix.rep_of(v)).or_default().push(v.clone());
        }
        by_rep.into_values().collect()
    }

    /// The representative (lexicographically least member) of `x`'s class.
    pub fn representative<'s>(&'s self, x: &'s str) -> &'s str {
        self.index().rep_of(x)
    }

    /// All variables occurring in the system.
    pub fn variables(&self) -> &BTreeSet<String> {
        &self.index().vars
    }

    pub fn occurring_atoms(&self) -> &BTreeSet<String> {
        &self.index().atoms
    }

    pub fn occurring_consts(&self) -> &BTreeSet<String> {
        &self.index().consts
    }

    pub fn occurring_concepts(&self) -> &BTreeSet<String> {
        &self.index().concepts
    }

    pub fn occurring_relations(&self) -> &BTreeSet<String> {
        &self.index().relations
    }

    /// Debug dump, one surface-syntax clause per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.items {
            out.push_str(&format!("{c}.\n"));
        }
        out
    }
}

impl Default for ConstraintSystem {
    fn default() -> Self {
        Self::new()
    }
}

fn build_index(items: &[Constraint]) -> EntailIndex {
    let mut ix = EntailIndex::default();

    // occurring names
    for c in items {
        match c {
            Constraint::Contain { var, term } => {
                ix.vars.insert(var.clone());
                ix.vars.extend(term.free_vars());
                ix.atoms.extend(term.atoms());
                ix.consts.extend(term.constants());
                ix.concepts.extend(term.concepts());
                ix.relations.extend(term.relations());
            }
            Constraint::Disjunctive { var, choices } => {
                ix.vars.insert(var.clone());
                ix.vars.extend(choices.iter().cloned());
            }
        }
    }

    // union-find over variable equations
    let mut parent: BTreeMap<String, String> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<String, String>, x: &str) -> String {
        let p = match parent.get(x) {
            Some(p) if p != x => p.clone(),
            _ => return x.to_string(),
        };
        let root = find(parent, &p);
        parent.insert(x.to_string(), root.clone());
        root
    }
    for c in items {
        if let Constraint::Contain { var, term } = c {
            if let Term::Var(y) = term {
                let rx = find(&mut parent, var);
                let ry = find(&mut parent, y);
                if rx != ry {
                    // orient towards the lexicographically smaller root
                    if rx < ry {
                        parent.insert(ry, rx);
                    } else {
                        parent.insert(rx, ry);
                    }
                }
            }
        }
    }
    for v in ix.vars.clone() {
        let r = find(&mut parent, &v);
        ix.rep.insert(v, r);
    }

    // facts per class
    fn push_succ(facts: &mut ClassFacts, f: &str, y: &str) {
        let v = facts.succ.entry(f.to_string()).or_default();
        if !v.iter().any(|e| e == y) {
            v.push(y.to_string());
        }
    }
    for c in items {
        let Constraint::Contain { var, term } = c else {
            continue;
        };
        let rep = ix.rep_of(var).to_string();
        match term {
            Term::NegVar(y) => {
                let b = ix.rep_of(y).to_string();
                let pair = if rep <= b { (rep, b) } else { (b, rep) };
                ix.neg_pairs.insert(pair);
                continue;
            }
            Term::Superset { f, g, x } => {
                let target = ix.rep_of(x).to_string();
                ix.facts
                    .entry(rep)
                    .or_default()
                    .supersets
                    .push((f.clone(), g.clone(), target));
                continue;
            }
            Term::Disjointness { f, x, g, y } => {
                let rx = ix.rep_of(x).to_string();
                let ry = ix.rep_of(y).to_string();
                ix.disjoint.push((f.clone(), rx, g.clone(), ry));
                continue;
            }
            _ => {}
        }
        let facts = ix.facts.entry(rep).or_default();
        match term {
            Term::Atom(a) => {
                facts.atoms.insert(a.clone());
            }
            Term::Const(k) => {
                facts.consts.insert(k.clone());
            }
            Term::Concept(k) => {
                facts.concepts.insert(k.clone());
            }
            Term::NegAtom(a) => {
                facts.neg_atoms.insert(a.clone());
            }
            Term::NegConst(k) => {
                facts.neg_consts.insert(k.clone());
            }
            Term::NegConcept(k) => {
                facts.neg_concepts.insert(k.clone());
            }
            Term::Var(_) => {}
            Term::Feature(f, t) => {
                if let Term::Var(y) = t.as_ref() {
                    let v = facts.feat.entry(f.clone()).or_default();
                    if !v.iter().any(|e| e == y) {
                        v.push(y.clone());
                    }
                    push_succ(facts, f, y);
                }
            }
            Term::Exists(f, t) => {
                if let Term::Var(y) = t.as_ref() {
                    push_succ(facts, f, y);
                }
            }
            Term::Forall(f, t) => match t.as_ref() {
                Term::Var(y) => {
                    let v = facts.forall_var.entry(f.clone()).or_default();
                    if !v.iter().any(|e| e == y) {
                        v.push(y.clone());
                    }
                }
                body => {
                    let v = facts.forall_body.entry(f.clone()).or_default();
                    if !v.iter().any(|b| b == body) {
                        v.push(body.clone());
                    }
                }
            },
            Term::SetDesc(f, ts) => {
                let mut members = Vec::new();
                for t in ts {
                    if let Term::Var(y) = t {
                        push_succ(facts, f, y);
                        members.push(y.clone());
                    }
                }
                if members.len() == ts.len() {
                    facts.plain_sets.push((f.clone(), members));
                }
            }
            Term::FixedSet(f, ts) => {
                let mut members = Vec::new();
                for t in ts {
                    if let Term::Var(y) = t {
                        push_succ(facts, f, y);
                        members.push(y.clone());
                    }
                }
                if members.len() == ts.len() {
                    facts.fixed_sets.push((f.clone(), members));
                }
            }
            Term::NegVar(..)
            | Term::Superset { .. }
            | Term::Disjointness { .. }
            | Term::Union { .. }
            | Term::Intersection { .. }
            | Term::DisjointUnion { .. }
            | Term::Conj(..) => {}
        }
    }

    ix
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Term {
        Term::Var(n.into())
    }

    fn contain(x: &str, t: Term) -> Constraint {
        Constraint::contain(x, t)
    }

    #[test]
    fn feature_entails_exists_and_forall() {
        // cs = {x = f: y}
        let cs = ConstraintSystem::from_constraints(vec![contain(
            "x",
            Term::Feature("f".into(), Box::new(var("y"))),
        )]);
        assert!(cs.entails(&contain("x", Term::Exists("f".into(), Box::new(var("y"))))));
        assert!(cs.entails(&contain("x", Term::Forall("f".into(), Box::new(var("y"))))));
        assert_eq!(cs.succ("x", "f"), vec!["y".to_string()]);
    }

    #[test]
    fn equality_is_transitive_and_symmetric() {
        let cs = ConstraintSystem::from_constraints(vec![
            contain("x", var("y")),
            contain("y", var("z")),
        ]);
        assert!(cs.entails(&contain("x", var("z"))));
        assert!(cs.entails(&contain("z", var("x"))));
        assert!(cs.entails(&contain("x", var("x"))));
        assert_eq!(cs.equiv_classes(), vec![vec![
            "x".to_string(),
            "y".to_string(),
            "z".to_string()
        ]]);
        assert_eq!(cs.representative("z"), "x");
    }

    #[test]
    fn nothing_is_derivable_from_the_empty_system() {
        let cs = ConstraintSystem::from_constraints(vec![]);
        assert!(!cs.entails(&contain("x", var("y"))));
        assert!(cs.entails(&contain("x", var("x")))); // reflexivity
        assert!(cs.succ("x", "f").is_empty());
    }

    #[test]
    fn set_members_are_successors() {
        let cs = ConstraintSystem::from_constraints(vec![contain(
            "x",
            Term::SetDesc("f".into(), vec![var("x1"), var("x2")]),
        )]);
        assert_eq!(cs.succ("x", "f"), vec!["x1".to_string(), "x2".to_string()]);
        assert!(cs.entails(&contain("x", Term::Exists("f".into(), Box::new(var("x1"))))));
    }

    #[test]
    fn facts_propagate_across_the_equality_closure() {
        let cs = ConstraintSystem::from_constraints(vec![
            contain("x", var("y")),
            contain("y", Term::Feature("f".into(), Box::new(var("z")))),
        ]);
        assert!(cs.entails(&contain("x", Term::Exists("f".into(), Box::new(var("z"))))));
        assert_eq!(cs.succ("x", "f"), vec!["z".to_string()]);
    }

    #[test]
    fn negation_symmetry() {
        let cs = ConstraintSystem::from_constraints(vec![contain("x", Term::NegVar("y".into()))]);
        assert!(cs.entails(&contain("y", Term::NegVar("x".into()))));
        assert!(!cs.entails(&contain("x", Term::NegVar("x".into()))));
    }

    #[test]
    fn substitution_is_uniform_and_count_preserving() {
        let cs = ConstraintSystem::from_constraints(vec![
            contain("x", Term::Feature("f".into(), Box::new(var("x")))),
            contain("z", Term::Feature("g".into(), Box::new(var("x")))),
        ]);
        let sub = cs.substitute("x", "y");
        assert_eq!(sub.len(), cs.len());
        assert_eq!(
            sub.constraints()[0],
            contain("y", Term::Feature("f".into(), Box::new(var("y"))))
        );
        assert_eq!(
            sub.constraints()[1],
            contain("z", Term::Feature("g".into(), Box::new(var("y"))))
        );

        // {x = y} with [x/y] becomes {y = y}
        let cs = ConstraintSystem::from_constraints(vec![contain("x", var("y"))]);
        let sub = cs.substitute("x", "y");
        assert_eq!(sub.constraints(), &[contain("y", var("y"))]);

        // disjunctive constraints substitute too
        let cs = ConstraintSystem::from_constraints(vec![Constraint::Disjunctive {
            var: "x".into(),
            choices: vec!["x1".into(), "x2".into()],
        }]);
        let sub = cs.substitute("x1", "y");
        assert_eq!(
            sub.constraints(),
            &[Constraint::Disjunctive {
                var: "x".into(),
                choices: vec!["y".into(), "x2".into()],
            }]
        );
    }

    #[test]
    fn entailment_is_monotone_under_addition() {
        let mut cs = ConstraintSystem::from_constraints(vec![contain(
            "x",
            Term::Feature("f".into(), Box::new(var("y"))),
        )]);
        let goal = contain("x", Term::Exists("f".into(), Box::new(var("y"))));
        assert!(cs.entails(&goal));
        cs.push_unique(contain("u", var("v")));
        cs.push_unique(contain("x", Term::Atom("a".into())));
        assert!(cs.entails(&goal));
    }

    #[test]
    fn fresh_vars_avoid_occurring_names() {
        let mut cs = ConstraintSystem::from_constraints(vec![contain("_0", var("_2"))]);
        let v = cs.fresh_var();
        assert_eq!(v, "_3");
    }

    #[test]
    fn dump_is_one_clause_per_line() {
        let cs = ConstraintSystem::from_constraints(vec![
            contain("x", Term::Feature("f".into(), Box::new(var("y")))),
            Constraint::Disjunctive {
                var: "y".into(),
                choices: vec!["u".into(), "v".into()],
            },
        ]);
        assert_eq!(cs.dump(), "$x = f: $y.\n$y = $u | $v.\n");
    }

    #[test]
    fn fixed_set_members_are_successors() {
        let cs = ConstraintSystem::from_constraints(vec![contain(
            "x",
            Term::FixedSet("f".into(), vec![var("u"), var("v")]),
        )]);
        assert_eq!(cs.succ("x", "f"), vec!["u".to_string(), "v".to_string()]);
    }
}
