//! Direct denotational semantics over explicit finite interpretations, and
//! a bounded model enumerator.
//!
//! This is the ground-truth oracle: [`denote`] implements every denotation
//! clause literally (a feature value must be exactly a singleton, a set
//! description must cover the successor set exactly, a fixed-cardinality set
//! additionally pins the successor count), and [`enumerate_models`] searches
//! all interpretations over a small universe for a satisfying one.
//!
//! The enumerator fixes one universe element per occurring atom and
//! constant plus up to `bound` fresh elements, then enumerates assignments
//! outermost. Relation rows and concept memberships are materialized lazily,
//! branching only on table entries the evaluation actually reads; rows never
//! read stay empty, which cannot change the verdict, because an element with
//! no incident edges and no assignment pointing at it is invisible to every
//! denotation clause. Atom rows are pinned empty throughout (atomicity).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::constraint::{Constraint, ConstraintSystem};
use crate::sig::{BOT, TOP};
use crate::term::Term;

/// A universe element. Extracted and enumerated models use variable, atom
/// and constant names as elements; fresh enumeration elements are `+0`,
/// `+1`, ...
pub type Elem = String;

/// An interpretation: universe, one binary relation table per relation
/// symbol, and an injective denotation for atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteInterpretation {
    pub universe: BTreeSet<Elem>,
    pub relations: BTreeMap<String, BTreeSet<(Elem, Elem)>>,
    pub atom_map: BTreeMap<String, Elem>,
}

/// An assignment: variables and constants to elements (constants
/// injectively), concepts to subsets, with `Bot` empty and `Top` the whole
/// universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub vars: BTreeMap<String, Elem>,
    pub consts: BTreeMap<String, Elem>,
    pub concepts: BTreeMap<String, BTreeSet<Elem>>,
}

/// An interpretation plus an assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub interp: FiniteInterpretation,
    pub assign: Assignment,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("uninterpreted name `{0}`")]
    Uninterpreted(String),
    #[error("model is not well-formed: {0}")]
    IllFormed(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("model enumeration exceeded its budget of {budget} steps")]
pub struct OracleBudget {
    pub budget: u64,
}

impl Model {
    /// Check the interpretation and assignment invariants: atom injectivity,
    /// atomicity, constant injectivity, `Bot`/`Top` denotations, and ranges.
    pub fn check_wellformed(&self) -> Result<(), SemanticsError> {
        let ill = |m: String| Err(SemanticsError::IllFormed(m));
        let u = &self.interp.universe;
        if u.is_empty() {
            return ill("empty universe".into());
        }
        let mut seen = BTreeSet::new();
        for (a, e) in &self.interp.atom_map {
            if !u.contains(e) {
                return ill(format!("atom `{a}` denotes outside the universe"));
            }
            if !seen.insert(e.clone()) {
                return ill(format!("atom `{a}` shares its element with another atom"));
            }
        }
        let atom_elems: BTreeSet<&Elem> = self.interp.atom_map.values().collect();
        for (f, pairs) in &self.interp.relations {
            for (e, e2) in pairs {
                if !u.contains(e) || !u.contains(e2) {
                    return ill(format!("relation `{f}` mentions a non-universe element"));
                }
                if atom_elems.contains(e) {
                    return ill(format!("atomicity violated: `{f}` leaves an atom element"));
                }
            }
        }
        let mut cseen = BTreeSet::new();
        for (c, e) in &self.assign.consts {
            if !u.contains(e) {
                return ill(format!("constant `{c}` assigned outside the universe"));
            }
            if !cseen.insert(e.clone()) {
                return ill(format!("constants are not injectively assigned at `{c}`"));
            }
        }
        for (x, e) in &self.assign.vars {
            if !u.contains(e) {
                return ill(format!("variable `{x}` assigned outside the universe"));
            }
        }
        for (c, set) in &self.assign.concepts {
            if !set.iter().all(|e| u.contains(e)) {
                return ill(format!("concept `{c}` denotes outside the universe"));
            }
        }
        if self.assign.concepts.get(BOT).is_some_and(|s| !s.is_empty()) {
            return ill("Bot must denote the empty set".into());
        }
        if let Some(top) = self.assign.concepts.get(TOP) {
            if top != u {
                return ill("Top must denote the whole universe".into());
            }
        }
        Ok(())
    }

    fn row(&self, rel: &str, e: &Elem) -> Result<BTreeSet<Elem>, SemanticsError> {
        let table = self
            .interp
            .relations
            .get(rel)
            .ok_or_else(|| SemanticsError::Uninterpreted(rel.to_string()))?;
        Ok(table
            .iter()
            .filter(|(a, _)| a == e)
            .map(|(_, b)| b.clone())
            .collect())
    }

    fn var(&self, x: &str) -> Result<&Elem, SemanticsError> {
        self.assign
            .vars
            .get(x)
            .ok_or_else(|| SemanticsError::Uninterpreted(x.to_string()))
    }

    /// The spec'd JSON form, deterministic byte-for-byte.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "universe": self.interp.universe,
            "atoms": self.interp.atom_map,
            "relations": self.interp.relations.iter().map(|(f, pairs)| {
                (f.clone(), pairs.iter().map(|(a, b)| vec![a.clone(), b.clone()]).collect::<Vec<_>>())
            }).collect::<BTreeMap<_, _>>(),
            "assignment": {
                "vars": self.assign.vars,
                "consts": self.assign.consts,
                "concepts": self.assign.concepts,
            },
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("model serializes")
    }
}

/// Is `e` in the denotation of `term`?
fn member(m: &Model, e: &Elem, term: &Term) -> Result<bool, SemanticsError> {
    match term {
        Term::Var(x) => Ok(e == m.var(x)?),
        Term::Atom(a) => {
            let ai = m
                .interp
                .atom_map
                .get(a)
                .ok_or_else(|| SemanticsError::Uninterpreted(a.clone()))?;
            Ok(e == ai)
        }
        Term::Const(c) => {
            let ci = m
                .assign
                .consts
                .get(c)
                .ok_or_else(|| SemanticsError::Uninterpreted(c.clone()))?;
            Ok(e == ci)
        }
        Term::Concept(c) => {
            if c == TOP {
                return Ok(true);
            }
            if c == BOT {
                return Ok(false);
            }
            let set = m
                .assign
                .concepts
                .get(c)
                .ok_or_else(|| SemanticsError::Uninterpreted(c.clone()))?;
            Ok(set.contains(e))
        }
        Term::NegVar(x) => Ok(!member(m, e, &Term::Var(x.clone()))?),
        Term::NegAtom(a) => Ok(!member(m, e, &Term::Atom(a.clone()))?),
        Term::NegConst(c) => Ok(!member(m, e, &Term::Const(c.clone()))?),
        Term::NegConcept(c) => Ok(!member(m, e, &Term::Concept(c.clone()))?),
        Term::Feature(f, t) => {
            let row = m.row(f, e)?;
            if row.len() != 1 {
                return Ok(false);
            }
            member(m, row.iter().next().unwrap(), t)
        }
        Term::Exists(f, t) => {
            for e2 in m.row(f, e)? {
                if member(m, &e2, t)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Term::Forall(f, t) => {
            for e2 in m.row(f, e)? {
                if !member(m, &e2, t)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Term::SetDesc(f, ts) => covers(m, &m.row(f, e)?, ts),
        Term::FixedSet(f, ts) => {
            let row = m.row(f, e)?;
            Ok(row.len() == ts.len() && covers(m, &row, ts)?)
        }
        Term::Union { f, g, x, h, y } => {
            let row = m.row(f, e)?;
            let gx = m.row(g, m.var(x)?)?;
            let hy = m.row(h, m.var(y)?)?;
            Ok(row == gx.union(&hy).cloned().collect())
        }
        Term::Intersection { f, g, x, h, y } => {
            let row = m.row(f, e)?;
            let gx = m.row(g, m.var(x)?)?;
            let hy = m.row(h, m.var(y)?)?;
            Ok(row == gx.intersection(&hy).cloned().collect())
        }
        Term::Superset { f, g, x } => {
            let row = m.row(f, e)?;
            let gx = m.row(g, m.var(x)?)?;
            Ok(gx.is_subset(&row))
        }
        Term::Disjointness { f, x, g, y } => {
            let fx = m.row(f, m.var(x)?)?;
            let gy = m.row(g, m.var(y)?)?;
            Ok(fx.intersection(&gy).next().is_none())
        }
        Term::Conj(s, t) => Ok(member(m, e, s)? && member(m, e, t)?),
        Term::DisjointUnion { .. } => member(m, e, &term.desugar()),
    }
}

/// Does the row equal `{e1, .., en}` for some choice of `ei` in the
/// respective denotations? Positions may share elements; every row element
/// must be chosen at least once.
fn covers(m: &Model, row: &BTreeSet<Elem>, ts: &[Term]) -> Result<bool, SemanticsError> {
    if row.is_empty() {
        // a set description denotes at least one value
        return Ok(false);
    }
    let elems: Vec<&Elem> = row.iter().collect();
    let mut cands: Vec<Vec<usize>> = Vec::with_capacity(ts.len());
    for t in ts {
        let mut c = Vec::new();
        for (i, e) in elems.iter().enumerate() {
            if member(m, e, t)? {
                c.push(i);
            }
        }
        if c.is_empty() {
            return Ok(false);
        }
        cands.push(c);
    }
    let mut covered = vec![false; elems.len()];
    Ok(cover_search(&cands, 0, &mut covered, ts.len()))
}

fn cover_search(cands: &[Vec<usize>], pos: usize, covered: &mut [bool], left: usize) -> bool {
    let uncovered = covered.iter().filter(|b| !**b).count();
    if uncovered > left {
        return false;
    }
    if pos == cands.len() {
        return uncovered == 0;
    }
    for &i in &cands[pos] {
        let was = covered[i];
        covered[i] = true;
        if cover_search(cands, pos + 1, covered, left - 1) {
            return true;
        }
        covered[i] = was;
    }
    false
}

/// The denotation of `term` in `m`: the set of universe elements the term
/// describes.
pub fn denote(term: &Term, m: &Model) -> Result<BTreeSet<Elem>, SemanticsError> {
    let mut out = BTreeSet::new();
    for e in &m.interp.universe {
        if member(m, e, term)? {
            out.insert(e.clone());
        }
    }
    Ok(out)
}

/// Does the model satisfy every constraint in the system?
pub fn satisfies(m: &Model, cs: &ConstraintSystem) -> Result<bool, SemanticsError> {
    for c in cs.constraints() {
        match c {
            Constraint::Contain { var, term } => {
                let e = m.var(var)?.clone();
                if !member(m, &e, term)? {
                    return Ok(false);
                }
            }
            Constraint::Disjunctive { var, choices } => {
                let e = m.var(var)?;
                let mut ok = false;
                for y in choices {
                    if m.var(y)? == e {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// bounded enumeration

#[derive(Debug, Clone)]
struct Partial {
    universe: Vec<Elem>,
    atoms: BTreeSet<Elem>,
    vars: BTreeMap<String, Elem>,
    consts: BTreeMap<String, Elem>,
    atom_map: BTreeMap<String, Elem>,
    /// materialized relation rows
    rows: BTreeMap<(Elem, String), BTreeSet<Elem>>,
    /// materialized concept membership bits
    bits: BTreeMap<(String, Elem), bool>,
}

enum Stop {
    NeedRow(Elem, String),
    NeedBit(String, Elem),
}

/// How many relation-table reads a term can trigger; used to order
/// conjunct evaluation.
fn rel_weight(t: &Term) -> usize {
    match t {
        Term::Feature(_, s) | Term::Exists(_, s) | Term::Forall(_, s) => 1 + rel_weight(s),
        Term::SetDesc(_, ts) | Term::FixedSet(_, ts) => {
            1 + ts.iter().map(rel_weight).sum::<usize>()
        }
        Term::Union { .. } | Term::Intersection { .. } | Term::DisjointUnion { .. } => 3,
        Term::Superset { .. } | Term::Disjointness { .. } => 2,
        Term::Conj(s, t) => rel_weight(s) + rel_weight(t),
        _ => 0,
    }
}

impl Partial {
    fn row(&self, rel: &str, e: &Elem) -> Result<BTreeSet<Elem>, Stop> {
        if self.atoms.contains(e) {
            return Ok(BTreeSet::new()); // atomicity
        }
        match self.rows.get(&(e.clone(), rel.to_string())) {
            Some(r) => Ok(r.clone()),
            None => Err(Stop::NeedRow(e.clone(), rel.to_string())),
        }
    }

    fn bit(&self, concept: &str, e: &Elem) -> Result<bool, Stop> {
        match self.bits.get(&(concept.to_string(), e.clone())) {
            Some(b) => Ok(*b),
            None => Err(Stop::NeedBit(concept.to_string(), e.clone())),
        }
    }

    fn member(&self, e: &Elem, term: &Term) -> Result<bool, Stop> {
        match term {
            Term::Var(x) => Ok(e == &self.vars[x]),
            Term::Atom(a) => Ok(e == &self.atom_map[a]),
            Term::Const(c) => Ok(e == &self.consts[c]),
            Term::Concept(c) => {
                if c == TOP {
                    Ok(true)
                } else if c == BOT {
                    Ok(false)
                } else {
                    self.bit(c, e)
                }
            }
            Term::NegVar(x) => Ok(e != &self.vars[x]),
            Term::NegAtom(a) => Ok(e != &self.atom_map[a]),
            Term::NegConst(c) => Ok(e != &self.consts[c]),
            Term::NegConcept(c) => Ok(!self.member(e, &Term::Concept(c.clone()))?),
            Term::Feature(f, t) => {
                let row = self.row(f, e)?;
                if row.len() != 1 {
                    return Ok(false);
                }
                self.member(row.iter().next().unwrap(), t)
            }
            Term::Exists(f, t) => {
                for e2 in self.row(f, e)? {
                    if self.member(&e2, t)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Term::Forall(f, t) => {
                for e2 in self.row(f, e)? {
                    if !self.member(&e2, t)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Term::SetDesc(f, ts) => self.covers(&self.row(f, e)?, ts),
            Term::FixedSet(f, ts) => {
                let row = self.row(f, e)?;
                Ok(row.len() == ts.len() && self.covers(&row, ts)?)
            }
            Term::Union { f, g, x, h, y } => {
                let row = self.row(f, e)?;
                let gx = self.row(g, &self.vars[x])?;
                let hy = self.row(h, &self.vars[y])?;
                Ok(row == gx.union(&hy).cloned().collect())
            }
            Term::Intersection { f, g, x, h, y } => {
                let row = self.row(f, e)?;
                let gx = self.row(g, &self.vars[x])?;
                let hy = self.row(h, &self.vars[y])?;
                Ok(row == gx.intersection(&hy).cloned().collect())
            }
            Term::Superset { f, g, x } => {
                let row = self.row(f, e)?;
                let gx = self.row(g, &self.vars[x])?;
                Ok(gx.is_subset(&row))
            }
            Term::Disjointness { f, x, g, y } => {
                let fx = self.row(f, &self.vars[x])?;
                let gy = self.row(g, &self.vars[y])?;
                Ok(fx.intersection(&gy).next().is_none())
            }
            Term::Conj(s, t) => {
                // cheap side first: refute without materializing rows
                let (first, second) = if rel_weight(s) <= rel_weight(t) {
                    (s, t)
                } else {
                    (t, s)
                };
                Ok(self.member(e, first)? && self.member(e, second)?)
            }
            Term::DisjointUnion { .. } => self.member(e, &term.desugar()),
        }
    }

    fn covers(&self, row: &BTreeSet<Elem>, ts: &[Term]) -> Result<bool, Stop> {
        if row.is_empty() {
            return Ok(false);
        }
        let elems: Vec<&Elem> = row.iter().collect();
        let mut cands: Vec<Vec<usize>> = Vec::with_capacity(ts.len());
        for t in ts {
            let mut c = Vec::new();
            for (i, e) in elems.iter().enumerate() {
                if self.member(e, t)? {
                    c.push(i);
                }
            }
            if c.is_empty() {
                return Ok(false);
            }
            cands.push(c);
        }
        let mut covered = vec![false; elems.len()];
        Ok(cover_search(&cands, 0, &mut covered, ts.len()))
    }
}

/// Exhaustively search for a model of `{root = term}` over universes with at
/// most `bound` elements beyond the term's atoms and constants. Returns the
/// first satisfying model in a fixed deterministic order, or `None` if there
/// is none within the bound. `budget` caps the number of search nodes.
pub fn enumerate_models(
    term: &Term,
    root: &str,
    bound: usize,
    budget: u64,
) -> Result<Option<Model>, OracleBudget> {
    let atoms: Vec<String> = term.atoms().into_iter().collect();
    let consts: Vec<String> = term.constants().into_iter().collect();
    let concepts: Vec<String> = term
        .concepts()
        .into_iter()
        .filter(|c| c != TOP && c != BOT)
        .collect();
    let relations: Vec<String> = term.relations().into_iter().collect();
    let mut vars: Vec<String> = term.free_vars().into_iter().collect();
    if !vars.contains(&root.to_string()) {
        vars.push(root.to_string());
        vars.sort();
    }

    let base: Vec<Elem> = atoms.iter().chain(consts.iter()).cloned().collect();
    let k_min = usize::from(base.is_empty());
    let mut steps = 0u64;

    for k in k_min..=bound.max(k_min) {
        let mut universe = base.clone();
        for i in 0..k {
            universe.push(format!("+{i}"));
        }
        universe.sort();

        let atom_elems: BTreeSet<Elem> = atoms.iter().cloned().collect();
        let atom_map: BTreeMap<String, Elem> =
            atoms.iter().map(|a| (a.clone(), a.clone())).collect();

        let nvars = vars.len();
        let nuniv = universe.len();
        let mut var_idx = vec![0usize; nvars];
        'assignments: loop {
            let var_map: BTreeMap<String, Elem> = vars
                .iter()
                .zip(&var_idx)
                .map(|(v, &i)| (v.clone(), universe[i].clone()))
                .collect();

            let found = for_each_const_map(&universe, &consts, &mut |const_map| {
                let partial = Partial {
                    universe: universe.clone(),
                    atoms: atom_elems.clone(),
                    vars: var_map.clone(),
                    consts: const_map.clone(),
                    atom_map: atom_map.clone(),
                    rows: BTreeMap::new(),
                    bits: BTreeMap::new(),
                };
                search(partial, term, root, &mut steps, budget)
            })?;
            if let Some(p) = found {
                let model = finish_model(p, &relations, &concepts);
                debug_assert!(model.check_wellformed().is_ok());
                return Ok(Some(model));
            }

            // next variable assignment, lexicographic
            let mut i = nvars;
            loop {
                if i == 0 {
                    break 'assignments;
                }
                i -= 1;
                var_idx[i] += 1;
                if var_idx[i] < nuniv {
                    break;
                }
                var_idx[i] = 0;
            }
        }
    }
    Ok(None)
}

/// Injective constant assignments in lexicographic order; stops at the first
/// `Some` produced by `f`.
fn for_each_const_map(
    universe: &[Elem],
    consts: &[String],
    f: &mut impl FnMut(&BTreeMap<String, Elem>) -> Result<Option<Partial>, OracleBudget>,
) -> Result<Option<Partial>, OracleBudget> {
    fn go(
        universe: &[Elem],
        consts: &[String],
        used: &mut Vec<bool>,
        acc: &mut BTreeMap<String, Elem>,
        pos: usize,
        f: &mut impl FnMut(&BTreeMap<String, Elem>) -> Result<Option<Partial>, OracleBudget>,
    ) -> Result<Option<Partial>, OracleBudget> {
        if pos == consts.len() {
            return f(acc);
        }
        for (i, e) in universe.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            acc.insert(consts[pos].clone(), e.clone());
            let r = go(universe, consts, used, acc, pos + 1, f)?;
            used[i] = false;
            acc.remove(&consts[pos]);
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }
    if consts.len() > universe.len() {
        return Ok(None);
    }
    let mut used = vec![false; universe.len()];
    let mut acc = BTreeMap::new();
    go(universe, consts, &mut used, &mut acc, 0, f)
}

/// Backtracking over lazily materialized rows and concept bits.
fn search(
    partial: Partial,
    term: &Term,
    root: &str,
    steps: &mut u64,
    budget: u64,
) -> Result<Option<Partial>, OracleBudget> {
    *steps += 1;
    if *steps > budget {
        return Err(OracleBudget { budget });
    }
    let root_elem = partial.vars[root].clone();
    match partial.member(&root_elem, term) {
        Ok(true) => Ok(Some(partial)),
        Ok(false) => Ok(None),
        Err(Stop::NeedRow(e, rel)) => {
            // subsets in ascending bitmask order over the sorted universe
            let n = partial.universe.len();
            for mask in 0u64..(1u64 << n) {
                let row: BTreeSet<Elem> = partial
                    .universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, e)| e.clone())
                    .collect();
                let mut next = partial.clone();
                next.rows.insert((e.clone(), rel.clone()), row);
                if let Some(found) = search(next, term, root, steps, budget)? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        }
        Err(Stop::NeedBit(c, e)) => {
            for b in [false, true] {
                let mut next = partial.clone();
                next.bits.insert((c.clone(), e.clone()), b);
                if let Some(found) = search(next, term, root, steps, budget)? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        }
    }
}

fn finish_model(p: Partial, relations: &[String], concepts: &[String]) -> Model {
    let universe: BTreeSet<Elem> = p.universe.iter().cloned().collect();
    let mut rel_tables: BTreeMap<String, BTreeSet<(Elem, Elem)>> = BTreeMap::new();
    for r in relations {
        rel_tables.insert(r.clone(), BTreeSet::new());
    }
    for ((e, rel), row) in &p.rows {
        let table = rel_tables.entry(rel.clone()).or_default();
        for e2 in row {
            table.insert((e.clone(), e2.clone()));
        }
    }
    let mut concept_map: BTreeMap<String, BTreeSet<Elem>> = BTreeMap::new();
    for c in concepts {
        concept_map.insert(c.clone(), BTreeSet::new());
    }
    for ((c, e), b) in &p.bits {
        if *b {
            concept_map.entry(c.clone()).or_default().insert(e.clone());
        }
    }
    concept_map.insert(TOP.to_string(), universe.clone());
    concept_map.insert(BOT.to_string(), BTreeSet::new());
    Model {
        interp: FiniteInterpretation {
            universe,
            relations: rel_tables,
            atom_map: p.atom_map,
        },
        assign: Assignment {
            vars: p.vars,
            consts: p.consts,
            concepts: concept_map,
        },
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

    const BUDGET: u64 = 5_000_000;

    #[test]
    fn atom_denotes_its_element() {
        let m = enumerate_models(&t("a"), "r", 3, BUDGET).unwrap().unwrap();
        // the smallest case: a one-element universe suffices
        assert_eq!(m.interp.universe.len(), 1);
        assert_eq!(denote(&t("a"), &m).unwrap(), m.interp.universe);
        assert_eq!(m.assign.vars["r"], m.interp.atom_map["a"]);
    }

    #[test]
    fn top_denotes_universe_and_bot_nothing() {
        let m = enumerate_models(&t("a"), "r", 3, BUDGET).unwrap().unwrap();
        assert_eq!(denote(&t("Top"), &m).unwrap(), m.interp.universe);
        assert!(denote(&t("Bot"), &m).unwrap().is_empty());
        assert_eq!(enumerate_models(&t("Bot"), "r", 3, BUDGET).unwrap(), None);
    }

    #[test]
    fn forall_exists_clash_has_no_model() {
        let term = t("f: a & all f: !a");
        assert_eq!(enumerate_models(&term, "r", 3, BUDGET).unwrap(), None);
    }

    #[test]
    fn fixed_set_needs_two_successors() {
        let term = t("f: {a, b}=");
        let m = enumerate_models(&term, "r", 3, BUDGET).unwrap().unwrap();
        let root = m.assign.vars["r"].clone();
        let row: BTreeSet<_> = m.interp.relations["f"]
            .iter()
            .filter(|(e, _)| *e == root)
            .map(|(_, e2)| e2.clone())
            .collect();
        assert_eq!(row.len(), 2);
        let cs = ConstraintSystem::from_root("r", &term);
        assert_eq!(satisfies(&m, &cs), Ok(true));
    }

    #[test]
    fn conjunction_denotes_the_intersection() {
        let term = t("f: a & some g: Top");
        let m = enumerate_models(&term, "r", 2, BUDGET).unwrap().unwrap();
        let lhs = denote(&t("f: a"), &m).unwrap();
        let rhs = denote(&t("some g: Top"), &m).unwrap();
        let both = denote(&term, &m).unwrap();
        assert_eq!(both, lhs.intersection(&rhs).cloned().collect());
        assert!(both.contains(&m.assign.vars["r"]));
    }

    #[test]
    fn disjointness_denotes_all_or_nothing() {
        let term = t("f($x) != g($y)");
        let m = enumerate_models(&term, "r", 2, BUDGET).unwrap().unwrap();
        let d = denote(&term, &m).unwrap();
        assert_eq!(d, m.interp.universe);
    }

    #[test]
    fn feature_requires_exact_singleton() {
        let term = t("f: a");
        let mut m = enumerate_models(&term, "r", 2, BUDGET).unwrap().unwrap();
        let root = m.assign.vars["r"].clone();
        assert!(member(&m, &root, &term).unwrap());
        // a second successor on the root's row breaks the singleton clause
        let extra = "+9".to_string();
        m.interp.universe.insert(extra.clone());
        m.assign
            .concepts
            .insert(TOP.into(), m.interp.universe.clone());
        m.interp
            .relations
            .get_mut("f")
            .unwrap()
            .insert((root.clone(), extra));
        assert!(!member(&m, &root, &term).unwrap());
    }

    #[test]
    fn negated_primitives_denote_the_complement() {
        let m = enumerate_models(&t("a & some f: b"), "r", 2, BUDGET)
            .unwrap();
        // atomicity: `a` cannot have successors
        assert_eq!(m, None);

        let m = enumerate_models(&t("!a & some f: b"), "r", 2, BUDGET)
            .unwrap()
            .unwrap();
        let all: BTreeSet<_> = m.interp.universe.clone();
        let na = denote(&t("!a"), &m).unwrap();
        let a = denote(&t("a"), &m).unwrap();
        assert_eq!(na, all.difference(&a).cloned().collect());
    }

    #[test]
    fn uninterpreted_names_error() {
        let m = enumerate_models(&t("a"), "r", 1, BUDGET).unwrap().unwrap();
        assert_eq!(
            denote(&t("zz"), &m),
            Err(SemanticsError::Uninterpreted("zz".into()))
        );
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let term = t("f: {Top, Top}= & g: {Top, Top}= & all f: A & all g: !A");
        let r = enumerate_models(&term, "r", 3, 10);
        assert!(matches!(r, Err(OracleBudget { .. })));
    }
}
