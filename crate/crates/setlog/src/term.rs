//! The term algebra.
//!
//! One variant per grammar production. `P` is the restricted production
//! allowed as the body of a universal role quantification: variables, atoms,
//! constants, primitive concepts, and their negations. Negation of compound
//! terms is not expressible.
//!
//! Disjoint union `f: g(x) dunion h(y)` is surface sugar; [`Term::desugar`]
//! rewrites it to a disjointness constraint conjoined with a plain union
//! before any solving takes place.

use std::collections::BTreeSet;

use crate::sig::{NameKind, Signature};

/// A feature term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// `$x`
    Var(String),
    /// `a`
    Atom(String),
    /// `#c`
    Const(String),
    /// `C`
    Concept(String),
    /// `!$x`
    NegVar(String),
    /// `!a`
    NegAtom(String),
    /// `!#c`
    NegConst(String),
    /// `!C`
    NegConcept(String),
    /// `f: T` — the `f`-value is exactly one object, lying in `T`
    Feature(String, Box<Term>),
    /// `some f: T` — at least one `f`-value lies in `T`
    Exists(String, Box<Term>),
    /// `all f: P` — every `f`-value lies in `P`
    Forall(String, Box<Term>),
    /// `f: {T1, ..., Tn}` — the `f`-values are exactly covered by the list
    SetDesc(String, Vec<Term>),
    /// `f: {T1, ..., Tn}=` — additionally there are exactly `n` values
    FixedSet(String, Vec<Term>),
    /// `f: g($x) union h($y)`
    Union {
        f: String,
        g: String,
        x: String,
        h: String,
        y: String,
    },
    /// `f: g($x) isect h($y)`
    Intersection {
        f: String,
        g: String,
        x: String,
        h: String,
        y: String,
    },
    /// `f: >= g($x)`
    Superset { f: String, g: String, x: String },
    /// `f($x) != g($y)`
    Disjointness {
        f: String,
        x: String,
        g: String,
        y: String,
    },
    /// `S & T`
    Conj(Box<Term>, Box<Term>),
    /// `f: g($x) dunion h($y)` — sugar, removed by [`Term::desugar`]
    DisjointUnion {
        f: String,
        g: String,
        x: String,
        h: String,
        y: String,
    },
}

/// The `P` production: what may appear under `all f:`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropP {
    Var(String),
    Atom(String),
    Const(String),
    Concept(String),
    NegVar(String),
    NegAtom(String),
    NegConst(String),
    NegConcept(String),
}

impl PropP {
    pub fn from_term(term: &Term) -> Option<PropP> {
        match term {
            Term::Var(n) => Some(PropP::Var(n.clone())),
            Term::Atom(n) => Some(PropP::Atom(n.clone())),
            Term::Const(n) => Some(PropP::Const(n.clone())),
            Term::Concept(n) => Some(PropP::Concept(n.clone())),
            Term::NegVar(n) => Some(PropP::NegVar(n.clone())),
            Term::NegAtom(n) => Some(PropP::NegAtom(n.clone())),
            Term::NegConst(n) => Some(PropP::NegConst(n.clone())),
            Term::NegConcept(n) => Some(PropP::NegConcept(n.clone())),
            _ => None,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            PropP::Var(n) => Term::Var(n.clone()),
            PropP::Atom(n) => Term::Atom(n.clone()),
            PropP::Const(n) => Term::Const(n.clone()),
            PropP::Concept(n) => Term::Concept(n.clone()),
            PropP::NegVar(n) => Term::NegVar(n.clone()),
            PropP::NegAtom(n) => Term::NegAtom(n.clone()),
            PropP::NegConst(n) => Term::NegConst(n.clone()),
            PropP::NegConcept(n) => Term::NegConcept(n.clone()),
        }
    }
}

/// A single well-formedness violation: the rule broken and the offending
/// subterm. Violations are data, not failures; a term that parses may still
/// carry violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub subterm: Term,
}

pub const RULE_FORALL_BODY: &str = "Forall body not in P";
pub const RULE_EMPTY_SET: &str = "empty set description";
pub const RULE_UNDECLARED: &str = "name not declared in signature";

impl Term {
    pub fn conj(lhs: Term, rhs: Term) -> Term {
        Term::Conj(Box::new(lhs), Box::new(rhs))
    }

    /// Fold a non-empty list into a left-nested conjunction.
    pub fn conj_all(mut terms: Vec<Term>) -> Term {
        assert!(!terms.is_empty());
        let first = terms.remove(0);
        terms.into_iter().fold(first, Term::conj)
    }

    pub fn is_primitive(&self) -> bool {
        PropP::from_term(self).is_some()
    }

    /// Structural size. Each constructor counts one; set descriptions also
    /// count one per element slot.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_)
            | Term::Atom(_)
            | Term::Const(_)
            | Term::Concept(_)
            | Term::NegVar(_)
            | Term::NegAtom(_)
            | Term::NegConst(_)
            | Term::NegConcept(_)
            | Term::Union { .. }
            | Term::Intersection { .. }
            | Term::Superset { .. }
            | Term::Disjointness { .. }
            | Term::DisjointUnion { .. } => 1,
            Term::Feature(_, t) | Term::Exists(_, t) | Term::Forall(_, t) => 1 + t.size(),
            Term::SetDesc(_, ts) | Term::FixedSet(_, ts) => {
                1 + ts.len() + ts.iter().map(Term::size).sum::<usize>()
            }
            Term::Conj(s, t) => 1 + s.size() + t.size(),
        }
    }

    /// Well-formedness report against a signature. Empty iff the term
    /// conforms to the grammar over `sig`.
    pub fn validate(&self, sig: &Signature) -> Vec<Violation> {
        let mut out = Vec::new();
        self.validate_into(sig, &mut out);
        out
    }

    fn validate_into(&self, sig: &Signature, out: &mut Vec<Violation>) {
        let mut check = |kind: NameKind, name: &str| {
            if !sig.is_declared(kind, name) {
                out.push(Violation {
                    rule: RULE_UNDECLARED,
                    subterm: self.clone(),
                });
            }
        };
        match self {
            Term::Var(n) | Term::NegVar(n) => check(NameKind::Variable, n),
            Term::Atom(n) | Term::NegAtom(n) => check(NameKind::Atom, n),
            Term::Const(n) | Term::NegConst(n) => check(NameKind::Constant, n),
            Term::Concept(n) | Term::NegConcept(n) => check(NameKind::Concept, n),
            Term::Feature(f, t) | Term::Exists(f, t) => {
                check(NameKind::Relation, f);
                t.validate_into(sig, out);
            }
            Term::Forall(f, t) => {
                check(NameKind::Relation, f);
                if PropP::from_term(t).is_none() {
                    out.push(Violation {
                        rule: RULE_FORALL_BODY,
                        subterm: self.clone(),
                    });
                }
                t.validate_into(sig, out);
            }
            Term::SetDesc(f, ts) | Term::FixedSet(f, ts) => {
                check(NameKind::Relation, f);
                if ts.is_empty() {
                    out.push(Violation {
                        rule: RULE_EMPTY_SET,
                        subterm: self.clone(),
                    });
                }
                for t in ts {
                    t.validate_into(sig, out);
                }
            }
            Term::Union { f, g, x, h, y }
            | Term::Intersection { f, g, x, h, y }
            | Term::DisjointUnion { f, g, x, h, y } => {
                check(NameKind::Relation, f);
                check(NameKind::Relation, g);
                check(NameKind::Relation, h);
                check(NameKind::Variable, x);
                check(NameKind::Variable, y);
            }
            Term::Superset { f, g, x } => {
                check(NameKind::Relation, f);
                check(NameKind::Relation, g);
                check(NameKind::Variable, x);
            }
            Term::Disjointness { f, x, g, y } => {
                check(NameKind::Relation, f);
                check(NameKind::Relation, g);
                check(NameKind::Variable, x);
                check(NameKind::Variable, y);
            }
            Term::Conj(s, t) => {
                s.validate_into(sig, out);
                t.validate_into(sig, out);
            }
        }
    }

    /// Variables occurring in the term, including set-operation operands.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| match t {
            Term::Var(n) | Term::NegVar(n) => {
                out.insert(n.clone());
            }
            Term::Union { x, y, .. }
            | Term::Intersection { x, y, .. }
            | Term::DisjointUnion { x, y, .. }
            | Term::Disjointness { x, y, .. } => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Term::Superset { x, .. } => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Atoms occurring in the term.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Atom(n) | Term::NegAtom(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    /// Constants occurring in the term.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Const(n) | Term::NegConst(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    /// Primitive concepts occurring in the term.
    pub fn concepts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Concept(n) | Term::NegConcept(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    /// Relation symbols occurring in the term.
    pub fn relations(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| match t {
            Term::Feature(f, _)
            | Term::Exists(f, _)
            | Term::Forall(f, _)
            | Term::SetDesc(f, _)
            | Term::FixedSet(f, _) => {
                out.insert(f.clone());
            }
            Term::Union { f, g, h, .. }
            | Term::Intersection { f, g, h, .. }
            | Term::DisjointUnion { f, g, h, .. } => {
                out.insert(f.clone());
                out.insert(g.clone());
                out.insert(h.clone());
            }
            Term::Superset { f, g, .. } => {
                out.insert(f.clone());
                out.insert(g.clone());
            }
            Term::Disjointness { f, g, .. } => {
                out.insert(f.clone());
                out.insert(g.clone());
            }
            _ => {}
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&Term)) {
        visit(self);
        match self {
            Term::Feature(_, t) | Term::Exists(_, t) | Term::Forall(_, t) => visit_rec(t, visit),
            Term::SetDesc(_, ts) | Term::FixedSet(_, ts) => {
                for t in ts {
                    visit_rec(t, visit);
                }
            }
            Term::Conj(s, t) => {
                visit_rec(s, visit);
                visit_rec(t, visit);
            }
            _ => {}
        }

        fn visit_rec(t: &Term, visit: &mut impl FnMut(&Term)) {
            t.walk(visit);
        }
    }

    /// Remove every disjoint union:
    /// `f: g(x) dunion h(y)` becomes `(g(x) != h(y)) & (f: g(x) union h(y))`.
    pub fn desugar(&self) -> Term {
        match self {
            Term::DisjointUnion { f, g, x, h, y } => Term::conj(
                Term::Disjointness {
                    f: g.clone(),
                    x: x.clone(),
                    g: h.clone(),
                    y: y.clone(),
                },
                Term::Union {
                    f: f.clone(),
                    g: g.clone(),
                    x: x.clone(),
                    h: h.clone(),
                    y: y.clone(),
                },
            ),
            Term::Feature(f, t) => Term::Feature(f.clone(), Box::new(t.desugar())),
            Term::Exists(f, t) => Term::Exists(f.clone(), Box::new(t.desugar())),
            Term::Forall(f, t) => Term::Forall(f.clone(), Box::new(t.desugar())),
            Term::SetDesc(f, ts) => {
                Term::SetDesc(f.clone(), ts.iter().map(Term::desugar).collect())
            }
            Term::FixedSet(f, ts) => {
                Term::FixedSet(f.clone(), ts.iter().map(Term::desugar).collect())
            }
            Term::Conj(s, t) => Term::conj(s.desugar(), t.desugar()),
            other => other.clone(),
        }
    }

    /// True iff the term contains no disjoint union.
    pub fn is_desugared(&self) -> bool {
        let mut sugar = false;
        self.walk(&mut |t| {
            if matches!(t, Term::DisjointUnion { .. }) {
                sugar = true;
            }
        });
        !sugar
    }

    /// Rename every occurrence of variable `from` to `to`.
    pub fn rename_var(&self, from: &str, to: &str) -> Term {
        let r = |n: &String| {
            if n == from {
                to.to_string()
            } else {
                n.clone()
            }
        };
        match self {
            Term::Var(n) => Term::Var(r(n)),
            Term::NegVar(n) => Term::NegVar(r(n)),
            Term::Feature(f, t) => Term::Feature(f.clone(), Box::new(t.rename_var(from, to))),
            Term::Exists(f, t) => Term::Exists(f.clone(), Box::new(t.rename_var(from, to))),
            Term::Forall(f, t) => Term::Forall(f.clone(), Box::new(t.rename_var(from, to))),
            Term::SetDesc(f, ts) => Term::SetDesc(
                f.clone(),
                ts.iter().map(|t| t.rename_var(from, to)).collect(),
            ),
            Term::FixedSet(f, ts) => Term::FixedSet(
                f.clone(),
                ts.iter().map(|t| t.rename_var(from, to)).collect(),
            ),
            Term::Union { f, g, x, h, y } => Term::Union {
                f: f.clone(),
                g: g.clone(),
                x: r(x),
                h: h.clone(),
                y: r(y),
            },
            Term::Intersection { f, g, x, h, y } => Term::Intersection {
                f: f.clone(),
                g: g.clone(),
                x: r(x),
                h: h.clone(),
                y: r(y),
            },
            Term::DisjointUnion { f, g, x, h, y } => Term::DisjointUnion {
                f: f.clone(),
                g: g.clone(),
                x: r(x),
                h: h.clone(),
                y: r(y),
            },
            Term::Superset { f, g, x } => Term::Superset {
                f: f.clone(),
                g: g.clone(),
                x: r(x),
            },
            Term::Disjointness { f, x, g, y } => Term::Disjointness {
                f: f.clone(),
                x: r(x),
                g: g.clone(),
                y: r(y),
            },
            Term::Conj(s, t) => Term::conj(s.rename_var(from, to), t.rename_var(from, to)),
            other => other.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::NameKind;

    fn sig_with(names: &[(NameKind, &str)]) -> Signature {
        let mut sig = Signature::new();
        for (k, n) in names {
            sig.declare(*k, n).unwrap();
        }
        sig
    }

    #[test]
    fn forall_body_restriction_is_reported() {
        let sig = sig_with(&[
            (NameKind::Relation, "f"),
            (NameKind::Relation, "g"),
            (NameKind::Atom, "a"),
        ]);
        // all f: (g: a)
        let t = Term::Forall(
            "f".into(),
            Box::new(Term::Feature("g".into(), Box::new(Term::Atom("a".into())))),
        );
        let report = t.validate(&sig);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].rule, RULE_FORALL_BODY);
    }

    #[test]
    fn feature_atom_validates_cleanly() {
        let sig = sig_with(&[(NameKind::Relation, "f"), (NameKind::Atom, "a")]);
        let t = Term::Feature("f".into(), Box::new(Term::Atom("a".into())));
        assert!(t.validate(&sig).is_empty());
    }

    #[test]
    fn disjointness_validates_cleanly() {
        let sig = sig_with(&[
            (NameKind::Relation, "f"),
            (NameKind::Relation, "g"),
            (NameKind::Variable, "x"),
            (NameKind::Variable, "y"),
        ]);
        let t = Term::Disjointness {
            f: "f".into(),
            x: "x".into(),
            g: "g".into(),
            y: "y".into(),
        };
        assert!(t.validate(&sig).is_empty());
    }

    #[test]
    fn free_vars_collects_operands() {
        // f: {$x, a} & g: $y
        let t = Term::conj(
            Term::SetDesc(
                "f".into(),
                vec![Term::Var("x".into()), Term::Atom("a".into())],
            ),
            Term::Feature("g".into(), Box::new(Term::Var("y".into()))),
        );
        let fv: Vec<_> = t.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["x".to_string(), "y".to_string()]);

        assert!(Term::Atom("a".into()).free_vars().is_empty());

        let sup = Term::Superset {
            f: "f".into(),
            g: "g".into(),
            x: "x".into(),
        };
        assert_eq!(sup.free_vars().into_iter().collect::<Vec<_>>(), vec!["x"]);
    }

    #[test]
    fn desugar_rewrites_disjoint_union() {
        let du = Term::DisjointUnion {
            f: "f".into(),
            g: "g".into(),
            x: "x".into(),
            h: "h".into(),
            y: "y".into(),
        };
        let expected = Term::conj(
            Term::Disjointness {
                f: "g".into(),
                x: "x".into(),
                g: "h".into(),
                y: "y".into(),
            },
            Term::Union {
                f: "f".into(),
                g: "g".into(),
                x: "x".into(),
                h: "h".into(),
                y: "y".into(),
            },
        );
        assert_eq!(du.desugar(), expected);
    }

    #[test]
    fn desugar_is_identity_on_core_terms() {
        let t = Term::conj(
            Term::Feature("f".into(), Box::new(Term::Atom("a".into()))),
            Term::Exists("g".into(), Box::new(Term::Var("x".into()))),
        );
        assert_eq!(t.desugar(), t);
    }

    #[test]
    fn desugar_applies_inside_subterms() {
        // p: ($z & q: r($u) dunion s($v))
        let inner = Term::DisjointUnion {
            f: "q".into(),
            g: "r".into(),
            x: "u".into(),
            h: "s".into(),
            y: "v".into(),
        };
        let t = Term::Feature(
            "p".into(),
            Box::new(Term::conj(Term::Var("z".into()), inner)),
        );
        let d = t.desugar();
        assert!(d.is_desugared());
        // outer structure preserved
        match d {
            Term::Feature(f, body) => {
                assert_eq!(f, "p");
                match *body {
                    Term::Conj(l, _) => assert_eq!(*l, Term::Var("z".into())),
                    other => panic!("unexpected shape: {other:?}"),
                }
            }
            other => panic!("unexpected shape: {other:?}"),
        }
    }

    #[test]
    fn desugar_is_idempotent_and_preserves_free_vars() {
        let t = Term::conj(
            Term::DisjointUnion {
                f: "f".into(),
                g: "g".into(),
                x: "x".into(),
                h: "h".into(),
                y: "y".into(),
            },
            Term::Var("z".into()),
        );
        let once = t.desugar();
        assert_eq!(once.desugar(), once);
        assert_eq!(once.free_vars(), t.free_vars());
    }
}
