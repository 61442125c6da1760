//! Propositional satisfiability encoded as term consistency.
//!
//! A propositional formula maps to a term over one relation `f` and the two
//! constants `#true` and `#false`. The truth-assignment part forces every
//! propositional variable `a` (as the logic variable `xa`) and every
//! auxiliary evaluation variable (`x1`, `x2`, ...) to coincide with one of
//! the two set members:
//!
//! ```text
//! delta(phi) = f:{#true, #false} & some f:xa & ... & some f:x1 & ...
//! ```
//!
//! The evaluation part mirrors the formula's structure:
//!
//! ```text
//! tau(a)       = xa
//! tau(S /\ T)  = tau(S) & tau(T)
//! tau(S \/ T)  = xi & some f:(f:{tau(S), tau(T)} & some f:xi)
//! tau(~S)      = xi & some f:(tau(S) & !xi)
//! ```
//!
//! with `xi` fresh per clause, numbered in post-order. The full encoding is
//! `some f: delta(phi) & some f: (#true & tau(phi))`; the `#true` conjunct
//! forces the value of `tau(phi)` to be true. The formula is satisfiable iff
//! the encoding is consistent, which [`truth_table_sat`] checks
//! independently by exhaustive evaluation.
//!
//! Two points keep the construction honest against the term semantics.
//! The truth values must be constants: the ∨ and ¬ gadgets give their value
//! object an `f`-successor, and atomicity would forbid that the moment the
//! value is clamped onto an atom. And the gadgets decide *clausal* formulas:
//! `f:{tau(S), tau(T)}` needs both positions to denote, so an unchosen
//! disjunct with an unsatisfiable evaluation (say `b \/ (a /\ ~a)`) would
//! poison the whole encoding, and an ∨-value forced false only forces one
//! disjunct false. [`encode`] therefore clausifies non-CNF input first
//! (equisatisfiable, linear size); formulas already in CNF pass through
//! unchanged.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::term::Term;

/// A propositional formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropFormula {
    Var(String),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(n: impl Into<String>) -> Self {
        PropFormula::Var(n.into())
    }
    pub fn not(p: PropFormula) -> Self {
        PropFormula::Not(Box::new(p))
    }
    pub fn and(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::And(Box::new(l), Box::new(r))
    }
    pub fn or(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Or(Box::new(l), Box::new(r))
    }

    /// Variables in first-occurrence order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            PropFormula::Var(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            PropFormula::Not(p) => p.collect_vars(out),
            PropFormula::And(l, r) | PropFormula::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            PropFormula::Var(_) => 1,
            PropFormula::Not(p) => 1 + p.size(),
            PropFormula::And(l, r) | PropFormula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    fn eval(&self, assignment: &BTreeMap<String, bool>) -> bool {
        match self {
            PropFormula::Var(n) => assignment[n],
            PropFormula::Not(p) => !p.eval(assignment),
            PropFormula::And(l, r) => l.eval(assignment) && r.eval(assignment),
            PropFormula::Or(l, r) => l.eval(assignment) || r.eval(assignment),
        }
    }
}

impl std::fmt::Display for PropFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PropFormula::Var(n) => write!(f, "{n}"),
            PropFormula::Not(p) => write!(f, "~{p}"),
            PropFormula::And(l, r) => write!(f, "({l} /\\ {r})"),
            PropFormula::Or(l, r) => write!(f, "({l} \\/ {r})"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("propositional variable `{0}` collides with a reserved atom")]
    ReservedName(String),
    #[error("truth table limited to 20 variables, got {0}")]
    TooManyVars(usize),
    #[error("{0}")]
    Parse(String),
}

/// The encoding of one formula: the term, where each propositional variable
/// went, and the auxiliary evaluation variables in allocation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub term: Term,
    pub var_map: BTreeMap<String, String>,
    pub eval_vars: Vec<String>,
}

/// The relation symbol the encoding is built over.
pub const ENC_REL: &str = "f";
/// Reserved truth-value constants.
pub const TRUE_CONST: &str = "true";
pub const FALSE_CONST: &str = "false";

fn xvar(prop: &str) -> String {
    format!("x{prop}")
}

fn check_reserved(phi: &PropFormula) -> Result<(), SatError> {
    for v in phi.vars() {
        if v == TRUE_CONST || v == FALSE_CONST {
            return Err(SatError::ReservedName(v));
        }
    }
    Ok(())
}

/// Is the formula a conjunction of clauses (disjunctions of literals)?
pub fn is_cnf(phi: &PropFormula) -> bool {
    fn literal(p: &PropFormula) -> bool {
        matches!(p, PropFormula::Var(_))
            || matches!(p, PropFormula::Not(q) if matches!(q.as_ref(), PropFormula::Var(_)))
    }
    fn clause(p: &PropFormula) -> bool {
        match p {
            PropFormula::Or(l, r) => clause(l) && clause(r),
            other => literal(other),
        }
    }
    match phi {
        PropFormula::And(l, r) => is_cnf(l) && is_cnf(r),
        other => clause(other),
    }
}

/// Equisatisfiable CNF via fresh definition variables, linear in the input.
/// Formulas already in CNF are returned unchanged.
pub fn clausify(phi: &PropFormula) -> PropFormula {
    if is_cnf(phi) {
        return phi.clone();
    }
    // a fresh-name prefix that no input variable uses
    let vars = phi.vars();
    let mut prefix = "t".to_string();
    while vars.iter().any(|v| v.starts_with(&prefix)) {
        prefix.push('t');
    }
    let mut counter = 0usize;
    let mut clauses: Vec<PropFormula> = Vec::new();
    fn neg(l: PropFormula) -> PropFormula {
        match l {
            PropFormula::Not(inner) => *inner,
            other => PropFormula::not(other),
        }
    }
    // returns the literal standing for the subformula
    fn walk(
        p: &PropFormula,
        prefix: &str,
        counter: &mut usize,
        clauses: &mut Vec<PropFormula>,
    ) -> PropFormula {
        use PropFormula as P;
        match p {
            P::Var(_) => p.clone(),
            P::Not(q) => neg(walk(q, prefix, counter, clauses)),
            P::And(l, r) => {
                let a = walk(l, prefix, counter, clauses);
                let b = walk(r, prefix, counter, clauses);
                *counter += 1;
                let v = P::var(format!("{prefix}{counter}"));
                // v <-> a /\ b
                clauses.push(P::or(neg(v.clone()), a.clone()));
                clauses.push(P::or(neg(v.clone()), b.clone()));
                clauses.push(P::or(P::or(v.clone(), neg(a)), neg(b)));
                v
            }
            P::Or(l, r) => {
                let a = walk(l, prefix, counter, clauses);
                let b = walk(r, prefix, counter, clauses);
                *counter += 1;
                let v = P::var(format!("{prefix}{counter}"));
                // v <-> a \/ b
                clauses.push(P::or(P::or(neg(v.clone()), a.clone()), b.clone()));
                clauses.push(P::or(v.clone(), neg(a)));
                clauses.push(P::or(v.clone(), neg(b)));
                v
            }
        }
    }
    let root = walk(phi, &prefix, &mut counter, &mut clauses);
    clauses.push(root);
    let mut it = clauses.into_iter();
    let first = it.next().unwrap();
    it.fold(first, PropFormula::and)
}

/// The evaluation translation. Returns the term and the auxiliary variables
/// it allocated (post-order, named `x1`, `x2`, ...).
pub fn tau(phi: &PropFormula) -> (Term, Vec<String>) {
    let mut evals = Vec::new();
    let t = tau_rec(phi, &mut evals);
    (t, evals)
}

fn tau_rec(phi: &PropFormula, evals: &mut Vec<String>) -> Term {
    match phi {
        PropFormula::Var(a) => Term::Var(xvar(a)),
        PropFormula::And(l, r) => {
            let tl = tau_rec(l, evals);
            let tr = tau_rec(r, evals);
            Term::conj(tl, tr)
        }
        PropFormula::Or(l, r) => {
            let tl = tau_rec(l, evals);
            let tr = tau_rec(r, evals);
            let xi = alloc_eval(evals);
            // xi & some f:(f:{tau(S), tau(T)} & some f:xi)
            Term::conj(
                Term::Var(xi.clone()),
                Term::Exists(
                    ENC_REL.into(),
                    Box::new(Term::conj(
                        Term::SetDesc(ENC_REL.into(), vec![tl, tr]),
                        Term::Exists(ENC_REL.into(), Box::new(Term::Var(xi))),
                    )),
                ),
            )
        }
        PropFormula::Not(s) => {
            let ts = tau_rec(s, evals);
            let xi = alloc_eval(evals);
            // xi & some f:(tau(S) & !xi)
            Term::conj(
                Term::Var(xi.clone()),
                Term::Exists(
                    ENC_REL.into(),
                    Box::new(Term::conj(ts, Term::NegVar(xi))),
                ),
            )
        }
    }
}

fn alloc_eval(evals: &mut Vec<String>) -> String {
    let name = format!("x{}", evals.len() + 1);
    evals.push(name.clone());
    name
}

fn delta_term(pvars: &[String], evals: &[String]) -> Term {
    let mut parts = vec![Term::SetDesc(
        ENC_REL.into(),
        vec![
            Term::Const(TRUE_CONST.into()),
            Term::Const(FALSE_CONST.into()),
        ],
    )];
    for a in pvars {
        parts.push(Term::Exists(ENC_REL.into(), Box::new(Term::Var(xvar(a)))));
    }
    for e in evals {
        parts.push(Term::Exists(ENC_REL.into(), Box::new(Term::Var(e.clone()))));
    }
    Term::conj_all(parts)
}

/// The truth-assignment translation: forces every propositional and
/// evaluation variable to one of the two set members.
pub fn delta(phi: &PropFormula) -> Result<Term, SatError> {
    check_reserved(phi)?;
    let (_, evals) = tau(phi);
    Ok(delta_term(&phi.vars(), &evals))
}

/// The full encoding: `some f: delta(phi') & some f: (#true & tau(phi'))`
/// where `phi'` is the clausification of `phi`.
pub fn encode(phi: &PropFormula) -> Result<Encoding, SatError> {
    check_reserved(phi)?;
    let phi = clausify(phi);
    let (tau_t, evals) = tau(&phi);
    let delta_t = delta_term(&phi.vars(), &evals);
    let term = Term::conj(
        Term::Exists(ENC_REL.into(), Box::new(delta_t)),
        Term::Exists(
            ENC_REL.into(),
            Box::new(Term::conj(Term::Const(TRUE_CONST.into()), tau_t)),
        ),
    );
    let var_map = phi.vars().into_iter().map(|a| {
        let x = xvar(&a);
        (a, x)
    }).collect();
    Ok(Encoding {
        term,
        var_map,
        eval_vars: evals,
    })
}

/// Exhaustive truth-table satisfiability, the independent oracle for the
/// encoding. At most 20 variables.
pub fn truth_table_sat(phi: &PropFormula) -> Result<bool, SatError> {
    let vars = phi.vars();
    if vars.len() > 20 {
        return Err(SatError::TooManyVars(vars.len()));
    }
    let n = vars.len();
    for mask in 0u32..(1u32 << n) {
        let assignment: BTreeMap<String, bool> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), mask & (1 << i) != 0))
            .collect();
        if phi.eval(&assignment) {
            return Ok(true);
        }
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// input syntax

/// Parse `a`, `~phi`, `phi /\ psi`, `phi \/ psi`, parentheses. `/\` binds
/// tighter than `\/`; both associate to the left.
pub fn parse_prop(input: &str) -> Result<PropFormula, SatError> {
    let toks = prop_tokens(input)?;
    let mut p = PropParser { toks, pos: 0 };
    let f = p.or_level()?;
    if p.pos != p.toks.len() {
        return Err(SatError::Parse(format!(
            "unexpected `{}` after formula",
            p.toks[p.pos]
        )));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PTok {
    Ident(String),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

impl std::fmt::Display for PTok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PTok::Ident(s) => write!(f, "{s}"),
            PTok::Not => write!(f, "~"),
            PTok::And => write!(f, "/\\"),
            PTok::Or => write!(f, "\\/"),
            PTok::LParen => write!(f, "("),
            PTok::RParen => write!(f, ")"),
        }
    }
}

fn prop_tokens(input: &str) -> Result<Vec<PTok>, SatError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '~' => {
                chars.next();
                out.push(PTok::Not);
            }
            '(' => {
                chars.next();
                out.push(PTok::LParen);
            }
            ')' => {
                chars.next();
                out.push(PTok::RParen);
            }
            '/' => {
                chars.next();
                if chars.next() != Some('\\') {
                    return Err(SatError::Parse("expected `/\\`".into()));
                }
                out.push(PTok::And);
            }
            '\\' => {
                chars.next();
                if chars.next() != Some('/') {
                    return Err(SatError::Parse("expected `\\/`".into()));
                }
                out.push(PTok::Or);
            }
            c if c.is_ascii_lowercase() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(PTok::Ident(s));
            }
            other => return Err(SatError::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct PropParser {
    toks: Vec<PTok>,
    pos: usize,
}

impl PropParser {
    fn or_level(&mut self) -> Result<PropFormula, SatError> {
        let mut acc = self.and_level()?;
        while self.toks.get(self.pos) == Some(&PTok::Or) {
            self.pos += 1;
            let rhs = self.and_level()?;
            acc = PropFormula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn and_level(&mut self) -> Result<PropFormula, SatError> {
        let mut acc = self.unary()?;
        while self.toks.get(self.pos) == Some(&PTok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = PropFormula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PropFormula, SatError> {
        match self.toks.get(self.pos).cloned() {
            Some(PTok::Not) => {
                self.pos += 1;
                Ok(PropFormula::not(self.unary()?))
            }
            Some(PTok::LParen) => {
                self.pos += 1;
                let f = self.or_level()?;
                if self.toks.get(self.pos) != Some(&PTok::RParen) {
                    return Err(SatError::Parse("expected `)`".into()));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(PTok::Ident(n)) => {
                self.pos += 1;
                Ok(PropFormula::Var(n))
            }
            other => Err(SatError::Parse(format!(
                "expected a formula, found `{}`",
                other.map(|t| t.to_string()).unwrap_or_else(|| "end of input".into())
            ))),
        }
    }
}

/// Read a DIMACS CNF file. Variable `i` becomes `p<i>`.
pub fn parse_dimacs(input: &str) -> Result<PropFormula, SatError> {
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut header_seen = false;
    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(SatError::Parse(format!("bad DIMACS header `{line}`")));
            }
            header_seen = true;
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| SatError::Parse(format!("bad DIMACS literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    if !header_seen {
        return Err(SatError::Parse("missing DIMACS header".into()));
    }
    if clauses.is_empty() || clauses.iter().any(|c| c.is_empty()) {
        return Err(SatError::Parse(
            "empty clause or clause list; formulas range over at least one variable".into(),
        ));
    }
    let lit = |l: i64| {
        let v = PropFormula::var(format!("p{}", l.unsigned_abs()));
        if l < 0 {
            PropFormula::not(v)
        } else {
            v
        }
    };
    let clause_terms: Vec<PropFormula> = clauses
        .into_iter()
        .map(|c| {
            let mut it = c.into_iter();
            let first = lit(it.next().unwrap());
            it.fold(first, |acc, l| PropFormula::or(acc, lit(l)))
        })
        .collect();
    let mut it = clause_terms.into_iter();
    let first = it.next().unwrap();
    Ok(it.fold(first, PropFormula::and))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::render;

    #[test]
    fn tau_matches_the_defining_clauses() {
        let (t, evals) = tau(&PropFormula::var("a"));
        assert_eq!(render(&t), "$xa");
        assert!(evals.is_empty());

        let (t, evals) = tau(&PropFormula::and(PropFormula::var("a"), PropFormula::var("b")));
        assert_eq!(render(&t), "($xa & $xb)");
        assert!(evals.is_empty());

        let (t, evals) = tau(&PropFormula::not(PropFormula::var("a")));
        assert_eq!(render(&t), "($x1 & some f: ($xa & !$x1))");
        assert_eq!(evals, vec!["x1".to_string()]);
    }

    #[test]
    fn or_introduces_a_set_choice() {
        let (t, evals) = tau(&PropFormula::or(PropFormula::var("a"), PropFormula::var("b")));
        assert_eq!(
            render(&t),
            "($x1 & some f: (f: {$xa, $xb} & some f: $x1))"
        );
        assert_eq!(evals, vec!["x1".to_string()]);
    }

    #[test]
    fn eval_vars_are_numbered_post_order() {
        // ~(~a \/ b): inner negation allocates x1, the disjunction x2, the
        // outer negation x3
        let phi = PropFormula::not(PropFormula::or(
            PropFormula::not(PropFormula::var("a")),
            PropFormula::var("b"),
        ));
        let (_, evals) = tau(&phi);
        assert_eq!(evals, vec!["x1", "x2", "x3"]);
    }

    #[test]
    fn delta_covers_all_variables() {
        let phi = PropFormula::or(PropFormula::var("a"), PropFormula::var("b"));
        let d = delta(&phi).unwrap();
        let rendered = render(&d);
        assert_eq!(
            rendered,
            "(((f: {#true, #false} & some f: $xa) & some f: $xb) & some f: $x1)"
        );
        // one some-f conjunct per propositional variable and per eval var
        assert_eq!(rendered.matches("some f:").count(), 3);
    }

    #[test]
    fn encode_shape() {
        let e = encode(&PropFormula::var("a")).unwrap();
        assert_eq!(
            render(&e.term),
            "(some f: (f: {#true, #false} & some f: $xa) & some f: (#true & $xa))"
        );
        assert_eq!(e.var_map["a"], "xa");
        assert!(e.eval_vars.is_empty());
    }

    #[test]
    fn clausify_is_identity_on_cnf_and_equisatisfiable_otherwise() {
        let cnf = parse_prop("(a \\/ ~b) /\\ b").unwrap();
        assert!(is_cnf(&cnf));
        assert_eq!(clausify(&cnf), cnf);

        for s in [
            "~(a \\/ ~a)",
            "~(a /\\ ~a)",
            "b \\/ (a /\\ ~a)",
            "~(a /\\ b) \\/ (a /\\ b)",
            "~~a",
        ] {
            let phi = parse_prop(s).unwrap();
            let cl = clausify(&phi);
            assert!(is_cnf(&cl), "clausify must produce CNF for `{s}`");
            assert_eq!(
                truth_table_sat(&phi),
                truth_table_sat(&cl),
                "equisatisfiability failed for `{s}`"
            );
        }
    }

    #[test]
    fn reserved_atoms_are_rejected() {
        let err = encode(&PropFormula::var("true")).unwrap_err();
        assert_eq!(err, SatError::ReservedName("true".into()));
    }

    #[test]
    fn truth_table_basics() {
        let a = PropFormula::var("a");
        let taut = PropFormula::or(a.clone(), PropFormula::not(a.clone()));
        let contra = PropFormula::and(a.clone(), PropFormula::not(a.clone()));
        assert_eq!(truth_table_sat(&taut), Ok(true));
        assert_eq!(truth_table_sat(&contra), Ok(false));
        // xor of two variables is satisfiable
        let b = PropFormula::var("b");
        let xor = PropFormula::and(
            PropFormula::or(a.clone(), b.clone()),
            PropFormula::or(PropFormula::not(a), PropFormula::not(b)),
        );
        assert_eq!(truth_table_sat(&xor), Ok(true));
    }

    #[test]
    fn parses_ascii_connectives() {
        let f = parse_prop("(a \\/ ~a)").unwrap();
        assert_eq!(
            f,
            PropFormula::or(PropFormula::var("a"), PropFormula::not(PropFormula::var("a")))
        );
        let f = parse_prop("a /\\ b \\/ c").unwrap();
        // /\ binds tighter
        assert_eq!(
            f,
            PropFormula::or(
                PropFormula::and(PropFormula::var("a"), PropFormula::var("b")),
                PropFormula::var("c")
            )
        );
    }

    #[test]
    fn parses_dimacs() {
        let f = parse_dimacs("c comment\np cnf 2 2\n1 -2 0\n2 0\n").unwrap();
        assert_eq!(
            f,
            PropFormula::and(
                PropFormula::or(
                    PropFormula::var("p1"),
                    PropFormula::not(PropFormula::var("p2"))
                ),
                PropFormula::var("p2")
            )
        );
    }
}
