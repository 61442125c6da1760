//! Signatures: the alphabet a term is written over.
//!
//! A signature declares five pairwise-disjoint name spaces: variables,
//! relation symbols, constants, atoms and primitive concepts. The two
//! distinguished concepts [`TOP`] and [`BOT`] are always present.

use std::collections::BTreeSet;

use thiserror::Error;

/// The universal concept, denoting the whole universe.
pub const TOP: &str = "Top";
/// The empty concept, denoting the empty set.
pub const BOT: &str = "Bot";

/// Which name space a name belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NameKind {
    Variable,
    Relation,
    Constant,
    Atom,
    Concept,
}

impl std::fmt::Display for NameKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NameKind::Variable => "variable",
            NameKind::Relation => "relation",
            NameKind::Constant => "constant",
            NameKind::Atom => "atom",
            NameKind::Concept => "concept",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigError {
    /// A name was re-declared under a different kind.
    #[error("name `{name}` is already declared as a {have}, cannot redeclare as a {want}")]
    KindClash {
        name: String,
        have: NameKind,
        want: NameKind,
    },
}

/// The alphabet: five disjoint sets of names.
///
/// `Top` and `Bot` are pre-declared concepts and cannot be removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    variables: BTreeSet<String>,
    relations: BTreeSet<String>,
    constants: BTreeSet<String>,
    atoms: BTreeSet<String>,
    concepts: BTreeSet<String>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        let mut concepts = BTreeSet::new();
        concepts.insert(TOP.to_string());
        concepts.insert(BOT.to_string());
        Signature {
            variables: BTreeSet::new(),
            relations: BTreeSet::new(),
            constants: BTreeSet::new(),
            atoms: BTreeSet::new(),
            concepts,
        }
    }

    /// Declare `name` under `kind`. Re-declaring under the same kind is a
    /// no-op; under a different kind it is an error.
    pub fn declare(&mut self, kind: NameKind, name: &str) -> Result<(), SigError> {
        if let Some(have) = self.kind_of(name) {
            if have != kind {
                return Err(SigError::KindClash {
                    name: name.to_string(),
                    have,
                    want: kind,
                });
            }
            return Ok(());
        }
        self.set_of_mut(kind).insert(name.to_string());
        Ok(())
    }

    pub fn kind_of(&self, name: &str) -> Option<NameKind> {
        if self.variables.contains(name) {
            Some(NameKind::Variable)
        } else if self.relations.contains(name) {
            Some(NameKind::Relation)
        } else if self.constants.contains(name) {
            Some(NameKind::Constant)
        } else if self.atoms.contains(name) {
            Some(NameKind::Atom)
        } else if self.concepts.contains(name) {
            Some(NameKind::Concept)
        } else {
            None
        }
    }

    pub fn is_declared(&self, kind: NameKind, name: &str) -> bool {
        self.set_of(kind).contains(name)
    }

    pub fn variables(&self) -> &BTreeSet<String> {
        &self.variables
    }
    pub fn relations(&self) -> &BTreeSet<String> {
        &self.relations
    }
    pub fn constants(&self) -> &BTreeSet<String> {
        &self.constants
    }
    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }
    pub fn concepts(&self) -> &BTreeSet<String> {
        &self.concepts
    }

    fn set_of(&self, kind: NameKind) -> &BTreeSet<String> {
        match kind {
            NameKind::Variable => &self.variables,
            NameKind::Relation => &self.relations,
            NameKind::Constant => &self.constants,
            NameKind::Atom => &self.atoms,
            NameKind::Concept => &self.concepts,
        }
    }

    fn set_of_mut(&mut self, kind: NameKind) -> &mut BTreeSet<String> {
        match kind {
            NameKind::Variable => &mut self.variables,
            NameKind::Relation => &mut self.relations,
            NameKind::Constant => &mut self.constants,
            NameKind::Atom => &mut self.atoms,
            NameKind::Concept => &mut self.concepts,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_and_bot_are_predeclared() {
        let sig = Signature::new();
        assert_eq!(sig.kind_of(TOP), Some(NameKind::Concept));
        assert_eq!(sig.kind_of(BOT), Some(NameKind::Concept));
    }

    #[test]
    fn name_spaces_are_disjoint() {
        let mut sig = Signature::new();
        sig.declare(NameKind::Atom, "a").unwrap();
        let err = sig.declare(NameKind::Relation, "a").unwrap_err();
        assert_eq!(
            err,
            SigError::KindClash {
                name: "a".into(),
                have: NameKind::Atom,
                want: NameKind::Relation,
            }
        );
        // same kind again is fine
        sig.declare(NameKind::Atom, "a").unwrap();
    }
}
