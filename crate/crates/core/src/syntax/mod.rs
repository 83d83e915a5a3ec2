//! Concepts, roles, cardinality restrictions and inclusion axioms.
//!
//! The [`Concept`] type is the *core* form: atomic names, nominals, `top`,
//! negation, binary conjunction and qualifying at-least restrictions. All
//! other constructors (`|`, `->`, `bot`, `atmost`, `exactly`, `exists`,
//! `forall`) exist only as [`SurfaceConcept`] sugar and as builder functions
//! that produce core terms.

mod parse;
mod render;
mod size;
mod surface;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not};
use std::sync::Arc;

use num_bigint::BigUint;

pub use parse::{parse_concept, parse_surface_concept, parse_tbox, SyntaxError};
pub use size::{concept_node_count, concept_size, node_count, tbox_size, Coding};
pub use surface::{expand_abbreviations, expand_restriction, SurfaceConcept, SurfaceRestriction};

/// Arbitrary-precision natural used for every numeric bound.
pub type Count = BigUint;

/// Words of the concept grammar that can never be names.
pub(crate) const KEYWORDS: &[&str] = &["top", "bot", "not", "atleast", "atmost", "exactly", "exists", "forall", "inv"];

/// A concept, role or individual name: a nonempty word over `[A-Za-z0-9_]`
/// that is neither all digits nor a grammar keyword.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NameError {
    #[error("empty name")]
    Empty,
    #[error("`{0}` contains a character outside [A-Za-z0-9_]")]
    BadCharacter(String),
    #[error("`{0}` is a number, not a name")]
    Numeric(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
}

impl Name {
    pub fn new(text: &str) -> Result<Self, NameError> {
        if text.is_empty() {
            return Err(NameError::Empty);
        }
        if !text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(NameError::BadCharacter(text.to_owned()));
        }
        if text.chars().all(|c| c.is_ascii_digit()) {
            return Err(NameError::Numeric(text.to_owned()));
        }
        if KEYWORDS.contains(&text) {
            return Err(NameError::Reserved(text.to_owned()));
        }
        Ok(Name(Arc::from(text)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl TryFrom<&str> for Name {
    type Error = NameError;
    fn try_from(value: &str) -> Result<Self, Self::Error> {
        Name::new(value)
    }
}

/// Builds a name from text known to be valid.
///
/// Panics on an invalid identifier; use [`Name::new`] for untrusted input.
pub fn name(text: &str) -> Name {
    Name::new(text).unwrap_or_else(|e| panic!("invalid name: {e}"))
}

/// A role name or its inverse. The single flag makes `R⁻¹⁻¹` unrepresentable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Role {
    pub name: Name,
    pub inverse: bool,
}

impl Role {
    pub fn named(role: &str) -> Self {
        Role { name: name(role), inverse: false }
    }

    pub fn inverse_of(role: &str) -> Self {
        Role { name: name(role), inverse: true }
    }

    /// The converse role; `S⁻¹` of an inverse is the plain name again.
    pub fn inverse(&self) -> Self {
        Role { name: self.name.clone(), inverse: !self.inverse }
    }
}

impl From<Name> for Role {
    fn from(name: Name) -> Self {
        Role { name, inverse: false }
    }
}

/// A core ALCQIO concept.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Concept {
    Atomic(Name),
    Nominal(Name),
    Top,
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    AtLeast(Count, Role, Box<Concept>),
}

impl Concept {
    pub fn atom(concept: &str) -> Self {
        Concept::Atomic(name(concept))
    }

    pub fn nominal(individual: &str) -> Self {
        Concept::Nominal(name(individual))
    }

    pub fn at_least(n: impl Into<Count>, role: Role, filler: Concept) -> Self {
        Concept::AtLeast(n.into(), role, Box::new(filler))
    }

    /// `⊥`, i.e. `¬⊤`.
    pub fn bottom() -> Self {
        !Concept::Top
    }

    /// `C → D`, expanded to `¬(C ⊓ ¬D)`.
    pub fn implies(lhs: Concept, rhs: Concept) -> Self {
        !(lhs & !rhs)
    }

    /// `(≤ n S C) = ¬(≥ n+1 S C)`.
    pub fn at_most(n: impl Into<Count>, role: Role, filler: Concept) -> Self {
        let n: Count = n.into();
        !Concept::at_least(n + 1u32, role, filler)
    }

    /// `(= n S C) = (≤ n S C) ⊓ (≥ n S C)`.
    pub fn exactly(n: impl Into<Count>, role: Role, filler: Concept) -> Self {
        let n: Count = n.into();
        Concept::at_most(n.clone(), role.clone(), filler.clone()) & Concept::at_least(n, role, filler)
    }

    /// `∃S.C = (≥ 1 S C)`.
    pub fn exists(role: Role, filler: Concept) -> Self {
        Concept::at_least(1u32, role, filler)
    }

    /// `∀S.C = (≤ 0 S ¬C) = ¬(≥ 1 S ¬C)`.
    pub fn forall(role: Role, filler: Concept) -> Self {
        Concept::at_most(0u32, role, !filler)
    }

    /// Right-nested conjunction; the empty conjunction is `⊤`.
    pub fn conjunction(items: impl IntoIterator<Item = Concept>) -> Self {
        let mut items: Vec<Concept> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Concept::Top;
        };
        while let Some(c) = items.pop() {
            acc = c & acc;
        }
        acc
    }

    /// Right-nested disjunction; the empty disjunction is `¬⊤`.
    pub fn disjunction(items: impl IntoIterator<Item = Concept>) -> Self {
        let mut items: Vec<Concept> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Concept::bottom();
        };
        while let Some(c) = items.pop() {
            acc = c | acc;
        }
        acc
    }

    pub fn contains_nominal(&self) -> bool {
        match self {
            Concept::Nominal(_) => true,
            Concept::Atomic(_) | Concept::Top => false,
            Concept::Not(c) => c.contains_nominal(),
            Concept::And(a, b) => a.contains_nominal() || b.contains_nominal(),
            Concept::AtLeast(_, _, c) => c.contains_nominal(),
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        sig.add_concept(self);
        sig
    }

    /// All subconcepts, including `self`, in pre-order.
    pub fn subconcepts(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            out.push(c);
            match c {
                Concept::Not(d) | Concept::AtLeast(_, _, d) => stack.push(d),
                Concept::And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                _ => {}
            }
        }
        out
    }
}

impl Not for Concept {
    type Output = Concept;
    fn not(self) -> Concept {
        Concept::Not(Box::new(self))
    }
}

impl BitAnd for Concept {
    type Output = Concept;
    fn bitand(self, rhs: Concept) -> Concept {
        Concept::And(Box::new(self), Box::new(rhs))
    }
}

/// `C ⊔ D`, expanded to `¬(¬C ⊓ ¬D)`.
impl BitOr for Concept {
    type Output = Concept;
    fn bitor(self, rhs: Concept) -> Concept {
        !(!self & !rhs)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CardKind {
    AtLeast,
    AtMost,
}

/// A global cardinality restriction `(≥ n C)` or `(≤ n C)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CardRestriction {
    pub kind: CardKind,
    pub bound: Count,
    pub concept: Concept,
}

impl CardRestriction {
    pub fn at_least(bound: impl Into<Count>, concept: Concept) -> Self {
        CardRestriction { kind: CardKind::AtLeast, bound: bound.into(), concept }
    }

    pub fn at_most(bound: impl Into<Count>, concept: Concept) -> Self {
        CardRestriction { kind: CardKind::AtMost, bound: bound.into(), concept }
    }

    /// `(∀ C)`, i.e. `(≤ 0 ¬C)`.
    pub fn all(concept: Concept) -> Self {
        CardRestriction::at_most(0u32, !concept)
    }
}

/// A general concept inclusion `lhs ⊑ rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gci {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Gci {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Gci { lhs, rhs }
    }
}

/// A finite set of cardinality restrictions.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct TcBox {
    restrictions: BTreeSet<CardRestriction>,
}

impl TcBox {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if an equal restriction was already present.
    pub fn insert(&mut self, r: CardRestriction) -> bool {
        self.restrictions.insert(r)
    }

    pub fn len(&self) -> usize {
        self.restrictions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.restrictions.is_empty()
    }

    pub fn contains(&self, r: &CardRestriction) -> bool {
        self.restrictions.contains(r)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CardRestriction> {
        self.restrictions.iter()
    }

    /// Members sorted by their rendered text. Every construction that numbers
    /// restrictions uses this order.
    pub fn canonical(&self) -> Vec<&CardRestriction> {
        let mut keyed: Vec<(String, &CardRestriction)> = self.restrictions.iter().map(|r| (r.to_string(), r)).collect();
        keyed.sort();
        keyed.into_iter().map(|(_, r)| r).collect()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for r in &self.restrictions {
            sig.add_concept(&r.concept);
        }
        sig
    }

    pub fn union(&self, other: &TcBox) -> TcBox {
        self.iter().chain(other.iter()).cloned().collect()
    }
}

impl FromIterator<CardRestriction> for TcBox {
    fn from_iter<I: IntoIterator<Item = CardRestriction>>(iter: I) -> Self {
        TcBox { restrictions: iter.into_iter().collect() }
    }
}

impl Extend<CardRestriction> for TcBox {
    fn extend<I: IntoIterator<Item = CardRestriction>>(&mut self, iter: I) {
        self.restrictions.extend(iter)
    }
}

/// A finite set of general concept inclusions.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct TiBox {
    axioms: BTreeSet<Gci>,
}

impl TiBox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: Gci) -> bool {
        self.axioms.insert(g)
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn contains(&self, g: &Gci) -> bool {
        self.axioms.contains(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Gci> {
        self.axioms.iter()
    }

    /// Axioms sorted by rendered text.
    pub fn canonical(&self) -> Vec<&Gci> {
        let mut keyed: Vec<(String, &Gci)> = self.axioms.iter().map(|g| (g.to_string(), g)).collect();
        keyed.sort();
        keyed.into_iter().map(|(_, g)| g).collect()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for g in &self.axioms {
            sig.add_concept(&g.lhs);
            sig.add_concept(&g.rhs);
        }
        sig
    }
}

impl FromIterator<Gci> for TiBox {
    fn from_iter<I: IntoIterator<Item = Gci>>(iter: I) -> Self {
        TiBox { axioms: iter.into_iter().collect() }
    }
}

impl Extend<Gci> for TiBox {
    fn extend<I: IntoIterator<Item = Gci>>(&mut self, iter: I) {
        self.axioms.extend(iter)
    }
}

/// Either kind of terminology, as read from a TBox file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TBox {
    Card(TcBox),
    Incl(TiBox),
}

impl TBox {
    pub fn as_ref(&self) -> TBoxRef<'_> {
        match self {
            TBox::Card(t) => TBoxRef::Card(t),
            TBox::Incl(t) => TBoxRef::Incl(t),
        }
    }

    pub fn signature(&self) -> Signature {
        self.as_ref().signature()
    }
}

impl From<TcBox> for TBox {
    fn from(t: TcBox) -> Self {
        TBox::Card(t)
    }
}

impl From<TiBox> for TBox {
    fn from(t: TiBox) -> Self {
        TBox::Incl(t)
    }
}

/// Borrowed view of either TBox kind; the argument type of the model checker
/// and the model finder.
#[derive(Clone, Copy, Debug)]
pub enum TBoxRef<'a> {
    Card(&'a TcBox),
    Incl(&'a TiBox),
}

impl TBoxRef<'_> {
    pub fn signature(&self) -> Signature {
        match self {
            TBoxRef::Card(t) => t.signature(),
            TBoxRef::Incl(t) => t.signature(),
        }
    }
}

impl<'a> From<&'a TcBox> for TBoxRef<'a> {
    fn from(t: &'a TcBox) -> Self {
        TBoxRef::Card(t)
    }
}

impl<'a> From<&'a TiBox> for TBoxRef<'a> {
    fn from(t: &'a TiBox) -> Self {
        TBoxRef::Incl(t)
    }
}

impl<'a> From<&'a TBox> for TBoxRef<'a> {
    fn from(t: &'a TBox) -> Self {
        t.as_ref()
    }
}

/// The names occurring in a concept or terminology, by kind.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Signature {
    pub concepts: BTreeSet<Name>,
    pub roles: BTreeSet<Name>,
    pub individuals: BTreeSet<Name>,
}

impl Signature {
    pub fn add_concept(&mut self, c: &Concept) {
        for sub in c.subconcepts() {
            match sub {
                Concept::Atomic(a) => {
                    self.concepts.insert(a.clone());
                }
                Concept::Nominal(o) => {
                    self.individuals.insert(o.clone());
                }
                Concept::AtLeast(_, r, _) => {
                    self.roles.insert(r.name.clone());
                }
                _ => {}
            }
        }
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
        self.individuals.extend(other.individuals.iter().cloned());
    }

    pub fn contains(&self, n: &Name) -> bool {
        self.concepts.contains(n) || self.roles.contains(n) || self.individuals.contains(n)
    }

    /// Names used as more than one kind of symbol.
    pub fn clashes(&self) -> Vec<Name> {
        let mut out: BTreeSet<Name> = BTreeSet::new();
        out.extend(self.concepts.intersection(&self.roles).cloned());
        out.extend(self.concepts.intersection(&self.individuals).cloned());
        out.extend(self.roles.intersection(&self.individuals).cloned());
        out.into_iter().collect()
    }

    /// A name derived from `base` that occurs neither here nor in `taken`.
    /// Collisions are resolved by appending underscores.
    pub fn fresh(&self, base: &str, taken: &BTreeSet<Name>) -> Name {
        let mut candidate = base.to_owned();
        loop {
            let n = name(&candidate);
            if !self.contains(&n) && !taken.contains(&n) {
                return n;
            }
            candidate.push('_');
        }
    }
}
