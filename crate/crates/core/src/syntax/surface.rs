//! Surface syntax: the core constructors plus the usual abbreviations, and
//! their expansion into core form.

use super::{CardRestriction, Concept, Count, Name, Role};

/// A concept as written, before abbreviations are expanded.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SurfaceConcept {
    Atomic(Name),
    Nominal(Name),
    Top,
    Bottom,
    Not(Box<SurfaceConcept>),
    And(Box<SurfaceConcept>, Box<SurfaceConcept>),
    Or(Box<SurfaceConcept>, Box<SurfaceConcept>),
    Implies(Box<SurfaceConcept>, Box<SurfaceConcept>),
    AtLeast(Count, Role, Box<SurfaceConcept>),
    AtMost(Count, Role, Box<SurfaceConcept>),
    Exactly(Count, Role, Box<SurfaceConcept>),
    Exists(Role, Box<SurfaceConcept>),
    Forall(Role, Box<SurfaceConcept>),
}

/// A cardinality restriction as written, including the `(∀ C)` form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SurfaceRestriction {
    AtLeast(Count, SurfaceConcept),
    AtMost(Count, SurfaceConcept),
    All(SurfaceConcept),
}

/// Rewrites every abbreviation into core constructors:
///
/// | sugar       | core                          |
/// |-------------|-------------------------------|
/// | `⊥`         | `¬⊤`                          |
/// | `C ⊔ D`     | `¬(¬C ⊓ ¬D)`                  |
/// | `C → D`     | `¬(C ⊓ ¬D)`                   |
/// | `(≤ n S C)` | `¬(≥ n+1 S C)`                |
/// | `(= n S C)` | `(≤ n S C) ⊓ (≥ n S C)`       |
/// | `∃S.C`      | `(≥ 1 S C)`                   |
/// | `∀S.C`      | `¬(≥ 1 S ¬C)`                 |
pub fn expand_abbreviations(surface: &SurfaceConcept) -> Concept {
    use SurfaceConcept as S;
    match surface {
        S::Atomic(a) => Concept::Atomic(a.clone()),
        S::Nominal(o) => Concept::Nominal(o.clone()),
        S::Top => Concept::Top,
        S::Bottom => Concept::bottom(),
        S::Not(c) => !expand_abbreviations(c),
        S::And(a, b) => expand_abbreviations(a) & expand_abbreviations(b),
        S::Or(a, b) => expand_abbreviations(a) | expand_abbreviations(b),
        S::Implies(a, b) => Concept::implies(expand_abbreviations(a), expand_abbreviations(b)),
        S::AtLeast(n, r, c) => Concept::at_least(n.clone(), r.clone(), expand_abbreviations(c)),
        S::AtMost(n, r, c) => Concept::at_most(n.clone(), r.clone(), expand_abbreviations(c)),
        S::Exactly(n, r, c) => Concept::exactly(n.clone(), r.clone(), expand_abbreviations(c)),
        S::Exists(r, c) => Concept::exists(r.clone(), expand_abbreviations(c)),
        S::Forall(r, c) => Concept::forall(r.clone(), expand_abbreviations(c)),
    }
}

pub fn expand_restriction(surface: &SurfaceRestriction) -> CardRestriction {
    match surface {
        SurfaceRestriction::AtLeast(n, c) => CardRestriction::at_least(n.clone(), expand_abbreviations(c)),
        SurfaceRestriction::AtMost(n, c) => CardRestriction::at_most(n.clone(), expand_abbreviations(c)),
        SurfaceRestriction::All(c) => CardRestriction::all(expand_abbreviations(c)),
    }
}

/// Core concepts embed into the surface language unchanged.
impl From<&Concept> for SurfaceConcept {
    fn from(c: &Concept) -> Self {
        match c {
            Concept::Atomic(a) => SurfaceConcept::Atomic(a.clone()),
            Concept::Nominal(o) => SurfaceConcept::Nominal(o.clone()),
            Concept::Top => SurfaceConcept::Top,
            Concept::Not(d) => SurfaceConcept::Not(Box::new(d.as_ref().into())),
            Concept::And(a, b) => SurfaceConcept::And(Box::new(a.as_ref().into()), Box::new(b.as_ref().into())),
            Concept::AtLeast(n, r, d) => SurfaceConcept::AtLeast(n.clone(), r.clone(), Box::new(d.as_ref().into())),
        }
    }
}
