//! Finite interpretations and the model-theoretic ground truth.
//!
//! Domains are initial segments `{0, …, m-1}` with `m ≥ 1`. Concept and role
//! names that an interpretation does not mention denote the empty set; a
//! nominal that it does not mention is an error.

mod element_set;
mod format;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::syntax::{CardKind, CardRestriction, Concept, Gci, Name, TBoxRef};

pub use element_set::ElementSet;
pub use format::ParseInterpretationError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("interpretations need a nonempty domain")]
    EmptyDomain,
    #[error("element {element} of `{name}` is outside the domain of size {size}")]
    OutOfRange { name: Name, element: usize, size: usize },
    #[error("nominal `{0}` is not interpreted")]
    UninterpretedNominal(Name),
    #[error("`{0}` is already interpreted as a different kind of symbol")]
    KindClash(Name),
}

/// A finite interpretation over the domain `{0, …, size-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interpretation {
    size: usize,
    concepts: BTreeMap<Name, ElementSet>,
    roles: BTreeMap<Name, BTreeSet<(usize, usize)>>,
    nominals: BTreeMap<Name, usize>,
}

impl Interpretation {
    pub fn new(size: usize) -> Result<Self, SemanticsError> {
        if size == 0 {
            return Err(SemanticsError::EmptyDomain);
        }
        Ok(Interpretation { size, concepts: BTreeMap::new(), roles: BTreeMap::new(), nominals: BTreeMap::new() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn domain(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    fn check(&self, name: &Name, element: usize) -> Result<(), SemanticsError> {
        if element >= self.size {
            return Err(SemanticsError::OutOfRange { name: name.clone(), element, size: self.size });
        }
        Ok(())
    }

    fn check_kind(&self, name: &Name, slot: Slot) -> Result<(), SemanticsError> {
        let clash = (slot != Slot::Concept && self.concepts.contains_key(name))
            || (slot != Slot::Role && self.roles.contains_key(name))
            || (slot != Slot::Nominal && self.nominals.contains_key(name));
        if clash {
            Err(SemanticsError::KindClash(name.clone()))
        } else {
            Ok(())
        }
    }

    /// Sets the extension of a concept name, replacing any previous one.
    pub fn set_concept(&mut self, name: Name, elements: impl IntoIterator<Item = usize>) -> Result<(), SemanticsError> {
        self.check_kind(&name, Slot::Concept)?;
        let mut set = ElementSet::empty(self.size);
        for e in elements {
            self.check(&name, e)?;
            set.insert(e);
        }
        self.concepts.insert(name, set);
        Ok(())
    }

    /// Sets the extension of a role name, replacing any previous one.
    pub fn set_role(
        &mut self,
        name: Name,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(), SemanticsError> {
        self.check_kind(&name, Slot::Role)?;
        let mut rel = BTreeSet::new();
        for (a, b) in pairs {
            self.check(&name, a)?;
            self.check(&name, b)?;
            rel.insert((a, b));
        }
        self.roles.insert(name, rel);
        Ok(())
    }

    pub fn set_nominal(&mut self, name: Name, element: usize) -> Result<(), SemanticsError> {
        self.check_kind(&name, Slot::Nominal)?;
        self.check(&name, element)?;
        self.nominals.insert(name, element);
        Ok(())
    }

    pub fn concept(&self, name: &Name) -> Option<&ElementSet> {
        self.concepts.get(name)
    }

    pub fn role(&self, name: &Name) -> Option<&BTreeSet<(usize, usize)>> {
        self.roles.get(name)
    }

    pub fn nominal(&self, name: &Name) -> Option<usize> {
        self.nominals.get(name).copied()
    }

    pub fn concepts(&self) -> impl Iterator<Item = (&Name, &ElementSet)> {
        self.concepts.iter()
    }

    pub fn roles(&self) -> impl Iterator<Item = (&Name, &BTreeSet<(usize, usize)>)> {
        self.roles.iter()
    }

    pub fn nominals(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.nominals.iter().map(|(n, &e)| (n, e))
    }

    /// Drops the interpretation of a name, whatever its kind.
    pub fn remove(&mut self, name: &Name) {
        self.concepts.remove(name);
        self.roles.remove(name);
        self.nominals.remove(name);
    }

    /// The substructure induced by `keep`, renumbered in ascending order.
    /// Returns `None` if `keep` is empty or drops the element of a nominal.
    pub fn restrict(&self, keep: &ElementSet) -> Option<Interpretation> {
        let kept: Vec<usize> = keep.iter().filter(|&e| e < self.size).collect();
        if kept.is_empty() {
            return None;
        }
        let index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut out = Interpretation::new(kept.len()).ok()?;
        for (n, set) in &self.concepts {
            out.concepts.insert(n.clone(), set.iter().filter_map(|e| index.get(&e).copied()).collect_in(kept.len()));
        }
        for (n, rel) in &self.roles {
            let pairs = rel.iter().filter_map(|(a, b)| Some((*index.get(a)?, *index.get(b)?))).collect();
            out.roles.insert(n.clone(), pairs);
        }
        for (n, e) in &self.nominals {
            out.nominals.insert(n.clone(), *index.get(e)?);
        }
        Some(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Concept,
    Role,
    Nominal,
}

trait CollectIn {
    fn collect_in(self, size: usize) -> ElementSet;
}

impl<I: Iterator<Item = usize>> CollectIn for I {
    fn collect_in(self, size: usize) -> ElementSet {
        let mut s = ElementSet::empty(size);
        for e in self {
            s.insert(e);
        }
        s
    }
}

/// The extension `C^I` of a concept.
pub fn extension(i: &Interpretation, c: &Concept) -> Result<ElementSet, SemanticsError> {
    let m = i.size;
    Ok(match c {
        Concept::Atomic(a) => i.concepts.get(a).cloned().unwrap_or_else(|| ElementSet::empty(m)),
        Concept::Nominal(o) => {
            let e = i.nominal(o).ok_or_else(|| SemanticsError::UninterpretedNominal(o.clone()))?;
            std::iter::once(e).collect_in(m)
        }
        Concept::Top => ElementSet::full(m),
        Concept::Not(d) => extension(i, d)?.complement(),
        Concept::And(a, b) => {
            let mut s = extension(i, a)?;
            s.intersect_with(&extension(i, b)?);
            s
        }
        Concept::AtLeast(n, role, d) => {
            let filler = extension(i, d)?;
            let mut counts = vec![0usize; m];
            if let Some(rel) = i.roles.get(&role.name) {
                for &(a, b) in rel {
                    // a ∈ (≥ n R C) counts R-successors b; a ∈ (≥ n R⁻¹ C) counts R-predecessors.
                    let (from, to) = if role.inverse { (b, a) } else { (a, b) };
                    if filler.contains(to) {
                        counts[from] += 1;
                    }
                }
            }
            counts.iter().enumerate().filter(|(_, &k)| BigUint::from(k) >= *n).map(|(e, _)| e).collect_in(m)
        }
    })
}

pub fn satisfies_card(i: &Interpretation, r: &CardRestriction) -> Result<bool, SemanticsError> {
    let size = BigUint::from(extension(i, &r.concept)?.len());
    Ok(match r.kind {
        CardKind::AtLeast => size >= r.bound,
        CardKind::AtMost => size <= r.bound,
    })
}

pub fn satisfies_gci(i: &Interpretation, g: &Gci) -> Result<bool, SemanticsError> {
    Ok(extension(i, &g.lhs)?.is_subset(&extension(i, &g.rhs)?))
}

/// `I ⊨ T`: every member of the terminology holds.
pub fn is_model<'a>(i: &Interpretation, t: impl Into<TBoxRef<'a>>) -> Result<bool, SemanticsError> {
    match t.into() {
        TBoxRef::Card(t) => {
            for r in t.iter() {
                if !satisfies_card(i, r)? {
                    return Ok(false);
                }
            }
        }
        TBoxRef::Incl(t) => {
            for g in t.iter() {
                if !satisfies_gci(i, g)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
