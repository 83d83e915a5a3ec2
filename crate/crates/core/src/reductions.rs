//! Translations between cardinality restrictions, nominals and concept
//! satisfiability.
//!
//! - [`phi`] replaces every cardinality restriction by GCIs over fresh
//!   nominals (`_phi_i_j`).
//! - [`singleton_cardinalities`] goes the other way, replacing each nominal
//!   `o` by an atomic concept `A_o` forced to have exactly one instance.
//! - [`internalise`] reduces consistency of a T_I Box to satisfiability of a
//!   single concept, using a fresh "spy" role `_spy` and individual `_i`.
//!
//! All fresh names get underscores appended if they would clash with a
//! source name.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;

use crate::semantics::Interpretation;
use crate::syntax::{CardKind, CardRestriction, Concept, Gci, Name, Role, TcBox, TiBox};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("`{0}` is not fresh")]
    NotFresh(Name),
}

/// The fresh nominals introduced by [`phi`], keyed by the 1-based position of
/// the source restriction in canonical order (after `(≥ 0 C)` members have
/// been dropped).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NominalLedger {
    entries: BTreeMap<usize, (CardRestriction, Vec<Name>)>,
}

impl NominalLedger {
    pub fn nominals(&self, index: usize) -> Option<&[Name]> {
        self.entries.get(&index).map(|(_, ns)| ns.as_slice())
    }

    pub fn restriction(&self, index: usize) -> Option<&CardRestriction> {
        self.entries.get(&index).map(|(r, _)| r)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CardRestriction, &[Name])> {
        self.entries.iter().map(|(&i, (r, ns))| (i, r, ns.as_slice()))
    }

    pub fn all_nominals(&self) -> BTreeSet<Name> {
        self.entries.values().flat_map(|(_, ns)| ns.iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Rewrites a T_C Box into an equiconsistent T_I Box.
///
/// `(≤ n C)` becomes `C ⊑ o¹ ⊔ … ⊔ oⁿ`, and `(≥ n C)` becomes
/// `oʲ ⊑ C` for each `j` together with pairwise `oʲ ⊑ ¬oˡ`. The output is
/// linear in the unary size for `≤` and quadratic in `n` for `≥`.
///
/// Panics if a bound does not fit in `usize`; the output would not fit in
/// memory anyway.
pub fn phi(t: &TcBox) -> (TiBox, NominalLedger) {
    let sig = t.signature();
    let mut taken = BTreeSet::new();
    let mut out = TiBox::new();
    let mut ledger = NominalLedger::default();
    let kept = t.canonical().into_iter().filter(|r| !(r.kind == CardKind::AtLeast && r.bound == 0u32.into()));
    for (k, r) in kept.enumerate() {
        let index = k + 1;
        let n = r.bound.to_usize().expect("bound too large to unfold");
        let fresh: Vec<Name> = (1..=n)
            .map(|j| {
                let o = sig.fresh(&format!("_phi_{index}_{j}"), &taken);
                taken.insert(o.clone());
                o
            })
            .collect();
        let noms: Vec<Concept> = fresh.iter().map(|o| Concept::Nominal(o.clone())).collect();
        match r.kind {
            CardKind::AtMost => {
                out.insert(Gci::new(r.concept.clone(), Concept::disjunction(noms)));
            }
            CardKind::AtLeast => {
                for (j, oj) in noms.iter().enumerate() {
                    out.insert(Gci::new(oj.clone(), r.concept.clone()));
                    for ol in &noms[j + 1..] {
                        out.insert(Gci::new(oj.clone(), !ol.clone()));
                    }
                }
            }
        }
        ledger.entries.insert(index, (r.clone(), fresh));
    }
    (out, ledger)
}

/// The atomic concept standing for each nominal of `t` in
/// [`singleton_cardinalities`].
pub fn nominal_atoms(t: &TiBox) -> BTreeMap<Name, Name> {
    let sig = t.signature();
    let mut taken = BTreeSet::new();
    sig.individuals
        .iter()
        .map(|o| {
            let a = sig.fresh(&format!("A_{o}"), &taken);
            taken.insert(a.clone());
            (o.clone(), a)
        })
        .collect()
}

fn replace_nominals(c: &Concept, atoms: &BTreeMap<Name, Name>) -> Concept {
    match c {
        Concept::Nominal(o) => Concept::Atomic(atoms[o].clone()),
        Concept::Atomic(_) | Concept::Top => c.clone(),
        Concept::Not(d) => !replace_nominals(d, atoms),
        Concept::And(a, b) => replace_nominals(a, atoms) & replace_nominals(b, atoms),
        Concept::AtLeast(n, r, d) => Concept::AtLeast(n.clone(), r.clone(), Box::new(replace_nominals(d, atoms))),
    }
}

/// Rewrites a T_I Box into a nominal-free T_C Box: `C ⊑ D` becomes
/// `(≤ 0 C ⊓ ¬D)`, and every nominal `o` becomes an atom `A_o` constrained
/// by `(≤ 1 A_o)` and `(≥ 1 A_o)`.
pub fn singleton_cardinalities(t: &TiBox) -> TcBox {
    let atoms = nominal_atoms(t);
    let mut out = TcBox::new();
    for g in t.iter() {
        let c = replace_nominals(&g.lhs, &atoms) & !replace_nominals(&g.rhs, &atoms);
        out.insert(CardRestriction::at_most(0u32, c));
    }
    for a in atoms.values() {
        out.insert(CardRestriction::at_most(1u32, Concept::Atomic(a.clone())));
        out.insert(CardRestriction::at_least(1u32, Concept::Atomic(a.clone())));
    }
    out
}

/// The fresh role and individual used by [`internalise`] for a given box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpyNames {
    pub spy: Name,
    pub individual: Name,
}

pub fn spy_names(t: &TiBox) -> SpyNames {
    let sig = t.signature();
    let spy = sig.fresh("_spy", &BTreeSet::new());
    let individual = sig.fresh("_i", &[spy.clone()].into());
    SpyNames { spy, individual }
}

fn spy_filter(names: &SpyNames) -> Concept {
    Concept::at_least(1u32, Role::from(names.spy.clone()).inverse(), Concept::Nominal(names.individual.clone()))
}

fn rewrite(c: &Concept, filter: &Concept) -> Concept {
    match c {
        Concept::Atomic(_) | Concept::Nominal(_) | Concept::Top => c.clone(),
        Concept::Not(d) => !rewrite(d, filter),
        Concept::And(a, b) => rewrite(a, filter) & rewrite(b, filter),
        Concept::AtLeast(n, r, d) => {
            Concept::AtLeast(n.clone(), r.clone(), Box::new(filter.clone() & rewrite(d, filter)))
        }
    }
}

/// Relativises every number restriction (over role names and inverses alike)
/// to the successors of the spy individual:
/// `(≥ n S D)` becomes `(≥ n S (∃spy⁻.{i} ⊓ D'))`.
pub fn spy_rewrite(c: &Concept, spy: &Name, individual: &Name) -> Result<Concept, ReductionError> {
    let sig = c.signature();
    for n in [spy, individual] {
        if sig.contains(n) {
            return Err(ReductionError::NotFresh(n.clone()));
        }
    }
    let names = SpyNames { spy: spy.clone(), individual: individual.clone() };
    Ok(rewrite(c, &spy_filter(&names)))
}

/// Whether [`internalise_with`] pins each source nominal inside the spy's
/// range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NominalAnchoring {
    /// Add `∃spy.{o}` for every nominal `o` of the box. Required for
    /// soundness when the box mentions nominals.
    On,
    /// The bare construction, which is sound only for nominal-free boxes.
    Off,
}

/// Rewrites each GCI `C ⊑ D` into `⊤ ⊑ (C → D)`; GCIs with `⊤` on the left
/// are kept as they are. Results come in canonical order of the source.
pub fn normalise(t: &TiBox) -> Vec<Concept> {
    t.canonical()
        .into_iter()
        .map(|g| if g.lhs == Concept::Top { g.rhs.clone() } else { Concept::implies(g.lhs.clone(), g.rhs.clone()) })
        .collect()
}

/// A concept satisfiable iff `t` is consistent:
/// `{i} ⊓ ⨅ Cⱼ' ⊓ ⨅ ∀spy.Cⱼ' ⊓ ⨅ ∃spy.{o}`, with `Cⱼ'` the rewritten
/// normal-form right-hand sides and `o` ranging over the nominals of `t`.
pub fn internalise(t: &TiBox) -> Concept {
    internalise_with(t, NominalAnchoring::On)
}

pub fn internalise_with(t: &TiBox, anchoring: NominalAnchoring) -> Concept {
    let names = spy_names(t);
    let filter = spy_filter(&names);
    let spy = Role::from(names.spy.clone());
    let rewritten: Vec<Concept> = normalise(t).iter().map(|c| rewrite(c, &filter)).collect();
    let mut parts = vec![Concept::Nominal(names.individual.clone())];
    parts.extend(rewritten.iter().cloned());
    parts.extend(rewritten.iter().map(|c| Concept::forall(spy.clone(), c.clone())));
    if anchoring == NominalAnchoring::On {
        let nominals = t.signature().individuals;
        parts.extend(nominals.into_iter().map(|o| Concept::exists(spy.clone(), Concept::Nominal(o))));
    }
    Concept::conjunction(parts)
}

/// Extends a model of the source box so that `point` is the spy individual
/// and has a spy edge to every element (itself included).
pub fn spy_extension(i: &Interpretation, point: usize, names: &SpyNames) -> Interpretation {
    let mut out = i.clone();
    let edges: Vec<(usize, usize)> = i.domain().map(|e| (point, e)).collect();
    out.set_role(names.spy.clone(), edges).expect("point is in the domain");
    out.set_nominal(names.individual.clone(), point).expect("point is in the domain");
    out
}

/// The T_C Box `{(≥ 1 C)}` whose models are exactly those in which `C` is
/// satisfiable.
pub fn satisfiability_box(c: Concept) -> TcBox {
    [CardRestriction::at_least(1u32, c)].into_iter().collect()
}

/// Names used by the reductions that never come from user input.
pub fn is_generated_name(n: &Name) -> bool {
    n.as_str().starts_with('_')
}
