//! Independent oracles shared by the integration tests: an exhaustive
//! interpretation enumerator, a direct semantics for surface syntax, and
//! proptest strategies.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cardred_core::reductions::NominalLedger;
use cardred_core::semantics::{extension, is_model, ElementSet, Interpretation};
use cardred_core::syntax::{name, CardKind, Concept, Name, Role, SurfaceConcept, TBoxRef};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Every interpretation of the given names over a domain of exactly `size`
/// elements. There are `2^(|C|·m + |R|·m²) · m^|N|` of them.
pub fn all_interpretations(size: usize, concepts: &[Name], roles: &[Name], nominals: &[Name]) -> Vec<Interpretation> {
    let bits = concepts.len() * size + roles.len() * size * size;
    assert!(bits < 24, "enumeration too large");
    let placements = size.pow(nominals.len() as u32);
    let mut out = Vec::with_capacity((1 << bits) * placements);
    for mask in 0u64..(1 << bits) {
        for p in 0..placements {
            let mut i = Interpretation::new(size).unwrap();
            let mut k = 0;
            for c in concepts {
                let elems: Vec<usize> = (0..size).filter(|e| mask >> (k + e) & 1 == 1).collect();
                i.set_concept(c.clone(), elems).unwrap();
                k += size;
            }
            for r in roles {
                let pairs: Vec<(usize, usize)> =
                    (0..size * size).filter(|j| mask >> (k + j) & 1 == 1).map(|j| (j / size, j % size)).collect();
                i.set_role(r.clone(), pairs).unwrap();
                k += size * size;
            }
            let mut rest = p;
            for o in nominals {
                i.set_nominal(o.clone(), rest % size).unwrap();
                rest /= size;
            }
            out.push(i);
        }
    }
    out
}

/// All interpretations with `1..=bound` elements.
pub fn all_up_to(bound: usize, concepts: &[Name], roles: &[Name], nominals: &[Name]) -> Vec<Interpretation> {
    (1..=bound).flat_map(|m| all_interpretations(m, concepts, roles, nominals)).collect()
}

/// Consistency within the bound by enumerating every interpretation of the
/// box's signature.
pub fn brute_force_consistent<'a>(t: impl Into<TBoxRef<'a>>, bound: usize, unique_names: bool) -> bool {
    let t = t.into();
    let sig = t.signature();
    let cs: Vec<Name> = sig.concepts.into_iter().collect();
    let rs: Vec<Name> = sig.roles.into_iter().collect();
    let ns: Vec<Name> = sig.individuals.into_iter().collect();
    (1..=bound).any(|m| {
        all_interpretations(m, &cs, &rs, &ns).iter().any(|i| {
            let distinct = i.nominals().map(|(_, e)| e).collect::<BTreeSet<_>>().len() == ns.len();
            (!unique_names || distinct) && is_model(i, t).unwrap()
        })
    })
}

/// The position of `i` in the canonical valuation order: concept bits per
/// element, role bits row-major, then nominal placements, names sorted.
pub fn canonical_key(i: &Interpretation) -> Vec<usize> {
    let mut key = Vec::new();
    for (_, ext) in i.concepts() {
        key.extend(i.domain().map(|e| usize::from(ext.contains(e))));
    }
    for (_, edges) in i.roles() {
        key.extend(i.domain().flat_map(|a| i.domain().map(move |b| (a, b))).map(|p| usize::from(edges.contains(&p))));
    }
    key.extend(i.nominals().map(|(_, e)| e));
    key
}

/// The first model in the canonical search order (smallest domain, then
/// least [`canonical_key`]), found by enumeration.
pub fn brute_force_least_model<'a>(
    t: impl Into<TBoxRef<'a>>,
    bound: usize,
    unique_names: bool,
) -> Option<Interpretation> {
    let t = t.into();
    let sig = t.signature();
    let cs: Vec<Name> = sig.concepts.into_iter().collect();
    let rs: Vec<Name> = sig.roles.into_iter().collect();
    let ns: Vec<Name> = sig.individuals.into_iter().collect();
    (1..=bound).find_map(|m| {
        all_interpretations(m, &cs, &rs, &ns)
            .into_iter()
            .filter(|i| {
                let distinct = i.nominals().map(|(_, e)| e).collect::<BTreeSet<_>>().len() == ns.len();
                (!unique_names || distinct) && is_model(i, t).unwrap()
            })
            .min_by_key(canonical_key)
    })
}

fn set_of(i: &Interpretation, pred: impl Fn(usize) -> bool) -> ElementSet {
    let mut s = ElementSet::empty(i.size());
    for e in i.domain().filter(|&e| pred(e)) {
        s.insert(e);
    }
    s
}

fn successors(i: &Interpretation, r: &Role, a: usize) -> Vec<usize> {
    let edges = i.role(&r.name).cloned().unwrap_or_default();
    i.domain().filter(|&b| if r.inverse { edges.contains(&(b, a)) } else { edges.contains(&(a, b)) }).collect()
}

/// The textbook semantics of the abbreviations, computed directly rather
/// than by expansion.
pub fn surface_extension(i: &Interpretation, c: &SurfaceConcept) -> ElementSet {
    use SurfaceConcept as S;
    let count = |r: &Role, d: &SurfaceConcept, a: usize| {
        let ext = surface_extension(i, d);
        successors(i, r, a).into_iter().filter(|&b| ext.contains(b)).count()
    };
    let bound = |n: &cardred_core::syntax::Count| n.to_usize().unwrap();
    match c {
        S::Atomic(a) => i.concept(a).cloned().unwrap_or_else(|| ElementSet::empty(i.size())),
        S::Nominal(o) => set_of(i, |e| i.nominal(o) == Some(e)),
        S::Top => ElementSet::full(i.size()),
        S::Bottom => ElementSet::empty(i.size()),
        S::Not(d) => surface_extension(i, d).complement(),
        S::And(a, b) => {
            let (x, y) = (surface_extension(i, a), surface_extension(i, b));
            set_of(i, |e| x.contains(e) && y.contains(e))
        }
        S::Or(a, b) => {
            let (x, y) = (surface_extension(i, a), surface_extension(i, b));
            set_of(i, |e| x.contains(e) || y.contains(e))
        }
        S::Implies(a, b) => {
            let (x, y) = (surface_extension(i, a), surface_extension(i, b));
            set_of(i, |e| !x.contains(e) || y.contains(e))
        }
        S::AtLeast(n, r, d) => set_of(i, |a| count(r, d, a) >= bound(n)),
        S::AtMost(n, r, d) => set_of(i, |a| count(r, d, a) <= bound(n)),
        S::Exactly(n, r, d) => set_of(i, |a| count(r, d, a) == bound(n)),
        S::Exists(r, d) => set_of(i, |a| count(r, d, a) >= 1),
        S::Forall(r, d) => {
            let ext = surface_extension(i, d);
            set_of(i, |a| successors(i, r, a).into_iter().all(|b| ext.contains(b)))
        }
    }
}

/// Extends a model of a T_C Box to a model of its nominal translation: the
/// fresh nominals of `(≥ n C)` go to the first `n` instances of `C`, those of
/// `(≤ n C)` enumerate the (at most `n`) instances of `C`, and unused ones go
/// to element 0.
pub fn transport_phi_model(i: &Interpretation, ledger: &NominalLedger) -> Interpretation {
    let mut out = i.clone();
    for (_, r, noms) in ledger.iter() {
        let instances: Vec<usize> = extension(i, &r.concept).unwrap().iter().collect();
        match r.kind {
            CardKind::AtLeast => assert!(instances.len() >= noms.len()),
            CardKind::AtMost => assert!(instances.len() <= noms.len()),
        }
        for (j, o) in noms.iter().enumerate() {
            out.set_nominal(o.clone(), instances.get(j).copied().unwrap_or(0)).unwrap();
        }
    }
    out
}

pub fn names(list: &[&str]) -> Vec<Name> {
    list.iter().map(|s| name(s)).collect()
}

/// Core concepts over the given names, with bounds up to `max_bound`.
pub fn core_concept(
    concepts: Vec<Name>,
    roles: Vec<Name>,
    nominals: Vec<Name>,
    max_bound: u32,
) -> BoxedStrategy<Concept> {
    let mut leaves: Vec<BoxedStrategy<Concept>> = vec![Just(Concept::Top).boxed()];
    if !concepts.is_empty() {
        leaves.push(proptest::sample::select(concepts).prop_map(Concept::Atomic).boxed());
    }
    if !nominals.is_empty() {
        leaves.push(proptest::sample::select(nominals).prop_map(Concept::Nominal).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves);
    leaf.prop_recursive(3, 24, 2, move |inner| {
        let mut options: Vec<BoxedStrategy<Concept>> = vec![
            inner.clone().prop_map(|c| !c).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a & b).boxed(),
        ];
        if !roles.is_empty() {
            let role = (proptest::sample::select(roles.clone()), any::<bool>())
                .prop_map(|(name, inverse)| Role { name, inverse });
            options.push((0..=max_bound, role, inner).prop_map(|(n, r, c)| Concept::at_least(n, r, c)).boxed());
        }
        proptest::strategy::Union::new(options)
    })
    .boxed()
}

/// Surface concepts using every abbreviation.
pub fn surface_concept(concepts: Vec<Name>, roles: Vec<Name>) -> impl Strategy<Value = SurfaceConcept> {
    use SurfaceConcept as S;
    let leaf = prop_oneof![Just(S::Top), Just(S::Bottom), proptest::sample::select(concepts).prop_map(S::Atomic),];
    leaf.prop_recursive(3, 24, 2, move |inner| {
        let role =
            (proptest::sample::select(roles.clone()), any::<bool>()).prop_map(|(name, inverse)| Role { name, inverse });
        let b = |c: SurfaceConcept| Box::new(c);
        prop_oneof![
            inner.clone().prop_map(move |c| S::Not(b(c))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| S::And(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| S::Or(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| S::Implies(b(x), b(y))),
            (0..3u32, role.clone(), inner.clone()).prop_map(move |(n, r, c)| S::AtLeast(n.into(), r, b(c))),
            (0..3u32, role.clone(), inner.clone()).prop_map(move |(n, r, c)| S::AtMost(n.into(), r, b(c))),
            (0..3u32, role.clone(), inner.clone()).prop_map(move |(n, r, c)| S::Exactly(n.into(), r, b(c))),
            (role.clone(), inner.clone()).prop_map(move |(r, c)| S::Exists(r, b(c))),
            (role, inner).prop_map(move |(r, c)| S::Forall(r, b(c))),
        ]
    })
}

/// Interpretations of the given names with 1 to `max_size` elements.
pub fn interpretation(
    concepts: Vec<Name>,
    roles: Vec<Name>,
    nominals: Vec<Name>,
    max_size: usize,
) -> impl Strategy<Value = Interpretation> {
    (1..=max_size).prop_flat_map(move |m| {
        let cs = proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), concepts.len());
        let rs = proptest::collection::vec(proptest::collection::vec(any::<bool>(), m * m), roles.len());
        let ns = proptest::collection::vec(0..m, nominals.len());
        let (concepts, roles, nominals) = (concepts.clone(), roles.clone(), nominals.clone());
        (cs, rs, ns).prop_map(move |(cs, rs, ns)| {
            let mut i = Interpretation::new(m).unwrap();
            for (c, bits) in concepts.iter().zip(cs) {
                i.set_concept(c.clone(), (0..m).filter(|&e| bits[e])).unwrap();
            }
            for (r, bits) in roles.iter().zip(rs) {
                i.set_role(r.clone(), (0..m * m).filter(|&k| bits[k]).map(|k| (k / m, k % m))).unwrap();
            }
            for (o, e) in nominals.iter().zip(ns) {
                i.set_nominal(o.clone(), e).unwrap();
            }
            i
        })
    })
}
