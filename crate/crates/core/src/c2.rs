//! The two-variable fragment of first-order logic with counting quantifiers,
//! the translation of ALCQI concepts and T_C Boxes into it, and a
//! straightforward evaluator over finite structures.
//!
//! The evaluator is an oracle for testing the translation, not a decision
//! procedure: it enumerates the domain once per quantifier, so it is
//! exponential in quantifier depth.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::ToPrimitive;

use crate::semantics::{ElementSet, Interpretation};
use crate::syntax::{CardKind, CardRestriction, Concept, Count, Name, TcBox};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

/// A unary predicate: a concept name, or the reserved predicate used to
/// spell out `⊤`. The reserved one renders as `top`, which can never be a
/// concept name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Predicate {
    Named(Name),
    Reserved,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum C2Formula {
    Unary(Predicate, Var),
    Binary(Name, Var, Var),
    Not(Box<C2Formula>),
    And(Box<C2Formula>, Box<C2Formula>),
    Count { kind: CardKind, bound: Count, var: Var, body: Box<C2Formula> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum C2Error {
    #[error("nominal {{{0}}} has no counterpart in C2")]
    Nominal(Name),
    #[error("variable {0} is free but unassigned")]
    Unbound(Var),
    #[error("`{0}` is used both as a concept and as a role name")]
    KindClash(Name),
}

impl C2Formula {
    fn not(f: C2Formula) -> C2Formula {
        C2Formula::Not(Box::new(f))
    }

    fn and(a: C2Formula, b: C2Formula) -> C2Formula {
        C2Formula::And(Box::new(a), Box::new(b))
    }

    /// `¬(⊤̂(v) ∧ ¬⊤̂(v))`, the translation of `⊤`.
    pub fn tautology(v: Var) -> C2Formula {
        let atom = C2Formula::Unary(Predicate::Reserved, v);
        C2Formula::not(C2Formula::and(atom.clone(), C2Formula::not(atom)))
    }

    pub fn node_count(&self) -> usize {
        match self {
            C2Formula::Unary(..) | C2Formula::Binary(..) => 1,
            C2Formula::Not(f) => 1 + f.node_count(),
            C2Formula::And(a, b) => 1 + a.node_count() + b.node_count(),
            C2Formula::Count { body, .. } => 1 + body.node_count(),
        }
    }

    /// Variables with a free occurrence.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        match self {
            C2Formula::Unary(_, v) => [*v].into(),
            C2Formula::Binary(_, a, b) => [*a, *b].into(),
            C2Formula::Not(f) => f.free_vars(),
            C2Formula::And(a, b) => {
                let mut vs = a.free_vars();
                vs.extend(b.free_vars());
                vs
            }
            C2Formula::Count { var, body, .. } => {
                let mut vs = body.free_vars();
                vs.remove(var);
                vs
            }
        }
    }
}

/// Exchanges `x` and `y` everywhere, bound occurrences included.
pub fn swap_vars(f: &C2Formula) -> C2Formula {
    match f {
        C2Formula::Unary(p, v) => C2Formula::Unary(p.clone(), v.other()),
        C2Formula::Binary(r, a, b) => C2Formula::Binary(r.clone(), a.other(), b.other()),
        C2Formula::Not(g) => C2Formula::not(swap_vars(g)),
        C2Formula::And(a, b) => C2Formula::and(swap_vars(a), swap_vars(b)),
        C2Formula::Count { kind, bound, var, body } => {
            C2Formula::Count { kind: *kind, bound: bound.clone(), var: var.other(), body: Box::new(swap_vars(body)) }
        }
    }
}

fn psi_x(c: &Concept) -> Result<C2Formula, C2Error> {
    Ok(match c {
        Concept::Atomic(a) => C2Formula::Unary(Predicate::Named(a.clone()), Var::X),
        Concept::Nominal(o) => return Err(C2Error::Nominal(o.clone())),
        Concept::Top => C2Formula::tautology(Var::X),
        Concept::Not(d) => C2Formula::not(psi_x(d)?),
        Concept::And(a, b) => C2Formula::and(psi_x(a)?, psi_x(b)?),
        Concept::AtLeast(n, role, d) => {
            let edge = if role.inverse {
                C2Formula::Binary(role.name.clone(), Var::Y, Var::X)
            } else {
                C2Formula::Binary(role.name.clone(), Var::X, Var::Y)
            };
            C2Formula::Count {
                kind: CardKind::AtLeast,
                bound: n.clone(),
                var: Var::Y,
                body: Box::new(C2Formula::and(edge, swap_vars(&psi_x(d)?))),
            }
        }
    })
}

/// The translation of a concept, with `v` as its single free variable.
/// The `y` version is the `x` version with the variables exchanged.
pub fn psi_concept(c: &Concept, v: Var) -> Result<C2Formula, C2Error> {
    let fx = psi_x(c)?;
    Ok(match v {
        Var::X => fx,
        Var::Y => swap_vars(&fx),
    })
}

pub fn psi_restriction(r: &CardRestriction) -> Result<C2Formula, C2Error> {
    Ok(C2Formula::Count {
        kind: r.kind,
        bound: r.bound.clone(),
        var: Var::X,
        body: Box::new(psi_concept(&r.concept, Var::X)?),
    })
}

/// The translation of a T_C Box: a sentence conjoining the restrictions in
/// canonical order. The empty box becomes `∃^{≥0}x.⊤`.
pub fn psi_tbox(t: &TcBox) -> Result<C2Formula, C2Error> {
    let mut parts = t.canonical().into_iter().map(psi_restriction).collect::<Result<Vec<_>, _>>()?;
    // Conjuncts in order of their rendering, so output is stable.
    parts.sort_by_cached_key(ToString::to_string);
    let Some(mut acc) = parts.pop() else {
        return Ok(C2Formula::Count {
            kind: CardKind::AtLeast,
            bound: Count::from(0u32),
            var: Var::X,
            body: Box::new(C2Formula::tautology(Var::X)),
        });
    };
    while let Some(f) = parts.pop() {
        acc = C2Formula::and(f, acc);
    }
    Ok(acc)
}

/// A finite relational structure over `{0, …, size-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FoStructure {
    size: usize,
    unary: BTreeMap<Name, ElementSet>,
    binary: BTreeMap<Name, Vec<bool>>,
}

impl FoStructure {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unary(&self, p: &Name) -> Option<&ElementSet> {
        self.unary.get(p)
    }

    pub fn binary(&self, r: &Name) -> Option<BTreeSet<(usize, usize)>> {
        let m = self.size;
        self.binary.get(r).map(|bits| (0..m * m).filter(|&k| bits[k]).map(|k| (k / m, k % m)).collect())
    }

    fn holds_unary(&self, p: &Predicate, e: usize) -> bool {
        match p {
            Predicate::Named(n) => self.unary.get(n).is_some_and(|s| s.contains(e)),
            Predicate::Reserved => false,
        }
    }

    fn holds_binary(&self, r: &Name, a: usize, b: usize) -> bool {
        self.binary.get(r).is_some_and(|bits| bits[a * self.size + b])
    }
}

/// Reads an interpretation as a first-order structure: concept names become
/// unary relations, role names binary ones.
pub fn structure_of(i: &Interpretation) -> Result<FoStructure, C2Error> {
    if let Some((o, _)) = i.nominals().next() {
        return Err(C2Error::Nominal(o.clone()));
    }
    let m = i.size();
    let unary: BTreeMap<Name, ElementSet> = i.concepts().map(|(n, s)| (n.clone(), s.clone())).collect();
    let mut binary = BTreeMap::new();
    for (r, pairs) in i.roles() {
        if unary.contains_key(r) {
            return Err(C2Error::KindClash(r.clone()));
        }
        let mut bits = vec![false; m * m];
        for &(a, b) in pairs {
            bits[a * m + b] = true;
        }
        binary.insert(r.clone(), bits);
    }
    Ok(FoStructure { size: m, unary, binary })
}

/// A partial assignment of elements to `x` and `y`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct Env {
    x: Option<usize>,
    y: Option<usize>,
}

impl Env {
    pub fn empty() -> Self {
        Env::default()
    }

    pub fn with(mut self, v: Var, e: usize) -> Self {
        match v {
            Var::X => self.x = Some(e),
            Var::Y => self.y = Some(e),
        }
        self
    }

    pub fn get(&self, v: Var) -> Option<usize> {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }

    fn lookup(&self, v: Var) -> Result<usize, C2Error> {
        self.get(v).ok_or(C2Error::Unbound(v))
    }
}

pub fn eval_c2(s: &FoStructure, f: &C2Formula, env: Env) -> Result<bool, C2Error> {
    Ok(match f {
        C2Formula::Unary(p, v) => s.holds_unary(p, env.lookup(*v)?),
        C2Formula::Binary(r, a, b) => s.holds_binary(r, env.lookup(*a)?, env.lookup(*b)?),
        C2Formula::Not(g) => !eval_c2(s, g, env)?,
        // Both sides are evaluated so that unbound variables are always reported.
        C2Formula::And(a, b) => {
            let l = eval_c2(s, a, env)?;
            let r = eval_c2(s, b, env)?;
            l && r
        }
        C2Formula::Count { kind, bound, var, body } => {
            let mut count = 0usize;
            for e in 0..s.size {
                if eval_c2(s, body, env.with(*var, e))? {
                    count += 1;
                }
            }
            let at_least = bound.to_usize().is_some_and(|n| count >= n);
            match kind {
                CardKind::AtLeast => at_least,
                // count ≤ n  ⇔  count < n+1
                CardKind::AtMost => bound.to_usize().is_none_or(|n| count <= n),
            }
        }
    })
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Named(n) => write!(f, "{n}"),
            Predicate::Reserved => f.write_str("top"),
        }
    }
}

impl fmt::Display for C2Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            C2Formula::Unary(p, v) => write!(f, "{p}({v})"),
            C2Formula::Binary(r, a, b) => write!(f, "{r}({a},{b})"),
            C2Formula::Not(g) => write!(f, "~{g}"),
            C2Formula::And(a, b) => write!(f, "({a} & {b})"),
            C2Formula::Count { kind, bound, var, body } => {
                let op = match kind {
                    CardKind::AtLeast => ">=",
                    CardKind::AtMost => "<=",
                };
                write!(f, "E{op}{bound} {var}. {body}")
            }
        }
    }
}
