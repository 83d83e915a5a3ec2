//! Propositional encoding of "T has a model with exactly m elements".
//!
//! Primary variables are concept memberships `A(e)`, role edges `R(a,b)` and
//! one-hot nominal placements `o@e`. Every subconcept gets a literal per
//! element through full-equivalence gates, so negation is just literal
//! negation. Counting uses a prefix-sum ladder over `(edge ∧ filler)` terms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::sat::{Lit, SolveResult, Solver, Var};
use crate::semantics::Interpretation;
use crate::syntax::{CardKind, Concept, Count, Name, Role, TBoxRef};
use num_traits::ToPrimitive;

pub(crate) struct Encoding<'t> {
    pub solver: Solver,
    size: usize,
    truth: Lit,
    concepts: BTreeMap<Name, Vec<Var>>,
    roles: BTreeMap<Name, Vec<Var>>,
    nominals: BTreeMap<Name, Vec<Var>>,
    memo: HashMap<&'t Concept, Vec<Lit>>,
}

/// One step of the canonical (lexicographic) valuation order.
pub(crate) enum Slot {
    /// A membership or edge bit; `false` sorts first.
    Bit(Var),
    /// A nominal: the lowest admissible element sorts first.
    Placement(Vec<Var>),
}

impl<'t> Encoding<'t> {
    pub fn new(
        tbox: TBoxRef<'t>,
        size: usize,
        concepts: &BTreeSet<Name>,
        roles: &BTreeSet<Name>,
        individuals: &BTreeSet<Name>,
        unique_names: bool,
    ) -> Self {
        let mut solver = Solver::new();
        let t = solver.new_var();
        let truth = Lit::positive(t);
        solver.add_clause(&[truth]);
        let mut enc = Encoding {
            solver,
            size,
            truth,
            concepts: BTreeMap::new(),
            roles: BTreeMap::new(),
            nominals: BTreeMap::new(),
            memo: HashMap::new(),
        };
        for c in concepts {
            let vs = (0..size).map(|_| enc.solver.new_var()).collect();
            enc.concepts.insert(c.clone(), vs);
        }
        for r in roles {
            let vs = (0..size * size).map(|_| enc.solver.new_var()).collect();
            enc.roles.insert(r.clone(), vs);
        }
        for o in individuals {
            let vs: Vec<Var> = (0..size).map(|_| enc.solver.new_var()).collect();
            let lits: Vec<Lit> = vs.iter().map(|&v| Lit::positive(v)).collect();
            enc.solver.add_clause(&lits);
            for a in 0..size {
                for b in a + 1..size {
                    enc.solver.add_clause(&[!lits[a], !lits[b]]);
                }
            }
            enc.nominals.insert(o.clone(), vs);
        }
        if unique_names {
            let places: Vec<&Vec<Var>> = enc.nominals.values().collect();
            let mut clauses = Vec::new();
            for (k, p) in places.iter().enumerate() {
                for q in &places[k + 1..] {
                    for e in 0..size {
                        clauses.push([Lit::negative(p[e]), Lit::negative(q[e])]);
                    }
                }
            }
            for c in clauses {
                enc.solver.add_clause(&c);
            }
        }
        enc.break_symmetry();
        enc.assert_tbox(tbox);
        enc
    }

    /// The primary literals in canonical order, read through the element
    /// permutation `perm`. A placement contributes negated one-hot literals so
    /// that `false` sorts first throughout.
    fn ordered_literals(&self, perm: impl Fn(usize) -> usize) -> Vec<Lit> {
        let m = self.size;
        let mut out = Vec::new();
        for vs in self.concepts.values() {
            out.extend((0..m).map(|e| Lit::positive(vs[perm(e)])));
        }
        for vs in self.roles.values() {
            out.extend((0..m * m).map(|k| Lit::positive(vs[perm(k / m) * m + perm(k % m)])));
        }
        for vs in self.nominals.values() {
            out.extend((0..m).map(|e| Lit::negative(vs[perm(e)])));
        }
        out
    }

    /// Lex-leader constraints for the transpositions of neighbouring
    /// elements: a model must not exceed its image under any of them. The
    /// lexicographically least model satisfies all of these, so minimisation
    /// finds the same witness; refuting a size gets much cheaper.
    fn break_symmetry(&mut self) {
        let identity = self.ordered_literals(|e| e);
        for a in 1..self.size {
            let swap = |e: usize| {
                if e == a {
                    a - 1
                } else if e == a - 1 {
                    a
                } else {
                    e
                }
            };
            let image = self.ordered_literals(swap);
            self.lex_leq(&identity, &image);
        }
    }

    fn lex_leq(&mut self, xs: &[Lit], ys: &[Lit]) {
        // `equal` holds whenever the prefix so far agrees.
        let mut equal = self.truth;
        for (&x, &y) in xs.iter().zip(ys) {
            if x == y {
                continue;
            }
            self.solver.add_clause(&[!equal, !x, y]);
            let next = Lit::positive(self.solver.new_var());
            self.solver.add_clause(&[!equal, x, y, next]);
            self.solver.add_clause(&[!equal, !x, !y, next]);
            equal = next;
        }
    }

    fn falsity(&self) -> Lit {
        !self.truth
    }

    fn and2(&mut self, a: Lit, b: Lit) -> Lit {
        let (t, f) = (self.truth, self.falsity());
        if a == f || b == f || a == !b {
            return f;
        }
        if a == t || a == b {
            return b;
        }
        if b == t {
            return a;
        }
        let v = Lit::positive(self.solver.new_var());
        self.solver.add_clause(&[!v, a]);
        self.solver.add_clause(&[!v, b]);
        self.solver.add_clause(&[v, !a, !b]);
        v
    }

    fn or2(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and2(!a, !b)
    }

    /// A literal equivalent to "at least `n` of `terms` hold".
    fn at_least(&mut self, terms: &[Lit], n: &Count) -> Lit {
        let (t, f) = (self.truth, self.falsity());
        let mut need = match n.to_usize() {
            Some(k) => k,
            None => return f,
        };
        let mut live = Vec::with_capacity(terms.len());
        for &l in terms {
            if l == t {
                need = need.saturating_sub(1);
            } else if l != f {
                live.push(l);
            }
        }
        if need == 0 {
            return t;
        }
        if need > live.len() {
            return f;
        }
        // ladder[k] <=> at least k of the terms seen so far
        let mut ladder = vec![f; need + 1];
        ladder[0] = t;
        for &term in &live {
            for k in (1..=need).rev() {
                let carry = self.and2(ladder[k - 1], term);
                ladder[k] = self.or2(ladder[k], carry);
            }
        }
        ladder[need]
    }

    fn edge(&self, role: &Role, from: usize, to: usize) -> Lit {
        let vars = &self.roles[&role.name];
        let (a, b) = if role.inverse { (to, from) } else { (from, to) };
        Lit::positive(vars[a * self.size + b])
    }

    fn concept(&mut self, c: &'t Concept) -> Vec<Lit> {
        if let Some(ls) = self.memo.get(c) {
            return ls.clone();
        }
        let m = self.size;
        let lits = match c {
            Concept::Atomic(a) => self.concepts[a].iter().map(|&v| Lit::positive(v)).collect(),
            Concept::Nominal(o) => self.nominals[o].iter().map(|&v| Lit::positive(v)).collect(),
            Concept::Top => vec![self.truth; m],
            Concept::Not(d) => self.concept(d).into_iter().map(|l| !l).collect(),
            Concept::And(a, b) => {
                let (la, lb) = (self.concept(a), self.concept(b));
                la.into_iter().zip(lb).map(|(x, y)| self.and2(x, y)).collect()
            }
            Concept::AtLeast(n, role, d) => {
                let filler = self.concept(d);
                (0..m)
                    .map(|e| {
                        let terms: Vec<Lit> = (0..m)
                            .map(|b| {
                                let edge = self.edge(role, e, b);
                                self.and2(edge, filler[b])
                            })
                            .collect();
                        self.at_least(&terms, n)
                    })
                    .collect()
            }
        };
        self.memo.insert(c, lits.clone());
        lits
    }

    fn assert_tbox(&mut self, tbox: TBoxRef<'t>) {
        match tbox {
            TBoxRef::Card(t) => {
                for r in t.iter() {
                    let members = self.concept(&r.concept);
                    let gate = match r.kind {
                        CardKind::AtLeast => self.at_least(&members, &r.bound),
                        CardKind::AtMost => !self.at_least(&members, &(r.bound.clone() + 1u32)),
                    };
                    self.solver.add_clause(&[gate]);
                }
            }
            TBoxRef::Incl(t) => {
                for g in t.iter() {
                    let lhs = self.concept(&g.lhs);
                    let rhs = self.concept(&g.rhs);
                    for (l, r) in lhs.into_iter().zip(rhs) {
                        self.solver.add_clause(&[!l, r]);
                    }
                }
            }
        }
    }

    /// The primary variables in canonical valuation order: concept names,
    /// then role names (pairs row-major), then nominal placements.
    pub fn canonical_order(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        for vs in self.concepts.values().chain(self.roles.values()) {
            out.extend(vs.iter().map(|&v| Slot::Bit(v)));
        }
        out.extend(self.nominals.values().map(|vs| Slot::Placement(vs.clone())));
        out
    }

    /// Pins every primary variable to its lexicographically least feasible
    /// value, given that the current model is satisfying. Invariant: the
    /// solver's model always satisfies the pinned prefix. Returns `false` if
    /// the deadline interrupts the walk.
    pub fn minimise(&mut self) -> bool {
        let mut fixed: Vec<Lit> = Vec::new();
        for slot in self.canonical_order() {
            match slot {
                Slot::Bit(v) => {
                    let want = Lit::negative(v);
                    if !self.solver.value(v) {
                        fixed.push(want);
                        continue;
                    }
                    fixed.push(want);
                    match self.solver.solve_with(&fixed) {
                        SolveResult::Sat => {}
                        // An unsat call leaves the previous model (v true) in place.
                        SolveResult::Unsat => {
                            fixed.pop();
                            fixed.push(!want);
                        }
                        SolveResult::Interrupted => return false,
                    }
                }
                Slot::Placement(vs) => {
                    let mut placed = false;
                    for &v in &vs {
                        if self.solver.value(v) {
                            fixed.push(Lit::positive(v));
                            placed = true;
                            break;
                        }
                        fixed.push(Lit::positive(v));
                        match self.solver.solve_with(&fixed) {
                            SolveResult::Sat => {
                                placed = true;
                                break;
                            }
                            SolveResult::Unsat => {
                                fixed.pop();
                                fixed.push(Lit::negative(v));
                            }
                            SolveResult::Interrupted => return false,
                        }
                    }
                    if !placed {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Reads the interpretation off the solver's current model. Every name
    /// of the search signature is present, possibly with an empty extension.
    pub fn decode(&self) -> Interpretation {
        let m = self.size;
        let mut i = Interpretation::new(m).expect("domain is nonempty");
        for (n, vs) in &self.concepts {
            let elems = (0..m).filter(|&e| self.solver.value(vs[e]));
            i.set_concept(n.clone(), elems).expect("in range");
        }
        for (n, vs) in &self.roles {
            let pairs = (0..m * m).filter(|&k| self.solver.value(vs[k])).map(|k| (k / m, k % m));
            i.set_role(n.clone(), pairs).expect("in range");
        }
        for (n, vs) in &self.nominals {
            let e = (0..m).find(|&e| self.solver.value(vs[e])).expect("exactly-one clause");
            i.set_nominal(n.clone(), e).expect("in range");
        }
        i
    }
}
