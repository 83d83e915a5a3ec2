//! Size accounting for concepts and terminologies.
//!
//! Every AST node costs 1, except numeric bounds, which cost `max(n, 1)`
//! under unary coding and `max(⌈log₂(n+1)⌉, 1)` under binary coding. A role
//! occurrence is a node; the terminology itself is not.

use num_bigint::BigUint;
use num_traits::One;

use super::{Concept, Count, TBoxRef};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Coding {
    Unary,
    Binary,
}

fn count_cost(n: &Count, coding: Coding) -> BigUint {
    let one = BigUint::one();
    let cost = match coding {
        Coding::Unary => n.clone(),
        Coding::Binary => BigUint::from(n.bits()),
    };
    cost.max(one)
}

pub fn concept_size(c: &Concept, coding: Coding) -> BigUint {
    c.subconcepts()
        .into_iter()
        .map(|sub| match sub {
            // node + bound + role
            Concept::AtLeast(n, _, _) => count_cost(n, coding) + 2u32,
            _ => BigUint::one(),
        })
        .sum()
}

/// Size of a terminology under the given number coding.
pub fn tbox_size<'a>(t: impl Into<TBoxRef<'a>>, coding: Coding) -> BigUint {
    match t.into() {
        TBoxRef::Card(t) => {
            t.iter().map(|r| BigUint::one() + count_cost(&r.bound, coding) + concept_size(&r.concept, coding)).sum()
        }
        TBoxRef::Incl(t) => {
            t.iter().map(|g| BigUint::one() + concept_size(&g.lhs, coding) + concept_size(&g.rhs, coding)).sum()
        }
    }
}

/// Number of AST nodes in a concept, counting each bound as a single node.
pub fn concept_node_count(c: &Concept) -> usize {
    c.subconcepts().into_iter().map(|sub| if matches!(sub, Concept::AtLeast(..)) { 3 } else { 1 }).sum()
}

/// Number of AST nodes in a terminology, counting each bound as a single node.
pub fn node_count<'a>(t: impl Into<TBoxRef<'a>>) -> usize {
    match t.into() {
        TBoxRef::Card(t) => t.iter().map(|r| 2 + concept_node_count(&r.concept)).sum(),
        TBoxRef::Incl(t) => t.iter().map(|g| 1 + concept_node_count(&g.lhs) + concept_node_count(&g.rhs)).sum(),
    }
}
