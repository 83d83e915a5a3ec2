//! Seeded random concepts and terminologies for property tests and corpora.
//!
//! Generation is a pure function of the seed: the same seed and shape always
//! give the same output, on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{name, CardRestriction, Concept, Gci, Name, Role, TcBox, TiBox};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The vocabulary and size limits of generated concepts.
#[derive(Clone, Debug)]
pub struct Shape {
    pub concepts: Vec<Name>,
    pub roles: Vec<Name>,
    pub nominals: Vec<Name>,
    /// Whether number restrictions may use inverse roles.
    pub inverse: bool,
    pub max_bound: u32,
    /// Maximal nesting of constructors above the leaves.
    pub max_depth: usize,
}

impl Shape {
    /// Concept names `A`, `B`, … and role names `R`, `S`, … without nominals.
    pub fn small(concepts: usize, roles: usize) -> Shape {
        Shape {
            concepts: ["A", "B", "C", "D"].iter().take(concepts).map(|s| name(s)).collect(),
            roles: ["R", "S"].iter().take(roles).map(|s| name(s)).collect(),
            nominals: Vec::new(),
            inverse: true,
            max_bound: 2,
            max_depth: 2,
        }
    }

    pub fn with_nominals(mut self, nominals: &[&str]) -> Shape {
        self.nominals = nominals.iter().map(|s| name(s)).collect();
        self
    }

    pub fn inverse(mut self, on: bool) -> Shape {
        self.inverse = on;
        self
    }

    pub fn depth(mut self, d: usize) -> Shape {
        self.max_depth = d;
        self
    }

    pub fn max_bound(mut self, b: u32) -> Shape {
        self.max_bound = b;
        self
    }
}

fn leaf<R: Rng>(rng: &mut R, shape: &Shape) -> Concept {
    let n = shape.concepts.len() + shape.nominals.len() + 1;
    let k = rng.gen_range(0..n);
    if k < shape.concepts.len() {
        Concept::Atomic(shape.concepts[k].clone())
    } else if k < n - 1 {
        Concept::Nominal(shape.nominals[k - shape.concepts.len()].clone())
    } else {
        Concept::Top
    }
}

pub fn concept<R: Rng>(rng: &mut R, shape: &Shape) -> Concept {
    concept_at(rng, shape, shape.max_depth)
}

fn concept_at<R: Rng>(rng: &mut R, shape: &Shape, depth: usize) -> Concept {
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng, shape);
    }
    let choices = if shape.roles.is_empty() { 2 } else { 3 };
    match rng.gen_range(0..choices) {
        0 => !concept_at(rng, shape, depth - 1),
        1 => concept_at(rng, shape, depth - 1) & concept_at(rng, shape, depth - 1),
        _ => {
            let r = shape.roles.choose(rng).expect("nonempty").clone();
            let role = Role { name: r, inverse: shape.inverse && rng.gen_bool(0.5) };
            let n = rng.gen_range(0..=shape.max_bound);
            Concept::at_least(n, role, concept_at(rng, shape, depth - 1))
        }
    }
}

pub fn restriction<R: Rng>(rng: &mut R, shape: &Shape) -> CardRestriction {
    let n = rng.gen_range(0..=shape.max_bound);
    let c = concept(rng, shape);
    if rng.gen_bool(0.5) {
        CardRestriction::at_least(n, c)
    } else {
        CardRestriction::at_most(n, c)
    }
}

/// Between one and `max_size` restrictions (fewer if duplicates are drawn).
pub fn tcbox<R: Rng>(rng: &mut R, shape: &Shape, max_size: usize) -> TcBox {
    let k = rng.gen_range(1..=max_size.max(1));
    (0..k).map(|_| restriction(rng, shape)).collect()
}

/// Between one and `max_size` GCIs (fewer if duplicates are drawn).
pub fn tibox<R: Rng>(rng: &mut R, shape: &Shape, max_size: usize) -> TiBox {
    let k = rng.gen_range(1..=max_size.max(1));
    (0..k)
        .map(|_| {
            let lhs = if rng.gen_bool(0.3) { Concept::Top } else { concept(rng, shape) };
            Gci::new(lhs, concept(rng, shape))
        })
        .collect()
}
