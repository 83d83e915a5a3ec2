//! Torus and domino gadgets.
//!
//! The torus boxes describe a `2ⁿ × 2ⁿ` grid whose cells carry their own
//! coordinates in binary: bit `k` of the x-coordinate is the concept `Xk`,
//! bit `k` of the y-coordinate is `Yk`. The roles `east` and `north` are the
//! two successor relations, and each axis is kept consistent by a concept
//! that increments one coordinate while freezing the other.

mod domino;
pub mod random;

use std::collections::BTreeMap;

use crate::semantics::Interpretation;
use crate::syntax::{name, CardRestriction, Concept, Gci, Name, Role, TcBox, TiBox};

pub use domino::{
    domino_tcbox, extract_tiling, tile_concept, tile_torus, tiling_to_interpretation, DominoSpec, DominoSystem, Tiling,
};

pub const EAST: &str = "east";
pub const NORTH: &str = "north";
pub const CREATE: &str = "create";
/// The nominal marking the upper right corner in [`torus_tibox`].
pub const CORNER: &str = "o";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("the torus exponent must be at least 1")]
    ZeroExponent,
    #[error("the torus exponent {0} is too large")]
    ExponentTooLarge(usize),
    #[error("bit vectors of lengths {0} and {1} cannot be compared")]
    LengthMismatch(usize, usize),
    #[error("coordinate ({x},{y}) lies outside a {side}x{side} grid")]
    OutOfRange { x: usize, y: usize, side: usize },
    #[error("the interpretation does not interpret `{0}`")]
    MissingName(Name),
    #[error("element {0} is outside the domain")]
    NoSuchElement(usize),
    #[error("tile `{0}` is not declared")]
    UndeclaredTile(Name),
    #[error("the initial condition has {found} tiles, expected {expected}")]
    InitialLength { expected: usize, found: usize },
    #[error("element {element} carries {count} tiles, expected exactly one")]
    TileCover { element: usize, count: usize },
    #[error("the interpretation is not the expected torus: {0}")]
    NotATorus(String),
    #[error("line {line}: {message}")]
    Spec { line: usize, message: String },
}

pub fn x_bit(k: usize) -> Name {
    name(&format!("X{k}"))
}

pub fn y_bit(k: usize) -> Name {
    name(&format!("Y{k}"))
}

/// `2ⁿ`, rejecting exponents for which the grid side would not fit.
pub fn side(n: usize) -> Result<usize, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::ZeroExponent);
    }
    if n >= usize::BITS as usize / 2 {
        return Err(GeneratorError::ExponentTooLarge(n));
    }
    Ok(1 << n)
}

/// Whether `next` encodes `cur + 1 (mod 2ⁿ)`, bits least significant first.
///
/// Decided by the carry-chain characterisation rather than arithmetic: bit
/// `k` flips exactly when all lower bits of `cur` are set, and is copied
/// otherwise.
pub fn incr_mod2n(cur: &[bool], next: &[bool]) -> Result<bool, GeneratorError> {
    if cur.len() != next.len() {
        return Err(GeneratorError::LengthMismatch(cur.len(), next.len()));
    }
    Ok((0..cur.len()).all(|k| {
        let carry = cur[..k].iter().all(|&b| b);
        if carry {
            next[k] != cur[k]
        } else {
            next[k] == cur[k]
        }
    }))
}

/// The grid position of `a`, read off the bits `X0..Xn-1` and `Y0..Yn-1`.
pub fn pos_of(i: &Interpretation, a: usize, n: usize) -> Result<(usize, usize), GeneratorError> {
    if a >= i.size() {
        return Err(GeneratorError::NoSuchElement(a));
    }
    let read = |bit: Name| -> Result<usize, GeneratorError> {
        let set = i.concept(&bit).ok_or(GeneratorError::MissingName(bit))?;
        Ok(usize::from(set.contains(a)))
    };
    let (mut x, mut y) = (0, 0);
    for k in 0..n {
        x |= read(x_bit(k))? << k;
        y |= read(y_bit(k))? << k;
    }
    Ok((x, y))
}

fn literal(bit: Name, on: bool) -> Concept {
    let a = Concept::Atomic(bit);
    if on {
        a
    } else {
        !a
    }
}

/// The concept whose instances are exactly the elements at position `(x,y)`:
/// `X0..Xn-1` then `Y0..Yn-1`, each positive or negated per the coordinate bits.
pub fn position_concept(n: usize, x: usize, y: usize) -> Result<Concept, GeneratorError> {
    let side = side(n)?;
    if x >= side || y >= side {
        return Err(GeneratorError::OutOfRange { x, y, side });
    }
    let xs = (0..n).map(|k| literal(x_bit(k), x >> k & 1 == 1));
    let ys = (0..n).map(|k| literal(y_bit(k), y >> k & 1 == 1));
    Ok(Concept::conjunction(xs.chain(ys)))
}

/// `(A → ∀r.B) ⊓ (¬A → ∀r.¬B)` with `B = A` or `B = ¬A`.
fn propagate(role: &Role, a: &Concept, flip: bool) -> Concept {
    let (pos, neg) = if flip { (!a.clone(), a.clone()) } else { (a.clone(), !a.clone()) };
    Concept::implies(a.clone(), Concept::forall(role.clone(), pos))
        & Concept::implies(!a.clone(), Concept::forall(role.clone(), neg))
}

/// Along `role`, the counter `inc` goes up by one (mod 2ⁿ) and `frozen`
/// stays put. The three groups of conjuncts are, per bit `k`: flip when all
/// lower bits are set; keep when some lower bit is clear; keep the frozen bit.
fn step_concept(role: &Role, inc: &[Concept], frozen: &[Concept]) -> Concept {
    let n = inc.len();
    let flip = (0..n)
        .map(|k| Concept::implies(Concept::conjunction(inc[..k].iter().cloned()), propagate(role, &inc[k], true)));
    let keep = (0..n).map(|k| {
        Concept::implies(Concept::disjunction(inc[..k].iter().map(|b| !b.clone())), propagate(role, &inc[k], false))
    });
    let freeze = frozen.iter().map(|b| propagate(role, b, false));
    Concept::conjunction(flip.chain(keep).chain(freeze).collect::<Vec<_>>())
}

fn bits(n: usize, f: fn(usize) -> Name) -> Vec<Concept> {
    (0..n).map(|k| Concept::Atomic(f(k))).collect()
}

/// `D_east ⊓ D_north`.
pub fn grid_step_concept(n: usize) -> Concept {
    let (xs, ys) = (bits(n, x_bit), bits(n, y_bit));
    step_concept(&Role::named(EAST), &xs, &ys) & step_concept(&Role::named(NORTH), &ys, &xs)
}

fn corners(n: usize) -> Result<(Concept, Concept), GeneratorError> {
    let last = side(n)? - 1;
    Ok((position_concept(n, 0, 0)?, position_concept(n, last, last)?))
}

/// The torus as cardinality restrictions. Every model is isomorphic to the
/// `2ⁿ × 2ⁿ` torus.
pub fn torus_tcbox(n: usize) -> Result<TcBox, GeneratorError> {
    let (origin, corner) = corners(n)?;
    let (east, north) = (Role::named(EAST), Role::named(NORTH));
    Ok([
        CardRestriction::all(Concept::exists(east.clone(), Concept::Top)),
        CardRestriction::all(Concept::exists(north.clone(), Concept::Top)),
        CardRestriction::all(Concept::exactly(1u32, east.inverse(), Concept::Top)),
        CardRestriction::all(Concept::exactly(1u32, north.inverse(), Concept::Top)),
        CardRestriction::at_least(1u32, origin),
        CardRestriction::at_least(1u32, corner.clone()),
        CardRestriction::at_most(1u32, corner),
        CardRestriction::all(grid_step_concept(n)),
    ]
    .into_iter()
    .collect())
}

/// The torus with a single nominal `o` fixing the upper right corner and a
/// role `create` guaranteeing an origin cell.
pub fn torus_tibox(n: usize) -> Result<TiBox, GeneratorError> {
    let (origin, corner) = corners(n)?;
    let (east, north) = (Role::named(EAST), Role::named(NORTH));
    let o = Concept::nominal(CORNER);
    Ok([
        Gci::new(Concept::Top, Concept::exists(east.clone(), Concept::Top)),
        Gci::new(Concept::Top, Concept::exists(north.clone(), Concept::Top)),
        Gci::new(Concept::Top, Concept::exactly(1u32, east.inverse(), Concept::Top)),
        Gci::new(Concept::Top, Concept::exactly(1u32, north.inverse(), Concept::Top)),
        Gci::new(Concept::Top, Concept::exists(Role::named(CREATE), origin)),
        Gci::new(o.clone(), corner.clone()),
        Gci::new(corner, o),
        Gci::new(Concept::Top, grid_step_concept(n)),
    ]
    .into_iter()
    .collect())
}

/// The standard `2ⁿ × 2ⁿ` torus: element `y·2ⁿ + x` sits at `(x, y)`.
pub fn torus_interpretation(n: usize) -> Result<Interpretation, GeneratorError> {
    let side = side(n)?;
    let mut i = Interpretation::new(side * side).map_err(|e| GeneratorError::NotATorus(e.to_string()))?;
    let at = |x: usize, y: usize| (y % side) * side + x % side;
    let cells = || (0..side).flat_map(move |y| (0..side).map(move |x| (x, y)));
    for k in 0..n {
        let xs = cells().filter(|&(x, _)| x >> k & 1 == 1).map(|(x, y)| at(x, y));
        i.set_concept(x_bit(k), xs).expect("in range");
        let ys = cells().filter(|&(_, y)| y >> k & 1 == 1).map(|(x, y)| at(x, y));
        i.set_concept(y_bit(k), ys).expect("in range");
    }
    i.set_role(name(EAST), cells().map(|(x, y)| (at(x, y), at(x + 1, y)))).expect("in range");
    i.set_role(name(NORTH), cells().map(|(x, y)| (at(x, y), at(x, y + 1)))).expect("in range");
    Ok(i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// The offending element, or `None` for a property of the whole domain.
    pub element: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusReport {
    pub verdict: bool,
    pub positions: BTreeMap<usize, (usize, usize)>,
    pub violations: Vec<Violation>,
}

/// Checks that `i` (restricted to `east`, `north` and the position bits) is
/// isomorphic to the `2ⁿ × 2ⁿ` torus via [`pos_of`].
pub fn verify_torus(i: &Interpretation, n: usize) -> Result<TorusReport, GeneratorError> {
    let side = side(n)?;
    let mut violations = Vec::new();
    let mut flag = |element: Option<usize>, reason: String| violations.push(Violation { element, reason });
    let positions: BTreeMap<usize, (usize, usize)> =
        i.domain().map(|a| pos_of(i, a, n).map(|p| (a, p))).collect::<Result<_, _>>()?;
    if i.size() != side * side {
        flag(None, format!("domain has {} elements, expected {}", i.size(), side * side));
    }
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&a, &p) in &positions {
        if let Some(&b) = owner.get(&p) {
            flag(Some(a), format!("position {p:?} is already taken by element {b}"));
        } else {
            owner.insert(p, a);
        }
    }
    for (role, dx, dy) in [(EAST, 1, 0), (NORTH, 0, 1)] {
        let edges = i.role(&name(role)).ok_or_else(|| GeneratorError::MissingName(name(role)))?;
        for a in i.domain() {
            let succ: Vec<usize> = edges.range((a, 0)..(a + 1, 0)).map(|&(_, b)| b).collect();
            let (x, y) = positions[&a];
            let want = ((x + dx) % side, (y + dy) % side);
            match succ.as_slice() {
                [b] if positions[b] == want => {}
                [b] => flag(Some(a), format!("{role} successor {b} is at {:?}, expected {want:?}", positions[b])),
                _ => flag(Some(a), format!("has {} {role} successors, expected one", succ.len())),
            }
        }
    }
    Ok(TorusReport { verdict: violations.is_empty(), positions, violations })
}
