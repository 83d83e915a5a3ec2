//! Domino systems, tilings of the torus `Z_s × Z_t`, and their encoding as
//! a T_C Box on top of the exponential torus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::{pos_of, position_concept, side, torus_interpretation, torus_tcbox, verify_torus, GeneratorError};
use super::{EAST, NORTH};
use crate::semantics::Interpretation;
use crate::syntax::{name, CardRestriction, Concept, Name, Role, TcBox};

/// Tiles with horizontal (`east`) and vertical (`north`) compatibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominoSystem {
    tiles: BTreeSet<Name>,
    horizontal: BTreeSet<(Name, Name)>,
    vertical: BTreeSet<(Name, Name)>,
}

impl DominoSystem {
    pub fn new(
        tiles: impl IntoIterator<Item = Name>,
        horizontal: impl IntoIterator<Item = (Name, Name)>,
        vertical: impl IntoIterator<Item = (Name, Name)>,
    ) -> Result<Self, GeneratorError> {
        let d = DominoSystem {
            tiles: tiles.into_iter().collect(),
            horizontal: horizontal.into_iter().collect(),
            vertical: vertical.into_iter().collect(),
        };
        for (a, b) in d.horizontal.iter().chain(&d.vertical) {
            d.check_tile(a)?;
            d.check_tile(b)?;
        }
        Ok(d)
    }

    pub fn tiles(&self) -> &BTreeSet<Name> {
        &self.tiles
    }

    pub fn horizontal(&self) -> &BTreeSet<(Name, Name)> {
        &self.horizontal
    }

    pub fn vertical(&self) -> &BTreeSet<(Name, Name)> {
        &self.vertical
    }

    fn check_tile(&self, t: &Name) -> Result<(), GeneratorError> {
        if self.tiles.contains(t) {
            Ok(())
        } else {
            Err(GeneratorError::UndeclaredTile(t.clone()))
        }
    }

    fn h(&self, a: &Name, b: &Name) -> bool {
        self.horizontal.contains(&(a.clone(), b.clone()))
    }

    fn v(&self, a: &Name, b: &Name) -> bool {
        self.vertical.contains(&(a.clone(), b.clone()))
    }
}

/// A domino system together with an initial condition, as read from a spec
/// file:
///
/// ```text
/// tiles a b
/// h a b
/// h b a
/// v a b
/// init a
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominoSpec {
    pub system: DominoSystem,
    pub init: Vec<Name>,
}

impl FromStr for DominoSpec {
    type Err = GeneratorError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut tiles = Vec::new();
        let (mut h, mut v) = (Vec::new(), Vec::new());
        let mut init = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| GeneratorError::Spec { line, message };
            let mut words = raw.split('#').next().unwrap_or("").split_whitespace();
            let Some(keyword) = words.next() else { continue };
            let names = words.map(|w| Name::new(w).map_err(|e| err(e.to_string()))).collect::<Result<Vec<_>, _>>()?;
            match keyword {
                "tiles" => tiles.extend(names),
                "init" => init.extend(names),
                "h" | "v" => {
                    let [a, b]: [Name; 2] =
                        names.try_into().map_err(|_| err(format!("`{keyword}` takes exactly two tiles")))?;
                    if keyword == "h" { &mut h } else { &mut v }.push((a, b));
                }
                other => return Err(err(format!("unknown statement `{other}`"))),
            }
        }
        let system = DominoSystem::new(tiles, h, v)?;
        for t in &init {
            system.check_tile(t)?;
        }
        Ok(DominoSpec { system, init })
    }
}

impl fmt::Display for DominoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ns: &mut dyn Iterator<Item = &Name>| ns.map(|n| n.as_str()).collect::<Vec<_>>().join(" ");
        writeln!(f, "tiles {}", join(&mut self.system.tiles.iter()))?;
        for (a, b) in &self.system.horizontal {
            writeln!(f, "h {a} {b}")?;
        }
        for (a, b) in &self.system.vertical {
            writeln!(f, "v {a} {b}")?;
        }
        if !self.init.is_empty() {
            writeln!(f, "init {}", join(&mut self.init.iter()))?;
        }
        Ok(())
    }
}

/// A total assignment of tiles to the cells of `Z_width × Z_height`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    width: usize,
    height: usize,
    /// Row-major from the bottom row: cell `(x, y)` is at `y·width + x`.
    cells: Vec<Name>,
}

impl Tiling {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> &Name {
        &self.cells[y * self.width + x]
    }

    /// Whether the horizontal and vertical constraints hold everywhere
    /// (wrapping around) and the bottom row starts with `init`.
    pub fn is_valid(&self, d: &DominoSystem, init: &[Name]) -> bool {
        let (s, t) = (self.width, self.height);
        let constraints = (0..t).all(|y| {
            (0..s).all(|x| {
                let here = self.get(x, y);
                d.h(here, self.get((x + 1) % s, y)) && d.v(here, self.get(x, (y + 1) % t))
            })
        });
        constraints && init.len() <= s && init.iter().enumerate().all(|(x, w)| self.get(x, 0) == w)
    }
}

/// Rows top to bottom, so that north is up.
impl fmt::Display for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in (0..self.height).rev() {
            let row: Vec<&str> = (0..self.width).map(|x| self.get(x, y).as_str()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

type Fits<'a, 'f> = dyn Fn(&[Option<&'a Name>], usize, usize) -> bool + 'f;

/// Finds the first tiling of `Z_s × Z_t` with bottom row starting with
/// `init`, filling cells in `(x, y)` lexicographic order and trying tiles in
/// name order. Exhaustive: `None` means no tiling exists.
pub fn tile_torus(d: &DominoSystem, s: usize, t: usize, init: &[Name]) -> Result<Option<Tiling>, GeneratorError> {
    for w in init {
        d.check_tile(w)?;
    }
    if init.len() > s {
        return Err(GeneratorError::InitialLength { expected: s, found: init.len() });
    }
    if s == 0 || t == 0 {
        return Ok(None);
    }
    let order: Vec<(usize, usize)> = (0..s).flat_map(|x| (0..t).map(move |y| (x, y))).collect();
    let tiles: Vec<&Name> = d.tiles.iter().collect();
    let mut grid: Vec<Option<&Name>> = vec![None; s * t];
    let at = |x: usize, y: usize| y * s + x;

    // Checks every constraint between (x, y) and an already placed neighbour.
    let fits = |grid: &[Option<&Name>], x: usize, y: usize| -> bool {
        let here = grid[at(x, y)].expect("cell just placed");
        let left = grid[at((x + s - 1) % s, y)];
        let right = grid[at((x + 1) % s, y)];
        let below = grid[at(x, (y + t - 1) % t)];
        let above = grid[at(x, (y + 1) % t)];
        left.is_none_or(|l| d.h(l, here))
            && right.is_none_or(|r| d.h(here, r))
            && below.is_none_or(|b| d.v(b, here))
            && above.is_none_or(|a| d.v(here, a))
    };

    fn search<'a>(
        k: usize,
        order: &[(usize, usize)],
        grid: &mut Vec<Option<&'a Name>>,
        tiles: &[&'a Name],
        init: &[Name],
        s: usize,
        fits: &Fits<'a, '_>,
    ) -> bool {
        let Some(&(x, y)) = order.get(k) else { return true };
        let cell = y * s + x;
        for &tile in tiles {
            if y == 0 && x < init.len() && &init[x] != tile {
                continue;
            }
            grid[cell] = Some(tile);
            if fits(grid, x, y) && search(k + 1, order, grid, tiles, init, s, fits) {
                return true;
            }
        }
        grid[cell] = None;
        false
    }

    if !search(0, &order, &mut grid, &tiles, init, s, &fits) {
        return Ok(None);
    }
    let cells = grid.into_iter().map(|c| c.expect("complete").clone()).collect();
    Ok(Some(Tiling { width: s, height: t, cells }))
}

/// The concept `C_d` marking cells that carry tile `d`.
pub fn tile_concept(tile: &Name) -> Name {
    name(&format!("C_{tile}"))
}

fn tile_atom(tile: &Name) -> Concept {
    Concept::Atomic(tile_concept(tile))
}

/// The torus of side `2ⁿ` together with restrictions forcing a tiling by `d`
/// whose bottom row starts with `init` (`|init| = n`).
pub fn domino_tcbox(n: usize, d: &DominoSystem, init: &[Name]) -> Result<TcBox, GeneratorError> {
    if init.len() != n {
        return Err(GeneratorError::InitialLength { expected: n, found: init.len() });
    }
    for w in init {
        d.check_tile(w)?;
    }
    let mut t = torus_tcbox(n)?;
    let tiles: Vec<&Name> = d.tiles.iter().collect();
    t.insert(CardRestriction::all(Concept::disjunction(tiles.iter().map(|&a| tile_atom(a)))));
    let disjoint = tiles
        .iter()
        .flat_map(|&a| tiles.iter().filter(move |&&b| b != a).map(move |&b| !(tile_atom(a) & tile_atom(b))));
    t.insert(CardRestriction::all(Concept::conjunction(disjoint.collect::<Vec<_>>())));
    for (role, rel) in [(EAST, &d.horizontal), (NORTH, &d.vertical)] {
        let role = Role::named(role);
        let rules = tiles.iter().map(|&a| {
            let allowed = rel.iter().filter(|(x, _)| x == a).map(|(_, b)| tile_atom(b));
            Concept::implies(tile_atom(a), Concept::forall(role.clone(), Concept::disjunction(allowed)))
        });
        t.insert(CardRestriction::all(Concept::conjunction(rules.collect::<Vec<_>>())));
    }
    for (x, w) in init.iter().enumerate() {
        t.insert(CardRestriction::all(Concept::implies(position_concept(n, x, 0)?, tile_atom(w))));
    }
    Ok(t)
}

/// Reads the tiling off a model of [`domino_tcbox`]: the cell at `pos(a)`
/// gets the unique tile whose concept contains `a`.
pub fn extract_tiling(i: &Interpretation, n: usize, d: &DominoSystem) -> Result<Tiling, GeneratorError> {
    let report = verify_torus(i, n)?;
    if let Some(v) = report.violations.first() {
        return Err(GeneratorError::NotATorus(v.reason.clone()));
    }
    let side = side(n)?;
    let mut cells: Vec<Option<Name>> = vec![None; side * side];
    for a in i.domain() {
        let on: Vec<&Name> =
            d.tiles.iter().filter(|t| i.concept(&tile_concept(t)).is_some_and(|s| s.contains(a))).collect();
        let [tile] = on.as_slice() else {
            return Err(GeneratorError::TileCover { element: a, count: on.len() });
        };
        let (x, y) = pos_of(i, a, n)?;
        cells[y * side + x] = Some((*tile).clone());
    }
    let cells = cells.into_iter().map(|c| c.expect("positions form a bijection")).collect();
    Ok(Tiling { width: side, height: side, cells })
}

/// The standard torus of side `2ⁿ` with every cell labelled by its tile.
/// Tiles of `d` that the tiling does not use get empty concepts.
pub fn tiling_to_interpretation(tiling: &Tiling, n: usize, d: &DominoSystem) -> Result<Interpretation, GeneratorError> {
    let side = side(n)?;
    if tiling.width != side || tiling.height != side {
        return Err(GeneratorError::NotATorus(format!(
            "a {}x{} tiling does not fit a {side}x{side} torus",
            tiling.width, tiling.height
        )));
    }
    let mut i = torus_interpretation(n)?;
    let mut by_tile: BTreeMap<&Name, Vec<usize>> = d.tiles.iter().map(|t| (t, Vec::new())).collect();
    for (cell, tile) in tiling.cells.iter().enumerate() {
        by_tile.get_mut(tile).ok_or_else(|| GeneratorError::UndeclaredTile(tile.clone()))?.push(cell);
    }
    for (tile, cells) in by_tile {
        i.set_concept(tile_concept(tile), cells).expect("in range");
    }
    Ok(i)
}
