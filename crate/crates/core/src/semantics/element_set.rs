use std::fmt;

/// A subset of a finite domain `{0, …, universe-1}`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ElementSet {
    words: Vec<u64>,
    universe: usize,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet { words: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for e in 0..universe {
            s.insert(e);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, e: usize) {
        assert!(e < self.universe, "element {e} outside domain of size {}", self.universe);
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.universe && self.words[e / 64] & (1 << (e % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&e| self.contains(e))
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::empty(self.universe);
        for e in 0..self.universe {
            if !self.contains(e) {
                out.insert(e);
            }
        }
        out
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(w, o)| w & !o == 0)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let mut a = ElementSet::empty(70);
        a.insert(1);
        a.insert(65);
        assert_eq!(a.len(), 2);
        assert!(a.contains(65) && !a.contains(64) && !a.contains(700));
        assert_eq!(a.complement().len(), 68);
        let mut b = ElementSet::full(70);
        assert!(a.is_subset(&b));
        b.intersect_with(&a);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{1,65}");
        assert_eq!(ElementSet::empty(3).to_string(), "{}");
    }
}
