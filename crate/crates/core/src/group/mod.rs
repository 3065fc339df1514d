//! Iterated wreath products `L_1 wr (L_2 wr ( ... wr F))` over the lattices
//! `Z` and `Z^2`, with a finite cyclic or infinite cyclic leaf.

mod ball;
mod bracket;
mod codec;
mod element;
mod generators;
pub mod random;
pub mod verify;

pub use ball::{Ball, DEFAULT_BALL_CAP};
pub use bracket::{word_length_bracket, Bracket};
pub use element::{Element, Node, Point};
pub use generators::{GeneratorSet, Weighting};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Base lattice of one level of the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lattice {
    Z,
    Z2,
}

impl Lattice {
    /// The `±` unit steps, in a fixed order.
    pub fn unit_steps(self) -> &'static [Point] {
        const Z: [Point; 2] = [Point::new(1, 0), Point::new(-1, 0)];
        const Z2: [Point; 4] = [Point::new(1, 0), Point::new(-1, 0), Point::new(0, 1), Point::new(0, -1)];
        match self {
            Lattice::Z => &Z,
            Lattice::Z2 => &Z2,
        }
    }

    pub fn contains(self, p: Point) -> bool {
        match self {
            Lattice::Z => p.y == 0,
            Lattice::Z2 => true,
        }
    }
}

/// Leaf group: `Z/mZ` (m ≥ 2) or `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Leaf {
    Cyclic(u32),
    Integers,
}

impl Leaf {
    /// Order of the leaf, 0 meaning infinite cyclic.
    pub fn order(self) -> u32 {
        match self {
            Leaf::Cyclic(m) => m,
            Leaf::Integers => 0,
        }
    }

    pub fn from_order(order: u32) -> Result<Leaf> {
        match order {
            0 => Ok(Leaf::Integers),
            1 => Err(Error::InvalidInput(
                "leaf order must be 0 (infinite) or at least 2".into(),
            )),
            m => Ok(Leaf::Cyclic(m)),
        }
    }

    #[inline]
    pub(crate) fn reduce(self, v: i64) -> i64 {
        match self {
            Leaf::Cyclic(m) => v.rem_euclid(m as i64),
            Leaf::Integers => v,
        }
    }

    /// Word length with respect to `{1, -1}`.
    #[inline]
    pub fn word_length(self, v: i64) -> u64 {
        match self {
            Leaf::Cyclic(m) => {
                let r = v.rem_euclid(m as i64) as u64;
                r.min(m as u64 - r)
            }
            Leaf::Integers => v.unsigned_abs(),
        }
    }
}

/// An iterated wreath product, outermost level first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    levels: Vec<Lattice>,
    leaf: Leaf,
}

impl GroupSpec {
    pub fn new(levels: Vec<Lattice>, leaf: Leaf) -> Self {
        Self { levels, leaf }
    }

    /// `Z^2 wr ... wr Z^2 wr C_m` with `depth` copies of `Z^2`.
    pub fn planar_tower(depth: usize, leaf: Leaf) -> Self {
        Self::new(vec![Lattice::Z2; depth], leaf)
    }

    pub fn levels(&self) -> &[Lattice] {
        &self.levels
    }

    pub fn leaf(&self) -> Leaf {
        self.leaf
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// The group sitting in the lamps of the outermost level.
    pub fn inner(&self) -> Option<GroupSpec> {
        (!self.levels.is_empty()).then(|| GroupSpec::new(self.levels[1..].to_vec(), self.leaf))
    }

    pub fn identity(&self) -> Element {
        Element::identity_at_depth(self.levels.len())
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        element::multiply(&self.levels, self.leaf, a, b)
    }

    pub fn invert(&self, a: &Element) -> Result<Element> {
        element::invert(&self.levels, self.leaf, a)
    }

    /// Checks that `a` is a canonical element of this group.
    pub fn validate(&self, a: &Element) -> Result<()> {
        element::validate(&self.levels, self.leaf, a)
    }

    pub fn encode(&self, a: &Element) -> String {
        codec::encode(&self.levels, a)
    }

    pub fn decode(&self, text: &str) -> Result<Element> {
        codec::decode(self, text)
    }

    pub fn generators(&self) -> Result<GeneratorSet> {
        GeneratorSet::build(self, Weighting::Distinct)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for level in &self.levels {
            match level {
                Lattice::Z => write!(f, "Z wr ")?,
                Lattice::Z2 => write!(f, "Z2 wr ")?,
            }
        }
        match self.leaf {
            Leaf::Cyclic(m) => write!(f, "C{m}"),
            Leaf::Integers => write!(f, "Z"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses e.g. `"Z2 wr Z2 wr C2"` or `"Z wr Z"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut offset = 0;
        for part in s.split("wr") {
            let lead = part.len() - part.trim_start().len();
            tokens.push((offset + lead, part.trim()));
            offset += part.len() + 2;
        }
        let (&(leaf_pos, leaf_tok), level_toks) =
            tokens.split_last().ok_or_else(|| Error::parse(0, "empty group spec"))?;
        let mut levels = Vec::with_capacity(level_toks.len());
        for &(pos, tok) in level_toks {
            levels.push(match tok {
                "Z" => Lattice::Z,
                "Z2" => Lattice::Z2,
                "" => return Err(Error::parse(pos, "missing lattice before 'wr'")),
                other => {
                    return Err(Error::parse(
                        pos,
                        format!("unknown lattice '{other}', expected Z or Z2"),
                    ))
                }
            });
        }
        let leaf = match leaf_tok {
            "Z" => Leaf::Integers,
            "" => return Err(Error::parse(leaf_pos, "missing leaf group")),
            t if t.starts_with('C') => {
                let m: u32 = t[1..]
                    .parse()
                    .map_err(|_| Error::parse(leaf_pos + 1, format!("bad cyclic order in '{t}'")))?;
                if m < 2 {
                    return Err(Error::parse(leaf_pos + 1, "cyclic order must be at least 2"));
                }
                Leaf::Cyclic(m)
            }
            other => {
                return Err(Error::parse(
                    leaf_pos,
                    format!("unknown leaf '{other}', expected Cm or Z"),
                ))
            }
        };
        Ok(GroupSpec::new(levels, leaf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["Z2 wr C2", "Z wr C2", "Z2 wr Z2 wr C2", "Z wr Z", "C5", "Z"] {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        let spec: GroupSpec = "Z2 wr Z wr C3".parse().unwrap();
        assert_eq!(spec.levels(), &[Lattice::Z2, Lattice::Z]);
        assert_eq!(spec.leaf(), Leaf::Cyclic(3));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match "Z2 wr Q".parse::<GroupSpec>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!("Z3 wr C2".parse::<GroupSpec>().is_err());
        assert!("Z2 wr C1".parse::<GroupSpec>().is_err());
        assert!("Z2 wr Z2".parse::<GroupSpec>().is_err());
        assert!("".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn leaf_lengths() {
        assert_eq!(Leaf::Cyclic(5).word_length(3), 2);
        assert_eq!(Leaf::Cyclic(2).word_length(1), 1);
        assert_eq!(Leaf::Integers.word_length(-4), 4);
        assert!(Leaf::from_order(1).is_err());
        assert_eq!(Leaf::from_order(0).unwrap(), Leaf::Integers);
    }
}
