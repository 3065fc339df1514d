use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

use super::{Lattice, Leaf};
use crate::error::{Error, Result};

/// A lattice point. Points of `Z` keep `y == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn l1(self) -> u64 {
        self.x.unsigned_abs() as u64 + self.y.unsigned_abs() as u64
    }

    #[inline]
    pub fn l1_to(self, other: Point) -> u64 {
        (self - other).l1()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A group element of an iterated wreath product.
///
/// Elements are always canonical: lamp keys strictly increasing and no lamp
/// holding the inner identity. Structural equality is therefore group
/// equality, and the derived `Ord`/`Hash` can key maps directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Residue (finite cyclic leaf) or integer (infinite cyclic leaf).
    Leaf(i64),
    Node(Node),
}

/// The pair `(base, lamps)` of one wreath level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    base: Point,
    lamps: Box<[(Point, Element)]>,
}

impl Node {
    pub fn base(&self) -> Point {
        self.base
    }

    /// Lamp configuration, sorted by point.
    pub fn lamps(&self) -> &[(Point, Element)] {
        &self.lamps
    }

    pub fn lamp(&self, at: Point) -> Option<&Element> {
        self.lamps
            .binary_search_by(|(p, _)| p.cmp(&at))
            .ok()
            .map(|i| &self.lamps[i].1)
    }
}

impl Element {
    pub fn identity_at_depth(depth: usize) -> Element {
        if depth == 0 {
            Element::Leaf(0)
        } else {
            Element::Node(Node {
                base: Point::ORIGIN,
                lamps: Box::new([]),
            })
        }
    }

    /// Builds an element from parts, sorting lamps and dropping identities.
    /// Fails on duplicate lamp keys.
    pub fn from_parts(base: Point, lamps: Vec<(Point, Element)>) -> Result<Element> {
        let mut lamps: Vec<_> = lamps.into_iter().filter(|(_, v)| !v.is_identity()).collect();
        lamps.sort_by_key(|l| l.0);
        if lamps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("duplicate lamp key".into()));
        }
        Ok(Element::Node(Node {
            base,
            lamps: lamps.into_boxed_slice(),
        }))
    }

    /// Builds a node from lamps already sorted and free of identities.
    pub(crate) fn from_sorted(base: Point, lamps: Vec<(Point, Element)>) -> Element {
        debug_assert!(lamps.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(lamps.iter().all(|(_, v)| !v.is_identity()));
        Element::Node(Node {
            base,
            lamps: lamps.into_boxed_slice(),
        })
    }

    /// `(0, {0 ↦ inner})`: the inner element placed at the origin.
    pub fn lamp_at_origin(inner: Element) -> Element {
        Element::from_parts(Point::ORIGIN, vec![(Point::ORIGIN, inner)]).expect("single lamp cannot collide")
    }

    /// `(step, ∅)`: a pure move of the base point.
    pub fn translation(step: Point) -> Element {
        Element::from_sorted(step, Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Leaf(v) => *v == 0,
            Element::Node(n) => n.base == Point::ORIGIN && n.lamps.is_empty(),
        }
    }

    pub fn as_node(&self) -> Option<&Node> {
        match self {
            Element::Node(n) => Some(n),
            Element::Leaf(_) => None,
        }
    }

    pub fn as_leaf(&self) -> Option<i64> {
        match self {
            Element::Leaf(v) => Some(*v),
            Element::Node(_) => None,
        }
    }

    /// Base point of the outermost level (origin for a leaf).
    pub fn base(&self) -> Point {
        self.as_node().map_or(Point::ORIGIN, |n| n.base)
    }

    /// Number of lit lamps at the outermost level.
    pub fn support_size(&self) -> usize {
        self.as_node().map_or(0, |n| n.lamps.len())
    }
}

fn mismatch(what: &str) -> Error {
    Error::SpecMismatch(what.to_string())
}

/// `(t1, f1)(t2, f2) = (t1 + t2, x ↦ f1(x) f2(x - t1))`.
///
/// Shape mismatches are reported where the product touches them; lamps that
/// are only copied are not re-validated (see [`validate`]).
pub(crate) fn multiply(levels: &[Lattice], leaf: Leaf, a: &Element, b: &Element) -> Result<Element> {
    match (levels.split_first(), a, b) {
        (None, Element::Leaf(x), Element::Leaf(y)) => {
            let sum = x
                .checked_add(*y)
                .ok_or_else(|| Error::Domain("leaf integer overflow".into()))?;
            Ok(Element::Leaf(leaf.reduce(sum)))
        }
        (Some((&lattice, inner)), Element::Node(na), Element::Node(nb)) => {
            if !lattice.contains(na.base) || !lattice.contains(nb.base) {
                return Err(mismatch("base point outside the level's lattice"));
            }
            let shift = na.base;
            let mut out = Vec::with_capacity(na.lamps.len() + nb.lamps.len());
            let mut ia = na.lamps.iter().peekable();
            let mut ib = nb.lamps.iter().map(|(p, v)| (*p + shift, v)).peekable();
            loop {
                let ord = match (ia.peek(), ib.peek()) {
                    (None, None) => break,
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (Some((pa, _)), Some((pb, _))) => pa.cmp(pb),
                };
                match ord {
                    Ordering::Less => {
                        let (p, v) = ia.next().unwrap();
                        out.push((*p, v.clone()));
                    }
                    Ordering::Greater => {
                        let (p, v) = ib.next().unwrap();
                        out.push((p, v.clone()));
                    }
                    Ordering::Equal => {
                        let (p, va) = ia.next().unwrap();
                        let (_, vb) = ib.next().unwrap();
                        let prod = multiply(inner, leaf, va, vb)?;
                        if !prod.is_identity() {
                            out.push((*p, prod));
                        }
                    }
                }
            }
            Ok(Element::from_sorted(na.base + nb.base, out))
        }
        (None, _, _) => Err(mismatch("expected leaf values")),
        (Some(_), _, _) => Err(mismatch("expected wreath-level elements")),
    }
}

/// `(t, f)^{-1} = (-t, x ↦ f(x + t)^{-1})`.
pub(crate) fn invert(levels: &[Lattice], leaf: Leaf, a: &Element) -> Result<Element> {
    match (levels.split_first(), a) {
        (None, Element::Leaf(x)) => Ok(Element::Leaf(leaf.reduce(-x))),
        (Some((&lattice, inner)), Element::Node(n)) => {
            if !lattice.contains(n.base) {
                return Err(mismatch("base point outside the level's lattice"));
            }
            let lamps = n
                .lamps
                .iter()
                .map(|(p, v)| Ok((*p - n.base, invert(inner, leaf, v)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Element::from_sorted(-n.base, lamps))
        }
        (None, _) => Err(mismatch("expected leaf value")),
        (Some(_), _) => Err(mismatch("expected wreath-level element")),
    }
}

pub(crate) fn validate(levels: &[Lattice], leaf: Leaf, a: &Element) -> Result<()> {
    match (levels.split_first(), a) {
        (None, Element::Leaf(v)) => {
            if leaf.reduce(*v) != *v {
                return Err(mismatch("leaf residue not reduced"));
            }
            Ok(())
        }
        (Some((&lattice, inner)), Element::Node(n)) => {
            if !lattice.contains(n.base) {
                return Err(mismatch("base point outside the level's lattice"));
            }
            for w in n.lamps.windows(2) {
                if w[0].0 >= w[1].0 {
                    return Err(mismatch("lamp keys not strictly increasing"));
                }
            }
            for (p, v) in n.lamps.iter() {
                if !lattice.contains(*p) {
                    return Err(mismatch("lamp key outside the level's lattice"));
                }
                if v.is_identity() {
                    return Err(mismatch("lamp stores the inner identity"));
                }
                validate(inner, leaf, v)?;
            }
            Ok(())
        }
        (None, _) => Err(mismatch("element deeper than the spec")),
        (Some(_), _) => Err(mismatch("element shallower than the spec")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn z2c2() -> GroupSpec {
        "Z2 wr C2".parse().unwrap()
    }

    #[test]
    fn identity_is_neutral_and_self_inverse() {
        let g = z2c2();
        let e = g.identity();
        assert_eq!(e, Element::from_parts(Point::ORIGIN, vec![]).unwrap());
        assert_eq!(g.multiply(&e, &e).unwrap(), e);
        assert_eq!(g.invert(&e).unwrap(), e);
    }

    #[test]
    fn translation_then_lamp_shifts_the_lamp() {
        // ((1,0),∅) · ((0,0),{(0,0)↦a}) = ((1,0),{(1,0)↦a})
        let g = z2c2();
        let t = Element::translation(Point::new(1, 0));
        let lamp = Element::lamp_at_origin(Element::Leaf(1));
        let expected = Element::from_parts(Point::new(1, 0), vec![(Point::new(1, 0), Element::Leaf(1))]).unwrap();
        assert_eq!(g.multiply(&t, &lamp).unwrap(), expected);
        // the other order leaves the lamp at the origin
        let expected = Element::from_parts(Point::new(1, 0), vec![(Point::ORIGIN, Element::Leaf(1))]).unwrap();
        assert_eq!(g.multiply(&lamp, &t).unwrap(), expected);
    }

    #[test]
    fn inverse_of_lit_translation() {
        // ((1,0),{(0,0)↦a}) ↦ ((−1,0),{(−1,0)↦a⁻¹})
        let g: GroupSpec = "Z2 wr C3".parse().unwrap();
        let a = Element::from_parts(Point::new(1, 0), vec![(Point::ORIGIN, Element::Leaf(1))]).unwrap();
        let expected = Element::from_parts(Point::new(-1, 0), vec![(Point::new(-1, 0), Element::Leaf(2))]).unwrap();
        assert_eq!(g.invert(&a).unwrap(), expected);
        assert!(g.multiply(&a, &expected).unwrap().is_identity());
    }

    #[test]
    fn identity_lamps_are_pruned() {
        let g = z2c2();
        let lamp = Element::lamp_at_origin(Element::Leaf(1));
        let sq = g.multiply(&lamp, &lamp).unwrap();
        assert!(sq.is_identity());
        assert_eq!(sq.support_size(), 0);
    }

    #[test]
    fn mismatched_depths_are_rejected() {
        let g = z2c2();
        let deep: GroupSpec = "Z2 wr Z2 wr C2".parse().unwrap();
        let x = Element::lamp_at_origin(Element::lamp_at_origin(Element::Leaf(1)));
        deep.validate(&x).unwrap();
        assert!(matches!(g.multiply(&x, &x), Err(Error::SpecMismatch(_))));
        assert!(g.validate(&x).is_err());
        let zc2: GroupSpec = "Z wr C2".parse().unwrap();
        let off_axis = Element::translation(Point::new(0, 1));
        assert!(zc2.multiply(&off_axis, &off_axis).is_err());
    }

    #[test]
    fn from_parts_rejects_duplicates() {
        let dup = vec![(Point::ORIGIN, Element::Leaf(1)), (Point::ORIGIN, Element::Leaf(1))];
        assert!(Element::from_parts(Point::ORIGIN, dup).is_err());
    }
}
