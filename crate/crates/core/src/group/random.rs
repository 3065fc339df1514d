//! Random canonical elements for property checks.

use rand::Rng;

use super::{Element, GroupSpec, Lattice, Leaf, Point};

/// Coordinates are drawn from `-SPREAD..=SPREAD`.
const SPREAD: i32 = 4;
const MAX_LAMPS: usize = 5;

/// A random canonical element with a handful of lamps at every level.
pub fn random_element<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> Element {
    random_at(spec.levels(), spec.leaf(), rng)
}

fn random_point<R: Rng + ?Sized>(lattice: Lattice, rng: &mut R) -> Point {
    let x = rng.random_range(-SPREAD..=SPREAD);
    match lattice {
        Lattice::Z => Point::new(x, 0),
        Lattice::Z2 => Point::new(x, rng.random_range(-SPREAD..=SPREAD)),
    }
}

fn random_leaf<R: Rng + ?Sized>(leaf: Leaf, rng: &mut R) -> i64 {
    match leaf {
        Leaf::Cyclic(m) => rng.random_range(0..m as i64),
        Leaf::Integers => rng.random_range(-6..=6),
    }
}

fn random_at<R: Rng + ?Sized>(levels: &[Lattice], leaf: Leaf, rng: &mut R) -> Element {
    let Some((&lattice, inner)) = levels.split_first() else {
        return Element::Leaf(random_leaf(leaf, rng));
    };
    let base = random_point(lattice, rng);
    let count = rng.random_range(0..=MAX_LAMPS);
    let mut lamps: Vec<(Point, Element)> = Vec::with_capacity(count);
    for _ in 0..count {
        let p = random_point(lattice, rng);
        if lamps.iter().any(|(q, _)| *q == p) {
            continue;
        }
        lamps.push((p, random_at(inner, leaf, rng)));
    }
    Element::from_parts(base, lamps).expect("keys deduplicated above")
}
