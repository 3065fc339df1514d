use rustc_hash::FxHashSet;

use super::{Element, GroupSpec, Lattice, Leaf, Point};

/// Lower and upper bounds on the word length of an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn contains(&self, length: f64) -> bool {
        self.lower <= length && length <= self.upper
    }
}

/// Sandwich bounds from lamp costs and a constructed tour.
///
/// Each generator changes at most two lamps by one inner generator, which
/// gives `lower = ½ Σ_z c_z`. Conversely, every lamp can be written by
/// stepping back and forth at its site while walking a lattice tour from
/// the origin through all lit sites to the base point, which gives
/// `upper = 2 (Σ_z c_z + tour)`. Inner lamp costs are bracketed
/// recursively; leaf costs are exact.
pub fn word_length_bracket(spec: &GroupSpec, a: &Element) -> Bracket {
    bracket(spec.levels(), spec.leaf(), a)
}

fn bracket(levels: &[Lattice], leaf: Leaf, a: &Element) -> Bracket {
    match (levels.split_first(), a) {
        (Some((&lattice, inner)), Element::Node(node)) => {
            let mut lower = 0.0;
            let mut upper = 0.0;
            for (_, v) in node.lamps() {
                let b = bracket(inner, leaf, v);
                lower += b.lower;
                upper += b.upper;
            }
            let sites: Vec<Point> = node.lamps().iter().map(|(p, _)| *p).collect();
            let tour = nearest_neighbor_tour(lattice, &sites, node.base()) as f64;
            Bracket {
                lower: 0.5 * lower,
                upper: 2.0 * (upper + tour),
            }
        }
        (_, Element::Leaf(v)) => {
            let c = leaf.word_length(*v) as f64;
            Bracket { lower: c, upper: c }
        }
        (None, Element::Node(_)) => Bracket {
            lower: f64::NAN,
            upper: f64::NAN,
        },
    }
}

/// Length of a lattice path from the origin visiting every site, always
/// moving to the nearest unvisited site (ties broken by point order), then
/// ending at `end`.
pub fn nearest_neighbor_tour(lattice: Lattice, sites: &[Point], end: Point) -> u64 {
    let mut remaining: FxHashSet<Point> = sites.iter().copied().collect();
    let mut at = Point::ORIGIN;
    let mut length = 0u64;
    remaining.remove(&at);
    while !remaining.is_empty() {
        let next = nearest(lattice, &remaining, at);
        length += at.l1_to(next);
        remaining.remove(&next);
        at = next;
    }
    length + at.l1_to(end)
}

fn nearest(lattice: Lattice, remaining: &FxHashSet<Point>, at: Point) -> Point {
    // Expanding L1 spheres while that is cheaper than scanning everything.
    let mut budget = remaining.len();
    let mut r: i32 = 1;
    loop {
        let ring_size = match lattice {
            Lattice::Z => 2,
            Lattice::Z2 => 4 * r as usize,
        };
        if ring_size > budget {
            return *remaining.iter().min_by_key(|p| (p.l1_to(at), **p)).expect("non-empty");
        }
        budget -= ring_size;
        let best = match lattice {
            Lattice::Z => [at + Point::new(-r, 0), at + Point::new(r, 0)]
                .into_iter()
                .find(|p| remaining.contains(p)),
            Lattice::Z2 => ring(at, r).filter(|p| remaining.contains(p)).min(),
        };
        if let Some(p) = best {
            return p;
        }
        r += 1;
    }
}

/// Points at L1 distance exactly `r` from `c`.
fn ring(c: Point, r: i32) -> impl Iterator<Item = Point> {
    (0..r).flat_map(move |i| {
        let j = r - i;
        [
            Point::new(c.x + i, c.y + j),
            Point::new(c.x + j, c.y - i),
            Point::new(c.x - i, c.y - j),
            Point::new(c.x - j, c.y + i),
        ]
    })
}
