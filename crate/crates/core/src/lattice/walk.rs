use std::collections::BTreeMap;

use crate::group::Point;
use crate::rng::{self, DirectionSource};

const DIRECTIONS: [Point; 4] = [Point::new(1, 0), Point::new(-1, 0), Point::new(0, 1), Point::new(0, -1)];

#[inline]
pub(crate) fn direction(code: u8) -> Point {
    DIRECTIONS[code as usize]
}

/// A simple random walk path `X_0 = 0, X_1, ..., X_n` on `Z^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub seed: u64,
    pub positions: Vec<Point>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.positions.len() - 1
    }

    /// One `(x,y)` per line, for debug dumps.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.positions.len() * 8);
        for p in &self.positions {
            out.push_str(&format!("({},{})\n", p.x, p.y));
        }
        out
    }

    /// Range `R^(m)` of every prefix `m = 0..=n`.
    pub fn prefix_ranges(&self) -> Vec<u64> {
        let mut seen = rustc_hash::FxHashSet::default();
        self.positions
            .iter()
            .map(|p| {
                seen.insert(*p);
                seen.len() as u64
            })
            .collect()
    }
}

/// `n` uniform nearest-neighbour steps from the origin. The path is a pure
/// function of `seed`, and equals trial 0 of any Monte Carlo run whose
/// master seed is `seed`.
pub fn simulate_srw(n: usize, seed: u64) -> Trajectory {
    let mut dirs = DirectionSource::new(rng::single(seed));
    let mut positions = Vec::with_capacity(n + 1);
    let mut at = Point::ORIGIN;
    positions.push(at);
    for _ in 0..n {
        at = at + direction(dirs.next_direction());
        positions.push(at);
    }
    Trajectory { seed, positions }
}

/// Visit counts `b_z^(n)` of a trajectory, counting time 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalTimeField {
    counts: BTreeMap<Point, u64>,
    n: usize,
}

impl LocalTimeField {
    pub fn of(t: &Trajectory) -> Self {
        let mut counts = BTreeMap::new();
        for p in &t.positions {
            *counts.entry(*p).or_insert(0) += 1;
        }
        LocalTimeField { counts, n: t.steps() }
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn get(&self, z: Point) -> u64 {
        self.counts.get(&z).copied().unwrap_or(0)
    }

    /// Number of distinct visited sites.
    pub fn range(&self) -> u64 {
        self.counts.len() as u64
    }

    /// `Σ_z b_z`, always `n + 1`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, u64)> + '_ {
        self.counts.iter().map(|(p, c)| (*p, *c))
    }

    /// `Σ_z f(b_z)` over visited sites.
    pub fn functional(&self, f: impl Fn(u64) -> f64) -> f64 {
        crate::stats::compensated_sum(self.counts.values().map(|&b| f(b)))
    }
}

/// Convenience wrapper matching [`LocalTimeField::of`].
pub fn local_times(t: &Trajectory) -> LocalTimeField {
    LocalTimeField::of(t)
}
