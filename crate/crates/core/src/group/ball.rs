use indexmap::IndexMap;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;

use super::{Element, GeneratorSet, GroupSpec};
use crate::error::{Error, Result};

pub const DEFAULT_BALL_CAP: usize = 10_000_000;

const EXPANSION_CHUNK: usize = 4096;

/// The ball of radius `r` in the Cayley graph, with exact word lengths.
///
/// Elements are kept in breadth-first discovery order, so the sphere of
/// radius `k` is the contiguous index range `counts[k-1]..counts[k]`.
#[derive(Debug, Clone)]
pub struct Ball {
    spec: GroupSpec,
    radius: u32,
    lengths: IndexMap<Element, u32, FxBuildHasher>,
    counts: Vec<u64>,
}

impl Ball {
    /// Breadth-first closure from the identity under right multiplication
    /// by the generators. Fails once more than `cap` elements are stored.
    pub fn enumerate(spec: &GroupSpec, gens: &GeneratorSet, radius: u32, cap: usize) -> Result<Ball> {
        let mut lengths: IndexMap<Element, u32, FxBuildHasher> = IndexMap::default();
        lengths.insert(spec.identity(), 0);
        let mut counts = vec![1u64];
        let mut sphere = 0..1usize;
        for r in 1..=radius {
            for chunk_start in sphere.clone().step_by(EXPANSION_CHUNK) {
                let chunk_end = (chunk_start + EXPANSION_CHUNK).min(sphere.end);
                let frontier: Vec<&Element> = (chunk_start..chunk_end)
                    .map(|i| lengths.get_index(i).unwrap().0)
                    .collect();
                let products: Vec<Element> = frontier
                    .par_iter()
                    .map(|g| {
                        gens.elements()
                            .iter()
                            .map(|s| spec.multiply(g, s))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .flatten()
                    .collect();
                for h in products {
                    if !lengths.contains_key(&h) {
                        if lengths.len() >= cap {
                            return Err(Error::Resource {
                                what: "ball size",
                                size: lengths.len() + 1,
                                cap,
                            });
                        }
                        lengths.insert(h, r);
                    }
                }
            }
            sphere = sphere.end..lengths.len();
            counts.push(lengths.len() as u64);
        }
        Ok(Ball {
            spec: spec.clone(),
            radius,
            lengths,
            counts,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Exact word length, if `g` lies in the ball.
    pub fn length(&self, g: &Element) -> Option<u32> {
        self.lengths.get(g).copied()
    }

    /// Word length looked up by canonical encoding.
    pub fn length_of_encoded(&self, text: &str) -> Result<Option<u32>> {
        let g = self.spec.decode(text)?;
        Ok(self.length(&g))
    }

    /// Cumulative growth `v(0..=radius)`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Elements with their lengths in breadth-first order.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.lengths.iter().map(|(g, &l)| (g, l))
    }

    /// Elements of length exactly `k`.
    pub fn sphere(&self, k: u32) -> impl Iterator<Item = &Element> {
        let (start, end) = match k {
            0 => (0, 1),
            k if k <= self.radius => (self.counts[k as usize - 1] as usize, self.counts[k as usize] as usize),
            _ => (0, 0),
        };
        (start..end).map(move |i| self.lengths.get_index(i).unwrap().0)
    }
}
