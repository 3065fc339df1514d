use rand::Rng;
use rustc_hash::FxHashMap;

use super::{Element, GroupSpec};
use crate::error::{Error, Result};

/// How the step distribution weights the decorated generator words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// Uniform over the distinct group elements the words evaluate to.
    #[default]
    Distinct,
    /// Uniform over the formal words `(j, p, s, n, q)`, so an element's
    /// weight is proportional to the number of words evaluating to it.
    WordMultiplicity,
}

/// Symmetric generating set with its step distribution.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    elements: Vec<Element>,
    weights: Vec<f64>,
    /// Cumulative word counts, used for sampling.
    cumulative: Vec<u64>,
    weighting: Weighting,
}

impl GeneratorSet {
    /// Enumerates the decorated words `(a_j^e)^p · s · (a_n^e)^q` over unit
    /// steps `s` of the outermost lattice, `p, q ∈ {-1, 0, 1}` and inner
    /// generators `a_j, a_n`, and deduplicates them as group elements.
    pub fn build(spec: &GroupSpec, weighting: Weighting) -> Result<GeneratorSet> {
        let inner = spec
            .inner()
            .ok_or_else(|| Error::InvalidInput("generators need a spec with at least one wreath level".into()))?;
        let inner_gens: Vec<Element> = if inner.depth() == 0 {
            vec![Element::Leaf(1)]
        } else {
            GeneratorSet::build(&inner, weighting)?.elements
        };
        if inner_gens.is_empty() {
            return Err(Error::InvalidInput("empty inner generator list".into()));
        }

        // (a^e)^p for every inner generator and p ∈ {-1, 0, 1}, with repeats:
        // each formal letter is one word slot.
        let mut letters = Vec::with_capacity(3 * inner_gens.len());
        for a in &inner_gens {
            let a_inv = inner.invert(a)?;
            for power in [a_inv, inner.identity(), a.clone()] {
                letters.push(if power.is_identity() {
                    spec.identity()
                } else {
                    Element::lamp_at_origin(power)
                });
            }
        }

        let mut counts: FxHashMap<Element, u64> = FxHashMap::default();
        for &step in spec.levels()[0].unit_steps() {
            let step = Element::translation(step);
            for left in &letters {
                let prefix = spec.multiply(left, &step)?;
                for right in &letters {
                    let word = spec.multiply(&prefix, right)?;
                    *counts.entry(word).or_insert(0) += 1;
                }
            }
        }
        counts.remove(&spec.identity());

        let mut entries: Vec<(Element, u64)> = counts.into_iter().collect();
        entries.sort();
        let (elements, counts): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        Ok(Self::from_counts(elements, counts, weighting))
    }

    fn from_counts(elements: Vec<Element>, counts: Vec<u64>, weighting: Weighting) -> Self {
        let counts: Vec<u64> = match weighting {
            Weighting::Distinct => vec![1; elements.len()],
            Weighting::WordMultiplicity => counts,
        };
        let total: u64 = counts.iter().sum();
        let weights = counts.iter().map(|&c| c as f64 / total as f64).collect();
        let cumulative = counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        GeneratorSet {
            elements,
            weights,
            cumulative,
            weighting,
        }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, f64)> {
        self.elements.iter().zip(self.weights.iter().copied())
    }

    /// Index of a step drawn from the step distribution.
    #[inline]
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self.weighting {
            Weighting::Distinct => rng.random_range(0..self.elements.len()),
            Weighting::WordMultiplicity => {
                let total = *self.cumulative.last().expect("non-empty generator set");
                let u = rng.random_range(0..total);
                self.cumulative.partition_point(|&c| c <= u)
            }
        }
    }
}
