//! Counting checks of the group law, the generating set and the bracket.

use rayon::prelude::*;

use super::random::random_element;
use super::{word_length_bracket, Ball, GeneratorSet, GroupSpec};
use crate::error::Result;
use crate::rng;

/// Number of cases examined and how many failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckCount {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
}

impl CheckCount {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const AXIOMS: [&str; 5] = [
    "associativity",
    "identity",
    "inverse",
    "codec_round_trip",
    "canonical_form",
];

/// Associativity, two-sided identity and inverse, encoding round trip and
/// canonical form on `count` random triples; triple `i` is drawn from
/// substream `i` of `seed`.
pub fn axiom_checks(spec: &GroupSpec, count: u64, seed: u64) -> Result<Vec<CheckCount>> {
    let e = spec.identity();
    let per_triple: Vec<[bool; 5]> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::substream(seed, i);
            let a = random_element(spec, &mut r);
            let b = random_element(spec, &mut r);
            let c = random_element(spec, &mut r);
            let ab = spec.multiply(&a, &b)?;
            let left = spec.multiply(&ab, &c)?;
            let right = spec.multiply(&a, &spec.multiply(&b, &c)?)?;
            let a_inv = spec.invert(&a)?;
            let identity = spec.multiply(&a, &e)? == a && spec.multiply(&e, &a)? == a;
            let inverse = spec.multiply(&a, &a_inv)?.is_identity() && spec.multiply(&a_inv, &a)?.is_identity();
            let round_trip = [&a, &ab, &left]
                .iter()
                .all(|g| spec.decode(&spec.encode(g)).as_ref() == Ok(*g));
            let canonical = [&ab, &left, &right, &a_inv].iter().all(|g| spec.validate(g).is_ok());
            Ok([left != right, !identity, !inverse, !round_trip, !canonical])
        })
        .collect::<Result<_>>()?;
    Ok(AXIOMS
        .iter()
        .enumerate()
        .map(|(k, &name)| CheckCount {
            name,
            cases: count,
            failures: per_triple.iter().filter(|f| f[k]).count() as u64,
        })
        .collect())
}

/// Symmetric, identity-free generating set whose elements are distinct.
pub fn generator_checks(spec: &GroupSpec, gens: &GeneratorSet) -> Result<Vec<CheckCount>> {
    let mut symmetric = 0;
    let mut identity = 0;
    for g in gens.elements() {
        let inv = spec.invert(g)?;
        if !gens.elements().contains(&inv) {
            symmetric += 1;
        }
        if g.is_identity() {
            identity += 1;
        }
    }
    let n = gens.len() as u64;
    let mut sorted = gens.elements().to_vec();
    sorted.dedup();
    Ok(vec![
        CheckCount {
            name: "generators_symmetric",
            cases: n,
            failures: symmetric,
        },
        CheckCount {
            name: "generators_nontrivial",
            cases: n,
            failures: identity,
        },
        CheckCount {
            name: "generators_distinct",
            cases: n,
            failures: n - sorted.len() as u64,
        },
    ])
}

/// `lower ≤ l(g) ≤ upper` for every element of the ball.
pub fn bracket_soundness(ball: &Ball) -> CheckCount {
    let spec = ball.spec();
    let elements: Vec<_> = ball.iter().collect();
    let failures = elements
        .par_iter()
        .filter(|(g, l)| !word_length_bracket(spec, g).contains(*l as f64))
        .count() as u64;
    CheckCount {
        name: "bracket_soundness",
        cases: elements.len() as u64,
        failures,
    }
}

/// `l(g) = l(g^{-1})` whenever `g^{-1}` lies in the ball.
pub fn metric_symmetry(ball: &Ball) -> Result<CheckCount> {
    let spec = ball.spec();
    let elements: Vec<_> = ball.iter().collect();
    let failures = elements
        .par_iter()
        .map(|(g, l)| Ok(ball.length(&spec.invert(g)?) != Some(*l)))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&f| f)
        .count() as u64;
    Ok(CheckCount {
        name: "metric_symmetry",
        cases: elements.len() as u64,
        failures,
    })
}
