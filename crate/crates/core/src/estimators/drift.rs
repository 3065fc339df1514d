use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{word_length_bracket, Element, GeneratorSet, GroupSpec, Point};
use crate::lattice::{functional_estimate, EstimateReport, Functional};
use crate::rng::{self, TrialRng};
use crate::stats::Summary;

/// Monte Carlo means of the word-length bracket at the walk's position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftBracket {
    pub n: u64,
    pub lower_mean: f64,
    pub lower_stderr: f64,
    pub upper_mean: f64,
    pub upper_stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl DriftBracket {
    /// `lower_mean − k σ ≤ value ≤ upper_mean + k σ`.
    pub fn contains_within(&self, value: f64, sigmas: f64) -> bool {
        self.lower_mean - sigmas * self.lower_stderr <= value && value <= self.upper_mean + sigmas * self.upper_stderr
    }
}

/// Position of a walk on a wreath product, updated in place: right
/// multiplication by a generator `(d, g)` sends `(t, f)` to
/// `(t + d, f · g(· − t))`, touching only the lamps of `g`.
pub struct WalkState<'a> {
    spec: &'a GroupSpec,
    inner: GroupSpec,
    base: Point,
    lamps: FxHashMap<Point, Element>,
}

impl<'a> WalkState<'a> {
    pub fn new(spec: &'a GroupSpec) -> Result<Self> {
        let inner = spec
            .inner()
            .ok_or_else(|| Error::InvalidInput("a walk needs at least one wreath level".into()))?;
        Ok(WalkState {
            spec,
            inner,
            base: Point::ORIGIN,
            lamps: FxHashMap::default(),
        })
    }

    pub fn step(&mut self, g: &Element) -> Result<()> {
        let node = g
            .as_node()
            .ok_or_else(|| Error::SpecMismatch("generator is not a wreath element".into()))?;
        for (q, v) in node.lamps() {
            let at = self.base + *q;
            let updated = match self.lamps.remove(&at) {
                Some(cur) => self.inner.multiply(&cur, v)?,
                None => v.clone(),
            };
            if !updated.is_identity() {
                self.lamps.insert(at, updated);
            }
        }
        self.base = self.base + node.base();
        Ok(())
    }

    pub fn element(&self) -> Element {
        let lamps: Vec<(Point, Element)> = self.lamps.iter().map(|(p, v)| (*p, v.clone())).collect();
        Element::from_parts(self.base, lamps).expect("lamp keys are distinct")
    }

    pub fn spec(&self) -> &GroupSpec {
        self.spec
    }
}

/// Endpoint of an `n`-step walk driven by `rng`.
pub fn simulate_walk(spec: &GroupSpec, gens: &GeneratorSet, n: u64, rng: &mut TrialRng) -> Result<Element> {
    let mut state = WalkState::new(spec)?;
    for _ in 0..n {
        state.step(&gens.elements()[gens.sample_index(rng)])?;
    }
    Ok(state.element())
}

/// Drift brackets at every `n` of an increasing grid. Each trial is one
/// walk of length `max n` on substream `trial` of `seed`, bracketed at
/// each checkpoint, so the entry for `n` equals what
/// [`drift_mc_bracket`] returns for that `n` alone.
pub fn drift_mc_series(
    spec: &GroupSpec,
    gens: &GeneratorSet,
    ns: &[u64],
    trials: u64,
    seed: u64,
) -> Result<Vec<DriftBracket>> {
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "n grid must be positive and strictly increasing".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let per_trial: Vec<Vec<(f64, f64)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::substream(seed, t);
            let mut state = WalkState::new(spec)?;
            let mut done = 0u64;
            let mut out = Vec::with_capacity(ns.len());
            for &n in ns {
                for _ in done..n {
                    state.step(&gens.elements()[gens.sample_index(&mut rng)])?;
                }
                done = n;
                let b = word_length_bracket(spec, &state.element());
                out.push((b.lower, b.upper));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let lower: Vec<f64> = per_trial.iter().map(|t| t[i].0).collect();
            let upper: Vec<f64> = per_trial.iter().map(|t| t[i].1).collect();
            let (l, u) = (Summary::of(&lower), Summary::of(&upper));
            DriftBracket {
                n,
                lower_mean: l.mean,
                lower_stderr: l.stderr,
                upper_mean: u.mean,
                upper_stderr: u.stderr,
                trials,
                seed,
            }
        })
        .collect())
}

/// Monte Carlo bracket on `E l(X_n)`: the mean of the word-length bracket
/// at the endpoint of `trials` independent walks.
pub fn drift_mc_bracket(spec: &GroupSpec, gens: &GeneratorSet, n: u64, trials: u64, seed: u64) -> Result<DriftBracket> {
    Ok(drift_mc_series(spec, gens, &[n], trials, seed)?[0])
}

/// The wreath drift reduced to the base walk: Monte Carlo mean of
/// `Σ_z L(b_z^(n))` over planar walks, with `L` the drift of the lamp group.
pub fn compose_drift(inner_drift: Functional, n: usize, trials: u64, seed: u64) -> EstimateReport {
    functional_estimate(inner_drift, n, trials, seed)
}
