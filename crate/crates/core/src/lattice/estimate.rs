use rayon::prelude::*;

use super::walk::direction;
use crate::group::Point;
use crate::rng::{self, DirectionSource};
use crate::stats::{quantile, Summary};

/// A real function of a visit count.
pub type Functional<'a> = &'a (dyn Fn(u64) -> f64 + Sync);

/// Monte Carlo mean of a per-trial quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub n: u64,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub master_seed: u64,
}

impl EstimateReport {
    pub fn from_samples(n: u64, master_seed: u64, samples: &[f64]) -> Self {
        let s = Summary::of(samples);
        EstimateReport {
            n,
            trials: samples.len() as u64,
            mean: s.mean,
            stderr: s.stderr,
            master_seed,
        }
    }
}

/// Everything recorded from one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub range: u64,
    pub origin_visits: u64,
    /// `Σ_z b_z`; equals `n + 1` on every trajectory.
    pub total_visits: u64,
    /// `Σ_z f(b_z)` for each requested functional, in request order.
    pub functionals: Vec<f64>,
}

/// Dense visit-count grid centred at the origin that doubles when the walk
/// leaves it. Only visited cells are touched between trials.
struct Scratch {
    half: i32,
    counts: Vec<u32>,
    visited: Vec<Point>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        let half = ((2.0 * (n as f64).sqrt()) as i32).clamp(16, 1 << 14);
        let side = (2 * half + 1) as usize;
        Scratch {
            half,
            counts: vec![0; side * side],
            visited: Vec::new(),
        }
    }

    #[inline]
    fn index(&self, p: Point) -> Option<usize> {
        let side = 2 * self.half + 1;
        let (x, y) = (p.x + self.half, p.y + self.half);
        (x >= 0 && y >= 0 && x < side && y < side).then(|| (y * side + x) as usize)
    }

    fn grow(&mut self) {
        let old: Vec<(Point, u32)> = self
            .visited
            .iter()
            .map(|&p| (p, self.counts[self.index(p).unwrap()]))
            .collect();
        self.half *= 2;
        let side = (2 * self.half + 1) as usize;
        self.counts = vec![0; side * side];
        for (p, c) in old {
            let i = self.index(p).unwrap();
            self.counts[i] = c;
        }
    }

    #[inline]
    fn visit(&mut self, p: Point) {
        let i = match self.index(p) {
            Some(i) => i,
            None => {
                self.grow();
                self.index(p).unwrap()
            }
        };
        if self.counts[i] == 0 {
            self.visited.push(p);
        }
        self.counts[i] += 1;
    }

    fn run(&mut self, n: usize, master_seed: u64, trial: u64, functionals: &[Functional]) -> TrialOutcome {
        let mut dirs = DirectionSource::new(rng::substream(master_seed, trial));
        let mut at = Point::ORIGIN;
        self.visit(at);
        for _ in 0..n {
            at = at + direction(dirs.next_direction());
            self.visit(at);
        }
        let mut total = 0u64;
        let mut sums = vec![crate::stats::CompensatedSum::new(); functionals.len()];
        for &p in &self.visited {
            let b = self.counts[self.index(p).unwrap()] as u64;
            total += b;
            for (acc, f) in sums.iter_mut().zip(functionals) {
                acc.add(f(b));
            }
        }
        let origin_visits = self.counts[self.index(Point::ORIGIN).unwrap()] as u64;
        let outcome = TrialOutcome {
            range: self.visited.len() as u64,
            origin_visits,
            total_visits: total,
            functionals: sums.iter().map(|s| s.value()).collect(),
        };
        for p in std::mem::take(&mut self.visited) {
            let i = self.index(p).unwrap();
            self.counts[i] = 0;
        }
        outcome
    }
}

/// Runs `trials` independent `n`-step walks, trial `i` on substream `i` of
/// `master_seed`, and records range, origin local time and the requested
/// functionals. Results are in trial order regardless of scheduling.
pub fn sweep(n: usize, trials: u64, master_seed: u64, functionals: &[Functional]) -> Vec<TrialOutcome> {
    (0..trials)
        .into_par_iter()
        .map_init(
            || Scratch::new(n),
            |scratch, i| scratch.run(n, master_seed, i, functionals),
        )
        .collect()
}

/// Monte Carlo estimate of `E Σ_z f(b_z^(n))`.
pub fn functional_estimate(f: Functional, n: usize, trials: u64, master_seed: u64) -> EstimateReport {
    let samples: Vec<f64> = sweep(n, trials, master_seed, &[f])
        .into_iter()
        .map(|t| t.functionals[0])
        .collect();
    EstimateReport::from_samples(n as u64, master_seed, &samples)
}

/// Range statistics with the tail check `Pr[R ≥ q1 n / ln n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeStatistics {
    pub n: u64,
    pub trials: u64,
    pub master_seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    /// `E[R] ln n / n`.
    pub normalized_mean: f64,
    /// `6 E[R]^2 + E[R]`.
    pub variance_bound: f64,
    /// Half the empirical normalized mean.
    pub q1: f64,
    /// Empirical `Pr[R ≥ q1 n / ln n]`.
    pub q2: f64,
}

impl RangeStatistics {
    pub fn from_ranges(n: u64, master_seed: u64, ranges: &[f64]) -> Self {
        let s = Summary::of(ranges);
        let scale = if n >= 2 { (n as f64).ln() / n as f64 } else { f64::NAN };
        let normalized_mean = s.mean * scale;
        let q1 = 0.5 * normalized_mean;
        let threshold = q1 / scale;
        let q2 = if n >= 2 {
            ranges.iter().filter(|&&r| r >= threshold).count() as f64 / ranges.len() as f64
        } else {
            f64::NAN
        };
        RangeStatistics {
            n,
            trials: ranges.len() as u64,
            master_seed,
            mean: s.mean,
            variance: s.variance,
            stderr: s.stderr,
            normalized_mean,
            variance_bound: 6.0 * s.mean * s.mean + s.mean,
            q1,
            q2,
        }
    }

    pub fn satisfies_variance_bound(&self) -> bool {
        self.variance <= self.variance_bound
    }
}

pub fn range_statistics(n: usize, trials: u64, master_seed: u64) -> RangeStatistics {
    let ranges: Vec<f64> = sweep(n, trials, master_seed, &[])
        .into_iter()
        .map(|t| t.range as f64)
        .collect();
    RangeStatistics::from_ranges(n as u64, master_seed, &ranges)
}

/// Local time at the origin: mean, its ratio to `ln n`, and the largest `K`
/// with empirical `Pr[b_0 ≥ K ln n] ≥ level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginLocalTime {
    pub report: EstimateReport,
    pub mean_over_log: f64,
    pub level: f64,
    pub k: f64,
    /// Empirical `Pr[b_0 ≥ K ln n]` at the fitted `K`.
    pub coverage: f64,
}

pub const ORIGIN_QUANTILE_LEVEL: f64 = 0.9;

pub fn origin_local_time(n: usize, trials: u64, master_seed: u64) -> OriginLocalTime {
    let visits: Vec<f64> = sweep(n, trials, master_seed, &[])
        .into_iter()
        .map(|t| t.origin_visits as f64)
        .collect();
    OriginLocalTime::from_visits(n as u64, master_seed, &visits, ORIGIN_QUANTILE_LEVEL)
}

impl OriginLocalTime {
    pub fn from_visits(n: u64, master_seed: u64, visits: &[f64], level: f64) -> Self {
        let report = EstimateReport::from_samples(n, master_seed, visits);
        let log_n = (n as f64).ln();
        // b_0 ≥ q holds for at least `level` of the trials when q is the
        // (1 - level) lower quantile.
        let q = quantile(visits, 1.0 - level);
        let k = q / log_n;
        let coverage = visits.iter().filter(|&&b| b >= k * log_n).count() as f64 / visits.len() as f64;
        OriginLocalTime {
            report,
            mean_over_log: report.mean / log_n,
            level,
            k,
            coverage,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{local_times, simulate_srw};

    #[test]
    fn sweep_reproduces_simulate_srw_for_trial_zero() {
        let f: Functional = &|b| (b as f64).sqrt();
        for n in [0usize, 1, 10, 3000] {
            let out = sweep(n, 3, 99, &[f]);
            let field = local_times(&simulate_srw(n, 99));
            assert_eq!(out[0].range, field.range());
            assert_eq!(out[0].origin_visits, field.get(Point::ORIGIN));
            assert_eq!(out[0].functionals[0], field.functional(|b| (b as f64).sqrt()));
        }
    }

    #[test]
    fn identity_functional_is_exact() {
        let id: Functional = &|b| b as f64;
        let r = functional_estimate(id, 4096, 50, 3);
        assert_eq!(r.mean, 4097.0);
        assert_eq!(r.stderr, 0.0);
        assert_eq!(r.trials, 50);
    }

    #[test]
    fn indicator_functional_equals_range() {
        let ind: Functional = &|b| (b > 0) as u64 as f64;
        let f = functional_estimate(ind, 2048, 64, 17);
        let r = range_statistics(2048, 64, 17);
        assert_eq!(f.mean, r.mean);
    }

    #[test]
    fn one_step_range() {
        let r = range_statistics(1, 20, 0);
        assert_eq!(r.mean, 2.0);
        assert_eq!(r.variance, 0.0);
        let o = origin_local_time(1, 20, 0);
        assert_eq!(o.report.mean, 1.0);
        assert_eq!(o.report.stderr, 0.0);
    }

    #[test]
    fn scratch_grows_beyond_initial_window() {
        // A tiny initial grid forces several doublings.
        let mut s = Scratch::new(0);
        let out = s.run(200_000, 5, 0, &[]);
        let field = local_times(&simulate_srw(200_000, 5));
        assert_eq!(out.range, field.range());
        assert_eq!(out.total_visits, 200_001);
        let again = s.run(200_000, 5, 0, &[]);
        assert_eq!(out, again);
    }

    #[test]
    fn origin_quantile_covers_level() {
        let o = origin_local_time(1 << 12, 400, 8);
        assert!(o.coverage >= 0.9);
        assert!(o.k > 0.0);
    }
}
