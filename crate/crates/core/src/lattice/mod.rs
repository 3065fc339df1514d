//! Simple random walk on `Z^2`: trajectories, local times, range, and
//! Monte Carlo estimates of local-time functionals `E Σ_z f(b_z^(n))`.
//!
//! Visit counts include time 0, so `Σ_z b_z^(n) = n + 1` exactly.

mod estimate;
mod walk;

pub use estimate::{
    functional_estimate, origin_local_time, range_statistics, sweep, EstimateReport, Functional, OriginLocalTime,
    RangeStatistics, TrialOutcome, ORIGIN_QUANTILE_LEVEL,
};
pub use walk::{local_times, simulate_srw, LocalTimeField, Trajectory};
