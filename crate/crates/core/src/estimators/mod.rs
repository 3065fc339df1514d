//! Drift and entropy of walks on wreath products.
//!
//! * Exact: convolution powers `μ^{*n}` for small `n`, with entropy, drift
//!   from breadth-first lengths, and the constants of the entropy/growth
//!   inequalities.
//! * Monte Carlo: word-length brackets at the walk's endpoint, and the
//!   reduction of the drift to a local-time functional of the base walk.
//! * Rate fitting: ratio bands and log-log slopes against a catalog of
//!   candidate growth rates.

mod drift;
mod exact;
mod rates;

pub use drift::{compose_drift, drift_mc_bracket, drift_mc_series, simulate_walk, DriftBracket, WalkState};
pub use exact::{
    drift_of, entropy_bounds_check, entropy_of, second_moment_of, Distribution, EntropyRow, EntropyTable,
    DEFAULT_SUPPORT_CAP,
};
pub use rates::{extended_catalog, rate_fit, standard_catalog, AsymptoticsReport, GrowthProxies, Rate};

/// `H(n)/n`, `ln v(n)/n`, `L(n)/n` at the last row of an entropy table.
pub fn growth_proxies(table: &EntropyTable) -> Option<GrowthProxies> {
    let last = table.rows.last().filter(|r| r.n >= 1)?;
    let n = last.n as f64;
    Some(GrowthProxies {
        n: last.n as u64,
        h_hat: last.entropy / n,
        v_hat: last.ln_growth / n,
        l_hat: last.drift / n,
    })
}
