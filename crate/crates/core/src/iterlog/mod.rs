//! Iterated logarithms and the functions built from them:
//! `T_{k,α} = exp^(k)((4k)^{1/α})`, `L̃_{k,α}(x) = x / (ln^(k) x)^α`, and
//! the concave extension `L_{k,α}` that is linear below a knot.
//!
//! Arguments may be far beyond `f64` range (`T_{2,1/2} = exp(exp(64))`), so
//! everything takes [`TowerReal`] and works with sums of logs.
//!
//! The checks here (second-difference scans and closed-form derivative
//! inequalities) produce [`CheckRow`] reports rather than panicking.

mod appendix;
mod funcs;
mod report;
mod scan;
mod tower;

pub use appendix::{appendix_inequality_check, tower_sample_points, AppendixReport};
pub use funcs::{
    composition_ratio, iterated_log, iterated_log_tower, iterated_logs, l_tilde, ln_l_tilde, threshold_t,
    ConcaveExtension, IterLogParams,
};
pub use report::{rows_to_csv, CheckRow, REPORT_HEADER};
pub use scan::{
    concavity_scan, reciprocal_iterlog_concavity, ReciprocalReport, ScanPoint, ScanReport, TowerFn, DEFAULT_TOLERANCE,
};
pub use tower::{TowerReal, LN_MAX};
