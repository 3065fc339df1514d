use super::funcs::{iterated_logs, threshold_t, IterLogParams};
use super::report::CheckRow;
use super::tower::TowerReal;
use crate::error::{Error, Result};

/// The derivative inequalities behind concavity of `L̃_{k,α}` at one point.
///
/// With `m = (ln^(k) x)^α`, `λ_j = ln^(j) x` and `Π_j = λ_1 ⋯ λ_j`:
/// `m' = α m / (x Π_k)`, and `r = α / m' = x λ_1 ⋯ λ_{k-1} λ_k^{1-α}` has
/// `x r'/r = 1 + Σ_{j<k} 1/Π_j + (1-α)/Π_k`. The three checks are
///
/// * `first`: `2x m'^2 < m m'/2`, i.e. `4α/Π_k < 1`;
/// * `second`: `-x m m'' ≤ 1.5 m m'`, i.e. `x r'/r ≤ 1.5`;
/// * `combined`: `2x m'^2 - x m m'' ≤ 2 m m'`, i.e. `(2α/Π_k + x r'/r)/2 ≤ 1`,
///   which is `L̃'' ≤ 0`.
///
/// Two informational rows report the size conditions used to derive them:
/// `m ≥ 4` and `min_j λ_j ≥ 2k`. At `x = T_{1,α}` the first is an equality.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixReport {
    pub x: TowerReal,
    pub first: CheckRow,
    pub second: CheckRow,
    pub combined: CheckRow,
    pub m_above_four: CheckRow,
    pub logs_above_2k: CheckRow,
}

impl AppendixReport {
    /// The three derivative inequalities hold.
    pub fn holds(&self) -> bool {
        self.first.pass && self.second.pass && self.combined.pass
    }

    pub fn rows(&self) -> Vec<CheckRow> {
        vec![
            self.first.clone(),
            self.second.clone(),
            self.combined.clone(),
            self.m_above_four.clone(),
            self.logs_above_2k.clone(),
        ]
    }
}

pub fn appendix_inequality_check(p: IterLogParams, x: &TowerReal) -> Result<AppendixReport> {
    if *x < threshold_t(p) {
        return Err(Error::Domain(format!(
            "{x} lies below T for k = {}, alpha = {}",
            p.k(),
            p.alpha()
        )));
    }
    let k = p.k() as usize;
    let alpha = p.alpha();
    let logs = iterated_logs(p.k(), x)?;
    // ln Π_j, accumulated; λ_j beyond float range contribute +inf.
    let mut ln_pi = 0.0;
    let mut inv_pi = Vec::with_capacity(k);
    for l in &logs {
        ln_pi += l.ln_f64();
        inv_pi.push((-ln_pi).exp());
    }
    let inv_pi_k = inv_pi[k - 1];
    let x_r_over_r = 1.0 + inv_pi[..k - 1].iter().sum::<f64>() + (1.0 - alpha) * inv_pi_k;

    let label = x.to_string();
    let lambda_k = logs[k - 1].to_f64().unwrap_or(f64::INFINITY);
    Ok(AppendixReport {
        x: *x,
        first: CheckRow::at_most(label.clone(), "first", 4.0 * alpha * inv_pi_k, 1.0, true),
        second: CheckRow::at_most(label.clone(), "second", x_r_over_r, 1.5, false),
        combined: CheckRow::at_most(
            label.clone(),
            "combined",
            0.5 * (2.0 * alpha * inv_pi_k + x_r_over_r),
            1.0,
            false,
        ),
        m_above_four: CheckRow::at_least(label.clone(), "m_ge_4", lambda_k.powf(alpha), 4.0, false),
        // The iterated logs decrease, so λ_k is the smallest.
        logs_above_2k: CheckRow::at_least(label, "logs_ge_2k", lambda_k, 2.0 * k as f64, false),
    })
}

/// `count` points `x = exp^(k)(t)` with `t` log-uniform on
/// `[(4k)^{1/α}, 10^3 (4k)^{1/α}]`, so `x` runs from `T_{k,α}` up through
/// tower-sized values.
pub fn tower_sample_points(p: IterLogParams, count: usize) -> Vec<TowerReal> {
    let t0 = (4.0 * p.k() as f64).powf(1.0 / p.alpha());
    let (a, b) = (t0.ln(), (1e3 * t0).ln());
    (0..count)
        .map(|i| {
            let frac = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
            let t = if i == 0 { t0 } else { (a + (b - a) * frac).exp() };
            TowerReal::tower(p.k(), t)
        })
        .collect()
}
