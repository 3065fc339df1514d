use std::fmt;

use crate::error::{Error, Result};
use crate::stats::{band, ols_slope};

/// A candidate growth rate `ρ(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rate {
    /// `n^e`.
    Power(f64),
    /// `n / (ln^(k) n)^α`.
    IteratedLog { k: u32, alpha: f64 },
}

impl Rate {
    pub fn eval(&self, n: f64) -> f64 {
        match *self {
            Rate::Power(e) => n.powf(e),
            Rate::IteratedLog { k, alpha } => {
                let mut l = n;
                for _ in 0..k {
                    l = l.ln();
                }
                if l > 0.0 {
                    n / l.powf(alpha)
                } else {
                    f64::NAN
                }
            }
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    /// `n^{1 − 2^{−k}}`.
    pub fn root_family(k: u32) -> Rate {
        Rate::Power(1.0 - 0.5f64.powi(k as i32))
    }

    /// Inverse of [`Rate::name`] for the names it produces.
    pub fn parse(name: &str) -> Result<Rate> {
        let bad = || Error::InvalidInput(format!("unknown rate name {name:?}"));
        let s = name.trim();
        match s {
            "n" => return Ok(Rate::Power(1.0)),
            "sqrt n" => return Ok(Rate::Power(0.5)),
            "n/ln n" => return Ok(Rate::IteratedLog { k: 1, alpha: 1.0 }),
            "n/ln ln n" => return Ok(Rate::IteratedLog { k: 2, alpha: 1.0 }),
            _ => {}
        }
        if let Some(e) = s.strip_prefix("n^") {
            if let Some((a, b)) = e.split_once('/') {
                let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                return Ok(Rate::Power(a / b));
            }
            return e.parse().map(Rate::Power).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix("n/(ln^(") {
            let (k, rest) = rest.split_once(") n)^").ok_or_else(bad)?;
            return Ok(Rate::IteratedLog {
                k: k.parse().map_err(|_| bad())?,
                alpha: rest.parse().map_err(|_| bad())?,
            });
        }
        Err(bad())
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Rate::Power(1.0) => write!(f, "n"),
            Rate::Power(0.5) => write!(f, "sqrt n"),
            Rate::Power(0.75) => write!(f, "n^3/4"),
            Rate::Power(e) => write!(f, "n^{e}"),
            Rate::IteratedLog { k: 1, alpha: 1.0 } => write!(f, "n/ln n"),
            Rate::IteratedLog { k: 2, alpha: 1.0 } => write!(f, "n/ln ln n"),
            Rate::IteratedLog { k, alpha } => write!(f, "n/(ln^({k}) n)^{alpha}"),
        }
    }
}

/// `n, sqrt n, n/ln n, n/ln ln n, n^3/4`.
pub fn standard_catalog() -> Vec<Rate> {
    vec![
        Rate::Power(1.0),
        Rate::Power(0.5),
        Rate::IteratedLog { k: 1, alpha: 1.0 },
        Rate::IteratedLog { k: 2, alpha: 1.0 },
        Rate::Power(0.75),
    ]
}

/// The standard catalog plus `n/(ln^(j) n)^{2^{-i}}` for `j ≤ 3`, `i ≤ 2`,
/// and `n^{1 − 2^{−k}}` for `k ≤ 4`.
pub fn extended_catalog() -> Vec<Rate> {
    let mut out = standard_catalog();
    for j in 1..=3 {
        for i in 0..=2 {
            let r = Rate::IteratedLog {
                k: j,
                alpha: 0.5f64.powi(i),
            };
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    for k in 1..=4 {
        let r = Rate::root_family(k);
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Growth proxies `ĥ = H(n)/n`, `v̂ = ln v(n)/n`, `l̂ = L(n)/n` at the
/// largest computed `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthProxies {
    pub n: u64,
    pub h_hat: f64,
    pub v_hat: f64,
    pub l_hat: f64,
}

/// How well one rate describes a series.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsReport {
    pub rate_name: String,
    /// Smallest and largest `value/ρ(n)` over the grid.
    pub band_min: f64,
    pub band_max: f64,
    /// Log-log slope of the series itself.
    pub slope: f64,
    /// Log-log slope of `value/ρ(n)`; near zero for a matching rate.
    pub residual_slope: f64,
    pub proxies: Option<GrowthProxies>,
}

impl AsymptoticsReport {
    pub fn band_ratio(&self) -> f64 {
        self.band_max / self.band_min
    }
}

/// Fits every rate in `catalog` to `(n, value)` and returns the reports
/// ordered by band ratio, tightest first (catalog order breaks ties).
pub fn rate_fit(series: &[(f64, f64)], catalog: &[Rate]) -> Result<Vec<AsymptoticsReport>> {
    if series.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "rate fit needs at least 3 points, got {}",
            series.len()
        )));
    }
    if series.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidInput("rate fit needs strictly increasing n".into()));
    }
    if series.iter().any(|&(n, v)| !(n > 0.0 && v > 0.0)) {
        return Err(Error::InvalidInput("rate fit needs positive n and values".into()));
    }
    let ln_n: Vec<f64> = series.iter().map(|p| p.0.ln()).collect();
    let ln_v: Vec<f64> = series.iter().map(|p| p.1.ln()).collect();
    let slope = ols_slope(&ln_n, &ln_v);
    let mut out: Vec<AsymptoticsReport> = catalog
        .iter()
        .map(|rate| {
            let ratios: Vec<f64> = series.iter().map(|&(n, v)| v / rate.eval(n)).collect();
            let (band_min, band_max) = if ratios.iter().all(|r| r.is_finite() && *r > 0.0) {
                band(&ratios)
            } else {
                (f64::NAN, f64::NAN)
            };
            let ln_r: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
            AsymptoticsReport {
                rate_name: rate.name(),
                band_min,
                band_max,
                slope,
                residual_slope: ols_slope(&ln_n, &ln_r),
                proxies: None,
            }
        })
        .collect();
    // NaN bands sort last
    out.sort_by(|a, b| {
        let key = |r: &AsymptoticsReport| {
            let x = r.band_ratio();
            if x.is_nan() {
                f64::INFINITY
            } else {
                x
            }
        };
        key(a).total_cmp(&key(b))
    });
    Ok(out)
}
