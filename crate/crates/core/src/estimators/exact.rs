use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{Ball, Element, GeneratorSet, GroupSpec};
use crate::stats::{compensated_sum, CompensatedSum};

pub const DEFAULT_SUPPORT_CAP: usize = 5_000_000;

/// The law `μ^{*n}` of the walk after `n` steps, held exactly as a finite
/// map from elements to probabilities.
#[derive(Debug, Clone)]
pub struct Distribution {
    spec: GroupSpec,
    n: u32,
    mass: FxHashMap<Element, f64>,
}

impl Distribution {
    /// Point mass at the identity (`n = 0`).
    pub fn identity(spec: &GroupSpec) -> Self {
        let mut mass = FxHashMap::default();
        mass.insert(spec.identity(), 1.0);
        Distribution {
            spec: spec.clone(),
            n: 0,
            mass,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn steps(&self) -> u32 {
        self.n
    }

    pub fn support_size(&self) -> usize {
        self.mass.len()
    }

    pub fn mass(&self, g: &Element) -> f64 {
        self.mass.get(g).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, f64)> {
        self.mass.iter().map(|(g, &p)| (g, p))
    }

    /// Support in canonical element order, for reproducible output.
    pub fn sorted(&self) -> Vec<(&Element, f64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.sorted().into_iter().map(|(_, p)| p))
    }

    /// One more step: pushes each atom `g` to `g·s` with weight `w(s)`.
    /// Fails once the support would exceed `cap`.
    pub fn convolve(&self, gens: &GeneratorSet, cap: usize) -> Result<Distribution> {
        let mut next: FxHashMap<Element, f64> = FxHashMap::default();
        for (g, p) in self.sorted() {
            for (s, w) in gens.iter() {
                let h = self.spec.multiply(g, s)?;
                if !next.contains_key(&h) && next.len() >= cap {
                    return Err(Error::Resource {
                        what: "distribution support",
                        size: next.len() + 1,
                        cap,
                    });
                }
                *next.entry(h).or_insert(0.0) += p * w;
            }
        }
        Ok(Distribution {
            spec: self.spec.clone(),
            n: self.n + 1,
            mass: next,
        })
    }

    /// `μ^{*0}, …, μ^{*n_max}`.
    pub fn powers(spec: &GroupSpec, gens: &GeneratorSet, n_max: u32, cap: usize) -> Result<Vec<Distribution>> {
        let mut out = vec![Distribution::identity(spec)];
        for _ in 0..n_max {
            let next = out.last().unwrap().convolve(gens, cap)?;
            out.push(next);
        }
        Ok(out)
    }

    /// `max_g |μ^{*n}(g) − μ^{*n}(g^{-1})|`.
    pub fn symmetry_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (g, p) in self.iter() {
            let q = self.mass(&self.spec.invert(g)?);
            worst = worst.max((p - q).abs());
        }
        Ok(worst)
    }
}

/// Shannon entropy `−Σ p ln p` in nats.
pub fn entropy_of(d: &Distribution) -> f64 {
    let s: CompensatedSum = d
        .sorted()
        .into_iter()
        .filter(|&(_, p)| p > 0.0)
        .map(|(_, p)| -p * p.ln())
        .collect();
    s.value()
}

fn moment_of(d: &Distribution, ball: &Ball, power: i32) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for (g, p) in d.sorted() {
        let l = ball.length(g).ok_or_else(|| Error::OutsideBall(d.spec.encode(g)))?;
        acc.add(p * (l as f64).powi(power));
    }
    Ok(acc.value())
}

/// Drift `L(n) = Σ_g μ^{*n}(g) l(g)` with exact lengths from `ball`.
pub fn drift_of(d: &Distribution, ball: &Ball) -> Result<f64> {
    moment_of(d, ball, 1)
}

/// `E l^2` under `μ^{*n}`.
pub fn second_moment_of(d: &Distribution, ball: &Ball) -> Result<f64> {
    moment_of(d, ball, 2)
}

/// Exact quantities at one `n`, with the constants each growth/entropy
/// inequality needs to hold there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRow {
    pub n: u32,
    pub entropy: f64,
    pub drift: f64,
    pub second_moment: f64,
    /// Ball size `v(n)`.
    pub growth: u64,
    pub ln_growth: f64,
    /// `ln v(n) − H(n)`; the constant-free bound needs it `≥ 0`.
    pub growth_slack: f64,
    /// `H − v̂ L − ln n`: the least `C` with `H ≤ v̂ L + ln n + C`.
    pub upper_constant: f64,
    /// `(H + ln n) n / E l^2`: the largest `C` with `H ≥ C E l^2/n − ln n`.
    pub lower_constant: f64,
    /// `L / sqrt(n (ln v + ln n))`.
    pub sqrt_constant: f64,
}

/// Exact entropy, drift and growth for `n = 0..=n_max`, with the fitted
/// constants of the entropy bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTable {
    pub spec: String,
    pub rows: Vec<EntropyRow>,
    /// `max_{n ≥ 1} ln v(n)/n`.
    pub v_hat: f64,
    /// `max_n` of the per-row upper constant.
    pub upper_constant: f64,
    /// `min_n` of the per-row lower constant.
    pub lower_constant: f64,
    /// `max_n` of the per-row square-root constant.
    pub sqrt_constant: f64,
    /// Largest absolute deviation from total mass 1 over all powers.
    pub mass_defect: f64,
    /// Largest `|μ(g) − μ(g^{-1})|` over all powers.
    pub symmetry_defect: f64,
}

impl EntropyTable {
    /// `H(n) ≤ ln v(n)` at every computed `n`.
    pub fn growth_bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.growth_slack >= 0.0)
    }

    /// `H(n)` nondecreasing in `n`.
    pub fn entropy_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].entropy >= w[0].entropy)
    }

    /// Every pair `(a, b)` with `L(a + b) > L(a) + L(b)`.
    pub fn subadditivity_violations(&self) -> Vec<(u32, u32)> {
        let l: Vec<f64> = self.rows.iter().map(|r| r.drift).collect();
        let mut out = Vec::new();
        for a in 1..l.len() {
            for b in a..l.len() - a {
                if l[a + b] > l[a] + l[b] {
                    out.push((a as u32, b as u32));
                }
            }
        }
        out
    }
}

/// Runs exact convolutions and a ball of radius `n_max` and tabulates the
/// entropy bounds. `H(n) ≤ ln v(n)` is reported, not enforced here.
pub fn entropy_bounds_check(
    spec: &GroupSpec,
    gens: &GeneratorSet,
    n_max: u32,
    support_cap: usize,
    ball_cap: usize,
) -> Result<EntropyTable> {
    let ball = Ball::enumerate(spec, gens, n_max, ball_cap)?;
    let powers = Distribution::powers(spec, gens, n_max, support_cap)?;
    let mut mass_defect: f64 = 0.0;
    let mut symmetry_defect: f64 = 0.0;
    let mut raw = Vec::with_capacity(powers.len());
    for d in &powers {
        mass_defect = mass_defect.max((d.total_mass() - 1.0).abs());
        symmetry_defect = symmetry_defect.max(d.symmetry_defect()?);
        let v = ball.counts()[d.steps() as usize];
        raw.push((
            d.steps(),
            entropy_of(d),
            drift_of(d, &ball)?,
            second_moment_of(d, &ball)?,
            v,
        ));
    }
    let v_hat = raw
        .iter()
        .filter(|r| r.0 >= 1)
        .map(|r| (r.4 as f64).ln() / r.0 as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let rows: Vec<EntropyRow> = raw
        .into_iter()
        .map(|(n, h, l, l2, v)| {
            let ln_v = (v as f64).ln();
            let ln_n = (n as f64).ln();
            let (upper, lower, sqrt_k) = if n == 0 {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                (
                    h - v_hat * l - ln_n,
                    (h + ln_n) * n as f64 / l2,
                    l / (n as f64 * (ln_v + ln_n)).sqrt(),
                )
            };
            EntropyRow {
                n,
                entropy: h,
                drift: l,
                second_moment: l2,
                growth: v,
                ln_growth: ln_v,
                growth_slack: ln_v - h,
                upper_constant: upper,
                lower_constant: lower,
                sqrt_constant: sqrt_k,
            }
        })
        .collect();
    let fold = |f: fn(&EntropyRow) -> f64, init: f64, pick: fn(f64, f64) -> f64| {
        rows.iter().filter(|r| r.n >= 1).map(f).fold(init, pick)
    };
    Ok(EntropyTable {
        spec: spec.to_string(),
        v_hat,
        upper_constant: fold(|r| r.upper_constant, f64::NEG_INFINITY, f64::max),
        lower_constant: fold(|r| r.lower_constant, f64::INFINITY, f64::min),
        sqrt_constant: fold(|r| r.sqrt_constant, f64::NEG_INFINITY, f64::max),
        rows,
        mass_defect,
        symmetry_defect,
    })
}
