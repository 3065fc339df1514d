use rayon::prelude::*;

use super::funcs::{threshold_t, IterLogParams};
use super::report::CheckRow;
use super::tower::TowerReal;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Stencil half-width cap in `ln x`; keeps `e^h` finite.
const H_MAX: f64 = 600.0;

/// A real function on towers, as scanned for concavity.
pub type TowerFn<'a> = &'a (dyn Fn(&TowerReal) -> Result<TowerReal> + Sync);

/// Second-difference test at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub x: TowerReal,
    /// Normalized second difference; concavity needs it `≤ 0`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub tol: f64,
    /// Stencil centres where all three values were usable.
    pub checked: usize,
    /// Points with normalized second difference above `tol`.
    pub violations: Vec<ScanPoint>,
    /// Points in `(0, tol]`: positive but numerically indistinguishable
    /// from zero.
    pub indistinguishable: usize,
    /// Points where the function was undefined or zero at the centre.
    pub undefined: usize,
    /// Points where a value ratio was not representable.
    pub unrepresentable: usize,
    /// Largest normalized second difference seen.
    pub max_value: f64,
    /// Every checked point, in grid order.
    pub points: Vec<ScanPoint>,
}

impl ScanReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty() && self.checked > 0
    }

    pub fn rows(&self) -> Vec<CheckRow> {
        self.points
            .iter()
            .map(|p| CheckRow::at_most(p.x.to_string(), "second_difference", p.value, self.tol, false))
            .collect()
    }

    fn from_outcomes(tol: f64, outcomes: Vec<Outcome>) -> Self {
        let mut r = ScanReport {
            tol,
            checked: 0,
            violations: Vec::new(),
            indistinguishable: 0,
            undefined: 0,
            unrepresentable: 0,
            max_value: f64::NEG_INFINITY,
            points: Vec::new(),
        };
        for o in outcomes {
            match o {
                Outcome::Undefined => r.undefined += 1,
                Outcome::Unrepresentable => r.unrepresentable += 1,
                Outcome::Checked(p) => {
                    r.checked += 1;
                    r.max_value = r.max_value.max(p.value);
                    if p.value > tol {
                        r.violations.push(p.clone());
                    } else if p.value > 0.0 {
                        r.indistinguishable += 1;
                    }
                    r.points.push(p);
                }
            }
        }
        r
    }
}

enum Outcome {
    Checked(ScanPoint),
    Undefined,
    Unrepresentable,
}

/// For `x_0 = x e^{-h}`, `x_1 = x`, `x_2 = x e^h`, concavity on the three
/// points reads `f_2 - (1 + e^h) f_1 + e^h f_0 ≤ 0`. Returned divided by
/// `(1 + e^h)/2 · f_1`, which for `h → 0` is the usual
/// `(f_0 - 2 f_1 + f_2)/f_1`. Inputs are `r_i = f_i / f_1`.
fn normalized_second_difference(r0: f64, r2: f64, h: f64) -> f64 {
    let w = h.exp();
    let c = 2.0 / (1.0 + w);
    // c·r2 − 2 + c·w·r0, with c·w computed as 2/(1+e^{-h})
    c * r2 - 2.0 + 2.0 / (1.0 + (-h).exp()) * r0
}

fn ratio(a: &TowerReal, b: &TowerReal) -> Option<f64> {
    if a.is_zero() {
        return Some(0.0);
    }
    a.ratio(b)
}

fn stencil(f: TowerFn, u: f64, h: f64) -> Outcome {
    let eval = |u: f64| f(&TowerReal::from_ln(u));
    let (Ok(f0), Ok(f1), Ok(f2)) = (eval(u - h), eval(u), eval(u + h)) else {
        return Outcome::Undefined;
    };
    if f1.is_zero() {
        return Outcome::Undefined;
    }
    match (ratio(&f0, &f1), ratio(&f2, &f1)) {
        (Some(r0), Some(r2)) => Outcome::Checked(ScanPoint {
            x: TowerReal::from_ln(u),
            value: normalized_second_difference(r0, r2, h),
        }),
        _ => Outcome::Unrepresentable,
    }
}

/// Checks concavity of `f` on `[lo, hi]` with `points` grid points,
/// geometric in `x` (uniform in `u = ln x`). Each interior point is the
/// centre of a stencil `x e^{±h}`, `h` the grid spacing in `u` capped at
/// 600. Bounds may be towers as long as `ln hi` fits a float.
///
/// `lo = 0` adds one stencil `[0, a, 2a]` at `a = min(1, 10^-6 hi)` and
/// starts the geometric grid at `a`.
pub fn concavity_scan(f: TowerFn, lo: &TowerReal, hi: &TowerReal, points: usize, tol: f64) -> Result<ScanReport> {
    if points < 3 {
        return Err(Error::InvalidInput(format!(
            "concavity scan needs at least 3 points, got {points}"
        )));
    }
    if lo >= hi {
        return Err(Error::InvalidInput(format!("empty scan range [{lo}, {hi}]")));
    }
    let mut origin = None;
    let start = if lo.is_zero() {
        let a = match hi.to_f64() {
            Some(h) => (h * 1e-6).min(1.0),
            None => 1.0,
        };
        let a = TowerReal::new(a);
        origin = Some(match (f(&TowerReal::ZERO), f(&a), f(&a.scale(2.0))) {
            (Ok(f0), Ok(f1), Ok(f2)) if !f1.is_zero() => match (ratio(&f0, &f1), ratio(&f2, &f1)) {
                (Some(r0), Some(r2)) => Outcome::Checked(ScanPoint {
                    x: a,
                    value: r0 - 2.0 + r2,
                }),
                _ => Outcome::Unrepresentable,
            },
            _ => Outcome::Undefined,
        });
        a
    } else {
        *lo
    };
    let (u_lo, u_hi) = (start.ln_f64(), hi.ln_f64());
    if !u_lo.is_finite() || !u_hi.is_finite() || u_lo >= u_hi {
        return Err(Error::InvalidInput(format!(
            "scan range [{lo}, {hi}] is outside the representable working range"
        )));
    }
    let spacing = (u_hi - u_lo) / (points - 1) as f64;
    let h = spacing.min(H_MAX);
    let grid: Vec<Outcome> = (1..points - 1)
        .into_par_iter()
        .map(|i| stencil(f, u_lo + spacing * i as f64, h))
        .collect();
    Ok(ScanReport::from_outcomes(tol, origin.into_iter().chain(grid).collect()))
}

/// Concavity of `x ↦ (ln^(k)(n/x))^{-α}` on `(0, n/T_{k,α}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalReport {
    pub scan: ScanReport,
    /// Grid centres with `x > n/T_{k,α}`.
    pub outside_domain: usize,
    /// Minimum over in-domain centres of `h'(x)` for
    /// `h(x) = x ln(n/x) ln ln(n/x) ⋯` (`k - 1` factors).
    pub min_h_prime: f64,
    /// Minimum of `g h'` with `g = ln^(k)(n/x)`; concavity of `1/g` needs
    /// `g h' > 2`.
    pub min_g_h_prime: f64,
}

impl ReciprocalReport {
    pub fn passes(&self) -> bool {
        self.scan.passes() && self.min_h_prime >= 1.0 && self.min_g_h_prime > 2.0
    }
}

/// `[ln(n/x), ln ln(n/x), …]`, `k` entries, all positive.
fn logs_of_quotient(k: u32, s: f64) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(k as usize);
    let mut cur = s;
    for j in 0..k {
        if j > 0 {
            cur = cur.ln();
        }
        if cur.is_nan() || cur <= 0.0 {
            return None;
        }
        out.push(cur);
    }
    Some(out)
}

/// Scans `x ↦ 1/(ln^(k)(n/x))^α` on `[lo, hi]`, geometric in `x`. The
/// working variable is `s = ln(n/x)`, so `n`, `lo`, `hi` need finite logs
/// and may themselves be towers. Points past `n/T_{k,α}` are scanned too
/// and counted in `outside_domain`.
///
/// The closed-form check uses `α = 1`: with `P = Π_{j<k} ln^(j)(n/x)` and
/// `S = Σ_{j<k} 1/(ln(n/x) ⋯ ln^(j)(n/x))`, `h'(x) = P (1 - S)`.
pub fn reciprocal_iterlog_concavity(
    p: IterLogParams,
    n: &TowerReal,
    lo: &TowerReal,
    hi: &TowerReal,
    points: usize,
    tol: f64,
) -> Result<ReciprocalReport> {
    if points < 3 {
        return Err(Error::InvalidInput(format!(
            "concavity scan needs at least 3 points, got {points}"
        )));
    }
    let (ln_n, ln_lo, ln_hi) = (n.ln_f64(), lo.ln_f64(), hi.ln_f64());
    if !(ln_n.is_finite() && ln_lo.is_finite() && ln_hi.is_finite()) || ln_lo >= ln_hi {
        return Err(Error::InvalidInput(format!("bad scan range [{lo}, {hi}] for n = {n}")));
    }
    let ln_t = threshold_t(p).ln_f64();
    // s runs from s_max = ln(n/lo) down to s_min = ln(n/hi)
    if ln_n - ln_lo < ln_t {
        return Err(Error::Domain(format!(
            "n = {n} is below T·lo; the domain (0, n/T] misses the range"
        )));
    }
    let (k, alpha) = (p.k(), p.alpha());
    let g = |s: f64| logs_of_quotient(k, s).map(|l| l[k as usize - 1].powf(-alpha));
    let spacing = (ln_hi - ln_lo) / (points - 1) as f64;
    let h = spacing.min(H_MAX);

    struct Centre {
        outcome: Outcome,
        inside: bool,
        h_prime: Option<(f64, f64)>,
    }
    let centres: Vec<Centre> = (1..points - 1)
        .into_par_iter()
        .map(|i| {
            let ln_x = ln_lo + spacing * i as f64;
            let s = ln_n - ln_x;
            let inside = s >= ln_t;
            // x e^{-h} has s + h, x e^{h} has s - h
            let outcome = match (g(s + h), g(s), g(s - h)) {
                (Some(g0), Some(g1), Some(g2)) if g1 > 0.0 => Outcome::Checked(ScanPoint {
                    x: TowerReal::from_ln(ln_x),
                    value: normalized_second_difference(g0 / g1, g2 / g1, h),
                }),
                _ => Outcome::Undefined,
            };
            let h_prime = logs_of_quotient(k, s).filter(|_| inside).map(|l| {
                let (mut ln_pi, mut sum_inv, mut ln_p) = (0.0, 0.0, 0.0);
                for &lj in &l[..k as usize - 1] {
                    ln_pi += lj.ln();
                    sum_inv += (-ln_pi).exp();
                    ln_p += lj.ln();
                }
                let hp = ln_p.exp() * (1.0 - sum_inv);
                (hp, l[k as usize - 1] * hp)
            });
            Centre {
                outcome,
                inside,
                h_prime,
            }
        })
        .collect();

    let outside_domain = centres.iter().filter(|c| !c.inside).count();
    let (mut min_h_prime, mut min_g_h_prime) = (f64::INFINITY, f64::INFINITY);
    for (hp, ghp) in centres.iter().filter_map(|c| c.h_prime) {
        min_h_prime = min_h_prime.min(hp);
        min_g_h_prime = min_g_h_prime.min(ghp);
    }
    let scan = ScanReport::from_outcomes(tol, centres.into_iter().map(|c| c.outcome).collect());
    Ok(ReciprocalReport {
        scan,
        outside_domain,
        min_h_prime,
        min_g_h_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::super::funcs::{l_tilde, ConcaveExtension};
    use super::*;

    fn p(k: u32, alpha: f64) -> IterLogParams {
        IterLogParams::new(k, alpha).unwrap()
    }

    #[test]
    fn linear_functions_give_zero() {
        for h in [1e-3f64, 0.1, 1.0, 10.0, 300.0] {
            let v = normalized_second_difference((-h).exp(), h.exp(), h);
            assert!(v.abs() < 1e-12, "h={h} v={v}");
        }
    }

    #[test]
    fn l_tilde_k1_alpha1_is_concave() {
        let pk = p(1, 1.0);
        let f = move |x: &TowerReal| l_tilde(pk, x);
        let r = concavity_scan(&f, &threshold_t(pk), &TowerReal::new(1e300), 10_000, DEFAULT_TOLERANCE).unwrap();
        assert!(r.passes(), "{:?}", &r.violations[..r.violations.len().min(3)]);
        assert_eq!(r.checked, 9998);
    }

    #[test]
    fn convex_square_is_flagged() {
        let f = |x: &TowerReal| Ok(TowerReal::new(x.to_f64().unwrap().powi(2)));
        let r = concavity_scan(&f, &TowerReal::new(1.0), &TowerReal::new(10.0), 100, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.violations.len(), 98);
    }

    #[test]
    fn concave_extension_across_knot() {
        let ext = ConcaveExtension::new(p(1, 1.0));
        let f = |x: &TowerReal| ext.eval(x);
        let r = concavity_scan(&f, &TowerReal::ZERO, &TowerReal::new(1e300), 10_000, DEFAULT_TOLERANCE).unwrap();
        assert!(r.passes());
        // one stencil straddles the knot and sees the kink
        assert!(r.max_value <= 1e-12);
        assert!(r.points.iter().any(|q| q.value < -1e-3));
    }

    #[test]
    fn tower_range_scan() {
        let pk = p(2, 1.0);
        let f = move |x: &TowerReal| l_tilde(pk, x);
        let r = concavity_scan(
            &f,
            &threshold_t(pk),
            &TowerReal::tower(1, 1e9),
            2_000,
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn degenerate_ranges_are_rejected() {
        let f = |x: &TowerReal| Ok(*x);
        let one = TowerReal::new(1.0);
        assert!(concavity_scan(&f, &one, &one, 10, DEFAULT_TOLERANCE).is_err());
        assert!(concavity_scan(&f, &one, &TowerReal::new(2.0), 2, DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn reciprocal_k1() {
        let pk = p(1, 1.0);
        let n = TowerReal::from_ln(100.0);
        let hi = TowerReal::from_ln(100.0 - 4.0);
        let lo = TowerReal::from_ln(-500.0);
        let r = reciprocal_iterlog_concavity(pk, &n, &lo, &hi, 1_000, DEFAULT_TOLERANCE).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.outside_domain, 0);
        assert_eq!(r.min_h_prime, 1.0);
        // g = ln(n/x) ≥ 4 on the domain, so g h' ≥ 4 up to grid placement
        assert!(r.min_g_h_prime >= 4.0);
    }

    #[test]
    fn reciprocal_boundary_value() {
        // at x = n/T, ln^(k)(n/x) = (4k)^{1/α}
        for (k, alpha) in [(1u32, 1.0), (1, 0.5), (2, 1.0)] {
            let pk = p(k, alpha);
            let ln_t = threshold_t(pk).ln_f64();
            let l = logs_of_quotient(k, ln_t).unwrap();
            let expected = (4.0 * k as f64).powf(1.0 / alpha);
            assert!((l[k as usize - 1] / expected - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn reciprocal_k1_past_threshold_is_flagged() {
        let pk = p(1, 1.0);
        let n = TowerReal::from_ln(100.0);
        let hi = TowerReal::from_ln(100.0 - 0.5);
        let lo = TowerReal::from_ln(-500.0);
        let r = reciprocal_iterlog_concavity(pk, &n, &lo, &hi, 1_000, DEFAULT_TOLERANCE).unwrap();
        assert!(r.outside_domain > 0);
        assert!(!r.scan.violations.is_empty());
        // the convex stretch is where ln(n/x) < 2
        for v in &r.scan.violations {
            assert!(100.0 - v.x.ln_f64() < 2.0 + 1.0);
        }
    }

    #[test]
    fn reciprocal_k2_towers() {
        for (alpha, ln_ln_n) in [(1.0, 10.0), (0.75, 20.0)] {
            let pk = p(2, alpha);
            let ln_n = f64::exp(ln_ln_n);
            let n = TowerReal::from_ln(ln_n);
            let hi = TowerReal::from_ln(ln_n - threshold_t(pk).ln_f64());
            let lo = TowerReal::from_ln(-600.0);
            let r = reciprocal_iterlog_concavity(pk, &n, &lo, &hi, 2_000, DEFAULT_TOLERANCE).unwrap();
            assert!(r.passes(), "α={alpha} {:?}", r.scan.violations.first());
            assert!(r.min_h_prime > 1.0);
        }
    }

    #[test]
    fn reciprocal_empty_domain_is_an_error() {
        let pk = p(1, 1.0);
        let n = TowerReal::new(10.0);
        let r = reciprocal_iterlog_concavity(
            pk,
            &n,
            &TowerReal::new(1.0),
            &TowerReal::new(5.0),
            10,
            DEFAULT_TOLERANCE,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
