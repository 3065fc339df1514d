use super::tower::TowerReal;
use crate::error::{Error, Result};

/// Order `k ≥ 1` of the iterated logarithm and exponent `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterLogParams {
    k: u32,
    alpha: f64,
}

impl IterLogParams {
    pub fn new(k: u32, alpha: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidInput(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { k, alpha })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `ln^(j)(x)` for `j = 1..=k`, each required to be positive.
pub fn iterated_logs(k: u32, x: &TowerReal) -> Result<Vec<TowerReal>> {
    let mut out = Vec::with_capacity(k as usize);
    let mut cur = *x;
    for j in 1..=k {
        cur = cur
            .ln()
            .filter(|l| !l.is_zero())
            .ok_or_else(|| Error::Domain(format!("ln^({j}) of {x} is not positive")))?;
        out.push(cur);
    }
    Ok(out)
}

/// `ln^(k)(x)` in tower form.
pub fn iterated_log_tower(k: u32, x: &TowerReal) -> Result<TowerReal> {
    Ok(*iterated_logs(k, x)?.last().expect("k ≥ 1"))
}

/// `ln^(k)(x)` as a float.
pub fn iterated_log(k: u32, x: &TowerReal) -> Result<f64> {
    iterated_log_tower(k, x)?
        .to_f64()
        .ok_or_else(|| Error::Domain(format!("ln^({k}) of {x} exceeds the float range")))
}

/// `T_{k,α} = exp^(k)((4k)^{1/α})`.
pub fn threshold_t(p: IterLogParams) -> TowerReal {
    TowerReal::tower(p.k, (4.0 * p.k as f64).powf(1.0 / p.alpha))
}

/// `ln ln^(k)(x)` as a float (`+inf` when `ln^(k) x` is itself a tower).
fn ln_of_last(logs: &[TowerReal]) -> f64 {
    logs.last().expect("k ≥ 1").ln_f64()
}

/// `L̃_{k,α}(x) = x / (ln^(k) x)^α`, evaluated as
/// `ln L̃ = ln x − α ln ln^(k) x`.
pub fn l_tilde(p: IterLogParams, x: &TowerReal) -> Result<TowerReal> {
    let logs = iterated_logs(p.k, x)?;
    let last = logs.last().expect("k ≥ 1");
    if let (Some(xv), Some(lv)) = (x.to_f64(), last.to_f64()) {
        return Ok(TowerReal::new(xv / lv.powf(p.alpha)));
    }
    Ok(x.mul_exp(-p.alpha * ln_of_last(&logs)))
}

/// `ln L̃_{k,α}(x)` as a float, when representable.
pub fn ln_l_tilde(p: IterLogParams, x: &TowerReal) -> Result<f64> {
    let logs = iterated_logs(p.k, x)?;
    Ok(x.ln_f64() - p.alpha * ln_of_last(&logs))
}

/// The concave extension `L_{k,α}`: `β x` on `[0, z]` and `L̃_{k,α}` beyond,
/// with `β = L̃(T)/(2T)` and `z` the largest crossing of `β x` and `L̃`.
///
/// Since `L̃(x)/x = (ln^(k) x)^{-α}`, the crossing is
/// `z = exp^(k)(β^{-1/α})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcaveExtension {
    params: IterLogParams,
    beta: f64,
    knot: TowerReal,
}

impl ConcaveExtension {
    pub fn new(p: IterLogParams) -> Self {
        let t = threshold_t(p);
        // L̃(T)/T = (ln^(k) T)^{-α}; the direct quotient is used when T is a float.
        let beta = match t.to_f64() {
            Some(_) => l_tilde(p, &t).unwrap().ratio(&t.scale(2.0)).unwrap(),
            None => {
                let last = iterated_log_tower(p.k, &t).expect("T is in the domain");
                0.5 * (-p.alpha * last.ln_f64()).exp()
            }
        };
        let knot = TowerReal::tower(p.k, beta.recip().powf(1.0 / p.alpha));
        ConcaveExtension { params: p, beta, knot }
    }

    pub fn params(&self) -> IterLogParams {
        self.params
    }

    /// Slope of the linear piece.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The crossing point `z`.
    pub fn knot(&self) -> TowerReal {
        self.knot
    }

    pub fn eval(&self, x: &TowerReal) -> Result<TowerReal> {
        if x.is_zero() {
            return Ok(TowerReal::ZERO);
        }
        if *x <= self.knot {
            Ok(x.scale(self.beta))
        } else {
            l_tilde(self.params, x)
        }
    }

    /// Evaluation on plain reals, for use as a local-time functional.
    pub fn eval_f64(&self, x: f64) -> f64 {
        match self.knot.to_f64() {
            Some(z) if x > z => {
                let logs = iterated_logs(self.params.k, &TowerReal::new(x)).expect("x > z > T");
                match logs.last().unwrap().to_f64() {
                    Some(l) => x / l.powf(self.params.alpha),
                    None => unreachable!("ln^(k) of a float is a float"),
                }
            }
            _ => self.beta * x,
        }
    }

    /// `L̃'(z) = β (1 − α / Π_{j ≤ k} ln^(j) z)`; concavity at the knot needs
    /// this to be at most `β`.
    pub fn slope_right_of_knot(&self) -> f64 {
        let logs = iterated_logs(self.params.k, &self.knot).expect("z > T");
        let ln_prod: f64 = logs.iter().map(|l| l.ln_f64()).sum();
        self.beta * (1.0 - self.params.alpha * (-ln_prod).exp())
    }

    /// Largest root of `L̃(x) = β x` by bisection in `ln x`; `k = 1` only,
    /// as an independent check of the closed-form knot.
    pub fn knot_by_bisection(&self) -> Option<TowerReal> {
        if self.params.k != 1 {
            return None;
        }
        let alpha = self.params.alpha;
        // sign of L̃(x)/x − β as a function of u = ln x
        let gap = |u: f64| u.powf(-alpha) - self.beta;
        let mut lo = threshold_t(self.params).ln_f64();
        let mut hi = lo * 2.0;
        while gap(hi) > 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(TowerReal::from_ln(0.5 * (lo + hi)))
    }
}

/// `(n / ln n) · L̃_{k,α}(ln n) / L̃_{k+1,α}(n)` for plain `n`.
pub fn composition_ratio(p: IterLogParams, n: f64) -> Result<f64> {
    let ln_n = n.ln();
    let next = IterLogParams::new(p.k + 1, p.alpha)?;
    let inner = l_tilde(p, &TowerReal::new(ln_n))?.to_f64().expect("float input");
    let outer = l_tilde(next, &TowerReal::new(n))?.to_f64().expect("float input");
    Ok(n / ln_n * inner / outer)
}
