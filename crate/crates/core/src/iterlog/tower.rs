use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `ln(f64::MAX)`: the largest `t` with `exp(t)` finite.
pub const LN_MAX: f64 = 709.782_712_893_384;

/// A non-negative real `exp^(depth)(top)`, where `exp^(d)` is `exp`
/// iterated `d` times.
///
/// Canonical form: `depth == 0` holds the value itself; `depth ≥ 1` is used
/// only when the value overflows `f64`, and then `top > LN_MAX` (the depth
/// is minimal). Canonical values compare by `(depth, top)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerReal {
    depth: u32,
    top: f64,
}

impl TowerReal {
    pub const ZERO: TowerReal = TowerReal { depth: 0, top: 0.0 };

    /// Plain real. Panics on negative or non-finite input.
    pub fn new(x: f64) -> Self {
        assert!(
            x.is_finite() && x >= 0.0,
            "TowerReal needs a finite non-negative value, got {x}"
        );
        TowerReal { depth: 0, top: x }
    }

    /// `exp^(depth)(top)`, normalized.
    pub fn tower(depth: u32, top: f64) -> Self {
        assert!(top.is_finite(), "tower top must be finite");
        let mut depth = depth;
        let mut top = top;
        while depth > 0 && top <= LN_MAX {
            top = top.exp();
            depth -= 1;
        }
        assert!(top >= 0.0, "TowerReal must be non-negative");
        TowerReal { depth, top }
    }

    /// `e^u`.
    pub fn from_ln(u: f64) -> Self {
        if u <= LN_MAX {
            TowerReal::new(u.exp())
        } else {
            TowerReal { depth: 1, top: u }
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn is_zero(&self) -> bool {
        self.depth == 0 && self.top == 0.0
    }

    /// The value as `f64`, if it fits.
    pub fn to_f64(&self) -> Option<f64> {
        (self.depth == 0).then_some(self.top)
    }

    /// `ln x` as a float: `-inf` at zero, `+inf` when it does not fit.
    pub fn ln_f64(&self) -> f64 {
        match self.depth {
            0 => self.top.ln(),
            1 => self.top,
            _ => f64::INFINITY,
        }
    }

    /// `ln x` for `x ≥ 1`, staying in tower form.
    pub fn ln(&self) -> Option<TowerReal> {
        match self.depth {
            0 if self.top >= 1.0 => Some(TowerReal::new(self.top.ln())),
            0 => None,
            d => Some(TowerReal {
                depth: d - 1,
                top: self.top,
            }),
        }
    }

    /// `x · e^delta`.
    pub fn mul_exp(&self, delta: f64) -> TowerReal {
        match self.depth {
            _ if self.is_zero() => TowerReal::ZERO,
            0 => {
                let direct = self.top * delta.exp();
                if direct.is_finite() && direct > 0.0 {
                    TowerReal::new(direct)
                } else {
                    TowerReal::from_ln(self.top.ln() + delta)
                }
            }
            1 => TowerReal::tower(1, self.top + delta),
            // ln x = e^top, so the new top is ln(e^top + delta).
            2 => TowerReal::tower(2, self.top + (delta * (-self.top).exp()).ln_1p()),
            _ => *self,
        }
    }

    /// `x · c` for `c > 0`.
    pub fn scale(&self, c: f64) -> TowerReal {
        assert!(c > 0.0);
        match self.depth {
            0 => {
                let direct = self.top * c;
                if direct.is_finite() {
                    TowerReal::new(direct)
                } else {
                    self.mul_exp(c.ln())
                }
            }
            _ => self.mul_exp(c.ln()),
        }
    }

    /// `x / y` as a float, when the quotient is representable.
    pub fn ratio(&self, other: &TowerReal) -> Option<f64> {
        if let (Some(a), Some(b)) = (self.to_f64(), other.to_f64()) {
            return Some(a / b);
        }
        let (la, lb) = (self.ln_f64(), other.ln_f64());
        // Differences of logs this large carry no digits below 1.
        if !la.is_finite() || !lb.is_finite() || la.abs().max(lb.abs()) > 1e12 {
            return None;
        }
        Some((la - lb).exp())
    }
}

impl Eq for TowerReal {}

impl PartialOrd for TowerReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth
            .cmp(&other.depth)
            .then_with(|| self.top.total_cmp(&other.top))
    }
}

impl From<f64> for TowerReal {
    fn from(x: f64) -> Self {
        TowerReal::new(x)
    }
}

impl fmt::Display for TowerReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.depth {
            0 => write!(f, "{:e}", self.top),
            d => write!(f, "exp^{}({:e})", d, self.top),
        }
    }
}

impl FromStr for TowerReal {
    type Err = Error;

    /// Accepts a plain number (`1e300`), `e^u`, or the display form
    /// `exp^d(t)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let number = |t: &str, at: usize| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(at, format!("expected a number, found {t:?}")))
        };
        let value = if let Some(rest) = s.strip_prefix("exp^") {
            let open = rest.find('(').ok_or_else(|| Error::parse(4, "expected '('"))?;
            let depth: u32 = rest[..open]
                .parse()
                .map_err(|_| Error::parse(4, "expected a tower depth"))?;
            let inner = rest[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(s.len(), "expected ')'"))?;
            TowerReal::tower(depth, number(inner, 5 + open)?)
        } else if let Some(rest) = s.strip_prefix("e^") {
            TowerReal::from_ln(number(rest, 2)?)
        } else {
            let v = number(s, 0)?;
            if v < 0.0 {
                return Err(Error::parse(0, "value must be non-negative"));
            }
            TowerReal::new(v)
        };
        if value.top < 0.0 {
            return Err(Error::parse(0, "value must be non-negative"));
        }
        Ok(value)
    }
}
