//! Experiment configuration: flags, an optional `key = value` file, and
//! the `WREATHWALK_SEED` environment default.
//!
//! Config file grammar, one setting per line:
//!
//! ```text
//! line    := blank | comment | setting
//! comment := '#' any*
//! setting := key ws* '=' ws* value
//! key     := [a-z0-9-]+          (the long flag name without "--")
//! ```
//!
//! Values run to the end of the line and are trimmed; surrounding double
//! quotes are removed. Later lines win over earlier ones, and command-line
//! flags win over the file. `plot = false` is the file form of `--no-plot`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};

/// Keys accepted in a config file.
pub const KNOWN_KEYS: &[&str] = &[
    "spec",
    "n",
    "trials",
    "seed",
    "out",
    "threads",
    "plot",
    "no-plot",
    "radius",
    "support-cap",
    "ball-cap",
    "tol",
    "k",
    "alpha",
    "function",
    "lo",
    "hi",
    "points",
    "scale-n",
    "input",
    "column",
    "catalog",
    "weighting",
    "dump-trajectory",
];

/// Flat `key = value` settings.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut offset = 0;
    for line in text.split('\n') {
        let start = offset;
        offset += line.len() + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| Error::parse(start, format!("expected 'key = value', found {trimmed:?}")))?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::parse(start, format!("unknown config key {key:?}")));
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        out.insert(key.to_string(), value.to_string());
    }
    Ok(out)
}

/// Non-negative integer, written plainly (`65536`, `65_536`), as a power
/// (`2^16`) or in scientific notation with an integral value (`5e6`).
pub fn parse_count(text: &str) -> Result<u64> {
    let t = text.trim().replace('_', "");
    let bad = || Error::InvalidInput(format!("expected a non-negative integer, found {text:?}"));
    if let Some((b, e)) = t.split_once('^') {
        let (b, e): (u64, u32) = (b.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?);
        return b.checked_pow(e).ok_or_else(bad);
    }
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = t.parse().map_err(|_| bad())?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63) {
        Ok(v as u64)
    } else {
        Err(bad())
    }
}

/// `a,b,c` or `start:stop:factor` (geometric, `stop` included when hit).
pub fn parse_grid(text: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, factor] => {
            let (start, stop, factor) = (parse_count(start)?, parse_count(stop)?, parse_count(factor)?);
            if start == 0 || factor < 2 {
                return Err(Error::InvalidInput(format!(
                    "grid {text:?} needs start ≥ 1 and factor ≥ 2"
                )));
            }
            let mut v = Vec::new();
            let mut n = start;
            while n <= stop {
                v.push(n);
                n = n
                    .checked_mul(factor)
                    .ok_or_else(|| Error::InvalidInput("grid overflows".into()))?;
            }
            v
        }
        [_] => text.split(',').map(parse_count).collect::<Result<Vec<_>>>()?,
        _ => return Err(Error::InvalidInput(format!("cannot read n grid {text:?}"))),
    };
    if grid.is_empty() {
        return Err(Error::InvalidInput(format!("n grid {text:?} is empty")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!(
            "n grid {text:?} must be strictly increasing"
        )));
    }
    Ok(grid)
}

pub fn parse_bool(text: &str) -> Result<bool> {
    match text.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::InvalidInput(format!("expected true or false, found {other:?}"))),
    }
}

fn parse_real(key: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidInput(format!("{key}: expected a number, found {text:?}")))
}

/// Settings after merging flags over file over defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub spec: String,
    pub n: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub plot: bool,
    pub radius: u32,
    pub support_cap: usize,
    pub ball_cap: usize,
    pub tol: f64,
    pub k: u32,
    pub alpha: f64,
    pub function: String,
    pub lo: Option<String>,
    pub hi: Option<String>,
    pub points: usize,
    pub scale_n: String,
    pub input: Option<PathBuf>,
    pub column: Option<String>,
    pub catalog: String,
    pub weighting: String,
    /// Write trial 0 of the largest n as `(x,y)` lines (range-stats, local-time).
    pub dump_trajectory: bool,
}

/// Command-specific defaults for the grid and trial count.
fn defaults_for(command: &str) -> (&'static str, u64) {
    match command {
        "verify-group" => ("1", 10_000),
        "growth" | "drift-exact" | "entropy-exact" | "entropy-bounds" => ("6", 1),
        "drift-mc" => ("2^10:2^16:2", 400),
        _ => ("2^12:2^20:4", 2000),
    }
}

impl ExperimentConfig {
    /// Resolves every setting from `flags` (highest), then `file`, then the
    /// seed environment default, then built-in defaults.
    pub fn resolve(
        command: &str,
        flags: &BTreeMap<String, String>,
        file: &BTreeMap<String, String>,
        env_seed: Option<&str>,
    ) -> Result<Self> {
        let get = |key: &str| flags.get(key).or_else(|| file.get(key)).map(String::as_str);
        let (grid_default, trials_default) = defaults_for(command);
        let n = parse_grid(get("n").unwrap_or(grid_default))?;
        let trials = get("trials").map(parse_count).transpose()?.unwrap_or(trials_default);
        if trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        let seed = match get("seed").or(env_seed) {
            Some(s) => parse_count(s)?,
            None => 0,
        };
        let plot = match (flags.get("no-plot"), file.get("no-plot"), file.get("plot")) {
            (Some(v), _, _) => !parse_bool(v)?,
            (None, Some(v), _) => !parse_bool(v)?,
            (None, None, Some(v)) => parse_bool(v)?,
            _ => true,
        };
        let positive = |key: &str, default: u64| -> Result<u64> {
            let v = get(key).map(parse_count).transpose()?.unwrap_or(default);
            if v == 0 {
                return Err(Error::InvalidInput(format!("{key} must be positive")));
            }
            Ok(v)
        };
        let threads = get("threads").map(parse_count).transpose()?.map(|t| t as usize);
        if threads == Some(0) {
            return Err(Error::InvalidInput("threads must be positive".into()));
        }
        let tol = get("tol").map(|t| parse_real("tol", t)).transpose()?.unwrap_or(1e-9);
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        let radius = positive("radius", 4)?;
        let k = positive("k", 1)?;
        Ok(ExperimentConfig {
            command: command.to_string(),
            spec: get("spec").unwrap_or("Z2 wr C2").to_string(),
            n,
            trials,
            seed,
            out: PathBuf::from(get("out").unwrap_or("out")),
            threads,
            plot,
            radius: u32::try_from(radius).map_err(|_| Error::InvalidInput("radius too large".into()))?,
            support_cap: positive("support-cap", crate::estimators::DEFAULT_SUPPORT_CAP as u64)? as usize,
            ball_cap: positive("ball-cap", crate::group::DEFAULT_BALL_CAP as u64)? as usize,
            tol,
            k: u32::try_from(k).map_err(|_| Error::InvalidInput("k too large".into()))?,
            alpha: get("alpha").map(|a| parse_real("alpha", a)).transpose()?.unwrap_or(1.0),
            function: get("function").unwrap_or("").to_string(),
            lo: get("lo").map(str::to_string),
            hi: get("hi").map(str::to_string),
            points: positive("points", 10_000)? as usize,
            scale_n: get("scale-n").unwrap_or("e^100").to_string(),
            input: get("input").map(PathBuf::from),
            column: get("column").map(str::to_string),
            catalog: get("catalog").unwrap_or("standard").to_string(),
            weighting: get("weighting").unwrap_or("distinct").to_string(),
            dump_trajectory: get("dump-trajectory").map(parse_bool).transpose()?.unwrap_or(false),
        })
    }

    /// `key = value` lines echoing every setting, in the config grammar.
    pub fn echo(&self) -> String {
        let grid: Vec<String> = self.n.iter().map(u64::to_string).collect();
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        let mut lines = vec![
            ("spec", self.spec.clone()),
            ("n", grid.join(",")),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("out", self.out.display().to_string()),
            ("threads", self.threads.map(|t| t.to_string()).unwrap_or_default()),
            ("plot", self.plot.to_string()),
            ("radius", self.radius.to_string()),
            ("support-cap", self.support_cap.to_string()),
            ("ball-cap", self.ball_cap.to_string()),
            ("tol", format!("{:e}", self.tol)),
            ("k", self.k.to_string()),
            ("alpha", self.alpha.to_string()),
            ("function", self.function.clone()),
            ("lo", opt(&self.lo)),
            ("hi", opt(&self.hi)),
            ("points", self.points.to_string()),
            ("scale-n", self.scale_n.clone()),
            (
                "input",
                self.input.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            ),
            ("column", opt(&self.column)),
            ("catalog", self.catalog.clone()),
            ("weighting", self.weighting.clone()),
            ("dump-trajectory", self.dump_trajectory.to_string()),
        ];
        lines.retain(|(_, v)| !v.is_empty());
        lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1024,2048").unwrap(), vec![1024, 2048]);
        assert_eq!(parse_grid("2^10:2^13:2").unwrap(), vec![1024, 2048, 4096, 8192]);
        assert_eq!(parse_grid("4096:65536:4").unwrap(), vec![4096, 16384, 65536]);
        assert_eq!(parse_grid("3:20:3").unwrap(), vec![3, 9]);
        assert!(parse_grid("5,5").is_err());
        assert!(parse_grid("8,4").is_err());
        assert!(parse_grid("1:10:1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("65_536").unwrap(), 65536);
        assert_eq!(parse_count("5e6").unwrap(), 5_000_000);
        assert_eq!(parse_count("2^20").unwrap(), 1 << 20);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn config_text() {
        let text = "# comment\nspec = \"Z wr C2\"\n\ntrials=50\nn = 16,32\n";
        let m = parse_config_text(text).unwrap();
        assert_eq!(m["spec"], "Z wr C2");
        assert_eq!(m["trials"], "50");
        match parse_config_text("spec = Z2 wr C2\nnonsense\n") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 16),
            other => panic!("{other:?}"),
        }
        assert!(parse_config_text("colour = red").is_err());
    }

    #[test]
    fn precedence() {
        let file = map(&[("trials", "50"), ("seed", "3"), ("plot", "false")]);
        let flags = map(&[("trials", "70")]);
        let c = ExperimentConfig::resolve("range-stats", &flags, &file, Some("9")).unwrap();
        assert_eq!(c.trials, 70);
        assert_eq!(c.seed, 3);
        assert!(!c.plot);
        let c = ExperimentConfig::resolve("range-stats", &BTreeMap::new(), &BTreeMap::new(), Some("9")).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.trials, 2000);
        assert_eq!(c.n, vec![4096, 16384, 65536, 262144, 1048576]);
        let flags = map(&[("no-plot", "true")]);
        let file = map(&[("plot", "true")]);
        assert!(!ExperimentConfig::resolve("growth", &flags, &file, None).unwrap().plot);
    }

    #[test]
    fn invalid_values() {
        for (k, v) in [
            ("trials", "0"),
            ("support-cap", "0"),
            ("tol", "-1"),
            ("alpha", "x"),
            ("threads", "0"),
        ] {
            let flags = map(&[(k, v)]);
            assert!(
                ExperimentConfig::resolve("growth", &flags, &BTreeMap::new(), None).is_err(),
                "{k}"
            );
        }
    }

    #[test]
    fn echo_reparses_to_the_same_config() {
        let flags = map(&[("spec", "Z wr Z"), ("n", "4,8"), ("lo", "e^5"), ("threads", "2")]);
        let c = ExperimentConfig::resolve("drift-mc", &flags, &BTreeMap::new(), None).unwrap();
        let file = parse_config_text(&c.echo()).unwrap();
        let again = ExperimentConfig::resolve("drift-mc", &BTreeMap::new(), &file, None).unwrap();
        assert_eq!(c, again);
    }
}
