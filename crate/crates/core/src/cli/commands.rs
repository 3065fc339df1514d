//! One function per subcommand. Each returns the files to write and any
//! notes for the manifest; failed verifications are reported through
//! `Outcome::failure` after the files are produced.

use std::path::Path;

use super::config::ExperimentConfig;
use super::plot::{line_plot, Series};
use crate::error::{Error, Result};
use crate::estimators::{
    compose_drift, drift_mc_series, entropy_bounds_check, extended_catalog, growth_proxies, rate_fit, standard_catalog,
    Distribution, Rate,
};
use crate::group::verify::{axiom_checks, bracket_soundness, generator_checks, metric_symmetry, CheckCount};
use crate::group::{Ball, GeneratorSet, GroupSpec, Weighting};
use crate::iterlog::{
    appendix_inequality_check, concavity_scan, l_tilde, reciprocal_iterlog_concavity, rows_to_csv, threshold_t,
    tower_sample_points, CheckRow, ConcaveExtension, IterLogParams, ScanReport, TowerReal,
};
use crate::lattice::{functional_estimate, origin_local_time, range_statistics, EstimateReport, Functional};

/// Files and notes produced by a command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, Vec<u8>)>,
    pub notes: Vec<(String, String)>,
    /// Set when a verification ran to completion and found violations.
    pub failure: Option<String>,
}

impl Outcome {
    fn file(&mut self, name: &str, contents: impl Into<Vec<u8>>) {
        self.files.push((name.to_string(), contents.into()));
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    fn plot(&mut self, cfg: &ExperimentConfig, name: &str, svg: impl FnOnce() -> String) {
        if cfg.plot {
            self.file(name, svg());
        }
    }
}

/// Number formatting used in every CSV: shortest round-trip digits, with
/// exponent notation outside `[1e-4, 1e15)`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || (x.abs() >= 1e-4 && x.abs() < 1e15) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn spec_and_generators(cfg: &ExperimentConfig) -> Result<(GroupSpec, GeneratorSet)> {
    let spec: GroupSpec = cfg.spec.parse()?;
    let weighting = match cfg.weighting.as_str() {
        "distinct" => Weighting::Distinct,
        "multiplicity" => Weighting::WordMultiplicity,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown weighting {other:?} (distinct|multiplicity)"
            )))
        }
    };
    let gens = GeneratorSet::build(&spec, weighting)?;
    Ok((spec, gens))
}

fn params(cfg: &ExperimentConfig) -> Result<IterLogParams> {
    IterLogParams::new(cfg.k, cfg.alpha)
}

fn n_max(cfg: &ExperimentConfig) -> Result<u32> {
    let n = *cfg.n.last().expect("grid is non-empty");
    u32::try_from(n).map_err(|_| Error::InvalidInput(format!("n = {n} is too large for exact computation")))
}

fn usize_n(n: u64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::InvalidInput(format!("n = {n} does not fit this platform")))
}

fn check_rows(checks: &[CheckCount]) -> Vec<Vec<String>> {
    checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                c.cases.to_string(),
                c.failures.to_string(),
                c.passed().to_string(),
            ]
        })
        .collect()
}

pub fn verify_group(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, gens) = spec_and_generators(cfg)?;
    let mut checks = axiom_checks(&spec, cfg.trials, cfg.seed)?;
    checks.extend(generator_checks(&spec, &gens)?);
    let ball = Ball::enumerate(&spec, &gens, cfg.radius, cfg.ball_cap)?;
    checks.push(bracket_soundness(&ball));
    checks.push(metric_symmetry(&ball)?);
    let mut out = Outcome::default();
    out.file(
        "verify_group.csv",
        csv_bytes(&["check", "cases", "failures", "pass"], &check_rows(&checks))?,
    );
    out.note("generators", gens.len());
    out.note("ball_elements", ball.len());
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if !failed.is_empty() {
        out.failure = Some(format!("failed checks: {}", failed.join(", ")));
    }
    Ok(out)
}

pub fn growth(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, gens) = spec_and_generators(cfg)?;
    let ball = Ball::enumerate(&spec, &gens, cfg.radius, cfg.ball_cap)?;
    let counts = ball.counts();
    let rows: Vec<Vec<String>> = counts
        .iter()
        .enumerate()
        .map(|(r, &v)| {
            let sphere = if r == 0 { 1 } else { v - counts[r - 1] };
            let ln_v = (v as f64).ln();
            vec![
                r.to_string(),
                sphere.to_string(),
                v.to_string(),
                fmt_real(ln_v),
                if r == 0 {
                    String::new()
                } else {
                    fmt_real(ln_v / r as f64)
                },
            ]
        })
        .collect();
    let mut out = Outcome::default();
    out.file(
        "growth.csv",
        csv_bytes(&["r", "sphere", "ball", "ln_ball", "ln_ball_over_r"], &rows)?,
    );
    Ok(out)
}

pub fn drift_exact(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, gens) = spec_and_generators(cfg)?;
    let n_max = n_max(cfg)?;
    let ball = Ball::enumerate(&spec, &gens, n_max, cfg.ball_cap)?;
    let powers = Distribution::powers(&spec, &gens, n_max, cfg.support_cap)?;
    let mut rows = Vec::new();
    for d in &powers {
        rows.push(vec![
            d.steps().to_string(),
            fmt_real(crate::estimators::drift_of(d, &ball)?),
            fmt_real(crate::estimators::second_moment_of(d, &ball)?),
            d.support_size().to_string(),
            fmt_real(d.total_mass()),
        ]);
    }
    let mut out = Outcome::default();
    out.file(
        "drift_exact.csv",
        csv_bytes(&["n", "L", "El2", "support", "mass"], &rows)?,
    );
    Ok(out)
}

fn entropy_common(cfg: &ExperimentConfig, bounds: bool) -> Result<Outcome> {
    let (spec, gens) = spec_and_generators(cfg)?;
    let table = entropy_bounds_check(&spec, &gens, n_max(cfg)?, cfg.support_cap, cfg.ball_cap)?;
    let mut header = vec!["n", "H", "L", "El2", "v", "lnv"];
    if bounds {
        header.extend(["lnv_minus_H", "upper_constant", "lower_constant", "sqrt_constant"]);
    }
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![
                r.n.to_string(),
                fmt_real(r.entropy),
                fmt_real(r.drift),
                fmt_real(r.second_moment),
                r.growth.to_string(),
                fmt_real(r.ln_growth),
            ];
            if bounds {
                let opt = |x: f64| if x.is_nan() { String::new() } else { fmt_real(x) };
                row.extend([
                    fmt_real(r.growth_slack),
                    opt(r.upper_constant),
                    opt(r.lower_constant),
                    opt(r.sqrt_constant),
                ]);
            }
            row
        })
        .collect();
    let stem = if bounds { "entropy_bounds" } else { "entropy" };
    let mut out = Outcome::default();
    out.file(&format!("{stem}.csv"), csv_bytes(&header, &rows)?);
    out.plot(cfg, &format!("{stem}.svg"), || {
        let pick = |f: fn(&crate::estimators::EntropyRow) -> f64| {
            table
                .rows
                .iter()
                .filter(|r| r.n >= 1)
                .map(|r| (r.n as f64, f(r)))
                .collect()
        };
        line_plot(
            &format!("Entropy and growth, {}", table.spec),
            "n",
            "nats / length",
            &[
                Series {
                    name: "H(n)",
                    points: pick(|r| r.entropy),
                },
                Series {
                    name: "ln v(n)",
                    points: pick(|r| r.ln_growth),
                },
                Series {
                    name: "L(n)",
                    points: pick(|r| r.drift),
                },
            ],
        )
    });
    out.note("mass_defect", fmt_real(table.mass_defect));
    out.note("symmetry_defect", fmt_real(table.symmetry_defect));
    if bounds {
        out.note("v_hat", fmt_real(table.v_hat));
        out.note("upper_constant", fmt_real(table.upper_constant));
        out.note("lower_constant", fmt_real(table.lower_constant));
        out.note("sqrt_constant", fmt_real(table.sqrt_constant));
        out.note("entropy_monotone", table.entropy_monotone());
        out.note("subadditivity_violations", table.subadditivity_violations().len());
        if let Some(p) = growth_proxies(&table) {
            out.note("h_hat", fmt_real(p.h_hat));
            out.note("v_hat_last", fmt_real(p.v_hat));
            out.note("l_hat", fmt_real(p.l_hat));
        }
        if !table.growth_bound_holds() {
            out.failure = Some("H(n) exceeds ln v(n)".into());
        }
    }
    Ok(out)
}

pub fn entropy_exact(cfg: &ExperimentConfig) -> Result<Outcome> {
    entropy_common(cfg, false)
}

pub fn entropy_bounds(cfg: &ExperimentConfig) -> Result<Outcome> {
    entropy_common(cfg, true)
}

pub fn drift_mc(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (spec, gens) = spec_and_generators(cfg)?;
    let series = drift_mc_series(&spec, &gens, &cfg.n, cfg.trials, cfg.seed)?;
    let rows: Vec<Vec<String>> = series
        .iter()
        .map(|b| {
            vec![
                b.n.to_string(),
                fmt_real(b.lower_mean),
                fmt_real(b.lower_stderr),
                fmt_real(b.upper_mean),
                fmt_real(b.upper_stderr),
                b.trials.to_string(),
                b.seed.to_string(),
            ]
        })
        .collect();
    let mut out = Outcome::default();
    out.file(
        "drift.csv",
        csv_bytes(
            &["n", "lower", "lower_se", "upper", "upper_se", "trials", "seed"],
            &rows,
        )?,
    );
    out.plot(cfg, "drift.svg", || {
        line_plot(
            &format!("Drift bracket, {spec}"),
            "n",
            "word length",
            &[
                Series {
                    name: "lower",
                    points: series.iter().map(|b| (b.n as f64, b.lower_mean)).collect(),
                },
                Series {
                    name: "upper",
                    points: series.iter().map(|b| (b.n as f64, b.upper_mean)).collect(),
                },
            ],
        )
    });
    Ok(out)
}

/// A local-time functional with the rate its sum is compared against.
struct Choice {
    label: String,
    f: Box<dyn Fn(u64) -> f64 + Sync>,
    reference_name: String,
    reference: Box<dyn Fn(f64) -> f64>,
}

fn extension_choice(cfg: &ExperimentConfig) -> Result<Choice> {
    let p = params(cfg)?;
    let ext = ConcaveExtension::new(p);
    let next = IterLogParams::new(p.k() + 1, p.alpha())?;
    Ok(Choice {
        label: format!("L_({},{})", p.k(), p.alpha()),
        f: Box::new(move |b| ext.eval_f64(b as f64)),
        reference_name: format!("L~_({},{})(n)", next.k(), next.alpha()),
        reference: Box::new(move |n| {
            l_tilde(next, &TowerReal::new(n))
                .ok()
                .and_then(|v| v.to_f64())
                .unwrap_or(f64::NAN)
        }),
    })
}

fn functional_choice(cfg: &ExperimentConfig) -> Result<Choice> {
    let name = if cfg.function.is_empty() {
        "sqrt"
    } else {
        cfg.function.as_str()
    };
    let power = |a: f64| -> Choice {
        Choice {
            label: format!("b^{a}"),
            f: Box::new(move |b| (b as f64).powf(a)),
            reference_name: format!("n/(ln n)^{}", 1.0 - a),
            reference: Box::new(move |n: f64| n / n.ln().powf(1.0 - a)),
        }
    };
    Ok(match name {
        "sqrt" => Choice {
            label: "sqrt b".into(),
            ..power(0.5)
        },
        "indicator" => Choice {
            label: "1{b>0}".into(),
            f: Box::new(|b| (b > 0) as u64 as f64),
            reference_name: "n/ln n".into(),
            reference: Box::new(|n: f64| n / n.ln()),
        },
        "identity" => Choice {
            label: "b".into(),
            f: Box::new(|b| b as f64),
            reference_name: "n".into(),
            reference: Box::new(|n| n),
        },
        "ln1p" => Choice {
            label: "ln(1+b)".into(),
            f: Box::new(|b| (b as f64).ln_1p()),
            reference_name: "n ln ln n/ln n".into(),
            reference: Box::new(|n: f64| n * n.ln().ln() / n.ln()),
        },
        "extension" => extension_choice(cfg)?,
        other => match other.strip_prefix("power:").map(str::parse::<f64>) {
            Some(Ok(a)) if a > 0.0 && a <= 1.0 => power(a),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown function {other:?} (sqrt|indicator|identity|ln1p|extension|power:A)"
                )))
            }
        },
    })
}

type Estimator = fn(Functional, usize, u64, u64) -> EstimateReport;

fn functional_table(
    cfg: &ExperimentConfig,
    choice: &Choice,
    estimate: Estimator,
    stem: &str,
    title: &str,
) -> Result<Outcome> {
    let f: Functional = &*choice.f;
    let mut reports: Vec<EstimateReport> = Vec::new();
    for &n in &cfg.n {
        reports.push(estimate(f, usize_n(n)?, cfg.trials, cfg.seed));
    }
    let ratios: Vec<f64> = reports
        .iter()
        .map(|r| r.mean / (choice.reference)(r.n as f64))
        .collect();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .zip(&ratios)
        .map(|(r, ratio)| {
            vec![
                r.n.to_string(),
                r.trials.to_string(),
                fmt_real(r.mean),
                fmt_real(r.stderr),
                r.master_seed.to_string(),
                choice.reference_name.clone(),
                fmt_real(*ratio),
            ]
        })
        .collect();
    let mut out = Outcome::default();
    out.file(
        &format!("{stem}.csv"),
        csv_bytes(
            &["n", "trials", "mean", "stderr", "master_seed", "reference", "ratio"],
            &rows,
        )?,
    );
    out.note("function", &choice.label);
    out.note("band_ratio", fmt_real(crate::stats::band_ratio(&ratios)));
    out.plot(cfg, &format!("{stem}.svg"), || {
        line_plot(
            title,
            "n",
            &format!("mean / {}", choice.reference_name),
            &[Series {
                name: &choice.label,
                points: reports.iter().zip(&ratios).map(|(r, q)| (r.n as f64, *q)).collect(),
            }],
        )
    });
    Ok(out)
}

pub fn compose(cfg: &ExperimentConfig) -> Result<Outcome> {
    let choice = extension_choice(cfg)?;
    functional_table(
        cfg,
        &choice,
        compose_drift,
        "compose_drift",
        "Wreath drift via local times",
    )
}

pub fn functional(cfg: &ExperimentConfig) -> Result<Outcome> {
    let choice = functional_choice(cfg)?;
    functional_table(cfg, &choice, functional_estimate, "functional", "Local-time functional")
}

fn dump_trajectory(cfg: &ExperimentConfig, out: &mut Outcome) -> Result<()> {
    if cfg.dump_trajectory {
        let n = usize_n(*cfg.n.last().expect("grid is non-empty"))?;
        out.file(
            "trajectory.txt",
            crate::lattice::simulate_srw(n, cfg.seed).dump().into_bytes(),
        );
    }
    Ok(())
}

pub fn range_stats(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut stats = Vec::new();
    for &n in &cfg.n {
        stats.push(range_statistics(usize_n(n)?, cfg.trials, cfg.seed));
    }
    let rows: Vec<Vec<String>> = stats
        .iter()
        .map(|s| {
            vec![
                s.n.to_string(),
                s.trials.to_string(),
                fmt_real(s.mean),
                fmt_real(s.variance),
                fmt_real(s.stderr),
                fmt_real(s.normalized_mean),
                fmt_real(s.variance_bound),
                fmt_real(s.q1),
                fmt_real(s.q2),
                s.master_seed.to_string(),
            ]
        })
        .collect();
    let mut out = Outcome::default();
    out.file(
        "range.csv",
        csv_bytes(
            &[
                "n",
                "trials",
                "mean",
                "variance",
                "stderr",
                "normalized_mean",
                "variance_bound",
                "q1",
                "q2",
                "master_seed",
            ],
            &rows,
        )?,
    );
    dump_trajectory(cfg, &mut out)?;
    let normalized: Vec<f64> = stats.iter().map(|s| s.normalized_mean).collect();
    out.note("band_ratio", fmt_real(crate::stats::band_ratio(&normalized)));
    out.plot(cfg, "range.svg", || {
        line_plot(
            "Range of the planar walk",
            "n",
            "E[R] ln n / n",
            &[Series {
                name: "E[R] ln n / n",
                points: stats.iter().map(|s| (s.n as f64, s.normalized_mean)).collect(),
            }],
        )
    });
    Ok(out)
}

pub fn local_time(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut reports = Vec::new();
    for &n in &cfg.n {
        reports.push(origin_local_time(usize_n(n)?, cfg.trials, cfg.seed));
    }
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|o| {
            vec![
                o.report.n.to_string(),
                o.report.trials.to_string(),
                fmt_real(o.report.mean),
                fmt_real(o.report.stderr),
                fmt_real(o.mean_over_log),
                fmt_real(o.level),
                fmt_real(o.k),
                fmt_real(o.coverage),
                o.report.master_seed.to_string(),
            ]
        })
        .collect();
    let mut out = Outcome::default();
    out.file(
        "local_time.csv",
        csv_bytes(
            &[
                "n",
                "trials",
                "mean",
                "stderr",
                "mean_over_log",
                "level",
                "k",
                "coverage",
                "master_seed",
            ],
            &rows,
        )?,
    );
    dump_trajectory(cfg, &mut out)?;
    out.plot(cfg, "local_time.svg", || {
        line_plot(
            "Visits to the origin",
            "n",
            "E[b_0] / ln n",
            &[Series {
                name: "E[b_0]/ln n",
                points: reports.iter().map(|o| (o.report.n as f64, o.mean_over_log)).collect(),
            }],
        )
    });
    Ok(out)
}

fn tower_arg(text: &str, p: IterLogParams) -> Result<TowerReal> {
    match text.trim() {
        "T" => Ok(threshold_t(p)),
        t => t.parse(),
    }
}

fn scan_notes(out: &mut Outcome, r: &ScanReport) {
    out.note("checked", r.checked);
    out.note("violations", r.violations.len());
    out.note("indistinguishable", r.indistinguishable);
    out.note("unrepresentable", r.unrepresentable);
    out.note("undefined", r.undefined);
    out.note("max_second_difference", fmt_real(r.max_value));
}

type ScanFn = dyn Fn(&TowerReal) -> Result<TowerReal> + Sync;

pub fn concavity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = params(cfg)?;
    let name = if cfg.function.is_empty() {
        "l-tilde"
    } else {
        cfg.function.as_str()
    };
    let mut out = Outcome::default();
    out.note("function", name);
    let rows: Vec<CheckRow>;
    let passed;
    let checked;
    if name == "reciprocal" {
        let n: TowerReal = cfg.scale_n.parse()?;
        let lo = tower_arg(cfg.lo.as_deref().unwrap_or("e^-600"), p)?;
        let hi = match cfg.hi.as_deref() {
            Some(h) => tower_arg(h, p)?,
            None => TowerReal::from_ln(n.ln_f64() - threshold_t(p).ln_f64()),
        };
        let r = reciprocal_iterlog_concavity(p, &n, &lo, &hi, cfg.points, cfg.tol)?;
        let mut all = r.scan.rows();
        all.push(CheckRow::at_least(
            String::new(),
            "min_h_prime",
            r.min_h_prime,
            1.0,
            false,
        ));
        all.push(CheckRow::at_least(
            String::new(),
            "min_g_h_prime",
            r.min_g_h_prime,
            2.0,
            true,
        ));
        scan_notes(&mut out, &r.scan);
        out.note("outside_domain", r.outside_domain);
        rows = all;
        passed = r.passes();
        checked = r.scan.checked;
    } else {
        let ext = ConcaveExtension::new(p);
        let f: Box<ScanFn> = match name {
            "l-tilde" => Box::new(move |x: &TowerReal| l_tilde(p, x)),
            "extension" => Box::new(move |x: &TowerReal| ext.eval(x)),
            "square" => Box::new(|x: &TowerReal| {
                x.to_f64()
                    .map(|v| TowerReal::new(v * v))
                    .filter(|v| v.to_f64().is_some_and(f64::is_finite))
                    .ok_or_else(|| Error::Domain("square overflows".into()))
            }),
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown function {other:?} (l-tilde|extension|reciprocal|square)"
                )))
            }
        };
        let default_lo = if name == "l-tilde" {
            "T"
        } else if name == "extension" {
            "0"
        } else {
            "1"
        };
        let lo = tower_arg(cfg.lo.as_deref().unwrap_or(default_lo), p)?;
        let hi = tower_arg(
            cfg.hi
                .as_deref()
                .unwrap_or(if name == "square" { "10" } else { "1e300" }),
            p,
        )?;
        let r = concavity_scan(&*f, &lo, &hi, cfg.points, cfg.tol)?;
        scan_notes(&mut out, &r);
        if name == "extension" {
            out.note("beta", fmt_real(ext.beta()));
            out.note("knot", ext.knot());
        }
        rows = r.rows();
        passed = r.passes();
        checked = r.checked;
    }
    if checked == 0 {
        return Err(Error::Domain(format!(
            "no point of the {name} scan is representable; narrow --lo/--hi"
        )));
    }
    out.file("concavity.csv", rows_to_csv(&rows));
    if !passed {
        out.failure = Some(format!("{name} is not concave on the scanned range"));
    }
    Ok(out)
}

pub fn appendix_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = params(cfg)?;
    let mut rows = Vec::new();
    let mut failed = 0usize;
    for x in tower_sample_points(p, cfg.points) {
        let r = appendix_inequality_check(p, &x)?;
        if !r.holds() {
            failed += 1;
        }
        rows.extend(r.rows());
    }
    let mut out = Outcome::default();
    out.file("appendix.csv", rows_to_csv(&rows));
    out.note("points", cfg.points);
    out.note("failed_points", failed);
    if failed > 0 {
        out.failure = Some(format!("{failed} points violate the derivative inequalities"));
    }
    Ok(out)
}

/// Reads `(n, value)` pairs from a CSV with a header. `column` picks the
/// value column by name; by default `value` if present, else the second.
pub fn read_series(path: &Path, column: Option<&str>) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let n_col = find("n").unwrap_or(0);
    let v_col = match column {
        Some(c) => find(c).ok_or_else(|| Error::InvalidInput(format!("no column {c:?} in {}", path.display())))?,
        None => find("value").unwrap_or(1),
    };
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        let cell = |c: usize| -> Result<f64> {
            rec.get(c)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidInput(format!("row {}: column {c} is not a number", i + 2)))
        };
        out.push((cell(n_col)?, cell(v_col)?));
    }
    Ok(out)
}

pub const RATE_CAVEAT: &str = "rates n/ln^(i) n for i >= 2 are not separable at these n; \
compare compose-drift with L_(1,1) against n/ln ln n instead";

pub fn rate_fit_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("rate-fit needs --input".into()))?;
    let series = read_series(input, cfg.column.as_deref())?;
    let catalog: Vec<Rate> = match cfg.catalog.as_str() {
        "standard" => standard_catalog(),
        "extended" => extended_catalog(),
        list => list.split(';').map(Rate::parse).collect::<Result<_>>()?,
    };
    let fit = rate_fit(&series, &catalog)?;
    let rows: Vec<Vec<String>> = fit
        .iter()
        .map(|r| {
            vec![
                r.rate_name.clone(),
                fmt_real(r.band_min),
                fmt_real(r.band_max),
                fmt_real(r.slope),
                fmt_real(r.band_ratio()),
                fmt_real(r.residual_slope),
            ]
        })
        .collect();
    let mut out = Outcome::default();
    out.file(
        "rate_fit.csv",
        csv_bytes(
            &[
                "rate_name",
                "band_min",
                "band_max",
                "slope",
                "band_ratio",
                "residual_slope",
            ],
            &rows,
        )?,
    );
    out.note("best", &fit[0].rate_name);
    out.note("caveat", RATE_CAVEAT);
    out.plot(cfg, "rate_fit.svg", || {
        let curves: Vec<(String, Vec<(f64, f64)>)> = fit
            .iter()
            .map(|r| {
                let rate = Rate::parse(&r.rate_name).expect("catalog names parse");
                let first = series[0].1 / rate.eval(series[0].0);
                let pts = series.iter().map(|&(n, v)| (n, v / rate.eval(n) / first)).collect();
                (r.rate_name.clone(), pts)
            })
            .collect();
        let s: Vec<Series> = curves
            .iter()
            .map(|(name, pts)| Series {
                name,
                points: pts.clone(),
            })
            .collect();
        line_plot("Ratio to candidate rates", "n", "value / rate (first point = 1)", &s)
    });
    out.note("points", series.len());
    Ok(out)
}
