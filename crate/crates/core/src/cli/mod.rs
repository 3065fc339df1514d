//! The `wreathwalk` experiment runner.
//!
//! Every subcommand writes its CSV (and optionally SVG) files into `--out`,
//! plus `manifest.txt`, which echoes the resolved config in the same
//! `key = value` grammar as config files and records the outcome. Exit
//! codes: 0 success, 1 I/O failure, 2 config error, 3 resource cap,
//! 4 failed verification.

mod commands;
pub mod config;
pub mod plot;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use commands::{fmt_real, read_series, Outcome, RATE_CAVEAT};
pub use config::ExperimentConfig;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_ASSERTION: i32 = 4;

pub const SEED_ENV: &str = "WREATHWALK_SEED";

#[derive(Parser, Debug)]
#[command(name = "wreathwalk", version, about = "Random walks on iterated wreath products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group axioms, generators, bracket soundness on a ball.
    VerifyGroup(Flags),
    /// Ball sizes v(r) up to --radius.
    Growth(Flags),
    /// Exact drift L(n) and E l^2 up to max --n.
    DriftExact(Flags),
    /// Monte Carlo word-length bracket over the --n grid.
    DriftMc(Flags),
    /// Drift via local times with the concave extension L_(k,alpha).
    ComposeDrift(Flags),
    /// Exact entropy H(n) up to max --n.
    EntropyExact(Flags),
    /// Exact entropy with the growth/entropy inequality constants.
    EntropyBounds(Flags),
    /// Range of the planar walk over the --n grid.
    RangeStats(Flags),
    /// Visits to the origin over the --n grid.
    LocalTime(Flags),
    /// A local-time functional chosen by --function.
    Functional(Flags),
    /// Second-difference concavity scan chosen by --function.
    Concavity(Flags),
    /// Derivative inequalities at tower-sampled points.
    AppendixCheck(Flags),
    /// Ratio bands against candidate rates for --input.
    RateFit(Flags),
}

impl Command {
    fn split(self) -> (&'static str, Flags) {
        match self {
            Command::VerifyGroup(f) => ("verify-group", f),
            Command::Growth(f) => ("growth", f),
            Command::DriftExact(f) => ("drift-exact", f),
            Command::DriftMc(f) => ("drift-mc", f),
            Command::ComposeDrift(f) => ("compose-drift", f),
            Command::EntropyExact(f) => ("entropy-exact", f),
            Command::EntropyBounds(f) => ("entropy-bounds", f),
            Command::RangeStats(f) => ("range-stats", f),
            Command::LocalTime(f) => ("local-time", f),
            Command::Functional(f) => ("functional", f),
            Command::Concavity(f) => ("concavity", f),
            Command::AppendixCheck(f) => ("appendix-check", f),
            Command::RateFit(f) => ("rate-fit", f),
        }
    }
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Config file of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Group, e.g. "Z2 wr C2" or "Z2 wr Z2 wr C2".
    #[arg(long)]
    spec: Option<String>,
    /// Step counts: "a,b,c" or "start:stop:factor"; exact commands use the largest.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Master seed (default: $WREATHWALK_SEED, else 0).
    #[arg(long)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<String>,
    /// Skip SVG plots.
    #[arg(long)]
    no_plot: bool,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    support_cap: Option<String>,
    #[arg(long)]
    ball_cap: Option<String>,
    /// Relative tolerance for concavity scans.
    #[arg(long)]
    tol: Option<String>,
    /// Iterated-log order.
    #[arg(long)]
    k: Option<String>,
    /// Iterated-log exponent in (0, 1].
    #[arg(long)]
    alpha: Option<String>,
    /// Function for `functional` or `concavity`.
    #[arg(long)]
    function: Option<String>,
    /// Scan range start: number, "e^u", "exp^d(t)" or "T".
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<String>,
    /// Grid points for scans, sample points for appendix-check.
    #[arg(long)]
    points: Option<String>,
    /// The n in 1/ln^(k)(n/x) for the reciprocal scan.
    #[arg(long)]
    scale_n: Option<String>,
    /// Series CSV for rate-fit.
    #[arg(long)]
    input: Option<String>,
    /// Value column of the rate-fit input.
    #[arg(long)]
    column: Option<String>,
    /// "standard", "extended", or rate names separated by ';'.
    #[arg(long)]
    catalog: Option<String>,
    /// Step distribution: "distinct" or "multiplicity".
    #[arg(long)]
    weighting: Option<String>,
    /// Also write trial 0 of the largest n to trajectory.txt.
    #[arg(long)]
    dump_trajectory: bool,
}

impl Flags {
    fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v.clone());
            }
        };
        put("spec", &self.spec);
        put("n", &self.n);
        put("trials", &self.trials);
        put("seed", &self.seed);
        put("out", &self.out);
        put("threads", &self.threads);
        put("radius", &self.radius);
        put("support-cap", &self.support_cap);
        put("ball-cap", &self.ball_cap);
        put("tol", &self.tol);
        put("k", &self.k);
        put("alpha", &self.alpha);
        put("function", &self.function);
        put("lo", &self.lo);
        put("hi", &self.hi);
        put("points", &self.points);
        put("scale-n", &self.scale_n);
        put("input", &self.input);
        put("column", &self.column);
        put("catalog", &self.catalog);
        put("weighting", &self.weighting);
        if self.no_plot {
            m.insert("no-plot".into(), "true".into());
        }
        if self.dump_trajectory {
            m.insert("dump-trajectory".into(), "true".into());
        }
        m
    }
}

fn exit_code(e: &Error) -> (i32, &'static str) {
    match e {
        Error::Resource { .. } => (EXIT_RESOURCE, "resource"),
        Error::Assertion(_) => (EXIT_ASSERTION, "assertion"),
        Error::Io(_) => (EXIT_IO, "io"),
        _ => (EXIT_CONFIG, "config"),
    }
}

fn dispatch(cfg: &ExperimentConfig) -> crate::Result<Outcome> {
    match cfg.command.as_str() {
        "verify-group" => commands::verify_group(cfg),
        "growth" => commands::growth(cfg),
        "drift-exact" => commands::drift_exact(cfg),
        "drift-mc" => commands::drift_mc(cfg),
        "compose-drift" => commands::compose(cfg),
        "entropy-exact" => commands::entropy_exact(cfg),
        "entropy-bounds" => commands::entropy_bounds(cfg),
        "range-stats" => commands::range_stats(cfg),
        "local-time" => commands::local_time(cfg),
        "functional" => commands::functional(cfg),
        "concavity" => commands::concavity(cfg),
        "appendix-check" => commands::appendix_check(cfg),
        "rate-fit" => commands::rate_fit_cmd(cfg),
        other => Err(Error::InvalidInput(format!("unknown command {other}"))),
    }
}

struct Manifest<'a> {
    command: &'a str,
    status: &'a str,
    exit_code: i32,
    message: Option<String>,
    config_echo: Option<String>,
    files: Vec<String>,
    notes: Vec<(String, String)>,
    seconds: f64,
}

impl Manifest<'_> {
    fn render(&self) -> String {
        let one_line = |s: &str| s.replace('\n', " ");
        let mut lines = vec![
            format!("command = {}", self.command),
            format!("status = {}", self.status),
            format!("exit_code = {}", self.exit_code),
        ];
        if let Some(m) = &self.message {
            lines.push(format!("message = {}", one_line(m)));
        }
        lines.push(format!("version = {}", env!("CARGO_PKG_VERSION")));
        lines.push("rng = ChaCha8, key from master seed, stream = trial index".into());
        lines.push(format!("wall_time_seconds = {:.3}", self.seconds));
        lines.push(format!("files = {}", self.files.join(",")));
        for (k, v) in &self.notes {
            lines.push(format!("{k} = {}", one_line(v)));
        }
        let mut text = lines.join("\n");
        text.push('\n');
        if let Some(echo) = &self.config_echo {
            text.push_str("# config\n");
            text.push_str(echo);
        }
        text
    }

    fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("manifest.txt"), self.render())
    }
}

/// Parses `args` (program name first), runs the experiment and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let started = Instant::now();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (command, flags) = cli.command.split();
    let flag_map = flags.to_map();
    let fallback_out = PathBuf::from(flag_map.get("out").map(String::as_str).unwrap_or("out"));

    let fail_early = |e: Error, out: &Path| -> i32 {
        let (code, status) = exit_code(&e);
        eprintln!("error: {e}");
        let m = Manifest {
            command,
            status,
            exit_code: code,
            message: Some(e.to_string()),
            config_echo: None,
            files: vec![],
            notes: vec![],
            seconds: started.elapsed().as_secs_f64(),
        };
        if let Err(io) = m.write(out) {
            eprintln!("error: cannot write manifest: {io}");
        }
        code
    };

    let file_map = match &flags.config {
        Some(path) => match fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
            .and_then(|t| config::parse_config_text(&t))
        {
            Ok(m) => m,
            Err(e) => return fail_early(e, &fallback_out),
        },
        None => BTreeMap::new(),
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let cfg = match ExperimentConfig::resolve(command, &flag_map, &file_map, env_seed.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            let out = file_map.get("out").map(PathBuf::from).unwrap_or(fallback_out);
            return fail_early(e, &out);
        }
    };
    if let Some(t) = cfg.threads {
        // A pool already installed by an earlier call in this process is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }

    let result = dispatch(&cfg);
    let mut manifest = Manifest {
        command,
        status: "ok",
        exit_code: EXIT_OK,
        message: None,
        config_echo: Some(cfg.echo()),
        files: vec![],
        notes: vec![],
        seconds: 0.0,
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = fs::create_dir_all(&cfg.out) {
                eprintln!("error: {}: {e}", cfg.out.display());
                return EXIT_IO;
            }
            for (name, bytes) in &outcome.files {
                if let Err(e) = fs::write(cfg.out.join(name), bytes) {
                    manifest.status = "io";
                    manifest.exit_code = EXIT_IO;
                    manifest.message = Some(format!("{name}: {e}"));
                    break;
                }
                manifest.files.push(name.clone());
            }
            manifest.notes = outcome.notes;
            if manifest.exit_code == EXIT_OK {
                if let Some(msg) = outcome.failure {
                    eprintln!("verification failed: {msg}");
                    manifest.status = "assertion";
                    manifest.exit_code = EXIT_ASSERTION;
                    manifest.message = Some(msg);
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let (code, status) = exit_code(&e);
            manifest.status = status;
            manifest.exit_code = code;
            manifest.message = Some(e.to_string());
        }
    }
    manifest.seconds = started.elapsed().as_secs_f64();
    if let Err(e) = manifest.write(&cfg.out) {
        eprintln!("error: cannot write manifest: {e}");
        return EXIT_IO;
    }
    for f in &manifest.files {
        println!("{}", cfg.out.join(f).display());
    }
    manifest.exit_code
}
