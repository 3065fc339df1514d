use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wreathwalk(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wreathwalk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("WREATHWALK_SEED")
        .output()
        .unwrap()
}

fn manifest(out: &Path) -> String {
    fs::read_to_string(out.join("manifest.txt")).unwrap()
}

fn manifest_value(out: &Path, key: &str) -> String {
    let text = manifest(out);
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in manifest:\n{text}"))
        .to_string()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn verify_group_reports_every_check_passing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wreathwalk(
        &["verify-group", "--spec", "Z2 wr C2", "--radius", "4", "--trials", "500"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("verify_group.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("check,cases,failures,pass"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 8);
    assert!(rows.iter().all(|r| r.ends_with(",0,true")), "{csv}");
    assert_eq!(manifest_value(tmp.path(), "status"), "ok");
}

#[test]
fn range_stats_is_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["range-stats", "--n", "65536", "--trials", "2000", "--seed", "7"];
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(wreathwalk(&args, &a).status.code(), Some(0));
    assert_eq!(wreathwalk(&args, &b).status.code(), Some(0));
    let first = fs::read(a.join("range.csv")).unwrap();
    assert_eq!(first, fs::read(b.join("range.csv")).unwrap());
    assert!(first.ends_with(b"\n") && !first.contains(&b'\r'));
}

#[test]
fn thread_count_does_not_change_output() {
    let tmp = tempfile::tempdir().unwrap();
    let base = [
        "drift-mc",
        "--n",
        "64,256",
        "--trials",
        "300",
        "--seed",
        "3",
        "--no-plot",
    ];
    let one = tmp.path().join("one");
    let three = tmp.path().join("three");
    assert_eq!(
        wreathwalk(&[&base[..], &["--threads", "1"]].concat(), &one)
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        wreathwalk(&[&base[..], &["--threads", "3"]].concat(), &three)
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        fs::read(one.join("drift.csv")).unwrap(),
        fs::read(three.join("drift.csv")).unwrap()
    );
}

#[test]
fn rate_fit_ranks_n_over_log_n_first_on_the_synthetic_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let input = fixture("synthetic_nlogn.csv");
    let out = wreathwalk(&["rate-fit", "--input", input.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("rate_fit.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("rate_name,band_min,band_max,slope"));
    assert!(lines.next().unwrap().starts_with("n/ln n,"));
    assert!(manifest_value(tmp.path(), "caveat").contains("not separable"));
    assert!(tmp.path().join("rate_fit.svg").exists());
}

#[test]
fn malformed_config_exits_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("bad.conf");
    fs::write(&config, "trials = 10\nthis line has no equals sign\n").unwrap();
    let out_dir = tmp.path().join("out");
    let out = wreathwalk(&["growth", "--config", config.to_str().unwrap()], &out_dir);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(manifest_value(&out_dir, "status"), "config");
    assert_eq!(manifest_value(&out_dir, "exit_code"), "2");
}

#[test]
fn invalid_values_and_usage_errors_exit_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        wreathwalk(&["range-stats", "--trials", "0"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        wreathwalk(&["growth", "--spec", "Z3 wr C2"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(wreathwalk(&["no-such-command"], tmp.path()).status.code(), Some(2));
}

#[test]
fn convex_control_exits_with_assertion_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wreathwalk(&["concavity", "--function", "square", "--points", "200"], tmp.path());
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(manifest_value(tmp.path(), "status"), "assertion");
    let csv = fs::read_to_string(tmp.path().join("concavity.csv")).unwrap();
    assert!(csv.starts_with("x,check,lhs,rhs,slack,pass\n"));
    assert!(csv.contains(",false"));
}

#[test]
fn concave_functions_pass() {
    let tmp = tempfile::tempdir().unwrap();
    for f in ["l-tilde", "extension", "reciprocal"] {
        let out = wreathwalk(&["concavity", "--function", f, "--points", "2000"], tmp.path());
        assert_eq!(
            out.status.code(),
            Some(0),
            "{f}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let out = wreathwalk(
        &["appendix-check", "--k", "2", "--alpha", "0.5", "--points", "50"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn support_cap_exits_with_resource_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wreathwalk(&["entropy-exact", "--n", "4", "--support-cap", "100"], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(manifest_value(tmp.path(), "status"), "resource");
}

#[test]
fn seed_precedence_is_flag_then_file_then_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_wreathwalk"));
        cmd.args(["local-time", "--n", "100", "--trials", "5", "--no-plot", "--out"])
            .arg(tmp.path())
            .args(extra);
        cmd.env_remove("WREATHWALK_SEED");
        if let Some(e) = env {
            cmd.env("WREATHWALK_SEED", e);
        }
        assert_eq!(cmd.output().unwrap().status.code(), Some(0));
        manifest_value(tmp.path(), "seed")
    };
    let config = tmp.path().join("seed.conf");
    fs::write(&config, "# seeds\nseed = 11\n").unwrap();
    let config = config.to_str().unwrap();
    assert_eq!(run(&[], None), "0");
    assert_eq!(run(&[], Some("5")), "5");
    assert_eq!(run(&["--config", config], Some("5")), "11");
    assert_eq!(run(&["--config", config, "--seed", "13"], Some("5")), "13");
}

#[test]
fn manifest_echo_is_a_usable_config() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let out = wreathwalk(
        &[
            "functional",
            "--function",
            "sqrt",
            "--n",
            "256,1024",
            "--trials",
            "50",
            "--seed",
            "9",
        ],
        &first,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = manifest(&first);
    let echo = text.split_once("# config\n").unwrap().1;
    let config = tmp.path().join("echo.conf");
    fs::write(
        &config,
        echo.replace(first.to_str().unwrap(), tmp.path().join("second").to_str().unwrap()),
    )
    .unwrap();
    let second = tmp.path().join("second");
    let out = wreathwalk(&["functional", "--config", config.to_str().unwrap()], &second);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read(first.join("functional.csv")).unwrap(),
        fs::read(second.join("functional.csv")).unwrap()
    );
}

#[test]
fn plots_are_optional() {
    let tmp = tempfile::tempdir().unwrap();
    let with = tmp.path().join("with");
    let without = tmp.path().join("without");
    assert_eq!(
        wreathwalk(&["entropy-bounds", "--n", "3"], &with).status.code(),
        Some(0)
    );
    assert_eq!(
        wreathwalk(&["entropy-bounds", "--n", "3", "--no-plot"], &without)
            .status
            .code(),
        Some(0)
    );
    assert!(with.join("entropy_bounds.svg").exists());
    assert!(!without.join("entropy_bounds.svg").exists());
    let csv = fs::read_to_string(with.join("entropy_bounds.csv")).unwrap();
    assert!(csv.starts_with("n,H,L,El2,v,lnv,"));
    assert!(csv.contains("\n1,2.772588722239781,1,1,17,"));
}

#[test]
fn trajectory_dump_has_one_point_per_line() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wreathwalk(
        &["range-stats", "--n", "10,50", "--trials", "3", "--dump-trajectory"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let dump = fs::read_to_string(tmp.path().join("trajectory.txt")).unwrap();
    let lines: Vec<&str> = dump.lines().collect();
    assert_eq!(lines.len(), 51);
    assert_eq!(lines[0], "(0,0)");
    assert!(lines
        .iter()
        .all(|l| l.starts_with('(') && l.ends_with(')') && l.contains(',')));
}

#[test]
fn drift_series_has_the_documented_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wreathwalk(&["drift-mc", "--n", "16,32", "--trials", "20"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("drift.csv")).unwrap();
    assert!(csv.starts_with("n,lower,lower_se,upper,upper_se,trials,seed\n"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn scan_without_representable_points_is_a_domain_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = wreathwalk(
        &[
            "concavity",
            "--function",
            "l-tilde",
            "--k",
            "2",
            "--alpha",
            "0.5",
            "--hi",
            "exp^2(200)",
            "--points",
            "50",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(manifest_value(tmp.path(), "message").contains("representable"));
}
