use std::path::Path;
use std::process::{Command, Output};

fn wl_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wl-lab")).args(args).env_remove("WL_OUT_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: &str = r#"
[target]
kind = "truncated_normal"
mean = 0.0
sd = 1.0
edges = [-10.0, 0.0, 10.0]

[proposal]
kind = "gaussian"
scale = 1.0

[sampler]
rule = "linear"
phi = [0.75, 0.25]
iterations = 5000
x0 = 0.0

[schedule]
kind = "flat_histogram"
gamma0 = 1.0
c = 0.05
min_samples = 500

[output]
replicas = 2
seed = 7
stride = 10
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("exp.cfg");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn limit_prints_both_proportions() {
    let o = wl_lab(&["limit", "--rule", "logform", "--phi", "0.75,0.25", "--gamma", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.792071 0.207929");
    let o = wl_lab(&["limit", "--rule", "linear", "--phi", "0.6,0.4", "--gamma", "0.3"]);
    assert_eq!(stdout(&o).trim(), "0.600000 0.400000");
}

#[test]
fn lattice_prints_zero_return_vector() {
    let o = wl_lab(&["theory", "lattice", "--phi", "3/4,1/4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "n = (3,1)");
    let o = wl_lab(&["theory", "lattice", "--phi", "1/2,1/3,1/6", "--from", "1,0,4", "--to", "0,2,0"]);
    let out = stdout(&o);
    assert!(out.contains("n = (3,2,1)") && out.contains("verified = true"), "{out}");
}

#[test]
fn coupling_has_no_violations() {
    let o = wl_lab(&["theory", "coupling", "--steps", "100000", "--epsilon", "0.3", "--eta", "0.1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "100000");
    assert_eq!(row[1], "0");
}

#[test]
fn coupling_rejects_law_outside_bounds() {
    let o = wl_lab(&["theory", "coupling", "--epsilon", "0.3", "--eta", "0.1", "--p-down-up", "0.2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("p2"));
}

#[test]
fn hitting_table_has_documented_columns() {
    let o = wl_lab(&["theory", "hitting", "--epsilon", "1", "--eta", "0", "--mc", "100"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "epsilon,eta,a,b,analytic,mc_mean,mc_se");
    assert!(lines.next().unwrap().starts_with("1,0,1,1,1,1,0"));
}

#[test]
fn run_writes_all_artifacts_under_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("results");
    let o = Command::new(env!("CARGO_BIN_EXE_wl-lab"))
        .args(["run", "--config", &cfg, "--stride", "100"])
        .env("WL_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in
        ["trace_r0.csv", "trace_r1.csv", "fh_r0.csv", "freq_r1.svg", "summary.csv", "fh_stats.csv", "config.toml"]
    {
        assert!(out.join(name).exists(), "missing {name}");
    }
    let trace = std::fs::read_to_string(out.join("trace_r0.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 50);
    assert!(trace.starts_with("t,bin,gamma,kappa,fh_event,z_1_2,"));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn out_flag_overrides_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let flag = dir.path().join("flag");
    let o = Command::new(env!("CARGO_BIN_EXE_wl-lab"))
        .args(["run", "--config", &cfg, "--replicas", "1", "--out"])
        .arg(&flag)
        .env("WL_OUT_DIR", dir.path().join("env"))
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(flag.join("trace_r0.csv").exists());
    assert!(!flag.join("trace_r1.csv").exists());
    assert!(!dir.path().join("env").exists());
}

#[test]
fn invalid_alpha_fails_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace(
        "kind = \"flat_histogram\"\ngamma0 = 1.0\nc = 0.05\nmin_samples = 500",
        "kind = \"deterministic\"\nalpha = 0.4",
    );
    let cfg = write_config(dir.path(), &text);
    let o = wl_lab(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("alpha") && err.contains("0.4"), "{err}");
}

#[test]
fn bundled_configs_parse_and_diagnose() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["toy_linear.cfg", "toy_logform.cfg", "toy_deterministic.cfg"] {
        let o = wl_lab(&["diagnose", "--config", root.join(name).to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("all assumptions hold = true"));
    }
}

#[test]
fn irreducibility_and_bounding_report_csv() {
    let o = wl_lab(&["theory", "irreducibility", "--phi", "3/4,1/4", "--counts", "2,1;1,1", "--trials", "2000"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().skip(1).all(|l| !l.ends_with(",0")), "{out}");

    let o = wl_lab(&["theory", "bounding", "--epsilon", "0", "--eta", "0", "--steps", "100"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("100,1,0,1,"), "{row}");
}
