use latticesum_cli::record::{from_csv, Status};
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latticesum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sum_emits_one_record_per_order() {
    let o = cli(&["sum", "--kernel", "hankel", "--k", "1", "--d", "1", "--alpha", "0.4", "--lmax", "119"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = from_csv(&stdout(&o)).unwrap();
    assert_eq!(recs.len(), 120);
    assert!(recs.iter().enumerate().all(|(l, r)| r.l == l as u32 && r.status == Status::Ok));
    assert!(recs.iter().all(|r| r.elapsed_us.is_none()));
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["sum", "--k", "7*pi/4", "--alpha", "pi/4"]).status.code(), Some(2));
    assert_eq!(cli(&["sum", "--k", "1", "--nonsense"]).status.code(), Some(1));
    assert_eq!(cli(&["sum", "--k", "-1"]).status.code(), Some(1));
    assert_eq!(cli(&["sum", "--k", "1", "--alpha", "0.4", "--cmax", "32"]).status.code(), Some(3));
    assert_eq!(cli(&["reduce2d", "--k", "0.4", "--k1", "0.4", "--k2", "0"]).status.code(), Some(2));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn errors_are_reported_as_json() {
    let o = cli(&["sum", "--k", "7*pi/4", "--alpha", "pi/4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "wood_anomaly");
    assert_eq!(v["exit_code"], 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn scan_is_deterministic_across_thread_counts() {
    let args = ["scan", "--k", "1", "--alpha", "0.4", "--lmax", "3", "--grid", "0.5:20:40"];
    let a = cli(&[&args[..], &["--threads", "1"]].concat());
    let b = cli(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let recs = from_csv(&stdout(&a)).unwrap();
    assert_eq!(recs.len(), 160);
    let ks: Vec<f64> = recs.iter().filter(|r| r.l == 0).map(|r| r.k).collect();
    assert!(ks.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn csv_output_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let p = path.to_str().unwrap();
    let o = cli(&[
        "scan",
        "--kernel",
        "spherical",
        "--k",
        "2",
        "--var",
        "alpha",
        "--grid",
        "-1:1:7",
        "--l",
        "0,2",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let recs = from_csv(&text).unwrap();
    assert_eq!(latticesum_cli::record::to_csv(&recs).unwrap(), text);
}

#[test]
fn json_bundle_has_metadata() {
    let o = cli(&["sum", "--k", "2.5", "--lmax", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metadata"]["command"], "sum");
    assert!(v["metadata"]["git_hash"].is_string());
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    assert_eq!(v["records"][0]["status"], "ok");
}

#[test]
fn scan_marks_anomalies_without_aborting() {
    let o = cli(&["scan", "--k", "1", "--alpha", "pi/4", "--grid", "7*pi/4:7*pi/4+1:3"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = from_csv(&stdout(&o)).unwrap();
    assert_eq!(recs[0].status, Status::WoodError);
    assert!(recs[1..].iter().all(|r| r.status.has_value()));
}

#[test]
fn timing_flag_fills_elapsed() {
    let o = cli(&["sum", "--k", "1", "--timing"]);
    let recs = from_csv(&stdout(&o)).unwrap();
    assert!(recs[0].elapsed_us.is_some());
}

#[test]
fn reduce_components_add_up() {
    let o = cli(&["reduce2d", "--k", "1", "--k1", "0.4", "--k2", "0.3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["records"][0];
    let f = |k: &str| r[k].as_f64().unwrap();
    let re = f("upper_re") + f("lower_re") + f("grating_re");
    let im = f("upper_im") + f("lower_im") + f("grating_im");
    assert!((re - f("total_re")).hypot(im - f("total_im")) <= 1e-14 * f("total_re").hypot(f("total_im")));
}

#[test]
fn bench_statistics() {
    let o = cli(&["bench", "--scenario", "k1", "--warmup", "1", "--reps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["records"][0];
    assert!(r["median_ms"].as_f64().unwrap() <= r["p95_ms"].as_f64().unwrap());
    assert_eq!(r["kernel_evals_stable"], true);
}

#[test]
fn fit_blowup_needs_five_points() {
    let o = cli(&["fit-blowup", "--k", "7*pi/4", "--alpha", "pi/4", "--grid", "1e-3:1e-1:4:log"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "domain");
}

#[test]
fn fit_blowup_from_scan_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dk.csv");
    let p = path.to_str().unwrap();
    let scan = ["scan", "--kernel", "spherical", "--k", "7*pi/4", "--alpha", "pi/4", "--var", "delta_k"];
    assert_eq!(cli(&[&scan[..], &["--grid", "1e-3:1e-1:9:log", "--out", p]].concat()).status.code(), Some(0));
    let o = cli(&["fit-blowup", "--input", p, "--anchor", "7*pi/4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["records"][0]["model"], "log");
    assert_eq!(v["records"][0]["points"], 9);
}
