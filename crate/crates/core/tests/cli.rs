//! The command-line front end, driven as a subprocess.

use std::path::PathBuf;
use std::process::{Command, Output};

use cellcall::harness::{load_scenario, save_scenario};

fn cellcall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellcall"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn duel_fig3_reports_nine_fifths() {
    let o = cellcall(&[
        "duel",
        "--adversary",
        "fig3",
        "--alg",
        "caco2",
        "--omega",
        "9",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.contains("totals: demand 36, online 15, opt 27, ratio 9/5 (~1.8000)"),
        "{text}"
    );
    assert!(text.contains("certificate (caco2): Pass"), "{text}");
}

#[test]
fn run_writes_csv_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = cellcall(&[
        "run",
        &scenario("fig2.json"),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("q,r,color,demand,online_accepted,opt_accepted")
    );
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["run", "flower_random.json"],
        vec!["verify", "flower_requests.json"],
        vec![
            "sweep",
            "fig2.json",
            "--grid",
            "omega=21,42;alg=caco,greedy",
        ],
    ] {
        let path = scenario(args[1]);
        let mut full: Vec<&str> = args.clone();
        full[1] = &path;
        assert_eq!(cellcall(&full).stdout, cellcall(&full).stdout, "{args:?}");
    }
}

#[test]
fn seed_flag_changes_random_traffic() {
    let a = cellcall(&["run", &scenario("flower_random.json"), "--format", "csv"]);
    let b = cellcall(&[
        "run",
        &scenario("flower_random.json"),
        "--format",
        "csv",
        "--seed",
        "2",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn sweep_lists_points_and_summary() {
    let o = cellcall(&["sweep", &scenario("fig2.json"), "--grid", "omega=21,42,84"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.matches("ratio 7/3").count(), 3, "{text}");
    assert!(
        text.contains("summary:") && text.contains("min 7/3"),
        "{text}"
    );
}

#[test]
fn sweep_with_failing_point_exits_nonzero_but_reports_the_rest() {
    let o = cellcall(&["sweep", &scenario("fig2.json"), "--grid", "omega=10,21"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(
        text.contains("ERROR") && text.contains("ratio 7/3"),
        "{text}"
    );
}

#[test]
fn invalid_inputs_fail_with_context() {
    let o = cellcall(&[
        "duel",
        "--adversary",
        "fig2",
        "--alg",
        "caco",
        "--omega",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not divisible by 7"));

    let o = cellcall(&[
        "duel",
        "--adversary",
        "fig9",
        "--alg",
        "caco",
        "--omega",
        "21",
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("fig9"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"name\": \"bad\",\n  \"omega\": 7,\n  \"cells\": [[0, 0]],\n  \"traffic\": {\"requests\": [\n    [0, 0],\n    [3, 3]\n  ]},\n  \"algorithm\": \"caco\"\n}\n",
    )
    .unwrap();
    let o = cellcall(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("bad.json:7:") && err.contains("(3,3)"),
        "{err}"
    );
}

#[test]
fn verify_forces_certificates_on() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.json");
    let mut config = load_scenario(scenario("fig2.json")).unwrap();
    config.verify_certificate = false;
    config.compute_opt = false;
    save_scenario(&config, &path).unwrap();

    let run = stdout(&cellcall(&["run", path.to_str().unwrap()]));
    assert!(
        run.contains("opt -, ratio -") && !run.contains("certificate"),
        "{run}"
    );
    let verify = stdout(&cellcall(&["verify", path.to_str().unwrap()]));
    assert!(
        verify.contains("ratio 7/3") && verify.contains("certificate (caco): Pass"),
        "{verify}"
    );
}
