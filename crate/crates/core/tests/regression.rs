//! Pinned outputs. Set `UPDATE_SNAPSHOTS=1` to rewrite them after an
//! intentional behavior change.

use std::path::PathBuf;

use cellcall::adversary::random_sequence;
use cellcall::harness::{emit_report, load_scenario, run_experiment, Format};
use cellcall::Network;

fn check_snapshot(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/snapshots")
        .join(name);
    if std::env::var_os("UPDATE_SNAPSHOTS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "snapshot {name} changed");
}

#[test]
fn flower_sequence_seed_7() {
    let seq = random_sequence(&Network::flower(), 200, 7).unwrap();
    let text: String = seq.iter().map(|c| format!("{},{}\n", c.q, c.r)).collect();
    check_snapshot("flower_seed7_len200.txt", &text);
}

#[test]
fn flower_random_greedy_report() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/flower_random.json");
    let report = run_experiment(&load_scenario(path).unwrap()).unwrap();
    check_snapshot(
        "flower_random_greedy.csv",
        &emit_report(&report, Format::Csv),
    );
    check_snapshot(
        "flower_random_greedy.txt",
        &emit_report(&report, Format::Text),
    );
}
