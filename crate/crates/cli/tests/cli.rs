use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rule110_cli::{CliError, EXIT_INITIAL};
use rule110_core::Error;

fn rule110(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rule110"))
        .args(args)
        .output()
        .expect("run rule110")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cfg(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_string()
}

fn write_cfg(dir: &Path, body: &str) -> String {
    let p = dir.join("run.cfg");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const COLLISION: &str = r#"
[lattice]
width = 713
window = 500

[gliders]
placements = ["G38 310 0", "G18 376 9"]

[errors]
p = 0.1
m = 10
"#;

#[test]
fn ether_pbm_header() {
    let out = rule110(&["ether", "--width", "14", "--steps", "28"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("P1\n14 29\n00010011011111\n"));
}

#[test]
fn ether_rejects_bad_width() {
    let out = rule110(&["ether", "--width", "15"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("rule110: "));
}

#[test]
fn gliders_list_has_every_glider() {
    let out = rule110(&["gliders", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id\tperiod\tshift"));
    assert_eq!(text.lines().count(), 69);
    assert!(text.lines().any(|l| l.starts_with("G18\t30\t-8\t")));
}

#[test]
fn gliders_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("catalog.txt");
    let f = file.to_str().unwrap();
    assert!(rule110(&["gliders", "export", "--out", f]).status.success());
    let again = rule110(&["gliders", "--catalog", f, "export"]);
    assert_eq!(again.stdout, std::fs::read(&file).unwrap());
}

#[test]
fn gliders_show_unknown_id() {
    let out = rule110(&["gliders", "show", "G99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let a = rule110(&["sweep", "--config", &cfg("collision-stability.cfg"), "--jobs", "3"]);
    let b = rule110(&["sweep", "--config", &cfg("collision-stability.cfg"), "--jobs", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("site,base_prob,state_fingerprint,changed,settled"));
    assert_eq!(text.lines().count(), 23);
}

#[test]
fn flip_probability_scales_with_p() {
    let dir = tempfile::tempdir().unwrap();
    let low = rule110(&["sweep", "--config", &write_cfg(dir.path(), COLLISION)]);
    let high = rule110(&["sweep", "--config", &write_cfg(dir.path(), &COLLISION.replace("p = 0.1", "p = 0.5"))]);
    let low = String::from_utf8(low.stdout).unwrap();
    let high = String::from_utf8(high.stdout).unwrap();
    let prob = |t: &str, row: usize| -> f64 { t.lines().nth(row).unwrap().split(',').nth(1).unwrap().parse().unwrap() };
    assert!((prob(&low, 1) - 0.9).abs() < 1e-15);
    assert!((prob(&high, 1) - 0.5).abs() < 1e-15);
    assert!((prob(&high, 2) / prob(&low, 2) - 5.0).abs() < 1e-12);
    // outcomes do not depend on p
    let tail = |t: &str| t.lines().map(|l| l.split(',').skip(2).collect::<Vec<_>>().join(",")).collect::<Vec<_>>();
    assert_eq!(tail(&low), tail(&high));
}

#[test]
fn unreachable_forcing_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{COLLISION}\n[rule]\nkind = \"forcing\"\ntarget = \"G67+G67+G67\"\n");
    let out = rule110(&["reweight", "--config", &write_cfg(dir.path(), &body)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn narrow_ring_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let body = COLLISION.replace("width = 713", "width = 30");
    let out = rule110(&["sweep", "--config", &write_cfg(dir.path(), &body)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{COLLISION}\n[run]\nsteps = 4\n");
    let out = rule110(&["sweep", "--config", &write_cfg(dir.path(), &body)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_initial_rows_map_to_exit_4() {
    // splicing only places catalogued gliders, so these cannot be reached
    // from a config file
    let unknown = CliError::Core(Error::UnclassifiedInitial("U:0123456789ab".into()));
    let turbulent = CliError::Core(Error::TurbulentInitial { coverage: 0.1 });
    assert_eq!(unknown.exit_code(), EXIT_INITIAL);
    assert_eq!(turbulent.exit_code(), EXIT_INITIAL);
    assert_eq!(EXIT_INITIAL, 4);
}

#[test]
fn sample_files_repeat_for_a_seed() {
    let run = |seed: &str| rule110(&["sample", "--config", &cfg("collision-stability.cfg"), "-n", "500", "--seed", seed]).stdout;
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn sweep_writes_one_diagram_per_flip() {
    let dir = tempfile::tempdir().unwrap();
    let out = rule110(&[
        "sweep",
        "--config",
        &cfg("near-flips.cfg"),
        "--diagrams",
        dir.path().to_str().unwrap(),
        "--out",
        dir.path().join("t.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let n = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(n, 22);
    let first = std::fs::read_to_string(dir.path().join("site-01.pbm")).unwrap();
    assert!(first.starts_with("P1\n566 401\n"));
}
