use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus/valid").join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homfield")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn derive_oscillator() {
    let o = run(&["derive", corpus("oscillator.model").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("momentum: p(y) = d(y, tau)"));
    assert!(text.contains("hamiltonian: y^2/2 + p(y)^2/2"));
    assert!(text.contains("monitor: d(H, tau) = 0"));
    assert_eq!(text, stdout(&run(&["derive", corpus("oscillator.model").to_str().unwrap()])));
    let json = run(&["derive", corpus("oscillator.model").to_str().unwrap(), "--format", "json"]);
    assert!(stdout(&json).trim_start().starts_with('{'));
}

#[test]
fn simulate_oscillator_writes_csv() {
    let out = tmp("osc.csv");
    let o = run(&[
        "simulate",
        corpus("oscillator.model").to_str().unwrap(),
        "--tau",
        "0:6.2832",
        "--step",
        "1e-3",
        "--method",
        "midpoint",
        "--init",
        "y=1",
        "--tolerance",
        "1e-6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("conserved: yes"));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("tau,y,p(y),H\n"));
    let h: Vec<f64> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(h.len(), 6285);
    assert!(h.iter().all(|v| (v - 0.5).abs() <= 0.5e-6));
}

#[test]
fn gravity_frw_conserves_energy() {
    let out = tmp("frw.csv");
    let o = run(&["gravity", "frw", "--a0", "1", "--adot0", "1", "--tau", "0:1", "--step", "1e-4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("hamiltonian: -p(a)^2/(24*a)"), "{text}");
    assert!(text.contains("conserved: yes"));
    assert!(fs::read_to_string(out).unwrap().starts_with("tau,a,p(a),H\n"));
}

#[test]
fn sweep_writes_one_file_per_value() {
    let out = tmp("pendulum.csv");
    let o = run(&[
        "simulate",
        corpus("pendulum.model").to_str().unwrap(),
        "--init",
        "theta=0.5",
        "--step",
        "1e-2",
        "--sweep",
        "g=1,9.81",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp("pendulum.g=1.csv").exists());
    assert!(tmp("pendulum.g=9.81.csv").exists());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["derive"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", corpus("oscillator.model").to_str().unwrap(), "--tau", "1"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", corpus("oscillator.model").to_str().unwrap(), "--sweep", "k=1"]).status.code(), Some(1));
    assert_eq!(run(&["gravity", "kasner"]).status.code(), Some(1));
    let bad = tmp("bad.model");
    fs::write(&bad, "model \"x\"\nfield y\nlagrangian L = q\n").unwrap();
    let o = run(&["derive", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:16"));
    assert_eq!(run(&["gravity", "static"]).status.code(), Some(3));
    let blowup = tmp("blowup.model");
    fs::write(&blowup, "model \"b\"\nfield y\nhamiltonian H = 1/2*p(y)^2 - 1/3*y^3\n").unwrap();
    let o = run(&["simulate", blowup.to_str().unwrap(), "--init", "y=2,p(y)=2", "--tau", "0:10", "--step", "1e-2", "--method", "rk4"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&[
        "simulate", corpus("anharmonic.model").to_str().unwrap(), "--init", "q=1", "--tau", "0:5", "--step", "0.5",
        "--method", "rk4", "--tolerance", "1e-9",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn check_command() {
    let o = run(&["check", corpus("time_mechanics.model").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("result: pass\n"));
}
