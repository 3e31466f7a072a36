use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const CONFIG: &str = "\
# small smooth run
alpha = 0.5
kappa = 1
epsilon = 0.001
n = 32
dt = 0.01
t_end = 0.2
ic = random_spectrum
ic_beta = 3
ic_k_max = 4
ic_amplitude = 0.5
seed = 11
snapshot_every = 5
diagnostics_every = 2
";

fn sqg(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sqg"));
    cmd.args(args).env_remove("SQG_OUTPUT_DIR");
    if let Some(p) = env_out {
        cmd.env("SQG_OUTPUT_DIR", p);
    }
    cmd.output().expect("spawn sqg")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(tmp: &Path, out: &str, extra: &[&str]) -> PathBuf {
    let cfg = write_config(tmp, "small.cfg", CONFIG);
    let dir = tmp.join(out);
    let mut args = vec![
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = sqg(&args, None);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir
}

#[test]
fn run_verify_and_export() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = run(tmp.path(), "a", &[]);
    for f in [
        "manifest.json",
        "diagnostics.jsonl",
        "flux.csv",
        "config.txt",
    ] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let o = sqg(&["verify", dir.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let frames = fs::read_to_string(dir.join("diagnostics.jsonl"))
        .unwrap()
        .lines()
        .count();
    let o = sqg(&["export", dir.to_str().unwrap(), "--kind", "energy"], None);
    assert_eq!(code(&o), 0);
    let energy = fs::read_to_string(dir.join("exports/energy.csv")).unwrap();
    assert_eq!(energy.lines().count(), frames + 1);
    assert!(energy.starts_with("t,energy,dissipation_kappa,dissipation_eps,linf\n"));

    sqg(&["export", dir.to_str().unwrap(), "--kind", "flux"], None);
    let first = fs::read(dir.join("exports/flux.csv")).unwrap();
    assert!(first.starts_with(b"t,Q,Pi_Q,term_rQ,term_high,bound,ratio\n"));
    sqg(&["export", dir.to_str().unwrap(), "--kind", "flux"], None);
    assert_eq!(first, fs::read(dir.join("exports/flux.csv")).unwrap());

    for kind in ["criterion", "spectrum"] {
        assert_eq!(
            code(&sqg(
                &["export", dir.to_str().unwrap(), "--kind", kind],
                None
            )),
            0
        );
    }
    let o = sqg(
        &["export", dir.to_str().unwrap(), "--kind", "vorticity"],
        None,
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("vorticity"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let a = run(tmp.path(), "a", &[]);
    let b = run(tmp.path(), "b", &[]);
    for f in [
        "diagnostics.jsonl",
        "flux.csv",
        "snapshots/snap_00000020.sqgf",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn interrupted_run_resumes_bitwise() {
    let tmp = tempfile::tempdir().unwrap();
    let full = run(tmp.path(), "full", &[]);
    let part = run(tmp.path(), "part", &["--stop-after", "12"]);
    let m = fs::read_to_string(part.join("manifest.json")).unwrap();
    assert!(m.contains("\"aborted\""));
    let o = sqg(&["resume", part.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in [
        "diagnostics.jsonl",
        "flux.csv",
        "snapshots/snap_00000020.sqgf",
    ] {
        assert_eq!(
            fs::read(full.join(f)).unwrap(),
            fs::read(part.join(f)).unwrap(),
            "{f}"
        );
    }
    let o = sqg(&["resume", part.to_str().unwrap()], None);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("already completed"));
}

#[test]
fn tampered_snapshot_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = run(tmp.path(), "a", &[]);
    let snap = dir.join("snapshots/snap_00000010.sqgf");
    let mut bytes = fs::read(&snap).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    fs::write(&snap, bytes).unwrap();
    let o = sqg(&["verify", dir.to_str().unwrap()], None);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("snap_00000010.sqgf"));
    let o = sqg(&["diag", dir.to_str().unwrap()], None);
    assert_eq!(code(&o), 4);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "bad.cfg", &format!("{CONFIG}viscosity = 3\n"));
    let o = sqg(
        &["run", "--config", bad.to_str().unwrap()],
        Some(tmp.path()),
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 15"), "{}", stderr(&o));

    let zero = write_config(
        tmp.path(),
        "zero.cfg",
        &CONFIG.replace("alpha = 0.5", "alpha = 0"),
    );
    assert_eq!(
        code(&sqg(
            &["run", "--config", zero.to_str().unwrap()],
            Some(tmp.path())
        )),
        2
    );
}

#[test]
fn output_root_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "envrun.cfg",
        &CONFIG.replace("alpha = 0.5", "alpha = 1.5"),
    );
    let root = tmp.path().join("root");
    let o = sqg(&["run", "--config", cfg.to_str().unwrap()], Some(&root));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = fs::read_to_string(root.join("envrun/manifest.json")).unwrap();
    assert!(m.contains("subcritical"));
    assert!(stderr(&o).contains("subcritical"));
}

#[test]
fn diag_recomputes_from_snapshots() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = run(tmp.path(), "a", &[]);
    let o = sqg(&["diag", dir.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let recomputed = fs::read_to_string(dir.join("diag/diagnostics.jsonl")).unwrap();
    assert_eq!(recomputed.lines().count(), 5);
    // Energy at each snapshot agrees with the streamed frame at that step.
    let streamed = fs::read_to_string(dir.join("diagnostics.jsonl")).unwrap();
    for line in recomputed.lines() {
        let energy = line
            .split("\"energy\":")
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap();
        let step = line
            .split("\"step\":")
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap();
        let key = format!("\"step\":{step},");
        let src = streamed.lines().find(|l| l.contains(&key)).unwrap();
        assert!(src.contains(&format!("\"energy\":{energy},")));
    }
}

#[test]
fn sweep_writes_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "small.cfg", CONFIG);
    let out = tmp.path().join("sw");
    let o = sqg(
        &[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--epsilons",
            "0.01,0.005",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(out.join("eps_0/manifest.json").exists());
    assert!(out.join("eps_1/manifest.json").exists());
    let d = fs::read_to_string(out.join("distances.csv")).unwrap();
    assert!(d.lines().count() > 1);
    assert!(out.join("tails.csv").exists());
    let o = sqg(
        &[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--epsilons",
            "0.005,0.01",
        ],
        Some(tmp.path()),
    );
    assert_eq!(code(&o), 2);
}
