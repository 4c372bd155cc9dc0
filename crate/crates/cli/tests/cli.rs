use std::path::Path;
use std::process::{Command, Output};

fn polargrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polargrad")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn export(name: &str, dir: &Path, file: &str, edit: impl Fn(String) -> String) -> String {
    let o = polargrad(&["export-preset", name]);
    assert_eq!(code(&o), 0);
    let path = dir.join(file);
    std::fs::write(&path, edit(stdout(&o))).unwrap();
    path.to_str().unwrap().to_owned()
}

fn set_key(text: String, key: &str, value: &str) -> String {
    text.lines()
        .map(|l| if l.split('=').next().map(str::trim) == Some(key) { format!("{key} = {value}") } else { l.to_owned() })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn lists_presets() {
    let o = polargrad(&["list-presets"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "desk/quad/PolarGrad(QDWH)"));
    assert!(out.lines().any(|l| l == "completion/AltGD"));
}

#[test]
fn exported_preset_runs_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = export("desk/completion/PolarGrad(QDWH)", dir.path(), "c.toml", |t| t);
    let out = dir.path().join("out");
    let o = polargrad(&["run", "--config", &cfg, "--steps", "5", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("desk_completion_PolarGrad_QDWH_seed1.csv").exists());
    assert!(out.join("desk_completion_PolarGrad_QDWH_seed1.manifest.toml").exists());
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(code(&polargrad(&["run", "--preset", "quad/NoSuchThing"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = export("desk/quad/Adam", dir.path(), "bad.toml", |t| format!("{t}\nbogus_key = 1\n"));
    assert_eq!(code(&polargrad(&["run", "--config", &bad])), 2);
    let bad = export("desk/quad/Adam", dir.path(), "bad2.toml", |t| set_key(t, "total_steps", "0"));
    assert_eq!(code(&polargrad(&["run", "--config", &bad])), 2);
    assert_eq!(code(&polargrad(&["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn divergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = export("desk/quad/PolarGrad(QDWH)", dir.path(), "d.toml", |t| set_key(t, "lr", "1.0"));
    let o = polargrad(&["run", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("non-finite loss"));
}

#[test]
fn step_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = export("desk/quad/PolarGrad(QDWH)", dir.path(), "f.toml", |t| set_key(t, "polar", "\"newton\""));
    let o = polargrad(&["run", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("step failed"));
}

#[test]
fn sweep_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let configs = dir.path().join("configs");
    std::fs::create_dir(&configs).unwrap();
    let short = |t: String| set_key(t, "total_steps", "30");
    export("desk/quad/PolarGrad(QDWH)", &configs, "a.toml", short);
    export("desk/quad/Muon(NS)", &configs, "b.toml", short);
    let out = dir.path().join("runs");
    let o = polargrad(&["sweep", "--dir", configs.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let a = out.join("desk_quad_PolarGrad_QDWH_seed0.manifest.toml");
    let b = out.join("desk_quad_Muon_NS_seed0.manifest.toml");
    let o = polargrad(&["compare", a.to_str().unwrap(), b.to_str().unwrap(), "--horizon", "30"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("Less"));
}

#[test]
fn gradient_suite_passes() {
    let o = polargrad(&["verify", "--suite", "gradients"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("2 checks, 0 failed"));
}
