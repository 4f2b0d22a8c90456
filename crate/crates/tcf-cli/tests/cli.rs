use std::path::Path;
use std::process::{Command, Output};

fn tcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcf")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn build_writes_readable_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcf(&["build", "--q", "2", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["h_x.alist", "h_z.alist", "complex.txt", "metadata.json"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let hx = tcf::gf2::from_alist(&std::fs::read_to_string(dir.path().join("h_x.alist")).unwrap()).unwrap();
    let hz = tcf::gf2::from_alist(&std::fs::read_to_string(dir.path().join("h_z.alist")).unwrap()).unwrap();
    assert_eq!(hx.cols(), 168);
    assert!(hz.mul_transpose(&hx).unwrap().is_zero());
    assert_eq!(168 - hx.rank() - hz.rank(), 46);
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("metadata.json")).unwrap()).unwrap();
    assert!(meta.is_object());
    // the written complex passes the structure check
    let c = dir.path().join("complex.txt");
    assert_eq!(code(&tcf(&["verify", "--complex", c.to_str().unwrap()])), 0);
}

#[test]
fn corrupted_complex_is_a_finding() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&tcf(&["build", "--q", "2", "--out", &out_arg(dir.path())])), 0);
    let path = dir.path().join("complex.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    // move the first top of vertex (color 0, index 0) into vertex 1
    let moved = text.lines().find(|l| l.starts_with("1 0 ")).unwrap().split_whitespace().nth(2).unwrap().to_string();
    let broken: String =
        text.lines().map(|l| if l.starts_with("1 1 ") { format!("{l} {moved}\n") } else { format!("{l}\n") }).collect();
    std::fs::write(&path, broken).unwrap();
    let o = tcf(&["verify", "--complex", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], false);
    // and unparsable input is a configuration error
    std::fs::write(&path, "not a complex\n").unwrap();
    assert_eq!(code(&tcf(&["verify", "--complex", path.to_str().unwrap()])), 2);
}

#[test]
fn verify_suites_pass_on_q2() {
    let o = tcf(&["verify", "--q", "2", "--suite", "all"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 5);
}

#[test]
fn reports_are_deterministic() {
    let a = tcf(&["report", "--q", "2", "--seed", "3"]);
    let b = tcf(&["report", "--q", "2", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("n = 168, k = 46"), "{}", stdout(&a));
}

#[test]
fn local_report_for_q8() {
    let o = tcf(&["report", "--q", "8", "--rm", "1,3", "--local-only"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("76"), "{s}");
    assert!(s.contains("19/128") && s.contains("7/64"), "{s}");
}

#[test]
fn exit_codes() {
    // invalid field size
    assert_eq!(code(&tcf(&["build", "--q", "3"])), 2);
    // inconsistent Reed–Muller parameters
    assert_eq!(code(&tcf(&["build", "--q", "2", "--rm", "0,3"])), 2);
    // unknown suite
    assert_eq!(code(&tcf(&["verify", "--q", "2", "--suite", "nope"])), 2);
    // enumeration cap
    assert_eq!(code(&tcf(&["verify", "--q", "4", "--cap-enumeration", "1000"])), 3);
    // tableau cap for the gate suite
    let o = tcf(&["verify", "--q", "2", "--suite", "gates", "--cap-tableau", "100"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn report_from_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcf(&["report", "--from", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("nothing built"));
}

#[test]
fn config_file_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "eta = 3\nr = 1\n").unwrap();
    let o = tcf(&["report", "--config", cfg.to_str().unwrap(), "--local-only"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("76"));
}
