use std::path::PathBuf;
use std::process::{Command, Output};

fn tlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn marks_of_c2_and_s3() {
    let o = tlab(&["marks", "--group", "C2", "--level", "G/G"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "class\tmarks\n[C2/e]\t2\n[C2/C2]\t1\n");

    let o = tlab(&["marks", "--group", "S3", "--level", "G/G"]);
    let marks: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split('\t').nth(1).unwrap().to_string()).collect();
    assert_eq!(marks, ["6", "3", "2", "1"]);

    let o = tlab(&["marks", "--group", "S3", "--level", "G/e"]);
    assert_eq!(stdout(&o), "class\tmarks\n[e/e]\t1\n");
}

#[test]
fn group_info() {
    let o = tlab(&["group", "info", "--group", "S3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("order\t6\n"), "{out}");
    assert!(out.contains("subgroup classes\t4\n"), "{out}");
    assert!(out.contains("subgroups\t6\n"), "{out}");
}

#[test]
fn omega_localization_passes() {
    let o = tlab(&["run", "omega-localization", "--group", "C2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS omega-localization on C2"));
}

#[test]
fn injected_witness_fault_is_located() {
    let o = tlab(&["run", "fractions", "--group", "C4", "--seed", "3", "--inject", "corrupt-witness"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failing: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL ")).collect();
    assert!(failing.iter().any(|l| l.contains("fractions.well-defined")), "{out}");
}

#[test]
fn bad_input_exits_with_2() {
    let o = tlab(&["run", "nonsense", "--group", "C2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));

    let o = tlab(&["run", "axioms", "--group", "Q7"]);
    assert_eq!(o.status.code(), Some(2));

    let o = tlab(&["run", "axioms", "--group", "C2", "--inject", "everything"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_reports_are_deterministic() {
    let run = |file: &str| {
        let path = scratch(file);
        let o = tlab(&["run", "ideals", "--group", "S3", "--seed", "7", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("wall_ms");
        }
        v
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    assert_eq!(a["schema"], 1);
    assert_eq!(a["group"], "S3");
    assert_eq!(a["seed"], 7);
    assert!(a["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}
