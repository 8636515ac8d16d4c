//! Golden tests for every subcommand of the `degmix` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degmix"))
        .args(args.iter().map(|a| a.as_ref()))
        .env_remove("DEGMIX_MAX_CHORDS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn p(path: &Path) -> &std::ffi::OsStr {
    path.as_os_str()
}

#[test]
fn test_subcommand_and_strict_exit_codes() {
    let ws = Workspace::new();
    let bad = ws.file("bad.json", r#"{"degrees":[3,3,1,1]}"#);
    let good = ws.file("good.json", r#"{"degrees":[4,2,2,1,1]}"#);

    let o = run(&[&"test", &"--seq", &p(&bad)]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "not graphical\n"));
    let o = run(&[&"--strict", &"test", &"--seq", &p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[&"--json", &"test", &"--seq", &p(&good)]);
    assert_eq!(json(&o), serde_json::json!({"command": "test", "graphical": true, "kind": "simple", "schema": 1}));
}

#[test]
fn usage_errors_exit_with_two() {
    let ws = Workspace::new();
    assert_eq!(run(&[&"bogus"]).status.code(), Some(2));
    let broken = ws.file("broken.json", "{");
    assert_eq!(run(&[&"test", &"--seq", &p(&broken)]).status.code(), Some(2));
    assert_eq!(run(&[&"test", &"--seq", &p(&ws.path("missing.json"))]).status.code(), Some(2));
    let too_big = ws.file("big.json", r#"{"degrees":[5,1]}"#);
    assert_ne!(run(&[&"test", &"--seq", &p(&too_big)]).status.code(), Some(0));
}

#[test]
fn decompose_simple_sequence() {
    let ws = Workspace::new();
    let seq = ws.file("d.json", r#"{"degrees":[4,2,2,1,1]}"#);
    let o = run(&[&"decompose", &"--seq", &p(&seq)]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "component 1: U=(0) W=() pair=(1,0) vertices U[1] W[]\n\
         component 2: U=() W=(0) pair=(0,1) vertices U[] W[5]\n\
         component 3: U=() W=(0) pair=(0,1) vertices U[] W[4]\n\
         component 4: U=(0) W=() pair=(1,0) vertices U[2] W[]\n\
         component 5: U=(0) W=() vertices U[3] W[]\n"
    );
}

#[test]
fn decompose_bipartite_example_into_three_factors() {
    let ws = Workspace::new();
    let seq = ws.file("composed.json", r#"{"primary":[4,4,3,1,1],"secondary":[1,1,4,4,3]}"#);
    let o = run(&[&"--json", &"decompose", &"--seq", &p(&seq)]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    let factors: Vec<(Value, Value)> =
        v["factors"].as_array().unwrap().iter().map(|f| (f["primary"].clone(), f["secondary"].clone())).collect();
    assert_eq!(
        factors,
        vec![
            (serde_json::json!([1, 1]), serde_json::json!([1, 1])),
            (serde_json::json!([1]), serde_json::json!([1])),
            (serde_json::json!([1, 1]), serde_json::json!([1, 1])),
        ]
    );
}

#[test]
fn compose_splitted_operands() {
    let ws = Workspace::new();
    let a = ws.file("a.json", r#"{"primary":[1,1],"secondary":[1,1]}"#);
    let b = ws.file("b.json", r#"{"primary":[3,1,1],"secondary":[2,2,1]}"#);
    let o = run(&[&"compose", &"--left", &p(&a), &"--right", &p(&b)]);
    assert_eq!(stdout(&o), "primary=(4,4,3,1,1) secondary=(1,1,4,4,3)\n");

    let s = ws.file("s.json", r#"{"kind":"split","u":[2],"w":[1,1]}"#);
    let g = ws.file("g.json", r#"{"degrees":[1,1]}"#);
    let o = run(&[&"--json", &"compose", &"--left", &p(&s), &"--right", &p(&g)]);
    assert_eq!(json(&o)["degrees"], serde_json::json!([4, 1, 1, 2, 2]));

    assert_eq!(run(&[&"compose", &"--left", &p(&g), &"--right", &p(&s)]).status.code(), Some(2));
}

#[test]
fn sample_is_seeded_and_preserves_degrees() {
    let ws = Workspace::new();
    let seq = ws.file("d.json", r#"{"degrees":[3,3,2,2,1,1]}"#);
    let args = |seed: &'static str| -> Vec<String> {
        ["--json", "sample", "--seq", seq.to_str().unwrap(), "--count", "5", "--burn-in", "50", "--thin", "5", "--seed", seed]
            .map(String::from)
            .to_vec()
    };
    let go = |a: Vec<String>| Command::new(env!("CARGO_BIN_EXE_degmix")).args(a).output().unwrap();
    let first = stdout(&go(args("7")));
    assert_eq!(first, stdout(&go(args("7"))));
    assert_ne!(first, stdout(&go(args("8"))));
    let lines: Vec<Value> = first.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    for line in &lines {
        assert_eq!(line["layout"], "simple");
        let mut deg = [0; 6];
        for e in line["edges"].as_array().unwrap() {
            for v in e.as_array().unwrap() {
                deg[v.as_u64().unwrap() as usize - 1] += 1;
            }
        }
        assert_eq!(deg, [3, 3, 2, 2, 1, 1]);
    }
}

#[test]
fn sample_text_output_to_file() {
    let ws = Workspace::new();
    let seq = ws.file("tri.json", r#"{"kind":"directed","out":[1,1,1],"in":[1,1,1]}"#);
    let out = ws.path("edges.txt");
    let o = run(&[&"-o", &p(&out), &"sample", &"--seq", &p(&seq), &"--seed", &"1"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    let arcs: Vec<&str> = text.lines().collect();
    assert_eq!(arcs.len(), 3);
    assert!(arcs.iter().all(|a| {
        let (x, y) = a.split_once(' ').unwrap();
        x != y
    }));
}

#[test]
fn verify_connectivity_needs_c6_for_directed_triangle() {
    let ws = Workspace::new();
    let seq = ws.file("tri.json", r#"{"kind":"directed","out":[1,1,1],"in":[1,1,1]}"#);
    let o = run(&[&"verify", &"--mode", &"connectivity", &"--seq", &p(&seq)]);
    assert_eq!(stdout(&o), "realizations: 2\nswap edges: 1\ncomponents: 1\nconnected\n");
    let o = run(&[&"--strict", &"verify", &"--mode", &"connectivity", &"--c4-only", &"--seq", &p(&seq)]);
    assert_eq!(stdout(&o), "realizations: 2\nswap edges: 0\ncomponents: 2\ndisconnected\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_spectral_and_tv() {
    let ws = Workspace::new();
    let seq = ws.file("m.json", r#"{"degrees":[1,1,1,1]}"#);
    let o = run(&[&"--json", &"verify", &"--mode", &"spectral", &"--seq", &p(&seq)]);
    let v = json(&o);
    assert_eq!(v["realization_count"], 3);
    assert!((v["lambda2"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["cheeger_holds"], true);
    let b = ws.file("b.json", r#"{"u":[2,2,1],"w":[3,1,1]}"#);
    let o = run(&[&"verify", &"--mode", &"tv", &"--steps", &"200", &"--seq", &p(&b)]);
    assert_eq!(stdout(&o), "realizations: 2\nsteps: 200\ntv: 1.753e-5\n");
}

#[test]
fn verify_product_respects_chord_cap() {
    let ws = Workspace::new();
    let seq = ws.file("composed.json", r#"{"primary":[4,4,3,1,1],"secondary":[1,1,4,4,3]}"#);
    let o = run(&[&"verify", &"--mode", &"product", &"--seq", &p(&seq)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds cap 24"));
    let o = run(&[&"--json", &"verify", &"--mode", &"product", &"--max-chords", &"30", &"--seq", &p(&seq)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["mode"], "product");
}

#[test]
fn dsm_check_and_sample() {
    let ws = Workspace::new();
    let path = ws.file("p3.json", r#"{"delta":2,"columns":[[0,1],[2,0],[0,1]]}"#);
    let o = run(&[&"dsm", &"--dsm", &p(&path), &"--check"]);
    assert_eq!(stdout(&o), "graphical\ncomponents: 1\n");
    let o = run(&[&"--json", &"dsm", &"--dsm", &p(&path), &"--sample", &"--count", &"2", &"--seed", &"3"]);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|l| l["edges"] == serde_json::json!([[1, 2], [2, 3]])));
    let broken = ws.file("bad.json", r#"{"delta":2,"columns":[[0,2],[0,2],[0,3]]}"#);
    let o = run(&[&"--strict", &"dsm", &"--dsm", &p(&broken), &"--check"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not graphical\n"));
}

#[test]
fn count_formats() {
    let o = run(&[&"count", &"--kind", &"bipartite", &"--n", &"6"]);
    assert_eq!(stdout(&o), "15584 (exhaustive)\n");
    let o = run(&[&"count", &"--kind", &"bipartite", &"--n", &"3", &"--format", &"csv"]);
    assert_eq!(stdout(&o), "kind,n,count,method\nbipartite,3,34,exhaustive\n");
    let o = run(&[&"--json", &"count", &"--kind", &"ahr", &"--n", &"4", &"--exhaustive"]);
    let v = json(&o);
    let counts: Vec<&str> = v["counts"].as_array().unwrap().iter().map(|c| c["count"].as_str().unwrap()).collect();
    assert_eq!(counts, ["123", "123"]);
    let o = run(&[&"count", &"--kind", &"composed", &"--n", &"12", &"--block", &"6"]);
    assert_eq!(stdout(&o), "242861056 (formula)\n");
    assert_ne!(run(&[&"count", &"--kind", &"composed", &"--n", &"7", &"--block", &"2"]).status.code(), Some(0));
    assert_ne!(run(&[&"count", &"--kind", &"bipartite", &"--n", &"11"]).status.code(), Some(0));
}
