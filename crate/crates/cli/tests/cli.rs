use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use vldl_core::corpus::all_lassos;
use vldl_core::examples;
use vldl_core::logic::{parse_formula, Formula};
use vldl_core::project::{Project, System};
use vldl_core::semantics::evaluate_at;

fn vldl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vldl"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn save(dir: &TempDir, name: &str, p: &Project) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, p.to_json()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn example1_project() -> Project {
    let table = examples::example1_table();
    let mut p = Project::new(table.alphabet().clone());
    let phi = parse_formula(examples::EXAMPLE1_FORMULA, &table).unwrap();
    let bad = all_lassos(&p.alphabet, 3, 1)
        .into_iter()
        .find(|w| !evaluate_at(&phi, &table, w, 0).unwrap())
        .unwrap();
    p.formulas.insert("phi".into(), phi);
    p.formulas.insert("true".into(), Formula::tt(&p.alphabet));
    p.formulas
        .insert("diamond".into(), parse_formula("<Ac> p", &table).unwrap());
    p.words.insert("bad".into(), bad);
    p.table = table;
    p.bvpas
        .insert("informal".into(), examples::matching_bvpa_informal());
    p.systems.insert(
        "prog".into(),
        System {
            vps: examples::example1_program(),
            initial: Some(0),
        },
    );
    p
}

#[test]
fn eval_exit_codes() {
    let dir = TempDir::new().unwrap();
    let path = save(&dir, "ex1.json", &example1_project());
    let o = vldl(&["eval", s(&path), "--formula", "phi", "--word", "bad"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violated"));
    let o = vldl(&["eval", s(&path), "--formula", "true", "--word", "bad"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("class 0: true"));
    let o = vldl(&["eval", s(&path), "--formula", "phi", "--word", "missing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(
        vldl(&["eval", s(&path), "--formula", "f", "--word", "w"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(vldl(&["sat"]).status.code(), Some(2));
    assert_eq!(vldl(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn translate_is_deterministic_and_reloadable() {
    let dir = TempDir::new().unwrap();
    let path = save(&dir, "ex1.json", &example1_project());
    let a = vldl(&["translate", s(&path), "--formula", "phi", "--emit", "aja"]);
    let b = vldl(&["translate", s(&path), "--formula", "phi", "--emit", "aja"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let back = Project::from_json(&stdout(&a)).unwrap();
    assert_eq!(back.ajas.len(), 1);

    // ⟨A_c⟩p: 2n + n²m + 1 fresh states for the two-state guard with one
    // stack symbol, plus three for the atom
    let o = vldl(&["translate", s(&path), "--formula", "diamond"]);
    let aja = Project::from_json(&stdout(&o))
        .unwrap()
        .ajas
        .remove("diamond")
        .unwrap();
    assert_eq!(aja.states.len(), 12);
}

#[test]
fn dot_references_only_declared_nodes() {
    let dir = TempDir::new().unwrap();
    let path = save(&dir, "ex1.json", &example1_project());
    let out = dir.path().join("phi.dot");
    let o = vldl(&[
        "translate",
        s(&path),
        "--formula",
        "phi",
        "--emit",
        "dot",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = fs::read_to_string(out).unwrap();
    let declared: Vec<&str> = dot
        .lines()
        .filter(|l| l.contains('[') && !l.contains("->"))
        .map(|l| l.trim().split_whitespace().next().unwrap())
        .collect();
    for line in dot.lines().filter(|l| l.contains("->")) {
        let mut parts = line.trim().split("->");
        let from = parts.next().unwrap().trim();
        let to = parts
            .next()
            .unwrap()
            .trim()
            .split_whitespace()
            .next()
            .unwrap()
            .trim_end_matches(';');
        assert!(declared.contains(&from), "{line}");
        assert!(declared.contains(&to), "{line}");
    }
}

#[test]
fn gen_counter_then_sat() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("counter.json");
    assert_eq!(
        vldl(&["gen", "counter", "-n", "1", "--out", s(&path)])
            .status
            .code(),
        Some(0)
    );
    let o = vldl(&[
        "sat",
        s(&path),
        "--formula",
        "counter",
        "--max-u",
        "4",
        "--max-v",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "witness: # 0 # 1 ; #");
    let o = vldl(&[
        "sat",
        s(&path),
        "--formula",
        "counter",
        "--max-u",
        "3",
        "--max-v",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = vldl(&[
        "eval",
        s(&path),
        "--formula",
        "counter",
        "--word",
        "witness",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn model_checking() {
    let dir = TempDir::new().unwrap();
    let table = examples::directory_table();
    let mut p = Project::new(table.alphabet().clone());
    p.formulas.insert(
        "spec".into(),
        parse_formula(examples::DIRECTORY_FORMULA, &table).unwrap(),
    );
    p.formulas.insert("true".into(), Formula::tt(&p.alphabet));
    p.table = table;
    p.systems.insert(
        "escape".into(),
        System {
            vps: examples::privilege_escape_system(),
            initial: Some(0),
        },
    );
    let path = save(&dir, "dir.json", &p);
    let o = vldl(&[
        "mc",
        s(&path),
        "--system",
        "escape",
        "--formula",
        "spec",
        "--max-u",
        "6",
        "--max-v",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("counterexample: "));
    let o = vldl(&["mc", s(&path), "--system", "escape", "--formula", "true"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("holds"));

    let path = save(&dir, "ex1.json", &example1_project());
    let o = vldl(&["mc", s(&path), "--system", "prog", "--bad", "informal"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("counterexample: "));
}

#[test]
fn difftest_reference_run() {
    let o = vldl(&["difftest", "--seed", "7", "--count", "500"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("500 passed, 0 failed").count(), 3);
}
