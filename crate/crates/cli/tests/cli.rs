use std::path::{Path, PathBuf};
use std::process::Command;

use qrep_core::envgroup::FiniteQuotient;
use qrep_core::qnm::build_qnm;
use qrep_core::{Cyclo, Matrix, Representation};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

fn qrep(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qrep")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Runs a command that must succeed and stores its stdout in `dir/name`.
fn save(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let run = qrep(args);
    assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
    let path = dir.path().join(name);
    std::fs::write(&path, &run.stdout).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn unipotent_rep(dir: &TempDir) -> PathBuf {
    let m: Matrix<Cyclo> = Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
    let rep = Representation::constant(build_qnm(2, 2).unwrap(), m).unwrap();
    let path = dir.path().join("unipotent.json");
    std::fs::write(&path, serde_json::to_string(&rep).unwrap()).unwrap();
    path
}

#[test]
fn quandle_validate_and_info() {
    let dir = TempDir::new().unwrap();
    let q = save(&dir, "q22.json", &["qnm", "build", "2", "2"]);
    let run = qrep(&["quandle", "validate", p(&q)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["valid"], true);
    assert_eq!(run.stderr.trim(), "valid");

    let info = qrep(&["quandle", "info", p(&q)]).json();
    assert_eq!(info["size"], 4);
    assert_eq!(info["orbits"].as_array().unwrap().len(), 2);
    assert_eq!(info["inner_group_order"], 4);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"size":2,"table":[[0,0],[1,1]]}"#).unwrap();
    let run = qrep(&["quandle", "validate", p(&bad)]);
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["valid"], false);
}

#[test]
fn unipotent_is_not_completely_reducible() {
    let dir = TempDir::new().unwrap();
    let rep = unipotent_rep(&dir);
    let run = qrep(&["rep", "reducible", p(&rep)]);
    assert_eq!(run.code, 1);
    let witness = &run.json()["witness"];
    assert_eq!(witness["element"], 0);
    let image: Matrix<Cyclo> = serde_json::from_value(witness["image"].clone()).unwrap();
    assert_eq!(image, Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]));
    assert_eq!(qrep(&["rep", "decompose", p(&rep)]).code, 1);
}

#[test]
fn classify_lists_the_sign_family() {
    let run = qrep(&["qnm", "classify", "2", "2"]);
    assert_eq!(run.code, 0);
    let families = run.json()["families"].as_array().unwrap().clone();
    assert_eq!(families.len(), 1);
    assert_eq!(families[0]["d"], 2);
    assert_eq!(families[0]["k"], 1);
}

#[test]
fn representation_documents_round_trip() {
    let dir = TempDir::new().unwrap();
    let rep = save(&dir, "rho.json", &["qnm", "rep", "2", "2", "2", "1", "-1", "z8^3"]);
    assert_eq!(qrep(&["rep", "validate", p(&rep)]).code, 0);
    assert_eq!(qrep(&["rep", "irreducible", p(&rep)]).code, 0);
    assert_eq!(qrep(&["rep", "unitarizable", p(&rep)]).code, 0);

    let gram = save(&dir, "gram.json", &["rep", "unitarize", p(&rep)]);
    let run = qrep(&["rep", "unitary", p(&rep), p(&gram)]);
    assert_eq!((run.code, run.json()["unitary"].clone()), (0, Value::Bool(true)));

    let chi = save(&dir, "chi.json", &["rep", "det-character", p(&rep)]);
    let twisted = save(&dir, "twisted.json", &["rep", "twist", p(&rep), p(&chi)]);
    let twisted_rep: Representation<Cyclo> = serde_json::from_str(&std::fs::read_to_string(&twisted).unwrap()).unwrap();
    for m in twisted_rep.images() {
        assert_eq!(m.det().unwrap(), Cyclo::from_int(1));
    }
    assert_eq!(qrep(&["rep", "irreducible", p(&twisted)]).code, 0);

    let run = qrep(&["rep", "equiv", p(&rep), p(&rep)]);
    assert_eq!(run.code, 0);
    assert!(run.json()["witness"].is_object());
    let other = save(&dir, "other.json", &["qnm", "rep", "2", "2", "2", "1", "1", "z8^3"]);
    let run = qrep(&["rep", "equiv", p(&rep), p(&other)]);
    assert_eq!(run.code, 1);
    assert!(run.json()["witness"].is_null());

    let blocks = qrep(&["rep", "decompose", p(&rep)]).json();
    let block = dir.path().join("block.json");
    std::fs::write(&block, blocks["blocks"][0]["rep"].to_string()).unwrap();
    assert_eq!(qrep(&["rep", "irreducible", p(&block)]).code, 0);
}

#[test]
fn quandle_documents_round_trip() {
    let dir = TempDir::new().unwrap();
    let q = save(&dir, "q22.json", &["qnm", "build", "2", "2"]);
    let ab = qrep(&["envgroup", "abelianization", p(&q)]).json();
    assert_eq!(ab["rank"], 2);

    let run = qrep(&["envgroup", "quotient", p(&q)]);
    assert_eq!(run.code, 0);
    let h: FiniteQuotient = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(h.order(), 8);
    assert!(run.stderr.contains("order 8, nonabelian"));

    let rep = save(&dir, "rho.json", &["qnm", "rep", "2", "2", "2", "1", "1", "1"]);
    let run = qrep(&["envgroup", "abelian-report", p(&q), "--rep", p(&rep)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["verdict"], "non_abelian");

    let trivial = dir.path().join("trivial.json");
    std::fs::write(&trivial, r#"{"size":2,"table":[[0,1],[0,1]]}"#).unwrap();
    assert_eq!(qrep(&["envgroup", "abelian-report", p(&trivial)]).json()["verdict"], "abelian_certified");
}

#[test]
fn seeded_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let q = save(&dir, "q22.json", &["qnm", "build", "2", "2"]);
    let a = qrep(&["envgroup", "abelian-report", p(&q), "--seed", "5"]);
    let b = qrep(&["envgroup", "abelian-report", p(&q), "--seed", "5"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);

    let rep = save(&dir, "rho.json", &["qnm", "rep", "4", "4", "2", "1", "2", "1"]);
    let a = qrep(&["rep", "decompose", p(&rep), "--seed", "3"]);
    let b = qrep(&["rep", "decompose", p(&rep), "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn approximate_backend() {
    let dir = TempDir::new().unwrap();
    let rep = save(&dir, "rho.json", &["qnm", "rep", "2", "2", "2", "1", "2", "1"]);
    assert_eq!(qrep(&["rep", "unitarizable", p(&rep)]).code, 1);
    assert_eq!(qrep(&["rep", "det-character", p(&rep)]).code, 2);

    let chi = save(&dir, "chi.json", &["rep", "det-character", p(&rep), "--backend", "approx"]);
    let twisted = save(&dir, "twisted.json", &["rep", "twist", p(&rep), p(&chi), "--backend", "approx"]);
    let run = qrep(&["rep", "unitarizable", p(&twisted)]);
    assert_eq!(run.code, 0, "{}", run.stderr);

    let approx = save(&dir, "approx.json", &["qnm", "rep", "2", "2", "2", "1", "2", "1", "--backend", "approx"]);
    let run = qrep(&["rep", "equiv", p(&approx), p(&rep)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let q = save(&dir, "q22.json", &["qnm", "build", "2", "2"]);
    let run = qrep(&["envgroup", "quotient", p(&q), "--max-cosets", "3"]);
    assert_eq!(run.code, 3);
    assert!(run.json()["error"].as_str().unwrap().contains("exceeded"));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(qrep(&["rep", "irreducible", p(&garbage)]).code, 2);
    assert_eq!(qrep(&["quandle", "info", "/nonexistent/q.json"]).code, 2);
    assert_eq!(qrep(&["qnm", "rep", "2", "2", "3", "1", "1", "1"]).code, 2);
    assert_eq!(qrep(&["qnm", "rep", "2", "2", "2", "1", "1/0", "1"]).code, 2);
    assert_eq!(qrep(&["qnm", "rep", "2", "2", "2", "1", "0", "1"]).code, 2);
    assert_eq!(qrep(&["qnm", "build", "0", "2"]).code, 2);
    assert_eq!(qrep(&["qnm", "frobnicate"]).code, 2);
    assert_eq!(qrep(&["rep", "irreducible", p(&q), "--tolerance", "-1"]).code, 2);

    let rep = save(&dir, "rho.json", &["qnm", "rep", "2", "2", "2", "1", "1", "1"]);
    let q33 = save(&dir, "q33.json", &["qnm", "build", "3", "3"]);
    let run = qrep(&["envgroup", "abelian-report", p(&q33), "--rep", p(&rep)]);
    assert_eq!(run.code, 2);
}

#[test]
fn qnm_equivalence_rule() {
    assert_eq!(qrep(&["qnm", "equiv", "2", "2", "2", "1", "1", "1", "2", "1", "1", "-1"]).code, 0);
    assert_eq!(qrep(&["qnm", "equiv", "2", "2", "2", "1", "1", "1", "2", "1", "2", "1"]).code, 1);
    assert_eq!(qrep(&["qnm", "equiv", "3", "3", "3", "1", "z3", "1/2*z6^-1", "3", "1", "z3", "1/2*z6^-1"]).code, 0);
}
