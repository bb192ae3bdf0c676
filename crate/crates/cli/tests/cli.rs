use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn mdeg(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdeg"))
        .args(args)
        .env("MDEG_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn line<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find(|l| l.starts_with(&format!("{key}\t"))).unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn check_trivial_triple() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdeg(&["check", data("prism_triple.json").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(line(&out, "mixed_degree"), "mixed_degree\t1");
    assert!(line(&out, "common_projection").contains("yes"));
}

#[test]
fn check_sheared_family_member() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdeg(&["check", data("sheared_k3.json").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(line(&out, "mixed_degree"), "mixed_degree\t1");
    assert_eq!(line(&out, "common_projection_translates"), "common_projection_translates\tno");
    assert_eq!(out.lines().filter(|l| l.starts_with("pair_projection") && l.ends_with("yes")).count(), 3);
}

#[test]
fn check_json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdeg(&["check", "--format", "json", data("sheared_k3.json").to_str().unwrap()], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mixed_degree"], 1);
    assert_eq!(v["mixed_volume"], 16);
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["empty_member.json", "fractional.json"] {
        let o = mdeg(&["check", data(f).to_str().unwrap()], dir.path());
        assert_eq!(o.status.code(), Some(2), "{f}");
        assert!(stderr(&o).contains("parse error"), "{f}: {}", stderr(&o));
    }
}

#[test]
fn missing_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdeg(&["check", "/nonexistent/tuple.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn normal_form_digest_is_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let digest = |f: &str| line(&stdout(&mdeg(&["normal-form", data(f).to_str().unwrap()], dir.path())), "digest").to_string();
    let a = digest("simplex.json");
    assert_eq!(a, digest("simplex.json"));
    assert_eq!(a, digest("simplex_mapped.json"));
}

#[test]
fn normal_form_of_flat_polytope_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdeg(&["normal-form", data("flat_triangle.json").to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("re-embed"));
}

#[test]
fn family_requires_k() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mdeg(&["classify", "--pipeline", "family"], dir.path()).status.code(), Some(2));
    assert_eq!(mdeg(&["classify", "--pipeline", "spanning", "--k", "1"], dir.path()).status.code(), Some(2));
    assert_eq!(mdeg(&["classify", "--pipeline", "nonsense"], dir.path()).status.code(), Some(2));
}

#[test]
fn family_k0_passes_gate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("family.json");
    let o = mdeg(&["classify", "--pipeline", "family", "--k", "0", "--output", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(m["count"], 51);
    assert_eq!(m["parameters"]["k"], "0");
}

#[test]
fn dependent_pipeline_needs_pairs_then_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdeg(&["classify", "--pipeline", "one-exceptional"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--pipeline=exceptional-pairs"), "{}", stderr(&o));

    let o = mdeg(&["classify", "--pipeline", "exceptional-pairs", "--format", "text"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(line(&stdout(&o), "count"), "count\t32");

    let o = mdeg(&["classify", "--pipeline", "one-exceptional", "--format", "text", "--threads", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(line(&stdout(&o), "count"), "count\t82");

    let stat = stdout(&mdeg(&["cache", "stat"], dir.path()));
    assert!(!line(&stat, "entries").ends_with("\t0"));

    // A damaged manifest is reported as cache corruption.
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let p = e.unwrap().path();
        if p.file_name().unwrap().to_string_lossy().starts_with("manifest-exceptional-pairs") {
            std::fs::write(&p, "{ not json").unwrap();
        }
    }
    let o = mdeg(&["classify", "--pipeline", "one-exceptional"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let gc = stdout(&mdeg(&["cache", "gc"], dir.path()));
    assert_eq!(line(&gc, "removed"), "removed\t1");
}

#[test]
fn gate_can_be_disabled() {
    let dir = tempfile::tempdir().unwrap();
    let o = mdeg(&["classify", "--pipeline", "family", "--k", "0", "--no-gate", "--format", "text"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("class\t")).count() == 51);
}

#[test]
fn bad_seed_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.json");
    std::fs::write(&seeds, r#"{"format":1,"version":"x","seeds":[{"name":"big","polytope":{"dim":3,"vertices":[[0,0,0],[4,0,0],[0,4,0],[0,0,4]]}}]}"#).unwrap();
    let o = mdeg(&["classify", "--pipeline", "exceptional-pairs", "--seed-file", seeds.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid seed"), "{}", stderr(&o));
}
