use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn axial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_axial")).args(args).output().unwrap()
}

fn job(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/jobs").join(format!("{name}.job"));
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn catalog_file(dir: &Path, name: &str) -> PathBuf {
    let o = axial(&["catalog", name]);
    assert!(o.status.success());
    let path = dir.join(format!("{name}.alg"));
    std::fs::write(&path, &o.stdout).unwrap();
    path
}

#[test]
fn enumerate_lists_shapes() {
    let o = axial(&["enumerate", &job("s4_6")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("S4 6 taus=1 shapes=4\n"), "{text}");
    let shapes: Vec<&str> = text.lines().filter_map(|l| l.split("shape=").nth(1)).collect();
    assert_eq!(shapes, ["3A2A", "3A2B", "3C2A", "3C2B"]);
}

#[test]
fn build_prints_summary_lines_and_outputs_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = axial(&["build", &job("s3xs3_3+3"), "--out", out, "--jobs", "2", "--report"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for line in [
        "S3xS3 3+3 3A3A2A - - - incomplete",
        "S3xS3 3+3 3A3A2B 8 2 pos completed",
        "S3xS3 3+3 3A3C2A 0 0 - collapsed",
        "S3xS3 3+3 3A3C2B 7 2 pos completed",
        "S3xS3 3+3 3C3C2B 6 1 pos completed",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line:?} in\n{text}");
    }
    assert!(text.contains("dim=6 m=1 form=pos"), "{text}");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 3);
    for f in &files {
        let o = axial(&["verify", f.to_str().unwrap()]);
        assert!(o.status.success(), "{}: {}", f.display(), stdout(&o));
        assert!(stdout(&o).ends_with("ok\n"));
    }
}

#[test]
fn no_write_leaves_the_directory_alone() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let o = axial(&["build", &job("trivial_1"), "--out", out.to_str().unwrap(), "--no-write"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 1 1A 1 1 pos completed\n");
    assert!(!out.exists());
}

#[test]
fn catalog_files_verify() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["1A", "2B", "4B", "5A", "6A"] {
        let path = catalog_file(dir.path(), name);
        let o = axial(&["verify", path.to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", stdout(&o));
    }
}

#[test]
fn corrupted_form_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = catalog_file(dir.path(), "5A");
    let text = std::fs::read_to_string(&path).unwrap().replace("5 5 -> 875/524288", "5 5 -> 1");
    std::fs::write(&path, text).unwrap();
    let o = axial(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("violation:"));
}

#[test]
fn corrupted_product_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = catalog_file(dir.path(), "3A");
    let text = std::fs::read_to_string(&path).unwrap().replacen("0 0 -> 0:1", "0 0 -> 0:2", 1);
    std::fs::write(&path, text).unwrap();
    let o = axial(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_2_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = catalog_file(dir.path(), "2A");
    let text = std::fs::read_to_string(&path).unwrap().replacen("dim 3", "dim three", 1);
    std::fs::write(&path, text).unwrap();
    let o = axial(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let bad_job = dir.path().join("bad.job");
    std::fs::write(&bad_job, "name X\naxes 3\ngen [0,1]\n").unwrap();
    let o = axial(&["enumerate", bad_job.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(axial(&[]).status.code(), Some(1));
    assert_eq!(axial(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(axial(&["build", &job("s4_6"), "--fix-trick", "maybe"]).status.code(), Some(1));
    assert_eq!(axial(&["verify", "/nonexistent/file.alg"]).status.code(), Some(1));
    assert_eq!(axial(&["catalog", "7Z"]).status.code(), Some(1));
}

#[test]
fn normalizer_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_axial"))
            .args(["enumerate", &job("s4_6")])
            .env("AXIAL_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}
