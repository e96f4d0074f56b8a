use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lawson(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lawson"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn lawson")
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["all", "--cones", "3,5", "--cones", "2,7", "--grid", "512", "--subdivisions", "1024", "--seed", "7"];
    let ra = lawson(a.path(), &args);
    let rb = lawson(b.path(), &args);
    assert_eq!(ra.status.code(), Some(0), "{}", String::from_utf8_lossy(&ra.stderr));
    assert_eq!(ra.stdout, rb.stdout);
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert_eq!(sa.len(), 8);
    assert_eq!(sa, sb);
}

#[test]
fn certify_writes_one_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let r = lawson(dir.path(), &["certify", "--cones", "3,5", "--subdivisions", "1024"]);
    assert_eq!(r.status.code(), Some(0));
    let files = snapshot(dir.path());
    assert_eq!(files.len(), 1);
    assert_eq!(files[0].0, "certificate-3-5.txt");
    let text = String::from_utf8(files[0].1.clone()).unwrap();
    assert!(text.contains("1/9261*sqrt(3)"), "{text}");
    assert!(String::from_utf8_lossy(&r.stdout).starts_with("PASS certificate-3-5.txt"));
}

#[test]
fn csv_summary_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let r = lawson(dir.path(), &["constants", "--cones", "2,7", "--format", "csv"]);
    assert_eq!(r.status.code(), Some(0));
    let out = String::from_utf8(r.stdout).unwrap();
    assert!(out.starts_with("item,status,detail\nconstants.csv,PASS,"), "{out}");
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["certify", "--cones", "3,x"][..],
        &["certify", "--cones", "4,4"],
        &["certify", "--cones", "7"],
        &["spectrum", "--R", "-1"],
        &["certify", "--no-such-flag"],
        &["frobnicate"],
    ] {
        let r = lawson(dir.path(), args);
        assert_eq!(r.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let r = lawson(dir.path(), &["--help"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&r.stdout).contains("certify"));
}
