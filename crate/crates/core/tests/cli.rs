use std::process::{Command, Output};

fn ergosum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergosum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn variance_table_has_one_row_per_n() {
    let o = ergosum(&["variance", "--nmax", "1000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "n,variance");
    assert_eq!(lines.len(), 1001);
    assert!(text.contains("# command=variance"));
    let first: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((first - 1.0 / 12.0).abs() < 1e-15);
}

#[test]
fn square_radicand_is_invalid_input() {
    let o = ergosum(&["--alpha", "sqrt4", "cf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("D must be non-square"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ergosum(&["variance", "--bogus"]).status.code(), Some(2));
    assert_eq!(ergosum(&["--help"]).status.code(), Some(0));
}

#[test]
fn clt_run_reports_each_level() {
    let o = ergosum(&["clt-run", "--ell", "5,6"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    for r in records {
        let d = r["d_kolmogorov"].as_f64().unwrap();
        assert!(d > 0.0 && d < 1.0);
    }
    assert_eq!(v["config"]["command"], "clt-run");
}

#[test]
fn ostrowski_expand_golden() {
    let o = ergosum(&["ostrowski", "expand", "--n", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.trim() == "0,1,0,1"));
}

#[test]
fn config_file_sits_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# lab settings\nalpha = sqrt2\nnmax = 7\n").unwrap();
    let p = path.to_str().unwrap();

    let from_file = stdout(&ergosum(&["--config", p, "variance"]));
    assert!(from_file.contains("# alpha=sqrt2"));
    assert_eq!(data_lines(&from_file).len(), 8);

    let overridden = stdout(&ergosum(&["--config", p, "variance", "--nmax", "3"]));
    assert!(overridden.contains("# nmax=3"));
    assert_eq!(data_lines(&overridden).len(), 4);

    std::fs::write(&path, "nosuchkey = 1\n").unwrap();
    assert_eq!(ergosum(&["--config", p, "variance"]).status.code(), Some(2));
}

#[test]
fn output_independent_of_thread_count() {
    for args in [
        &["variance", "--nmax", "500"][..],
        &["scan-clt", "--nmax", "2000"][..],
        &["clt-run", "--ell", "8"][..],
    ] {
        let one = ergosum(&[&["--threads", "1"][..], args].concat());
        let many = ergosum(&[&["--threads", "8"][..], args].concat());
        assert!(one.status.success());
        assert_eq!(one.stdout, many.stdout, "{args:?}");
    }
}

#[test]
fn json_output_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cf.json");
    let o = ergosum(&[
        "--out",
        "json",
        "--output",
        path.to_str().unwrap(),
        "cf",
        "--count",
        "5",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v.is_object());
}
