use std::process::{Command, Output};

fn ergolab(args: &[&str]) -> Output {
    ergolab_env(args, &[])
}

fn ergolab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ergolab"));
    cmd.args(args).env_remove("ERGOLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn norms_of_g0() {
    let o = ergolab(&["norms", "--graph", "g0", "--n-max", "2", "--trunc", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,N,norm,norm_decimal\n1,30,2/1,2.0\n2,30,2/1,2.0\n");
}

#[test]
fn norms_bound_on_combined() {
    let o = ergolab(&["norms", "--graph", "combined", "--n-max", "40", "--trunc", "2000", "--bound", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&o).len(), 40);
    let o = ergolab(&["norms", "--graph", "combined", "--n-max", "3", "--trunc", "200", "--bound", "3/2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds bound 3/2"));
}

#[test]
fn usage_errors() {
    for args in [
        &["norms", "--graph", "g0", "--n-max", "0", "--trunc", "30"][..],
        &["norms", "--graph", "g9", "--n-max", "2", "--trunc", "30"],
        &["orbit", "--graph", "gk", "--n-max", "5"],
        &["cesaro", "--graph", "combined", "--schedule", "8,4"],
        &["verify", "--only", "13"],
        &["frobnicate"],
    ] {
        assert_eq!(ergolab(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(ergolab(&["--help"]).status.code(), Some(0));
}

#[test]
fn orbit_of_g2() {
    let o = ergolab(&["orbit", "--graph", "gk", "--k", "2", "--n-max", "70"]);
    assert_eq!(o.status.code(), Some(0));
    let ones: Vec<String> = rows(&o).into_iter().filter(|r| r[4] == "1").map(|r| r[0].clone()).collect();
    assert_eq!(ones, ["13", "29", "61"]);
}

#[test]
fn orbit_of_combined() {
    let o = ergolab(&["orbit", "--graph", "combined", "--k-max", "0", "--n-max", "4"]);
    let r = rows(&o);
    assert_eq!(r.len(), 5);
    let ones: Vec<&str> = r.iter().filter(|r| r[2] == "1/1").map(|r| r[0].as_str()).collect();
    assert_eq!(ones, ["4"]);

    let o = ergolab(&["orbit", "--graph", "combined", "--n-max", "300", "--k-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 301 * 5);
    assert!(r.iter().all(|row| row[5] == "true"));
}

#[test]
fn budget_exceeded_is_distinct() {
    let o = ergolab(&["orbit", "--graph", "combined", "--n-max", "50", "--max-steps", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let o = ergolab(&[
        "cesaro", "--graph", "combined", "--route", "engine", "--schedule", "200", "--max-support", "1000",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cesaro_closed_form_schedule() {
    let o = ergolab(&[
        "cesaro", "--graph", "combined", "--x", "e_s", "--powers", "1,2,3", "--schedule", "128,256,512,1024",
        "--threshold", "1/10", "--decreasing",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&o);
    assert_eq!(r.len(), 12);
    let at_1024: Vec<&str> = r.iter().filter(|row| row[2] == "1024").map(|row| row[3].as_str()).collect();
    assert_eq!(at_1024, ["1/128", "9/1024", "5/1024"]);
}

#[test]
fn cesaro_routes_agree() {
    let args = |route: &'static str| {
        vec!["cesaro", "--graph", "combined", "--powers", "1,2", "--schedule", "1,5,17,40", "--lambda", "-1", "--route", route]
    };
    let closed = rows(&ergolab(&args("closed-form")));
    let engine = rows(&ergolab(&args("engine")));
    assert_eq!(closed.len(), 8);
    for (c, e) in closed.iter().zip(&engine) {
        // Everything but the route column, and argmax, which may break ties differently.
        assert_eq!(c[..6], e[..6]);
    }
}

#[test]
fn cesaro_from_another_vertex_uses_the_engine() {
    let o = ergolab(&["cesaro", "--graph", "g0", "--x", "e_V(0)", "--schedule", "1,2,4"]);
    let r = rows(&o);
    let norms: Vec<&str> = r.iter().map(|row| row[3].as_str()).collect();
    assert_eq!(norms, ["1/1", "1/2", "1/4"]);
    assert!(r.iter().all(|row| row[7] == "engine"));
}

#[test]
fn complex_rotation_is_within_tolerance() {
    let o = ergolab(&[
        "cesaro", "--graph", "combined", "--schedule", "1024", "--lambda", "i", "--threshold", "1000000001/10000000000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r[0][1], "0+1i");
    let v: f64 = r[0][4].parse().unwrap();
    assert!((v - 0.0078125).abs() < 1e-12);
}

#[test]
fn block_diagonal_commands() {
    let o = ergolab(&["block", "--j", "1", "--sweep-diag", "--n", "10,100,1000"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|row| row[7] == "true"));

    let o = ergolab(&["block", "--m", "1000", "--n", "10,100,1000"]);
    assert_eq!(o.status.code(), Some(0));
    let devs: Vec<String> = rows(&o).into_iter().map(|row| row[3].clone()).collect();
    assert_eq!(devs, ["1/10", "1/100", "1/1000"]);

    let o = ergolab(&["block", "--j", "2", "--sweep-diag", "--n", "10", "--min", "1/2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("norms.json");
    let o = ergolab(&[
        "norms", "--graph", "g0", "--n-max", "2", "--trunc", "30", "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["rows"][1]["norm"], "2/1");
    assert_eq!(doc["rows"][1]["norm_decimal"], "2.0");
    assert_eq!(doc["columns"][3], "norm_decimal");
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = ["cesaro", "--graph", "combined", "--powers", "1,2,3", "--schedule", "16,64,256"];
    let one = ergolab_env(&args, &[("ERGOLAB_THREADS", "1")]);
    let four = ergolab_env(&args, &[("ERGOLAB_THREADS", "4")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let norms = ["norms", "--graph", "combined", "--n-max", "6", "--trunc", "500"];
    assert_eq!(
        ergolab_env(&norms, &[("ERGOLAB_THREADS", "1")]).stdout,
        ergolab_env(&norms, &[("ERGOLAB_THREADS", "3")]).stdout
    );
    assert_eq!(ergolab_env(&args, &[("ERGOLAB_THREADS", "0")]).status.code(), Some(2));
    assert_eq!(ergolab_env(&args, &[("ERGOLAB_THREADS", "many")]).status.code(), Some(2));
}

#[test]
fn verify_subset() {
    let o = ergolab(&["verify", "--only", "2,7,10"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.iter().map(|row| row[0].as_str()).collect::<Vec<_>>(), ["2", "7", "10"]);
    assert!(r.iter().all(|row| row[2] == "true"));
}
