use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = opendom_cli::run(std::iter::once("opendom").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn counterexample_files_round_trip_through_dist() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let listing = json(&["counterexample", "--count", "2", "--out", d]);
    assert_eq!(listing["files"].as_array().unwrap().len(), 4);

    let ce1 = format!("{d}/ce1.json");
    let v = json(&["--tol", "1/4096", "dist", &ce1, "empty"]);
    assert_eq!(v["lo"], "67092481/67108864");
    assert_eq!(v["hi"], "67108865/67108864");

    let ce2 = format!("{d}/ce2.json");
    let same = json(&["dist", &ce2, &ce2, "--gamma"]);
    assert_eq!(same["lo"], "0");
    assert_eq!(same["metric"], "d_gamma");
}

#[test]
fn inverse_file_decays_towards_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    json(&["counterexample", "--count", "2", "--out", d]);
    let inv = format!("{d}/ce2_inv.json");
    let v = json(&["dist", &inv, "zero:[0,1)"]);
    assert_eq!(v["hi"], "630309952631/1612223348736");
}

#[test]
fn gamma_distance_rejects_non_injective_maps() {
    let (code, out, err) = run(&["--space", "unit_interval", "dist", "id", "zero", "--gamma"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("error: map is not injective"), "{err}");
}

#[test]
fn fell_distance_of_nested_complements() {
    let v = json(&["--space", "reals", "--tol", "1/1024", "fell-dist", "complement:(0,1)", "complement:(0,2)"]);
    assert_eq!(v["lo"], "0");
    assert_eq!(v["hi"], "1/1024");
}

#[test]
fn csv_output_has_a_header_row() {
    let (code, out, _) = run(&["--space", "reals", "--format", "csv", "dist", "id", "zero"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("metric,lo,hi,lo_decimal,hi_decimal"));
    assert!(lines.next().unwrap().starts_with("beta,"));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) = run(&["--space", "reals", "--out", path.to_str().unwrap(), "dist", "id", "id"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["lo"], "0");
}

#[test]
fn membership_predicates() {
    let member = |args: &[&str]| json(args)["result"].as_bool().unwrap();
    let mut base = vec!["--space", "reals", "member"];
    base.extend(["compact-open", "id:(0,1)", "--compact", "[1/4,1/2]", "--open", "(0,1)"]);
    assert!(member(&base));
    assert!(!member(&["--space", "reals", "member", "compact-open", "id:(0,1)", "--compact", "[1/4,1/2]", "--open", "(0,1/3)"]));
    assert!(member(&["--space", "reals", "member", "hit", "complement:(0,1)", "--open", "(1/2,2)"]));
    assert!(!member(&["--space", "reals", "member", "miss", "complement:(0,1)", "--compact", "[1/2,2]"]));
    assert!(member(&["--space", "reals", "member", "ball", "zero:(0,1)", "--center", "id:(0,1)", "--compact", "[1/8,1/4]", "--eps", "1/2"]));
}

#[test]
fn converge_modes() {
    let decay = json(&["converge", "--seq", "counterexample", "--indices", "1,2"]);
    assert_eq!(decay["kind"], "beta-decay");
    assert_eq!(decay["enclosures"].as_array().unwrap().len(), 2);

    let cauchy = json(&["converge", "--seq", "counterexample", "--prefix", "8", "--compact", "[1/4,1/2]"]);
    assert_eq!(cauchy["compacts"][0]["verdict"], "fails-with-witness");
    assert_eq!(cauchy["compacts"][0]["witness"]["index"], 2);

    let inverse = json(&[
        "--space", "reals", "converge", "--seq", "affine:a=1+1/n,b=0,dom=(0,1)",
        "--inverse-check", "id:(0,1)", "id:(0,1)", "--compact", "[1/4,1/2]",
    ]);
    assert_eq!(inverse["verdict"], "holds-on-prefix");

    let limit = json(&["--space", "reals", "converge", "--seq", "affine:a=1+1/n,b=0,dom=(0,1)", "--limit-at", "8", "--compact", "[1/4,1/2]"]);
    assert!(!limit["map"]["pieces"].as_array().unwrap().is_empty());
}

#[test]
fn corrupted_case_table_is_caught() {
    let (code, out, _) = run(&["--samples", "10", "--format", "csv", "axioms", "--corrupt-beta"]);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l.starts_with("metric.beta_mn_triangle,") && l.ends_with(",fail")));
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    let (code, _, err) = run(&["--tol", "abc", "dist", "id", "id"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, err) = run(&["--tol", "0", "--space", "reals", "dist", "id", "id"]);
    assert_eq!(code, 2);
    assert!(err.contains("tolerance"), "{err}");
}
