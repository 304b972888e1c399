use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fusionweave::Tolerance;
use fusionweave_cli::document::load_frame;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionweave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn weave_writes_every_assignment() {
    let csv = scratch("remark.csv");
    let o = run(&[
        "weave",
        path_str(&data("remark_W.json")),
        path_str(&data("remark_V.json")),
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("woven: yes"));
    assert!(text.contains("C = 1.0000000000, D = 2.0000000000"));

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "assignment_id",
            "labels",
            "lambda_min",
            "lambda_max",
            "is_frame"
        ]
    );
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 8 + 1);
    let (rows, footer) = records.split_at(8);
    assert_eq!(&rows[3][1], "1-2-2");
    let lo = rows
        .iter()
        .map(|r| r[2].parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    let hi = rows
        .iter()
        .map(|r| r[3].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    let footer = &footer[0];
    assert_eq!(&footer[0], "universal");
    assert_eq!(&footer[1], "");
    assert_eq!(footer[2].parse::<f64>().unwrap(), lo);
    assert_eq!(footer[3].parse::<f64>().unwrap(), hi);
    assert_eq!(&footer[4], "true");
    assert_eq!((lo, hi), (1.0, 2.0));
}

#[test]
fn weave_rejects_oversized_enumeration_unless_sampling() {
    let w = data("remark_W.json");
    let v = data("remark_V.json");
    let o = run(&["weave", path_str(&w), path_str(&v), "--max-enum", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "weave",
        path_str(&w),
        path_str(&v),
        "--max-enum",
        "4",
        "--sample",
        "5",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("assignments: 5 (sampled)"));
}

#[test]
fn swapped_lines_are_not_woven() {
    let a = scratch("lines_a.json");
    let b = scratch("lines_b.json");
    fs::write(
        &a,
        r#"{"dim":2,"subspaces":[{"vectors":[[1,0]]},{"vectors":[[0,1]]}]}"#,
    )
    .unwrap();
    fs::write(
        &b,
        r#"{"dim":2,"subspaces":[{"vectors":[[0,1]]},{"vectors":[[1,0]]}]}"#,
    )
    .unwrap();
    let o = run(&["weave", path_str(&a), path_str(&b)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("woven: no"));
}

#[test]
fn defect_of_the_approximate_dual() {
    let o = run(&[
        "dual",
        path_str(&data("example_W.json")),
        "--defect",
        path_str(&data("example_V.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("defect: 0.447214"));
}

#[test]
fn frame_but_not_riesz() {
    let v = data("remark_V.json");
    assert_eq!(run(&["check", path_str(&v)]).status.code(), Some(0));
    let o = run(&["riesz", path_str(&v)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Riesz sequence: no"));
    assert_eq!(
        run(&["riesz", path_str(&data("remark_W.json"))])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn input_errors_exit_with_two() {
    let bad = scratch("negative_weight.json");
    fs::write(
        &bad,
        r#"{"dim":2,"subspaces":[{"vectors":[[1,0]],"weight":-1}]}"#,
    )
    .unwrap();
    let o = run(&["check", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("subspaces[0].weight"));

    let short = scratch("short_vector.json");
    fs::write(
        &short,
        "{\"dim\":3,\n \"subspaces\":[{\"vectors\":[[1,0]]}]}",
    )
    .unwrap();
    let o = run(&["check", path_str(&short)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("subspaces[0].vectors[0]"));

    let broken = scratch("broken.json");
    fs::write(&broken, "{\"dim\":3,\n \"subspaces\": [}").unwrap();
    let o = run(&["check", path_str(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));

    let o = run(&["check", path_str(&data("remark_W.json")), "--epsilon", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn canonical_dual_round_trip() {
    let tol = Tolerance::default();
    let src = data("example_V.json");
    let out = scratch("canonical_dual.json");
    let o = run(&["dual", path_str(&src), "--canonical", "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let reloaded = load_frame(&out, &tol).unwrap();
    let direct = load_frame(&src, &tol)
        .unwrap()
        .canonical_dual(&tol)
        .unwrap();
    assert_eq!(reloaded.len(), direct.len());
    for (a, b) in reloaded.members().iter().zip(direct.members()) {
        assert!(a.subspace.distance(&b.subspace).unwrap() <= 1e-8);
        assert_eq!(a.weight, b.weight);
    }
    let o = run(&["dual", path_str(&src), "--verify", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "dual",
        path_str(&src),
        "--verify",
        path_str(&data("remark_W.json")),
    ]);
    assert_eq!(o.status.code(), Some(2), "member counts differ");
}

#[test]
fn enlarged_dual_is_a_dual() {
    let extras = scratch("extras.json");
    fs::write(&extras, r#"{"dim":3,"extras":[[[0,0,1]],[]]}"#).unwrap();
    let out = scratch("enlarged.json");
    let w = data("example_W.json");
    let o = run(&[
        "dual",
        path_str(&w),
        "--enlarge",
        path_str(&extras),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = load_frame(&out, &Tolerance::default()).unwrap();
    assert_eq!(v.members()[0].subspace.dim(), 3);
    assert_eq!(
        run(&["dual", path_str(&w), "--verify", path_str(&out)])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn perturbation_checks() {
    let t = scratch("diag210.json");
    fs::write(&t, r#"{"dim":3,"rows":[[2,0,0],[0,1,0],[0,0,0]]}"#).unwrap();
    let v = scratch("line011.json");
    fs::write(&v, r#"{"dim":3,"vectors":[[0,1,1]]}"#).unwrap();
    let f = data("remark_W.json");
    let check = format!("modulus:{}", path_str(&v));
    let o = run(&[
        "perturb",
        path_str(&f),
        "--op",
        path_str(&t),
        "--check",
        &check,
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let half_root = std::f64::consts::FRAC_1_SQRT_2;
    assert!((record["lhs"].as_f64().unwrap() - half_root).abs() < 1e-10);
    assert!((record["mid"].as_f64().unwrap() - half_root).abs() < 1e-10);

    let o = run(&[
        "perturb",
        path_str(&f),
        "--op",
        path_str(&t),
        "--check",
        "operator1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(record["chain_ok"], true);
    // pulled-back family is a frame for R(T^T), the image family misses e3
    assert_eq!(record["left_is_frame"], true);
    assert_eq!(record["right_is_frame"], false);
    assert_eq!(record["equivalence_ok"], false);
    assert_eq!(record["range_equivalence_ok"], true);

    let lemma = format!("lemma:{}", path_str(&v));
    let o = run(&[
        "perturb",
        path_str(&f),
        "--op",
        path_str(&t),
        "--check",
        &lemma,
    ]);
    assert_eq!(o.status.code(), Some(0));

    // singular operator rejected by the sufficient-condition check
    let o = run(&[
        "perturb",
        path_str(&f),
        "--op",
        path_str(&t),
        "--check",
        "per1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "perturb",
        path_str(&f),
        "--op",
        path_str(&data("psi_inverse.json")),
        "--check",
        "per1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(record["woven"], true);
    assert_eq!(record["cond_iii"], serde_json::Value::Null);
}

#[test]
fn outputs_repeat_for_a_seed() {
    for kind in ["frame", "riesz", "operator"] {
        let a = run(&[
            "random", "--type", kind, "--dim", "4", "--count", "3", "--seed", "17",
        ]);
        let b = run(&[
            "random", "--type", kind, "--dim", "4", "--count", "3", "--seed", "17",
        ]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    let f1 = scratch("seeded_1.json");
    let f2 = scratch("seeded_2.json");
    run(&[
        "random",
        "--type",
        "frame",
        "--dim",
        "3",
        "--count",
        "6",
        "--seed",
        "1",
        "-o",
        path_str(&f1),
    ]);
    run(&[
        "random",
        "--type",
        "frame",
        "--dim",
        "3",
        "--count",
        "6",
        "--seed",
        "2",
        "-o",
        path_str(&f2),
    ]);
    let c1 = scratch("sampled_1.csv");
    let c2 = scratch("sampled_2.csv");
    for c in [&c1, &c2] {
        let o = run(&[
            "weave",
            path_str(&f1),
            path_str(&f2),
            "--sample",
            "20",
            "--seed",
            "4",
            "--csv",
            path_str(c),
        ]);
        assert!(o.status.code().unwrap() <= 1);
    }
    assert_eq!(fs::read(&c1).unwrap(), fs::read(&c2).unwrap());
    assert_eq!(
        run(&["random", "--type", "riesz", "--dim", "2", "--count", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn builtin_examples_reproduce() {
    let o = run(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("13/13 claims reproduced"));
    assert!(!text.contains("FAIL"));
}
