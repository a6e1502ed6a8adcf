use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycle-rescue"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fields(out: &Output) -> HashMap<String, String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn number(f: &HashMap<String, String>, key: &str) -> f64 {
    f[key]
        .parse()
        .unwrap_or_else(|_| panic!("{key} = {} is not a number", f[key]))
}

fn temp_csv(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cycle-rescue-{}-{name}.csv", std::process::id()))
}

#[test]
fn solve_equal_p() {
    let out = run(&["solve", "--n", "4", "--k", "1", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let f = fields(&out);
    assert_eq!(f["method"], "equal-p");
    assert_eq!(f["value"], "0.187500000000000");
}

#[test]
fn solve_three_vertex_mixed_case() {
    let f = fields(&run(&[
        "solve",
        "--n",
        "3",
        "--k",
        "1",
        "--p",
        "0.1,0.9,0.1",
    ]));
    assert_eq!(f["method"], "n3-case2");
    assert!((number(&f, "value") - 0.0547178).abs() < 1e-6);
    assert_eq!(f["hider_support"], "3");
}

#[test]
fn solve_adaptive() {
    let f = fields(&run(&[
        "solve",
        "--n",
        "5",
        "--k",
        "2",
        "--p",
        "0.5",
        "--adaptive",
    ]));
    assert_eq!(f["method"], "adaptive");
    assert!((number(&f, "value") - 0.0625).abs() < 1e-15);
}

#[test]
fn solve_with_oracle_check() {
    let out = run(&["solve", "--p", "0.3,0.5,0.8,0.7,0.2", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let f = fields(&out);
    assert_eq!(f["verified"], "true");
}

#[test]
fn verify_examples() {
    for args in [
        &["verify", "--k", "1", "--p", "0.9,0.5,0.9"][..],
        &["verify", "--n", "6", "--k", "2", "--p", "0.5", "--adaptive"][..],
        &["verify", "--k", "2", "--p", "0.9,0.5,0.9"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let f = fields(&out);
        assert_eq!(f["passed"], "true");
        assert!(number(&f, "difference") < 1e-9);
    }
    let f = fields(&run(&["verify", "--k", "1", "--p", "0.9,0.5,0.9"]));
    assert!((number(&f, "oracle") - 0.45).abs() < 1e-12);
}

#[test]
fn grid3_counts() {
    let f = fields(&run(&["grid3"]));
    assert_eq!(f["count"], "526");
    assert_eq!(f["total"], "729");
    assert!((number(&f, "fraction") - 0.7215).abs() < 1e-4);
    assert_eq!(fields(&run(&["grid3", "--p2", "0.1"]))["count"], "81");
    let f = fields(&run(&[
        "grid3", "--p1", "0.5", "--p2", "0.5", "--p3", "0.5",
    ]));
    assert_eq!((f["count"].as_str(), f["total"].as_str()), ("1", "1"));
}

#[test]
fn grid3_csv() {
    let path = temp_csv("grid");
    let out = run(&["grid3", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p1,p2,p3,boundary,holds");
    assert_eq!(lines.len(), 730);
    assert_eq!(lines.iter().filter(|l| l.ends_with(",true")).count(), 526);
}

#[test]
fn continuous_bounds_at_half() {
    let f = fields(&run(&["continuous", "--k", "2", "--p", "0.5"]));
    assert!((number(&f, "lower") - 0.594604).abs() < 1e-6);
    assert!((number(&f, "upper") - 0.597584).abs() < 1e-6);
    assert!(number(&f, "lower") <= number(&f, "upper"));
}

#[test]
fn continuous_gap() {
    let f = fields(&run(&["continuous", "--k", "2", "--gap"]));
    assert!((number(&f, "p_star") - 0.0653).abs() < 5e-3);
    assert!((number(&f, "gap_star") - 0.0103).abs() < 5e-4);
}

#[test]
fn continuous_sweep_csv() {
    let path = temp_csv("sweep");
    let out = run(&[
        "continuous",
        "--k",
        "2",
        "--sweep",
        "99",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fields(&out)["rows"], "99");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,lower,upper,ratio,gap"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 99);
    assert!(rows.iter().all(|r| r[1] <= r[2]));
}

#[test]
fn continuous_monte_carlo_is_reproducible() {
    let args = [
        "continuous",
        "--k",
        "2",
        "--p",
        "0.5",
        "--samples",
        "5000",
        "--seed",
        "3",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let f = fields(&a);
    let z = (number(&f, "mc_mean") - number(&f, "upper")) / number(&f, "mc_std_err");
    assert!(z.abs() < 5.0);
}

#[test]
fn enumerate_outputs() {
    let f = fields(&run(&["enumerate", "--n", "3"]));
    assert_eq!(f["count"], "4");
    assert_eq!(f["search[1]"], "(1,3,2) CAC");
    let f = fields(&run(&["enumerate", "--n", "7", "--k", "2"]));
    assert_eq!(f["count"], "3");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["solve", "--p", "0.5"]).status.code(), Some(1));
    assert_eq!(
        run(&["solve", "--n", "3", "--p", "1.5"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(
        run(&[
            "solve",
            "--n",
            "5",
            "--k",
            "2",
            "--p",
            "0.5,0.6,0.5,0.5,0.5",
            "--adaptive"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        run(&["verify", "--n", "20", "--p", "0.5"]).status.code(),
        Some(3)
    );
}

#[test]
fn output_is_deterministic() {
    let args = ["solve", "--p", "0.3,0.5,0.8,0.7,0.2,0.45"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
