use std::path::Path;
use std::process::{Command, Output};

use boson_core::UnitaryMatrix;
use tempfile::TempDir;

fn boson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_matrix(dir: &TempDir, name: &str, re: &[&[f64]]) -> String {
    let rows = re.len();
    let cols = re[0].len();
    let im: Vec<Vec<f64>> = vec![vec![0.0; cols]; rows];
    let doc = serde_json::json!({"rows": rows, "cols": cols, "re": re, "im": im});
    let p = dir.path().join(name);
    std::fs::write(&p, doc.to_string()).unwrap();
    path_str(&p).to_owned()
}

fn beamsplitter_file(dir: &TempDir) -> String {
    let p = dir.path().join("bs.json");
    UnitaryMatrix::beamsplitter().write_json(&p).unwrap();
    path_str(&p).to_owned()
}

#[test]
fn haar_writes_reproducible_unitary() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let o = boson(&["haar", "--dim", "8", "--seed", "7", "--out", path_str(&a)]);
    assert!(o.status.success());
    let defect: f64 = stdout(&o)
        .trim()
        .strip_prefix("defect ")
        .unwrap()
        .parse()
        .unwrap();
    assert!(defect <= 1e-12);
    assert!(
        boson(&["haar", "--dim", "8", "--seed", "7", "--out", path_str(&b)])
            .status
            .success()
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn haar_rejects_zero_dim() {
    let dir = TempDir::new().unwrap();
    let o = boson(&[
        "haar",
        "--dim",
        "0",
        "--out",
        path_str(&dir.path().join("z.json")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn haar_unwritable_path_is_runtime_failure() {
    let o = boson(&["haar", "--dim", "2", "--out", "/nonexistent-dir/u.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn permanent_methods_agree_on_small_matrices() {
    let dir = TempDir::new().unwrap();
    let id = write_matrix(
        &dir,
        "id.json",
        &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]],
    );
    let ones = write_matrix(&dir, "ones.json", &[&[1.0, 1.0], &[1.0, 1.0]]);
    for method in ["naive", "ryser", "glynn", "repeated"] {
        let o = boson(&["permanent", "--matrix", &id, "--method", method]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).lines().next(), Some("1+0i"), "{method}");
        let o = boson(&["permanent", "--matrix", &ones, "--method", method]);
        assert_eq!(stdout(&o).lines().next(), Some("2+0i"), "{method}");
    }
    let o = boson(&["permanent", "--matrix", &ones, "--method", "repeated"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("gray_steps 1"));
}

#[test]
fn permanent_with_multiplicities() {
    let dir = TempDir::new().unwrap();
    // One column repeated twice: per = 2·a·b.
    let col = write_matrix(&dir, "col.json", &[&[3.0], &[5.0]]);
    let o = boson(&["permanent", "--matrix", &col, "--multiplicities", "2"]);
    assert_eq!(stdout(&o), "30+0i\ngray_steps 0\n");
    let o = boson(&["permanent", "--matrix", &col, "--multiplicities", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = boson(&["permanent", "--matrix", &col, "--multiplicities", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn naive_refuses_large_matrices() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("u.json");
    assert!(boson(&["haar", "--dim", "11", "--out", path_str(&p)])
        .status
        .success());
    let o = boson(&["permanent", "--matrix", path_str(&p), "--method", "naive"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn beamsplitter_samples_never_coincide() {
    let dir = TempDir::new().unwrap();
    let bs = beamsplitter_file(&dir);
    let o = boson(&[
        "sample",
        "--unitary",
        &bs,
        "-n",
        "2",
        "--count",
        "100",
        "--seed",
        "3",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 101);
    for l in &lines[1..] {
        assert_ne!(l["config"], serde_json::json!([1, 1]));
    }
}

#[test]
fn sample_output_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let u = dir.path().join("u.json");
    assert!(
        boson(&["haar", "--dim", "6", "--seed", "1", "--out", path_str(&u)])
            .status
            .success()
    );
    let args = [
        "sample",
        "--unitary",
        path_str(&u),
        "-n",
        "3",
        "--count",
        "50",
        "--seed",
        "9",
    ];
    assert_eq!(boson(&args).stdout, boson(&args).stdout);
    let out = dir.path().join("s.jsonl");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path_str(&out)]);
    assert!(boson(&with_out).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), boson(&args).stdout);
}

#[test]
fn sample_count_zero_is_header_only() {
    let dir = TempDir::new().unwrap();
    let bs = beamsplitter_file(&dir);
    let o = boson(&["sample", "--unitary", &bs, "-n", "2", "--count", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn sample_rejects_more_bosons_than_ports() {
    let dir = TempDir::new().unwrap();
    let bs = beamsplitter_file(&dir);
    let o = boson(&["sample", "--unitary", &bs, "-n", "3", "--count", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("regime"));
}

#[test]
fn dist_tables() {
    let o = boson(&["dist", "-n", "2", "-m", "2"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,P_exact,P,B");
    assert!(rows[1].starts_with("1,2/3,"));
    assert!(rows[2].starts_with("2,1/3,"));

    let o = boson(&["dist", "-n", "50", "-m", "100"]);
    let text = stdout(&o);
    let ps: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ps.len(), 50);
    assert!((ps.iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let o = boson(&["dist", "-n", "1", "-m", "5"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_owned();
    assert!(row.starts_with("1,1,1,"), "{row}");
    assert_eq!(stdout(&o).lines().count(), 2);
    assert_eq!(
        boson(&["dist", "-n", "6", "-m", "5"]).status.code(),
        Some(2)
    );
}

#[test]
fn dist_plot_data() {
    let dir = TempDir::new().unwrap();
    let plot = dir.path().join("plot.csv");
    let out = dir.path().join("dist.csv");
    let o = boson(&[
        "dist",
        "-n",
        "50",
        "-m",
        "100",
        "--out",
        path_str(&out),
        "--plot-data",
        path_str(&plot),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(text.lines().next(), Some("n,P,B,log10_P,log10_B"));
    assert_eq!(text.lines().count(), 102);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 51);
}

#[test]
fn bounds_report() {
    let o = boson(&["bounds", "-n", "20", "-m", "60", "--epsilon", "0.05"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n_equiv"], 15.0);
    assert!(
        v["c_sample_upper"]["log2"].as_f64().unwrap()
            > v["c_sample_lower"]["log2"].as_f64().unwrap()
    );

    let o = boson(&["bounds", "-n", "16", "-m", "16", "--epsilon", "0.1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["right_tail_absent"], true);
    assert_eq!(v["r"], 1.0);

    let o = boson(&["bounds", "-n", "20", "-m", "60", "--epsilon", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_beamsplitter_passes() {
    let dir = TempDir::new().unwrap();
    let bs = beamsplitter_file(&dir);
    let o = boson(&[
        "verify",
        "--unitary",
        &bs,
        "-n",
        "2",
        "--count",
        "10000",
        "--seed",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("PASS\n"));
}

#[test]
fn verify_three_on_five_passes() {
    let dir = TempDir::new().unwrap();
    let u = dir.path().join("u.json");
    assert!(
        boson(&["haar", "--dim", "5", "--seed", "12", "--out", path_str(&u)])
            .status
            .success()
    );
    let o = boson(&[
        "verify",
        "--unitary",
        path_str(&u),
        "-n",
        "3",
        "--count",
        "100000",
        "--seed",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("configurations 35\n"));
}

#[test]
fn verify_refuses_huge_enumerations() {
    let dir = TempDir::new().unwrap();
    let u = dir.path().join("u.json");
    assert!(boson(&["haar", "--dim", "30", "--out", path_str(&u)])
        .status
        .success());
    let o = boson(&[
        "verify",
        "--unitary",
        path_str(&u),
        "-n",
        "30",
        "--count",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scaling_sweep_csv() {
    let o = boson(&[
        "scaling",
        "-n",
        "4,6",
        "--mode-factor",
        "2",
        "--count",
        "5",
        "--seed",
        "1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("N,M,rho,mean_log2_ops,max_log2_ops,"));
    assert_eq!(text.lines().count(), 3);
    let o = boson(&["scaling", "-n", "30", "--count", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(boson(&["dist", "--bogus"]).status.code(), Some(2));
    assert_eq!(boson(&[]).status.code(), Some(2));
}
