use std::process::{Command, Output};

use stopset::formats::{from_alist, MatrixJson, SsdJson};

fn stopset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stopset"))
        .args(args)
        .env_remove("STOPSET_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn build_alist_hamming_h2() {
    let o = stopset(&["build", "--family", "hamming", "--m", "3", "--construction", "h2", "--format", "alist"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let h = from_alist(&stdout(&o)).unwrap();
    assert_eq!((h.num_rows(), h.num_cols()), (7, 7));
    assert!(h.row_weights().iter().all(|&w| w == 4));
}

#[test]
fn build_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h1.json");
    let o = stopset(&[
        "build", "--family", "simplex", "--m", "4", "--construction", "h1", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("35 rows x 15 cols"));
    let j: MatrixJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((j.rows, j.cols), (35, 15));
    assert_eq!(j.row_supports[0], vec![1, 2, 3]);
    assert!(j.row_supports.iter().all(|r| r.len() == 3));
}

#[test]
fn rejects_m_below_two() {
    let o = stopset(&["build", "--family", "hamming", "--m", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m >= 2"));
}

#[test]
fn ssd_formula_simplex() {
    let o = stopset(&["ssd", "--family", "simplex", "--m", "5"]);
    assert!(o.status.success());
    let j: SsdJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j.n, 31);
    let nonzero: Vec<(usize, &str)> = j
        .t
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(i, c)| (i, c.as_str()))
        .collect();
    assert_eq!(nonzero, vec![(0, "1"), (16, "31"), (24, "155"), (28, "155"), (30, "31"), (31, "1")]);
}

#[test]
fn ssd_both_matches() {
    let o = stopset(&["ssd", "--family", "hamming", "--m", "3", "--method", "both"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("MATCH"));
    assert!(!stderr(&o).contains("MISMATCH"));
}

#[test]
fn exhaustive_too_large() {
    let o = stopset(&["ssd", "--family", "exthamming", "--m", "5", "--method", "exhaustive"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap"));
}

#[test]
fn verify_optimal_constructions_pass() {
    for family in ["simplex", "hamming", "rm1", "exthamming"] {
        let o = stopset(&["verify", "--family", family, "--m", "3"]);
        assert!(o.status.success(), "{family}: {}", stdout(&o));
        assert!(stdout(&o).trim_end().ends_with("PASS"));
    }
}

#[test]
fn verify_full_rank_hamming_fails() {
    let o = stopset(&["verify", "--family", "hamming", "--m", "3", "--matrix", "fullrank"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL: first mismatch at size 3: 10 vs 7"));
}

#[test]
fn verify_external_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.alist");
    let built = stopset(&["build", "--family", "rm1", "--m", "3", "--construction", "h3"]);
    std::fs::write(&path, built.stdout).unwrap();
    let o = stopset(&["verify", "--family", "rm1", "--m", "3", "--input", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn counts() {
    let o = stopset(&["counts", "--kind", "pg", "--B", "4", "2"]);
    assert_eq!(stdout(&o).trim(), "35");
    let o = stopset(&["counts", "--kind", "eg", "--G", "4", "2"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = stopset(&["counts", "--identities", "--max", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "ALL OK");
}

#[test]
fn simulate_zero_epsilon_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let o = stopset(&[
            "simulate", "--family", "hamming", "--m", "3", "--epsilon", "0,0.2,0.4", "--trials", "200000", "--seed",
            "7", "--threads", threads, "--out", path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let first = rows.records().next().unwrap().unwrap();
    assert_eq!(first[1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn simulate_against_exact_rate() {
    let o = stopset(&[
        "simulate", "--family", "simplex", "--m", "3", "--epsilon", "0.3", "--trials", "1000000", "--seed", "20240601",
        "--exact",
    ]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
}
