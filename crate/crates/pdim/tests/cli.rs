use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use pdim::formats::{write_graph, GraphFormat};
use pdim::json::encoding_from_json;
use pdim_core::generate::random_forest;
use pdim_core::{verify_encoding, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdim"))
        .args(args)
        .output()
        .unwrap()
}

fn pdim_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pdim"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn pdim_of_p5_is_two() {
    let out = pdim_stdin(&["pdim"], "5 4\n0 1\n1 2\n2 3\n3 4\n");
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert_eq!(text(&out.stdout), "2\n");
}

#[test]
fn encode_large_forest_meets_bound() {
    let dir = tempfile::tempdir().unwrap();
    let g = random_forest(1024, &mut ChaCha8Rng::seed_from_u64(7));
    let graph = write_file(dir.path(), "f.txt", &write_graph(&g, GraphFormat::Edgelist));
    let enc = dir.path().join("enc.json");
    let meta = dir.path().join("meta.json");
    let out = pdim(&[
        "encode",
        "--method",
        "forest",
        "-i",
        &graph,
        "-o",
        enc.to_str().unwrap(),
        "--meta",
        meta.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let e = encoding_from_json(&fs::read_to_string(&enc).unwrap()).unwrap();
    assert!(e.dimension() <= 17, "dimension {}", e.dimension());
    assert!(verify_encoding(&g, &e).unwrap().valid);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(meta["method"], "forest");
    assert_eq!(meta["dimension"], e.dimension());
    assert_eq!(meta["bound_certified"], true);
    for key in ["bound", "retries", "elapsed_ms"] {
        assert!(meta.get(key).is_some(), "{key}");
    }
    let out = pdim(&["verify", "-i", &graph, "-e", enc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stdout));
}

#[test]
fn tampered_encoding_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(dir.path(), "c.txt", "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    let out = pdim(&["encode", "--method", "exact", "-i", &graph]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let json = text(&out.stdout);
    let mut doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    // vertex 1's first symbol becomes vertex 0's, so the edge 0-1 agrees there
    doc["codes"][1][0] = doc["codes"][0][0].clone();
    let enc = write_file(dir.path(), "bad.json", &doc.to_string());
    let out = pdim(&["verify", "-i", &graph, "-e", &enc]);
    assert_eq!(out.status.code(), Some(3));
    let report = text(&out.stdout);
    assert!(
        report.contains("EdgeAgrees") || report.contains("NonEdgeDisagreesEverywhere"),
        "{report}"
    );
}

#[test]
fn every_method_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    // a 3x3 grid graph
    let g = Graph::new(
        9,
        [
            (0, 1),
            (1, 2),
            (3, 4),
            (4, 5),
            (6, 7),
            (7, 8),
            (0, 3),
            (3, 6),
            (1, 4),
            (4, 7),
            (2, 5),
            (5, 8),
        ],
    )
    .unwrap();
    for fmt in [
        GraphFormat::Edgelist,
        GraphFormat::Dimacs,
        GraphFormat::PaceGr,
    ] {
        let graph = write_file(dir.path(), "g", &write_graph(&g, fmt));
        let fmt_name = fmt.to_string();
        for method in ["treewidth", "degenerate", "exact", "auto"] {
            let enc = dir.path().join(format!("{method}.json"));
            let out = pdim(&[
                "encode",
                "-f",
                &fmt_name,
                "-m",
                method,
                "-i",
                &graph,
                "-o",
                enc.to_str().unwrap(),
            ]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{method}: {}",
                text(&out.stderr)
            );
            let out = pdim(&[
                "verify",
                "-f",
                &fmt_name,
                "-i",
                &graph,
                "-e",
                enc.to_str().unwrap(),
            ]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{method}: {}",
                text(&out.stdout)
            );
        }
    }
    let out = pdim(&[
        "encode",
        "-m",
        "forest",
        "-i",
        &write_file(dir.path(), "k3", "3 3\n0 1\n1 2\n0 2\n"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn encoding_json_is_byte_stable() {
    let input = "8 10\n0 1\n1 2\n2 3\n3 0\n4 5\n5 6\n6 7\n7 4\n0 4\n2 6\n";
    for args in [
        &["encode", "-m", "degenerate", "--seed", "11"][..],
        &["encode", "-m", "treewidth"][..],
        &["encode"][..],
    ] {
        let a = pdim_stdin(args, input);
        let b = pdim_stdin(args, input);
        assert_eq!(a.status.code(), Some(0), "{}", text(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        assert!(text(&a.stdout).starts_with("{\"n\":8,\"l\":"));
    }
}

#[test]
fn parse_errors_exit_two() {
    let out = pdim_stdin(&["pdim"], "2 1\n0 0\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(
        text(&out.stderr).contains("line 2"),
        "{}",
        text(&out.stderr)
    );
    let out = pdim_stdin(&["encode", "-f", "dimacs"], "p edge 2 1\ne 1 3\n");
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let enc = write_file(dir.path(), "e.json", "{\"n\": 2,");
    let out = pdim_stdin(&["verify", "-e", &enc], "2 1\n0 1\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_budgets_exit_four() {
    let out = pdim_stdin(
        &[
            "encode",
            "-m",
            "degenerate",
            "--p-multiplier",
            "0.01",
            "--max-retries",
            "0",
        ],
        "6 3\n0 1\n2 3\n4 5\n",
    );
    assert_eq!(out.status.code(), Some(4), "{}", text(&out.stderr));
}

#[test]
fn supplied_tree_decomposition_is_used_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(dir.path(), "c4", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let good = write_file(
        dir.path(),
        "good.td",
        "s td 2 3 4\nb 1 1 2 3\nb 2 1 3 4\n1 2\n",
    );
    let out = pdim(&["encode", "-m", "treewidth", "-i", &graph, "--td", &good]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let bad = write_file(dir.path(), "bad.td", "s td 2 2 4\nb 1 1 2\nb 2 3 4\n1 2\n");
    let out = pdim(&["encode", "-m", "treewidth", "-i", &graph, "--td", &bad]);
    assert_eq!(out.status.code(), Some(3), "{}", text(&out.stderr));
}

#[test]
fn mols_emit_and_verify() {
    let out = pdim(&["mols", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let grids = text(&out.stdout);
    let out = pdim_stdin(&["mols", "--verify"], &grids);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let out = pdim_stdin(&["mols", "--verify"], "0 1\n1 0\n\n0 1\n1 0\n");
    assert_eq!(out.status.code(), Some(3));
    let out = pdim_stdin(&["mols", "--verify"], "0 1 2\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_writes_sorted_valid_csv() {
    let out = pdim(&[
        "bench", "--sizes", "16,32", "--params", "1,2", "--seeds", "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "family",
            "n",
            "param",
            "dimension",
            "bound",
            "valid",
            "seed",
            "ms"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2 * 2 * 5);
    for r in &rows {
        assert_eq!(&r[5], "true");
        if !r[4].is_empty() {
            assert!(r[3].parse::<f64>().unwrap() <= r[4].parse::<f64>().unwrap());
        }
    }
}
