//! End-to-end tests of the `trop` binary: exit-code protocol, JSON summary
//! shape, determinism of reruns, and the standard worked examples.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

const TROP: &str = env!("CARGO_BIN_EXE_trop");

/// Hyperbola with the corner at -1: two vertices joined by a bounded edge.
const HYPERBOLA: &str = "-1 : 0 0\n0 : 1 0\n0 : 0 1\n0 : 1 1\n";
/// Same support with the corner at +1: the bounded edge flips diagonals.
const HYPERBOLA_FLIPPED: &str = "1 : 0 0\n0 : 1 0\n0 : 0 1\n0 : 1 1\n";
/// The transition value 0: a single 4-valent vertex, not smooth.
const SQUARE_DEGENERATE: &str = "0 : 0 0\n0 : 1 0\n0 : 0 1\n0 : 1 1\n";
/// Coefficient family degenerating onto the hyperbola.
const HYPERBOLA_FAMILY: &str = "1 0 @ 1 : 0 0\n1 0 @ 0 : 1 0\n1 0 @ 0 : 0 1\n1 0 @ 0 : 1 1\n";
/// Tropical line with all coefficients 0.
const LINE_TROP: &str = "0 : 0 0\n0 : 1 0\n0 : 0 1\n";

/// Three-term line with unit moduli and arguments (2, 0.5, 1) on the
/// monomials x, y, 1 respectively.
fn line_complex() -> String {
    let term = |theta: f64, exps: &str| {
        format!("{} {} : {}\n", theta.cos(), theta.sin(), exps)
    };
    format!("{}{}{}", term(1.0, "0 0"), term(2.0, "1 0"), term(0.5, "0 1"))
}

/// Tropical plane curve of degree d with strictly concave coefficients
/// -(a^2 + ab + b^2): the dual subdivision is the unimodular triangulation.
fn plane_curve(d: i64) -> String {
    let mut out = String::new();
    for a in 0..=d {
        for b in 0..=(d - a) {
            out.push_str(&format!("{} : {} {}\n", -(a * a + a * b + b * b), a, b));
        }
    }
    out
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture write");
    path
}

/// Run the binary; return (exit code, stdout, stderr).
fn trop(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(TROP).args(args).output().expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("stdout utf8"),
        String::from_utf8(out.stderr).expect("stderr utf8"),
    )
}

/// Parse the one-line JSON summary from stdout.
fn summary(stdout: &str) -> Value {
    serde_json::from_str(stdout.trim()).expect("stdout is one JSON object")
}

#[test]
fn corner_locus_of_the_three_standard_cases() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (HYPERBOLA, 2, 5, true),
        (HYPERBOLA_FLIPPED, 2, 5, true),
        (SQUARE_DEGENERATE, 1, 4, false),
    ];
    for (i, (text, vertices, edges, smooth)) in cases.into_iter().enumerate() {
        let poly = write_fixture(dir.path(), &format!("case{i}.trop"), text);
        let (code, stdout, _) = trop(&["corner-locus", poly.to_str().unwrap()]);
        assert_eq!(code, 0, "case {i}");
        let s = summary(&stdout);
        assert_eq!(s["command"], "corner-locus");
        assert_eq!(s["ok"], true);
        assert_eq!(s["n"], 2);
        assert_eq!(s["cell_counts"]["0"], vertices, "case {i}");
        assert_eq!(s["cell_counts"]["1"], edges, "case {i}");
        assert_eq!(s["smooth"], smooth, "case {i}");
        assert_eq!(s["cells"].as_array().unwrap().len(), vertices + edges);
    }
}

#[test]
fn corner_locus_writes_an_svg() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_fixture(dir.path(), "hyp.trop", HYPERBOLA);
    let svg = dir.path().join("hyp.svg");
    let (code, _, _) = trop(&[
        "corner-locus",
        poly.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--box",
        "-3,3",
    ]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg"), "svg file starts with the root element");
    assert!(body.contains("<line"), "curve segments are drawn");
}

#[test]
fn smooth_check_drives_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_fixture(dir.path(), "good.trop", HYPERBOLA);
    let bad = write_fixture(dir.path(), "bad.trop", SQUARE_DEGENERATE);

    let (code, stdout, _) = trop(&["smooth-check", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    let s = summary(&stdout);
    assert_eq!((s["smooth"].as_bool(), s["passed"].as_bool()), (Some(true), Some(true)));

    let (code, stdout, _) = trop(&["smooth-check", bad.to_str().unwrap()]);
    assert_eq!(code, 1, "failed check exits 1, not 2");
    let s = summary(&stdout);
    assert_eq!((s["smooth"].as_bool(), s["passed"].as_bool()), (Some(false), Some(false)));
    assert_eq!(s["ok"], true, "the command itself ran fine");
}

#[test]
fn amoeba_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_fixture(dir.path(), "line.cplx", &line_complex());
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let run = |csv: &Path| {
        trop(&[
            "amoeba",
            poly.to_str().unwrap(),
            "--t",
            "10",
            "--k",
            "80",
            "--seed",
            "7",
            "--box",
            "-4,4",
            "--csv",
            csv.to_str().unwrap(),
        ])
    };
    let (code_a, stdout_a, _) = run(&csv_a);
    let (code_b, stdout_b, _) = run(&csv_b);
    assert_eq!((code_a, code_b), (0, 0));
    assert_eq!(stdout_a, stdout_b, "summaries are deterministic");
    let bytes_a = std::fs::read(&csv_a).unwrap();
    let bytes_b = std::fs::read(&csv_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "clouds are deterministic");
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("space,n,t,seed\nlog,2,10,7\n"), "csv header:\n{text}");
    let s = summary(&stdout_a);
    assert!(s["points"].as_u64().unwrap() > 0);
}

#[test]
fn coamoeba_checks_the_line_complement() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_fixture(dir.path(), "line.cplx", &line_complex());
    let svg = dir.path().join("coamoeba.svg");
    let (code, stdout, _) = trop(&[
        "coamoeba",
        poly.to_str().unwrap(),
        "--t",
        "10",
        "--k",
        "250",
        "--seed",
        "5",
        "--box",
        "-4,4",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "no sampled argument pair may fall in the complement");
    let s = summary(&stdout);
    assert_eq!(s["complement_check"]["applicable"], true);
    assert_eq!(s["complement_check"]["violations"], 0);
    assert_eq!(s["passed"], true);
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.contains("#e08214"), "complement-triangle overlay is drawn");
}

#[test]
fn converge_walks_the_ladder_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let family = write_fixture(dir.path(), "hyp.viro", HYPERBOLA_FAMILY);
    let args = [
        "converge",
        family.to_str().unwrap(),
        "--ladder",
        "10,100,1000,1000000",
        "--box",
        "-3,3",
        "--k",
        "1500",
        "--seed",
        "1003",
        "--epsilon",
        "0.05",
    ];
    let (code, stdout, _) = trop(&args);
    assert_eq!(code, 0, "final distance must meet --epsilon: {stdout}");
    let s = summary(&stdout);
    let table = s["table"].as_array().unwrap();
    assert_eq!(table.len(), 4);
    assert!(s["final"].as_f64().unwrap() <= 0.05);
    assert_eq!(s["passed"], true);

    let (_, rerun, _) = trop(&args);
    assert_eq!(stdout, rerun, "ladder table is deterministic");
}

#[test]
fn converge_rejects_stretch_values_at_or_below_one() {
    let dir = tempfile::tempdir().unwrap();
    let family = write_fixture(dir.path(), "hyp.viro", HYPERBOLA_FAMILY);
    let (code, stdout, _) = trop(&[
        "converge",
        family.to_str().unwrap(),
        "--ladder",
        "1,10",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 2);
    let s = summary(&stdout);
    assert_eq!(s["ok"], false);
    assert!(
        s["error"].as_str().unwrap().contains("ladder"),
        "error names the offending option: {stdout}"
    );
}

#[test]
fn empty_cloud_requests_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_fixture(dir.path(), "line.cplx", &line_complex());
    let (code, stdout, _) =
        trop(&["amoeba", poly.to_str().unwrap(), "--t", "10", "--k", "0", "--seed", "1"]);
    assert_eq!(code, 2);
    let s = summary(&stdout);
    assert_eq!(s["ok"], false);
    assert!(s["error"].as_str().unwrap().contains("empty cloud"), "{stdout}");
}

#[test]
fn pants_of_the_first_three_plane_curves() {
    let dir = tempfile::tempdir().unwrap();
    // (degree, nodes, internal edges, legs, chi_open, genus, chi_compact)
    let cases: [(i64, u64, u64, u64, i64, i64, i64); 3] = [
        (1, 1, 0, 3, -1, 0, 2),
        (2, 4, 3, 6, -4, 0, 2),
        (3, 9, 9, 9, -9, 1, 0),
    ];
    for (d, nodes, edges, legs, chi_open, genus, chi_compact) in cases {
        let text = if d == 1 { LINE_TROP.to_string() } else { plane_curve(d) };
        let poly = write_fixture(dir.path(), &format!("deg{d}.trop"), &text);
        let (code, stdout, _) = trop(&["pants", poly.to_str().unwrap()]);
        assert_eq!(code, 0, "degree {d}");
        let s = summary(&stdout);
        assert_eq!(s["counts"]["nodes"], nodes, "degree {d}");
        assert_eq!(s["counts"]["internal_edges"], edges, "degree {d}");
        assert_eq!(s["counts"]["legs"], legs, "degree {d}");
        assert_eq!(s["chi_open"], chi_open, "degree {d}");
        assert_eq!(s["genus"], genus, "degree {d}");
        assert_eq!(s["chi_compact"], chi_compact, "degree {d}");
        assert_eq!(s["conjectural"], false, "plane curves are certified");
    }
}

#[test]
fn malformed_input_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_fixture(dir.path(), "bad.trop", "zzz : 0 0\n");
    let (code, stdout, _) = trop(&["corner-locus", poly.to_str().unwrap()]);
    assert_eq!(code, 2);
    let s = summary(&stdout);
    assert_eq!(s["ok"], false);
    let msg = s["error"].as_str().unwrap();
    assert!(msg.contains("line 1"), "diagnostic carries the line: {msg}");

    let (code, stdout, _) = trop(&["corner-locus", dir.path().join("absent.trop").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(summary(&stdout)["ok"], false);
}

#[test]
fn localize_confirms_the_hyperbola_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let family = write_fixture(dir.path(), "hyp.viro", HYPERBOLA_FAMILY);
    let (code, stdout, _) = trop(&[
        "localize",
        family.to_str().unwrap(),
        "--cell",
        "0,0;1,0;0,1",
        "--r",
        "0.5",
        "--epsilon",
        "0.2",
        "--ladder",
        "10,1000000",
        "--k",
        "120",
        "--seed",
        "77",
    ]);
    assert_eq!(code, 0, "{stdout}");
    let s = summary(&stdout);
    assert_eq!(s["passed"], true);
    assert_eq!(s["mean_distances"].as_array().unwrap().len(), 2);
    let center: Vec<f64> =
        s["center"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(center, vec![-1.0, -1.0], "dual vertex of the lower triangle");
}

#[test]
fn moment_lands_the_line_on_its_facet_midpoints() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_fixture(dir.path(), "line.trop", LINE_TROP);
    let (code, stdout, _) =
        trop(&["moment", poly.to_str().unwrap(), "--box", "-4,4", "--step", "0.25"]);
    assert_eq!(code, 0);
    let s = summary(&stdout);
    let landings = s["landings"].as_array().unwrap();
    assert_eq!(landings.len(), 3, "one landing per ray");
    let mut snapped: Vec<Vec<f64>> = landings
        .iter()
        .map(|l| l["snapped"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect())
        .collect();
    snapped.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let expected = [[0.0, 0.5], [0.5, 0.0], [0.5, 0.5]];
    for (got, want) in snapped.iter().zip(expected.iter()) {
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-6, "landing {got:?} vs {want:?}");
        }
    }
    assert!(s["interior_points"].as_u64().unwrap() > 0);
}

#[test]
fn lift_serializes_the_infinite_stretch() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write_fixture(dir.path(), "line.trop", LINE_TROP);
    let csv = dir.path().join("lift.csv");
    let (code, stdout, _) = trop(&[
        "lift",
        poly.to_str().unwrap(),
        "--kind",
        "phase",
        "--k",
        "40",
        "--seed",
        "3",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let s = summary(&stdout);
    assert_eq!(s["t"], "inf", "phase limit lives at infinite stretch");
    assert_eq!(s["kind"], "phase");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("space,n,t,seed\nphase,2,inf,3\n"), "csv header:\n{text}");
}
