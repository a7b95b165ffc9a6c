use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

use selfsim_cli::corpus::{all_entries, entry, mismatches};
use selfsim_cli::ifs_file::{parse_ifs_str, IfsFile};
use selfsim_cli::report::Report;
use selfsim_core::{Attractor64, Certificate, Outcome};

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).env_remove("SELFSIM_BUDGET").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report_of(out: &Output) -> Report {
    Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn exit_codes_follow_the_requested_check() {
    assert_eq!(code(&selfsim(&["analyze", "--corpus", "gasket", "--check", "osc", "--levels", "2"])), 0);
    assert_eq!(code(&selfsim(&["analyze", "--corpus", "duplicate_cantor", "--check", "wosc"])), 1);
    assert_eq!(code(&selfsim(&["analyze", "--corpus", "mattila", "--project", "0.7", "--check", "wosc"])), 2);
    let out = selfsim(&["analyze", "--corpus", "koch"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown corpus entry"));
}

#[test]
fn invalid_files_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"dim": 1, "label": "x", "maps": [{"scale": 1.1, "translation": [0]}, {"scale": 0.5, "translation": [1]}]}"#,
    );
    let out = selfsim(&["analyze", "--ifs", &bad]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("scale out of (0,1)") && err.contains("maps[0].scale"), "{err}");

    let broken = write(dir.path(), "broken.json", "{\"dim\": 1,\n\"maps\": [\n{\"scale\": 0.5,,}]}");
    let err = String::from_utf8_lossy(&selfsim(&["analyze", "--ifs", &broken]).stderr).to_string();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn cantor_file_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "cantor.json",
        r#"{"dim": 1, "label": "cantor", "maps": [
            {"scale": 0.3333333333333333, "translation": [0]},
            {"scale": 0.3333333333333333, "translation": [0.6666666666666666]}]}"#,
    );
    let out = selfsim(&["analyze", "--ifs", &file, "--levels", "6"]);
    assert_eq!(code(&out), 0);
    let r = report_of(&out);
    let alpha = 2f64.ln() / 3f64.ln();
    assert!((r.dimensions.alpha - alpha).abs() < 1e-9);
    assert!(r.dimensions.dim3.as_ref().unwrap().verification.passed);
    let dim4 = r.dimensions.dim4.as_ref().unwrap();
    assert!((dim4.lower - alpha).abs() < 1e-9 && (dim4.upper - alpha).abs() < 1e-9);
    let sep = r.separation.unwrap();
    assert_eq!(sep.irreducible.len(), 6);
    assert!(sep.irreducible.iter().all(|v| v.is_holds()));
}

#[test]
fn duplicate_cantor_reports_a_subcover_witness() {
    let r = report_of(&selfsim(&["analyze", "--corpus", "duplicate_cantor"]));
    let wosc = &r.separation.unwrap().wosc;
    assert_eq!(wosc.outcome, Outcome::Fails);
    let w = serde_json::to_value(wosc.witness.as_ref().unwrap()).unwrap();
    assert_eq!(w["kind"], "subcover");
    assert_eq!(w["words"], serde_json::json!(["1", "3"]));
}

#[test]
fn dim_selection_trims_the_report() {
    let r = report_of(&selfsim(&["analyze", "--corpus", "cantor", "--dim", "sim"]));
    assert!(r.separation.is_none() && r.dimensions.dim3.is_none() && r.dimensions.dim4.is_none());
    assert!(r.dimensions.box_estimate.is_none());
    let r = report_of(&selfsim(&["analyze", "--corpus", "cantor", "--dim", "box", "--check", "irreducible"]));
    assert!(r.dimensions.box_estimate.is_some() && r.dimensions.dim4.is_none());
    assert!(r.separation.is_some());
    assert_eq!(r.request.outcome, Some(Outcome::Holds));
}

#[test]
fn budget_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(["analyze", "--corpus", "gasket", "--levels", "4"])
        .env("SELFSIM_BUDGET", "20")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report_of(&out);
    assert_eq!(r.config.budget, 20);
    let sep = r.separation.unwrap();
    assert!(sep.irreducible[..2].iter().all(|v| v.is_holds()));
    assert!(sep.irreducible[2..].iter().all(|v| v.is_inconclusive() && v.notes.iter().any(|n| n.contains("budget"))));
}

#[test]
fn reports_round_trip() {
    for e in all_entries() {
        let out = selfsim(&["analyze", "--corpus", &e.name, "--levels", "3"]);
        let text = String::from_utf8(out.stdout).unwrap();
        let again = Report::from_json(&text).unwrap().to_json();
        assert_eq!(text, again, "{}", e.name);
    }
}

#[test]
fn corpus_files_round_trip_bit_exactly() {
    for e in all_entries() {
        let out = selfsim(&["corpus", &e.name]);
        assert_eq!(code(&out), 0);
        let back = parse_ifs_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
        for (f, g) in e.ifs.maps().iter().zip(back.maps()) {
            assert_eq!(f.scale().to_bits(), g.scale().to_bits());
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(f.orthogonal()), bits(g.orthogonal()));
            assert_eq!(bits(f.translation()), bits(g.translation()));
        }
        assert_eq!(IfsFile::from_ifs(&back), IfsFile::from_ifs(&e.ifs));
    }
}

#[test]
fn corpus_expectations_hold() {
    for e in all_entries() {
        let r = report_of(&selfsim(&["analyze", "--corpus", &e.name]));
        let bad = mismatches(&e, &r);
        assert!(bad.is_empty(), "{bad:?}");
    }
}

fn render(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.svg");
    let mut argv = vec!["analyze", "--dim", "sim", "--render", path.to_str().unwrap()];
    argv.extend(args);
    let out = selfsim(&argv);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read_to_string(path).unwrap()
}

fn attr(element: &str, name: &str) -> f64 {
    let start = element.find(&format!(" {name}=\"")).unwrap() + name.len() + 3;
    let end = start + element[start..].find('"').unwrap();
    element[start..end].parse().unwrap()
}

#[test]
fn gasket_render() {
    let svg = render(&["--corpus", "gasket", "--levels", "5"]);
    let circles: Vec<&str> = svg.lines().filter(|l| l.starts_with("<circle")).collect();
    assert_eq!(circles.len(), 243);
    let att = Attractor64::new(entry("gasket").unwrap().ifs).unwrap();
    for c in &circles {
        assert!((attr(c, "r") - att.root_radius() / 32.0).abs() < 1e-15, "{c}");
    }
    let digest: String = Sha256::digest(svg.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(digest, GASKET_SVG_SHA256);
}

const GASKET_SVG_SHA256: &str = "ae2e2f1e0b4d21352197cd38df2c4db722b03418aea2e0b8a8e1b7fb711b60b1";

#[test]
fn cantor_render() {
    let svg = render(&["--corpus", "cantor", "--levels", "3"]);
    let level3: Vec<&str> =
        svg.lines().skip_while(|l| !l.contains("data-level=\"3\"")).filter(|l| l.starts_with("<rect")).collect();
    assert_eq!(level3.len(), 8);
    let mut left: Vec<f64> = level3.iter().map(|r| attr(r, "x")).collect();
    left.sort_by(f64::total_cmp);
    for r in &level3 {
        assert!((attr(r, "width") - 1.0 / 27.0).abs() < 1e-15, "{r}");
    }
    assert!((left[1] - 2.0 / 27.0).abs() < 1e-15 && (left[7] - 26.0 / 27.0).abs() < 1e-15);
    assert_eq!(svg.lines().filter(|l| l.starts_with("<rect")).count(), 2 + 4 + 8);
}

#[test]
fn space_cannot_be_rendered() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "cube.json",
        r#"{"dim": 3, "maps": [{"scale": 0.5, "translation": [0, 0, 0]}, {"scale": 0.5, "translation": [0.5, 0.5, 0.5]}]}"#,
    );
    let svg = dir.path().join("x.svg");
    let out = selfsim(&["analyze", "--ifs", &file, "--render", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rendering supports d ≤ 2"));
}

#[test]
fn open_set_certificate_in_report() {
    let r = report_of(&selfsim(&["analyze", "--corpus", "gasket", "--levels", "2", "--check", "sosc"]));
    let sep = r.separation.unwrap();
    assert!(
        matches!(sep.osc.certificate, Some(Certificate::OpenSet { ref candidate, .. }) if candidate == "convex hull")
    );
    assert_eq!(r.request.outcome, Some(Outcome::Holds));
}
