use ospquant::cli::{run, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_RESONANT};
use ospquant::geom::{SymbolField, Weights};
use ospquant::quantizer::symbol_basis;
use ospquant::rational::rat;
use ospquant::weyl::{principal_symbol, DiffOperator};
use ospquant::SpaceSignature;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("ospq").chain(args.iter().copied()), &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

fn write_symbol(dir: &tempfile::TempDir, s: &SymbolField) -> String {
    let p = dir.path().join("symbol.json");
    std::fs::write(&p, s.to_json().to_string()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn quantize_then_principal_symbol_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    let sig = SpaceSignature::new(1, 1, 1);
    let w = Weights::new(rat(1, 2), rat(1, 3));
    let s = symbol_basis(sig, &w, 2, 1)
        .into_iter()
        .step_by(7)
        .fold(SymbolField::zero(sig, w.clone()), |acc, t| acc.add(&t));
    let input = write_symbol(&dir, &s);
    let out = dir.path().join("q.json");
    let (code, _, err) = call(&["quantize", "--in", &input, "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{err}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let op = DiffOperator::from_json(&v["operator"]).unwrap();
    assert_eq!(principal_symbol(&op, 2).unwrap(), s);
    assert!(v["residuals"].as_array().unwrap().iter().all(|r| r["norm"] == "0/1"));
}

#[test]
fn resonant_quantize_exits_3_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let sig = SpaceSignature::new(2, 1, 0);
    let w = Weights::new(rat(1, 2), rat(1, 1));
    let s = symbol_basis(sig, &w, 1, 1).swap_remove(2);
    let input = write_symbol(&dir, &s);
    let (code, _, err) = call(&["quantize", "--in", &input]);
    assert_eq!(code, EXIT_RESONANT);
    assert!(err.contains("\"k\":1") && err.contains("\"l\":0"), "{err}");
    // overriding delta makes it non-resonant
    let (code, out, _) = call(&["quantize", "--in", &input, "--delta", "1/3"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("\"operator\""));
}

#[test]
fn verify_report_formats() {
    let (code, out, _) = call(&["verify", "--p", "1", "--q", "0", "--r", "1", "--format", "json"]);
    assert_eq!(code, EXIT_PASS);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failed"], 0);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["checkName"].is_string() && c["anchor"].is_string());
        assert_eq!(c["status"], "pass");
    }
    let (code, out, _) = call(&["verify", "--p", "2", "--q", "0", "--r", "1", "--format", "csv", "--sample", "6"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("checkName,anchor,status,cases,witness"));
    assert!(out.contains("d=0 degree-2 map"));
    let (code, out, _) = call(&["verify", "--p", "2", "--q", "1", "--r", "0", "--delta", "1", "--max-degree", "1"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("PASS  degree 1: resonant refusal"));
    assert_ne!(EXIT_CHECK_FAILED, EXIT_PASS);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--p", "2", "--q", "2", "--r", "1", "--sample", "5", "--seed", "9", "--format", "csv", "--max-degree", "1"];
    let strip = |s: String| s.lines().map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(strip(call(&args).1), strip(call(&args).1));
}

#[test]
fn spectrum_json_degree_zero_row() {
    let (_, out, _) = call(&["spectrum", "--p", "3", "--q", "0", "--r", "0", "--delta", "1/3", "--format", "json", "--max-degree", "0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    // d²δ(1-δ) with d = 3
    assert_eq!(v[0]["alpha"], "2/1");
}
