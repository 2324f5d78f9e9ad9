//! Golden-file regression tests for the regenerated determining-equation
//! system. The stored files are produced once by the pipeline (run the
//! ignored `regenerate_golden_files` test with `--ignored`) and every later
//! run must reproduce them exactly, both as parsed expressions and byte for
//! byte in canonical form.

use sha2::{Digest, Sha256};
use std::fs;
use std::path::PathBuf;
use superint::determining::*;
use superint::expr::{render, sexpr, Expr, SymbolTable};

fn golden_dir() -> PathBuf {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests");
    path.push("golden");
    path.push("determining");
    path
}

fn artifacts() -> Vec<(&'static str, Expr)> {
    let ks = killing_solution(&SymbolTable::standard()).unwrap();
    let out = derive(&ks).unwrap();
    let linear = out.linear_compatibility().unwrap();
    let nonlinear = out.nonlinear_compatibility().unwrap();
    let separable = separable_compatibility(&linear).unwrap();
    let odes = separable_reduction(&separable).unwrap();
    let mut list = Vec::new();
    let labels = ["d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9"];
    for (n, label) in labels.iter().enumerate() {
        list.push((*label, out.equation(n + 1).clone()));
    }
    list.push(("linear_compatibility", linear));
    list.push(("nonlinear_compatibility", nonlinear));
    list.push(("separable_compatibility", separable));
    let [ode_v1_a, ode_v1_b, ode_v2_a, ode_v2_b] = odes;
    list.push(("ode_v1_a", ode_v1_a));
    list.push(("ode_v1_b", ode_v1_b));
    list.push(("ode_v2_a", ode_v2_a));
    list.push(("ode_v2_b", ode_v2_b));
    list
}

fn leading_listing() -> String {
    let ks = killing_solution(&SymbolTable::standard()).unwrap();
    let mut lines = String::new();
    for (j, f) in ks.all().iter().enumerate() {
        lines.push_str(&format!("f{}0 = {}\n", j, render::plain(f)));
    }
    lines
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{:02x}", b))
        .collect()
}

fn golden_names() -> Vec<String> {
    let mut names: Vec<String> = artifacts()
        .iter()
        .map(|(name, _)| format!("{name}.sexpr"))
        .collect();
    names.push("leading_coefficients.txt".to_string());
    names.sort();
    names
}

#[test]
fn equations_match_golden_files() {
    for (name, expr) in artifacts() {
        let path = golden_dir().join(format!("{name}.sexpr"));
        let stored = fs::read_to_string(&path).unwrap_or_else(|e| {
            panic!(
                "missing golden file {path:?} ({e}); run the ignored \
                 regenerate_golden_files test to create it"
            )
        });
        let parsed = sexpr::parse(stored.trim()).unwrap();
        assert!(
            parsed == expr,
            "{name} differs from its golden file as an expression"
        );
        assert_eq!(
            stored.trim(),
            sexpr::print(&expr),
            "{name} differs from its golden file byte for byte"
        );
    }
}

#[test]
fn leading_coefficients_match_golden_listing() {
    let path = golden_dir().join("leading_coefficients.txt");
    let stored = fs::read_to_string(&path).unwrap_or_else(|e| {
        panic!(
            "missing golden file {path:?} ({e}); run the ignored \
             regenerate_golden_files test to create it"
        )
    });
    assert_eq!(stored, leading_listing());
}

#[test]
fn manifest_hashes_match_golden_files() {
    let manifest = fs::read_to_string(golden_dir().join("MANIFEST.sha256")).unwrap();
    let mut listed = Vec::new();
    for line in manifest.lines() {
        let (hash, name) = line.split_once("  ").unwrap();
        let bytes = fs::read(golden_dir().join(name)).unwrap();
        assert_eq!(hash, sha256_hex(&bytes), "hash mismatch for {name}");
        listed.push(name.to_string());
    }
    assert_eq!(listed, golden_names());
}

#[test]
#[ignore]
fn regenerate_golden_files() {
    let dir = golden_dir();
    fs::create_dir_all(&dir).unwrap();
    for (name, expr) in artifacts() {
        let mut text = sexpr::print(&expr);
        text.push('\n');
        fs::write(dir.join(format!("{name}.sexpr")), text).unwrap();
    }
    fs::write(dir.join("leading_coefficients.txt"), leading_listing()).unwrap();
    let mut manifest = String::new();
    for name in golden_names() {
        let bytes = fs::read(dir.join(&name)).unwrap();
        manifest.push_str(&format!("{}  {}\n", sha256_hex(&bytes), name));
    }
    fs::write(dir.join("MANIFEST.sha256"), manifest).unwrap();
}
