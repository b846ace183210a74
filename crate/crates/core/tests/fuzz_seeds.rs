//! Runs the checked-in fuzz corpus through the same invariants the fuzz
//! harnesses assert, so the seeds stay honest without a fuzzer run.

use std::fs;
use std::path::PathBuf;

use moyal::config::RunDescriptor;
use moyal::PhasePoly;

fn corpus(name: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(name);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("missing corpus dir {}: {e}", dir.display()))
        .map(|entry| {
            let entry = entry.unwrap();
            (entry.file_name().into_string().unwrap(), fs::read(entry.path()).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus {name}");
    out
}

#[test]
fn expression_seeds_round_trip_or_error_cleanly() {
    let mut parsed = 0usize;
    for (name, data) in corpus("parse_expr") {
        let text = std::str::from_utf8(&data).unwrap();
        if let Ok(poly) = PhasePoly::parse(text) {
            let back = PhasePoly::parse(&poly.render())
                .unwrap_or_else(|e| panic!("seed {name}: rendered form failed to parse: {e}"));
            assert_eq!(poly, back, "seed {name} changed under round trip");
            parsed += 1;
        }
    }
    assert!(parsed >= 8, "most expression seeds should be valid, got {parsed}");
}

#[test]
fn config_seeds_round_trip_or_error_cleanly() {
    let mut parsed = 0usize;
    for (name, data) in corpus("parse_config") {
        let text = std::str::from_utf8(&data).unwrap();
        if let Ok(desc) = RunDescriptor::from_json(text) {
            let json = serde_json::to_string(&desc).unwrap();
            RunDescriptor::from_json(&json)
                .unwrap_or_else(|e| panic!("seed {name}: serialized form failed to decode: {e}"));
            parsed += 1;
        }
    }
    assert!(parsed >= 9, "most config seeds should be valid, got {parsed}");
}
