//! Replays the checked-in fuzz seeds through the parsers.

use std::fs;
use std::path::{Path, PathBuf};

use subharm::scenario::{parse_family, parse_overrides, parse_scenario};

const REJECTED: &[&str] = &[
    "truncated.json",
    "unknown_field.json",
    "samples_unsorted.json",
    "missing_field.json",
    "bad_value.txt",
    "unknown_key.txt",
    "no_equals.txt",
];

fn seeds(target: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

fn check<T, E: std::fmt::Display>(path: &Path, result: Result<T, E>) {
    let name = path.file_name().unwrap().to_str().unwrap();
    let rejected = REJECTED.contains(&name);
    match result {
        Ok(_) => assert!(!rejected, "{name} should be rejected"),
        Err(e) => {
            assert!(rejected, "{name}: {e}");
            assert!(!e.to_string().is_empty());
        }
    }
}

#[test]
fn scenario_seeds() {
    for p in seeds("scenario") {
        check(&p, parse_scenario(&fs::read_to_string(&p).unwrap()));
    }
}

#[test]
fn family_seeds() {
    for p in seeds("family") {
        check(&p, parse_family(&fs::read_to_string(&p).unwrap()));
    }
}

#[test]
fn override_seeds() {
    for p in seeds("overrides") {
        let text = fs::read_to_string(&p).unwrap();
        let items: Vec<&str> = text.split(',').collect();
        check(&p, parse_overrides(&items));
    }
}

#[test]
fn shipped_scenarios_are_seeded() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for e in fs::read_dir(dir).unwrap() {
        let name = e.unwrap().file_name();
        assert!(
            seeds("scenario")
                .iter()
                .any(|p| p.file_name() == Some(&name)),
            "{name:?} missing from the scenario corpus"
        );
    }
}
