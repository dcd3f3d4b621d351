//! Replays the checked-in fuzz seeds through the fuzz targets' assertions.

use std::fs;
use std::path::PathBuf;

use permword::graph::{graph_from_json, graph_to_json};
use permword::word::normal_form;
use permword::{AllowedLengths, Degrees, Permutation, Word};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_word_seeds() {
    let d: Degrees = "3,4,inf".parse().unwrap();
    for s in seeds("parse_word") {
        let w: Word = s.parse().unwrap_or_else(|e| panic!("{s:?}: {e}"));
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        let _ = normal_form(&w, &d);
    }
}

#[test]
fn parse_allowed_lengths_seeds() {
    for s in seeds("parse_allowed_lengths") {
        match s.parse::<AllowedLengths>() {
            Ok(a) => assert_eq!(a.to_string().parse::<AllowedLengths>().unwrap(), a),
            Err(_) => assert!(s.parse::<Degrees>().is_ok(), "{s:?}"),
        }
    }
}

#[test]
fn parse_cycle_notation_seeds() {
    for s in seeds("parse_cycle_notation") {
        let p = Permutation::parse_cycles(&s).unwrap();
        assert_eq!(Permutation::parse_cycles(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn graph_json_seeds() {
    for s in seeds("graph_json") {
        let g = graph_from_json(&s).unwrap();
        let back = serde_json::to_string(&graph_to_json(&g)).unwrap();
        assert_eq!(graph_from_json(&back).unwrap(), g);
    }
}
