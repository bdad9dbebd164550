//! Replays the checked-in fuzz corpus through the same properties the fuzz
//! targets assert, so the seeds stay meaningful on stable toolchains.

use std::path::PathBuf;

use stablab::arrange::Arrangement;
use stablab::cli::parse_config;
use stablab::ring::text::{ratfunc_from_json, ratfunc_to_json};
use stablab::ring::{parse_poly, parse_ratfunc};
use stablab::Error;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), String::from_utf8_lossy(&bytes).into_owned())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn poly_seeds() {
    for (name, text) in seeds("parse_poly") {
        if let Ok(p) = parse_poly(&text) {
            let back = parse_poly(&p.to_string()).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, p, "{name}");
        }
        if let Ok(f) = parse_ratfunc(&text) {
            assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f, "{name}");
        }
    }
}

#[test]
fn ratfunc_json_seeds() {
    for (name, text) in seeds("parse_ratfunc_json") {
        if let Ok(f) = ratfunc_from_json(&text) {
            assert_eq!(ratfunc_from_json(&ratfunc_to_json(&f)).unwrap(), f, "{name}");
        }
    }
}

#[test]
fn config_seeds() {
    for (name, text) in seeds("parse_config") {
        match parse_config(&text) {
            Ok(_) | Err(Error::Usage(_)) => {}
            Err(Error::Parse { line, .. }) => assert!(line >= 1, "{name}"),
            Err(e) => panic!("{name}: unexpected {e:?}"),
        }
    }
}

#[test]
fn arrangement_seeds() {
    for (name, text) in seeds("parse_arrangement_json") {
        if let Ok(a) = Arrangement::from_json(&text) {
            assert_eq!(Arrangement::from_json(&a.to_json()).unwrap(), a, "{name}");
        }
    }
}
