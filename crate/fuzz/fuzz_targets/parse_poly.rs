#![no_main]

//! Canonical text is a fixed point: whatever parses prints to a string that
//! parses back to the same polynomial, and printing again changes nothing.

use libfuzzer_sys::fuzz_target;
use stablab::ring::{parse_poly, parse_ratfunc};

fuzz_target!(|input: &str| {
    if input.len() > 512 {
        return;
    }
    if let Ok(p) = parse_poly(input) {
        let text = p.to_string();
        let back = parse_poly(&text).expect("canonical text parses");
        assert_eq!(back, p);
        assert_eq!(back.to_string(), text);
    }
    if let Ok(f) = parse_ratfunc(input) {
        let back = parse_ratfunc(&f.to_string()).expect("canonical text parses");
        assert_eq!(back, f);
    }
});
