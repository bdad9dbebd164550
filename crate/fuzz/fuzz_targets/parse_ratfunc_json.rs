#![no_main]

use libfuzzer_sys::fuzz_target;
use stablab::ring::text::{ratfunc_from_json, ratfunc_to_json};

fuzz_target!(|input: &str| {
    if input.len() > 1024 {
        return;
    }
    if let Ok(f) = ratfunc_from_json(input) {
        let json = ratfunc_to_json(&f);
        assert_eq!(ratfunc_from_json(&json).expect("own output decodes"), f);
    }
});
