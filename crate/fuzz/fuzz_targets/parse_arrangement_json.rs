#![no_main]

use libfuzzer_sys::fuzz_target;
use stablab::arrange::Arrangement;

fuzz_target!(|input: &str| {
    if input.len() > 2048 {
        return;
    }
    if let Ok(a) = Arrangement::from_json(input) {
        let back = Arrangement::from_json(&a.to_json()).expect("own output decodes");
        assert_eq!(back, a);
    }
});
