#![no_main]

//! Job files never panic the parser, and errors carry a position or a usage
//! message rather than anything else.

use libfuzzer_sys::fuzz_target;
use stablab::cli::parse_config;
use stablab::Error;

fuzz_target!(|input: &str| {
    if input.len() > 4096 {
        return;
    }
    match parse_config(input) {
        Ok(job) => {
            let _ = serde_json::to_string(&job);
        }
        Err(Error::Parse { line, .. }) => assert!(line >= 1),
        Err(Error::Usage(_)) => {}
        Err(e) => panic!("unexpected error kind: {e:?}"),
    }
});
