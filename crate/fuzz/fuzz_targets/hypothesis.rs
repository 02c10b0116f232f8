#![no_main]

use libfuzzer_sys::fuzz_target;
use symtime::format::{compose_hypothesis, parse_hypothesis};

fuzz_target!(|data: &str| {
    if let Ok(h) = parse_hypothesis(data) {
        let text = compose_hypothesis(&h);
        assert_eq!(parse_hypothesis(&text).unwrap(), h);
    }
});
