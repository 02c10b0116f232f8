#![no_main]

use libfuzzer_sys::fuzz_target;
use symtime::tex::{distance_between, find_temporal_expressions, inherit, parse_temporal_expression};

fuzz_target!(|data: &str| {
    let tokens: Vec<&str> = data.split_whitespace().collect();
    let first = parse_temporal_expression(&tokens);
    let all = find_temporal_expressions(&tokens);
    assert_eq!(first, all.first().copied());
    for w in all.windows(2) {
        let filled = inherit(&w[0], &w[1]);
        let _ = distance_between(&w[0], &filled);
    }
});
