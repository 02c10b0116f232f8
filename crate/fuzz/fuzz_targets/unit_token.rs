#![no_main]

use libfuzzer_sys::fuzz_target;
use symtime::TemporalUnit;

fuzz_target!(|data: &str| {
    if let Some(u) = TemporalUnit::parse_token(data) {
        assert_eq!(u.token(), data);
    }
    if let Ok(u) = data.parse::<TemporalUnit>() {
        assert_eq!(u.name().parse::<TemporalUnit>().ok(), Some(u));
    }
});
