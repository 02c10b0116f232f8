#![no_main]

use libfuzzer_sys::fuzz_target;
use symtime::eval::load_dataset;

fuzz_target!(|data: &[u8]| {
    let _ = load_dataset(data, false);
});
