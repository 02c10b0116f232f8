#![no_main]

use libfuzzer_sys::fuzz_target;
use symtime::annotate::fallback_annotate;
use symtime::extract::{extract_document, ExtractMode};

fuzz_target!(|data: &str| {
    let doc = fallback_annotate("fuzz", data);
    let _ = extract_document(&doc, ExtractMode::Both);
});
