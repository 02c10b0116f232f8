#![no_main]

use libfuzzer_sys::fuzz_target;
use symtime::extract::{extract_document, load_corpus, ExtractMode};

fuzz_target!(|data: &[u8]| {
    if let Ok((docs, _)) = load_corpus(data, false) {
        for doc in &docs {
            let _ = extract_document(doc, ExtractMode::Both);
        }
    }
});
