#![no_main]

use libfuzzer_sys::fuzz_target;
use symtime::predictor::wire::{recover_id, Request, Response};
use symtime::predictor::Query;

fuzz_target!(|data: &str| {
    let _ = recover_id(data);
    if let Ok(req) = serde_json::from_str::<Request>(data) {
        let _ = req.to_line();
    }
    if let Ok(resp) = Response::parse(data) {
        let _ = resp.to_line();
        let dist = Query::Dist {
            event_a: "a".into(),
            event_b: "b".into(),
            context: "a. b.".into(),
        };
        let _ = resp.clone().into_answer(&dist);
        let _ = resp.into_answer(&Query::Dur { event: "a".into() });
    }
});
