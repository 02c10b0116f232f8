use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread;

use symtime::engine::{predict_batch, DistanceDist, DurationDist, SymConfig};
use symtime::format::parse_hypothesis;
use symtime::predictor::wire::{Request, Response};
use symtime::predictor::{BaselinePredictor, HttpPredictor, Predictor, PredictorSpec, Query};
use symtime::TemporalUnit;

/// Serves `connections` HTTP requests with the baseline predictor. When `corrupt` is set the
/// response id is off by one.
fn spawn_server(connections: usize, corrupt: bool) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        let mut baseline = BaselinePredictor::new();
        for stream in listener.incoming().take(connections) {
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut length = 0usize;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end();
                if line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    length = v.trim().parse().unwrap();
                }
            }
            let mut body = vec![0u8; length];
            reader.read_exact(&mut body).unwrap();
            let req: Request = serde_json::from_slice(&body).unwrap();
            let answer = baseline.answer(std::slice::from_ref(&req.query)).unwrap().remove(0);
            let id = if corrupt { req.id + 1 } else { req.id };
            let out = Response::from_answer(id, &answer).to_line();
            write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{out}",
                out.len()
            )
            .unwrap();
        }
    });
    format!("http://{addr}/predict")
}

#[test]
fn http_round_trip_matches_in_process_baseline() {
    let url = spawn_server(3, false);
    let mut http = HttpPredictor::new(&url);
    let story = "Tom bought a bike. He rode to the lake. He slept.";
    let (start, distance) = http.dist("he slept", "Tom bought a bike", story).unwrap();
    let (s2, d2) = BaselinePredictor::new().dist("he slept", "Tom bought a bike", story).unwrap();
    assert_eq!((start, distance), (s2, d2));
    assert_eq!(distance, DistanceDist::one_hot(TemporalUnit::Hours));
    assert_eq!(http.dur("slept").unwrap(), DurationDist::one_hot(TemporalUnit::Hours));
    assert_eq!(http.dur("gazed").unwrap(), DurationDist::one_hot(TemporalUnit::Days));
}

#[test]
fn http_id_mismatch_is_reported() {
    let url = spawn_server(1, true);
    let err = HttpPredictor::new(&url).dur("slept").unwrap_err().to_string();
    assert!(err.contains("does not match") && err.contains("dur(`slept`)"), "{err}");
}

#[test]
fn http_unreachable_names_the_query() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/", listener.local_addr().unwrap());
    drop(listener);
    let err = HttpPredictor::new(&url).dur("slept").unwrap_err().to_string();
    assert!(err.contains("dur(`slept`)") && err.contains(&url), "{err}");
}

#[test]
fn subprocess_command_runs_shell_predictor() {
    let script = r#"cmd:while IFS= read -r line; do id=$(printf '%s' "$line" | sed 's/.*"id":\([0-9]*\).*/\1/'); printf '{"id":%s,"p_before":0.3,"p_after":0.7,"d":[0,0,1,0,0,0,0],"v":[0,0,0,0,0,0,1]}\n' "$id"; done"#;
    let mut p = script.parse::<PredictorSpec>().unwrap().connect().unwrap();
    // start: after; end: dist = 2, dur = 6 -> after
    let hyps = [
        parse_hypothesis("a starts after b.").unwrap(),
        parse_hypothesis("a ends before b.").unwrap(),
        parse_hypothesis("a ends after b.").unwrap(),
    ];
    let items: Vec<_> = hyps.iter().map(|h| (h, "a. b.")).collect();
    let labels = predict_batch(&items, p.as_mut(), &SymConfig::default()).unwrap();
    use symtime::Label::*;
    assert_eq!(labels, vec![Entailment, Contradiction, Entailment]);
}

#[test]
fn subprocess_large_batch_does_not_deadlock() {
    let mut p = "cmd:sed -u 's/.*\"id\":\\([0-9]*\\).*/{\"id\":\\1,\"v\":[0,1,0,0,0,0,0]}/'"
        .parse::<PredictorSpec>()
        .unwrap()
        .connect()
        .unwrap();
    let queries: Vec<Query> = (0..5000)
        .map(|i| Query::Dur {
            event: format!("event number {i} {}", "padding ".repeat(20)),
        })
        .collect();
    let answers = p.answer(&queries).unwrap();
    assert_eq!(answers.len(), 5000);
}

#[test]
fn wire_serve_through_pipes() {
    let input = b"{\"id\":5,\"type\":\"dur\",\"event\":\"slept\"}\nnot json\n";
    let mut out = Vec::new();
    let n = symtime::predictor::wire::serve(&input[..], &mut out, &mut BaselinePredictor::new()).unwrap();
    assert_eq!(n, 2);
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    let first = Response::parse(lines.next().unwrap()).unwrap();
    assert_eq!(first.id, Some(5));
    let second = Response::parse(lines.next().unwrap()).unwrap();
    assert!(second.error.is_some());
}
