//! Line-delimited JSON protocol between the engine and external predictors.
//!
//! ```text
//! {"id": 1, "type": "dist", "event_a": "...", "event_b": "...", "context": "..."}
//!   -> {"id": 1, "p_before": 0.8, "p_after": 0.2, "d": [7 floats]}
//! {"id": 2, "type": "dur", "event": "..."}
//!   -> {"id": 2, "v": [7 floats]}
//! failures
//!   -> {"id": 2, "error": "..."}        (id is null when the request was unreadable)
//! ```
//!
//! Vectors are renormalized when within 1e-6 of summing to one and rejected otherwise.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{Answer, Predictor, Query};
use crate::engine::{DistanceDist, DurationDist, StartOrderProbs};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: u64,
    #[serde(flatten)]
    pub query: Query,
}

impl Request {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("requests always serialize")
    }
}

/// A response as it appears on the wire, before interpretation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub id: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_before: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_after: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Response {
    pub fn parse(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Predictor {
            id: None,
            message: format!("unreadable response `{}`: {e}", truncate(line)),
        })
    }

    pub fn from_answer(id: u64, answer: &Answer) -> Self {
        match answer {
            Answer::Dist { start, distance } => Response {
                id: Some(id),
                p_before: Some(start.p_before()),
                p_after: Some(start.p_after()),
                d: Some(distance.probs().to_vec()),
                ..Default::default()
            },
            Answer::Dur { duration } => Response {
                id: Some(id),
                v: Some(duration.probs().to_vec()),
                ..Default::default()
            },
        }
    }

    pub fn error(id: Option<u64>, message: impl Into<String>) -> Self {
        Response {
            id,
            error: Some(message.into()),
            ..Default::default()
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("responses always serialize")
    }

    /// Interprets the response as the answer to `query`.
    pub fn into_answer(self, query: &Query) -> Result<Answer> {
        let fail = |message: String| Error::Predictor {
            id: self.id,
            message: format!("{}: {message}", query.describe()),
        };
        if let Some(err) = &self.error {
            return Err(fail(format!("predictor reported `{err}`")));
        }
        let answer = match query {
            Query::Dist { .. } => {
                let (Some(pb), Some(pa), Some(d)) = (self.p_before, self.p_after, self.d.as_deref()) else {
                    return Err(fail("dist response needs p_before, p_after and d".into()));
                };
                Answer::Dist {
                    start: StartOrderProbs::renormalized(pb, pa).map_err(|e| fail(e.to_string()))?,
                    distance: DistanceDist::from_slice(d).map_err(|e| fail(e.to_string()))?,
                }
            }
            Query::Dur { .. } => {
                let Some(v) = self.v.as_deref() else {
                    return Err(fail("dur response needs v".into()));
                };
                Answer::Dur {
                    duration: DurationDist::from_slice(v).map_err(|e| fail(e.to_string()))?,
                }
            }
        };
        Ok(answer)
    }
}

fn truncate(line: &str) -> &str {
    match line.char_indices().nth(200) {
        Some((i, _)) => &line[..i],
        None => line,
    }
}

/// Best-effort id recovery from a request line that did not parse.
pub fn recover_id(line: &str) -> Option<u64> {
    serde_json::from_str::<serde_json::Value>(line).ok()?.get("id")?.as_u64()
}

/// Answers protocol requests from `input` on `output` until end of input.
///
/// Every non-blank line gets exactly one response; bad lines get an error response and do
/// not stop the loop.
pub fn serve<R: BufRead, W: Write>(input: R, mut output: W, predictor: &mut dyn Predictor) -> Result<usize> {
    let mut served = 0;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = match serde_json::from_str::<Request>(&line) {
            Ok(req) => match predictor.answer(std::slice::from_ref(&req.query)) {
                Ok(mut answers) if answers.len() == 1 => Response::from_answer(req.id, &answers.remove(0)),
                Ok(_) => Response::error(Some(req.id), "predictor returned no answer"),
                Err(e) => Response::error(Some(req.id), e.to_string()),
            },
            Err(e) => Response::error(recover_id(&line), format!("bad request: {e}")),
        };
        writeln!(output, "{}", response.to_line())?;
        output.flush()?;
        served += 1;
    }
    Ok(served)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictor::BaselinePredictor;

    #[test]
    fn request_layout() {
        let req = Request {
            id: 3,
            query: Query::Dur { event: "slept".into() },
        };
        assert_eq!(req.to_line(), r#"{"id":3,"type":"dur","event":"slept"}"#);
        let req = Request {
            id: 4,
            query: Query::Dist {
                event_a: "a".into(),
                event_b: "b".into(),
                context: "c".into(),
            },
        };
        assert_eq!(
            req.to_line(),
            r#"{"id":4,"type":"dist","event_a":"a","event_b":"b","context":"c"}"#
        );
        assert_eq!(serde_json::from_str::<Request>(&req.to_line()).unwrap(), req);
    }

    #[test]
    fn response_interpretation() {
        let dist = Query::Dist {
            event_a: "a".into(),
            event_b: "b".into(),
            context: "c".into(),
        };
        let ok = Response::parse(r#"{"id":1,"p_before":0.7,"p_after":0.3000001,"d":[0,1,0,0,0,0,0]}"#).unwrap();
        match ok.into_answer(&dist).unwrap() {
            Answer::Dist { start, .. } => assert!((start.p_before() + start.p_after() - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let off = Response::parse(r#"{"id":1,"p_before":0.7,"p_after":0.4,"d":[0,1,0,0,0,0,0]}"#).unwrap();
        assert!(off.into_answer(&dist).is_err());
        let short = Response::parse(r#"{"id":1,"p_before":0.7,"p_after":0.3,"d":[1]}"#).unwrap();
        assert!(short.into_answer(&dist).is_err());
        let err = Response::parse(r#"{"id":9,"error":"model exploded"}"#).unwrap();
        let msg = err.into_answer(&dist).unwrap_err().to_string();
        assert!(msg.contains("request 9") && msg.contains("model exploded") && msg.contains("dist(`a`, `b`)"), "{msg}");
        assert!(Response::parse("{\"id\":1,\"v\":[NaN]}").is_err());
        let null_id = Response::parse(r#"{"id":null,"error":"bad"}"#).unwrap();
        assert_eq!(null_id.id, None);
    }

    #[test]
    fn serve_answers_every_line() {
        let input = concat!(
            r#"{"id":1,"type":"dur","event":"slept"}"#,
            "\n",
            "garbage\n",
            "\n",
            r#"{"id":7,"type":"nope"}"#,
            "\n",
            r#"{"id":2,"type":"dist","event_a":"x","event_b":"y","context":"x. y."}"#,
            "\n"
        );
        let mut out = Vec::new();
        let n = serve(input.as_bytes(), &mut out, &mut BaselinePredictor::new()).unwrap();
        assert_eq!(n, 4);
        let lines: Vec<Response> = String::from_utf8(out)
            .unwrap()
            .lines()
            .map(|l| Response::parse(l).unwrap())
            .collect();
        assert_eq!(lines[0].id, Some(1));
        assert!(lines[0].v.is_some());
        assert_eq!((lines[1].id, lines[1].error.is_some()), (None, true));
        assert_eq!((lines[2].id, lines[2].error.is_some()), (Some(7), true));
        assert_eq!(lines[3].id, Some(2));
        assert_eq!(lines[3].d.as_ref().map(Vec::len), Some(7));
    }
}
