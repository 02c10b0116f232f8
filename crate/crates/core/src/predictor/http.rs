use std::time::Duration;

use super::wire::{Request, Response};
use super::{Answer, Predictor, Query};
use crate::error::{Error, Result};

/// A predictor behind a single HTTP endpoint. Each request line is POSTed as the body and
/// the response body is one response line.
pub struct HttpPredictor {
    url: String,
    agent: ureq::Agent,
    next_id: u64,
}

impl HttpPredictor {
    pub fn new(url: &str) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout_connect(Duration::from_secs(10))
            .timeout(Duration::from_secs(300))
            .build();
        HttpPredictor {
            url: url.to_string(),
            agent,
            next_id: 1,
        }
    }

    fn post(&self, req: &Request) -> Result<Response> {
        let fail = |message: String| Error::Predictor {
            id: Some(req.id),
            message: format!("{} via {}: {message}", req.query.describe(), self.url),
        };
        let body = self
            .agent
            .post(&self.url)
            .set("Content-Type", "application/json")
            .send_string(&req.to_line())
            .map_err(|e| fail(e.to_string()))?
            .into_string()
            .map_err(|e| fail(e.to_string()))?;
        let line = body.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
        let resp = Response::parse(line).map_err(|e| fail(e.to_string()))?;
        if resp.id != Some(req.id) {
            return Err(fail(format!("response id {:?} does not match", resp.id)));
        }
        Ok(resp)
    }
}

impl Predictor for HttpPredictor {
    fn answer(&mut self, queries: &[Query]) -> Result<Vec<Answer>> {
        queries
            .iter()
            .map(|q| {
                let req = Request {
                    id: self.next_id,
                    query: q.clone(),
                };
                self.next_id += 1;
                self.post(&req)?.into_answer(q)
            })
            .collect()
    }
}
