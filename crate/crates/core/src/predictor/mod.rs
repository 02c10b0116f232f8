//! Probability sources for the engine.
//!
//! A predictor answers two kinds of query: start order plus distance for an event pair in
//! context, and duration for a single event. [`BaselinePredictor`] answers in-process;
//! [`SubprocessPredictor`] and [`HttpPredictor`] speak the line-delimited JSON protocol
//! in [`wire`].

mod baseline;
mod http;
mod subprocess;
pub mod wire;

pub use baseline::BaselinePredictor;
pub use http::HttpPredictor;
pub use subprocess::SubprocessPredictor;

use serde::{Deserialize, Serialize};

use crate::engine::{DistanceDist, DurationDist, StartOrderProbs};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Query {
    /// Start order of `event_a` against `event_b` in `context`, plus the gap between them.
    Dist {
        event_a: String,
        event_b: String,
        context: String,
    },
    /// How long `event` lasts.
    Dur { event: String },
}

impl Query {
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Dist { .. } => "dist",
            Query::Dur { .. } => "dur",
        }
    }

    /// Short human-readable description for error messages.
    pub fn describe(&self) -> String {
        match self {
            Query::Dist { event_a, event_b, .. } => format!("dist(`{event_a}`, `{event_b}`)"),
            Query::Dur { event } => format!("dur(`{event}`)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Answer {
    Dist {
        start: StartOrderProbs,
        distance: DistanceDist,
    },
    Dur {
        duration: DurationDist,
    },
}

impl Answer {
    pub fn kind(&self) -> &'static str {
        match self {
            Answer::Dist { .. } => "dist",
            Answer::Dur { .. } => "dur",
        }
    }
}

/// Something that can answer queries. Answers come back in query order.
pub trait Predictor: Send {
    fn answer(&mut self, queries: &[Query]) -> Result<Vec<Answer>>;

    fn dist(&mut self, event_a: &str, event_b: &str, context: &str) -> Result<(StartOrderProbs, DistanceDist)> {
        let query = Query::Dist {
            event_a: event_a.into(),
            event_b: event_b.into(),
            context: context.into(),
        };
        match self.answer(std::slice::from_ref(&query))?.pop() {
            Some(Answer::Dist { start, distance }) => Ok((start, distance)),
            other => Err(mismatch(&query, other)),
        }
    }

    fn dur(&mut self, event: &str) -> Result<DurationDist> {
        let query = Query::Dur { event: event.into() };
        match self.answer(std::slice::from_ref(&query))?.pop() {
            Some(Answer::Dur { duration }) => Ok(duration),
            other => Err(mismatch(&query, other)),
        }
    }
}

fn mismatch(query: &Query, got: Option<Answer>) -> Error {
    Error::Predictor {
        id: None,
        message: format!(
            "{} answered with {}",
            query.describe(),
            got.map_or("nothing", |a| a.kind())
        ),
    }
}

/// Which predictor to use, parsed from `baseline`, `cmd:<shell command>` or `http(s)://…`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredictorSpec {
    Baseline,
    Command(String),
    Http(String),
}

impl std::str::FromStr for PredictorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "baseline" {
            Ok(PredictorSpec::Baseline)
        } else if let Some(cmd) = s.strip_prefix("cmd:") {
            if cmd.trim().is_empty() {
                return Err(Error::Parse("`cmd:` predictor needs a command".into()));
            }
            Ok(PredictorSpec::Command(cmd.to_string()))
        } else if s.starts_with("http://") || s.starts_with("https://") {
            Ok(PredictorSpec::Http(s.to_string()))
        } else {
            Err(Error::Parse(format!(
                "unknown predictor `{s}` (expected `baseline`, `cmd:<command>` or an http(s) URL)"
            )))
        }
    }
}

impl PredictorSpec {
    pub fn connect(&self) -> Result<Box<dyn Predictor>> {
        Ok(match self {
            PredictorSpec::Baseline => Box::new(BaselinePredictor::new()),
            PredictorSpec::Command(cmd) => Box::new(SubprocessPredictor::spawn(cmd)?),
            PredictorSpec::Http(url) => Box::new(HttpPredictor::new(url)),
        })
    }
}
