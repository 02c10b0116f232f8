//! Small domain enums and the event phrase type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Before,
    After,
}

impl Relation {
    pub fn flip(self) -> Self {
        match self {
            Relation::Before => Relation::After,
            Relation::After => Relation::Before,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Before => "before",
            Relation::After => "after",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "before" => Ok(Relation::Before),
            "after" => Ok(Relation::After),
            other => Err(Error::Parse(format!("unknown relation `{other}`"))),
        }
    }
}

/// Which endpoint of the first event is compared against the second event's start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Start,
    End,
}

impl Comparator {
    /// The verb form used in hypotheses (`starts` / `ends`).
    pub fn verb(self) -> &'static str {
        match self {
            Comparator::Start => "starts",
            Comparator::End => "ends",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Entailment,
    Contradiction,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Contradiction => "contradiction",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A short natural-language rendering of an event.
///
/// `verb_index` indexes into the whitespace-separated tokens of `text` and marks the
/// trigger verb when it is known. Phrases parsed out of free text (hypotheses) have none.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventPhrase {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verb_index: Option<usize>,
}

impl EventPhrase {
    pub fn new(text: impl Into<String>, verb_index: Option<usize>) -> Result<Self, Error> {
        let text = text.into();
        let len = text.split_whitespace().count();
        if len == 0 {
            return Err(Error::Parse("event phrase is empty".into()));
        }
        if let Some(v) = verb_index {
            if v >= len {
                return Err(Error::Parse(format!(
                    "verb index {v} out of range for `{text}` ({len} tokens)"
                )));
            }
        }
        Ok(EventPhrase { text, verb_index })
    }

    /// Builds a phrase from tokens, joining them with single spaces.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S], verb_index: usize) -> Result<Self, Error> {
        let text = tokens.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" ");
        Self::new(text, Some(verb_index))
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.text.split_whitespace()
    }
}

impl fmt::Display for EventPhrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_is_an_involution() {
        for r in [Relation::Before, Relation::After] {
            assert_ne!(r.flip(), r);
            assert_eq!(r.flip().flip(), r);
        }
    }

    #[test]
    fn empty_phrase_rejected() {
        assert!(EventPhrase::new("  ", None).is_err());
        assert!(EventPhrase::new("ate lunch", Some(2)).is_err());
        assert_eq!(EventPhrase::new("ate lunch", Some(0)).unwrap().tokens().count(), 2);
    }
}
