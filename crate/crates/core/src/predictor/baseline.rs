use std::collections::BTreeSet;

use super::{Answer, Predictor, Query};
use crate::annotate;
use crate::engine::{DistanceDist, DurationDist, StartOrderProbs};
use crate::error::Result;
use crate::lexicon;
use crate::unit::TemporalUnit;

/// Offset from 0.5 used when an event cannot be found in the story.
pub const UNLOCATED_EPSILON: f64 = 1e-6;

const STOPWORDS: &[&str] = &[
    "a", "an", "the", "and", "or", "but", "of", "to", "in", "on", "at", "for", "with", "by",
    "from", "up", "down", "out", "as", "is", "are", "was", "were", "be", "been", "being", "am",
    "has", "have", "had", "do", "does", "did", "it", "its", "he", "she", "they", "we", "i",
    "you", "his", "her", "their", "our", "my", "your", "him", "them", "us", "me", "this",
    "that", "these", "those", "so", "then", "there", "all", "will", "would", "can", "could",
];

fn content_tokens(text: &str) -> BTreeSet<String> {
    annotate::tokenize(text)
        .into_iter()
        .map(|t| t.to_lowercase())
        .filter(|t| t.chars().any(char::is_alphanumeric) && !STOPWORDS.contains(&t.as_str()))
        .collect()
}

fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Model-free predictor: narrative order for start order, a constant `hours` distance, and
/// the verb lexicon for durations.
///
/// Each event is placed at the story sentence with the highest Jaccard overlap of
/// lowercased content tokens (ties to the earliest sentence). If A's sentence does not
/// come after B's, `p = (0.8, 0.2)`, otherwise `(0.2, 0.8)`. If either event overlaps no
/// sentence, `p = (0.5 + ε, 0.5 − ε)`, leaning toward the order of mention.
#[derive(Debug, Clone, Default)]
pub struct BaselinePredictor;

impl BaselinePredictor {
    pub fn new() -> Self {
        BaselinePredictor
    }

    /// Index of the premise sentence that best matches `event`, if any overlaps at all.
    pub fn locate(event: &str, sentences: &[BTreeSet<String>]) -> Option<usize> {
        let target = content_tokens(event);
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in sentences.iter().enumerate() {
            let score = jaccard(&target, s);
            if score > 0.0 && best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn start_order(event_a: &str, event_b: &str, context: &str) -> StartOrderProbs {
        let sentences: Vec<BTreeSet<String>> = annotate::split_sentences(annotate::tokenize(context))
            .iter()
            .map(|s| content_tokens(&s.join(" ")))
            .collect();
        let (pb, pa) = match (Self::locate(event_a, &sentences), Self::locate(event_b, &sentences)) {
            (Some(a), Some(b)) if a <= b => (0.8, 0.2),
            (Some(_), Some(_)) => (0.2, 0.8),
            _ => (0.5 + UNLOCATED_EPSILON, 0.5 - UNLOCATED_EPSILON),
        };
        StartOrderProbs::renormalized(pb, pa).expect("fixed probabilities are valid")
    }

    /// Duration bucket of the first lexicon verb in `event`, or `days`.
    pub fn duration_unit(event: &str) -> TemporalUnit {
        annotate::tokenize(event)
            .iter()
            .find_map(|t| lexicon::lookup(t))
            .map_or(TemporalUnit::Days, |e| e.duration)
    }
}

impl Predictor for BaselinePredictor {
    fn answer(&mut self, queries: &[Query]) -> Result<Vec<Answer>> {
        Ok(queries
            .iter()
            .map(|q| match q {
                Query::Dist {
                    event_a,
                    event_b,
                    context,
                } => Answer::Dist {
                    start: Self::start_order(event_a, event_b, context),
                    distance: DistanceDist::one_hot(TemporalUnit::Hours),
                },
                Query::Dur { event } => Answer::Dur {
                    duration: DurationDist::one_hot(Self::duration_unit(event)),
                },
            })
            .collect())
    }
}
