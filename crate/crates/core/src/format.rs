//! Seq2seq serialization of extracted pairs and duration data, and the hypothesis grammar
//! of start/end entailment instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::EventPair;
use crate::types::{Comparator, EventPhrase, Relation};
use crate::unit::TemporalUnit;

/// Token inserted immediately left of the trigger verb in duration instances.
pub const VERB_MARKER: &str = "[V]";

/// One line of seq2seq training data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seq2SeqInstance {
    pub input: String,
    pub output: String,
}

/// `event: {A} starts {relation} {B}. story: {paragraph}`.
pub fn start_query(event_a: &str, relation: Relation, event_b: &str, story: &str) -> String {
    format!("event: {event_a} starts {relation} {event_b}. story: {story}")
}

/// Formats a start-order pair. With `flip` the stated relation is reversed and the answer
/// becomes `negative`; the distance token, when present, is kept either way.
pub fn format_pretraining_instance(pair: &EventPair, flip: bool) -> Seq2SeqInstance {
    let relation = if flip { pair.relation.flip() } else { pair.relation };
    let input = start_query(&pair.event_a.text, relation, &pair.event_b.text, &pair.paragraph);
    let mut output = String::from(if flip { "answer: negative" } else { "answer: positive" });
    if let Some(unit) = pair.distance {
        output.push(' ');
        output.push_str(&unit.token());
    }
    Seq2SeqInstance { input, output }
}

/// `count` independent fair coins from a generator seeded with `seed`.
pub fn flip_vector(count: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_bool(0.5)).collect()
}

/// Pairs each item with its `flip` (negative) assignment. Depends only on input order and
/// `seed`.
pub fn sample_negatives<T>(pairs: impl IntoIterator<Item = T>, seed: u64) -> Vec<(T, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.into_iter().map(|p| (p, rng.gen_bool(0.5))).collect()
}

/// Turns a positive pre-training instance into its negative counterpart and back.
///
/// The stated relation is the first ` starts before `/` starts after ` in the input, so
/// event texts containing those words are not supported. Returns `None` for text that
/// does not follow the template.
pub fn flip_pretraining_instance(inst: &Seq2SeqInstance) -> Option<Seq2SeqInstance> {
    let before = inst.input.find(" starts before ");
    let after = inst.input.find(" starts after ");
    let (at, from, to) = match (before, after) {
        (Some(b), Some(a)) if a < b => (a, " starts after ", " starts before "),
        (Some(b), _) => (b, " starts before ", " starts after "),
        (None, Some(a)) => (a, " starts after ", " starts before "),
        (None, None) => return None,
    };
    let input = format!("{}{to}{}", &inst.input[..at], &inst.input[at + from.len()..]);
    let rest = inst.output.strip_prefix("answer: ")?;
    let (label, distance) = rest.split_at(rest.find(' ').unwrap_or(rest.len()));
    let label = match label {
        "positive" => "negative",
        "negative" => "positive",
        _ => return None,
    };
    Some(Seq2SeqInstance {
        input,
        output: format!("answer: {label}{distance}"),
    })
}

/// `event: {tokens with [V] before the verb}` / `answer: {unit token}`.
pub fn format_duration_instance(event: &EventPhrase, value: TemporalUnit) -> Result<Seq2SeqInstance> {
    let verb = event.verb_index.ok_or_else(|| {
        Error::Parse(format!("event `{}` has no marked trigger verb", event.text))
    })?;
    let mut tokens: Vec<&str> = event.tokens().collect();
    if verb >= tokens.len() {
        return Err(Error::Parse(format!(
            "verb index {verb} out of range for `{}`",
            event.text
        )));
    }
    tokens.insert(verb, VERB_MARKER);
    Ok(Seq2SeqInstance {
        input: format!("event: {}", tokens.join(" ")),
        output: format!("answer: {}", value.token()),
    })
}

/// One record of duration data to format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DurationRecord {
    pub event: String,
    pub verb_index: usize,
    pub unit: TemporalUnit,
}

/// A hypothesis `"{A} {starts|ends} {before|after} {B}[.]"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParsedHypothesis {
    pub event_a: EventPhrase,
    pub comparator: Comparator,
    pub relation: Relation,
    pub event_b: EventPhrase,
    /// Whether the text ended in a period.
    pub period: bool,
}

const CONNECTIVES: [(&str, Comparator, Relation); 4] = [
    (" starts before ", Comparator::Start, Relation::Before),
    (" starts after ", Comparator::Start, Relation::After),
    (" ends before ", Comparator::End, Relation::Before),
    (" ends after ", Comparator::End, Relation::After),
];

/// Splits a hypothesis at its single connective.
pub fn parse_hypothesis(text: &str) -> Result<ParsedHypothesis> {
    let found: Vec<(usize, &str, Comparator, Relation)> = CONNECTIVES
        .iter()
        .flat_map(|&(conn, comp, rel)| text.match_indices(conn).map(move |(i, _)| (i, conn, comp, rel)))
        .collect();
    let &(at, conn, comparator, relation) = match found.as_slice() {
        [] => return Err(Error::Parse(format!("no comparator/relation connective in `{text}`"))),
        [one] => one,
        _ => {
            return Err(Error::Parse(format!(
                "ambiguous hypothesis, {} connectives in `{text}`",
                found.len()
            )))
        }
    };
    let head = &text[..at];
    let tail = &text[at + conn.len()..];
    let (tail, period) = match tail.strip_suffix('.') {
        Some(t) => (t, true),
        None => (tail, false),
    };
    let phrase = |s: &str| {
        EventPhrase::new(s, None).map_err(|_| Error::Parse(format!("empty event in hypothesis `{text}`")))
    };
    Ok(ParsedHypothesis {
        event_a: phrase(head)?,
        comparator,
        relation,
        event_b: phrase(tail)?,
        period,
    })
}

/// Inverse of [`parse_hypothesis`].
pub fn compose_hypothesis(h: &ParsedHypothesis) -> String {
    format!(
        "{} {} {} {}{}",
        h.event_a.text,
        h.comparator.verb(),
        h.relation,
        h.event_b.text,
        if h.period { "." } else { "" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{PairKind, Provenance};
    use proptest::prelude::*;

    fn pair(distance: Option<TemporalUnit>) -> EventPair {
        EventPair {
            event_a: EventPhrase::new("purchased food", Some(0)).unwrap(),
            event_b: EventPhrase::new("going to the park", Some(0)).unwrap(),
            relation: Relation::Before,
            distance,
            paragraph: "We purchased food before going to the park .".into(),
            provenance: Provenance {
                kind: if distance.is_some() { PairKind::CrossSentence } else { PairKind::WithinSentence },
                doc_id: "d".into(),
                paragraph: 0,
                sentence_a: 0,
                verb_a: (1, 2),
                sentence_b: 0,
                verb_b: (4, 5),
            },
        }
    }

    #[test]
    fn positive_within() {
        let inst = format_pretraining_instance(&pair(None), false);
        assert_eq!(
            inst.input,
            "event: purchased food starts before going to the park. story: We purchased food before going to the park ."
        );
        assert_eq!(inst.output, "answer: positive");
    }

    #[test]
    fn negative_within() {
        let inst = format_pretraining_instance(&pair(None), true);
        assert!(inst.input.starts_with("event: purchased food starts after going to the park. story: "));
        assert_eq!(inst.output, "answer: negative");
    }

    #[test]
    fn cross_keeps_distance() {
        let p = pair(Some(TemporalUnit::Weeks));
        assert_eq!(format_pretraining_instance(&p, false).output, "answer: positive [extra_id_3]");
        assert_eq!(format_pretraining_instance(&p, true).output, "answer: negative [extra_id_3]");
    }

    #[test]
    fn negatives_are_seeded() {
        assert!(sample_negatives(Vec::<EventPair>::new(), 7).is_empty());
        assert_eq!(flip_vector(500, 7), flip_vector(500, 7));
        assert_ne!(flip_vector(500, 7), flip_vector(500, 8));
        let flips: Vec<bool> = sample_negatives(0..500, 7).into_iter().map(|(_, f)| f).collect();
        assert_eq!(flips, flip_vector(500, 7));
    }

    #[test]
    fn duration_instances() {
        let e = EventPhrase::new("took the bus", Some(0)).unwrap();
        let inst = format_duration_instance(&e, TemporalUnit::Hours).unwrap();
        assert_eq!(inst.input, "event: [V] took the bus");
        assert_eq!(inst.output, "answer: [extra_id_1]");

        let e = EventPhrase::new("slept", Some(0)).unwrap();
        let inst = format_duration_instance(&e, TemporalUnit::Days).unwrap();
        assert_eq!((inst.input.as_str(), inst.output.as_str()), ("event: [V] slept", "answer: [extra_id_2]"));

        let e = EventPhrase::new("the kids quickly ate", Some(2)).unwrap();
        assert_eq!(
            format_duration_instance(&e, TemporalUnit::Minutes).unwrap().input,
            "event: the kids [V] quickly ate"
        );

        let e = EventPhrase::new("something happened", None).unwrap();
        assert!(format_duration_instance(&e, TemporalUnit::Minutes).is_err());
    }

    #[test]
    fn hypothesis_distracted() {
        let h = parse_hypothesis("distracted starts before try.").unwrap();
        assert_eq!(h.event_a.text, "distracted");
        assert_eq!((h.comparator, h.relation), (Comparator::Start, Relation::Before));
        assert_eq!(h.event_b.text, "try");
        assert!(h.period);
    }

    #[test]
    fn hypothesis_without_period() {
        let text = "The adults laughed at the jokes ends before we watch Spongebob as a family";
        let h = parse_hypothesis(text).unwrap();
        assert_eq!(h.event_a.text, "The adults laughed at the jokes");
        assert_eq!((h.comparator, h.relation), (Comparator::End, Relation::Before));
        assert_eq!(h.event_b.text, "we watch Spongebob as a family");
        assert_eq!(compose_hypothesis(&h), text);
    }

    #[test]
    fn hypothesis_errors() {
        for bad in [
            "no connective here.",
            "a starts before b ends after c.",
            " starts before b.",
            "a starts before .",
        ] {
            let err = parse_hypothesis(bad).unwrap_err();
            assert!(err.to_string().contains(bad.trim_end_matches('.').trim()) || err.to_string().contains("empty"), "{err}");
        }
    }

    fn phrase() -> impl Strategy<Value = String> {
        proptest::collection::vec("[a-zA-Z']{1,8}", 1..6).prop_map(|w| w.join(" "))
    }

    fn grammar_pair() -> impl Strategy<Value = (EventPair, bool)> {
        (
            phrase(),
            phrase(),
            any::<bool>(),
            proptest::option::of(0usize..7),
            phrase(),
            any::<bool>(),
        )
            .prop_map(|(a, b, before, dist, story, flip)| {
                let mut p = pair(dist.and_then(TemporalUnit::from_index));
                p.event_a = EventPhrase::new(a, Some(0)).unwrap();
                p.event_b = EventPhrase::new(b, Some(0)).unwrap();
                p.relation = if before { Relation::Before } else { Relation::After };
                p.paragraph = story;
                (p, flip)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn hypothesis_round_trip(a in phrase(), b in phrase(), comp in any::<bool>(), rel in any::<bool>(), period in any::<bool>()) {
            let h = ParsedHypothesis {
                event_a: EventPhrase::new(a, None).unwrap(),
                comparator: if comp { Comparator::Start } else { Comparator::End },
                relation: if rel { Relation::Before } else { Relation::After },
                event_b: EventPhrase::new(b, None).unwrap(),
                period,
            };
            let text = compose_hypothesis(&h);
            let back = parse_hypothesis(&text).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(compose_hypothesis(&back), text);
        }

        #[test]
        fn pretraining_grammar((p, flip) in grammar_pair()) {
            let input_re = regex::Regex::new(r"^event: .+ starts (before|after) .+\. story: .+$").unwrap();
            let output_re = regex::Regex::new(r"^answer: (positive|negative)( \[extra_id_[0-6]\])?$").unwrap();
            let inst = format_pretraining_instance(&p, flip);
            prop_assert!(input_re.is_match(&inst.input), "{}", inst.input);
            prop_assert!(output_re.is_match(&inst.output), "{}", inst.output);
            prop_assert_eq!(inst.output.contains("[extra_id_"), p.distance.is_some());
        }

        #[test]
        fn double_flip_restores((p, _) in grammar_pair()) {
            let positive = format_pretraining_instance(&p, false);
            let negative = flip_pretraining_instance(&positive).unwrap();
            prop_assert_eq!(&negative, &format_pretraining_instance(&p, true));
            prop_assert_eq!(flip_pretraining_instance(&negative).unwrap(), positive);
        }
    }
}
