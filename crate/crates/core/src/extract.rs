//! Distant-supervision extraction of start-order event pairs from annotated documents.
//!
//! Two extractors run over verb frames:
//!
//! * **within-sentence**: a verb whose temporal argument opens with `before`/`after` and
//!   contains another verb yields one pair, oriented by that first word;
//! * **cross-sentence**: verbs whose temporal arguments carry explicit dates or clock
//!   times are resolved against each other (missing fields inherited from the nearest
//!   earlier mention) and adjacent ones are paired with a bucketed distance.

use std::collections::HashSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tex::{self, PartialTimestamp};
use crate::types::{EventPhrase, Relation};
use crate::unit::TemporalUnit;

/// Half-open token range `[start, end)`.
pub type Span = (usize, usize);

/// Role tag of a temporal argument.
pub const TEMPORAL_ROLE: &str = "ARGM-TMP";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Argument {
    pub role: String,
    pub span: Span,
}

impl Argument {
    pub fn is_temporal(&self) -> bool {
        self.role == TEMPORAL_ROLE
    }

    /// `ARG0` … `ARG5`.
    pub fn is_core(&self) -> bool {
        self.role
            .strip_prefix("ARG")
            .is_some_and(|n| n.len() == 1 && n.as_bytes()[0].is_ascii_digit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbFrame {
    pub verb: Span,
    #[serde(default)]
    pub args: Vec<Argument>,
}

impl VerbFrame {
    pub fn temporal_args(&self) -> impl Iterator<Item = &Argument> {
        self.args.iter().filter(|a| a.is_temporal())
    }

    /// Total number of tokens covered by the frame's arguments.
    pub fn argument_tokens(&self) -> usize {
        self.args.iter().map(|a| a.span.1 - a.span.0).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub tokens: Vec<String>,
    #[serde(default)]
    pub frames: Vec<VerbFrame>,
}

pub type Paragraph = Vec<Sentence>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedDocument {
    pub doc_id: String,
    pub paragraphs: Vec<Paragraph>,
}

fn contains(outer: Span, inner: Span) -> bool {
    outer.0 <= inner.0 && inner.1 <= outer.1
}

fn overlaps(a: Span, b: Span) -> bool {
    a.0 < b.1 && b.0 < a.1
}

impl AnnotatedDocument {
    /// Checks token indices and per-frame span disjointness.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for (p, paragraph) in self.paragraphs.iter().enumerate() {
            for (s, sentence) in paragraph.iter().enumerate() {
                let n = sentence.tokens.len();
                for (f, frame) in sentence.frames.iter().enumerate() {
                    let at = format!("paragraph {p} sentence {s} frame {f}");
                    let mut spans = vec![frame.verb];
                    spans.extend(frame.args.iter().map(|a| a.span));
                    for &(start, end) in &spans {
                        if start >= end || end > n {
                            return Err(format!(
                                "{at}: span [{start}, {end}) is empty or outside {n} tokens"
                            ));
                        }
                    }
                    spans.sort_unstable();
                    if spans.windows(2).any(|w| overlaps(w[0], w[1])) {
                        return Err(format!("{at}: overlapping spans"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn paragraph_text(&self, paragraph: usize) -> String {
        self.paragraphs[paragraph]
            .iter()
            .flat_map(|s| s.tokens.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Streams documents from one-record-per-line JSON.
///
/// Each item is either a document or a record error carrying the 1-based line number and,
/// when recoverable, the doc id. Blank lines are skipped.
pub struct CorpusReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    seen: HashSet<String>,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R) -> Self {
        CorpusReader {
            lines: reader.lines(),
            line_no: 0,
            seen: HashSet::new(),
        }
    }

    fn parse_line(&mut self, line: &str) -> Result<AnnotatedDocument> {
        let line_no = self.line_no;
        let record_err = |doc_id: Option<String>, message: String| Error::Record {
            line: line_no,
            doc_id,
            message,
        };
        let doc: AnnotatedDocument = serde_json::from_str(line).map_err(|e| {
            let doc_id = serde_json::from_str::<serde_json::Value>(line)
                .ok()
                .and_then(|v| v.get("doc_id")?.as_str().map(String::from));
            record_err(doc_id, e.to_string())
        })?;
        doc.validate()
            .map_err(|m| record_err(Some(doc.doc_id.clone()), m))?;
        if !self.seen.insert(doc.doc_id.clone()) {
            return Err(record_err(Some(doc.doc_id.clone()), "duplicate doc_id".into()));
        }
        Ok(doc)
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<AnnotatedDocument>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line_no += 1;
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(e.into())),
            };
            if line.trim().is_empty() {
                continue;
            }
            return Some(self.parse_line(&line));
        }
    }
}

/// Reads a whole corpus. In lenient mode bad records are logged and returned alongside the
/// good documents; in strict mode the first bad record is the error.
pub fn load_corpus<R: BufRead>(
    reader: R,
    strict: bool,
) -> Result<(Vec<AnnotatedDocument>, Vec<Error>)> {
    let mut docs = Vec::new();
    let mut errors = Vec::new();
    for item in CorpusReader::new(reader) {
        match item {
            Ok(doc) => docs.push(doc),
            Err(e @ Error::Io(_)) => return Err(e),
            Err(e) if strict => return Err(e),
            Err(e) => {
                log::warn!("skipping record: {e}");
                errors.push(e);
            }
        }
    }
    Ok((docs, errors))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    WithinSentence,
    CrossSentence,
}

/// Where a pair came from. Verb spans index into their sentence's tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: PairKind,
    pub doc_id: String,
    pub paragraph: usize,
    pub sentence_a: usize,
    pub verb_a: Span,
    pub sentence_b: usize,
    pub verb_b: Span,
}

/// An extracted start-time comparison: the start of `event_a` is `relation` the start of
/// `event_b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventPair {
    pub event_a: EventPhrase,
    pub event_b: EventPhrase,
    pub relation: Relation,
    /// Present exactly for cross-sentence pairs.
    pub distance: Option<TemporalUnit>,
    pub paragraph: String,
    pub provenance: Provenance,
}

/// Renders the verb and its core arguments, in token order, as an event phrase.
pub fn render_event_phrase<S: AsRef<str>>(frame: &VerbFrame, tokens: &[S]) -> Result<EventPhrase> {
    let (vs, ve) = frame.verb;
    if vs >= ve || ve > tokens.len() {
        return Err(Error::InvalidFrame(format!(
            "verb span [{vs}, {ve}) is empty or outside {} tokens",
            tokens.len()
        )));
    }
    let mut spans: Vec<Span> = frame
        .args
        .iter()
        .filter(|a| a.is_core())
        .map(|a| a.span)
        .filter(|&(s, e)| s < e && e <= tokens.len())
        .collect();
    spans.push(frame.verb);
    spans.sort_unstable();
    let mut out: Vec<&str> = Vec::new();
    let mut verb_index = 0;
    for span in spans {
        if span == frame.verb {
            verb_index = out.len();
        }
        out.extend(tokens[span.0..span.1].iter().map(AsRef::as_ref));
    }
    EventPhrase::from_tokens(&out, verb_index)
}

fn leading_relation(tokens: &[String], span: Span) -> Option<Relation> {
    match tokens.get(span.0)?.to_lowercase().as_str() {
        "before" => Some(Relation::Before),
        "after" => Some(Relation::After),
        _ => None,
    }
}

/// Pairs drawn from `before`/`after` temporal arguments inside single sentences.
pub fn extract_within_sentence(doc: &AnnotatedDocument) -> Vec<EventPair> {
    let mut out = Vec::new();
    for (p, paragraph) in doc.paragraphs.iter().enumerate() {
        let mut text = None;
        for (s, sentence) in paragraph.iter().enumerate() {
            for main in &sentence.frames {
                let Some((tmp, relation)) = main
                    .temporal_args()
                    .find_map(|a| leading_relation(&sentence.tokens, a.span).map(|r| (a.span, r)))
                else {
                    continue;
                };
                // Largest argument-token count wins; ties go to the earliest verb.
                let inner = sentence
                    .frames
                    .iter()
                    .filter(|f| f.verb != main.verb && contains(tmp, f.verb))
                    .min_by_key(|f| (std::cmp::Reverse(f.argument_tokens()), f.verb.0));
                let Some(inner) = inner else { continue };
                let (Ok(event_a), Ok(event_b)) = (
                    render_event_phrase(main, &sentence.tokens),
                    render_event_phrase(inner, &sentence.tokens),
                ) else {
                    continue;
                };
                out.push(EventPair {
                    event_a,
                    event_b,
                    relation,
                    distance: None,
                    paragraph: text.get_or_insert_with(|| doc.paragraph_text(p)).clone(),
                    provenance: Provenance {
                        kind: PairKind::WithinSentence,
                        doc_id: doc.doc_id.clone(),
                        paragraph: p,
                        sentence_a: s,
                        verb_a: main.verb,
                        sentence_b: s,
                        verb_b: inner.verb,
                    },
                });
            }
        }
    }
    out
}

/// A verb anchored to an explicit time mention, in narrative order.
#[derive(Debug, Clone)]
pub struct DatedVerb<'a> {
    pub sentence: usize,
    pub frame: &'a VerbFrame,
    /// As written.
    pub written: PartialTimestamp,
    /// After inheriting missing fields from the previous dated verb.
    pub resolved: PartialTimestamp,
}

/// Collects the dated verbs of one paragraph with inheritance applied.
///
/// Each frame contributes at most one expression: the first one found in its first
/// temporal argument that contains any. Arguments opening with `before`/`after` relate the
/// verb to another event and are not searched. Expressions that cannot be placed on the
/// calendar are skipped and do not feed inheritance.
pub fn dated_verbs(paragraph: &[Sentence]) -> Vec<DatedVerb<'_>> {
    let mut frames: Vec<(usize, &VerbFrame)> = paragraph
        .iter()
        .enumerate()
        .flat_map(|(s, sent)| sent.frames.iter().map(move |f| (s, f)))
        .collect();
    frames.sort_by_key(|(s, f)| (*s, f.verb.0));

    let mut out: Vec<DatedVerb<'_>> = Vec::new();
    for (s, frame) in frames {
        let tokens = &paragraph[s].tokens;
        let Some(written) = frame
            .temporal_args()
            .filter(|a| leading_relation(tokens, a.span).is_none())
            .find_map(|a| tex::parse_temporal_expression(&tokens[a.span.0..a.span.1]))
        else {
            continue;
        };
        let resolved = match out.last() {
            Some(prev) => tex::inherit(&prev.resolved, &written),
            None => written,
        };
        if resolved.resolve(tex::SENTINEL_YEAR).is_none() {
            continue;
        }
        out.push(DatedVerb {
            sentence: s,
            frame,
            written,
            resolved,
        });
    }
    out
}

/// Distance-labelled pairs between adjacent dated verbs of each paragraph.
pub fn extract_cross_sentence(doc: &AnnotatedDocument) -> Vec<EventPair> {
    let mut out = Vec::new();
    for (p, paragraph) in doc.paragraphs.iter().enumerate() {
        let dated = dated_verbs(paragraph);
        if dated.len() < 2 {
            continue;
        }
        let text = doc.paragraph_text(p);
        for w in dated.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let Some((relation, bucket)) = tex::distance_between(&a.resolved, &b.resolved) else {
                continue;
            };
            let (Ok(event_a), Ok(event_b)) = (
                render_event_phrase(a.frame, &paragraph[a.sentence].tokens),
                render_event_phrase(b.frame, &paragraph[b.sentence].tokens),
            ) else {
                continue;
            };
            out.push(EventPair {
                event_a,
                event_b,
                relation,
                distance: Some(bucket),
                paragraph: text.clone(),
                provenance: Provenance {
                    kind: PairKind::CrossSentence,
                    doc_id: doc.doc_id.clone(),
                    paragraph: p,
                    sentence_a: a.sentence,
                    verb_a: a.frame.verb,
                    sentence_b: b.sentence,
                    verb_b: b.frame.verb,
                },
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExtractMode {
    Within,
    Cross,
    #[default]
    Both,
}

impl std::str::FromStr for ExtractMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "within" => Ok(ExtractMode::Within),
            "cross" => Ok(ExtractMode::Cross),
            "both" => Ok(ExtractMode::Both),
            other => Err(Error::Parse(format!("unknown extraction mode `{other}`"))),
        }
    }
}

/// Runs the selected extractors on one document; within-sentence pairs come first.
pub fn extract_document(doc: &AnnotatedDocument, mode: ExtractMode) -> Vec<EventPair> {
    let mut pairs = Vec::new();
    if mode != ExtractMode::Cross {
        pairs.extend(extract_within_sentence(doc));
    }
    if mode != ExtractMode::Within {
        pairs.extend(extract_cross_sentence(doc));
    }
    pairs
}

/// Document-parallel extraction whose output order matches the input order.
pub struct Extractor {
    mode: ExtractMode,
    pool: rayon::ThreadPool,
}

impl Extractor {
    pub fn new(mode: ExtractMode, workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
        Ok(Extractor { mode, pool })
    }

    pub fn run(&self, docs: &[AnnotatedDocument]) -> Vec<EventPair> {
        use rayon::prelude::*;
        let mode = self.mode;
        let per_doc: Vec<Vec<EventPair>> = self
            .pool
            .install(|| docs.par_iter().map(|d| extract_document(d, mode)).collect());
        per_doc.into_iter().flatten().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn arg(role: &str, s: usize, e: usize) -> Argument {
        Argument {
            role: role.into(),
            span: (s, e),
        }
    }

    fn frame(verb: Span, args: Vec<Argument>) -> VerbFrame {
        VerbFrame { verb, args }
    }

    fn doc(paragraphs: Vec<Vec<Sentence>>) -> AnnotatedDocument {
        AnnotatedDocument {
            doc_id: "d".into(),
            paragraphs,
        }
    }

    #[test]
    fn render_core_args_only() {
        let t = toks("we purchased food");
        let f = frame((1, 2), vec![arg("ARG0", 0, 1), arg("ARG1", 2, 3)]);
        let e = render_event_phrase(&f, &t).unwrap();
        assert_eq!(e.text, "we purchased food");
        assert_eq!(e.verb_index, Some(1));

        let t = toks("purchased food");
        let e = render_event_phrase(&frame((0, 1), vec![arg("ARG1", 1, 2)]), &t).unwrap();
        assert_eq!((e.text.as_str(), e.verb_index), ("purchased food", Some(0)));
    }

    #[test]
    fn render_skips_temporal() {
        let t = toks("went before noon to the park");
        let f = frame((0, 1), vec![arg("ARGM-TMP", 1, 3), arg("ARG2", 3, 6)]);
        assert_eq!(render_event_phrase(&f, &t).unwrap().text, "went to the park");
    }

    #[test]
    fn render_verb_only_and_invalid() {
        let t = toks("slept");
        assert_eq!(render_event_phrase(&frame((0, 1), vec![]), &t).unwrap().text, "slept");
        assert!(matches!(
            render_event_phrase(&frame((0, 0), vec![]), &t),
            Err(Error::InvalidFrame(_))
        ));
    }

    #[test]
    fn within_sentence_purchase_before_park() {
        // We purchased food before going to the park .
        let t = toks("We purchased food before going to the park .");
        let main = frame((1, 2), vec![arg("ARG0", 0, 1), arg("ARG1", 2, 3), arg("ARGM-TMP", 3, 8)]);
        let going = frame((4, 5), vec![arg("ARG1", 5, 8)]);
        let d = doc(vec![vec![Sentence {
            tokens: t,
            frames: vec![main, going],
        }]]);
        let pairs = extract_within_sentence(&d);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].event_a.text, "We purchased food");
        assert_eq!(pairs[0].event_b.text, "going to the park");
        assert_eq!(pairs[0].relation, Relation::Before);
        assert_eq!(pairs[0].distance, None);
        assert_eq!(pairs[0].paragraph, "We purchased food before going to the park .");
    }

    #[test]
    fn within_sentence_needs_inner_verb() {
        let t = toks("He left before noon");
        let main = frame((1, 2), vec![arg("ARG0", 0, 1), arg("ARGM-TMP", 2, 4)]);
        let d = doc(vec![vec![Sentence { tokens: t, frames: vec![main] }]]);
        assert!(extract_within_sentence(&d).is_empty());
    }

    #[test]
    fn within_sentence_largest_inner_frame() {
        // He ate after we cleaned and they washed every dirty plate
        let t = toks("He ate after we cleaned and they washed every dirty plate");
        let main = frame((1, 2), vec![arg("ARG0", 0, 1), arg("ARGM-TMP", 2, 11)]);
        let cleaned = frame((4, 5), vec![arg("ARG0", 3, 4), arg("ARGM-DIS", 5, 6)]);
        let washed = frame((7, 8), vec![arg("ARG0", 6, 7), arg("ARG1", 8, 11)]);
        let d = doc(vec![vec![Sentence {
            tokens: t,
            frames: vec![main, cleaned, washed],
        }]]);
        let pairs = extract_within_sentence(&d);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].event_b.text, "they washed every dirty plate");
        assert_eq!(pairs[0].relation, Relation::After);
    }

    #[test]
    fn within_sentence_tie_goes_to_earliest() {
        let t = toks("He ate after we cleaned and they washed");
        let main = frame((1, 2), vec![arg("ARG0", 0, 1), arg("ARGM-TMP", 2, 8)]);
        let cleaned = frame((4, 5), vec![arg("ARG0", 3, 4)]);
        let washed = frame((7, 8), vec![arg("ARG0", 6, 7)]);
        let d = doc(vec![vec![Sentence {
            tokens: t,
            frames: vec![main, washed, cleaned],
        }]]);
        assert_eq!(extract_within_sentence(&d)[0].event_b.text, "we cleaned");
    }

    fn dated_sentence(text: &str, verb: usize, tmp: Span) -> Sentence {
        Sentence {
            tokens: toks(text),
            frames: vec![frame((verb, verb + 1), vec![arg("ARG0", 0, verb), arg("ARGM-TMP", tmp.0, tmp.1)])],
        }
    }

    #[test]
    fn cross_sentence_park_shape() {
        let d = doc(vec![vec![
            dated_sentence("We went to the park on January 2nd", 1, (5, 8)),
            Sentence {
                tokens: toks("It was sunny"),
                frames: vec![],
            },
            dated_sentence("I wrote a review on the 10th", 1, (4, 7)),
        ]]);
        let pairs = extract_cross_sentence(&d);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].relation, Relation::Before);
        assert_eq!(pairs[0].distance, Some(TemporalUnit::Weeks));
        assert_eq!(pairs[0].provenance.sentence_a, 0);
        assert_eq!(pairs[0].provenance.sentence_b, 2);
    }

    #[test]
    fn keyword_arguments_do_not_date_their_verb() {
        // "bought" carries the whole before-clause, date included; only "went" is dated
        let tokens = toks("I bought food before I went to the park on January 2nd .");
        let s1 = Sentence {
            frames: vec![
                VerbFrame {
                    verb: (1, 2),
                    args: vec![arg("ARG0", 0, 1), arg("ARG1", 2, 3), arg(TEMPORAL_ROLE, 3, 12)],
                },
                VerbFrame {
                    verb: (5, 6),
                    args: vec![arg("ARG0", 4, 5), arg("ARG4", 6, 9), arg(TEMPORAL_ROLE, 9, 12)],
                },
            ],
            tokens,
        };
        let d = doc(vec![vec![s1, dated_sentence("I wrote a review on the 10th", 1, (4, 7))]]);
        let dated = dated_verbs(&d.paragraphs[0]);
        assert_eq!(dated.iter().map(|v| v.frame.verb).collect::<Vec<_>>(), vec![(5, 6), (1, 2)]);
        let cross = extract_cross_sentence(&d);
        assert_eq!(cross.len(), 1);
        assert_eq!(cross[0].event_a.text, "I went to the park");
        assert_eq!((cross[0].relation, cross[0].distance), (Relation::Before, Some(TemporalUnit::Weeks)));
        let within = extract_within_sentence(&d);
        assert_eq!(within.len(), 1);
        assert_eq!(within[0].event_b.text, "I went to the park");
    }

    #[test]
    fn cross_sentence_single_expression() {
        let d = doc(vec![vec![dated_sentence("We went on January 2nd", 1, (2, 5))]]);
        assert!(extract_cross_sentence(&d).is_empty());
    }

    #[test]
    fn cross_sentence_three_dates_two_pairs() {
        let d = doc(vec![vec![
            dated_sentence("We left in 1990", 1, (2, 4)),
            dated_sentence("We returned in 1995", 1, (2, 4)),
            dated_sentence("We moved in 2020", 1, (2, 4)),
        ]]);
        let pairs = extract_cross_sentence(&d);
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].distance, Some(TemporalUnit::Years));
        assert_eq!(pairs[1].distance, Some(TemporalUnit::Decades));
        assert!(pairs.iter().all(|p| p.provenance.kind == PairKind::CrossSentence));
    }

    #[test]
    fn loader_lenient_and_strict() {
        let good = r#"{"doc_id":"a","paragraphs":[[{"tokens":["He","ate"],"frames":[{"verb":[1,2],"args":[{"role":"ARG0","span":[0,1]}]}]}]]}"#;
        let bad_span = r#"{"doc_id":"b","paragraphs":[[{"tokens":["x"],"frames":[{"verb":[0,3],"args":[]}]}]]}"#;
        let input = format!("{good}\n\n{{not json\n{bad_span}\n{good}\n");

        let (docs, errors) = load_corpus(input.as_bytes(), false).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(errors.len(), 3);
        let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
        assert!(msgs[0].starts_with("line 3"), "{}", msgs[0]);
        assert!(msgs[1].contains("line 4") && msgs[1].contains("doc `b`"), "{}", msgs[1]);
        assert!(msgs[2].contains("duplicate"), "{}", msgs[2]);

        let err = load_corpus(input.as_bytes(), true).unwrap_err();
        assert!(matches!(err, Error::Record { line: 3, .. }));
    }

    #[test]
    fn loader_empty() {
        let (docs, errors) = load_corpus("".as_bytes(), true).unwrap();
        assert!(docs.is_empty() && errors.is_empty());
    }

    #[test]
    fn overlapping_frame_spans_rejected() {
        let d = doc(vec![vec![Sentence {
            tokens: toks("a b c"),
            frames: vec![frame((1, 2), vec![arg("ARG1", 0, 2)])],
        }]]);
        assert!(d.validate().is_err());
    }
}
