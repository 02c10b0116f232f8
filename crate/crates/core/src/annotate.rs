//! A small deterministic stand-in for a semantic-role labeler.
//!
//! Good enough to build desk-scale corpora from plain text: paragraphs split on blank
//! lines, sentences on terminal punctuation, verbs from the closed lexicon (plus `-ed`
//! forms), and temporal arguments from `before`/`after` clauses and explicit dates.
//! Argument roles are limited to `ARG0` (subject-ish prefix), `ARG1` (what follows the
//! verb) and `ARGM-TMP`.

use crate::extract::{AnnotatedDocument, Argument, Sentence, Span, VerbFrame, TEMPORAL_ROLE};
use crate::lexicon;
use crate::tex;

const LEADING_PUNCT: &[char] = &['"', '\'', '(', '[', '{', '“', '‘'];
const TRAILING_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', '"', '\'', ')', ']', '}', '”', '’'];
const CLAUSE_BREAKS: &[&str] = &[",", ";", ":", "--", "\u{2014}", "(", ")"];
const TERMINALS: &[&str] = &[".", "!", "?"];
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "st", "jr", "sr", "jan", "feb", "mar", "apr", "jun", "jul", "aug",
    "sep", "sept", "oct", "nov", "dec", "a.m", "p.m",
];
const DETERMINERS: &[&str] = &[
    "the", "a", "an", "his", "her", "their", "my", "our", "your", "its", "this", "that", "these",
    "those", "every", "each",
];
const TIME_PREPOSITIONS: &[&str] = &["on", "in", "at", "by"];
const TRAILING_FUNCTION_WORDS: &[&str] = &["to", "and", "or", "then", "but"];

/// Splits a chunk of text into tokens, peeling punctuation off word edges.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let mut word = chunk;
        let mut lead = Vec::new();
        while let Some(c) = word.chars().next().filter(|c| LEADING_PUNCT.contains(c)) {
            lead.push(c.to_string());
            word = &word[c.len_utf8()..];
        }
        let mut trail = Vec::new();
        while let Some(c) = word.chars().last().filter(|c| TRAILING_PUNCT.contains(c)) {
            // keep possessive/contraction apostrophes attached ("dogs'" is rare enough)
            trail.push(c.to_string());
            word = &word[..word.len() - c.len_utf8()];
        }
        out.extend(lead);
        if !word.is_empty() {
            out.push(word.to_string());
        }
        out.extend(trail.into_iter().rev());
    }
    out
}

/// Groups tokens into sentences at terminal punctuation followed by a capitalized token.
pub fn split_sentences(tokens: Vec<String>) -> Vec<Vec<String>> {
    let mut sentences = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let n = tokens.len();
    for i in 0..n {
        let tok = &tokens[i];
        current.push(tok.clone());
        if !TERMINALS.contains(&tok.as_str()) {
            continue;
        }
        let prev_is_abbrev = tok == "."
            && i > 0
            && ABBREVIATIONS.contains(&tokens[i - 1].to_lowercase().as_str());
        let next_starts_sentence = tokens
            .get(i + 1)
            .is_none_or(|t| t.starts_with(|c: char| c.is_uppercase() || LEADING_PUNCT.contains(&c)));
        if next_starts_sentence && !prev_is_abbrev {
            sentences.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    sentences
}

fn clauses(tokens: &[String]) -> Vec<Span> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        if CLAUSE_BREAKS.contains(&t.as_str()) || TERMINALS.contains(&t.as_str()) {
            if start < i {
                out.push((start, i));
            }
            start = i + 1;
        }
    }
    if start < tokens.len() {
        out.push((start, tokens.len()));
    }
    out
}

fn is_verb_at(tokens: &[String], i: usize) -> bool {
    let t = &tokens[i];
    if i > 0 && DETERMINERS.contains(&tokens[i - 1].to_lowercase().as_str()) {
        return false;
    }
    if lexicon::looks_like_verb(t) {
        return true;
    }
    // "before leaving", "after arriving"
    let lower = t.to_lowercase();
    i > 0
        && lower.len() > 4
        && lower.ends_with("ing")
        && matches!(tokens[i - 1].to_lowercase().as_str(), "before" | "after" | "while")
}

fn inside(span: Span, i: usize) -> bool {
    span.0 <= i && i < span.1
}

struct Tmp {
    span: Span,
    clause: usize,
    keyword: bool,
}

/// Builds verb frames for one tokenized sentence.
pub fn annotate_sentence(tokens: &[String]) -> Vec<VerbFrame> {
    let verbs: Vec<usize> = (0..tokens.len()).filter(|&i| is_verb_at(tokens, i)).collect();
    let clauses = clauses(tokens);
    let clause_of = |i: usize| clauses.iter().position(|&c| inside(c, i));

    // Temporal arguments: one keyword clause per clause, then explicit time mentions.
    let mut tmps: Vec<Tmp> = Vec::new();
    for (ci, &(cs, ce)) in clauses.iter().enumerate() {
        if let Some(k) = (cs..ce).find(|&k| matches!(tokens[k].to_lowercase().as_str(), "before" | "after")) {
            tmps.push(Tmp {
                span: (k, ce),
                clause: ci,
                keyword: true,
            });
        }
    }
    for ts in tex::find_temporal_expressions(tokens) {
        let (mut s, e) = ts.source_span;
        if tmps.iter().any(|t| inside(t.span, s) || inside(t.span, e - 1)) {
            continue;
        }
        // dates like "June 12 , 2010" may run across a comma; the argument belongs to the
        // clause it starts in
        let Some(ci) = clause_of(s) else { continue };
        if s > clauses[ci].0 && TIME_PREPOSITIONS.contains(&tokens[s - 1].to_lowercase().as_str()) {
            s -= 1;
        }
        tmps.push(Tmp {
            span: (s, e),
            clause: ci,
            keyword: false,
        });
    }

    let in_any_tmp = |i: usize| tmps.iter().any(|t| inside(t.span, i));
    let free_verbs_in = |c: Span| -> Vec<usize> {
        verbs.iter().copied().filter(|&v| inside(c, v) && !in_any_tmp(v)).collect()
    };

    // Attach each temporal argument to a governing verb outside it.
    let mut attached: Vec<(usize, Span)> = Vec::new();
    for tmp in &tmps {
        let here = free_verbs_in(clauses[tmp.clause]);
        let host = here
            .iter()
            .rev()
            .find(|&&v| v < tmp.span.0)
            .or_else(|| here.iter().find(|&&v| v >= tmp.span.1))
            .copied()
            .or_else(|| {
                clauses[tmp.clause + 1..]
                    .iter()
                    .find_map(|&c| free_verbs_in(c).first().copied())
            })
            .or_else(|| {
                clauses[..tmp.clause]
                    .iter()
                    .rev()
                    .find_map(|&c| free_verbs_in(c).last().copied())
            });
        if let Some(v) = host {
            attached.push((v, tmp.span));
        }
    }

    let mut frames = Vec::new();
    for &v in &verbs {
        // The region a verb's plain arguments may come from: its clause, or the inside of
        // the keyword argument that contains it.
        let (region, blockers): (Span, Vec<Span>) = match tmps.iter().find(|t| inside(t.span, v)) {
            Some(t) if t.keyword => ((t.span.0 + 1, t.span.1), vec![]),
            Some(_) => continue,
            None => {
                let Some(ci) = clause_of(v) else { continue };
                let blockers = tmps.iter().filter(|t| t.clause == ci).map(|t| t.span).collect();
                (clauses[ci], blockers)
            }
        };
        let region_verbs: Vec<usize> = verbs
            .iter()
            .copied()
            .filter(|&u| inside(region, u) && blockers.iter().all(|&b| !inside(b, u)))
            .collect();
        let pos = region_verbs.iter().position(|&u| u == v).unwrap_or(0);

        let mut args = Vec::new();
        if pos == 0 {
            let start = blockers
                .iter()
                .filter(|b| b.1 <= v && b.0 >= region.0)
                .map(|b| b.1)
                .max()
                .unwrap_or(region.0);
            let mut end = v;
            while end > start && lexicon::is_auxiliary(&tokens[end - 1]) {
                end -= 1;
            }
            if start < end {
                args.push(Argument {
                    role: "ARG0".into(),
                    span: (start, end),
                });
            }
        }
        let mut end = region_verbs.get(pos + 1).copied().unwrap_or(region.1);
        if let Some(b) = blockers.iter().filter(|b| b.0 > v && b.0 < end).map(|b| b.0).min() {
            end = b;
        }
        while end > v + 1 && TRAILING_FUNCTION_WORDS.contains(&tokens[end - 1].to_lowercase().as_str()) {
            end -= 1;
        }
        if v + 1 < end {
            args.push(Argument {
                role: "ARG1".into(),
                span: (v + 1, end),
            });
        }
        for &(_, span) in attached.iter().filter(|(host, _)| *host == v) {
            args.push(Argument {
                role: TEMPORAL_ROLE.into(),
                span,
            });
        }
        args.sort_by_key(|a| a.span);
        frames.push(VerbFrame { verb: (v, v + 1), args });
    }
    frames
}

/// Annotates plain text as a document.
pub fn fallback_annotate(doc_id: &str, text: &str) -> AnnotatedDocument {
    let mut paragraphs = Vec::new();
    let mut block = String::new();
    let flush = |block: &mut String, paragraphs: &mut Vec<Vec<Sentence>>| {
        let tokens = tokenize(block);
        block.clear();
        if tokens.is_empty() {
            return;
        }
        let sentences = split_sentences(tokens)
            .into_iter()
            .map(|tokens| Sentence {
                frames: annotate_sentence(&tokens),
                tokens,
            })
            .collect();
        paragraphs.push(sentences);
    };
    for line in text.lines() {
        if line.trim().is_empty() {
            flush(&mut block, &mut paragraphs);
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    flush(&mut block, &mut paragraphs);
    AnnotatedDocument {
        doc_id: doc_id.to_string(),
        paragraphs,
    }
}
