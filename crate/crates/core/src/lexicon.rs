//! Closed verb lexicon: inflected forms, lemmas, and a typical duration per lemma.
//!
//! Used by the fallback annotator to spot verbs and by the baseline predictor to guess
//! how long an event lasts.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::unit::TemporalUnit;

use TemporalUnit::{Days, Decades, Hours, Minutes, Months, Weeks, Years};

/// (lemma, irregular or doubled forms, typical duration). Regular `-s`, `-ed`, `-ing`
/// forms are derived; the explicit list adds whatever the rules miss.
const ENTRIES: &[(&str, &str, TemporalUnit)] = &[
    ("arrive", "", Minutes),
    ("ask", "", Minutes),
    ("assure", "", Minutes),
    ("attend", "", Hours),
    ("bake", "", Hours),
    ("bear", "bore born borne", Hours),
    ("become", "became", Years),
    ("begin", "began begun beginning", Minutes),
    ("borrow", "", Minutes),
    ("break", "broke broken", Minutes),
    ("bring", "brought", Minutes),
    ("build", "built", Months),
    ("buy", "bought", Minutes),
    ("call", "", Minutes),
    ("catch", "caught catches", Minutes),
    ("celebrate", "", Hours),
    ("change", "", Minutes),
    ("check", "", Minutes),
    ("clean", "", Hours),
    ("climb", "", Hours),
    ("close", "", Minutes),
    ("come", "came", Minutes),
    ("complete", "", Hours),
    ("cook", "", Hours),
    ("cry", "cried cries", Minutes),
    ("dance", "", Hours),
    ("decide", "", Minutes),
    ("die", "died dying", Minutes),
    ("drink", "drank drunk", Minutes),
    ("drive", "drove driven", Hours),
    ("drop", "dropped dropping", Minutes),
    ("eat", "ate eaten", Minutes),
    ("enjoy", "", Hours),
    ("fall", "fell fallen", Minutes),
    ("feel", "felt", Hours),
    ("find", "found", Minutes),
    ("finish", "finishes", Minutes),
    ("fix", "fixes", Hours),
    ("fly", "flew flown flies", Hours),
    ("forget", "forgot forgotten forgetting", Minutes),
    ("found", "", Years),
    ("get", "got gotten getting", Minutes),
    ("give", "gave given", Minutes),
    ("go", "went gone goes", Hours),
    ("graduate", "", Years),
    ("grow", "grew grown", Years),
    ("hear", "heard", Minutes),
    ("help", "", Hours),
    ("hike", "", Hours),
    ("hire", "", Weeks),
    ("hit", "hitting", Minutes),
    ("hold", "held", Minutes),
    ("hurt", "", Days),
    ("join", "", Minutes),
    ("jump", "", Minutes),
    ("keep", "kept", Days),
    ("kill", "", Minutes),
    ("know", "knew known", Years),
    ("land", "", Minutes),
    ("laugh", "", Minutes),
    ("launch", "launches", Minutes),
    ("learn", "learnt", Months),
    ("leave", "left", Minutes),
    ("live", "", Decades),
    ("look", "", Minutes),
    ("lose", "lost", Minutes),
    ("make", "made", Hours),
    ("marry", "married marries", Hours),
    ("meet", "met", Hours),
    ("move", "", Days),
    ("open", "", Minutes),
    ("order", "", Minutes),
    ("paint", "", Hours),
    ("pass", "passes", Minutes),
    ("pay", "paid", Minutes),
    ("pick", "", Minutes),
    ("plan", "planned planning", Days),
    ("plant", "", Hours),
    ("play", "", Hours),
    ("practice", "", Hours),
    ("prepare", "", Hours),
    ("publish", "publishes", Days),
    ("purchase", "", Minutes),
    ("put", "putting", Minutes),
    ("read", "", Hours),
    ("reach", "reaches", Minutes),
    ("receive", "", Minutes),
    ("release", "", Days),
    ("remove", "", Minutes),
    ("repair", "", Hours),
    ("rest", "", Hours),
    ("retire", "", Years),
    ("return", "", Minutes),
    ("ride", "rode ridden", Hours),
    ("run", "ran running", Hours),
    ("save", "", Months),
    ("say", "said", Minutes),
    ("see", "saw seen", Minutes),
    ("sell", "sold", Days),
    ("send", "sent", Minutes),
    ("serve", "", Years),
    ("shop", "shopped shopping", Hours),
    ("sign", "", Minutes),
    ("sing", "sang sung", Minutes),
    ("sit", "sat sitting", Hours),
    ("sleep", "slept", Hours),
    ("speak", "spoke spoken", Minutes),
    ("spend", "spent", Days),
    ("start", "", Minutes),
    ("stay", "", Days),
    ("stop", "stopped stopping", Minutes),
    ("study", "studied studies", Years),
    ("swim", "swam swum swimming", Hours),
    ("take", "took taken", Hours),
    ("talk", "", Minutes),
    ("teach", "taught teaches", Years),
    ("tell", "told", Minutes),
    ("think", "thought", Minutes),
    ("throw", "threw thrown", Minutes),
    ("train", "", Months),
    ("travel", "travelled travelling", Weeks),
    ("try", "tried tries", Minutes),
    ("visit", "", Days),
    ("wait", "", Hours),
    ("wake", "woke woken", Minutes),
    ("walk", "", Hours),
    ("want", "", Days),
    ("wash", "washes", Minutes),
    ("watch", "watches", Hours),
    ("wear", "wore worn", Hours),
    ("win", "won winning", Minutes),
    ("work", "", Years),
    ("write", "wrote written writing", Hours),
];

/// A lexicon verb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerbEntry {
    pub lemma: &'static str,
    pub duration: TemporalUnit,
}

/// Forms that never head an event on their own.
pub const AUXILIARIES: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "have", "has", "had", "having", "do",
    "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might", "must",
    "'s", "'re", "'ve", "'ll", "'d",
];

fn regular_forms(lemma: &str) -> Vec<String> {
    let mut forms = vec![lemma.to_string()];
    let es = lemma.ends_with(['s', 'x', 'z']) || lemma.ends_with("ch") || lemma.ends_with("sh");
    forms.push(if es { format!("{lemma}es") } else { format!("{lemma}s") });
    if let Some(stem) = lemma.strip_suffix('e') {
        forms.push(format!("{lemma}d"));
        forms.push(format!("{stem}ing"));
    } else {
        forms.push(format!("{lemma}ed"));
        forms.push(format!("{lemma}ing"));
    }
    forms
}

fn table() -> &'static HashMap<String, VerbEntry> {
    static TABLE: OnceLock<HashMap<String, VerbEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut map = HashMap::new();
        for &(lemma, extra, duration) in ENTRIES {
            let entry = VerbEntry { lemma, duration };
            for form in regular_forms(lemma).into_iter().chain(extra.split_whitespace().map(String::from)) {
                map.entry(form).or_insert(entry);
            }
        }
        map
    })
}

/// Looks up a token (case-insensitive) among the lexicon's verb forms.
pub fn lookup(token: &str) -> Option<VerbEntry> {
    table().get(&token.to_lowercase()).copied()
}

pub fn is_auxiliary(token: &str) -> bool {
    let lower = token.to_lowercase();
    AUXILIARIES.contains(&lower.as_str())
}

const ED_EXCEPTIONS: &[&str] = &[
    "hundred", "indeed", "sacred", "wicked", "naked", "kindred", "tired", "bored", "scared",
    "excited", "interested", "worried", "afraid",
];

/// Lexicon membership plus a suffix heuristic for unlisted past-tense verbs (`-ed`).
pub fn looks_like_verb(token: &str) -> bool {
    if is_auxiliary(token) {
        return false;
    }
    if lookup(token).is_some() {
        return true;
    }
    let is_lower_word = token.chars().all(|c| c.is_ascii_lowercase());
    is_lower_word && token.len() >= 5 && token.ends_with("ed") && !ED_EXCEPTIONS.contains(&token)
}

/// Typical duration of the verb, or `days` for unknown verbs.
pub fn typical_duration(token: &str) -> TemporalUnit {
    lookup(token).map_or(TemporalUnit::Days, |e| e.duration)
}
