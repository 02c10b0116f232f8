//! Entailment datasets, story-level splits and accuracy metrics.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::format::{parse_hypothesis, ParsedHypothesis};
use crate::types::{Comparator, Label};

/// One premise/hypothesis/label instance.
#[derive(Debug, Clone, PartialEq)]
pub struct EntailmentInstance {
    /// 1-based line of the record in its source file.
    pub line: usize,
    pub story_id: Option<String>,
    pub premise: String,
    pub hypothesis_text: String,
    pub hypothesis: ParsedHypothesis,
    pub gold: Label,
    /// Optional `easy`/`hard` tag carried through from the source.
    pub difficulty: Option<String>,
}

impl EntailmentInstance {
    pub fn comparator(&self) -> Comparator {
        self.hypothesis.comparator
    }
}

fn id_string(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Parses one dataset line. `line` is used for error messages only.
pub fn parse_instance(text: &str, line: usize) -> Result<EntailmentInstance> {
    let fail = |story_id: Option<String>, message: String| Error::Record {
        line,
        doc_id: story_id,
        message,
    };
    let value: Value = serde_json::from_str(text).map_err(|e| fail(None, e.to_string()))?;
    let Some(obj) = value.as_object() else {
        return Err(fail(None, "record is not a JSON object".into()));
    };
    let story_id = match obj.get("story_id") {
        None | Some(Value::Null) => None,
        Some(v) => Some(id_string(v).ok_or_else(|| fail(None, format!("story_id must be a string, got {v}")))?),
    };
    let field = |name: &str| -> Result<&str> {
        match obj.get(name) {
            Some(Value::String(s)) => Ok(s.as_str()),
            Some(other) => Err(fail(story_id.clone(), format!("`{name}` must be a string, got {other}"))),
            None => Err(fail(story_id.clone(), format!("missing `{name}`"))),
        }
    };
    let premise = field("premise")?.to_string();
    let hypothesis_text = field("hypothesis")?.to_string();
    let gold = match field("label")? {
        "entailment" => Label::Entailment,
        "contradiction" => Label::Contradiction,
        other => return Err(fail(story_id.clone(), format!("unknown label `{other}`"))),
    };
    let hypothesis = parse_hypothesis(&hypothesis_text).map_err(|e| fail(story_id.clone(), e.to_string()))?;
    let difficulty = match obj.get("difficulty") {
        Some(Value::String(s)) => Some(s.clone()),
        _ => None,
    };
    Ok(EntailmentInstance {
        line,
        story_id,
        premise,
        hypothesis_text,
        hypothesis,
        gold,
        difficulty,
    })
}

/// Reads a dataset. Lenient mode logs and collects bad records; strict mode fails on the
/// first one.
pub fn load_dataset<R: BufRead>(reader: R, strict: bool) -> Result<(Vec<EntailmentInstance>, Vec<Error>)> {
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_instance(&line, i + 1) {
            Ok(inst) => instances.push(inst),
            Err(e) if strict => return Err(e),
            Err(e) => {
                log::warn!("skipping record: {e}");
                errors.push(e);
            }
        }
    }
    Ok((instances, errors))
}

/// Keeps instances tagged with `difficulty`.
pub fn filter_difficulty(instances: Vec<EntailmentInstance>, difficulty: &str) -> Vec<EntailmentInstance> {
    instances
        .into_iter()
        .filter(|i| i.difficulty.as_deref() == Some(difficulty))
        .collect()
}

fn story_key(inst: &EntailmentInstance) -> String {
    match &inst.story_id {
        Some(id) => format!("s:{id}"),
        None => format!("l:{}", inst.line),
    }
}

/// Number of stories that go to the training side.
pub fn train_story_count(stories: usize, train_ratio: f64) -> usize {
    // the small slack keeps products like 0.2 * 15 from rounding up past an integer
    let raw = (train_ratio * stories as f64 - 1e-9).ceil();
    (raw.max(0.0) as usize).min(stories)
}

/// Splits instances by story: stories are shuffled with a seeded generator and the first
/// `ceil(train_ratio * stories)` go to train. Instances keep their input order on both sides.
/// An instance without a story id is its own story.
pub fn split_iid(
    instances: &[EntailmentInstance],
    seed: u64,
    train_ratio: f64,
) -> Result<(Vec<EntailmentInstance>, Vec<EntailmentInstance>)> {
    if !(0.0..=1.0).contains(&train_ratio) {
        return Err(Error::Domain(format!("train ratio {train_ratio} outside [0, 1]")));
    }
    let mut stories: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for inst in instances {
        let key = story_key(inst);
        if seen.insert(key.clone()) {
            stories.push(key);
        }
    }
    stories.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = train_story_count(stories.len(), train_ratio);
    if n_train == 0 || n_train == stories.len() {
        log::warn!(
            "degenerate split: {n_train} of {} stories in train at ratio {train_ratio}",
            stories.len()
        );
    }
    let train_set: std::collections::HashSet<&String> = stories[..n_train].iter().collect();
    let (train, test) = instances
        .iter()
        .cloned()
        .partition(|inst| train_set.contains(&story_key(inst)));
    Ok((train, test))
}

/// Accuracy summary. Empty slices are reported as `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub start_accuracy: Option<f64>,
    pub end_accuracy: Option<f64>,
    pub all_accuracy: Option<f64>,
    pub story_exact_match: Option<f64>,
    pub n_start: usize,
    pub correct_start: usize,
    pub n_end: usize,
    pub correct_end: usize,
    pub n_stories: Option<usize>,
    pub stories_correct: Option<usize>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn percent(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{:.1}", 100.0 * v))
}

impl MetricsReport {
    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let rows = [
            ("start", percent(self.start_accuracy), format!("{}/{}", self.correct_start, self.n_start)),
            ("end", percent(self.end_accuracy), format!("{}/{}", self.correct_end, self.n_end)),
            (
                "all",
                percent(self.all_accuracy),
                format!("{}/{}", self.correct_start + self.correct_end, self.n_start + self.n_end),
            ),
            (
                "story EM",
                percent(self.story_exact_match),
                match (self.stories_correct, self.n_stories) {
                    (Some(c), Some(n)) => format!("{c}/{n}"),
                    _ => "-".to_string(),
                },
            ),
        ];
        let mut out = String::new();
        let _ = writeln!(out, "{:<10} {:>8} {:>12}", "metric", "acc (%)", "correct");
        for (name, acc, count) in rows {
            let _ = writeln!(out, "{name:<10} {acc:>8} {count:>12}");
        }
        out
    }
}

/// Scores `predictions` against the gold labels of `instances`, position by position.
///
/// Story exact match is computed only when every instance has a story id.
pub fn compute_metrics(predictions: &[Label], instances: &[EntailmentInstance]) -> Result<MetricsReport> {
    if predictions.len() != instances.len() {
        return Err(Error::LengthMismatch(format!(
            "{} predictions for {} instances",
            predictions.len(),
            instances.len()
        )));
    }
    let mut counts = [(0usize, 0usize); 2];
    let mut stories: BTreeMap<&str, bool> = BTreeMap::new();
    let with_ids = instances.iter().all(|i| i.story_id.is_some());
    for (pred, inst) in predictions.iter().zip(instances) {
        let correct = *pred == inst.gold;
        let slot = &mut counts[(inst.comparator() == Comparator::End) as usize];
        slot.0 += correct as usize;
        slot.1 += 1;
        if let (true, Some(id)) = (with_ids, inst.story_id.as_deref()) {
            *stories.entry(id).or_insert(true) &= correct;
        }
    }
    let [(correct_start, n_start), (correct_end, n_end)] = counts;
    let (n_stories, stories_correct) = if with_ids && !instances.is_empty() {
        (Some(stories.len()), Some(stories.values().filter(|&&ok| ok).count()))
    } else {
        (None, None)
    };
    Ok(MetricsReport {
        start_accuracy: ratio(correct_start, n_start),
        end_accuracy: ratio(correct_end, n_end),
        all_accuracy: ratio(correct_start + correct_end, n_start + n_end),
        story_exact_match: stories_correct.zip(n_stories).and_then(|(c, n)| ratio(c, n)),
        n_start,
        correct_start,
        n_end,
        correct_end,
        n_stories,
        stories_correct,
    })
}

/// One line of a predictions file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub story_id: Option<String>,
    pub pred: Label,
}

pub fn write_predictions<W: Write>(mut out: W, records: &[PredictionRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_predictions<R: BufRead>(reader: R) -> Result<Vec<PredictionRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line).map_err(|e| Error::Record {
            line: i + 1,
            doc_id: None,
            message: e.to_string(),
        })?;
        let story_id = value.get("story_id").and_then(id_string);
        let pred = value
            .get("pred")
            .cloned()
            .ok_or_else(|| "missing `pred`".to_string())
            .and_then(|p| serde_json::from_value::<Label>(p).map_err(|e| e.to_string()))
            .map_err(|message| Error::Record {
                line: i + 1,
                doc_id: story_id.clone(),
                message,
            })?;
        out.push(PredictionRecord { story_id, pred });
    }
    Ok(out)
}

/// Checks that predictions line up with instances wherever both carry a story id.
pub fn align_predictions(records: &[PredictionRecord], instances: &[EntailmentInstance]) -> Result<Vec<Label>> {
    if records.len() != instances.len() {
        return Err(Error::LengthMismatch(format!(
            "{} predictions for {} instances",
            records.len(),
            instances.len()
        )));
    }
    for (k, (r, inst)) in records.iter().zip(instances).enumerate() {
        if let (Some(a), Some(b)) = (&r.story_id, &inst.story_id) {
            if a != b {
                return Err(Error::LengthMismatch(format!(
                    "prediction {} is for story `{a}` but instance on line {} is story `{b}`",
                    k + 1,
                    inst.line
                )));
            }
        }
    }
    Ok(records.iter().map(|r| r.pred).collect())
}

/// Instance counts per story, in first-appearance order.
pub fn story_sizes(instances: &[EntailmentInstance]) -> Vec<(String, usize)> {
    let mut order = Vec::new();
    let mut sizes: HashMap<String, usize> = HashMap::new();
    for inst in instances {
        let key = inst.story_id.clone().unwrap_or_else(|| format!("line {}", inst.line));
        let entry = sizes.entry(key.clone()).or_insert_with(|| {
            order.push(key.clone());
            0
        });
        *entry += 1;
    }
    order.into_iter().map(|k| {
        let n = sizes[&k];
        (k, n)
    }).collect()
}
