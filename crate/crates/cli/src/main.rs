use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symtime::annotate::fallback_annotate;
use symtime::engine::{predict_batch, SymConfig, DEFAULT_INT_MAX};
use symtime::eval::{
    align_predictions, compute_metrics, load_dataset, parse_instance, read_predictions, split_iid,
    write_predictions, EntailmentInstance, PredictionRecord,
};
use symtime::extract::{load_corpus, EventPair, ExtractMode, Extractor};
use symtime::format::{format_duration_instance, format_pretraining_instance, sample_negatives, DurationRecord};
use symtime::format::ParsedHypothesis;
use symtime::predictor::{wire, BaselinePredictor, PredictorSpec};
use symtime::EventPhrase;

#[derive(Parser)]
#[command(name = "symtime", version, about = "Temporal pair extraction and start/end entailment reasoning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract start-order event pairs from an annotated corpus.
    Extract {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
        /// Fail on the first malformed record instead of skipping it.
        #[arg(long)]
        strict: bool,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Write seq2seq training data.
    Format {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Seed for negative sampling.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        strict: bool,
    },
    /// Label an entailment dataset.
    Predict {
        #[arg(long = "in")]
        input: PathBuf,
        /// `baseline`, `cmd:<shell command>` or an http(s) URL.
        #[arg(long)]
        predictor: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_INT_MAX)]
        int_max: f64,
        #[arg(long)]
        strict: bool,
    },
    /// Score predictions against gold labels.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Only score instances tagged with this difficulty.
        #[arg(long, value_enum)]
        difficulty: Option<Difficulty>,
        #[arg(long)]
        strict: bool,
    },
    /// Split a dataset into train and test by story.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.2)]
        ratio: f64,
        /// Defaults to `<input stem>.train.jsonl` next to the input.
        #[arg(long)]
        train_out: Option<PathBuf>,
        /// Defaults to `<input stem>.test.jsonl` next to the input.
        #[arg(long)]
        test_out: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
    /// Send one dist and one dur query and report latencies.
    PingPredictor {
        #[arg(long)]
        predictor: String,
    },
    /// Serve the baseline predictor over standard input and output.
    ServeBaseline,
    /// Turn plain-text files into an annotated corpus with the built-in heuristic labeler.
    Annotate {
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Within,
    Cross,
    Both,
}

impl From<Mode> for ExtractMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Within => ExtractMode::Within,
            Mode::Cross => ExtractMode::Cross,
            Mode::Both => ExtractMode::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pretrain,
    Duration,
}

#[derive(Clone, Copy, ValueEnum)]
enum Difficulty {
    Easy,
    Hard,
}

impl Difficulty {
    fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Hard => "hard",
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

/// Writes through a temporary file in the destination directory and renames it into place,
/// so a failed run never leaves a partial file behind.
fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    write_atomic(path, |w| {
        for item in items {
            serde_json::to_writer(&mut *w, item)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })
}

fn report_skipped(what: &str, errors: &[symtime::Error]) {
    if !errors.is_empty() {
        eprintln!("skipped {} malformed {what} (first: {})", errors.len(), errors[0]);
    }
}

fn load_instances(path: &Path, strict: bool) -> Result<Vec<EntailmentInstance>> {
    let (instances, errors) =
        load_dataset(open(path)?, strict).with_context(|| format!("in {}", path.display()))?;
    report_skipped("instances", &errors);
    Ok(instances)
}

fn extract(corpus: &Path, mode: Mode, out: &Path, strict: bool, workers: Option<usize>) -> Result<()> {
    let (docs, errors) =
        load_corpus(open(corpus)?, strict).with_context(|| format!("in {}", corpus.display()))?;
    report_skipped("documents", &errors);
    let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pairs = Extractor::new(mode.into(), workers)?.run(&docs);
    write_jsonl(out, &pairs)?;
    eprintln!("{} pairs from {} documents", pairs.len(), docs.len());
    Ok(())
}

fn read_records<T: serde::de::DeserializeOwned>(path: &Path, strict: bool) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let mut skipped = 0usize;
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(r) => out.push(r),
            Err(e) if strict => bail!("{}: line {}: {e}", path.display(), i + 1),
            Err(e) => {
                log::warn!("{}: skipping line {}: {e}", path.display(), i + 1);
                skipped += 1;
            }
        }
    }
    if skipped > 0 {
        eprintln!("skipped {skipped} malformed records");
    }
    Ok(out)
}

fn format(kind: Kind, input: &Path, out: &Path, seed: u64, strict: bool) -> Result<()> {
    let instances = match kind {
        Kind::Pretrain => {
            let pairs: Vec<EventPair> = read_records(input, strict)?;
            sample_negatives(pairs.iter(), seed)
                .into_iter()
                .map(|(pair, flip)| format_pretraining_instance(pair, flip))
                .collect::<Vec<_>>()
        }
        Kind::Duration => {
            let records: Vec<DurationRecord> = read_records(input, strict)?;
            let mut out = Vec::with_capacity(records.len());
            for r in records {
                let formatted = EventPhrase::new(r.event.clone(), Some(r.verb_index))
                    .and_then(|e| format_duration_instance(&e, r.unit));
                match formatted {
                    Ok(inst) => out.push(inst),
                    Err(e) if strict => return Err(e.into()),
                    Err(e) => log::warn!("skipping duration record `{}`: {e}", r.event),
                }
            }
            out
        }
    };
    write_jsonl(out, &instances)?;
    eprintln!("{} instances written", instances.len());
    Ok(())
}

fn predict(input: &Path, predictor: &str, out: &Path, int_max: f64, strict: bool) -> Result<()> {
    let cfg = SymConfig::new(int_max)?;
    let spec: PredictorSpec = predictor.parse()?;
    let instances = load_instances(input, strict)?;
    let mut predictor = spec.connect()?;
    let items: Vec<(&ParsedHypothesis, &str)> =
        instances.iter().map(|i| (&i.hypothesis, i.premise.as_str())).collect();
    let labels = predict_batch(&items, predictor.as_mut(), &cfg)?;
    let records: Vec<PredictionRecord> = instances
        .iter()
        .zip(labels)
        .map(|(i, pred)| PredictionRecord {
            story_id: i.story_id.clone(),
            pred,
        })
        .collect();
    write_atomic(out, |w| Ok(write_predictions(w, &records)?))?;
    eprintln!("{} predictions written", records.len());
    Ok(())
}

fn eval(gold: &Path, pred: &Path, out: Option<&Path>, difficulty: Option<Difficulty>, strict: bool) -> Result<()> {
    let instances = load_instances(gold, strict)?;
    let records = read_predictions(open(pred)?).with_context(|| format!("in {}", pred.display()))?;
    let labels = align_predictions(&records, &instances)?;
    let (instances, labels): (Vec<_>, Vec<_>) = match difficulty {
        None => (instances, labels),
        Some(d) => instances
            .into_iter()
            .zip(labels)
            .filter(|(i, _)| i.difficulty.as_deref() == Some(d.as_str()))
            .unzip(),
    };
    let report = compute_metrics(&labels, &instances)?;
    print!("{}", report.to_table());
    if let Some(out) = out {
        write_atomic(out, |w| {
            serde_json::to_writer_pretty(&mut *w, &report)?;
            w.write_all(b"\n")?;
            Ok(())
        })?;
    }
    Ok(())
}

fn default_split_path(input: &Path, side: &str) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    input.with_file_name(format!("{stem}.{side}.jsonl"))
}

fn split(
    input: &Path,
    seed: u64,
    ratio: f64,
    train_out: Option<PathBuf>,
    test_out: Option<PathBuf>,
    strict: bool,
) -> Result<()> {
    // keep the original lines so every field survives the split
    let lines: Vec<String> = open(input)?.lines().collect::<io::Result<_>>()?;
    let mut instances = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_instance(line, i + 1) {
            Ok(inst) => instances.push(inst),
            Err(e) if strict => return Err(anyhow!(e).context(format!("in {}", input.display()))),
            Err(e) => errors.push(e),
        }
    }
    report_skipped("instances", &errors);
    let (train, test) = split_iid(&instances, seed, ratio)?;
    let train_out = train_out.unwrap_or_else(|| default_split_path(input, "train"));
    let test_out = test_out.unwrap_or_else(|| default_split_path(input, "test"));
    for (path, side) in [(&train_out, &train), (&test_out, &test)] {
        write_atomic(path, |w| {
            for inst in side {
                writeln!(w, "{}", lines[inst.line - 1])?;
            }
            Ok(())
        })?;
    }
    let stories = |v: &[EntailmentInstance]| {
        v.iter()
            .map(|i| i.story_id.clone().unwrap_or_else(|| format!("line {}", i.line)))
            .collect::<std::collections::HashSet<_>>()
            .len()
    };
    eprintln!(
        "train: {} instances / {} stories -> {}\ntest: {} instances / {} stories -> {}",
        train.len(),
        stories(&train),
        train_out.display(),
        test.len(),
        stories(&test),
        test_out.display()
    );
    Ok(())
}

fn ping(predictor: &str) -> Result<()> {
    let spec: PredictorSpec = predictor.parse()?;
    let t0 = Instant::now();
    let mut p = spec.connect()?;
    let connect = t0.elapsed();
    let t1 = Instant::now();
    let (start, distance) = p.dist(
        "Tom bought a bike",
        "he rode to the lake",
        "Tom bought a bike. Later he rode to the lake.",
    )?;
    let dist = t1.elapsed();
    let t2 = Instant::now();
    let duration = p.dur("slept")?;
    let dur = t2.elapsed();
    println!("connect  {:>10.3} ms", connect.as_secs_f64() * 1e3);
    println!(
        "dist     {:>10.3} ms  p_before={:.4} p_after={:.4} d={:?}",
        dist.as_secs_f64() * 1e3,
        start.p_before(),
        start.p_after(),
        distance.probs()
    );
    println!("dur      {:>10.3} ms  v={:?}", dur.as_secs_f64() * 1e3, duration.probs());
    Ok(())
}

fn annotate(inputs: &[PathBuf], out: &Path) -> Result<()> {
    let mut docs = Vec::with_capacity(inputs.len());
    for path in inputs {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("doc");
        docs.push(fallback_annotate(id, &text));
    }
    write_jsonl(out, &docs)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract {
            corpus,
            mode,
            out,
            strict,
            workers,
        } => extract(&corpus, mode, &out, strict, workers),
        Command::Format {
            kind,
            input,
            out,
            seed,
            strict,
        } => format(kind, &input, &out, seed, strict),
        Command::Predict {
            input,
            predictor,
            out,
            int_max,
            strict,
        } => predict(&input, &predictor, &out, int_max, strict),
        Command::Eval {
            gold,
            pred,
            out,
            difficulty,
            strict,
        } => eval(&gold, &pred, out.as_deref(), difficulty, strict),
        Command::Split {
            input,
            seed,
            ratio,
            train_out,
            test_out,
            strict,
        } => split(&input, seed, ratio, train_out, test_out, strict),
        Command::PingPredictor { predictor } => ping(&predictor),
        Command::ServeBaseline => {
            let stdin = io::stdin().lock();
            let stdout = io::stdout().lock();
            wire::serve(stdin, stdout, &mut BaselinePredictor::new())?;
            Ok(())
        }
        Command::Annotate { inputs, out } => annotate(&inputs, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
