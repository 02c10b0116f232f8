//! Temporal relation extraction and symbolic end-time reasoning.
//!
//! The crate is organized in three parts:
//!
//! * a distant-supervision pipeline ([`extract`], [`tex`], [`annotate`]) that harvests
//!   start-order event pairs from annotated text and serializes them as seq2seq training
//!   data ([`format`]);
//! * a symbolic engine ([`engine`]) that composes start-order, distance and duration
//!   probabilities into end-time decisions, with a differentiable loss, behind a
//!   pluggable [`predictor`];
//! * an evaluation harness ([`eval`]) for start/end entailment datasets.

pub mod annotate;
pub mod engine;
pub mod error;
pub mod eval;
pub mod extract;
pub mod format;
pub mod lexicon;
pub mod predictor;
pub mod tex;
pub mod types;
pub mod unit;

pub use error::{Error, Result};
pub use types::{Comparator, EventPhrase, Label, Relation};
pub use unit::{bucket_of_seconds, TemporalUnit};
