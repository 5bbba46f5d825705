//! Analytics for multilingual news corpora: ingest and cleaning, event retrieval,
//! lexical complexity indices, entity anchoring, targeted sentiment, and
//! consensus change-point detection over weekly series.

pub mod calendar;
pub mod changepoint;
pub mod corpus;
pub mod domestication;
pub mod entities;
pub mod error;
pub mod language;
pub mod lexical;
pub mod retrieval;
pub mod sentiment;

pub use calendar::{MonthKey, Week};
pub use corpus::{Article, CorpusStore, IngestReport};
pub use error::{Error, Result};
pub use language::Language;
