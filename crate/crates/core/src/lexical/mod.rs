//! Per-article lexical metrics (TTR, lexical density, mean sentence length),
//! within-language standardization, relative change, and monthly aggregation.

mod metrics;
mod monthly;
mod text;
mod wordlists;

pub use metrics::{
    article_metrics, standardize, LanguageBaseline, LexicalRecord, Metric, MetricStats,
};
pub use monthly::{monthly_mean, relative_change, relative_change_series, MonthlySeries, Smoothing};
pub use text::{sentence_starts, split_sentences, tokenize};
pub use wordlists::{default_abbreviations, default_function_words, Abbreviations, WordList};
