use crate::language::Language;

/// Crate-wide error type. Recoverable per-record problems (rejected input
/// lines) are reported as data, not as errors; this enum covers conditions
/// that invalidate a whole call.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("unknown article id `{0}`")]
    UnknownArticle(String),

    #[error("no articles in language {0}")]
    EmptyPartition(Language),

    #[error("phrase contains no tokens")]
    EmptyPhrase,

    #[error("no index built for language {0}")]
    MissingIndex(Language),

    #[error("article body contains no tokens")]
    NoTokens,

    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },

    #[error("records span more than one language")]
    MixedLanguages,

    #[error("baseline mean must be positive, got {0}")]
    NonPositiveBaseline(f64),

    #[error("probability out of range: {0}")]
    ProbabilityRange(f64),

    #[error("sentiment probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("no scored mentions for entity `{0}`")]
    NoMentions(String),

    #[error("no cue lexicon for language {0}")]
    MissingLexicon(Language),

    #[error("link threshold must be in [0, 1], got {0}")]
    InvalidThreshold(f64),

    #[error("{file} line {line}: {msg}")]
    Table {
        file: &'static str,
        line: usize,
        msg: String,
    },

    #[error("invalid cue pattern `{pattern}`: {source}")]
    Pattern {
        pattern: String,
        source: regex::Error,
    },

    #[error("empty series")]
    EmptySeries,

    #[error("series of length {got} is too short, need at least {needed}")]
    SeriesTooShort { got: usize, needed: usize },

    #[error("window must be odd and positive, got {0}")]
    InvalidWindow(usize),

    #[error("span must be in (0, 1], got {0}")]
    InvalidSpan(f64),

    #[error("penalty must be positive and finite, got {0}")]
    InvalidPenalty(f64),

    #[error("hazard must be in (0, 1), got {0}")]
    InvalidHazard(f64),

    #[error("breakpoint count {k} exceeds maximum {max} for this series")]
    TooManyBreakpoints { k: usize, max: usize },

    #[error("series contains a non-finite value at index {0}")]
    NonFiniteValue(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
