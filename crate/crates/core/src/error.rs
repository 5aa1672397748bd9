use std::path::PathBuf;

use thiserror::Error;

/// Structural violations in a sentence or a misuse of a tree query.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("token at position {expected} carries index {found}")]
    BadIndex { expected: usize, found: usize },
    #[error("token {token} has head {head} outside the sentence")]
    HeadOutOfRange { token: usize, head: usize },
    #[error("token {token} is its own head")]
    SelfLoop { token: usize },
    #[error("token {token} has an empty dependency relation")]
    MissingDeprel { token: usize },
    #[error("sentence must have exactly one root, found {0}")]
    RootCount(usize),
    #[error("dependency cycle through token {token}")]
    Cycle { token: usize },
    #[error("multiword range {start}-{end} is invalid")]
    BadRange { start: usize, end: usize },
    #[error("token `{0}` does not belong to this sentence")]
    ForeignToken(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty document")]
    EmptyDocument,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Line { line, message: message.into() }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Line { line, .. } => Some(*line),
            ParseError::EmptyDocument => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("empty corpus: no files match `{pattern}` in {}", dir.display())]
    EmptyCorpus { dir: PathBuf, pattern: String },
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{} is not valid UTF-8 (byte offset {offset})", path.display())]
    InvalidUtf8 { path: PathBuf, offset: usize },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("duplicate document id `{doc_id}` ({})", path.display())]
    DuplicateId { doc_id: String, path: PathBuf },
    #[error("invalid file pattern `{0}`")]
    BadPattern(String),
}

impl CorpusError {
    /// File the error refers to, when it is a per-file error.
    pub fn path(&self) -> Option<&std::path::Path> {
        match self {
            CorpusError::Io { path, .. }
            | CorpusError::InvalidUtf8 { path, .. }
            | CorpusError::Parse { path, .. }
            | CorpusError::DuplicateId { path, .. } => Some(path),
            CorpusError::EmptyCorpus { .. } | CorpusError::BadPattern(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("lexicon `{0}` has no entries")]
    Empty(String),
    #[error("lexicon `{name}` is not valid UTF-8")]
    InvalidUtf8 { name: String },
    #[error("lexicon `{name}` line {line}: bad weight `{value}`")]
    BadWeight { name: String, line: usize, value: String },
    #[error("cannot read lexicon {path}: {message}")]
    Io { path: String, message: String },
    #[error("lexicon `{0}` carries no weights")]
    Unweighted(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormsError {
    #[error("norms file is empty")]
    Empty,
    #[error("norms header is missing dimension `{0}`")]
    MissingDimension(String),
    #[error("norms header column `{0}` must look like `name=mean`")]
    BadHeader(String),
    #[error("norms line {line}: {message}")]
    Line { line: usize, message: String },
}

/// Failure of a single counting rule; recorded on the metric result.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct MetricError(pub String);

#[derive(Debug, Error)]
pub enum PackError {
    /// Carries the full message, supported codes included.
    #[error("{0}")]
    UnknownLanguage(String),
    #[error("manifest {file}: {message}")]
    Manifest { file: String, message: String },
    #[error("metric {id}: {message}")]
    Metric { id: String, message: String },
    #[error("duplicate metric id {0}")]
    DuplicateId(String),
    #[error("metric {id}: unknown detector `{name}`")]
    UnknownDetector { id: String, name: String },
    #[error("metric {id}: missing lexicon `{name}`")]
    MissingLexicon { id: String, name: String },
    #[error("pack file `{0}` not found")]
    MissingFile(String),
    #[error("lexicon `{name}`: {source}")]
    Lexicon { name: String, source: LexiconError },
    #[error("norms `{name}`: {source}")]
    Norms { name: String, source: NormsError },
    #[error("unknown category `{category}` for language {language}")]
    UnknownCategory { category: String, language: String },
    #[error("unknown metric id {0}")]
    UnknownMetric(String),
}

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("vectors use different metric schemas ({0} vs {1})")]
    MixedSchemas(String, String),
    #[error("capture {sentence}:{token} of metric {metric} does not exist in document {doc_id}")]
    DanglingCapture { doc_id: String, metric: String, sentence: usize, token: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
