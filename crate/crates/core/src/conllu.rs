//! CoNLL-U ingestion: payload parsing, serialization and corpus folders.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::doc::{format_feats, parse_feats, Document, Language, MultiwordToken, Sentence, Token, Upos};
use crate::error::{CorpusError, DocError, ParseError};

pub const DEFAULT_PATTERN: &str = "*.conllu";

/// One file of a corpus folder, read but not yet parsed.
#[derive(Debug, Clone)]
pub struct RawCorpusEntry {
    pub path: PathBuf,
    pub doc_id: String,
    pub payload: String,
}

impl RawCorpusEntry {
    pub fn read(path: &Path) -> Result<RawCorpusEntry, CorpusError> {
        let bytes = fs::read(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
        let payload = String::from_utf8(bytes).map_err(|e| CorpusError::InvalidUtf8 {
            path: path.to_path_buf(),
            offset: e.utf8_error().valid_up_to(),
        })?;
        Ok(RawCorpusEntry { path: path.to_path_buf(), doc_id: doc_id_for(path), payload })
    }

    pub fn parse(&self) -> Result<Document, CorpusError> {
        parse_conllu(&self.payload, &self.doc_id)
            .map_err(|source| CorpusError::Parse { path: self.path.clone(), source })
    }
}

fn doc_id_for(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

struct PendingSentence {
    tokens: Vec<Token>,
    lines: Vec<usize>,
    comments: Vec<String>,
    multiwords: Vec<MultiwordToken>,
    first_line: usize,
}

impl PendingSentence {
    fn new() -> Self {
        PendingSentence { tokens: Vec::new(), lines: Vec::new(), comments: Vec::new(), multiwords: Vec::new(), first_line: 0 }
    }

    fn is_blank(&self) -> bool {
        self.tokens.is_empty() && self.comments.is_empty() && self.multiwords.is_empty()
    }

    fn finish(self) -> Result<Sentence, ParseError> {
        let first_line = self.first_line;
        if self.tokens.is_empty() {
            return Err(ParseError::at(first_line, "sentence has no token lines"));
        }
        let line_of = |tok: usize| self.lines.get(tok).copied().unwrap_or(first_line);
        let n = self.tokens.len();
        for (i, t) in self.tokens.iter().enumerate() {
            if let Some(h) = t.head {
                if h >= n {
                    return Err(ParseError::at(
                        line_of(i),
                        format!("HEAD {} is outside the sentence (1..={n})", h + 1),
                    ));
                }
            }
        }
        for mw in &self.multiwords {
            if mw.end >= n {
                return Err(ParseError::at(first_line, format!("range {}-{} exceeds the sentence", mw.start + 1, mw.end + 1)));
            }
        }
        let lines = self.lines.clone();
        Sentence::new(self.tokens, self.comments, self.multiwords).map_err(|e| {
            let line = match &e {
                DocError::HeadOutOfRange { token, .. }
                | DocError::SelfLoop { token }
                | DocError::MissingDeprel { token }
                | DocError::Cycle { token } => lines.get(*token).copied().unwrap_or(first_line),
                _ => first_line,
            };
            ParseError::at(line, e.to_string())
        })
    }
}

fn parse_index(raw: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    raw.parse::<usize>()
        .map_err(|_| ParseError::at(line, format!("non-integer {what} `{raw}`")))
}

fn opt_column(raw: &str) -> Option<String> {
    (raw != "_").then(|| raw.to_string())
}

fn misc_column(raw: &str) -> Vec<String> {
    if raw == "_" {
        Vec::new()
    } else {
        raw.split('|').map(str::to_string).collect()
    }
}

/// Parse one CoNLL-U payload into a document.
///
/// Empty nodes (`8.1` ids of the enhanced representation) are skipped;
/// any other non-integer id is an error.
pub fn parse_conllu(payload: &str, doc_id: &str) -> Result<Document, ParseError> {
    let payload = payload.strip_prefix('\u{feff}').unwrap_or(payload);
    if payload.trim().is_empty() {
        return Err(ParseError::EmptyDocument);
    }

    let mut sentences = Vec::new();
    let mut language: Option<Language> = None;
    let mut cur = PendingSentence::new();

    for (i, raw_line) in payload.split('\n').enumerate() {
        let line_no = i + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);

        if line.trim().is_empty() {
            if !cur.is_blank() {
                let done = std::mem::replace(&mut cur, PendingSentence::new());
                sentences.push(done.finish()?);
            }
            continue;
        }
        if cur.is_blank() {
            cur.first_line = line_no;
        }

        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.strip_prefix(' ').unwrap_or(comment).to_string();
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "language" && language.is_none() {
                    language = Some(value.trim().parse().map_err(|e: String| ParseError::at(line_no, e))?);
                }
            }
            cur.comments.push(comment);
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ParseError::at(
                line_no,
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        let id = cols[0];

        if let Some((a, b)) = id.split_once('-') {
            let start = parse_index(a, line_no, "range start")?;
            let end = parse_index(b, line_no, "range end")?;
            if start == 0 || end < start || start != cur.tokens.len() + 1 {
                return Err(ParseError::at(line_no, format!("invalid multiword range `{id}`")));
            }
            cur.multiwords.push(MultiwordToken {
                start: start - 1,
                end: end - 1,
                form: cols[1].to_string(),
                misc: misc_column(cols[9]),
            });
            continue;
        }
        if let Some((a, b)) = id.split_once('.') {
            parse_index(a, line_no, "token id")?;
            parse_index(b, line_no, "token id")?;
            continue;
        }

        let id = parse_index(id, line_no, "token id")?;
        if id != cur.tokens.len() + 1 {
            return Err(ParseError::at(
                line_no,
                format!("token id {id} out of sequence (expected {})", cur.tokens.len() + 1),
            ));
        }
        let upos: Upos = cols[3].parse().map_err(|e: String| ParseError::at(line_no, e))?;
        let feats = parse_feats(cols[5]).map_err(|e| ParseError::at(line_no, e))?;
        let head = parse_index(cols[6], line_no, "HEAD")?;

        let mut token = Token::new(id - 1, cols[1], cols[2], upos);
        token = if head == 0 { token.as_root(cols[7]) } else { token.with_head(head - 1, cols[7]) };
        token = token.with_columns(opt_column(cols[4]), opt_column(cols[8]), misc_column(cols[9]));
        token.set_feats(feats);
        cur.tokens.push(token);
        cur.lines.push(line_no);
    }
    if !cur.is_blank() {
        sentences.push(cur.finish()?);
    }
    if sentences.is_empty() {
        return Err(ParseError::EmptyDocument);
    }

    Ok(Document::new(doc_id, language, sentences))
}

/// Serialize a document back to CoNLL-U.
pub fn to_conllu(doc: &Document) -> String {
    let mut out = String::new();
    for sentence in doc.sentences() {
        for c in sentence.comments() {
            let _ = writeln!(out, "# {c}");
        }
        for t in sentence.tokens() {
            for mw in sentence.multiwords().iter().filter(|m| m.start == t.index) {
                let misc = if mw.misc.is_empty() { "_".to_string() } else { mw.misc.join("|") };
                let _ = writeln!(out, "{}-{}\t{}\t_\t_\t_\t_\t_\t_\t_\t{}", mw.start + 1, mw.end + 1, mw.form, misc);
            }
            let head = t.head.map_or(0, |h| h + 1);
            let misc = if t.misc.is_empty() { "_".to_string() } else { t.misc.join("|") };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index + 1,
                t.form,
                t.lemma,
                t.upos,
                t.xpos.as_deref().unwrap_or("_"),
                format_feats(&t.feats),
                head,
                t.deprel,
                t.deps.as_deref().unwrap_or("_"),
                misc,
            );
        }
        out.push('\n');
    }
    out
}

/// Result of loading a corpus folder: parsed documents plus the files
/// that failed.
#[derive(Debug)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub errors: Vec<CorpusError>,
    pub discovered: usize,
}

/// Regular files directly inside `dir` whose name matches `pattern`,
/// sorted by path.
pub fn discover(dir: &Path, pattern: &str) -> Result<Vec<PathBuf>, CorpusError> {
    let glob = glob::Pattern::new(pattern).map_err(|_| CorpusError::BadPattern(pattern.to_string()))?;
    let entries = fs::read_dir(dir).map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source })?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source })?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let name = entry.file_name();
        if glob.matches(&name.to_string_lossy()) {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(CorpusError::EmptyCorpus { dir: dir.to_path_buf(), pattern: pattern.to_string() });
    }
    files.sort();
    Ok(files)
}

/// Assemble parse outcomes into a corpus: documents sorted by id (byte
/// order), duplicate ids rejected.
pub fn assemble(outcomes: Vec<Result<Document, CorpusError>>, paths: &[PathBuf]) -> Corpus {
    let discovered = outcomes.len();
    let mut documents = Vec::new();
    let mut errors = Vec::new();
    let mut ids = HashSet::new();
    for (outcome, path) in outcomes.into_iter().zip(paths) {
        match outcome {
            Ok(doc) if !ids.insert(doc.doc_id.clone()) => {
                errors.push(CorpusError::DuplicateId { doc_id: doc.doc_id, path: path.clone() })
            }
            Ok(doc) => documents.push(doc),
            Err(e) => errors.push(e),
        }
    }
    documents.sort_by(|a, b| a.doc_id.as_bytes().cmp(b.doc_id.as_bytes()));
    Corpus { documents, errors, discovered }
}

/// Load every file matching `pattern` in `dir`.
pub fn load_corpus(dir: &Path, pattern: &str) -> Result<Corpus, CorpusError> {
    let paths = discover(dir, pattern)?;
    let outcomes = paths
        .iter()
        .map(|p| RawCorpusEntry::read(p).and_then(|e| e.parse()))
        .collect();
    Ok(assemble(outcomes, &paths))
}
