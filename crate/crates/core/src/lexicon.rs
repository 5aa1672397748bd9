//! Word lists behind lexicon-driven metrics.
//!
//! File format: one entry per line, `#` starts a comment line, an
//! optional tab-separated signed weight follows the entry. Entries are
//! case-folded; phrase entries are whitespace-separated forms.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::doc::{Document, Token, TokenRef};
use crate::engine::{Count, CountingRule};
use crate::error::{LexiconError, MetricError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexiconMode {
    LemmaExact,
    FormExact,
    Prefix,
    Phrase,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    name: String,
    mode: LexiconMode,
    entries: HashMap<String, Option<f64>>,
    exceptions: HashSet<String>,
    /// Phrase entries split into forms, longest first.
    phrases: Vec<Vec<String>>,
}

/// A parsed lexicon together with non-fatal load diagnostics.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub lexicon: Lexicon,
    pub warnings: Vec<String>,
}

fn fold(entry: &str) -> String {
    entry.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn parse_lines(name: &str, text: &str, warnings: &mut Vec<String>) -> Result<Vec<(String, Option<f64>)>, LexiconError> {
    let mut out: Vec<(String, Option<f64>)> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (entry, weight) = match line.split_once('\t') {
            Some((e, w)) => {
                let w = w.trim();
                let value = w.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    LexiconError::BadWeight { name: name.to_string(), line: i + 1, value: w.to_string() }
                })?;
                (e, Some(value))
            }
            None => (line, None),
        };
        let entry = fold(entry);
        if entry.is_empty() {
            continue;
        }
        if !seen.insert(entry.clone()) {
            warnings.push(format!("lexicon `{name}` line {}: duplicate entry `{entry}` ignored", i + 1));
            continue;
        }
        out.push((entry, weight));
    }
    Ok(out)
}

impl Lexicon {
    pub fn parse(name: &str, text: &str, mode: LexiconMode) -> Result<Parsed, LexiconError> {
        let mut warnings = Vec::new();
        let lines = parse_lines(name, text, &mut warnings)?;
        if lines.is_empty() {
            return Err(LexiconError::Empty(name.to_string()));
        }
        let mut phrases: Vec<Vec<String>> = if mode == LexiconMode::Phrase {
            lines.iter().map(|(e, _)| e.split(' ').map(str::to_string).collect()).collect()
        } else {
            Vec::new()
        };
        phrases.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let lexicon = Lexicon {
            name: name.to_string(),
            mode,
            entries: lines.into_iter().collect(),
            exceptions: HashSet::new(),
            phrases,
        };
        Ok(Parsed { lexicon, warnings })
    }

    pub fn from_bytes(name: &str, bytes: &[u8], mode: LexiconMode) -> Result<Parsed, LexiconError> {
        let text = std::str::from_utf8(bytes).map_err(|_| LexiconError::InvalidUtf8 { name: name.to_string() })?;
        Lexicon::parse(name, text, mode)
    }

    /// Add forms that a prefix entry must not match. Returns warnings.
    pub fn with_exceptions(mut self, text: &str) -> Result<Parsed, LexiconError> {
        let mut warnings = Vec::new();
        let lines = parse_lines(&format!("{}/exceptions", self.name), text, &mut warnings)?;
        if self.mode != LexiconMode::Prefix && !lines.is_empty() {
            warnings.push(format!("lexicon `{}`: exceptions have no effect outside prefix mode", self.name));
        }
        self.exceptions.extend(lines.into_iter().map(|(e, _)| e));
        Ok(Parsed { lexicon: self, warnings })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> LexiconMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, entry: &str) -> bool {
        self.entries.contains_key(&fold(entry))
    }

    pub fn weight(&self, entry: &str) -> Option<f64> {
        self.entries.get(&fold(entry)).copied().flatten()
    }

    pub fn is_weighted(&self) -> bool {
        self.entries.values().any(Option::is_some)
    }

    pub fn exceptions(&self) -> &HashSet<String> {
        &self.exceptions
    }

    /// Entry matched by a single token, for the non-phrase modes.
    fn token_entry(&self, token: &Token) -> Option<&str> {
        let key = match self.mode {
            LexiconMode::LemmaExact => token.folded_lemma(),
            LexiconMode::FormExact => token.folded_form(),
            LexiconMode::Prefix => {
                let form = token.folded_form();
                if self.exceptions.contains(form) {
                    return None;
                }
                // shortest matching prefix, so the choice is deterministic
                return (1..=form.len())
                    .filter(|&i| form.is_char_boundary(i))
                    .find_map(|i| self.entries.get_key_value(&form[..i]).map(|(k, _)| k.as_str()));
            }
            LexiconMode::Phrase => unreachable!("phrase lexicons match token runs"),
        };
        self.entries.get_key_value(key).map(|(k, _)| k.as_str())
    }

    /// Every token hit together with the entry it matched.
    pub fn matches<'a>(&'a self, doc: &Document) -> Vec<(TokenRef, &'a str)> {
        let mut hits = Vec::new();
        for (si, s) in doc.sentences().iter().enumerate() {
            let toks = s.tokens();
            if self.mode != LexiconMode::Phrase {
                for t in toks {
                    if let Some(e) = self.token_entry(t) {
                        hits.push((TokenRef::new(si, t.index), e));
                    }
                }
                continue;
            }
            let mut i = 0;
            while i < toks.len() {
                let found = self.phrases.iter().find(|p| {
                    p.len() <= toks.len() - i && p.iter().zip(&toks[i..]).all(|(w, t)| w == t.folded_form())
                });
                match found {
                    Some(p) => {
                        let key = p.join(" ");
                        let entry = self.entries.get_key_value(&key).map(|(k, _)| k.as_str()).unwrap_or_default();
                        hits.extend((i..i + p.len()).map(|ti| (TokenRef::new(si, ti), entry)));
                        i += p.len();
                    }
                    None => i += 1,
                }
            }
        }
        hits
    }
}

pub fn load_lexicon(path: &Path, mode: LexiconMode) -> Result<Lexicon, LexiconError> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let bytes = std::fs::read(path)
        .map_err(|e| LexiconError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let parsed = Lexicon::from_bytes(&name, &bytes, mode)?;
    for w in &parsed.warnings {
        log::warn!("{w}");
    }
    Ok(parsed.lexicon)
}

pub fn lexicon_incidence(doc: &Document, lexicon: &Lexicon) -> Count {
    Count::tokens(lexicon.matches(doc).into_iter().map(|(r, _)| r).collect())
}

/// `(positive, negative)` hit counts. Entries weighted exactly 0 or
/// not weighted count in neither.
pub fn sentiment_scores(doc: &Document, lexicon: &Lexicon) -> Result<(Count, Count), LexiconError> {
    if !lexicon.is_weighted() {
        return Err(LexiconError::Unweighted(lexicon.name.clone()));
    }
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (r, entry) in lexicon.matches(doc) {
        match lexicon.entries.get(entry).copied().flatten() {
            Some(w) if w > 0.0 => pos.push(r),
            Some(w) if w < 0.0 => neg.push(r),
            _ => {}
        }
    }
    Ok((Count::tokens(pos), Count::tokens(neg)))
}

#[derive(Debug, Clone)]
pub struct LexiconRule(pub Arc<Lexicon>);

impl CountingRule for LexiconRule {
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        Ok(lexicon_incidence(doc, &self.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone)]
pub struct SentimentRule {
    pub lexicon: Arc<Lexicon>,
    pub polarity: Polarity,
}

impl CountingRule for SentimentRule {
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        let (pos, neg) = sentiment_scores(doc, &self.lexicon).map_err(|e| MetricError(e.to_string()))?;
        Ok(match self.polarity {
            Polarity::Positive => pos,
            Polarity::Negative => neg,
        })
    }
}
