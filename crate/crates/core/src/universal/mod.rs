//! Language-agnostic metric families: incidence counters, lexical
//! statistics, graphical detectors, distances and repetitions.
//!
//! Each family function returns the raw [`Count`]; the engine turns it
//! into a ratio over all document tokens.

pub mod graphical;
pub mod pattern;
pub mod syllables;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Deserialize;

use crate::doc::{Document, Language, Token, TokenRef, Upos};
use crate::engine::{Count, CountingRule, Locality};
use crate::error::MetricError;

pub use graphical::{Emoticons, GraphicalKind};
pub use pattern::{pattern_incidence, PatternSpec, SentencePredicate, SentenceTest, Target, TokenTest};
pub use syllables::syllable_count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Form,
    Lemma,
}

fn unit_key(token: &Token, unit: Unit) -> &str {
    match unit {
        Unit::Form => token.folded_form(),
        Unit::Lemma => token.folded_lemma(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencySpec {
    pub top_fraction: f64,
    pub unit: Unit,
}

impl FrequencySpec {
    pub fn new(top_fraction: f64, unit: Unit) -> Result<FrequencySpec, String> {
        let spec = FrequencySpec { top_fraction, unit };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.top_fraction > 0.0 && self.top_fraction <= 1.0 {
            Ok(())
        } else {
            Err(format!("top_fraction must be in (0, 1], got {}", self.top_fraction))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PhraseHead {
    Noun,
    Verb,
    Adp,
    Adj,
    Adv,
}

impl PhraseHead {
    pub fn upos(self) -> Upos {
        match self {
            PhraseHead::Noun => Upos::Noun,
            PhraseHead::Verb => Upos::Verb,
            PhraseHead::Adp => Upos::Adp,
            PhraseHead::Adj => Upos::Adj,
            PhraseHead::Adv => Upos::Adv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepetitionUnit {
    LemmaBigram,
    Sentence,
}

fn capture_where(doc: &Document, mut pred: impl FnMut(&Token) -> bool) -> Count {
    Count::tokens(doc.iter_refs().filter(|(_, t)| pred(t)).map(|(r, _)| r).collect())
}

pub fn pos_incidence(doc: &Document, upos: Upos) -> Count {
    capture_where(doc, |t| t.upos == upos)
}

/// Tokens with the given UPOS (if any) carrying every listed feature.
pub fn feat_incidence(doc: &Document, upos: Option<Upos>, feats: &BTreeMap<String, String>) -> Count {
    capture_where(doc, |t| {
        upos.is_none_or(|u| t.upos == u) && feats.iter().all(|(k, v)| crate::doc::has_feat(t, k, v))
    })
}

/// Distinct case-folded non-punctuation units over all tokens. The
/// first occurrence of each type is captured.
pub fn type_token_ratio(doc: &Document, unit: Unit) -> Count {
    let mut seen = std::collections::HashSet::new();
    let mut captured = Vec::new();
    for (r, t) in doc.iter_refs() {
        if !t.is_punct() && seen.insert(unit_key(t, unit)) {
            captured.push(r);
        }
    }
    Count::tokens(captured)
}

/// Number of types selected for a fraction: `ceil(fraction * types)`,
/// guarded against float noise (`0.05 * 100` must give 5, not 6).
pub fn top_type_count(top_fraction: f64, types: usize) -> usize {
    let exact = top_fraction * types as f64;
    let rounded = exact.round();
    let k = if (exact - rounded).abs() < 1e-9 { rounded } else { exact.ceil() };
    (k as usize).min(types)
}

/// Tokens belonging to the most frequent types, ranked by frequency
/// (descending) and then by the type string.
pub fn top_frequency_incidence(doc: &Document, spec: &FrequencySpec) -> Count {
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for (_, t) in doc.iter_refs() {
        if !t.is_punct() {
            *freq.entry(unit_key(t, spec.unit)).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let k = top_type_count(spec.top_fraction, ranked.len());
    let selected: std::collections::HashSet<&str> = ranked[..k].iter().map(|(w, _)| *w).collect();
    capture_where(doc, |t| !t.is_punct() && selected.contains(unit_key(t, spec.unit)))
}

pub fn word_length_incidence(doc: &Document, min_syllables: usize, language: Language) -> Count {
    capture_where(doc, |t| !t.is_punct() && syllable_count(&t.form, language) >= min_syllables)
}

/// `(content, function)` word counts.
pub fn function_content_split(doc: &Document) -> (Count, Count) {
    (capture_where(doc, |t| t.upos.is_content()), capture_where(doc, |t| t.upos.is_function()))
}

pub fn graphical_incidence(doc: &Document, kind: GraphicalKind, emoticons: &Emoticons) -> Count {
    capture_where(doc, |t| graphical::detect(kind, &t.form, emoticons))
}

/// Mean gap, in tokens, between consecutive phrase heads in document
/// order. A head is a token of the given UPOS whose own head has a
/// different UPOS. Fewer than two heads give 0.
pub fn phrase_distance(doc: &Document, head: PhraseHead) -> Count {
    let upos = head.upos();
    let mut heads = Vec::new();
    let mut positions = Vec::new();
    let mut offset = 0;
    for (si, s) in doc.sentences().iter().enumerate() {
        for t in s.tokens() {
            let chained = s.head_of(t).is_some_and(|h| h.upos == upos);
            if t.upos == upos && !chained {
                heads.push(TokenRef::new(si, t.index));
                positions.push(offset + t.index);
            }
        }
        offset += s.len();
    }
    if positions.len() < 2 {
        return Count::with_raw(0.0, heads);
    }
    let span = positions[positions.len() - 1] - positions[0];
    let mean = span as f64 / (positions.len() - 1) as f64;
    Count::with_raw(mean, heads)
}

/// Tokens taking part in repeated lemma bigrams, or tokens of repeated
/// sentences (case-folded surface text).
pub fn repetition_incidence(doc: &Document, unit: RepetitionUnit) -> Count {
    match unit {
        RepetitionUnit::LemmaBigram => {
            let mut occurrences: HashMap<(&str, &str), Vec<TokenRef>> = HashMap::new();
            for (si, s) in doc.sentences().iter().enumerate() {
                for pair in s.tokens().windows(2) {
                    let (a, b) = (&pair[0], &pair[1]);
                    if a.is_punct() || b.is_punct() {
                        continue;
                    }
                    let refs = occurrences.entry((a.folded_lemma(), b.folded_lemma())).or_default();
                    refs.push(TokenRef::new(si, a.index));
                    refs.push(TokenRef::new(si, b.index));
                }
            }
            let captured = occurrences
                .into_values()
                .filter(|refs| refs.len() >= 4)
                .flatten()
                .collect();
            Count::tokens(captured)
        }
        RepetitionUnit::Sentence => {
            let texts: Vec<String> = doc.sentences().iter().map(|s| s.text().to_lowercase()).collect();
            let mut freq: HashMap<&str, usize> = HashMap::new();
            for t in &texts {
                *freq.entry(t.as_str()).or_default() += 1;
            }
            let mut captured = Vec::new();
            for (si, s) in doc.sentences().iter().enumerate() {
                if freq[texts[si].as_str()] >= 2 {
                    captured.extend((0..s.len()).map(|ti| TokenRef::new(si, ti)));
                }
            }
            Count::tokens(captured)
        }
    }
}

/// A configured family, usable as a registry counting rule.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Family {
    Pos(Upos),
    Feats { upos: Option<Upos>, feats: BTreeMap<String, String> },
    Pattern(PatternSpec),
    TypeToken(Unit),
    TopFrequency(FrequencySpec),
    WordLength { min_syllables: usize, language: Language },
    ContentWords,
    FunctionWords,
    Graphical { kind: GraphicalKind, emoticons: Arc<Emoticons> },
    PhraseDistance(PhraseHead),
    Repetition(RepetitionUnit),
}

impl CountingRule for Family {
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        Ok(match self {
            Family::Pos(u) => pos_incidence(doc, *u),
            Family::Feats { upos, feats } => feat_incidence(doc, *upos, feats),
            Family::Pattern(spec) => pattern_incidence(doc, spec),
            Family::TypeToken(unit) => type_token_ratio(doc, *unit),
            Family::TopFrequency(spec) => top_frequency_incidence(doc, spec),
            Family::WordLength { min_syllables, language } => word_length_incidence(doc, *min_syllables, *language),
            Family::ContentWords => function_content_split(doc).0,
            Family::FunctionWords => function_content_split(doc).1,
            Family::Graphical { kind, emoticons } => graphical_incidence(doc, *kind, emoticons),
            Family::PhraseDistance(head) => phrase_distance(doc, *head),
            Family::Repetition(unit) => repetition_incidence(doc, *unit),
        })
    }

    fn locality(&self) -> Locality {
        match self {
            Family::TypeToken(_) | Family::TopFrequency(_) | Family::PhraseDistance(_) | Family::Repetition(_) => {
                Locality::Document
            }
            _ => Locality::Sentence,
        }
    }
}
