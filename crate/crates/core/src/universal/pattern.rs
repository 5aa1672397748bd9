//! Declarative token and sentence predicates.
//!
//! A [`TokenTest`] is a conjunction of optional checks on one token and
//! its immediate neighbourhood (head, children, linear neighbours). A
//! [`PatternSpec`] either counts matching tokens or, for sentence targets,
//! every token of each matching sentence.

use std::collections::BTreeMap;

use regex::Regex;
use serde::{Deserialize, Deserializer};

use crate::doc::{has_feat, Document, Sentence, TokenRef, Upos};
use crate::engine::{Count, CountingRule};
use crate::error::MetricError;

fn regex_opt<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Regex>, D::Error> {
    let raw: Option<String> = Option::deserialize(d)?;
    raw.map(|r| Regex::new(&r).map_err(serde::de::Error::custom)).transpose()
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenTest {
    /// UPOS must be one of these.
    #[serde(default)]
    pub upos: Vec<Upos>,
    #[serde(default)]
    pub not_upos: Vec<Upos>,
    #[serde(default)]
    pub xpos_prefix: Vec<String>,
    /// Full relation label, subtype included.
    #[serde(default)]
    pub deprel: Vec<String>,
    /// Relation label without subtype.
    #[serde(default)]
    pub deprel_base: Vec<String>,
    /// Every listed feature must be present (multivalue aware).
    #[serde(default)]
    pub feats: BTreeMap<String, String>,
    /// Listed features must have none of these values.
    #[serde(default)]
    pub not_feats: BTreeMap<String, String>,
    #[serde(default)]
    pub lemma: Vec<String>,
    #[serde(default)]
    pub form: Vec<String>,
    #[serde(default, deserialize_with = "regex_opt")]
    pub form_regex: Option<Regex>,
    #[serde(default)]
    pub entity: Vec<String>,
    #[serde(default)]
    pub root: Option<bool>,
    #[serde(default)]
    pub head: Option<Box<TokenTest>>,
    /// Each listed test must be satisfied by at least one child.
    #[serde(default)]
    pub child: Vec<TokenTest>,
    /// No child may satisfy any listed test.
    #[serde(default)]
    pub no_child: Vec<TokenTest>,
    #[serde(default)]
    pub prev: Option<Box<TokenTest>>,
    #[serde(default)]
    pub next: Option<Box<TokenTest>>,
    /// At least one alternative must hold, when non-empty.
    #[serde(default)]
    pub any: Vec<TokenTest>,
    #[serde(default)]
    pub not: Option<Box<TokenTest>>,
}

impl TokenTest {
    /// Lowercase lemma and form lists so matching is case-insensitive.
    pub fn prepare(&mut self) {
        for v in self.lemma.iter_mut().chain(self.form.iter_mut()) {
            *v = v.to_lowercase();
        }
        let nested = self
            .head
            .iter_mut()
            .chain(self.prev.iter_mut())
            .chain(self.next.iter_mut())
            .chain(self.not.iter_mut())
            .map(|b| b.as_mut());
        for t in nested.chain(self.child.iter_mut()).chain(self.no_child.iter_mut()).chain(self.any.iter_mut()) {
            t.prepare();
        }
    }

    pub fn matches(&self, sentence: &Sentence, index: usize) -> bool {
        let Some(t) = sentence.token(index) else { return false };
        if !self.upos.is_empty() && !self.upos.contains(&t.upos) {
            return false;
        }
        if self.not_upos.contains(&t.upos) {
            return false;
        }
        if !self.xpos_prefix.is_empty() {
            let xpos = t.xpos.as_deref().unwrap_or("");
            if !self.xpos_prefix.iter().any(|p| xpos.starts_with(p.as_str())) {
                return false;
            }
        }
        if !self.deprel.is_empty() && !self.deprel.contains(&t.deprel) {
            return false;
        }
        if !self.deprel_base.is_empty() && !self.deprel_base.iter().any(|d| d == t.deprel_base()) {
            return false;
        }
        if !self.feats.iter().all(|(k, v)| v.split(',').any(|v| has_feat(t, k, v))) {
            return false;
        }
        if self.not_feats.iter().any(|(k, v)| v.split(',').any(|v| has_feat(t, k, v))) {
            return false;
        }
        if !self.lemma.is_empty() && !self.lemma.iter().any(|l| l == t.folded_lemma()) {
            return false;
        }
        if !self.form.is_empty() && !self.form.iter().any(|f| f == t.folded_form()) {
            return false;
        }
        if let Some(re) = &self.form_regex {
            if !re.is_match(&t.form) {
                return false;
            }
        }
        if !self.entity.is_empty() && !t.entity.as_ref().is_some_and(|e| self.entity.contains(e)) {
            return false;
        }
        if let Some(root) = self.root {
            if t.is_root() != root {
                return false;
            }
        }
        if let Some(head) = &self.head {
            match t.head {
                Some(h) if head.matches(sentence, h) => {}
                _ => return false,
            }
        }
        let kids = sentence.children_of(index);
        if !self.child.iter().all(|c| kids.iter().any(|&k| c.matches(sentence, k))) {
            return false;
        }
        if self.no_child.iter().any(|c| kids.iter().any(|&k| c.matches(sentence, k))) {
            return false;
        }
        if let Some(prev) = &self.prev {
            if index == 0 || !prev.matches(sentence, index - 1) {
                return false;
            }
        }
        if let Some(next) = &self.next {
            if !next.matches(sentence, index + 1) {
                return false;
            }
        }
        if !self.any.is_empty() && !self.any.iter().any(|a| a.matches(sentence, index)) {
            return false;
        }
        if let Some(not) = &self.not {
            if not.matches(sentence, index) {
                return false;
            }
        }
        true
    }
}

/// Quantified token test over a whole sentence.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SentenceTest {
    Exists(TokenTest),
    NotExists(TokenTest),
    ForAll(TokenTest),
    First(TokenTest),
    Last(TokenTest),
    /// The last non-punctuation token.
    LastWord(TokenTest),
}

impl SentenceTest {
    fn prepare(&mut self) {
        match self {
            SentenceTest::Exists(t)
            | SentenceTest::NotExists(t)
            | SentenceTest::ForAll(t)
            | SentenceTest::First(t)
            | SentenceTest::Last(t)
            | SentenceTest::LastWord(t) => t.prepare(),
        }
    }

    pub fn holds(&self, sentence: &Sentence) -> bool {
        let n = sentence.len();
        match self {
            SentenceTest::Exists(t) => (0..n).any(|i| t.matches(sentence, i)),
            SentenceTest::NotExists(t) => !(0..n).any(|i| t.matches(sentence, i)),
            SentenceTest::ForAll(t) => (0..n).all(|i| t.matches(sentence, i)),
            SentenceTest::First(t) => n > 0 && t.matches(sentence, 0),
            SentenceTest::Last(t) => n > 0 && t.matches(sentence, n - 1),
            SentenceTest::LastWord(t) => sentence
                .tokens()
                .iter()
                .rposition(|tok| !tok.is_punct())
                .is_some_and(|i| t.matches(sentence, i)),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentencePredicate {
    #[serde(default)]
    pub all: Vec<SentenceTest>,
    #[serde(default)]
    pub any: Vec<SentenceTest>,
}

impl SentencePredicate {
    pub fn holds(&self, sentence: &Sentence) -> bool {
        self.all.iter().all(|t| t.holds(sentence)) && (self.any.is_empty() || self.any.iter().any(|t| t.holds(sentence)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    Token,
    Sentence,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    #[serde(default)]
    pub target: Target,
    /// Token filter; for sentence targets it is ignored.
    #[serde(default)]
    pub token: TokenTest,
    /// Sentences the pattern applies to.
    #[serde(default)]
    pub sentence: SentencePredicate,
}

impl PatternSpec {
    pub fn prepare(&mut self) {
        self.token.prepare();
        for t in self.sentence.all.iter_mut().chain(self.sentence.any.iter_mut()) {
            t.prepare();
        }
    }

    pub fn prepared(mut self) -> Self {
        self.prepare();
        self
    }

    /// Captured tokens of one sentence.
    pub fn capture_sentence(&self, sentence: &Sentence) -> Vec<usize> {
        if !self.sentence.holds(sentence) {
            return Vec::new();
        }
        match self.target {
            Target::Sentence => (0..sentence.len()).collect(),
            Target::Token => (0..sentence.len()).filter(|&i| self.token.matches(sentence, i)).collect(),
        }
    }
}

/// Count tokens (or tokens of matching sentences) described by `spec`.
pub fn pattern_incidence(doc: &Document, spec: &PatternSpec) -> Count {
    let mut captured = Vec::new();
    for (si, s) in doc.sentences().iter().enumerate() {
        captured.extend(spec.capture_sentence(s).into_iter().map(|ti| TokenRef::new(si, ti)));
    }
    Count::tokens(captured)
}

impl CountingRule for PatternSpec {
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        Ok(pattern_incidence(doc, self))
    }
}
