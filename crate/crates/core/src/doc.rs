//! Immutable document model: tokens, sentences, documents and the
//! structural queries (morphology, dependency navigation) metrics rely on.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DocError;

/// Universal POS tags (UD v2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }

    /// Open-class tags counted as content words.
    pub fn is_content(self) -> bool {
        matches!(self, Upos::Noun | Upos::Verb | Upos::Adj | Upos::Adv | Upos::Propn)
    }

    /// Closed-class tags counted as function words.
    pub fn is_function(self) -> bool {
        matches!(
            self,
            Upos::Adp | Upos::Aux | Upos::Cconj | Upos::Sconj | Upos::Det | Upos::Part | Upos::Pron
        )
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Upos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Upos::ALL
            .iter()
            .copied()
            .find(|u| u.as_str() == s)
            .ok_or_else(|| format!("unknown UPOS tag `{s}`"))
    }
}

/// Languages with a shipped metric pack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    En,
    Pl,
    Uk,
    Ru,
}

impl Language {
    pub const ALL: [Language; 4] = [Language::En, Language::Pl, Language::Uk, Language::Ru];

    pub fn code(self) -> &'static str {
        match self {
            Language::En => "en",
            Language::Pl => "pl",
            Language::Uk => "uk",
            Language::Ru => "ru",
        }
    }

    pub fn supported_codes() -> String {
        Language::ALL.map(Language::code).join(", ")
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Language::ALL
            .iter()
            .copied()
            .find(|l| l.code() == s)
            .ok_or_else(|| {
                format!("unsupported language `{s}` (supported: {})", Language::supported_codes())
            })
    }
}

/// Position of a token inside a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TokenRef {
    pub sentence: usize,
    pub token: usize,
}

impl TokenRef {
    pub fn new(sentence: usize, token: usize) -> Self {
        TokenRef { sentence, token }
    }
}

/// One annotated word.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: Upos,
    pub xpos: Option<String>,
    pub feats: BTreeMap<String, String>,
    /// Index of the syntactic head within the sentence; `None` for the root.
    pub head: Option<usize>,
    pub deprel: String,
    /// Raw DEPS column, stored but not interpreted.
    pub deps: Option<String>,
    /// Raw MISC items in input order.
    pub misc: Vec<String>,
    pub entity: Option<String>,
    pub space_after: bool,
    folded_form: String,
    folded_lemma: String,
}

impl Token {
    pub fn new(index: usize, form: &str, lemma: &str, upos: Upos) -> Self {
        Token {
            index,
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos,
            xpos: None,
            feats: BTreeMap::new(),
            head: None,
            deprel: "root".to_string(),
            deps: None,
            misc: Vec::new(),
            entity: None,
            space_after: true,
            folded_form: form.to_lowercase(),
            folded_lemma: lemma.to_lowercase(),
        }
    }

    /// Attach to `head` with relation `deprel`.
    pub fn with_head(mut self, head: usize, deprel: &str) -> Self {
        self.head = Some(head);
        self.deprel = deprel.to_string();
        self
    }

    /// Mark as sentence root with the given relation label.
    pub fn as_root(mut self, deprel: &str) -> Self {
        self.head = None;
        self.deprel = deprel.to_string();
        self
    }

    /// Set FEATS from the CoNLL-U `Key=Value|Key=Value` notation.
    pub fn with_feats(mut self, feats: &str) -> Self {
        self.feats = parse_feats(feats).unwrap_or_default();
        self
    }

    pub fn with_xpos(mut self, xpos: &str) -> Self {
        self.xpos = Some(xpos.to_string());
        self
    }

    pub fn with_entity(mut self, entity: &str) -> Self {
        self.entity = Some(entity.to_string());
        self.misc.retain(|m| !m.starts_with("NER="));
        self.misc.push(format!("NER={entity}"));
        self
    }

    pub fn no_space_after(mut self) -> Self {
        self.space_after = false;
        if !self.misc.iter().any(|m| m == "SpaceAfter=No") {
            self.misc.push("SpaceAfter=No".to_string());
        }
        self
    }

    pub(crate) fn with_columns(mut self, xpos: Option<String>, deps: Option<String>, misc: Vec<String>) -> Self {
        self.xpos = xpos;
        self.deps = deps;
        self.entity = misc
            .iter()
            .find_map(|m| m.strip_prefix("NER=").map(str::to_string));
        self.space_after = !misc.iter().any(|m| m == "SpaceAfter=No");
        self.misc = misc;
        self
    }

    pub(crate) fn set_feats(&mut self, feats: BTreeMap<String, String>) {
        self.feats = feats;
    }

    /// Lowercased surface form.
    pub fn folded_form(&self) -> &str {
        &self.folded_form
    }

    /// Lowercased lemma.
    pub fn folded_lemma(&self) -> &str {
        &self.folded_lemma
    }

    pub fn is_root(&self) -> bool {
        self.head.is_none()
    }

    pub fn is_punct(&self) -> bool {
        self.upos == Upos::Punct
    }

    /// Relation label without its subtype (`advmod:neg` -> `advmod`).
    pub fn deprel_base(&self) -> &str {
        self.deprel.split(':').next().unwrap_or("")
    }

    pub fn feat(&self, key: &str) -> Option<&str> {
        self.feats.get(key).map(String::as_str)
    }
}

/// True iff `feats[key]` lists `value`. Multivalued features
/// (`Gender=Masc,Fem`) match any of their values.
pub fn has_feat(token: &Token, key: &str, value: &str) -> bool {
    token
        .feats
        .get(key)
        .is_some_and(|v| v.split(',').any(|part| part == value))
}

/// Parse a FEATS column. `_` yields an empty map.
pub fn parse_feats(raw: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    if raw == "_" || raw.is_empty() {
        return Ok(map);
    }
    for pair in raw.split('|') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| format!("malformed feature `{pair}`"))?;
        if k.is_empty() || v.is_empty() {
            return Err(format!("malformed feature `{pair}`"));
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

pub fn format_feats(feats: &BTreeMap<String, String>) -> String {
    if feats.is_empty() {
        return "_".to_string();
    }
    feats
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join("|")
}

/// A multiword token range line (`2-3  du  _ ...`), kept for surface text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiwordToken {
    /// First covered token (0-based).
    pub start: usize,
    /// Last covered token (0-based, inclusive).
    pub end: usize,
    pub form: String,
    pub misc: Vec<String>,
}

impl MultiwordToken {
    pub fn space_after(&self) -> bool {
        !self.misc.iter().any(|m| m == "SpaceAfter=No")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    tokens: Vec<Token>,
    text: String,
    comments: Vec<String>,
    multiwords: Vec<MultiwordToken>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl Sentence {
    /// Build a sentence and check the dependency tree: in-range heads,
    /// no self loops, a single root, and no cycles.
    pub fn new(
        tokens: Vec<Token>,
        comments: Vec<String>,
        multiwords: Vec<MultiwordToken>,
    ) -> Result<Sentence, DocError> {
        if tokens.is_empty() {
            return Err(DocError::EmptySentence);
        }
        let n = tokens.len();
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (i, t) in tokens.iter().enumerate() {
            if t.index != i {
                return Err(DocError::BadIndex { expected: i, found: t.index });
            }
            match t.head {
                None => roots.push(i),
                Some(h) if h >= n => return Err(DocError::HeadOutOfRange { token: i, head: h }),
                Some(h) if h == i => return Err(DocError::SelfLoop { token: i }),
                Some(h) => {
                    if t.deprel.is_empty() || t.deprel == "_" {
                        return Err(DocError::MissingDeprel { token: i });
                    }
                    children[h].push(i);
                }
            }
        }
        if roots.len() != 1 {
            return Err(DocError::RootCount(roots.len()));
        }
        let root = roots[0];

        // Everything must be reachable from the root, otherwise the head
        // relation contains a cycle.
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        let mut reached = 0;
        while let Some(i) = stack.pop() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            reached += 1;
            stack.extend(children[i].iter().copied());
        }
        if reached != n {
            let token = seen.iter().position(|s| !s).unwrap_or(0);
            return Err(DocError::Cycle { token });
        }

        for mw in &multiwords {
            if mw.start > mw.end || mw.end >= n {
                return Err(DocError::BadRange { start: mw.start, end: mw.end });
            }
        }

        let text = surface_text(&tokens, &multiwords);
        Ok(Sentence { tokens, text, comments, multiwords, children, root })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn multiwords(&self) -> &[MultiwordToken] {
        &self.multiwords
    }

    pub fn root(&self) -> &Token {
        &self.tokens[self.root]
    }

    pub fn token(&self, index: usize) -> Option<&Token> {
        self.tokens.get(index)
    }

    /// Child indices of the token at `index`, ascending.
    pub fn children_of(&self, index: usize) -> &[usize] {
        self.children.get(index).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The head token of `token`, if any.
    pub fn head_of(&self, token: &Token) -> Option<&Token> {
        token.head.and_then(|h| self.tokens.get(h))
    }

    /// Indices of `index` and all its transitive dependents, ascending.
    pub fn subtree_of(&self, index: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![index];
        while let Some(i) = stack.pop() {
            out.push(i);
            stack.extend(self.children_of(i).iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// Number of edges between `index` and the root.
    pub fn depth(&self, index: usize) -> usize {
        let mut depth = 0;
        let mut cur = index;
        while let Some(h) = self.tokens[cur].head {
            depth += 1;
            cur = h;
        }
        depth
    }

    fn check_member(&self, token: &Token) -> Result<usize, DocError> {
        match self.tokens.get(token.index) {
            Some(t) if std::ptr::eq(t, token) => Ok(token.index),
            _ => Err(DocError::ForeignToken(token.form.clone())),
        }
    }
}

fn surface_text(tokens: &[Token], multiwords: &[MultiwordToken]) -> String {
    let mut text = String::new();
    let mut i = 0;
    while i < tokens.len() {
        let (form, space, next) = match multiwords.iter().find(|m| m.start == i) {
            Some(mw) => (mw.form.as_str(), mw.space_after(), mw.end + 1),
            None => (tokens[i].form.as_str(), tokens[i].space_after, i + 1),
        };
        text.push_str(form);
        if space && next < tokens.len() {
            text.push(' ');
        }
        i = next;
    }
    text
}

/// Children of `token` in linear order.
pub fn children<'s>(sentence: &'s Sentence, token: &Token) -> Result<Vec<&'s Token>, DocError> {
    let idx = sentence.check_member(token)?;
    Ok(sentence.children_of(idx).iter().map(|&c| &sentence.tokens[c]).collect())
}

/// `token` and all its transitive dependents in linear order.
pub fn subtree<'s>(sentence: &'s Sentence, token: &Token) -> Result<Vec<&'s Token>, DocError> {
    let idx = sentence.check_member(token)?;
    Ok(sentence.subtree_of(idx).into_iter().map(|c| &sentence.tokens[c]).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_id: String,
    /// Language declared in the file, if any.
    pub language: Option<Language>,
    sentences: Vec<Sentence>,
    token_count: usize,
}

impl Document {
    pub fn new(doc_id: &str, language: Option<Language>, sentences: Vec<Sentence>) -> Document {
        let token_count = sentences.iter().map(Sentence::len).sum();
        Document { doc_id: doc_id.to_string(), language, sentences, token_count }
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    /// Total tokens over all sentences, punctuation included.
    pub fn token_count(&self) -> usize {
        self.token_count
    }

    pub fn token(&self, at: TokenRef) -> Option<&Token> {
        self.sentences.get(at.sentence).and_then(|s| s.token(at.token))
    }

    /// Flat document-order traversal with positions.
    pub fn iter_refs(&self) -> impl Iterator<Item = (TokenRef, &Token)> + '_ {
        self.sentences.iter().enumerate().flat_map(|(si, s)| {
            s.tokens().iter().map(move |t| (TokenRef::new(si, t.index), t))
        })
    }

    pub fn with_language(mut self, language: Language) -> Document {
        self.language = Some(language);
        self
    }
}

/// All tokens of `doc` in document order.
pub fn tokens(doc: &Document) -> Vec<&Token> {
    doc.sentences.iter().flat_map(|s| s.tokens().iter()).collect()
}
