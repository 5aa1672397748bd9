//! Metric abstraction, registry, normalization and vector assembly.
//!
//! A counting rule reports which tokens it captured (and a raw count);
//! the engine divides by the document's token count, punctuation
//! included, so every value lands in `[0, 1]` regardless of text length.

use std::collections::HashMap;
use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::doc::{Document, Language, TokenRef};
use crate::error::{MetricError, PackError};

/// Metric groups. Each language uses its own subset, see
/// [`Language::categories`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    GrammaticalForms,
    Punctuation,
    Syntax,
    Inflection,
    Graphical,
    Lexical,
    Psycholinguistic,
    Descriptive,
    DetailedGrammar,
    GeneralGrammar,
    DetailedLexical,
    AdditionalLexical,
    Pos,
    SocialMedia,
    Syntactic,
    TextStats,
    VerbForms,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::GrammaticalForms => "grammatical_forms",
            Category::Punctuation => "punctuation",
            Category::Syntax => "syntax",
            Category::Inflection => "inflection",
            Category::Graphical => "graphical",
            Category::Lexical => "lexical",
            Category::Psycholinguistic => "psycholinguistic",
            Category::Descriptive => "descriptive",
            Category::DetailedGrammar => "detailed_grammar",
            Category::GeneralGrammar => "general_grammar",
            Category::DetailedLexical => "detailed_lexical",
            Category::AdditionalLexical => "additional_lexical",
            Category::Pos => "pos",
            Category::SocialMedia => "social_media",
            Category::Syntactic => "syntactic",
            Category::TextStats => "text_stats",
            Category::VerbForms => "verb_forms",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
            .map_err(|_| format!("unknown category `{s}`"))
    }
}

impl Language {
    /// Categories a pack for this language may use, in catalogue order.
    pub fn categories(self) -> &'static [Category] {
        use Category::*;
        match self {
            Language::Pl => &[
                GrammaticalForms,
                Punctuation,
                Syntax,
                Inflection,
                Graphical,
                Lexical,
                Psycholinguistic,
                Descriptive,
            ],
            Language::En => &[
                DetailedGrammar,
                GeneralGrammar,
                DetailedLexical,
                AdditionalLexical,
                Pos,
                SocialMedia,
                Syntactic,
                TextStats,
            ],
            Language::Uk | Language::Ru => &[Lexical, Pos, Syntactic, VerbForms],
        }
    }
}

/// Which languages a metric applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Universal,
    #[serde(untagged)]
    Language(Language),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Universal => f.write_str("universal"),
            Scope::Language(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricDescriptor {
    pub id: String,
    pub category: Category,
    pub scope: Scope,
    pub name_en: String,
    pub description: String,
}

pub fn is_valid_metric_id(id: &str) -> bool {
    !id.is_empty() && id.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'_')
}

/// What a counting rule reports before normalization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Count {
    /// Numerator of the ratio. Equal to `captured.len()` for token
    /// counting rules; mean-gap rules report a fractional value.
    pub raw: f64,
    pub captured: Vec<TokenRef>,
}

impl Count {
    /// A count whose numerator is the number of distinct captured tokens.
    pub fn tokens(mut captured: Vec<TokenRef>) -> Count {
        captured.sort_unstable();
        captured.dedup();
        Count { raw: captured.len() as f64, captured }
    }

    pub fn with_raw(raw: f64, mut captured: Vec<TokenRef>) -> Count {
        captured.sort_unstable();
        captured.dedup();
        Count { raw, captured }
    }

    /// Normalized value of this count on `doc`.
    pub fn share(&self, doc: &Document) -> f64 {
        ratio_of(self.raw, doc.token_count()).value
    }
}

/// How far a rule looks when deciding on a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Locality {
    /// Decided per token or per sentence: repeating or appending
    /// sentences never changes earlier decisions.
    Sentence,
    /// Depends on statistics of the whole document (type counts,
    /// repetitions, gaps between heads).
    Document,
}

pub trait CountingRule: Send + Sync {
    fn count(&self, doc: &Document) -> Result<Count, MetricError>;

    fn locality(&self) -> Locality {
        Locality::Sentence
    }
}

impl<F> CountingRule for F
where
    F: Fn(&Document) -> Result<Count, MetricError> + Send + Sync,
{
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        self(doc)
    }
}

pub struct Metric {
    pub descriptor: MetricDescriptor,
    pub rule: Box<dyn CountingRule>,
}

impl Metric {
    pub fn new(descriptor: MetricDescriptor, rule: impl CountingRule + 'static) -> Metric {
        Metric { descriptor, rule: Box::new(rule) }
    }

    pub fn id(&self) -> &str {
        &self.descriptor.id
    }
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Metric").field("id", &self.descriptor.id).finish_non_exhaustive()
    }
}

/// A normalized value and its provenance flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub value: f64,
    /// The denominator was zero.
    pub degenerate: bool,
    /// The count exceeded the denominator and was clamped to 1.
    pub clamped: bool,
}

pub fn ratio(count: usize, total: usize) -> Ratio {
    ratio_of(count as f64, total)
}

/// [`ratio`] for real-valued numerators.
pub fn ratio_of(count: f64, total: usize) -> Ratio {
    if total == 0 {
        return Ratio { value: 0.0, degenerate: true, clamped: false };
    }
    let total = total as f64;
    if count > total {
        log::warn!("count {count} exceeds total {total}; clamping to 1");
        return Ratio { value: 1.0, degenerate: false, clamped: true };
    }
    Ratio { value: (count / total).max(0.0), degenerate: false, clamped: false }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricResult {
    pub metric_id: String,
    pub value: f64,
    pub raw_count: f64,
    pub captured: Vec<TokenRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub clamped: bool,
}

impl MetricResult {
    pub fn from_count(metric_id: &str, count: Count, total: usize) -> MetricResult {
        let r = ratio_of(count.raw, total);
        MetricResult {
            metric_id: metric_id.to_string(),
            value: r.value,
            raw_count: count.raw,
            captured: count.captured,
            error: None,
            degenerate: r.degenerate,
            clamped: r.clamped,
        }
    }

    pub fn failed(metric_id: &str, message: String) -> MetricResult {
        MetricResult {
            metric_id: metric_id.to_string(),
            value: 0.0,
            raw_count: 0.0,
            captured: Vec::new(),
            error: Some(message),
            degenerate: false,
            clamped: false,
        }
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "counting rule panicked".to_string()
    }
}

/// Run one metric. Failures, including panics, become an error result
/// for that metric only.
pub fn evaluate_metric(metric: &Metric, doc: &Document) -> MetricResult {
    let id = metric.id();
    match panic::catch_unwind(AssertUnwindSafe(|| metric.rule.count(doc))) {
        Ok(Ok(count)) => MetricResult::from_count(id, count, doc.token_count()),
        Ok(Err(e)) => MetricResult::failed(id, e.0),
        Err(payload) => MetricResult::failed(id, format!("panic: {}", panic_message(payload.as_ref()))),
    }
}

/// Ordered metric values for one document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StyloVector {
    pub doc_id: String,
    pub schema_hash: String,
    pub values: Vec<MetricResult>,
}

impl StyloVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, metric_id: &str) -> Option<&MetricResult> {
        self.values.iter().find(|r| r.metric_id == metric_id)
    }

    pub fn raw_values(&self) -> Vec<f64> {
        self.values.iter().map(|r| r.value).collect()
    }
}

/// Ordered, duplicate-free collection of metrics.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    metrics: Vec<Arc<Metric>>,
    index: HashMap<String, usize>,
}

impl Registry {
    pub fn new() -> Registry {
        Registry::default()
    }

    pub fn push(&mut self, metric: Metric) -> Result<(), PackError> {
        self.push_shared(Arc::new(metric))
    }

    fn push_shared(&mut self, metric: Arc<Metric>) -> Result<(), PackError> {
        let id = metric.id().to_string();
        if !is_valid_metric_id(&id) {
            return Err(PackError::Metric { id, message: "id must match [A-Z0-9_]+".into() });
        }
        if self.index.contains_key(&id) {
            return Err(PackError::DuplicateId(id));
        }
        self.index.insert(id, self.metrics.len());
        self.metrics.push(metric);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.metrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metrics.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Metric> + '_ {
        self.metrics.iter().map(|m| m.as_ref())
    }

    pub fn get(&self, id: &str) -> Option<&Metric> {
        self.index.get(id).map(|&i| self.metrics[i].as_ref())
    }

    pub fn ids(&self) -> Vec<&str> {
        self.metrics.iter().map(|m| m.id()).collect()
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &MetricDescriptor> + '_ {
        self.iter().map(|m| &m.descriptor)
    }

    /// Sub-registry keeping metrics accepted by `keep`, order preserved.
    pub fn filtered(&self, mut keep: impl FnMut(&MetricDescriptor) -> bool) -> Registry {
        let mut out = Registry::new();
        for m in &self.metrics {
            if keep(&m.descriptor) {
                // ids were unique in self, so this cannot fail
                let _ = out.push_shared(Arc::clone(m));
            }
        }
        out
    }

    pub fn with_categories(&self, categories: &[Category]) -> Registry {
        self.filtered(|d| categories.contains(&d.category))
    }

    /// Keep only the listed ids (registry order). Unknown ids are an error.
    pub fn with_ids(&self, ids: &[String]) -> Result<Registry, PackError> {
        if let Some(missing) = ids.iter().find(|id| !self.index.contains_key(id.as_str())) {
            return Err(PackError::UnknownMetric(missing.clone()));
        }
        Ok(self.filtered(|d| ids.contains(&d.id)))
    }

    /// Hex SHA-256 of the ordered id list.
    pub fn schema_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for m in &self.metrics {
            hasher.update(m.id().as_bytes());
            hasher.update(b"\n");
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Evaluate every metric of `registry` on `doc`, in registry order.
pub fn evaluate_all(registry: &Registry, doc: &Document) -> StyloVector {
    evaluate_with_hash(registry, &registry.schema_hash(), doc)
}

/// [`evaluate_all`] with a precomputed schema hash, for corpus runs.
pub fn evaluate_with_hash(registry: &Registry, schema_hash: &str, doc: &Document) -> StyloVector {
    StyloVector {
        doc_id: doc.doc_id.clone(),
        schema_hash: schema_hash.to_string(),
        values: registry.iter().map(|m| evaluate_metric(m, doc)).collect(),
    }
}
