//! Stylometric feature vectors over CoNLL-U annotated documents.
//!
//! Documents are parsed from CoNLL-U ([`conllu`]), evaluated against a
//! language [`Registry`] of metrics ([`packs::registry_for`]) and turned
//! into fixed-length [`StyloVector`]s whose values are token shares in
//! `[0, 1]`. Every result keeps the tokens it captured so that values can
//! be traced back to the text ([`output::write_debug_csv`]).

pub mod conllu;
pub mod doc;
pub mod engine;
pub mod error;
pub mod lexicon;
pub mod output;
pub mod packs;
pub mod universal;

pub use conllu::{load_corpus, parse_conllu, to_conllu, Corpus, RawCorpusEntry};
pub use doc::{children, has_feat, subtree, tokens, Document, Language, Sentence, Token, TokenRef, Upos};
pub use engine::{
    evaluate_all, evaluate_metric, ratio, Category, Count, CountingRule, Locality, Metric, MetricDescriptor,
    MetricResult, Registry, Scope, StyloVector,
};
pub use output::{write_debug_csv, write_vectors_csv, write_vectors_json};
pub use packs::{registry_for, registry_for_code};
