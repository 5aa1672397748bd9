//! Language packs: TOML manifests that declare metrics, the lexicons and
//! norms they use, and the named detectors behind hand-coded rules.
//!
//! A registry for a language is the universal manifest (metrics shared by
//! all languages, with a per-language category) followed by the
//! language's own manifest. Pack files are embedded in the binary; a
//! directory with the same layout can be used instead through
//! [`DirPacks`].
//!
//! ```toml
//! language = "pl"
//!
//! [lexicons.vulgar]
//! path = "lexicons/vulgar.txt"
//! mode = "form_exact"
//!
//! [[metric]]
//! id = "L_VULGAR"
//! category = "lexical"
//! name_en = "Vulgarisms"
//! description = "Tokens found in the vulgarism list."
//! rule = { family = "lexicon", lexicon = "vulgar" }
//! ```

pub mod figures;
pub mod norms;
pub mod verbs;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Deserialize;

use crate::doc::{Language, Upos};
use crate::engine::{Category, Metric, MetricDescriptor, Registry, Scope};
use crate::error::PackError;
use crate::lexicon::{Lexicon, LexiconMode, LexiconRule, Polarity, SentimentRule};
use crate::universal::{
    Emoticons, Family, FrequencySpec, GraphicalKind, PatternSpec, PhraseHead, RepetitionUnit, Unit,
};

use figures::Detector;
use norms::{AffectiveNorms, Dimension, NormsRule, Side};
use verbs::VerbSelector;

pub use figures::{detector, DETECTORS};
pub use verbs::{extract_verb_groups, tense_aspect_incidence, VerbGroup};

/// Where pack files come from. Paths are `/`-separated and relative to
/// the pack root (`universal.toml`, `pl/pack.toml`, ...).
pub trait PackSource {
    fn read(&self, path: &str) -> Option<Vec<u8>>;
}

macro_rules! embed {
    ($($path:literal),* $(,)?) => {
        &[$(($path, include_bytes!(concat!(env!("CARGO_MANIFEST_DIR"), "/packs/", $path)) as &[u8])),*]
    };
}

const EMBEDDED: &[(&str, &[u8])] = embed![
    "universal.toml",
    "emoticons.txt",
    "en/pack.toml",
    "en/lexicons/hurtful.txt",
    "en/lexicons/stop_words.txt",
    "en/lexicons/sentiment.txt",
    "en/lexicons/intensifiers.txt",
    "en/lexicons/downtoners.txt",
    "en/lexicons/link_time_location.txt",
    "en/lexicons/link_manner.txt",
    "en/lexicons/link_cause_purpose.txt",
    "en/lexicons/link_condition.txt",
    "en/lexicons/link_contrast.txt",
    "en/lexicons/link_example.txt",
    "en/lexicons/link_agreement.txt",
    "en/lexicons/link_effect.txt",
    "pl/pack.toml",
    "pl/norms.tsv",
    "pl/lexicons/vulgar.txt",
    "pl/lexicons/errors.txt",
    "pl/lexicons/greek_prefixes.txt",
    "pl/lexicons/greek_prefix_exceptions.txt",
    "pl/lexicons/adverbial_phrases.txt",
    "pl/lexicons/adverbs_time.txt",
    "pl/lexicons/adverbs_duration.txt",
    "pl/lexicons/adverbs_frequency.txt",
    "pl/lexicons/stop_words.txt",
    "uk/pack.toml",
    "uk/lexicons/stop_words.txt",
    "ru/pack.toml",
    "ru/lexicons/stop_words.txt",
];

/// Packs compiled into the library.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmbeddedPacks;

impl PackSource for EmbeddedPacks {
    fn read(&self, path: &str) -> Option<Vec<u8>> {
        EMBEDDED.iter().find(|(p, _)| *p == path).map(|(_, bytes)| bytes.to_vec())
    }
}

impl EmbeddedPacks {
    pub fn files() -> impl Iterator<Item = &'static str> {
        EMBEDDED.iter().map(|(p, _)| *p)
    }
}

/// Packs read from a directory laid out like the embedded ones.
#[derive(Debug, Clone)]
pub struct DirPacks {
    pub root: PathBuf,
}

impl PackSource for DirPacks {
    fn read(&self, path: &str) -> Option<Vec<u8>> {
        std::fs::read(self.root.join(path)).ok()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconRef {
    pub path: String,
    pub mode: LexiconMode,
    #[serde(default)]
    pub exceptions: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormsRef {
    pub path: String,
}

/// Counting rule of a manifest metric, selected by `family`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum RuleSpec {
    Pos {
        upos: Upos,
    },
    Feats {
        #[serde(default)]
        upos: Option<Upos>,
        feats: BTreeMap<String, String>,
    },
    Pattern(PatternSpec),
    TypeTokenRatio {
        unit: Unit,
    },
    TopFrequency(FrequencySpec),
    WordLength {
        min_syllables: usize,
    },
    Content,
    Function,
    Graphical {
        kind: GraphicalKind,
    },
    PhraseDistance {
        head: PhraseHead,
    },
    Repetition {
        unit: RepetitionUnit,
    },
    Lexicon {
        lexicon: String,
    },
    Sentiment {
        lexicon: String,
        polarity: Polarity,
    },
    Psycholinguistic {
        norms: String,
        dimension: Dimension,
        side: Side,
    },
    Detector {
        name: String,
    },
    VerbGroup(VerbSelector),
}

/// A category, or a per-language table of categories for universal
/// metrics. Languages missing from the table do not get the metric.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CategorySpec {
    One(Category),
    PerLanguage(BTreeMap<Language, Category>),
}

impl CategorySpec {
    fn for_language(&self, language: Language) -> Option<Category> {
        match self {
            CategorySpec::One(c) => Some(*c),
            CategorySpec::PerLanguage(m) => m.get(&language).copied(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDef {
    pub id: String,
    pub category: CategorySpec,
    pub name_en: String,
    #[serde(default)]
    pub description: String,
    pub rule: RuleSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default)]
    language: Option<Language>,
    #[serde(default)]
    categories: Option<Vec<Category>>,
    #[serde(default)]
    emoticons: Option<String>,
    #[serde(default)]
    lexicons: BTreeMap<String, LexiconRef>,
    #[serde(default)]
    norms: BTreeMap<String, NormsRef>,
    #[serde(default, rename = "metric")]
    metrics: Vec<MetricDef>,
}

/// The resolved metric list of one language, universal metrics first.
#[derive(Debug, Clone)]
pub struct PackManifest {
    pub language: Language,
    pub categories: Vec<Category>,
    pub lexicons: BTreeMap<String, LexiconRef>,
    pub norms: BTreeMap<String, NormsRef>,
    /// `(scope, definition, category)` in registry order.
    pub metrics: Vec<(Scope, MetricDef, Category)>,
}

fn read_text(source: &dyn PackSource, path: &str) -> Result<String, PackError> {
    let bytes = source.read(path).ok_or_else(|| PackError::MissingFile(path.to_string()))?;
    String::from_utf8(bytes).map_err(|_| PackError::Manifest { file: path.to_string(), message: "not valid UTF-8".into() })
}

fn parse_manifest(source: &dyn PackSource, path: &str) -> Result<RawManifest, PackError> {
    let text = read_text(source, path)?;
    toml::from_str(&text).map_err(|e| PackError::Manifest { file: path.to_string(), message: e.to_string() })
}

/// Everything a rule may need from the pack besides its own parameters.
struct Resources {
    language: Language,
    emoticons: Arc<Emoticons>,
    lexicons: BTreeMap<String, Arc<Lexicon>>,
    norms: BTreeMap<String, Arc<AffectiveNorms>>,
}

fn load_resources(
    source: &dyn PackSource,
    language: Language,
    universal: &RawManifest,
    pack: &RawManifest,
) -> Result<Resources, PackError> {
    let emoticons = match &universal.emoticons {
        Some(path) => Arc::new(Emoticons::parse(&read_text(source, path)?)),
        None => Emoticons::builtin(),
    };
    let dir = language.code();
    let mut lexicons = BTreeMap::new();
    for (name, r) in &pack.lexicons {
        let path = format!("{dir}/{}", r.path);
        let bytes = source.read(&path).ok_or_else(|| PackError::MissingFile(path.clone()))?;
        let wrap = |source| PackError::Lexicon { name: name.clone(), source };
        let mut parsed = Lexicon::from_bytes(name, &bytes, r.mode).map_err(wrap)?;
        if let Some(exc) = &r.exceptions {
            let warnings = std::mem::take(&mut parsed.warnings);
            let text = read_text(source, &format!("{dir}/{exc}"))?;
            parsed = parsed.lexicon.with_exceptions(&text).map_err(wrap)?;
            parsed.warnings.extend(warnings);
        }
        for w in &parsed.warnings {
            log::warn!("{w}");
        }
        lexicons.insert(name.clone(), Arc::new(parsed.lexicon));
    }
    let mut norms = BTreeMap::new();
    for (name, r) in &pack.norms {
        let text = read_text(source, &format!("{dir}/{}", r.path))?;
        let parsed = AffectiveNorms::parse(&text).map_err(|source| PackError::Norms { name: name.clone(), source })?;
        norms.insert(name.clone(), Arc::new(parsed));
    }
    Ok(Resources { language, emoticons, lexicons, norms })
}

fn build_metric(def: &MetricDef, scope: Scope, category: Category, res: &Resources) -> Result<Metric, PackError> {
    let id = def.id.clone();
    let bad = |message: String| PackError::Metric { id: id.clone(), message };
    let descriptor = MetricDescriptor {
        id: def.id.clone(),
        category,
        scope,
        name_en: def.name_en.clone(),
        description: def.description.clone(),
    };
    let lexicon = |name: &str| {
        res.lexicons
            .get(name)
            .cloned()
            .ok_or_else(|| PackError::MissingLexicon { id: id.clone(), name: name.to_string() })
    };
    let metric = match &def.rule {
        RuleSpec::Pos { upos } => Metric::new(descriptor, Family::Pos(*upos)),
        RuleSpec::Feats { upos, feats } => {
            Metric::new(descriptor, Family::Feats { upos: *upos, feats: feats.clone() })
        }
        RuleSpec::Pattern(spec) => Metric::new(descriptor, Family::Pattern(spec.clone().prepared())),
        RuleSpec::TypeTokenRatio { unit } => Metric::new(descriptor, Family::TypeToken(*unit)),
        RuleSpec::TopFrequency(spec) => {
            spec.validate().map_err(bad)?;
            Metric::new(descriptor, Family::TopFrequency(*spec))
        }
        RuleSpec::WordLength { min_syllables } => {
            if *min_syllables == 0 {
                return Err(bad("min_syllables must be at least 1".into()));
            }
            Metric::new(descriptor, Family::WordLength { min_syllables: *min_syllables, language: res.language })
        }
        RuleSpec::Content => Metric::new(descriptor, Family::ContentWords),
        RuleSpec::Function => Metric::new(descriptor, Family::FunctionWords),
        RuleSpec::Graphical { kind } => {
            Metric::new(descriptor, Family::Graphical { kind: *kind, emoticons: Arc::clone(&res.emoticons) })
        }
        RuleSpec::PhraseDistance { head } => Metric::new(descriptor, Family::PhraseDistance(*head)),
        RuleSpec::Repetition { unit } => Metric::new(descriptor, Family::Repetition(*unit)),
        RuleSpec::Lexicon { lexicon: name } => Metric::new(descriptor, LexiconRule(lexicon(name)?)),
        RuleSpec::Sentiment { lexicon: name, polarity } => {
            let lex = lexicon(name)?;
            if !lex.is_weighted() {
                return Err(bad(format!("lexicon `{name}` carries no weights")));
            }
            Metric::new(descriptor, SentimentRule { lexicon: lex, polarity: *polarity })
        }
        RuleSpec::Psycholinguistic { norms, dimension, side } => {
            let norms = res.norms.get(norms).cloned().ok_or_else(|| PackError::MissingLexicon {
                id: id.clone(),
                name: norms.clone(),
            })?;
            Metric::new(descriptor, NormsRule { norms, dimension: *dimension, side: *side })
        }
        RuleSpec::Detector { name } => {
            let det = Detector::named(name)
                .ok_or_else(|| PackError::UnknownDetector { id: id.clone(), name: name.clone() })?;
            Metric::new(descriptor, det)
        }
        RuleSpec::VerbGroup(selector) => Metric::new(descriptor, selector.clone()),
    };
    Ok(metric)
}

/// Load the universal and language manifests of `language` from
/// `source` and build its registry.
pub fn load_pack(language: Language, source: &dyn PackSource) -> Result<(PackManifest, Registry), PackError> {
    let universal = parse_manifest(source, "universal.toml")?;
    let pack_path = format!("{}/pack.toml", language.code());
    let pack = parse_manifest(source, &pack_path)?;
    if pack.language.is_some_and(|l| l != language) {
        return Err(PackError::Manifest { file: pack_path, message: format!("declares a language other than {language}") });
    }
    let allowed = language.categories();
    if let Some(c) = pack.categories.iter().flatten().find(|c| !allowed.contains(c)) {
        return Err(PackError::UnknownCategory { category: c.to_string(), language: language.to_string() });
    }

    let mut metrics = Vec::new();
    for def in &universal.metrics {
        if let Some(category) = def.category.for_language(language) {
            metrics.push((Scope::Universal, def.clone(), category));
        }
    }
    for def in &pack.metrics {
        let Some(category) = def.category.for_language(language) else {
            return Err(PackError::Metric { id: def.id.clone(), message: format!("no category for {language}") });
        };
        metrics.push((Scope::Language(language), def.clone(), category));
    }

    let res = load_resources(source, language, &universal, &pack)?;
    let mut registry = Registry::new();
    for (scope, def, category) in &metrics {
        if !allowed.contains(category) {
            return Err(PackError::UnknownCategory { category: category.to_string(), language: language.to_string() });
        }
        registry.push(build_metric(def, *scope, *category, &res)?)?;
    }

    let manifest = PackManifest {
        language,
        categories: pack.categories.unwrap_or_else(|| allowed.to_vec()),
        lexicons: pack.lexicons,
        norms: pack.norms,
        metrics,
    };
    Ok((manifest, registry))
}

/// Registry of the embedded packs for `language`, optionally restricted
/// to some categories.
pub fn registry_for(language: Language, categories: Option<&[Category]>) -> Result<Registry, PackError> {
    let (_, registry) = load_pack(language, &EmbeddedPacks)?;
    match categories {
        None => Ok(registry),
        Some(cats) => {
            if let Some(c) = cats.iter().find(|c| !language.categories().contains(c)) {
                return Err(PackError::UnknownCategory { category: c.to_string(), language: language.to_string() });
            }
            Ok(registry.with_categories(cats))
        }
    }
}

/// [`registry_for`] from a language code, reporting supported codes on
/// failure.
pub fn registry_for_code(code: &str, categories: Option<&[Category]>) -> Result<Registry, PackError> {
    let language: Language = code.parse().map_err(PackError::UnknownLanguage)?;
    registry_for(language, categories)
}
