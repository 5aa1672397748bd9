//! English verb groups: a main verb with its auxiliary chain, classified
//! for tense, aspect, voice and modality.

use serde::Deserialize;

use crate::doc::{has_feat, Document, Sentence, Token, TokenRef, Upos};
use crate::engine::{Count, CountingRule};
use crate::error::MetricError;

pub const MODALS: [&str; 8] = ["can", "could", "may", "might", "shall", "should", "must", "would"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tense {
    Present,
    Past,
    Future,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aspect {
    Simple,
    Continuous,
    Perfect,
    PerfectContinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voice {
    Active,
    Passive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupForm {
    Finite,
    Infinitive,
    Gerund,
    Participle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerbGroup<'s> {
    pub main: &'s Token,
    /// Auxiliaries in linear order.
    pub auxiliaries: Vec<&'s Token>,
    /// `None` for non-finite groups and for finite groups whose tense
    /// cannot be recovered (see [`VerbGroup::is_unknown`]).
    pub tense: Option<Tense>,
    pub aspect: Aspect,
    pub voice: Voice,
    pub modal: Option<String>,
    pub form: GroupForm,
    pub do_support: bool,
}

impl VerbGroup<'_> {
    pub fn is_unknown(&self) -> bool {
        self.form == GroupForm::Finite && self.tense.is_none()
    }

    /// Token indices of the group, ascending.
    pub fn indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.auxiliaries.iter().map(|t| t.index).chain([self.main.index]).collect();
        out.sort_unstable();
        out
    }
}

fn is_aux_rel(t: &Token) -> bool {
    t.deprel_base() == "aux"
}

fn is_modal(t: &Token) -> bool {
    MODALS.contains(&t.folded_lemma())
}

fn is_will(t: &Token) -> bool {
    t.folded_lemma() == "will" || matches!(t.folded_form(), "'ll" | "’ll")
}

fn lemma_is(t: &Token, lemma: &str) -> bool {
    t.folded_lemma() == lemma
}

fn is_ing(t: &Token) -> bool {
    has_feat(t, "VerbForm", "Ger")
        || (has_feat(t, "VerbForm", "Part") && has_feat(t, "Tense", "Pres"))
        || t.xpos.as_deref() == Some("VBG")
}

fn is_past_participle(t: &Token) -> bool {
    (has_feat(t, "VerbForm", "Part") && !has_feat(t, "Tense", "Pres")) || t.xpos.as_deref() == Some("VBN")
}

fn is_main(s: &Sentence, t: &Token) -> bool {
    if !matches!(t.upos, Upos::Verb | Upos::Aux) || is_aux_rel(t) {
        return false;
    }
    // a copula under a verbal predicate belongs to that verb's group
    t.deprel_base() != "cop" || s.head_of(t).is_none_or(|h| h.upos != Upos::Verb)
}

fn group_form(first: &Token, has_finite_aux: bool) -> GroupForm {
    if has_finite_aux || has_feat(first, "VerbForm", "Fin") || has_feat(first, "Mood", "Imp") {
        return GroupForm::Finite;
    }
    match first.feat("VerbForm") {
        Some("Inf") => GroupForm::Infinitive,
        Some("Ger") => GroupForm::Gerund,
        Some("Part") => GroupForm::Participle,
        _ => GroupForm::Finite,
    }
}

fn classify<'s>(main: &'s Token, auxiliaries: Vec<&'s Token>) -> VerbGroup<'s> {
    let mut all: Vec<&Token> = auxiliaries.iter().copied().chain([main]).collect();
    all.sort_by_key(|t| t.index);
    let chain: Vec<&Token> = all
        .iter()
        .copied()
        .filter(|t| t.index == main.index || !(is_modal(t) || is_will(t) || lemma_is(t, "do")))
        .collect();

    let mut perfect = false;
    let mut continuous = false;
    let mut passive = auxiliaries.iter().any(|a| a.deprel == "aux:pass");
    for pair in chain.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if lemma_is(a, "have") && is_past_participle(b) {
            perfect = true;
        }
        if lemma_is(a, "be") && is_ing(b) {
            continuous = true;
        }
        if lemma_is(a, "be") && b.index == main.index && main.upos == Upos::Verb && is_past_participle(b) {
            passive = true;
        }
    }
    let aspect = match (perfect, continuous) {
        (true, true) => Aspect::PerfectContinuous,
        (true, false) => Aspect::Perfect,
        (false, true) => Aspect::Continuous,
        (false, false) => Aspect::Simple,
    };

    let modal = auxiliaries.iter().find(|a| is_modal(a)).map(|a| a.folded_lemma().to_string());
    let will = auxiliaries.iter().any(|a| is_will(a));
    let do_support = auxiliaries.iter().any(|a| lemma_is(a, "do"));
    let first = all[0];
    let form = group_form(first, will || modal.is_some());
    let tense = if form != GroupForm::Finite {
        None
    } else if will {
        Some(Tense::Future)
    } else if modal.is_some() || has_feat(first, "Mood", "Imp") {
        Some(Tense::Present)
    } else if has_feat(first, "Tense", "Past") {
        Some(Tense::Past)
    } else if has_feat(first, "Tense", "Pres") {
        Some(Tense::Present)
    } else {
        None
    };

    VerbGroup {
        main,
        auxiliaries,
        tense,
        aspect,
        voice: if passive { Voice::Passive } else { Voice::Active },
        modal,
        form,
        do_support,
    }
}

/// Verb groups of one sentence, in order of their main verb. Every
/// auxiliary belongs to at most one group.
pub fn extract_verb_groups(sentence: &Sentence) -> Vec<VerbGroup<'_>> {
    let toks = sentence.tokens();
    let mut taken = vec![false; toks.len()];
    let mut groups = Vec::new();
    for t in toks.iter().filter(|t| is_main(sentence, t)) {
        // a copula takes over the auxiliaries of its predicate
        let anchor = if t.deprel_base() == "cop" { t.head.unwrap_or(t.index) } else { t.index };
        let mut auxiliaries = Vec::new();
        for &c in sentence.children_of(anchor) {
            let child = &toks[c];
            if c != t.index && is_aux_rel(child) && !taken[c] {
                taken[c] = true;
                auxiliaries.push(child);
            }
        }
        groups.push(classify(t, auxiliaries));
    }
    groups
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ModalFilter {
    /// Groups without a modal auxiliary.
    #[default]
    Without,
    /// Groups with any modal auxiliary.
    Any,
    /// Groups with one of these modals.
    OneOf(Vec<String>),
    /// Modality is ignored.
    Ignore,
}

impl<'de> Deserialize<'de> for ModalFilter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<String>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) => match w.as_str() {
                "without" => Ok(ModalFilter::Without),
                "any" => Ok(ModalFilter::Any),
                "*" => Ok(ModalFilter::Ignore),
                m if MODALS.contains(&m) => Ok(ModalFilter::OneOf(vec![m.to_string()])),
                other => Err(serde::de::Error::custom(format!("unknown modal selector `{other}`"))),
            },
            Raw::List(l) => {
                if let Some(bad) = l.iter().find(|m| !MODALS.contains(&m.as_str())) {
                    return Err(serde::de::Error::custom(format!("`{bad}` is not a modal")));
                }
                Ok(ModalFilter::OneOf(l))
            }
        }
    }
}

/// Which verb groups a metric counts. `None` fields match anything.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerbSelector {
    #[serde(default)]
    pub tense: Option<Tense>,
    #[serde(default)]
    pub aspect: Option<Aspect>,
    #[serde(default)]
    pub voice: Option<Voice>,
    #[serde(default)]
    pub modal: ModalFilter,
    /// Defaults to finite groups.
    #[serde(default)]
    pub form: Option<GroupForm>,
}

impl VerbSelector {
    pub fn matches(&self, g: &VerbGroup) -> bool {
        let form = self.form.unwrap_or(GroupForm::Finite);
        let modal_ok = match &self.modal {
            ModalFilter::Without => g.modal.is_none(),
            ModalFilter::Any => g.modal.is_some(),
            ModalFilter::OneOf(list) => g.modal.as_ref().is_some_and(|m| list.contains(m)),
            ModalFilter::Ignore => true,
        };
        g.form == form
            && modal_ok
            && !g.is_unknown()
            && self.tense.is_none_or(|t| g.tense == Some(t))
            && self.aspect.is_none_or(|a| g.aspect == a)
            && self.voice.is_none_or(|v| g.voice == v)
    }
}

/// Tokens of all verb groups matching `selector`.
pub fn tense_aspect_incidence(doc: &Document, selector: &VerbSelector) -> Count {
    let mut captured = Vec::new();
    for (si, s) in doc.sentences().iter().enumerate() {
        for g in extract_verb_groups(s).iter().filter(|g| selector.matches(g)) {
            captured.extend(g.indices().into_iter().map(|ti| TokenRef::new(si, ti)));
        }
    }
    Count::tokens(captured)
}

impl CountingRule for VerbSelector {
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        Ok(tense_aspect_incidence(doc, self))
    }
}

/// Contracted `'s` tagged as a passive auxiliary without a participle
/// next to it; a frequent parser defect with `She's coming`.
pub fn contraction_warnings(doc: &Document) -> Vec<String> {
    let mut out = Vec::new();
    for (si, s) in doc.sentences().iter().enumerate() {
        for t in s.tokens() {
            if t.upos != Upos::Aux || !matches!(t.form.as_str(), "'s" | "’s") {
                continue;
            }
            let passive = has_feat(t, "Voice", "Pass") || t.deprel == "aux:pass";
            let participle = s.head_of(t).is_some_and(is_past_participle);
            if passive && !participle {
                out.push(format!(
                    "{}: sentence {si} token {}: `'s` marked passive without a participle",
                    doc.doc_id, t.index
                ));
            }
        }
    }
    out
}
