//! Named sentence detectors for syntactic figures and constructions that
//! a [`PatternSpec`](crate::universal::PatternSpec) cannot express.
//!
//! Each detector maps a sentence to the indices of the tokens it
//! captures (ascending); an empty result means no match.

use std::collections::BTreeSet;

use crate::doc::{has_feat, Document, Sentence, Token, TokenRef, Upos};
use crate::engine::{Count, CountingRule};
use crate::error::MetricError;

use super::verbs::{extract_verb_groups, Aspect};

pub type DetectorFn = fn(&Sentence) -> Vec<usize>;

/// Detector registry, by manifest name.
pub const DETECTORS: &[(&str, DetectorFn)] = &[
    ("do_support", do_support),
    ("fronting", fronting),
    ("irritation", irritation),
    ("simile_en", simile_en),
    ("inversion", inversion),
    ("simile_pl_nominal", simile_pl_nominal),
    ("simile_pl_adjectival", simile_pl_adjectival),
    ("inverted_epithet", inverted_epithet),
    ("ovs", ovs),
    ("parataxis", parataxis),
    ("positioning", positioning),
    ("slavic_future", slavic_future),
    ("quoted", quoted),
];

pub fn detector(name: &str) -> Option<DetectorFn> {
    DETECTORS.iter().find(|(n, _)| *n == name).map(|&(_, f)| f)
}

#[derive(Clone, Copy)]
pub struct Detector {
    pub name: &'static str,
    pub run: DetectorFn,
}

impl std::fmt::Debug for Detector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Detector({})", self.name)
    }
}

impl Detector {
    pub fn named(name: &str) -> Option<Detector> {
        DETECTORS.iter().find(|(n, _)| *n == name).map(|&(name, run)| Detector { name, run })
    }
}

pub fn detector_incidence(doc: &Document, run: DetectorFn) -> Count {
    let mut captured = Vec::new();
    for (si, s) in doc.sentences().iter().enumerate() {
        captured.extend(run(s).into_iter().map(|ti| TokenRef::new(si, ti)));
    }
    Count::tokens(captured)
}

impl CountingRule for Detector {
    fn count(&self, doc: &Document) -> Result<Count, MetricError> {
        Ok(detector_incidence(doc, self.run))
    }
}

fn sorted(set: BTreeSet<usize>) -> Vec<usize> {
    set.into_iter().collect()
}

fn is_question(s: &Sentence) -> bool {
    s.tokens().iter().rev().take_while(|t| t.is_punct()).any(|t| t.form.contains('?'))
}

fn is_negated(s: &Sentence) -> bool {
    s.tokens().iter().any(|t| {
        t.deprel == "advmod:neg"
            || (has_feat(t, "Polarity", "Neg") && t.upos == Upos::Part)
            || matches!(t.folded_lemma(), "not" | "never")
            || matches!(t.folded_form(), "n't" | "n’t" | "not" | "never")
    })
}

fn is_subject(t: &Token) -> bool {
    matches!(t.deprel_base(), "nsubj" | "csubj")
}

fn is_wh(t: &Token) -> bool {
    has_feat(t, "PronType", "Int")
        || t.xpos.as_deref().is_some_and(|x| x.starts_with('W'))
        || matches!(t.folded_lemma(), "what" | "who" | "whom" | "whose" | "which" | "where" | "when" | "why" | "how")
}

fn is_nominal(t: &Token) -> bool {
    matches!(t.upos, Upos::Noun | Upos::Propn | Upos::Pron)
}

/// End of a short noun phrase starting at `start`: the first
/// non-possessive nominal within four tokens.
fn np_end(s: &Sentence, start: usize) -> Option<usize> {
    s.tokens()
        .iter()
        .skip(start)
        .take(4)
        .take_while(|t| !t.is_punct())
        .find(|t| is_nominal(t) && !has_feat(t, "Poss", "Yes"))
        .map(|t| t.index)
}

/// `do`-support as emphasis in affirmative statements ("I do love dogs").
pub fn do_support(s: &Sentence) -> Vec<usize> {
    if is_question(s) || is_negated(s) {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for g in extract_verb_groups(s).iter().filter(|g| g.do_support) {
        out.extend(g.indices());
    }
    sorted(out)
}

/// Non-subject dependents of the root placed before both the subject
/// and the root.
pub fn fronting(s: &Sentence) -> Vec<usize> {
    if is_question(s) {
        return Vec::new();
    }
    let root = s.root().index;
    let kids = s.children_of(root);
    let Some(subject) = kids.iter().copied().find(|&k| is_subject(&s.tokens()[k])) else {
        return Vec::new();
    };
    let mut out = BTreeSet::new();
    for &k in kids {
        let t = &s.tokens()[k];
        if !matches!(t.deprel_base(), "obl" | "advmod" | "obj" | "iobj" | "xcomp") {
            continue;
        }
        let span = s.subtree_of(k);
        let last = *span.last().unwrap_or(&k);
        if last >= subject.min(root) || span.iter().any(|&i| is_wh(&s.tokens()[i])) {
            continue;
        }
        out.extend(span.into_iter().filter(|&i| !s.tokens()[i].is_punct()));
    }
    sorted(out)
}

const IRRITATION_WORDS: [&str; 3] = ["constantly", "continuously", "always"];
const IRRITATION_PHRASES: [&[&str]; 2] = [&["all", "the", "time"], &["every", "time"]];

/// Continuous verb forms together with an intensifier of habit
/// ("She's always coming late").
pub fn irritation(s: &Sentence) -> Vec<usize> {
    let toks = s.tokens();
    let mut markers: BTreeSet<usize> =
        toks.iter().filter(|t| IRRITATION_WORDS.contains(&t.folded_lemma())).map(|t| t.index).collect();
    for phrase in IRRITATION_PHRASES {
        for start in 0..toks.len() {
            if toks[start..].len() >= phrase.len()
                && phrase.iter().zip(&toks[start..]).all(|(w, t)| *w == t.folded_form())
            {
                markers.extend(start..start + phrase.len());
            }
        }
    }
    if markers.is_empty() {
        return Vec::new();
    }
    let continuous: Vec<usize> = extract_verb_groups(s)
        .iter()
        .filter(|g| matches!(g.aspect, Aspect::Continuous | Aspect::PerfectContinuous))
        .flat_map(|g| g.indices())
        .collect();
    if continuous.is_empty() {
        return Vec::new();
    }
    markers.extend(continuous);
    sorted(markers)
}

/// `as ADJ as NP` and `look/seem like NP`.
pub fn simile_en(s: &Sentence) -> Vec<usize> {
    let toks = s.tokens();
    let mut out = BTreeSet::new();
    for i in 0..toks.len() {
        let t = &toks[i];
        if t.folded_form() == "as"
            && toks.get(i + 1).is_some_and(|m| matches!(m.upos, Upos::Adj | Upos::Adv))
            && toks.get(i + 2).is_some_and(|a| a.folded_form() == "as")
        {
            if let Some(end) = np_end(s, i + 3) {
                out.extend(i..=end);
            }
        }
        if matches!(t.folded_lemma(), "look" | "seem") && toks.get(i + 1).is_some_and(|l| l.folded_form() == "like") {
            if let Some(end) = np_end(s, i + 2) {
                out.extend(i..=end);
            }
        }
    }
    sorted(out)
}

/// A verb placed before its own subject in a declarative sentence, away
/// from the first position ("Never have I seen such a thing").
pub fn inversion(s: &Sentence) -> Vec<usize> {
    if is_question(s) {
        return Vec::new();
    }
    let toks = s.tokens();
    let mut out = BTreeSet::new();
    for g in extract_verb_groups(s) {
        let anchor = if g.main.deprel_base() == "cop" { g.main.head.unwrap_or(g.main.index) } else { g.main.index };
        let kids = s.children_of(anchor);
        if kids.iter().any(|&k| toks[k].deprel_base() == "expl") {
            continue;
        }
        let Some(subject) = kids.iter().copied().find(|&k| is_subject(&toks[k])) else { continue };
        let idx = g.indices();
        let first = idx[0];
        if first > 0 && first < subject {
            out.extend(idx);
            out.insert(subject);
        }
    }
    sorted(out)
}

fn simile_pl(s: &Sentence, targets: &[Upos]) -> Vec<usize> {
    let toks = s.tokens();
    let mut out = BTreeSet::new();
    for p in toks.iter().filter(|t| matches!(t.folded_lemma(), "jak" | "niczym")) {
        let target = match p.head {
            Some(h) if h > p.index => Some(h),
            _ => (p.index + 1 < toks.len()).then_some(p.index + 1),
        };
        if let Some(t) = target.filter(|&t| targets.contains(&toks[t].upos)) {
            out.insert(p.index);
            out.insert(t);
        }
    }
    sorted(out)
}

/// Comparison with a nominal object: `jak/niczym` + NOUN or PRON.
pub fn simile_pl_nominal(s: &Sentence) -> Vec<usize> {
    simile_pl(s, &[Upos::Noun, Upos::Pron, Upos::Propn])
}

/// Comparison with an adjectival object: `jak/niczym` + ADJ.
pub fn simile_pl_adjectival(s: &Sentence) -> Vec<usize> {
    simile_pl(s, &[Upos::Adj])
}

/// Adjective placed after the noun it modifies. Experimental.
pub fn inverted_epithet(s: &Sentence) -> Vec<usize> {
    let mut out = BTreeSet::new();
    for t in s.tokens() {
        if t.upos == Upos::Adj && t.deprel_base() == "amod" {
            if let Some(h) = s.head_of(t).filter(|h| h.upos == Upos::Noun && h.index < t.index) {
                out.insert(h.index);
                out.insert(t.index);
            }
        }
    }
    sorted(out)
}

/// Object, then root verb, then subject. Experimental.
pub fn ovs(s: &Sentence) -> Vec<usize> {
    let root = s.root();
    if root.upos != Upos::Verb {
        return Vec::new();
    }
    let kids = s.children_of(root.index);
    let obj = kids.iter().copied().find(|&k| s.tokens()[k].deprel_base() == "obj");
    let subj = kids.iter().copied().find(|&k| is_subject(&s.tokens()[k]));
    match (obj, subj) {
        (Some(o), Some(n)) if o < root.index && root.index < n => vec![o, root.index, n],
        _ => Vec::new(),
    }
}

fn is_finite_clause(s: &Sentence, i: usize) -> bool {
    let t = &s.tokens()[i];
    has_feat(t, "VerbForm", "Fin")
        || (t.feat("Tense").is_some() && t.feat("VerbForm").is_none())
        || s.children_of(i).iter().any(|&k| is_subject(&s.tokens()[k]))
}

/// Clauses juxtaposed without conjunctions ("I came, I saw, I
/// conquered"). Captures the clause heads.
pub fn parataxis(s: &Sentence) -> Vec<usize> {
    let toks = s.tokens();
    let root = s.root().index;
    let mut heads: BTreeSet<usize> = BTreeSet::from([root]);
    for t in toks {
        let under_clause = t.head.is_some_and(|h| h == root || heads.contains(&h));
        if t.deprel_base() == "parataxis"
            || (t.deprel_base() == "conj" && under_clause && is_finite_clause(s, t.index))
        {
            heads.insert(t.index);
        }
    }
    let ordered: Vec<usize> = heads.iter().copied().collect();
    let mut out = BTreeSet::new();
    for t in toks.iter().filter(|t| heads.contains(&t.index) && t.index != root) {
        let Some(h) = t.head else { continue };
        if t.deprel_base() == "parataxis" {
            out.insert(h);
            out.insert(t.index);
            continue;
        }
        let prev = ordered.iter().copied().filter(|&o| o < t.index).max().unwrap_or(h);
        let between = &toks[prev.min(t.index) + 1..prev.max(t.index)];
        let separated = between.iter().any(|b| matches!(b.form.as_str(), "," | ";"));
        let joined = between.iter().any(|b| matches!(b.upos, Upos::Cconj | Upos::Sconj))
            || s.children_of(t.index).iter().any(|&k| matches!(toks[k].upos, Upos::Cconj | Upos::Sconj));
        if separated && !joined {
            out.insert(prev);
            out.insert(t.index);
        }
    }
    if out.len() < 2 {
        return Vec::new();
    }
    sorted(out)
}

const ADJ_ENDINGS: [&str; 14] = ["ий", "ій", "ая", "яя", "ого", "ому", "ої", "ою", "ім", "им", "ую", "юю", "ей", "ой"];
const DASHES: [&str; 3] = ["-", "–", "—"];

/// Ukrainian adjective-noun units joined by a dash, either as one
/// hyphenated token or as `ADJ - NOUN` written without spaces.
pub fn positioning(s: &Sentence) -> Vec<usize> {
    let toks = s.tokens();
    let mut out = BTreeSet::new();
    for w in toks.windows(3) {
        let (a, d, n) = (&w[0], &w[1], &w[2]);
        if a.upos == Upos::Adj
            && DASHES.contains(&d.form.as_str())
            && n.upos == Upos::Noun
            && !a.space_after
            && !d.space_after
        {
            out.extend([a.index, d.index, n.index]);
        }
    }
    for t in toks.iter().filter(|t| matches!(t.upos, Upos::Noun | Upos::Propn)) {
        let Some((left, right)) = t.folded_form().split_once('-') else { continue };
        let wordy = |p: &str| !p.is_empty() && p.chars().all(char::is_alphabetic);
        if wordy(left) && wordy(right) && ADJ_ENDINGS.iter().any(|e| left.ends_with(e)) {
            out.insert(t.index);
        }
    }
    sorted(out)
}

/// Future tense in Ukrainian and Russian: synthetic forms carry
/// `Tense=Fut`, analytic ones combine `бути/быть` with an infinitive.
pub fn slavic_future(s: &Sentence) -> Vec<usize> {
    let mut out = BTreeSet::new();
    for t in s.tokens() {
        let aux_be = t.upos == Upos::Aux && matches!(t.folded_lemma(), "бути" | "быть");
        let head_inf = s.head_of(t).filter(|h| has_feat(h, "VerbForm", "Inf"));
        if let (true, Some(h)) = (aux_be, head_inf) {
            out.insert(t.index);
            out.insert(h.index);
        } else if matches!(t.upos, Upos::Verb | Upos::Aux) && has_feat(t, "Tense", "Fut") {
            out.insert(t.index);
        }
    }
    sorted(out)
}

const QUOTES: [(char, char); 5] = [('"', '"'), ('„', '”'), ('“', '”'), ('«', '»'), ('‘', '’')];

/// Tokens inside paired quotation marks, marks included.
pub fn quoted(s: &Sentence) -> Vec<usize> {
    let toks = s.tokens();
    let mut out = BTreeSet::new();
    let mut open: Option<(usize, char)> = None;
    for t in toks {
        let mut chars = t.form.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else { continue };
        match open {
            Some((start, close)) if c == close => {
                out.extend(start..=t.index);
                open = None;
            }
            None => {
                if let Some(&(_, close)) = QUOTES.iter().find(|(o, _)| *o == c) {
                    open = Some((t.index, close));
                }
            }
            _ => {}
        }
    }
    sorted(out)
}
