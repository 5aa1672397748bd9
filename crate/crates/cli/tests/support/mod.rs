//! Random CoNLL-U-shaped documents for property and throughput checks.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use stylovec::packs::{EmbeddedPacks, PackSource};
use stylovec::{Document, Sentence, Token, Upos};

const DEPRELS: &[&str] = &[
    "nsubj", "nsubj:pass", "obj", "iobj", "obl", "obl:agent", "advmod", "advmod:neg", "amod", "det", "case", "mark",
    "cc", "conj", "aux", "aux:pass", "cop", "ccomp", "xcomp", "advcl", "acl", "acl:relcl", "appos", "nmod",
    "nmod:poss", "nummod", "punct", "parataxis", "expl", "vocative", "discourse", "flat", "compound", "csubj",
];

const FEATS: &[(&str, &[&str])] = &[
    ("Tense", &["Past", "Pres", "Fut"]),
    ("VerbForm", &["Fin", "Inf", "Part", "Ger", "Conv", "Vnoun"]),
    ("Mood", &["Ind", "Imp", "Cnd", "Sub"]),
    ("Voice", &["Act", "Pass"]),
    ("Aspect", &["Perf", "Imp"]),
    ("Person", &["0", "1", "2", "3"]),
    ("Number", &["Sing", "Plur"]),
    ("Case", &["Nom", "Gen", "Dat", "Acc", "Ins", "Loc", "Voc"]),
    ("Gender", &["Masc", "Fem", "Neut"]),
    ("Animacy", &["Anim", "Inan"]),
    ("Degree", &["Pos", "Cmp", "Sup"]),
    ("NumType", &["Card", "Ord"]),
    ("PronType", &["Prs", "Dem", "Int", "Rel", "Ind", "Tot", "Neg"]),
    ("Polarity", &["Neg"]),
    ("Poss", &["Yes"]),
    ("Reflex", &["Yes"]),
];

const WORDS: &[&str] = &[
    "the", "a", "an", "dog", "dogs", "house", "run", "running", "ran", "written", "be", "is", "was", "been", "being",
    "have", "has", "had", "do", "did", "will", "'ll", "'s", "can", "could", "may", "might", "shall", "should", "must",
    "would", "not", "n't", "never", "always", "constantly", "like", "as", "look", "looks", "seem", "there", "here",
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us", "them", "my", "your", "his", "its", "our",
    "their", "myself", "this", "that", "who", "which", "very", "slightly", "good", "bad", "love", "hate", "idiot",
    "kot", "pies", "dom", "nie", "jak", "niczym", "się", "być", "jest", "był", "kurwa", "superfajny", "megaszybki",
    "supernowa", "hipermarket", "wogóle", "zawsze", "często", "wczoraj", "długo", "dom", "las", "wojna", "radość",
    "не", "ні", "буде", "буду", "читати", "синьо-жовтий", "дім", "мама", "будет", "читать", "дом", "мама",
    "\u{1F600}", ":)", ":-(", "http://example.org", "www.test.pl", "#tag", "@user", "k***a", "WOW", "NIE",
    "( ͡° ͜ʖ ͡°)", "xyzzy", "qwrt", "zzzz", "Anna", "Paris", "Kowalski",
];

const PUNCT: &[&str] = &[".", ",", "!", "?", "...", "…", "-", "—", "\"", "„", "”", "(", ")", ":", ";", "?!", "!!!"];

const TRIGGER_PHRASES: &[&[&str]] = &[
    &["for", "example"],
    &["on", "the", "other", "hand"],
    &["as", "a", "result"],
    &["in", "spite", "of"],
    &["na", "pewno"],
    &["od", "czasu", "do", "czasu"],
    &["po", "prostu"],
];

/// Word pool: built-in words plus entries of the shipped lexicons.
pub struct Vocab {
    words: Vec<String>,
}

impl Vocab {
    pub fn new() -> Vocab {
        let mut words: Vec<String> = WORDS.iter().map(|w| w.to_string()).collect();
        for path in [
            "en/lexicons/stop_words.txt",
            "en/lexicons/hurtful.txt",
            "en/lexicons/sentiment.txt",
            "pl/lexicons/vulgar.txt",
            "pl/lexicons/errors.txt",
            "pl/lexicons/greek_prefix_exceptions.txt",
            "pl/lexicons/stop_words.txt",
            "uk/lexicons/stop_words.txt",
            "ru/lexicons/stop_words.txt",
        ] {
            let bytes = EmbeddedPacks.read(path).expect("embedded lexicon");
            let text = String::from_utf8(bytes).unwrap();
            for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
                words.push(line.split('\t').next().unwrap().to_string());
            }
        }
        Vocab { words }
    }
}

impl Default for Vocab {
    fn default() -> Self {
        Vocab::new()
    }
}

fn random_feats(rng: &mut StdRng) -> String {
    let n = rng.gen_range(0..=3);
    let mut picked: Vec<(&str, &str)> = FEATS
        .choose_multiple(rng, n)
        .map(|(k, vs)| (*k, *vs.choose(rng).unwrap()))
        .collect();
    picked.sort();
    picked.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("|")
}

fn random_forms(rng: &mut StdRng, vocab: &Vocab, len: usize) -> Vec<String> {
    let mut forms = Vec::with_capacity(len);
    while forms.len() < len {
        if rng.gen_bool(0.05) {
            let phrase = TRIGGER_PHRASES.choose(rng).unwrap();
            if forms.len() + phrase.len() <= len {
                forms.extend(phrase.iter().map(|w| w.to_string()));
                continue;
            }
        }
        let w = if rng.gen_bool(0.12) {
            PUNCT.choose(rng).unwrap().to_string()
        } else {
            let w = vocab.words.choose(rng).unwrap();
            if rng.gen_bool(0.1) { capitalize(w) } else { w.clone() }
        };
        forms.push(w);
    }
    forms
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// A random sentence of `len` tokens whose heads form a valid tree.
pub fn random_sentence(rng: &mut StdRng, vocab: &Vocab, len: usize) -> Sentence {
    let forms = random_forms(rng, vocab, len);
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(rng);
    let mut heads = vec![None; len];
    for (k, &i) in order.iter().enumerate().skip(1) {
        heads[i] = Some(order[rng.gen_range(0..k)]);
    }
    let tokens = forms
        .iter()
        .enumerate()
        .map(|(i, form)| {
            let upos = if PUNCT.contains(&form.as_str()) && rng.gen_bool(0.9) {
                Upos::Punct
            } else {
                *Upos::ALL.choose(rng).unwrap()
            };
            let lemma = form.to_lowercase();
            let mut t = Token::new(i, form, &lemma, upos);
            t = match heads[i] {
                None => t.as_root("root"),
                Some(h) => t.with_head(h, DEPRELS.choose(rng).unwrap()),
            };
            let feats = random_feats(rng);
            if !feats.is_empty() {
                t = t.with_feats(&feats);
            }
            if rng.gen_bool(0.05) {
                t = t.with_entity(["PER", "LOC", "ORG", "persName", "placeName"].choose(rng).unwrap());
            }
            if rng.gen_bool(0.2) {
                t = t.no_space_after();
            }
            t
        })
        .collect();
    Sentence::new(tokens, vec![], vec![]).expect("random tree is valid")
}

/// A random document of exactly `tokens` tokens.
pub fn random_doc(rng: &mut StdRng, vocab: &Vocab, id: &str, tokens: usize) -> Document {
    let mut sentences = Vec::new();
    let mut left = tokens;
    while left > 0 {
        let len = rng.gen_range(1..=30).min(left);
        sentences.push(random_sentence(rng, vocab, len));
        left -= len;
    }
    Document::new(id, None, sentences)
}

/// One sentence of `n` X-tagged nonsense tokens: no punctuation, no
/// letters that any shipped lexicon or detector reacts to.
pub fn filler_sentence(n: usize) -> Sentence {
    let tokens = (0..n)
        .map(|i| {
            let t = Token::new(i, "xyzzy", "xyzzy", Upos::X);
            if i == 0 { t.as_root("root") } else { t.with_head(0, "dep") }
        })
        .collect();
    Sentence::new(tokens, vec![], vec![]).unwrap()
}
