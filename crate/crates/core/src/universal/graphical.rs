//! Graphical and social-media token detectors.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use regex::Regex;
use serde::Deserialize;

const BUILTIN_EMOTICONS: &str = include_str!("../../packs/emoticons.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphicalKind {
    Emoji,
    Emoticon,
    Url,
    Hashtag,
    Mention,
    Lenny,
    MaskedWord,
    Capitalized,
}

/// Exact-match emoticon list.
#[derive(Debug, Clone, Default)]
pub struct Emoticons {
    entries: HashSet<String>,
}

impl Emoticons {
    /// One emoticon per line; blank lines and lines starting with `#` are
    /// skipped.
    pub fn parse(text: &str) -> Emoticons {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
        Emoticons { entries }
    }

    pub fn builtin() -> Arc<Emoticons> {
        static BUILTIN: OnceLock<Arc<Emoticons>> = OnceLock::new();
        Arc::clone(BUILTIN.get_or_init(|| Arc::new(Emoticons::parse(BUILTIN_EMOTICONS))))
    }

    pub fn contains(&self, form: &str) -> bool {
        self.entries.contains(form)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn is_pictograph(c: char) -> bool {
    matches!(c as u32,
        0x1F000..=0x1F02F   // mahjong, dominoes
        | 0x1F0A0..=0x1F0FF // playing cards
        | 0x1F1E6..=0x1F1FF // regional indicators
        | 0x1F300..=0x1F5FF // symbols and pictographs
        | 0x1F600..=0x1F64F // emoticons block
        | 0x1F680..=0x1F6FF // transport and map
        | 0x1F900..=0x1F9FF // supplemental symbols
        | 0x1FA70..=0x1FAFF // symbols and pictographs ext-A
        | 0x2600..=0x26FF   // misc symbols
        | 0x2700..=0x27BF   // dingbats
        | 0x2B50 | 0x2B55 | 0x203C | 0x2049 | 0x2122 | 0x2139
        | 0x231A..=0x231B | 0x23E9..=0x23F3 | 0x25AA..=0x25FE)
}

fn is_emoji_modifier(c: char) -> bool {
    matches!(c as u32, 0x200D | 0xFE0E | 0xFE0F | 0x1F3FB..=0x1F3FF | 0x20E3 | 0xE0020..=0xE007F)
}

/// A form made only of emoji code points (ZWJ sequences, variation
/// selectors and skin tones included).
pub fn is_emoji(form: &str) -> bool {
    form.chars().any(is_pictograph) && form.chars().all(|c| is_pictograph(c) || is_emoji_modifier(c))
}

fn regexes() -> &'static [Regex; 4] {
    static RE: OnceLock<[Regex; 4]> = OnceLock::new();
    RE.get_or_init(|| {
        [
            Regex::new(r"(?i)^(?:(?:https?|ftp)://|www\.)\S+$").unwrap(),
            Regex::new(r"^#\w+$").unwrap(),
            Regex::new(r"^@\w+$").unwrap(),
            // parenthesised face with at least one non-ASCII glyph
            Regex::new(r"^[(（].*[^\x00-\x7F].*[)）]$").unwrap(),
        ]
    })
}

pub fn detect(kind: GraphicalKind, form: &str, emoticons: &Emoticons) -> bool {
    let [url, hashtag, mention, lenny] = regexes();
    match kind {
        GraphicalKind::Emoji => is_emoji(form),
        GraphicalKind::Emoticon => emoticons.contains(form),
        GraphicalKind::Url => url.is_match(form),
        GraphicalKind::Hashtag => hashtag.is_match(form),
        GraphicalKind::Mention => mention.is_match(form),
        GraphicalKind::Lenny => lenny.is_match(form),
        GraphicalKind::MaskedWord => form.contains("**") && form.chars().any(char::is_alphabetic),
        GraphicalKind::Capitalized => {
            form.chars().count() >= 2 && form.chars().all(|c| c.is_alphabetic() && c.is_uppercase())
        }
    }
}
