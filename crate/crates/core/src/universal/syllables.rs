//! Vowel-group syllable heuristic.

use crate::doc::Language;

const EN_VOWELS: &str = "aeiouy";
const PL_VOWELS: &str = "aąeęioóuy";
const UK_VOWELS: &str = "аеєиіїоуюяaeiouy";
const RU_VOWELS: &str = "аеёиоуыэюяaeiouy";

fn vowels(language: Language) -> &'static str {
    match language {
        Language::En => EN_VOWELS,
        Language::Pl => PL_VOWELS,
        Language::Uk => UK_VOWELS,
        Language::Ru => RU_VOWELS,
    }
}

/// Number of maximal vowel-letter groups in `form`.
///
/// English drops a silent final `e` after a consonant (`make` -> 1) unless
/// the word ends in consonant + `le` (`table` -> 2) or the drop would
/// leave no syllable at all.
pub fn syllable_count(form: &str, language: Language) -> usize {
    let vowels = vowels(language);
    let chars: Vec<char> = form.to_lowercase().chars().collect();
    let is_vowel = |c: char| vowels.contains(c);

    let mut groups = 0;
    let mut in_group = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }

    if language == Language::En && groups > 1 {
        let n = chars.len();
        if n >= 2 && chars[n - 1] == 'e' && !is_vowel(chars[n - 2]) {
            let consonant_le = n >= 3 && chars[n - 2] == 'l' && !is_vowel(chars[n - 3]);
            if !consonant_le {
                groups -= 1;
            }
        }
    }
    groups
}
