//! Syllable counting and the Flesch readability formulas.

/// Vowel-group syllable heuristic: count maximal runs of `a e i o u y`,
/// drop one for a terminal silent `e` unless it is the only group, and never
/// return less than one.
pub fn count_syllables(word: &str) -> usize {
    let lower: Vec<char> = word.to_lowercase().chars().filter(|c| c.is_alphabetic()).collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0;
    let mut in_group = false;
    for &c in &lower {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
            }
            in_group = true;
        } else {
            in_group = false;
        }
    }
    if groups > 1 && lower.last() == Some(&'e') {
        groups -= 1;
    }
    groups.max(1)
}

/// Tokens made only of punctuation do not count as words.
pub fn is_word(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

/// Word and syllable totals over the word tokens of a text.
pub fn word_stats<'a>(tokens: impl IntoIterator<Item = &'a str>) -> (usize, usize) {
    tokens
        .into_iter()
        .filter(|t| is_word(t))
        .fold((0, 0), |(w, s), t| (w + 1, s + count_syllables(t)))
}

pub fn flesch_reading_ease(words: usize, sentences: usize, syllables: usize) -> f64 {
    let words = words.max(1) as f64;
    206.835 - 1.015 * (words / sentences.max(1) as f64) - 84.6 * (syllables as f64 / words)
}

pub fn flesch_kincaid_grade(words: usize, sentences: usize, syllables: usize) -> f64 {
    let words = words.max(1) as f64;
    0.39 * (words / sentences.max(1) as f64) + 11.8 * (syllables as f64 / words) - 15.59
}
