use unicode_normalization::UnicodeNormalization;

use super::wordlists::Abbreviations;

/// Lowercased word tokens: NFC-normalize, lowercase, then take maximal runs
/// of alphanumeric characters. Apostrophes and all other punctuation split
/// tokens, so French elision yields two tokens ("l'accord" → "l", "accord").
pub fn tokenize(text: &str) -> Vec<String> {
    let normalized: String = text.nfc().collect();
    let lowered = normalized.to_lowercase();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in lowered.chars() {
        if ch.is_alphanumeric() {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Sentence boundary: one of `.!?…` followed by whitespace and then an
/// uppercase letter or digit. A `.` boundary is suppressed when the
/// whitespace-delimited form ending at that dot (e.g. "Dr.", "z.B.") is in
/// the abbreviation list.
fn sentence_ranges(chars: &[char], abbreviations: &Abbreviations) -> Vec<(usize, usize)> {
    let len = chars.len();
    let mut ranges = Vec::new();
    let mut start = 0;
    while start < len && chars[start].is_whitespace() {
        start += 1;
    }
    if start == len {
        return ranges;
    }
    let mut i = start;
    while i < len {
        if matches!(chars[i], '.' | '!' | '?' | '…') {
            let mut j = i + 1;
            while j < len && chars[j].is_whitespace() {
                j += 1;
            }
            if j > i + 1 && j < len && (chars[j].is_uppercase() || chars[j].is_numeric()) {
                let suppressed = chars[i] == '.' && {
                    let mut k = i;
                    while k > start && !chars[k - 1].is_whitespace() {
                        k -= 1;
                    }
                    let form: String = chars[k..=i].iter().collect();
                    abbreviations.contains(&form)
                };
                if !suppressed {
                    ranges.push((start, i + 1));
                    start = j;
                    i = j;
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut end = len;
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    ranges.push((start, end));
    ranges
}

/// Split `text` into sentences. Sentences keep their terminal punctuation;
/// leading and trailing whitespace is trimmed.
pub fn split_sentences(text: &str, abbreviations: &Abbreviations) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    sentence_ranges(&chars, abbreviations)
        .into_iter()
        .map(|(a, b)| chars[a..b].iter().collect())
        .collect()
}

/// Char offsets at which sentences start (first non-whitespace char of each
/// sentence). Used by the gazetteer tagger's sentence-initial case rule.
pub fn sentence_starts(text: &str, abbreviations: &Abbreviations) -> Vec<usize> {
    let chars: Vec<char> = text.chars().collect();
    sentence_ranges(&chars, abbreviations)
        .into_iter()
        .map(|(a, _)| a)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::Language;
    use crate::lexical::wordlists::default_abbreviations;

    #[test]
    fn tokenize_lowercases_and_drops_punctuation() {
        assert_eq!(tokenize("Le chat."), vec!["le", "chat"]);
    }

    #[test]
    fn tokenize_empty_is_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" …!? ").is_empty());
    }

    #[test]
    fn tokenize_splits_elision() {
        assert_eq!(tokenize("l'accord"), vec!["l", "accord"]);
        assert_eq!(tokenize("dell'Unione"), vec!["dell", "unione"]);
    }

    #[test]
    fn tokenize_keeps_digits_and_composes_accents() {
        assert_eq!(tokenize("5G en 2020"), vec!["5g", "en", "2020"]);
        // "é" written as "e" + combining acute composes to one char under NFC.
        assert_eq!(tokenize("re\u{0301}gion"), vec!["r\u{e9}gion"]);
    }

    #[test]
    fn splits_on_terminator_whitespace_uppercase() {
        let abb = Abbreviations::default();
        assert_eq!(split_sentences("A b. C d.", &abb), vec!["A b.", "C d."]);
    }

    #[test]
    fn abbreviation_suppresses_split() {
        let abb = default_abbreviations(Language::De);
        assert_eq!(split_sentences("Dr. Muster kam.", abb), vec!["Dr. Muster kam."]);
    }

    #[test]
    fn no_split_without_uppercase_or_digit() {
        let abb = Abbreviations::default();
        assert_eq!(split_sentences("fin. et suite", &abb).len(), 1);
        assert_eq!(split_sentences("Fin! 2 suites", &abb).len(), 2);
    }

    #[test]
    fn multi_dot_abbreviation_form_is_checked_whole() {
        let abb = Abbreviations::parse("z.B.");
        assert_eq!(split_sentences("Es gilt z.B. Folgendes gilt.", &abb).len(), 1);
    }

    #[test]
    fn sentence_starts_skip_leading_whitespace() {
        let abb = Abbreviations::default();
        assert_eq!(sentence_starts("  Ab cd. Ef gh.", &abb), vec![2, 9]);
    }

    #[test]
    fn ellipsis_char_splits() {
        let abb = Abbreviations::default();
        assert_eq!(split_sentences("Attend… Voilà tout.", &abb).len(), 2);
    }
}
