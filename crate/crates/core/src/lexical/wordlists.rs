use std::collections::HashSet;
use std::sync::OnceLock;

use crate::language::Language;

/// Function-word (closed-class) list. Entries are matched against lowercased
/// tokens; the list itself is lowercased at parse time.
#[derive(Debug, Clone, Default)]
pub struct WordList(HashSet<String>);

impl WordList {
    /// One term per line; blank lines and `#` comment lines are skipped.
    pub fn parse(text: &str) -> Self {
        WordList(
            lines(text)
                .map(|l| l.to_lowercase())
                .collect(),
        )
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Abbreviation forms that suppress a sentence split at their trailing dot.
/// Matching is case-sensitive and uses the whole whitespace-delimited form
/// ("Dr.", "z.B.").
#[derive(Debug, Clone, Default)]
pub struct Abbreviations(HashSet<String>);

impl Abbreviations {
    pub fn parse(text: &str) -> Self {
        Abbreviations(lines(text).map(str::to_owned).collect())
    }

    pub fn contains(&self, form: &str) -> bool {
        self.0.contains(form)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Shipped function-word list for `language`.
pub fn default_function_words(language: Language) -> &'static WordList {
    static FR: OnceLock<WordList> = OnceLock::new();
    static DE: OnceLock<WordList> = OnceLock::new();
    static IT: OnceLock<WordList> = OnceLock::new();
    match language {
        Language::Fr => FR.get_or_init(|| WordList::parse(include_str!("../../data/function_words/fr.txt"))),
        Language::De => DE.get_or_init(|| WordList::parse(include_str!("../../data/function_words/de.txt"))),
        Language::It => IT.get_or_init(|| WordList::parse(include_str!("../../data/function_words/it.txt"))),
    }
}

/// Shipped abbreviation list for `language`.
pub fn default_abbreviations(language: Language) -> &'static Abbreviations {
    static FR: OnceLock<Abbreviations> = OnceLock::new();
    static DE: OnceLock<Abbreviations> = OnceLock::new();
    static IT: OnceLock<Abbreviations> = OnceLock::new();
    match language {
        Language::Fr => FR.get_or_init(|| Abbreviations::parse(include_str!("../../data/abbreviations/fr.txt"))),
        Language::De => DE.get_or_init(|| Abbreviations::parse(include_str!("../../data/abbreviations/de.txt"))),
        Language::It => IT.get_or_init(|| Abbreviations::parse(include_str!("../../data/abbreviations/it.txt"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_skips_blanks_and_comments() {
        let wl = WordList::parse("le\n\n# comment\nLA\n");
        assert_eq!(wl.len(), 2);
        assert!(wl.contains("le"));
        assert!(wl.contains("la"));
    }

    #[test]
    fn shipped_lists_are_nonempty() {
        for lang in Language::ALL {
            assert!(!default_function_words(lang).is_empty(), "{lang}");
            assert!(!default_abbreviations(lang).is_empty(), "{lang}");
        }
    }

    #[test]
    fn abbreviations_are_case_sensitive() {
        let abb = Abbreviations::parse("Dr.");
        assert!(abb.contains("Dr."));
        assert!(!abb.contains("dr."));
    }
}
