use std::sync::OnceLock;

use regex::Regex;

use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::language::Language;

/// Case-insensitive word-boundary patterns signalling Swiss anchoring
/// (institutions, parties, currency, canton names).
#[derive(Debug)]
pub struct CueLexicon {
    language: Language,
    patterns: Vec<Regex>,
}

impl CueLexicon {
    /// One literal pattern per line; each is matched case-insensitively on
    /// word boundaries. Whitespace inside a pattern is literal.
    pub fn parse(language: Language, text: &str) -> Result<Self> {
        let mut patterns = Vec::new();
        for line in text.lines() {
            let entry = line.trim();
            if entry.is_empty() || entry.starts_with('#') {
                continue;
            }
            let pattern = format!(r"(?i)\b{}\b", regex::escape(entry));
            let regex = Regex::new(&pattern).map_err(|source| Error::Pattern {
                pattern: pattern.clone(),
                source,
            })?;
            patterns.push(regex);
        }
        if patterns.is_empty() {
            return Err(Error::Table {
                file: "cues",
                line: 0,
                msg: format!("empty cue lexicon for language {language}"),
            });
        }
        Ok(CueLexicon { language, patterns })
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn matches(&self, text: &str) -> bool {
        self.patterns.iter().any(|p| p.is_match(text))
    }
}

/// Shipped cue lexicon for `language`.
pub fn default_cue_lexicon(language: Language) -> &'static CueLexicon {
    static FR: OnceLock<CueLexicon> = OnceLock::new();
    static DE: OnceLock<CueLexicon> = OnceLock::new();
    static IT: OnceLock<CueLexicon> = OnceLock::new();
    let (cell, text) = match language {
        Language::Fr => (&FR, include_str!("../../data/cues/fr.txt")),
        Language::De => (&DE, include_str!("../../data/cues/de.txt")),
        Language::It => (&IT, include_str!("../../data/cues/it.txt")),
    };
    cell.get_or_init(|| CueLexicon::parse(language, text).expect("shipped cue lexicon compiles"))
}

/// True iff at least one cue pattern matches the article's title or body.
/// The lexicon must belong to the article's language.
pub fn detect_cues(article: &Article, lexicon: &CueLexicon) -> Result<bool> {
    if lexicon.language != article.language {
        return Err(Error::MissingLexicon(article.language));
    }
    Ok(lexicon.matches(&article.title) || lexicon.matches(&article.body))
}
