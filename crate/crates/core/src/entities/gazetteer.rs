use std::collections::HashSet;

use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::lexical::{sentence_starts, Abbreviations};

use super::{EntityCategory, MentionRecord};

/// One gazetteer surface form with its fixed annotation.
#[derive(Debug, Clone, PartialEq)]
pub struct GazetteerEntry {
    pub surface: String,
    pub category: EntityCategory,
    pub link_id: String,
    pub confidence: f64,
}

/// Surface-form table used as the deterministic stand-in tagger. Entries are
/// kept sorted longest-first so tagging prefers the longest match.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: Vec<(Vec<char>, GazetteerEntry)>,
}

impl Gazetteer {
    pub fn new(mut entries: Vec<GazetteerEntry>) -> Self {
        entries.sort_by(|a, b| {
            b.surface
                .chars()
                .count()
                .cmp(&a.surface.chars().count())
                .then_with(|| a.surface.cmp(&b.surface))
        });
        Gazetteer {
            entries: entries
                .into_iter()
                .filter(|e| !e.surface.is_empty())
                .map(|e| (e.surface.chars().collect(), e))
                .collect(),
        }
    }

    /// Parse TSV lines: surface \t category \t link_id \t confidence.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::Table {
                    file: "gazetteer",
                    line: line_no,
                    msg: format!("expected 4 tab-separated fields, got {}", fields.len()),
                });
            }
            let category: EntityCategory = fields[1].trim().parse().map_err(|msg| Error::Table {
                file: "gazetteer",
                line: line_no,
                msg,
            })?;
            let confidence: f64 = fields[3].trim().parse().map_err(|_| Error::Table {
                file: "gazetteer",
                line: line_no,
                msg: format!("invalid confidence `{}`", fields[3]),
            })?;
            if !(0.0..=1.0).contains(&confidence) {
                return Err(Error::Table {
                    file: "gazetteer",
                    line: line_no,
                    msg: format!("confidence {confidence} outside [0, 1]"),
                });
            }
            entries.push(GazetteerEntry {
                surface: fields[0].trim().to_string(),
                category,
                link_id: fields[2].trim().to_string(),
                confidence,
            });
        }
        Ok(Gazetteer::new(entries))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn first_char_matches_insensitive(a: char, b: char) -> bool {
    a == b || a.to_lowercase().eq(b.to_lowercase())
}

/// Longest-match, non-overlapping, left-to-right tagging over the body.
/// Matching is case-sensitive except for the first character of a match that
/// starts a sentence; matches must align with word boundaries.
pub fn gazetteer_tag(
    article: &Article,
    gazetteer: &Gazetteer,
    abbreviations: &Abbreviations,
) -> Vec<MentionRecord> {
    let chars: Vec<char> = article.body.chars().collect();
    let starts: HashSet<usize> = sentence_starts(&article.body, abbreviations)
        .into_iter()
        .collect();
    let mut mentions = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let at_word_start =
            chars[i].is_alphanumeric() && (i == 0 || !chars[i - 1].is_alphanumeric());
        if !at_word_start {
            i += 1;
            continue;
        }
        let sentence_initial = starts.contains(&i);
        let mut matched = None;
        for (pattern, entry) in &gazetteer.entries {
            let end = i + pattern.len();
            if end > chars.len() {
                continue;
            }
            let head_ok = if sentence_initial {
                first_char_matches_insensitive(chars[i], pattern[0])
            } else {
                chars[i] == pattern[0]
            };
            if !head_ok || chars[i + 1..end] != pattern[1..] {
                continue;
            }
            if end < chars.len() && chars[end].is_alphanumeric() {
                continue;
            }
            matched = Some((end, entry));
            break;
        }
        match matched {
            Some((end, entry)) => {
                mentions.push(MentionRecord {
                    article_id: article.id.clone(),
                    surface: chars[i..end].iter().collect(),
                    category: entry.category,
                    start: i,
                    end,
                    link_id: Some(entry.link_id.clone()),
                    link_confidence: Some(entry.confidence),
                    sentiment: None,
                });
                i = end;
            }
            None => i += 1,
        }
    }
    mentions
}
