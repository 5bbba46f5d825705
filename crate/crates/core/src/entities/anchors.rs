use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::language::Language;

use super::MentionRecord;

/// Anchoring of one linked entity, resolved at table-build time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anchor {
    Swiss,
    Supranational,
    /// ISO-3166 alpha-2 country code, uppercase. Never "CH" (that
    /// normalizes to `Swiss` at parse time).
    Country(String),
}

/// Classification of a mention relative to an article's language region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnchorClass {
    Swiss,
    Neighbor,
    ForeignOther,
    Unanchored,
}

impl std::fmt::Display for AnchorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AnchorClass::Swiss => "swiss",
            AnchorClass::Neighbor => "neighbor",
            AnchorClass::ForeignOther => "foreign_other",
            AnchorClass::Unanchored => "unanchored",
        })
    }
}

/// Proximate-neighbor countries per language region.
pub fn neighbor_countries(language: Language) -> &'static [&'static str] {
    match language {
        Language::Fr => &["FR"],
        Language::De => &["DE", "AT"],
        Language::It => &["IT"],
    }
}

/// link_id → anchor map loaded from TSV.
#[derive(Debug, Clone, Default)]
pub struct AnchorTable {
    map: HashMap<String, Anchor>,
}

impl AnchorTable {
    /// Parse TSV lines `link_id \t anchor` where anchor is `CH`, another
    /// alpha-2 country code, or `supranational`. A repeated link_id is an
    /// error: each entity must resolve to exactly one anchor.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(Error::Table {
                    file: "anchors",
                    line: line_no,
                    msg: format!("expected 2 tab-separated fields, got {}", fields.len()),
                });
            }
            let link_id = fields[0].trim().to_string();
            let raw = fields[1].trim();
            let anchor = if raw.eq_ignore_ascii_case("supranational") {
                Anchor::Supranational
            } else if raw.len() == 2 && raw.chars().all(|c| c.is_ascii_alphabetic()) {
                let code = raw.to_ascii_uppercase();
                if code == "CH" {
                    Anchor::Swiss
                } else {
                    Anchor::Country(code)
                }
            } else {
                return Err(Error::Table {
                    file: "anchors",
                    line: line_no,
                    msg: format!("invalid anchor `{raw}`"),
                });
            };
            if map.insert(link_id.clone(), anchor).is_some() {
                return Err(Error::Table {
                    file: "anchors",
                    line: line_no,
                    msg: format!("duplicate link id `{link_id}`"),
                });
            }
        }
        Ok(AnchorTable { map })
    }

    pub fn get(&self, link_id: &str) -> Option<&Anchor> {
        self.map.get(link_id)
    }

    pub fn insert(&mut self, link_id: impl Into<String>, anchor: Anchor) {
        self.map.insert(link_id.into(), anchor);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Pure classification of one mention: Swiss for CH anchors, Neighbor for
/// the language's proximate countries, ForeignOther for every other country
/// and all supranational bodies, Unanchored for unlinked mentions and links
/// absent from the table.
pub fn resolve_anchor(
    mention: &MentionRecord,
    table: &AnchorTable,
    language: Language,
) -> AnchorClass {
    let Some(link_id) = &mention.link_id else {
        return AnchorClass::Unanchored;
    };
    match table.get(link_id) {
        None => AnchorClass::Unanchored,
        Some(Anchor::Swiss) => AnchorClass::Swiss,
        Some(Anchor::Supranational) => AnchorClass::ForeignOther,
        Some(Anchor::Country(code)) => {
            if neighbor_countries(language).contains(&code.as_str()) {
                AnchorClass::Neighbor
            } else {
                AnchorClass::ForeignOther
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::EntityCategory;

    fn mention(link: Option<&str>) -> MentionRecord {
        MentionRecord {
            article_id: "a".into(),
            surface: "X".into(),
            category: EntityCategory::Location,
            start: 0,
            end: 1,
            link_id: link.map(str::to_string),
            link_confidence: link.map(|_| 0.9),
            sentiment: None,
        }
    }

    fn table() -> AnchorTable {
        AnchorTable::parse(
            "Q1\tCH\nQ2\tFR\nQ3\tDE\nQ4\tAT\nQ5\tIT\nQ6\tsupranational\nQ7\tGB\nQ8\tus\n",
        )
        .unwrap()
    }

    #[test]
    fn neighbor_depends_on_language() {
        let t = table();
        assert_eq!(resolve_anchor(&mention(Some("Q2")), &t, Language::Fr), AnchorClass::Neighbor);
        assert_eq!(
            resolve_anchor(&mention(Some("Q2")), &t, Language::De),
            AnchorClass::ForeignOther
        );
        assert_eq!(resolve_anchor(&mention(Some("Q3")), &t, Language::De), AnchorClass::Neighbor);
        assert_eq!(resolve_anchor(&mention(Some("Q4")), &t, Language::De), AnchorClass::Neighbor);
        assert_eq!(resolve_anchor(&mention(Some("Q5")), &t, Language::It), AnchorClass::Neighbor);
        assert_eq!(
            resolve_anchor(&mention(Some("Q5")), &t, Language::Fr),
            AnchorClass::ForeignOther
        );
    }

    #[test]
    fn supranational_and_uk_are_foreign_other() {
        let t = table();
        for lang in Language::ALL {
            assert_eq!(resolve_anchor(&mention(Some("Q6")), &t, lang), AnchorClass::ForeignOther);
            assert_eq!(resolve_anchor(&mention(Some("Q7")), &t, lang), AnchorClass::ForeignOther);
        }
    }

    #[test]
    fn swiss_and_unanchored() {
        let t = table();
        assert_eq!(resolve_anchor(&mention(Some("Q1")), &t, Language::It), AnchorClass::Swiss);
        assert_eq!(resolve_anchor(&mention(Some("Q99")), &t, Language::Fr), AnchorClass::Unanchored);
        assert_eq!(resolve_anchor(&mention(None), &t, Language::Fr), AnchorClass::Unanchored);
    }

    #[test]
    fn parse_normalizes_case_and_rejects_duplicates() {
        let t = table();
        assert_eq!(t.get("Q8"), Some(&Anchor::Country("US".into())));
        assert!(matches!(
            AnchorTable::parse("Q1\tCH\nQ1\tFR\n"),
            Err(Error::Table { line: 2, .. })
        ));
        assert!(matches!(
            AnchorTable::parse("Q1\tSwitzerland\n"),
            Err(Error::Table { line: 1, .. })
        ));
    }

    #[test]
    fn resolution_ignores_unrelated_entries() {
        let mut small = AnchorTable::default();
        small.insert("Q2", Anchor::Country("FR".into()));
        let big = table();
        assert_eq!(
            resolve_anchor(&mention(Some("Q2")), &small, Language::Fr),
            resolve_anchor(&mention(Some("Q2")), &big, Language::Fr)
        );
    }
}
