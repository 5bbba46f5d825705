//! Per-language positional inverted indexes and phrase-capable BM25 event
//! retrieval. A multi-word query is scored as a single pseudo-term whose
//! term frequency is the number of contiguous occurrences.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::corpus::CorpusStore;
use crate::error::{Error, Result};
use crate::language::Language;
use crate::lexical::tokenize;

pub const K1: f64 = 1.2;
pub const B: f64 = 0.75;
pub const DEFAULT_MIN_VOLUME: usize = 100;

/// Position gap inserted between title and body tokens so a phrase can never
/// match across the boundary.
const FIELD_GAP: u32 = 1;

/// An ordered, normalized token sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phrase(Vec<String>);

impl Phrase {
    /// Tokenize `text` with the index tokenizer. Errors when no token
    /// survives normalization.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text);
        if tokens.is_empty() {
            return Err(Error::EmptyPhrase);
        }
        Ok(Phrase(tokens))
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }
}

impl std::fmt::Display for Phrase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

/// One event query: per-language phrase lists, OR semantics within a
/// language.
#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub event_name: String,
    pub phrases: BTreeMap<Language, Vec<Phrase>>,
    pub min_volume: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexStats {
    pub language: Language,
    pub documents: usize,
    pub avg_doc_len: f64,
    pub vocabulary: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Bm25,
    ExternalTopic,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Bm25 => "bm25",
            Method::ExternalTopic => "external_topic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDoc {
    pub article_id: String,
    pub score: f64,
}

/// Retrieval result. Per-language lists are sorted by descending score, ties
/// by ascending article id. Languages whose match count falls below the
/// query's minimum volume are flagged, never dropped.
#[derive(Debug, Clone)]
pub struct EventSubset {
    pub event_name: String,
    pub method: Method,
    pub per_language: BTreeMap<Language, Vec<ScoredDoc>>,
    pub below_volume: BTreeSet<Language>,
}

/// Positional inverted index over one language partition (title + body).
#[derive(Debug)]
pub struct InvertedIndex {
    language: Language,
    doc_ids: Vec<String>,
    doc_len: Vec<u32>,
    avg_len: f64,
    postings: HashMap<String, Vec<(u32, Vec<u32>)>>,
}

impl InvertedIndex {
    /// Index every stored article of `language`, in store order.
    pub fn build(language: Language, store: &CorpusStore) -> Result<Self> {
        let mut doc_ids = Vec::new();
        let mut doc_len = Vec::new();
        let mut postings: HashMap<String, Vec<(u32, Vec<u32>)>> = HashMap::new();
        for article in store.by_language(language) {
            let doc = doc_ids.len() as u32;
            doc_ids.push(article.id.clone());
            let title_tokens = tokenize(&article.title);
            let body_tokens = tokenize(&article.body);
            let body_base = title_tokens.len() as u32 + FIELD_GAP;
            let mut len = 0u32;
            for (pos, token) in title_tokens
                .into_iter()
                .enumerate()
                .map(|(i, t)| (i as u32, t))
                .chain(
                    body_tokens
                        .into_iter()
                        .enumerate()
                        .map(|(i, t)| (body_base + i as u32, t)),
                )
            {
                len += 1;
                let list = postings.entry(token).or_default();
                match list.last_mut() {
                    Some((d, positions)) if *d == doc => positions.push(pos),
                    _ => list.push((doc, vec![pos])),
                }
            }
            doc_len.push(len);
        }
        if doc_ids.is_empty() {
            return Err(Error::EmptyPartition(language));
        }
        let avg_len = doc_len.iter().map(|&l| l as f64).sum::<f64>() / doc_len.len() as f64;
        Ok(InvertedIndex {
            language,
            doc_ids,
            doc_len,
            avg_len,
            postings,
        })
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn len(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_ids.is_empty()
    }

    pub fn stats(&self) -> IndexStats {
        IndexStats {
            language: self.language,
            documents: self.doc_ids.len(),
            avg_doc_len: self.avg_len,
            vocabulary: self.postings.len(),
        }
    }

    /// Docs containing the phrase contiguously, with occurrence counts,
    /// ordered by internal doc number.
    pub fn phrase_matches(&self, phrase: &Phrase) -> Vec<(u32, u32)> {
        let tokens = phrase.tokens();
        let mut lists = Vec::with_capacity(tokens.len());
        for token in tokens {
            match self.postings.get(token) {
                Some(list) => lists.push(list),
                None => return Vec::new(),
            }
        }
        let mut matches = Vec::new();
        // Docs containing every token: intersect on the first token's list.
        'docs: for (doc, first_positions) in lists[0] {
            let mut rest = Vec::with_capacity(lists.len() - 1);
            for list in &lists[1..] {
                match list.binary_search_by_key(doc, |(d, _)| *d) {
                    Ok(i) => rest.push(&list[i].1),
                    Err(_) => continue 'docs,
                }
            }
            let mut tf = 0u32;
            for &p in first_positions {
                if rest
                    .iter()
                    .enumerate()
                    .all(|(k, positions)| positions.binary_search(&(p + 1 + k as u32)).is_ok())
                {
                    tf += 1;
                }
            }
            if tf > 0 {
                matches.push((*doc, tf));
            }
        }
        matches
    }

    /// Documents containing the phrase at least once.
    pub fn phrase_df(&self, phrase: &Phrase) -> usize {
        self.phrase_matches(phrase).len()
    }

    fn doc_index(&self, article_id: &str) -> Result<u32> {
        // Linear scan is fine: this lookup only serves single-doc scoring in
        // tests and oracles; retrieval proper works off posting lists.
        self.doc_ids
            .iter()
            .position(|id| id == article_id)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownArticle(article_id.to_string()))
    }

    /// Okapi BM25 with the phrase as a single pseudo-term:
    /// idf = ln(1 + (N − df + 0.5)/(df + 0.5)),
    /// score = idf · tf·(k1+1) / (tf + k1·(1 − b + b·len/avglen)).
    pub fn bm25_score(&self, phrase: &Phrase, article_id: &str) -> Result<f64> {
        let doc = self.doc_index(article_id)?;
        let matches = self.phrase_matches(phrase);
        let df = matches.len();
        let tf = matches
            .iter()
            .find(|(d, _)| *d == doc)
            .map(|(_, tf)| *tf)
            .unwrap_or(0);
        Ok(self.score_parts(tf, df, doc))
    }

    fn score_parts(&self, tf: u32, df: usize, doc: u32) -> f64 {
        if tf == 0 {
            return 0.0;
        }
        let n = self.doc_ids.len() as f64;
        let df = df as f64;
        let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
        let tf = tf as f64;
        let len_norm = 1.0 - B + B * self.doc_len[doc as usize] as f64 / self.avg_len;
        idf * tf * (K1 + 1.0) / (tf + K1 * len_norm)
    }
}

/// Execute one event query against per-language indexes: union over phrases
/// of all docs with ≥1 contiguous occurrence, scored by the best-matching
/// phrase.
pub fn run_event_query(
    spec: &QuerySpec,
    indexes: &BTreeMap<Language, InvertedIndex>,
) -> Result<EventSubset> {
    let mut per_language = BTreeMap::new();
    let mut below_volume = BTreeSet::new();
    for (&language, phrases) in &spec.phrases {
        let index = indexes
            .get(&language)
            .ok_or(Error::MissingIndex(language))?;
        let mut best: HashMap<u32, f64> = HashMap::new();
        for phrase in phrases {
            let matches = index.phrase_matches(phrase);
            let df = matches.len();
            for (doc, tf) in matches {
                let score = index.score_parts(tf, df, doc);
                let slot = best.entry(doc).or_insert(f64::NEG_INFINITY);
                if score > *slot {
                    *slot = score;
                }
            }
        }
        let mut scored: Vec<ScoredDoc> = best
            .into_iter()
            .map(|(doc, score)| ScoredDoc {
                article_id: index.doc_ids[doc as usize].clone(),
                score,
            })
            .collect();
        scored.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.article_id.cmp(&b.article_id))
        });
        if scored.len() < spec.min_volume {
            below_volume.insert(language);
        }
        per_language.insert(language, scored);
    }
    Ok(EventSubset {
        event_name: spec.event_name.clone(),
        method: Method::Bm25,
        per_language,
        below_volume,
    })
}

/// Wrap externally produced per-language article-id lists (e.g. topic-model
/// output) as an EventSubset with uniform score 1.0. Unknown ids are fatal
/// to prevent silent misalignment with the corpus.
pub fn load_external_subset(
    event_name: &str,
    lists: &BTreeMap<Language, Vec<String>>,
    store: &CorpusStore,
    min_volume: usize,
) -> Result<EventSubset> {
    let mut per_language = BTreeMap::new();
    let mut below_volume = BTreeSet::new();
    for (&language, ids) in lists {
        let mut scored = Vec::with_capacity(ids.len());
        for id in ids {
            match store.article(id) {
                None => return Err(Error::UnknownArticle(id.clone())),
                Some(article) if article.language != language => {
                    return Err(Error::Table {
                        file: "external_subset",
                        line: 0,
                        msg: format!(
                            "article `{id}` is {}, listed under {language}",
                            article.language
                        ),
                    })
                }
                Some(_) => scored.push(ScoredDoc {
                    article_id: id.clone(),
                    score: 1.0,
                }),
            }
        }
        scored.sort_by(|a, b| a.article_id.cmp(&b.article_id));
        scored.dedup_by(|a, b| a.article_id == b.article_id);
        if scored.len() < min_volume {
            below_volume.insert(language);
        }
        per_language.insert(language, scored);
    }
    Ok(EventSubset {
        event_name: event_name.to_string(),
        method: Method::ExternalTopic,
        per_language,
        below_volume,
    })
}
