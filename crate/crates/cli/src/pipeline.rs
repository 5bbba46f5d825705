//! Shared pipeline stages: corpus loading, resource tables, event subsets,
//! and per-article mention assembly.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context, Result};

use newstrace::entities::{
    apply_link_gate, default_cue_lexicon, gazetteer_tag, ingest_mentions, AnchorTable, CueLexicon,
    Gazetteer, MentionRecord, MentionRejection,
};
use newstrace::lexical::{
    default_abbreviations, default_function_words, Abbreviations, WordList,
};
use newstrace::retrieval::{
    load_external_subset, run_event_query, EventSubset, InvertedIndex, Phrase, QuerySpec,
};
use newstrace::{CorpusStore, IngestReport, Language};

use crate::config::{load_query_file, RunConfig};

/// Everything loaded once per run.
pub struct Resources {
    pub store: CorpusStore,
    pub ingest: IngestReport,
    /// Boilerplate lines removed per outlet during cleaning.
    pub boilerplate: BTreeMap<String, Vec<String>>,
    pub function_words: BTreeMap<Language, WordList>,
    pub abbreviations: BTreeMap<Language, Abbreviations>,
    pub cues: BTreeMap<Language, CueLexicon>,
    pub gazetteer: Option<Gazetteer>,
    pub anchors: Option<AnchorTable>,
    /// Annotated mentions after the link gate, grouped per article.
    pub annotations: HashMap<String, Vec<MentionRecord>>,
    pub mention_rejections: Vec<MentionRejection>,
}

impl Resources {
    pub fn function_words(&self, language: Language) -> &WordList {
        self.function_words
            .get(&language)
            .unwrap_or_else(|| default_function_words(language))
    }

    pub fn abbreviations(&self, language: Language) -> &Abbreviations {
        self.abbreviations
            .get(&language)
            .unwrap_or_else(|| default_abbreviations(language))
    }

    pub fn cues(&self, language: Language) -> &CueLexicon {
        self.cues
            .get(&language)
            .unwrap_or_else(|| default_cue_lexicon(language))
    }

    /// Mentions for one article: annotations when present, otherwise
    /// gazetteer tags run through the same link gate.
    pub fn article_mentions(
        &self,
        article_id: &str,
        link_threshold: f64,
    ) -> Result<Vec<MentionRecord>> {
        if let Some(found) = self.annotations.get(article_id) {
            return Ok(found.clone());
        }
        let Some(gazetteer) = &self.gazetteer else {
            return Ok(Vec::new());
        };
        let article = self
            .store
            .article(article_id)
            .with_context(|| format!("unknown article `{article_id}`"))?;
        let mut mentions = gazetteer_tag(article, gazetteer, self.abbreviations(article.language));
        apply_link_gate(&mut mentions, link_threshold)?;
        Ok(mentions)
    }
}

/// Ingests the corpus, strips boilerplate, and loads every configured
/// resource table.
pub fn load_resources(config: &RunConfig) -> Result<Resources> {
    let file = File::open(&config.corpus)
        .with_context(|| format!("cannot open corpus {}", config.corpus.display()))?;
    let mut store = CorpusStore::new();
    let ingest = store
        .ingest(BufReader::new(file))
        .context("corpus ingest failed")?;
    let boilerplate = store.strip_all_boilerplate();

    let mut function_words = BTreeMap::new();
    for (&language, path) in &config.function_words {
        function_words.insert(language, WordList::parse(&read(path)?));
    }
    let mut abbreviations = BTreeMap::new();
    for (&language, path) in &config.abbreviations {
        abbreviations.insert(language, Abbreviations::parse(&read(path)?));
    }
    let mut cues = BTreeMap::new();
    for (&language, path) in &config.cues {
        cues.insert(language, CueLexicon::parse(language, &read(path)?)?);
    }

    let gazetteer = match &config.gazetteer {
        Some(path) => Some(Gazetteer::parse(&read(path)?)?),
        None => None,
    };
    let anchors = match &config.anchors {
        Some(path) => Some(AnchorTable::parse(&read(path)?)?),
        None => None,
    };

    let mut annotations: HashMap<String, Vec<MentionRecord>> = HashMap::new();
    let mut mention_rejections = Vec::new();
    if let Some(path) = &config.mentions {
        let file = File::open(path)
            .with_context(|| format!("cannot open mentions {}", path.display()))?;
        let (mut mentions, rejections) = ingest_mentions(BufReader::new(file), &store)?;
        apply_link_gate(&mut mentions, config.link_threshold)?;
        mention_rejections = rejections;
        for mention in mentions {
            annotations
                .entry(mention.article_id.clone())
                .or_default()
                .push(mention);
        }
    }

    Ok(Resources {
        store,
        ingest,
        boilerplate,
        function_words,
        abbreviations,
        cues,
        gazetteer,
        anchors,
        annotations,
        mention_rejections,
    })
}

/// Builds all configured event subsets: BM25 query events first, then
/// external id lists, each sorted by event name.
pub fn event_subsets(config: &RunConfig, store: &CorpusStore) -> Result<Vec<EventSubset>> {
    let mut subsets: BTreeMap<String, EventSubset> = BTreeMap::new();

    if let Some(path) = &config.queries {
        let query_file = load_query_file(path)?;
        if query_file.events.is_empty() {
            bail!("query file {} defines no events", path.display());
        }
        let mut indexes: BTreeMap<Language, InvertedIndex> = BTreeMap::new();
        for &language in &config.languages {
            indexes.insert(language, InvertedIndex::build(language, store)?);
        }
        for event in &query_file.events {
            ensure_safe_name(&event.name)?;
            let mut phrases = BTreeMap::new();
            for (&language, texts) in &event.phrases {
                if !config.languages.contains(&language) {
                    continue;
                }
                let parsed: Vec<Phrase> = texts
                    .iter()
                    .map(|t| Phrase::parse(t))
                    .collect::<newstrace::Result<_>>()
                    .with_context(|| format!("event `{}`", event.name))?;
                phrases.insert(language, parsed);
            }
            let spec = QuerySpec {
                event_name: event.name.clone(),
                phrases,
                min_volume: event.min_volume.unwrap_or(config.min_volume),
            };
            let subset = run_event_query(&spec, &indexes)?;
            if subsets.insert(event.name.clone(), subset).is_some() {
                bail!("duplicate event name `{}`", event.name);
            }
        }
    }

    for (name, path) in &config.external_subsets {
        ensure_safe_name(name)?;
        let lists = read_external_lists(path, &config.languages)?;
        let subset = load_external_subset(name, &lists, store, config.min_volume)?;
        if subsets.insert(name.clone(), subset).is_some() {
            bail!("duplicate event name `{name}`");
        }
    }

    if subsets.is_empty() {
        bail!("no event queries or external subsets configured");
    }
    Ok(subsets.into_values().collect())
}

/// Event names become directory names, so only a conservative character
/// set is accepted.
fn ensure_safe_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && !name.starts_with('.')
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if !ok {
        bail!("event name `{name}` is not usable as a directory name");
    }
    Ok(())
}

/// External subset file: one `language<TAB>article_id` pair per line.
fn read_external_lists(
    path: &Path,
    languages: &[Language],
) -> Result<BTreeMap<Language, Vec<String>>> {
    let mut lists: BTreeMap<Language, Vec<String>> = BTreeMap::new();
    let mut seen: HashSet<(Language, String)> = HashSet::new();
    for (idx, line) in read(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(lang), Some(id), None) = (parts.next(), parts.next(), parts.next()) else {
            bail!(
                "{}:{}: expected `language<TAB>article_id`",
                path.display(),
                idx + 1
            );
        };
        let language: Language = lang
            .parse()
            .map_err(|_| anyhow::anyhow!("{}:{}: unknown language `{lang}`", path.display(), idx + 1))?;
        if !languages.contains(&language) {
            continue;
        }
        if seen.insert((language, id.to_string())) {
            lists.entry(language).or_default().push(id.to_string());
        }
    }
    Ok(lists)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}
