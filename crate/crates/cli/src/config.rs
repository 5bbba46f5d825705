//! Run configuration: one TOML file drives every subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use newstrace::changepoint::{
    BocpdParams, CpdParams, DEFAULT_BASELINE_MULTIPLIER, DEFAULT_HAZARD, DEFAULT_LOESS_SPAN,
    DEFAULT_PENALTY_MULTIPLIERS, DEFAULT_WINDOW,
};
use newstrace::domestication::LpsrAggregation;
use newstrace::entities::DEFAULT_LINK_THRESHOLD;
use newstrace::retrieval::DEFAULT_MIN_VOLUME;
use newstrace::sentiment::Granularity;
use newstrace::Language;

/// Environment variable that overrides `output_dir`.
pub const OUT_DIR_ENV: &str = "NEWSTRACE_OUT_DIR";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    corpus: PathBuf,
    languages: Vec<Language>,
    output_dir: PathBuf,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    events: RawEvents,
    #[serde(default)]
    entities: RawEntities,
    #[serde(default)]
    lexical: RawLexical,
    #[serde(default)]
    cues: BTreeMap<Language, PathBuf>,
    #[serde(default)]
    sentiment: RawSentiment,
    #[serde(default)]
    domestication: RawDomestication,
    #[serde(default)]
    changepoint: RawChangepoint,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvents {
    #[serde(default)]
    queries: Option<PathBuf>,
    #[serde(default)]
    external: BTreeMap<String, PathBuf>,
    #[serde(default)]
    min_volume: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntities {
    #[serde(default)]
    gazetteer: Option<PathBuf>,
    #[serde(default)]
    mentions: Option<PathBuf>,
    #[serde(default)]
    anchors: Option<PathBuf>,
    #[serde(default)]
    link_threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLexical {
    #[serde(default)]
    function_words: BTreeMap<Language, PathBuf>,
    #[serde(default)]
    abbreviations: BTreeMap<Language, PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSentiment {
    #[serde(default)]
    granularity: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomestication {
    #[serde(default)]
    lpsr_aggregation: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChangepoint {
    #[serde(default)]
    penalty_multipliers: Option<Vec<f64>>,
    #[serde(default)]
    baseline_multiplier: Option<f64>,
    #[serde(default)]
    hazard: Option<f64>,
    #[serde(default)]
    window: Option<usize>,
    #[serde(default)]
    loess_span: Option<f64>,
}

/// Fully resolved configuration: paths absolute, enums parsed, defaults
/// filled in.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub languages: Vec<Language>,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
    pub queries: Option<PathBuf>,
    pub external_subsets: BTreeMap<String, PathBuf>,
    pub min_volume: usize,
    pub gazetteer: Option<PathBuf>,
    pub mentions: Option<PathBuf>,
    pub anchors: Option<PathBuf>,
    pub link_threshold: f64,
    pub function_words: BTreeMap<Language, PathBuf>,
    pub abbreviations: BTreeMap<Language, PathBuf>,
    pub cues: BTreeMap<Language, PathBuf>,
    pub sentiment_granularity: Granularity,
    pub lpsr_aggregation: LpsrAggregation,
    pub cpd: CpdParams,
}

impl RunConfig {
    /// Reads and validates a config file. Relative paths resolve against
    /// the config file's directory; `NEWSTRACE_OUT_DIR` overrides the
    /// output directory.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let raw: RawConfig = toml::from_str(&text)
            .with_context(|| format!("invalid config file {}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let resolve = |p: &Path| resolve_path(base, p);

        if raw.languages.is_empty() {
            bail!("config lists no languages");
        }
        let mut languages = Vec::new();
        for l in Language::ALL {
            if raw.languages.contains(&l) {
                languages.push(l);
            }
        }

        let output_dir = match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) => PathBuf::from(dir),
            None => resolve_path(base, &raw.output_dir),
        };

        let granularity = match &raw.sentiment.granularity {
            Some(text) => Granularity::parse(text)
                .with_context(|| format!("invalid sentiment granularity `{text}`"))?,
            None => Granularity::Weekly,
        };
        let lpsr_aggregation = match &raw.domestication.lpsr_aggregation {
            Some(text) => LpsrAggregation::parse(text)
                .with_context(|| format!("invalid lpsr aggregation `{text}`"))?,
            None => LpsrAggregation::ArticleMean,
        };

        let mut bocpd = BocpdParams::default();
        bocpd.hazard = raw.changepoint.hazard.unwrap_or(DEFAULT_HAZARD);
        let cpd = CpdParams {
            penalty_multipliers: raw
                .changepoint
                .penalty_multipliers
                .unwrap_or_else(|| DEFAULT_PENALTY_MULTIPLIERS.to_vec()),
            baseline_multiplier: raw
                .changepoint
                .baseline_multiplier
                .unwrap_or(DEFAULT_BASELINE_MULTIPLIER),
            bocpd,
            window: raw.changepoint.window.unwrap_or(DEFAULT_WINDOW),
            loess_span: raw.changepoint.loess_span.unwrap_or(DEFAULT_LOESS_SPAN),
        };

        let config = RunConfig {
            corpus: resolve(&raw.corpus),
            languages,
            output_dir,
            seed: raw.seed,
            queries: raw.events.queries.as_deref().map(&resolve),
            external_subsets: raw
                .events
                .external
                .iter()
                .map(|(name, p)| (name.clone(), resolve(p)))
                .collect(),
            min_volume: raw.events.min_volume.unwrap_or(DEFAULT_MIN_VOLUME),
            gazetteer: raw.entities.gazetteer.as_deref().map(&resolve),
            mentions: raw.entities.mentions.as_deref().map(&resolve),
            anchors: raw.entities.anchors.as_deref().map(&resolve),
            link_threshold: raw.entities.link_threshold.unwrap_or(DEFAULT_LINK_THRESHOLD),
            function_words: raw
                .lexical
                .function_words
                .iter()
                .map(|(&l, p)| (l, resolve(p)))
                .collect(),
            abbreviations: raw
                .lexical
                .abbreviations
                .iter()
                .map(|(&l, p)| (l, resolve(p)))
                .collect(),
            cues: raw.cues.iter().map(|(&l, p)| (l, resolve(p))).collect(),
            sentiment_granularity: granularity,
            lpsr_aggregation,
            cpd,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let mut referenced: Vec<(&str, &Path)> = vec![("corpus", &self.corpus)];
        if let Some(p) = &self.queries {
            referenced.push(("event queries", p));
        }
        for (name, p) in &self.external_subsets {
            referenced.push((name.as_str(), p));
        }
        for field in [&self.gazetteer, &self.mentions, &self.anchors] {
            if let Some(p) = field {
                referenced.push(("entities", p));
            }
        }
        for table in [&self.function_words, &self.abbreviations, &self.cues] {
            for p in table.values() {
                referenced.push(("wordlist", p));
            }
        }
        for (what, p) in referenced {
            if !p.exists() {
                bail!("{what} path does not exist: {}", p.display());
            }
        }
        Ok(())
    }
}

/// One event's per-language phrase lists, parsed from the query file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    #[serde(default, rename = "event")]
    pub events: Vec<QueryEvent>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryEvent {
    pub name: String,
    #[serde(default)]
    pub min_volume: Option<usize>,
    pub phrases: BTreeMap<Language, Vec<String>>,
}

pub fn load_query_file(path: &Path) -> Result<QueryFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read query file {}", path.display()))?;
    let parsed: QueryFile = toml::from_str(&text)
        .with_context(|| format!("invalid query file {}", path.display()))?;
    Ok(parsed)
}

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
