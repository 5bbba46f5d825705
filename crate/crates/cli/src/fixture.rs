//! Deterministic synthetic trilingual corpus generator. The manifest records
//! the generator's own ground truth: per-language counts, planted change
//! weeks, and the consensus weeks computed on the planted series.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{ensure, Context, Result};
use chrono::{DateTime, Duration, NaiveDate, SecondsFormat, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use newstrace::changepoint::{analyze_weekly, weekly_counts, CpdParams};
use newstrace::lexical::tokenize;
use newstrace::Language;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SIZE: usize = 1000;

const WINDOW_WEEKS: usize = 60;
const STEP_INDICES: [usize; 2] = [30, 45];
const MIN_VOLUME: usize = 250;
const EVENT_NAME: &str = "aurora";
const LAKESIDE_NAME: &str = "lakeside";
const LAKESIDE_PER_LANGUAGE: usize = 30;
const DUPLICATE_LINES: usize = 12;
const SHORT_BODY_PLANTS: usize = 6;
const MISMATCH_PLANTS: usize = 3;
const FAULTY_OUTLET: &str = "corriere-lagolo";

const LANGS: [Language; 3] = [Language::Fr, Language::De, Language::It];

fn outlets(language: Language) -> &'static [&'static str] {
    match language {
        Language::Fr => &["journal-du-leman", "la-cite-matin", "courrier-des-alpes"],
        Language::De => &[
            "alpenbote",
            "stadtanzeiger",
            "seeblick-nachrichten",
            "tagespost-ost",
        ],
        Language::It => &["gazzetta-del-sud", "corriere-lagolo"],
    }
}

fn footer(outlet: &str) -> String {
    match outlet {
        "journal-du-leman" | "la-cite-matin" | "courrier-des-alpes" => {
            format!("© {outlet}, tous droits réservés.")
        }
        "alpenbote" | "stadtanzeiger" | "seeblick-nachrichten" | "tagespost-ost" => {
            format!("Alle Rechte vorbehalten: {outlet}.")
        }
        _ => format!("Tutti i diritti riservati: {outlet}."),
    }
}

/// Weekly event-article level per language; steps at `STEP_INDICES`.
fn event_level(language: Language, week: usize) -> i64 {
    let regime = if week < STEP_INDICES[0] {
        0
    } else if week < STEP_INDICES[1] {
        1
    } else {
        2
    };
    match language {
        Language::Fr | Language::De => [4, 10, 5][regime],
        Language::It => [1, 5, 1][regime],
    }
}

struct Entity {
    link_id: &'static str,
    category: &'static str,
    /// `CH`, an alpha-2 code, `supranational`, or empty (absent from the
    /// anchor table).
    anchor: &'static str,
    gazetteer_confidence: f64,
    /// Surface per language, indexed fr/de/it.
    surfaces: [&'static str; 3],
}

const AURORA_ORG: Entity = Entity {
    link_id: "Q100",
    category: "organization",
    anchor: "CH",
    gazetteer_confidence: 0.9,
    surfaces: ["Aurora Energie", "Aurora Energie", "Aurora Energie"],
};

const EVENT_PERSON: Entity = Entity {
    link_id: "Q101",
    category: "person",
    anchor: "CH",
    gazetteer_confidence: 0.9,
    surfaces: ["Nina Caprez", "Nina Caprez", "Nina Caprez"],
};

const SWISS_POOL: [Entity; 5] = [
    Entity {
        link_id: "Q110",
        category: "location",
        anchor: "CH",
        gazetteer_confidence: 0.9,
        surfaces: ["Genève", "Genf", "Ginevra"],
    },
    Entity {
        link_id: "Q111",
        category: "location",
        anchor: "CH",
        gazetteer_confidence: 0.9,
        surfaces: ["Lausanne", "Lausanne", "Losanna"],
    },
    Entity {
        link_id: "Q112",
        category: "location",
        anchor: "CH",
        gazetteer_confidence: 0.9,
        surfaces: ["Zurich", "Zürich", "Zurigo"],
    },
    Entity {
        link_id: "Q113",
        category: "location",
        anchor: "CH",
        gazetteer_confidence: 0.9,
        surfaces: ["Lugano", "Lugano", "Lugano"],
    },
    Entity {
        link_id: "Q114",
        category: "location",
        anchor: "CH",
        gazetteer_confidence: 0.9,
        surfaces: ["Coire", "Chur", "Coira"],
    },
];

/// Proximate-neighbor entities per language region.
fn neighbor_pool(language: Language) -> &'static [Entity] {
    const FR: [Entity; 2] = [
        Entity {
            link_id: "Q200",
            category: "location",
            anchor: "FR",
            gazetteer_confidence: 0.9,
            surfaces: ["Lyon", "Lyon", "Lione"],
        },
        Entity {
            link_id: "Q201",
            category: "location",
            anchor: "FR",
            gazetteer_confidence: 0.9,
            surfaces: ["Grenoble", "Grenoble", "Grenoble"],
        },
    ];
    const DE: [Entity; 2] = [
        Entity {
            link_id: "Q210",
            category: "location",
            anchor: "DE",
            gazetteer_confidence: 0.9,
            surfaces: ["Munich", "München", "Monaco di Baviera"],
        },
        Entity {
            link_id: "Q211",
            category: "location",
            anchor: "AT",
            gazetteer_confidence: 0.9,
            surfaces: ["Innsbruck", "Innsbruck", "Innsbruck"],
        },
    ];
    const IT: [Entity; 2] = [
        Entity {
            link_id: "Q220",
            category: "location",
            anchor: "IT",
            gazetteer_confidence: 0.9,
            surfaces: ["Milan", "Mailand", "Milano"],
        },
        Entity {
            link_id: "Q221",
            category: "location",
            anchor: "IT",
            gazetteer_confidence: 0.9,
            surfaces: ["Turin", "Turin", "Torino"],
        },
    ];
    match language {
        Language::Fr => &FR,
        Language::De => &DE,
        Language::It => &IT,
    }
}

const OTHER_POOL: [Entity; 3] = [
    Entity {
        link_id: "Q300",
        category: "location",
        anchor: "GB",
        gazetteer_confidence: 0.9,
        surfaces: ["Londres", "London", "Londra"],
    },
    Entity {
        link_id: "Q301",
        category: "organization",
        anchor: "supranational",
        gazetteer_confidence: 0.9,
        surfaces: ["Union européenne", "Europäische Union", "Unione europea"],
    },
    Entity {
        link_id: "Q302",
        category: "location",
        anchor: "US",
        gazetteer_confidence: 0.5,
        surfaces: ["Washington", "Washington", "Washington"],
    },
];

const UNANCHORED_PERSON: Entity = Entity {
    link_id: "Q999",
    category: "person",
    anchor: "",
    gazetteer_confidence: 0.45,
    surfaces: ["Jonas Brander", "Jonas Brander", "Jonas Brander"],
};

fn all_entities() -> Vec<&'static Entity> {
    let mut all: Vec<&'static Entity> = vec![&AURORA_ORG, &EVENT_PERSON, &UNANCHORED_PERSON];
    all.extend(SWISS_POOL.iter());
    all.extend(neighbor_pool(Language::Fr).iter());
    all.extend(neighbor_pool(Language::De).iter());
    all.extend(neighbor_pool(Language::It).iter());
    all.extend(OTHER_POOL.iter());
    all
}

fn lang_index(language: Language) -> usize {
    match language {
        Language::Fr => 0,
        Language::De => 1,
        Language::It => 2,
    }
}

fn event_leads(language: Language) -> &'static [&'static str] {
    match language {
        Language::Fr => &[
            "Le projet Aurora avance malgré les critiques.",
            "La centrale Aurora alimente le débat régional.",
            "Autour du projet Aurora, la discussion se poursuit.",
        ],
        Language::De => &[
            "Das Projekt Aurora kommt trotz Kritik voran.",
            "Das Kraftwerk Aurora erreicht einen weiteren Meilenstein.",
            "Um das Projekt Aurora wird weiter gerungen.",
        ],
        Language::It => &[
            "Il progetto Aurora avanza nonostante le critiche.",
            "La centrale Aurora supera un altro passaggio.",
            "Attorno al progetto Aurora il dibattito continua.",
        ],
    }
}

fn cue_sentence(language: Language) -> &'static str {
    match language {
        Language::Fr => "Le canton souhaite un calendrier plus clair.",
        Language::De => "Der Kanton verlangt einen klareren Zeitplan.",
        Language::It => "Il cantone chiede un calendario più chiaro.",
    }
}

/// Entity sentence templates; `{E}` is the surface slot.
fn entity_templates(language: Language) -> &'static [&'static str] {
    match language {
        Language::Fr => &[
            "Les autorités de {E} suivent le dossier de près.",
            "Selon {E}, le calendrier reste incertain.",
            "Une délégation de {E} a visité le site en début de semaine.",
            "{E} demande des garanties supplémentaires.",
            "Le rapport cite {E} parmi les acteurs concernés.",
        ],
        Language::De => &[
            "Die Behörden in {E} verfolgen das Dossier aufmerksam.",
            "Nach Angaben von {E} bleibt der Zeitplan offen.",
            "Eine Delegation aus {E} besuchte die Anlage am Montag.",
            "{E} verlangt zusätzliche Garantien.",
            "Der Bericht nennt {E} unter den beteiligten Akteuren.",
        ],
        Language::It => &[
            "Le autorità di {E} seguono il dossier con attenzione.",
            "Secondo {E}, il calendario resta incerto.",
            "Una delegazione di {E} ha visitato il sito lunedì.",
            "{E} chiede garanzie supplementari.",
            "Il rapporto cita {E} tra gli attori coinvolti.",
        ],
    }
}

fn fillers(language: Language) -> &'static [&'static str] {
    match language {
        Language::Fr => &[
            "La rédaction revient sur les faits marquants de la semaine.",
            "Les habitants attendent des réponses concrètes depuis plusieurs mois.",
            "Le marché local montre des signes de reprise progressive.",
            "Une table ronde est prévue pour discuter des prochaines étapes.",
            "Les associations locales préparent une consultation publique.",
            "Le calendrier des travaux sera précisé dans les prochaines semaines.",
            "Plusieurs lecteurs ont réagi à notre précédente enquête.",
            "La météo a compliqué les déplacements dans la vallée.",
        ],
        Language::De => &[
            "Die Redaktion blickt auf die wichtigsten Ereignisse der Woche zurück.",
            "Die Anwohner warten seit Monaten auf konkrete Antworten.",
            "Der lokale Markt zeigt Anzeichen einer langsamen Erholung.",
            "Ein runder Tisch soll die nächsten Schritte klären.",
            "Örtliche Vereine bereiten eine öffentliche Befragung vor.",
            "Der Zeitplan der Arbeiten wird in den kommenden Wochen präzisiert.",
            "Mehrere Leserinnen und Leser reagierten auf unseren letzten Bericht.",
            "Das Wetter erschwerte die Fahrten durch das Tal.",
        ],
        Language::It => &[
            "La redazione ripercorre i fatti salienti della settimana.",
            "Gli abitanti attendono da mesi risposte concrete.",
            "Il mercato locale mostra segnali di lenta ripresa.",
            "Un tavolo di lavoro discuterà i prossimi passi.",
            "Le associazioni locali preparano una consultazione pubblica.",
            "Il calendario dei lavori sarà precisato nelle prossime settimane.",
            "Diversi lettori hanno commentato la nostra ultima inchiesta.",
            "Il maltempo ha complicato gli spostamenti nella valle.",
        ],
    }
}

fn event_titles(language: Language) -> &'static [&'static str] {
    match language {
        Language::Fr => &[
            "Aurora: une étape décisive",
            "Energie: le dossier qui divise la région",
        ],
        Language::De => &[
            "Aurora: eine wichtige Etappe",
            "Energie: das umstrittene Dossier der Region",
        ],
        Language::It => &[
            "Aurora: una tappa decisiva",
            "Energia: il dossier che divide la regione",
        ],
    }
}

fn plain_titles(language: Language) -> &'static [&'static str] {
    match language {
        Language::Fr => &["La semaine en bref", "Vie locale: ce qu'il faut retenir"],
        Language::De => &["Die Woche im Überblick", "Lokales: das Wichtigste in Kürze"],
        Language::It => &["La settimana in breve", "Vita locale: i punti chiave"],
    }
}

fn short_body(language: Language) -> &'static str {
    match language {
        Language::Fr => "Brève mise à jour du dossier, détails à suivre.",
        Language::De => "Kurze Meldung zum Dossier, Details folgen.",
        Language::It => "Breve aggiornamento sul dossier, seguiranno dettagli.",
    }
}

struct PlannedMention {
    surface: String,
    category: &'static str,
    link_id: Option<&'static str>,
    confidence: Option<f64>,
    sentiment: Option<(f64, f64, f64)>,
    start: usize,
    end: usize,
}

struct PlannedArticle {
    seq: usize,
    language: Language,
    outlet: &'static str,
    published_at: DateTime<Utc>,
    title: String,
    /// Full body including the outlet footer line.
    body: String,
    detected_language: Option<Language>,
    is_event: bool,
    annotated: bool,
    /// Spans index into the body with the footer stripped.
    mentions: Vec<PlannedMention>,
    core_tokens: usize,
    id: String,
}

/// Builds one body while tracking char offsets of mention surfaces.
#[derive(Default)]
struct BodyBuilder {
    text: String,
    chars: usize,
    mentions: Vec<PlannedMention>,
}

impl BodyBuilder {
    fn push(&mut self, s: &str) {
        self.text.push_str(s);
        self.chars += s.chars().count();
    }

    fn push_mention(
        &mut self,
        surface: &str,
        category: &'static str,
        link_id: Option<&'static str>,
        confidence: Option<f64>,
        sentiment: Option<(f64, f64, f64)>,
    ) {
        let start = self.chars;
        self.push(surface);
        self.mentions.push(PlannedMention {
            surface: surface.to_string(),
            category,
            link_id,
            confidence,
            sentiment,
            start,
            end: self.chars,
        });
    }
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    outlet: &'a str,
    language: &'a str,
    published_at: String,
    title: &'a str,
    body: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detected_language: Option<&'a str>,
}

#[derive(Serialize)]
struct MentionOut<'a> {
    article_id: &'a str,
    surface: &'a str,
    category: &'a str,
    start: usize,
    end: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    link_id: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_pos: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_neu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_neg: Option<f64>,
}

#[derive(Serialize)]
struct Manifest {
    seed: u64,
    size: usize,
    window_start: String,
    window_weeks: usize,
    accepted: BTreeMap<String, usize>,
    rejected: BTreeMap<String, usize>,
    outlets: BTreeMap<String, OutletManifest>,
    events: BTreeMap<String, EventManifest>,
    mention_records: usize,
    annotated_articles: usize,
}

#[derive(Serialize)]
struct OutletManifest {
    language: String,
    articles: usize,
    faulty: usize,
}

#[derive(Serialize)]
struct EventManifest {
    method: String,
    min_volume: usize,
    per_language: BTreeMap<String, usize>,
    below_min_volume: Vec<String>,
    weekly_counts: BTreeMap<String, Vec<(String, usize)>>,
    planted_step_indices: Vec<usize>,
    planted_step_weeks: Vec<String>,
    consensus: BTreeMap<String, Vec<ConsensusOut>>,
}

#[derive(Serialize)]
struct ConsensusOut {
    index: usize,
    week: String,
}

/// Generate the corpus, resource tables, config, and manifest into `out`.
pub fn generate(seed: u64, size: usize, out: &Path) -> Result<()> {
    ensure!(
        size >= 1000,
        "fixture size must be at least 1000 to fit the planted event series"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = NaiveDate::from_ymd_opt(2020, 1, 6).expect("valid date");
    let invalid = invalid_lines();
    let accepted_target = size - DUPLICATE_LINES - invalid.len();

    let mut articles: Vec<PlannedArticle> = Vec::new();
    let mut seq = 0usize;

    // Event articles per week, following the planted step levels.
    let mut weekly: BTreeMap<Language, Vec<usize>> = BTreeMap::new();
    for &language in &LANGS {
        let mut counts = Vec::with_capacity(WINDOW_WEEKS);
        for week in 0..WINDOW_WEEKS {
            let jitter = rng.gen_range(-1i64..=1);
            let mut count = (event_level(language, week) + jitter).max(0);
            if week == 0 || week == WINDOW_WEEKS - 1 {
                count = count.max(1);
            }
            counts.push(count as usize);
        }
        weekly.insert(language, counts);
    }
    for &language in &LANGS {
        for week in 0..WINDOW_WEEKS {
            for _ in 0..weekly[&language][week] {
                let article = event_article(&mut rng, language, start, week, seq);
                articles.push(article);
                seq += 1;
            }
        }
    }
    let event_totals: BTreeMap<Language, usize> = LANGS
        .iter()
        .map(|&l| (l, weekly[&l].iter().sum()))
        .collect();

    // Background articles fill the per-language share targets (2:2:1).
    let fr_target = accepted_target * 2 / 5;
    let de_target = accepted_target * 2 / 5;
    let it_target = accepted_target - fr_target - de_target;
    for (language, target) in [
        (Language::Fr, fr_target),
        (Language::De, de_target),
        (Language::It, it_target),
    ] {
        let background = target.saturating_sub(event_totals[&language]);
        // The external subset draws from non-faulty background articles;
        // the faulty plants all land in the Italian partition.
        let needed = LAKESIDE_PER_LANGUAGE
            + if language == Language::It {
                SHORT_BODY_PLANTS + MISMATCH_PLANTS
            } else {
                0
            };
        ensure!(
            background >= needed,
            "language {language} has too few background articles \
             ({background}, needs {needed}); increase the fixture size"
        );
        for k in 0..background {
            let plant = if language == Language::It {
                if k < SHORT_BODY_PLANTS {
                    Plant::ShortBody
                } else if k < SHORT_BODY_PLANTS + MISMATCH_PLANTS {
                    Plant::LanguageMismatch
                } else {
                    Plant::None
                }
            } else {
                Plant::None
            };
            let article = background_article(&mut rng, language, start, plant, seq);
            articles.push(article);
            seq += 1;
        }
    }

    // Stable ids in publication order.
    articles.sort_by(|a, b| a.published_at.cmp(&b.published_at).then(a.seq.cmp(&b.seq)));
    for (i, article) in articles.iter_mut().enumerate() {
        article.id = format!("art-{:06}", i + 1);
    }

    let mut lines: Vec<String> = articles
        .iter()
        .map(|a| {
            serde_json::to_string(&RecordOut {
                id: &a.id,
                outlet: a.outlet,
                language: a.language.code(),
                published_at: a.published_at.to_rfc3339_opts(SecondsFormat::Secs, true),
                title: &a.title,
                body: &a.body,
                detected_language: a.detected_language.map(|l| l.code()),
            })
            .expect("record serializes")
        })
        .collect();

    // Duplicates re-emit a first-half line; all extra lines are inserted in
    // the second half so earlier positions stay stable.
    let half = lines.len() / 2;
    let mut extras: Vec<String> = Vec::with_capacity(DUPLICATE_LINES + invalid.len());
    for _ in 0..DUPLICATE_LINES {
        extras.push(lines[rng.gen_range(0..half)].clone());
    }
    extras.extend(invalid.iter().cloned());
    for extra in extras {
        let at = rng.gen_range(half..=lines.len());
        lines.insert(at, extra);
    }
    ensure!(lines.len() == size, "fixture line count drifted");

    std::fs::create_dir_all(out)
        .with_context(|| format!("cannot create {}", out.display()))?;
    write_file(&out.join("corpus.jsonl"), &(lines.join("\n") + "\n"))?;

    // Annotations, sorted by article id and mention start.
    let mut mention_lines = Vec::new();
    for article in &articles {
        if !article.annotated {
            continue;
        }
        for m in &article.mentions {
            mention_lines.push(
                serde_json::to_string(&MentionOut {
                    article_id: &article.id,
                    surface: &m.surface,
                    category: m.category,
                    start: m.start,
                    end: m.end,
                    link_id: m.link_id,
                    confidence: m.confidence,
                    p_pos: m.sentiment.map(|s| s.0),
                    p_neu: m.sentiment.map(|s| s.1),
                    p_neg: m.sentiment.map(|s| s.2),
                })
                .expect("mention serializes"),
            );
        }
    }
    write_file(&out.join("mentions.jsonl"), &(mention_lines.join("\n") + "\n"))?;

    write_file(&out.join("gazetteer.tsv"), &gazetteer_tsv())?;
    write_file(&out.join("anchors.tsv"), &anchors_tsv())?;
    write_file(&out.join("queries.toml"), QUERIES_TOML)?;

    // External subset: background articles only, never faulty ones.
    let mut lakeside: BTreeMap<Language, Vec<String>> = BTreeMap::new();
    for &language in &LANGS {
        let pool: Vec<&PlannedArticle> = articles
            .iter()
            .filter(|a| {
                a.language == language
                    && !a.is_event
                    && a.core_tokens >= 25
                    && a.detected_language.is_none()
            })
            .collect();
        ensure!(
            pool.len() >= LAKESIDE_PER_LANGUAGE,
            "language {language} has too few background articles for the external subset"
        );
        let mut ids: Vec<String> = pool
            .choose_multiple(&mut rng, LAKESIDE_PER_LANGUAGE)
            .map(|a| a.id.clone())
            .collect();
        ids.sort();
        lakeside.insert(language, ids);
    }
    let mut lakeside_text = String::new();
    for (&language, ids) in &lakeside {
        for id in ids {
            lakeside_text.push_str(language.code());
            lakeside_text.push('\t');
            lakeside_text.push_str(id);
            lakeside_text.push('\n');
        }
    }
    write_file(&out.join("lakeside.tsv"), &lakeside_text)?;

    write_file(&out.join("config.toml"), &config_toml(seed))?;

    let manifest = build_manifest(seed, size, start, &articles, &weekly, &lakeside, &invalid)?;
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&out.join("manifest.json"), &(json + "\n"))?;
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Plant {
    None,
    ShortBody,
    LanguageMismatch,
}

fn timestamp_in_week(
    rng: &mut ChaCha8Rng,
    start: NaiveDate,
    week: usize,
) -> DateTime<Utc> {
    let date = start + Duration::days((week * 7) as i64 + rng.gen_range(0..5));
    Utc.from_utc_datetime(
        &date
            .and_hms_opt(rng.gen_range(7..19), rng.gen_range(0..60), 0)
            .expect("valid time"),
    )
}

fn pick<'a>(rng: &mut ChaCha8Rng, options: &[&'a str]) -> &'a str {
    options[rng.gen_range(0..options.len())]
}

fn confidence_draw(rng: &mut ChaCha8Rng) -> f64 {
    let roll: f64 = rng.gen();
    if roll < 0.75 {
        rng.gen_range(0.55..0.98)
    } else if roll < 0.85 {
        0.5
    } else {
        rng.gen_range(0.30..0.45)
    }
}

fn sentiment_draw(rng: &mut ChaCha8Rng) -> Option<(f64, f64, f64)> {
    if rng.gen::<f64>() >= 0.8 {
        return None;
    }
    let a = rng.gen_range(1..=8) as f64;
    let b = rng.gen_range(1..=8) as f64;
    let c = rng.gen_range(1..=8) as f64;
    let total = a + b + c;
    Some((a / total, b / total, c / total))
}

fn push_entity_sentence(
    rng: &mut ChaCha8Rng,
    builder: &mut BodyBuilder,
    language: Language,
    entity: &Entity,
    annotated: bool,
) {
    let template = pick(rng, entity_templates(language));
    let surface = entity.surfaces[lang_index(language)];
    let (prefix, suffix) = template.split_once("{E}").expect("template has slot");
    builder.push(prefix);
    let (link_id, confidence, sentiment) = if annotated {
        let confidence = confidence_draw(rng);
        (Some(entity.link_id), Some(confidence), sentiment_draw(rng))
    } else {
        // Gazetteer-path articles still record the plan for bookkeeping;
        // only annotated articles emit mention lines.
        (Some(entity.link_id), Some(entity.gazetteer_confidence), None)
    };
    builder.push_mention(surface, entity.category, link_id, confidence, sentiment);
    builder.push(suffix);
    builder.push(" ");
}

fn unlinked_surface(language: Language) -> &'static str {
    match language {
        Language::Fr => "le comité local",
        Language::De => "das lokale Komitee",
        Language::It => "il comitato locale",
    }
}

fn event_article(
    rng: &mut ChaCha8Rng,
    language: Language,
    start: NaiveDate,
    week: usize,
    seq: usize,
) -> PlannedArticle {
    let annotated = rng.gen::<f64>() < 0.7;
    let mut builder = BodyBuilder::default();
    builder.push(pick(rng, event_leads(language)));
    builder.push(" ");
    if rng.gen::<f64>() < 0.3 {
        builder.push(cue_sentence(language));
        builder.push(" ");
    }
    push_entity_sentence(rng, &mut builder, language, &AURORA_ORG, annotated);
    let extra = rng.gen_range(0..=3usize);
    for _ in 0..extra {
        let roll: f64 = rng.gen();
        let entity: &Entity = if roll < 0.5 {
            let pool: [&Entity; 6] = [
                &EVENT_PERSON,
                &SWISS_POOL[0],
                &SWISS_POOL[1],
                &SWISS_POOL[2],
                &SWISS_POOL[3],
                &SWISS_POOL[4],
            ];
            pool[rng.gen_range(0..pool.len())]
        } else if roll < 0.8 {
            let pool = neighbor_pool(language);
            &pool[rng.gen_range(0..pool.len())]
        } else {
            &OTHER_POOL[rng.gen_range(0..OTHER_POOL.len())]
        };
        push_entity_sentence(rng, &mut builder, language, entity, annotated);
    }
    if rng.gen::<f64>() < 0.15 {
        push_entity_sentence(rng, &mut builder, language, &UNANCHORED_PERSON, annotated);
    }
    if annotated && rng.gen::<f64>() < 0.1 {
        let template = pick(rng, entity_templates(language));
        let (prefix, suffix) = template.split_once("{E}").expect("template has slot");
        builder.push(prefix);
        builder.push_mention(unlinked_surface(language), "organization", None, None, None);
        builder.push(suffix);
        builder.push(" ");
    }
    finish_article(rng, builder, language, start, week, seq, true, annotated, Plant::None)
}

fn background_article(
    rng: &mut ChaCha8Rng,
    language: Language,
    start: NaiveDate,
    plant: Plant,
    seq: usize,
) -> PlannedArticle {
    let week = rng.gen_range(0..WINDOW_WEEKS);
    let mut builder = BodyBuilder::default();
    if plant == Plant::ShortBody {
        builder.push(short_body(language));
    } else {
        let entities = rng.gen_range(1..=3usize);
        for _ in 0..entities {
            let roll: f64 = rng.gen();
            let entity: &Entity = if roll < 0.5 {
                &SWISS_POOL[rng.gen_range(0..SWISS_POOL.len())]
            } else if roll < 0.8 {
                let pool = neighbor_pool(language);
                &pool[rng.gen_range(0..pool.len())]
            } else {
                &OTHER_POOL[rng.gen_range(0..OTHER_POOL.len())]
            };
            push_entity_sentence(rng, &mut builder, language, entity, false);
        }
    }
    finish_article(rng, builder, language, start, week, seq, false, false, plant)
}

#[allow(clippy::too_many_arguments)]
fn finish_article(
    rng: &mut ChaCha8Rng,
    mut builder: BodyBuilder,
    language: Language,
    start: NaiveDate,
    week: usize,
    seq: usize,
    is_event: bool,
    annotated: bool,
    plant: Plant,
) -> PlannedArticle {
    if plant != Plant::ShortBody {
        builder.push("\n");
        let bank = fillers(language);
        let mut order: Vec<usize> = (0..bank.len()).collect();
        order.shuffle(rng);
        let n = rng.gen_range(4..=6usize);
        for (i, &idx) in order[..n].iter().enumerate() {
            if i > 0 {
                builder.push(" ");
            }
            builder.push(bank[idx]);
        }
    }
    let core = builder.text.trim_end().to_string();
    let core_tokens = tokenize(&core).len();
    let outlet = outlets(language)[rng.gen_range(0..outlets(language).len())];
    let outlet = if plant == Plant::ShortBody || plant == Plant::LanguageMismatch {
        FAULTY_OUTLET
    } else {
        outlet
    };
    let title = if is_event {
        pick(rng, event_titles(language)).to_string()
    } else {
        pick(rng, plain_titles(language)).to_string()
    };
    let detected_language = if plant == Plant::LanguageMismatch {
        Some(Language::De)
    } else {
        None
    };
    PlannedArticle {
        seq,
        language,
        outlet,
        published_at: timestamp_in_week(rng, start, week),
        title,
        body: format!("{core}\n{}", footer(outlet)),
        detected_language,
        is_event,
        annotated,
        mentions: builder.mentions,
        core_tokens,
        id: String::new(),
    }
}

fn invalid_lines() -> Vec<String> {
    let full = |id: &str, language: &str, published_at: &str, body: &str, detected: Option<&str>| {
        serde_json::to_string(&RecordOut {
            id,
            outlet: "journal-du-leman",
            language,
            published_at: published_at.to_string(),
            title: "Brève",
            body,
            detected_language: detected,
        })
        .expect("record serializes")
    };
    vec![
        "{ this is not json".to_string(),
        "[1, 2, 3]".to_string(),
        r#"{"id": "bad-1"}"#.to_string(),
        full("bad-2", "fr", "not-a-date", "Un texte assez court.", None),
        full("bad-3", "fr", "2020-02-30T10:00:00Z", "Un texte assez court.", None),
        full("bad-4", "en", "2020-03-02T10:00:00Z", "Some english text here.", None),
        full("bad-5", "fr", "2020-03-02T10:00:00Z", "Un texte assez court.", Some("xx")),
        full("   ", "fr", "2020-03-02T10:00:00Z", "Un texte assez court.", None),
        full("bad-6", "fr", "2020-03-02T10:00:00Z", "…", None),
        full("bad-7", "fr", "2020-03-02T10:00:00Z", "", None),
    ]
}

const QUERIES_TOML: &str = r#"# Event queries: per-language phrase lists.

[[event]]
name = "aurora"

[event.phrases]
fr = ["aurora", "projet aurora"]
de = ["aurora", "projekt aurora"]
it = ["aurora", "progetto aurora"]
"#;

fn config_toml(seed: u64) -> String {
    format!(
        r#"corpus = "corpus.jsonl"
languages = ["fr", "de", "it"]
output_dir = "out"
seed = {seed}

[events]
queries = "queries.toml"
min_volume = {MIN_VOLUME}

[events.external]
lakeside = "lakeside.tsv"

[entities]
gazetteer = "gazetteer.tsv"
mentions = "mentions.jsonl"
anchors = "anchors.tsv"
"#
    )
}

fn gazetteer_tsv() -> String {
    let mut rows: Vec<String> = Vec::new();
    for entity in all_entities() {
        let mut surfaces: Vec<&str> = entity.surfaces.to_vec();
        surfaces.sort_unstable();
        surfaces.dedup();
        for surface in surfaces {
            rows.push(format!(
                "{surface}\t{}\t{}\t{}",
                entity.category, entity.link_id, entity.gazetteer_confidence
            ));
        }
    }
    rows.sort();
    let mut text = String::from("# surface\tcategory\tlink_id\tconfidence\n");
    text.push_str(&rows.join("\n"));
    text.push('\n');
    text
}

fn anchors_tsv() -> String {
    let mut rows: Vec<String> = all_entities()
        .iter()
        .filter(|e| !e.anchor.is_empty())
        .map(|e| format!("{}\t{}", e.link_id, e.anchor))
        .collect();
    rows.sort();
    rows.dedup();
    let mut text = String::from("# link_id\tanchor\n");
    text.push_str(&rows.join("\n"));
    text.push('\n');
    text
}

fn build_manifest(
    seed: u64,
    size: usize,
    start: NaiveDate,
    articles: &[PlannedArticle],
    weekly: &BTreeMap<Language, Vec<usize>>,
    lakeside: &BTreeMap<Language, Vec<String>>,
    invalid: &[String],
) -> Result<Manifest> {
    let mut accepted: BTreeMap<String, usize> = BTreeMap::new();
    for article in articles {
        *accepted.entry(article.language.code().to_string()).or_insert(0) += 1;
    }
    accepted.insert("total".to_string(), articles.len());

    let mut rejected: BTreeMap<String, usize> = BTreeMap::new();
    rejected.insert("duplicate:id".into(), DUPLICATE_LINES);
    rejected.insert("malformed:json".into(), 3);
    rejected.insert("malformed:timestamp".into(), 2);
    rejected.insert("malformed:language".into(), 2);
    rejected.insert("malformed:id".into(), 1);
    rejected.insert("faulty:empty_body".into(), 2);
    rejected.insert("total".into(), DUPLICATE_LINES + invalid.len());

    let mut outlets_manifest: BTreeMap<String, OutletManifest> = BTreeMap::new();
    for article in articles {
        let entry = outlets_manifest
            .entry(article.outlet.to_string())
            .or_insert_with(|| OutletManifest {
                language: article.language.code().to_string(),
                articles: 0,
                faulty: 0,
            });
        entry.articles += 1;
        let mismatch = article
            .detected_language
            .map(|d| d != article.language)
            .unwrap_or(false);
        if article.core_tokens < 25 || mismatch {
            entry.faulty += 1;
        }
    }

    let mut events = BTreeMap::new();
    events.insert(
        EVENT_NAME.to_string(),
        event_manifest(
            "bm25",
            articles,
            |a| a.is_event,
            Some(weekly),
            start,
            true,
        )?,
    );
    let lakeside_ids: std::collections::BTreeSet<&str> = lakeside
        .values()
        .flatten()
        .map(String::as_str)
        .collect();
    events.insert(
        LAKESIDE_NAME.to_string(),
        event_manifest(
            "external_topic",
            articles,
            |a| lakeside_ids.contains(a.id.as_str()),
            None,
            start,
            false,
        )?,
    );

    let mention_records = articles
        .iter()
        .filter(|a| a.annotated)
        .map(|a| a.mentions.len())
        .sum();
    let annotated_articles = articles.iter().filter(|a| a.annotated).count();

    Ok(Manifest {
        seed,
        size,
        window_start: start.to_string(),
        window_weeks: WINDOW_WEEKS,
        accepted,
        rejected,
        outlets: outlets_manifest,
        events,
        mention_records,
        annotated_articles,
    })
}

/// Weekly counts plus the consensus the detector stack finds on them, per
/// language. The event series is cross-checked against the planted plan.
fn event_manifest(
    method: &str,
    articles: &[PlannedArticle],
    member: impl Fn(&PlannedArticle) -> bool,
    planted: Option<&BTreeMap<Language, Vec<usize>>>,
    start: NaiveDate,
    planted_steps: bool,
) -> Result<EventManifest> {
    let mut per_language = BTreeMap::new();
    let mut below = Vec::new();
    let mut weekly_out = BTreeMap::new();
    let mut consensus_out = BTreeMap::new();
    for &language in &LANGS {
        let timestamps: Vec<DateTime<Utc>> = articles
            .iter()
            .filter(|a| a.language == language && member(a))
            .map(|a| a.published_at)
            .collect();
        per_language.insert(language.code().to_string(), timestamps.len());
        if timestamps.len() < MIN_VOLUME {
            below.push(language.code().to_string());
        }
        let series = weekly_counts(EVENT_NAME, language, &timestamps)?;
        if let Some(plan) = planted {
            ensure!(
                series.len() == WINDOW_WEEKS,
                "event series for {language} spans {} weeks, expected {WINDOW_WEEKS}",
                series.len()
            );
            let planned: Vec<f64> = plan[&language].iter().map(|&c| c as f64).collect();
            ensure!(series.values() == planned.as_slice(), "weekly counts drifted");
        }
        weekly_out.insert(
            language.code().to_string(),
            series
                .weeks()
                .zip(series.values())
                .map(|(week, &v)| (week.to_string(), v as usize))
                .collect(),
        );
        let analysis = analyze_weekly(&series, &CpdParams::default())?;
        consensus_out.insert(
            language.code().to_string(),
            analysis
                .report
                .consensus
                .iter()
                .map(|p| ConsensusOut {
                    index: p.index,
                    week: series.week_at(p.index).to_string(),
                })
                .collect(),
        );
    }
    let (indices, weeks) = if planted_steps {
        (
            STEP_INDICES.to_vec(),
            STEP_INDICES
                .iter()
                .map(|&i| {
                    newstrace::calendar::Week::from_date(start + Duration::days((i * 7) as i64))
                        .to_string()
                })
                .collect(),
        )
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(EventManifest {
        method: method.to_string(),
        min_volume: MIN_VOLUME,
        per_language,
        below_min_volume: below,
        weekly_counts: weekly_out,
        planted_step_indices: indices,
        planted_step_weeks: weeks,
        consensus: consensus_out,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
