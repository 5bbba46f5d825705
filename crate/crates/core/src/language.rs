use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Corpus language. The three values cover the supported editions; articles
/// in any other language are rejected at ingest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Fr,
    De,
    It,
}

impl Language {
    pub const ALL: [Language; 3] = [Language::Fr, Language::De, Language::It];

    pub fn code(self) -> &'static str {
        match self {
            Language::Fr => "fr",
            Language::De => "de",
            Language::It => "it",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fr" => Ok(Language::Fr),
            "de" => Ok(Language::De),
            "it" => Ok(Language::It),
            other => Err(format!("unsupported language code `{other}`")),
        }
    }
}
