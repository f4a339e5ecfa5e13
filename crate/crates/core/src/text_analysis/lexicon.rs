//! Lexicon tables backing the rule-based analyzers.
//!
//! The on-disk format is a single JSON document with the sections
//! `closed_class`, `open_class`, `irregular_verbs`, `irregular_nouns`,
//! `gazetteers`, `date_patterns`, `units`, `titles` and `abbreviations`.
//! Everything is lowercased on load except the abbreviation list, which is
//! matched against surface text.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use super::PosTag;

const BUNDLED_LEXICON: &str = include_str!("../../data/lexicon.json");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed lexicon: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("unknown closed-class section `{0}`")]
    UnknownSection(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    #[serde(default)]
    closed_class: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    open_class: OpenClassFile,
    #[serde(default)]
    irregular_verbs: BTreeMap<String, String>,
    #[serde(default)]
    irregular_nouns: BTreeMap<String, String>,
    #[serde(default)]
    gazetteers: GazetteerFile,
    #[serde(default)]
    date_patterns: DatePatternFile,
    #[serde(default)]
    units: Vec<String>,
    #[serde(default)]
    titles: Vec<String>,
    #[serde(default)]
    abbreviations: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpenClassFile {
    #[serde(default)]
    noun: Vec<String>,
    #[serde(default)]
    verb: Vec<String>,
    #[serde(default)]
    adjective: Vec<String>,
    #[serde(default)]
    adverb: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GazetteerFile {
    #[serde(default)]
    person: Vec<String>,
    #[serde(default)]
    location: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatePatternFile {
    #[serde(default)]
    weekdays: Vec<String>,
    #[serde(default)]
    months: Vec<String>,
    #[serde(default)]
    time_words: Vec<String>,
    #[serde(default)]
    duration_units: Vec<String>,
}

/// What a closed-class entry contributes besides its tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedKind {
    Plain,
    Auxiliary,
    Conjunction,
}

/// Compiled, read-only lexicon.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    closed: HashMap<String, (PosTag, ClosedKind)>,
    open: HashMap<String, Vec<PosTag>>,
    irregular: HashMap<String, String>,
    inverse_irregular: HashMap<String, Vec<String>>,
    persons: HashSet<String>,
    locations: HashSet<String>,
    weekdays: HashSet<String>,
    months: HashSet<String>,
    time_words: HashSet<String>,
    duration_units: HashSet<String>,
    units: HashSet<String>,
    titles: HashSet<String>,
    abbreviations: Vec<String>,
}

fn lower_set(words: &[String]) -> HashSet<String> {
    words.iter().map(|w| w.to_lowercase()).collect()
}

impl Lexicon {
    /// Lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        let file: LexiconFile = serde_json::from_str(text)?;
        let mut lex = Lexicon::default();

        for (section, words) in &file.closed_class {
            let entry = match section.as_str() {
                "determiner" => (PosTag::Determiner, ClosedKind::Plain),
                "preposition" => (PosTag::Preposition, ClosedKind::Plain),
                "pronoun" => (PosTag::Pronoun, ClosedKind::Plain),
                "wh_word" => (PosTag::WhWord, ClosedKind::Plain),
                "number" => (PosTag::Number, ClosedKind::Plain),
                "auxiliary" => (PosTag::Verb, ClosedKind::Auxiliary),
                "conjunction" => (PosTag::Other, ClosedKind::Conjunction),
                "other" => (PosTag::Other, ClosedKind::Plain),
                other => return Err(LexiconError::UnknownSection(other.to_string())),
            };
            for w in words {
                lex.closed.entry(w.to_lowercase()).or_insert(entry);
            }
        }

        let open = &file.open_class;
        for (tag, words) in [
            (PosTag::Noun, &open.noun),
            (PosTag::Verb, &open.verb),
            (PosTag::Adjective, &open.adjective),
            (PosTag::Adverb, &open.adverb),
        ] {
            for w in words {
                let tags = lex.open.entry(w.to_lowercase()).or_default();
                if !tags.contains(&tag) {
                    tags.push(tag);
                }
            }
        }

        for (form, lemma) in file.irregular_verbs.iter().chain(&file.irregular_nouns) {
            let (form, lemma) = (form.to_lowercase(), lemma.to_lowercase());
            lex.inverse_irregular
                .entry(lemma.clone())
                .or_default()
                .push(form.clone());
            lex.irregular.insert(form, lemma);
        }
        for forms in lex.inverse_irregular.values_mut() {
            forms.sort();
            forms.dedup();
        }

        lex.persons = lower_set(&file.gazetteers.person);
        lex.locations = lower_set(&file.gazetteers.location);
        lex.weekdays = lower_set(&file.date_patterns.weekdays);
        lex.months = lower_set(&file.date_patterns.months);
        lex.time_words = lower_set(&file.date_patterns.time_words);
        lex.duration_units = lower_set(&file.date_patterns.duration_units);
        lex.units = lower_set(&file.units);
        lex.titles = file
            .titles
            .iter()
            .map(|t| t.trim_end_matches('.').to_lowercase())
            .collect();
        lex.abbreviations = file.abbreviations.clone();
        Ok(lex)
    }

    pub fn closed_class(&self, lower: &str) -> Option<(PosTag, ClosedKind)> {
        self.closed.get(lower).copied()
    }

    pub fn open_tags(&self, lower: &str) -> &[PosTag] {
        self.open.get(lower).map(Vec::as_slice).unwrap_or(&[])
    }

    fn is_known(&self, lower: &str) -> bool {
        self.closed.contains_key(lower) || self.open.contains_key(lower)
    }

    pub fn is_person(&self, lower: &str) -> bool {
        self.persons.contains(lower)
    }

    pub fn is_location(&self, lower: &str) -> bool {
        self.locations.contains(lower)
    }

    pub fn is_date_word(&self, lower: &str) -> bool {
        self.weekdays.contains(lower) || self.months.contains(lower) || self.time_words.contains(lower)
    }

    pub fn is_month(&self, lower: &str) -> bool {
        self.months.contains(lower)
    }

    pub fn is_duration_unit(&self, lemma: &str) -> bool {
        self.duration_units.contains(lemma)
    }

    pub fn is_unit(&self, lemma: &str) -> bool {
        self.units.contains(lemma)
    }

    pub fn is_title(&self, lower: &str) -> bool {
        self.titles.contains(lower.trim_end_matches('.'))
    }

    pub fn abbreviations(&self) -> &[String] {
        &self.abbreviations
    }

    pub fn is_abbreviation(&self, surface: &str) -> bool {
        self.abbreviations.iter().any(|a| a == surface)
    }

    /// Lowercased lemma for a surface form.
    ///
    /// Irregular tables win, then known base forms, then suffix stripping
    /// validated against the open-class lexicon where possible.
    pub fn lemmatize(&self, surface: &str) -> String {
        let lower = surface.to_lowercase();
        if let Some(lemma) = self.irregular.get(&lower) {
            return lemma.clone();
        }
        if self.is_known(&lower) || !lower.chars().all(|c| c.is_alphabetic() || c == '\'' || c == '-') {
            return lower;
        }
        self.strip_suffix(&lower).unwrap_or(lower)
    }

    fn strip_suffix(&self, w: &str) -> Option<String> {
        let n = w.chars().count();
        let known = |s: &str| self.open.contains_key(s);

        if let Some(stem) = w.strip_suffix("ies") {
            if n > 4 {
                return Some(format!("{stem}y"));
            }
        }
        if let Some(stem) = w.strip_suffix("es") {
            if n > 3 {
                if known(stem) {
                    return Some(stem.to_string());
                }
                let sibilant = ["ss", "x", "z", "ch", "sh"].iter().any(|s| stem.ends_with(s));
                if sibilant && !known(&format!("{stem}e")) {
                    return Some(stem.to_string());
                }
            }
        }
        if let Some(stem) = w.strip_suffix('s') {
            let keep = ["ss", "us", "is", "ous"].iter().any(|s| w.ends_with(s));
            if n > 3 && !keep {
                return Some(stem.to_string());
            }
        }
        for suffix in ["ed", "ing"] {
            let Some(stem) = w.strip_suffix(suffix) else {
                continue;
            };
            if stem.chars().count() < 2 || !stem.chars().any(is_vowel) {
                continue;
            }
            if suffix == "ed" {
                if let Some(s) = stem.strip_suffix('i') {
                    return Some(format!("{s}y"));
                }
            }
            let with_e = format!("{stem}e");
            let undoubled = undouble(stem);
            if known(stem) {
                return Some(stem.to_string());
            }
            if known(&with_e) {
                return Some(with_e);
            }
            if let Some(u) = &undoubled {
                if known(u) {
                    return Some(u.clone());
                }
            }
            if let Some(u) = undoubled {
                return Some(u);
            }
            return Some(stem.to_string());
        }
        None
    }

    /// Inflected surface variants of a lemma, excluding the lemma itself.
    pub fn inflections(&self, lemma: &str, pos: PosTag) -> Vec<String> {
        let mut out: Vec<String> = match pos {
            PosTag::Noun => match self.inverse_irregular.get(lemma) {
                Some(forms) => forms.clone(),
                None => vec![add_s(lemma)],
            },
            PosTag::Verb => {
                let mut forms = vec![add_s(lemma), add_ing(lemma)];
                match self.inverse_irregular.get(lemma) {
                    Some(irr) => forms.extend(irr.iter().cloned()),
                    None => forms.push(add_ed(lemma)),
                }
                forms
            }
            _ => Vec::new(),
        };
        out.retain(|f| f != lemma);
        out.sort();
        out.dedup();
        out
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn undouble(stem: &str) -> Option<String> {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n >= 3
        && chars[n - 1] == chars[n - 2]
        && !is_vowel(chars[n - 1])
        && !matches!(chars[n - 1], 'l' | 's' | 'z' | 'f')
    {
        Some(chars[..n - 1].iter().collect())
    } else {
        None
    }
}

fn add_s(w: &str) -> String {
    if ["s", "x", "z", "ch", "sh"].iter().any(|s| w.ends_with(s)) {
        format!("{w}es")
    } else if w.ends_with('y') && w.len() > 1 && !is_vowel(w.chars().rev().nth(1).unwrap_or('a')) {
        format!("{}ies", &w[..w.len() - 1])
    } else {
        format!("{w}s")
    }
}

fn double_final(w: &str) -> bool {
    let chars: Vec<char> = w.chars().collect();
    let n = chars.len();
    n == 3 && !is_vowel(chars[0]) && is_vowel(chars[1]) && !is_vowel(chars[2]) && !matches!(chars[2], 'w' | 'x' | 'y')
}

fn add_ing(w: &str) -> String {
    if w.ends_with('e') && !w.ends_with("ee") && w.len() > 2 {
        format!("{}ing", &w[..w.len() - 1])
    } else if double_final(w) {
        format!("{w}{}ing", &w[w.len() - 1..])
    } else {
        format!("{w}ing")
    }
}

fn add_ed(w: &str) -> String {
    if w.ends_with('e') {
        format!("{w}d")
    } else if w.ends_with('y') && w.len() > 1 && !is_vowel(w.chars().rev().nth(1).unwrap_or('a')) {
        format!("{}ied", &w[..w.len() - 1])
    } else if double_final(w) {
        format!("{w}{}ed", &w[w.len() - 1..])
    } else {
        format!("{w}ed")
    }
}
