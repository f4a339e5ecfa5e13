use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{SemanticRole, TimeAnchor};

const BUNDLED: &str = include_str!("../../data/verbs.json");

/// Syntactic position a role is read from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Slot {
    Subject,
    Object,
    /// A noun phrase or prepositional phrase headed by a date or duration.
    Temporal,
    /// A prepositional phrase headed by any of the listed prepositions.
    Prep(Vec<String>),
}

impl Slot {
    pub fn accepts_preposition(&self, prep: &str) -> bool {
        match self {
            Slot::Prep(list) => list.iter().any(|p| p == prep),
            _ => false,
        }
    }
}

impl TryFrom<String> for Slot {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match s.as_str() {
            "subject" => Ok(Slot::Subject),
            "object" => Ok(Slot::Object),
            "temporal" => Ok(Slot::Temporal),
            other => {
                let list = other
                    .strip_prefix("pp:")
                    .ok_or_else(|| format!("unknown slot `{other}`"))?;
                let preps: Vec<String> = list
                    .split('|')
                    .map(|p| p.trim().to_lowercase())
                    .filter(|p| !p.is_empty())
                    .collect();
                if preps.is_empty() {
                    return Err(format!("slot `{other}` names no preposition"));
                }
                Ok(Slot::Prep(preps))
            }
        }
    }
}

impl From<Slot> for String {
    fn from(slot: Slot) -> String {
        match slot {
            Slot::Subject => "subject".into(),
            Slot::Object => "object".into(),
            Slot::Temporal => "temporal".into(),
            Slot::Prep(list) => format!("pp:{}", list.join("|")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleSlot {
    pub slot: Slot,
    pub role: SemanticRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateTemplate {
    #[serde(rename = "predicate")]
    pub name: String,
    #[serde(rename = "time")]
    pub anchor: TimeAnchor,
    pub args: Vec<SemanticRole>,
}

/// Which frame roles become the subject and object of an ontology triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyMapping {
    pub property: String,
    pub subject: SemanticRole,
    pub object: SemanticRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbEntry {
    pub lemma: String,
    #[serde(default)]
    pub class: String,
    pub role_pattern: Vec<RoleSlot>,
    pub frame_template: Vec<PredicateTemplate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ontology_property: Option<OntologyMapping>,
}

impl VerbEntry {
    pub fn role_for(&self, slot: &Slot) -> Option<SemanticRole> {
        self.role_pattern.iter().find(|rs| &rs.slot == slot).map(|rs| rs.role)
    }

    /// Role of the first prepositional slot listing `prep`.
    pub fn role_for_preposition(&self, prep: &str) -> Option<SemanticRole> {
        self.role_pattern
            .iter()
            .find(|rs| rs.slot.accepts_preposition(prep))
            .map(|rs| rs.role)
    }

    /// Roles of prepositional slots, in pattern order.
    pub fn prep_roles(&self) -> impl Iterator<Item = SemanticRole> + '_ {
        self.role_pattern
            .iter()
            .filter(|rs| matches!(rs.slot, Slot::Prep(_)))
            .map(|rs| rs.role)
    }

    pub fn has_role(&self, role: SemanticRole) -> bool {
        self.role_pattern.iter().any(|rs| rs.role == role)
    }

    fn validate(&self) -> Result<(), String> {
        if self.lemma.trim().is_empty() {
            return Err("empty lemma".into());
        }
        let mut seen = BTreeSet::new();
        for rs in &self.role_pattern {
            if !seen.insert(rs.role) {
                return Err(format!("role {} appears in more than one slot", rs.role));
            }
        }
        for t in &self.frame_template {
            if t.name.trim().is_empty() {
                return Err("frame predicate with an empty name".into());
            }
            if let Some(r) = t.args.iter().find(|r| !seen.contains(r)) {
                return Err(format!(
                    "predicate `{}` uses role {} missing from the role pattern",
                    t.name, r
                ));
            }
        }
        if let Some(m) = &self.ontology_property {
            if m.property.trim().is_empty() {
                return Err("ontology mapping with an empty property".into());
            }
            for r in [m.subject, m.object] {
                if !seen.contains(&r) {
                    return Err(format!("ontology mapping uses role {r} missing from the role pattern"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerbLexiconError {
    #[error("cannot read verb lexicon {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed verb lexicon: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("invalid verb entry `{lemma}`: {reason}")]
    Invalid { lemma: String, reason: String },
}

/// Verb entries keyed by lemma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbLexicon {
    entries: BTreeMap<String, VerbEntry>,
}

impl VerbLexicon {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled verb lexicon is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self, VerbLexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| VerbLexiconError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, VerbLexiconError> {
        let entries: Vec<VerbEntry> = serde_json::from_str(text)?;
        Self::from_entries(entries)
    }

    pub fn from_entries(entries: Vec<VerbEntry>) -> Result<Self, VerbLexiconError> {
        let mut map = BTreeMap::new();
        for mut e in entries {
            e.lemma = e.lemma.trim().to_lowercase();
            e.validate().map_err(|reason| VerbLexiconError::Invalid {
                lemma: e.lemma.clone(),
                reason,
            })?;
            if map.contains_key(&e.lemma) {
                return Err(VerbLexiconError::Invalid {
                    lemma: e.lemma,
                    reason: "duplicate entry".into(),
                });
            }
            map.insert(e.lemma.clone(), e);
        }
        Ok(Self { entries: map })
    }

    pub fn get(&self, lemma: &str) -> Option<&VerbEntry> {
        self.entries.get(lemma)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains_key(lemma)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VerbEntry> {
        self.entries.values()
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from(self.clone()))
    }
}
