//! Engine configuration loaded from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::question_processing::ExpansionWeights;
use crate::semantic_frames::SimilarityWeights;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Resource locations and tuning knobs. Unset resource paths fall back to
/// the data bundled with the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub lexicon_path: Option<PathBuf>,
    pub verb_lexicon_path: Option<PathBuf>,
    pub base_ontology_path: Option<PathBuf>,
    pub index_path: PathBuf,
    pub ontology_path: PathBuf,
    pub retrieval_k: usize,
    pub answer_count: usize,
    pub similarity: SimilarityWeights,
    pub expansion: ExpansionWeights,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            lexicon_path: None,
            verb_lexicon_path: None,
            base_ontology_path: None,
            index_path: PathBuf::from(".qa/index.json"),
            ontology_path: PathBuf::from(".qa/ontology.json"),
            retrieval_k: 10,
            answer_count: 5,
            similarity: SimilarityWeights::default(),
            expansion: ExpansionWeights::default(),
        }
    }
}

impl EngineConfig {
    /// Parse a TOML file; relative paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut config = Self::from_toml(&text).map_err(|e| match e {
            ConfigError::Parse { message, .. } => ConfigError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.resolve_relative_to(base);
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: PathBuf::new(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.similarity
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.expansion.validate().map_err(ConfigError::Invalid)?;
        if self.retrieval_k == 0 || self.answer_count == 0 {
            return Err(ConfigError::Invalid(
                "retrieval_k and answer_count must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Place the index and ontology snapshot under `dir`.
    pub fn with_store(mut self, dir: &Path) -> Self {
        self.index_path = dir.join("index.json");
        self.ontology_path = dir.join("ontology.json");
        self
    }

    fn resolve_relative_to(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.lexicon_path,
            &mut self.verb_lexicon_path,
            &mut self.base_ontology_path,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        fix(&mut self.index_path);
        fix(&mut self.ontology_path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_files() {
        let c = EngineConfig::from_toml("").unwrap();
        assert_eq!(c, EngineConfig::default());
        let c = EngineConfig::from_toml("retrieval_k = 3\n[similarity]\npredicates = 0.6\nroles = 0.2\nverb = 0.2\n")
            .unwrap();
        assert_eq!(c.retrieval_k, 3);
        assert_eq!(c.similarity.predicates, 0.6);
        assert_eq!(c.expansion, ExpansionWeights::default());
    }

    #[test]
    fn rejects_bad_weights_and_keys() {
        assert!(matches!(
            EngineConfig::from_toml("[similarity]\npredicates = 0.9\n"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            EngineConfig::from_toml("[expansion]\nexpansion = 2.0\n"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            EngineConfig::from_toml("colour = 1"),
            Err(ConfigError::Parse { .. })
        ));
    }

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("qa.toml");
        std::fs::write(
            &path,
            "index_path = \"store/i.json\"\nlexicon_path = \"/abs/lex.json\"\n",
        )
        .unwrap();
        let c = EngineConfig::load(&path).unwrap();
        assert_eq!(c.index_path, dir.path().join("store/i.json"));
        assert_eq!(c.ontology_path, dir.path().join(".qa/ontology.json"));
        assert_eq!(c.lexicon_path, Some(PathBuf::from("/abs/lex.json")));
        assert!(matches!(
            EngineConfig::load(&dir.path().join("none.toml")),
            Err(ConfigError::Io { .. })
        ));
    }
}
