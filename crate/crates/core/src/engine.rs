//! The assembled pipeline: ingestion, persistence and question answering.

use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::answer_extraction::{answer_question, Corpus, ExtractionOptions};
use crate::config::EngineConfig;
use crate::evaluation::{Answerer, TopAnswer};
use crate::ontology::{populate_from_document, Ontology, OntologyError, OntologyStats, PopulationReport};
use crate::question_processing::{analyze_question, QuestionFocus};
use crate::retrieval::{ConceptIndex, IndexError};
use crate::semantic_frames::{VerbLexicon, VerbLexiconError};
use crate::text_analysis::{Analyzer, Lexicon, LexiconError, RuleAnalyzer};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Verbs(#[from] VerbLexiconError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no .txt documents in {0}")]
    EmptyCollection(PathBuf),
    #[error("no index at {0}; run ingest first")]
    NotIngested(PathBuf),
    #[error("question is empty")]
    InvalidQuestion,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub documents: usize,
    pub sentences: usize,
    pub population: PopulationReport,
    /// Files that could not be read, with the reason.
    pub failures: Vec<(PathBuf, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedAnswer {
    pub rank: usize,
    pub precise_answer: Option<String>,
    pub sentence: String,
    pub doc_id: String,
    pub sentence_ordinal: usize,
    pub score: f64,
    pub ontology_derived: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AskResponse {
    pub question: String,
    pub focus: QuestionFocus,
    pub frame: Vec<String>,
    pub answers: Vec<RankedAnswer>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineStats {
    pub documents: usize,
    pub sentences: usize,
    pub concepts: usize,
    pub ontology: OntologyStats,
}

pub struct Engine {
    config: EngineConfig,
    analyzer: RuleAnalyzer,
    verbs: VerbLexicon,
    ontology: Ontology,
    index: ConceptIndex,
    corpus: Corpus,
}

struct Resources {
    analyzer: RuleAnalyzer,
    verbs: VerbLexicon,
}

fn resources(config: &EngineConfig) -> Result<Resources, EngineError> {
    let lexicon = match &config.lexicon_path {
        Some(p) => Lexicon::from_path(p)?,
        None => Lexicon::bundled(),
    };
    let verbs = match &config.verb_lexicon_path {
        Some(p) => VerbLexicon::from_path(p)?,
        None => VerbLexicon::bundled(),
    };
    Ok(Resources {
        analyzer: RuleAnalyzer::new(lexicon),
        verbs,
    })
}

fn base_ontology(config: &EngineConfig) -> Result<Ontology, EngineError> {
    Ok(match &config.base_ontology_path {
        Some(p) => Ontology::load_base(p)?,
        None => Ontology::bundled_base(),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), EngineError> {
    let io = |source| EngineError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

impl Engine {
    /// Build an engine over in-memory documents without touching disk.
    pub fn from_documents<S: AsRef<str>>(
        config: EngineConfig,
        docs: &[(S, S)],
    ) -> Result<(Self, IngestReport), EngineError> {
        let Resources { analyzer, verbs } = resources(&config)?;
        let mut ontology = base_ontology(&config)?;
        let mut index = ConceptIndex::new(&ontology);
        let mut corpus = Corpus::new();
        let mut report = IngestReport::default();
        for (doc_id, text) in docs {
            let doc_id = doc_id.as_ref();
            let sentences = analyzer.analyze_document(doc_id, text.as_ref());
            index.index_document(doc_id, &sentences)?;
            corpus.add_document(doc_id, sentences, &verbs);
            let stored = corpus.document(doc_id).unwrap_or_default();
            let analyzed: Vec<_> = stored.iter().map(|s| (*s.analyzed).clone()).collect();
            let frames: Vec<_> = stored.iter().map(|s| s.frames.clone()).collect();
            report.population.merge(populate_from_document(
                &mut ontology,
                doc_id,
                &analyzed,
                &frames,
                &verbs,
            ));
            report.documents += 1;
            report.sentences += analyzed.len();
        }
        let engine = Self {
            config,
            analyzer,
            verbs,
            ontology,
            index,
            corpus,
        };
        Ok((engine, report))
    }

    /// Ingest every `.txt` file of `dir` in name order, then persist the
    /// index and populated ontology. The file name is the document id.
    /// Unreadable files are reported and skipped.
    pub fn ingest(config: EngineConfig, dir: &Path) -> Result<(Self, IngestReport), EngineError> {
        let io = |source| EngineError::Io {
            path: dir.to_path_buf(),
            source,
        };
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(io)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()
            .map_err(io)?;
        paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "txt"));
        paths.sort();
        if paths.is_empty() {
            return Err(EngineError::EmptyCollection(dir.to_path_buf()));
        }
        let mut docs = Vec::with_capacity(paths.len());
        let mut failures = Vec::new();
        for p in paths {
            match std::fs::read_to_string(&p) {
                Ok(text) => {
                    let id = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
                    docs.push((id, text));
                }
                Err(e) => {
                    warn!("skipping {}: {e}", p.display());
                    failures.push((p, e.to_string()));
                }
            }
        }
        if docs.is_empty() {
            return Err(EngineError::EmptyCollection(dir.to_path_buf()));
        }
        let (engine, mut report) = Self::from_documents(config, &docs)?;
        report.failures = failures;
        engine.save()?;
        info!(
            "ingested {} documents, {} sentences, {} triples",
            report.documents, report.sentences, report.population.asserted
        );
        Ok((engine, report))
    }

    /// Open a previously ingested collection.
    pub fn load(config: EngineConfig) -> Result<Self, EngineError> {
        for p in [&config.index_path, &config.ontology_path] {
            if !p.exists() {
                return Err(EngineError::NotIngested(p.clone()));
            }
        }
        let Resources { analyzer, verbs } = resources(&config)?;
        let index = ConceptIndex::load(&config.index_path)?;
        let ontology = Ontology::load_base(&config.ontology_path)?;
        let corpus = Corpus::from_index(&index, &analyzer, &verbs);
        Ok(Self {
            config,
            analyzer,
            verbs,
            ontology,
            index,
            corpus,
        })
    }

    pub fn save(&self) -> Result<(), EngineError> {
        write_file(&self.config.index_path, &self.index.to_json())?;
        write_file(&self.config.ontology_path, &self.ontology.to_json())
    }

    pub fn ask(&self, question: &str) -> Result<AskResponse, EngineError> {
        self.ask_top(question, self.config.answer_count)
    }

    /// Like [`Engine::ask`] with at most `k` answers.
    pub fn ask_top(&self, question: &str, k: usize) -> Result<AskResponse, EngineError> {
        if question.trim().is_empty() {
            return Err(EngineError::InvalidQuestion);
        }
        let analysis = analyze_question(
            question,
            &self.analyzer,
            &self.verbs,
            &self.ontology,
            &self.config.expansion,
        );
        let options = ExtractionOptions {
            similarity: self.config.similarity,
            retrieval_k: self.config.retrieval_k,
            answer_count: k,
        };
        let set = answer_question(&analysis, &self.index, &self.corpus, &self.ontology, &options);
        let answers = set
            .answers
            .into_iter()
            .enumerate()
            .map(|(i, a)| RankedAnswer {
                rank: i + 1,
                precise_answer: a.precise_answer,
                sentence: a.sentence_text,
                doc_id: a.doc_id,
                sentence_ordinal: a.sentence_ordinal,
                score: a.score,
                ontology_derived: a.ontology_derived,
            })
            .collect();
        Ok(AskResponse {
            question: question.trim().to_string(),
            focus: analysis.focus,
            frame: analysis.frame.map(|f| f.rendered_predicates()).unwrap_or_default(),
            answers,
        })
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn index(&self) -> &ConceptIndex {
        &self.index
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn export_ontology(&self, path: &Path) -> Result<(), EngineError> {
        write_file(path, &self.ontology.to_json())
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            documents: self.corpus.len(),
            sentences: self.corpus.sentence_count(),
            concepts: self.index.concepts().len(),
            ontology: self.ontology.stats(),
        }
    }
}

/// Write the populated ontology, or the base ontology if nothing has been
/// ingested yet. Returns the number of triples written.
pub fn export_ontology(config: &EngineConfig, out: &Path) -> Result<usize, EngineError> {
    let ontology = if config.ontology_path.exists() {
        Ontology::load_base(&config.ontology_path)?
    } else {
        base_ontology(config)?
    };
    write_file(out, &ontology.to_json())?;
    Ok(ontology.triples().len())
}

impl Answerer for Engine {
    fn top_answer(&self, question: &str) -> TopAnswer {
        let Ok(response) = self.ask(question) else {
            return TopAnswer::default();
        };
        let Some(top) = response.answers.into_iter().next() else {
            return TopAnswer::default();
        };
        TopAnswer {
            precise: top.precise_answer,
            sentence: Some(top.sentence),
        }
    }
}
