//! Domain-specific question answering over a small document collection.
//!
//! The pipeline runs in three stages. Question processing classifies the
//! question focus, chunks the question and builds its semantic frame.
//! Retrieval ranks documents through a concept index whose synonym classes
//! come from the domain ontology. Answer extraction matches chunks and
//! frames, filters by focus and ranks by frame similarity.

pub mod answer_extraction;
pub mod config;
pub mod engine;
pub mod evaluation;
pub mod ontology;
pub mod question_processing;
pub mod retrieval;
pub mod semantic_frames;
pub mod text_analysis;

pub use config::EngineConfig;
pub use engine::{export_ontology, AskResponse, Engine, EngineError};
