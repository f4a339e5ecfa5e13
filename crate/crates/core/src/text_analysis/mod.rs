//! Sentence splitting, tokenization, POS and entity tagging, and chunking.
//!
//! Everything here is a pure function of its input and an immutable
//! [`Lexicon`]. [`RuleAnalyzer`] bundles the steps behind the [`Analyzer`]
//! trait so another tagger can be plugged in without touching the rest of
//! the pipeline.

mod chunker;
mod lexicon;
mod ner;
mod sentences;
mod tagger;
mod tokenizer;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use chunker::chunk;
pub use lexicon::{ClosedKind, Lexicon, LexiconError};
pub use ner::ner_tag;
pub use sentences::{split_sentences, SentenceSpan};
pub use tagger::pos_tag;
pub use tokenizer::tokenize;

/// A token with byte offsets into the sentence it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub start_offset: usize,
    pub end_offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosTag {
    Noun,
    ProperNoun,
    Verb,
    Adjective,
    Adverb,
    Determiner,
    Preposition,
    Pronoun,
    WhWord,
    Number,
    Punctuation,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        PosTag::Noun,
        PosTag::ProperNoun,
        PosTag::Verb,
        PosTag::Adjective,
        PosTag::Adverb,
        PosTag::Determiner,
        PosTag::Preposition,
        PosTag::Pronoun,
        PosTag::WhWord,
        PosTag::Number,
        PosTag::Punctuation,
        PosTag::Other,
    ];

    /// Tokens that can head a noun phrase.
    pub fn is_nominal(self) -> bool {
        matches!(
            self,
            PosTag::Noun | PosTag::ProperNoun | PosTag::Pronoun | PosTag::WhWord
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "UPPERCASE")]
pub enum EntityLabel {
    Person,
    Location,
    Date,
    Duration,
    Number,
    Metrics,
    #[default]
    None,
}

impl fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EntityLabel::Person => "PERSON",
            EntityLabel::Location => "LOCATION",
            EntityLabel::Date => "DATE",
            EntityLabel::Duration => "DURATION",
            EntityLabel::Number => "NUMBER",
            EntityLabel::Metrics => "METRICS",
            EntityLabel::None => "NONE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub token: Token,
    pub pos: PosTag,
    pub ner: EntityLabel,
    /// Tag came from the closed-class lexicon (function words, auxiliaries).
    pub closed_class: bool,
}

impl TaggedToken {
    /// Open-class word that carries retrieval weight.
    pub fn is_content(&self) -> bool {
        !self.closed_class
            && matches!(
                self.pos,
                PosTag::Noun | PosTag::ProperNoun | PosTag::Verb | PosTag::Adjective | PosTag::Adverb | PosTag::Number
            )
    }

    pub fn lemma(&self) -> &str {
        &self.token.lemma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChunkLabel {
    NP,
    VP,
    PP,
}

/// Half-open token span `[start, end)` labelled with a phrase type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chunk {
    pub label: ChunkLabel,
    pub start: usize,
    pub end: usize,
}

impl Chunk {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    /// Token span of the noun phrase inside this chunk: the chunk itself for
    /// an NP, everything after the preposition for a PP.
    pub fn noun_span(&self) -> Option<(usize, usize)> {
        match self.label {
            ChunkLabel::NP => Some((self.start, self.end)),
            ChunkLabel::PP => Some((self.start + 1, self.end)),
            ChunkLabel::VP => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SentenceId {
    pub doc_id: String,
    pub ordinal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzedSentence {
    pub sentence_id: SentenceId,
    pub text: String,
    pub tagged: Vec<TaggedToken>,
    pub chunks: Vec<Chunk>,
}

impl AnalyzedSentence {
    /// Source text covered by a token span.
    pub fn span_text(&self, start: usize, end: usize) -> &str {
        if start >= end || end > self.tagged.len() {
            return "";
        }
        &self.text[self.tagged[start].token.start_offset..self.tagged[end - 1].token.end_offset]
    }

    pub fn chunk_text(&self, chunk: &Chunk) -> &str {
        self.span_text(chunk.start, chunk.end)
    }

    /// Index of the last nominal token in a token span.
    pub fn head_index(&self, start: usize, end: usize) -> Option<usize> {
        (start..end.min(self.tagged.len()))
            .rev()
            .find(|&i| self.tagged[i].pos.is_nominal())
    }

    /// Lemma of the nominal head of an NP or PP chunk.
    pub fn head_lemma(&self, chunk: &Chunk) -> Option<&str> {
        let (s, e) = chunk.noun_span()?;
        self.head_index(s, e).map(|i| self.tagged[i].lemma())
    }

    pub fn is_empty(&self) -> bool {
        self.tagged.is_empty()
    }

    /// Chunk made only of wh-words, e.g. `Who` or `Where`.
    pub fn is_bare_wh(&self, chunk: &Chunk) -> bool {
        chunk
            .noun_span()
            .map(|(s, e)| s < e && self.tagged[s..e].iter().all(|t| t.pos == PosTag::WhWord))
            .unwrap_or(false)
    }

    /// Maximal runs of tokens sharing a non-`NONE` entity label.
    pub fn entity_spans(&self) -> Vec<(EntityLabel, usize, usize)> {
        let mut spans = Vec::new();
        let mut i = 0;
        while i < self.tagged.len() {
            let label = self.tagged[i].ner;
            if label == EntityLabel::None {
                i += 1;
                continue;
            }
            let start = i;
            while i < self.tagged.len() && self.tagged[i].ner == label {
                i += 1;
            }
            spans.push((label, start, i));
        }
        spans
    }
}

/// Pluggable sentence analyzer.
pub trait Analyzer: Send + Sync {
    fn split_sentences(&self, text: &str) -> Vec<SentenceSpan>;

    fn analyze(&self, sentence_id: SentenceId, text: &str) -> AnalyzedSentence;

    /// Inflected variants of a lemma, for query expansion.
    fn inflections(&self, lemma: &str, pos: PosTag) -> Vec<String>;

    /// Split a document and analyze every sentence.
    fn analyze_document(&self, doc_id: &str, text: &str) -> Vec<AnalyzedSentence> {
        self.split_sentences(text)
            .iter()
            .enumerate()
            .map(|(ordinal, span)| {
                let id = SentenceId {
                    doc_id: doc_id.to_string(),
                    ordinal,
                };
                self.analyze(id, &span.text)
            })
            .collect()
    }
}

/// Lexicon- and rule-driven analyzer.
#[derive(Debug, Clone)]
pub struct RuleAnalyzer {
    lexicon: Lexicon,
}

impl RuleAnalyzer {
    pub fn new(lexicon: Lexicon) -> Self {
        Self { lexicon }
    }

    pub fn bundled() -> Self {
        Self::new(Lexicon::bundled())
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn tokenize(&self, sentence: &str) -> Vec<Token> {
        tokenize(sentence, &self.lexicon)
    }

    pub fn pos_tag(&self, tokens: Vec<Token>) -> Vec<TaggedToken> {
        pos_tag(tokens, &self.lexicon)
    }

    pub fn ner_tag(&self, tagged: Vec<TaggedToken>) -> Vec<TaggedToken> {
        ner_tag(tagged, &self.lexicon)
    }
}

impl Analyzer for RuleAnalyzer {
    fn split_sentences(&self, text: &str) -> Vec<SentenceSpan> {
        split_sentences(text, &self.lexicon)
    }

    fn analyze(&self, sentence_id: SentenceId, text: &str) -> AnalyzedSentence {
        let tagged = self.ner_tag(self.pos_tag(self.tokenize(text)));
        let chunks = chunk(&tagged);
        AnalyzedSentence {
            sentence_id,
            text: text.to_string(),
            tagged,
            chunks,
        }
    }

    fn inflections(&self, lemma: &str, pos: PosTag) -> Vec<String> {
        self.lexicon.inflections(lemma, pos)
    }
}
