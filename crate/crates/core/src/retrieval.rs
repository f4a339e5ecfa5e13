//! Concept index: an inverted index over synonym classes with TF-IDF
//! document ranking.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ontology::Ontology;
use crate::question_processing::QueryTerm;
use crate::text_analysis::AnalyzedSentence;

pub type ConceptId = u32;

/// Query-time id of lemmas the index has never seen. Scores zero.
pub const UNKNOWN_CONCEPT: ConceptId = ConceptId::MAX;

const FORMAT: &str = "qa-concept-index";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub id: ConceptId,
    pub canonical: String,
    pub members: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc_id: String,
    pub sentence_ordinal: usize,
    pub token_position: usize,
    /// Occurrences of the concept in the whole document.
    pub term_frequency: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("document `{0}` is already indexed")]
    DuplicateDocument(String),
    #[error("cannot access index snapshot {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed index snapshot: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConceptIndex {
    concepts: Vec<Concept>,
    postings: BTreeMap<ConceptId, Vec<Posting>>,
    document_frequency: BTreeMap<ConceptId, usize>,
    doc_count: usize,
    /// Sentence texts per document, so extraction can re-read candidates.
    documents: BTreeMap<String, Vec<String>>,
    #[serde(skip)]
    member_of: HashMap<String, ConceptId>,
}

impl PartialEq for ConceptIndex {
    fn eq(&self, other: &Self) -> bool {
        self.concepts == other.concepts
            && self.postings == other.postings
            && self.document_frequency == other.document_frequency
            && self.doc_count == other.doc_count
            && self.documents == other.documents
    }
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    format: String,
    version: u32,
    index: ConceptIndex,
}

impl ConceptIndex {
    /// Empty index whose concept table starts from the ontology's synonym
    /// classes. The canonical lemma is the smallest member.
    pub fn new(ontology: &Ontology) -> Self {
        let mut index = Self::default();
        for members in ontology.synonym_classes() {
            let canonical = members.iter().next().cloned().unwrap_or_default();
            index.push_concept(canonical, members);
        }
        index
    }

    fn push_concept(&mut self, canonical: String, members: BTreeSet<String>) -> ConceptId {
        let id = self.concepts.len() as ConceptId;
        for m in &members {
            self.member_of.insert(m.clone(), id);
        }
        self.concepts.push(Concept { id, canonical, members });
        id
    }

    fn concept_or_new(&mut self, lemma: &str) -> ConceptId {
        match self.member_of.get(lemma) {
            Some(&id) => id,
            None => self.push_concept(lemma.to_string(), BTreeSet::from([lemma.to_string()])),
        }
    }

    /// Concept holding `lemma`, or [`UNKNOWN_CONCEPT`].
    pub fn concept_of(&self, lemma: &str) -> ConceptId {
        self.member_of
            .get(&lemma.to_lowercase())
            .copied()
            .unwrap_or(UNKNOWN_CONCEPT)
    }

    pub fn map_to_concepts<S: AsRef<str>>(&self, lemmas: &[S]) -> Vec<ConceptId> {
        lemmas.iter().map(|l| self.concept_of(l.as_ref())).collect()
    }

    pub fn concept(&self, id: ConceptId) -> Option<&Concept> {
        self.concepts.get(id as usize)
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn document_frequency(&self, id: ConceptId) -> usize {
        self.document_frequency.get(&id).copied().unwrap_or(0)
    }

    pub fn postings(&self, id: ConceptId) -> &[Posting] {
        self.postings.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn document(&self, doc_id: &str) -> Option<&[String]> {
        self.documents.get(doc_id).map(Vec::as_slice)
    }

    pub fn documents(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.documents.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Postings for every content token. Closed-class words are skipped.
    pub fn index_document(&mut self, doc_id: &str, sentences: &[AnalyzedSentence]) -> Result<(), IndexError> {
        if self.documents.contains_key(doc_id) {
            return Err(IndexError::DuplicateDocument(doc_id.to_string()));
        }
        let mut occurrences: Vec<(ConceptId, usize, usize)> = Vec::new();
        for s in sentences {
            for (pos, t) in s.tagged.iter().enumerate() {
                if t.is_content() {
                    let id = self.concept_or_new(t.lemma());
                    occurrences.push((id, s.sentence_id.ordinal, pos));
                }
            }
        }
        let mut tf: BTreeMap<ConceptId, usize> = BTreeMap::new();
        for &(id, _, _) in &occurrences {
            *tf.entry(id).or_default() += 1;
        }
        for (id, ordinal, pos) in occurrences {
            self.postings.entry(id).or_default().push(Posting {
                doc_id: doc_id.to_string(),
                sentence_ordinal: ordinal,
                token_position: pos,
                term_frequency: tf[&id],
            });
        }
        for id in tf.keys() {
            *self.document_frequency.entry(*id).or_default() += 1;
        }
        self.doc_count += 1;
        self.documents
            .insert(doc_id.to_string(), sentences.iter().map(|s| s.text.clone()).collect());
        Ok(())
    }

    /// Documents ranked by `Σ weight(c) · tf(c, d) · ln(1 + N / df(c))`.
    /// A concept reached by several query terms counts once, at the highest
    /// weight. Zero scores are dropped; ties go to the smaller doc id.
    pub fn retrieve(&self, query: &[(ConceptId, f64)], k: usize) -> Vec<(String, f64)> {
        let mut weights: BTreeMap<ConceptId, f64> = BTreeMap::new();
        for &(id, w) in query {
            if id == UNKNOWN_CONCEPT {
                continue;
            }
            let e = weights.entry(id).or_insert(w);
            *e = e.max(w);
        }
        let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
        for (id, w) in weights {
            let df = self.document_frequency(id);
            if df == 0 {
                continue;
            }
            let idf = (1.0 + self.doc_count as f64 / df as f64).ln();
            let mut seen = BTreeSet::new();
            for p in self.postings(id) {
                if seen.insert(p.doc_id.as_str()) {
                    *scores.entry(p.doc_id.as_str()).or_default() += w * p.term_frequency as f64 * idf;
                }
            }
        }
        let mut ranked: Vec<(String, f64)> = scores
            .into_iter()
            .filter(|&(_, s)| s > 0.0)
            .map(|(d, s)| (d.to_string(), s))
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(k);
        ranked
    }

    pub fn retrieve_terms(&self, terms: &[QueryTerm], k: usize) -> Vec<(String, f64)> {
        let query: Vec<(ConceptId, f64)> = terms.iter().map(|t| (self.concept_of(&t.term), t.weight)).collect();
        self.retrieve(&query, k)
    }

    pub fn to_json(&self) -> String {
        let snap = Snapshot {
            format: FORMAT.to_string(),
            version: VERSION,
            index: self.clone(),
        };
        serde_json::to_string(&snap).expect("index serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, IndexError> {
        let snap: Snapshot = serde_json::from_str(text).map_err(|e| IndexError::Format(e.to_string()))?;
        if snap.format != FORMAT || snap.version != VERSION {
            return Err(IndexError::Format(format!(
                "unsupported snapshot {} v{}",
                snap.format, snap.version
            )));
        }
        let mut index = snap.index;
        for (i, c) in index.concepts.iter().enumerate() {
            if c.id as usize != i {
                return Err(IndexError::Format(format!("concept {} out of order", c.id)));
            }
            for m in &c.members {
                index.member_of.insert(m.clone(), c.id);
            }
        }
        Ok(index)
    }

    pub fn save(&self, path: &Path) -> Result<(), IndexError> {
        std::fs::write(path, self.to_json()).map_err(|source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, IndexError> {
        let text = std::fs::read_to_string(path).map_err(|source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Triple, SYNONYM_OF};
    use crate::text_analysis::{Analyzer, RuleAnalyzer};

    fn build(ontology: &Ontology, docs: &[(&str, &str)]) -> ConceptIndex {
        let a = RuleAnalyzer::bundled();
        let mut index = ConceptIndex::new(ontology);
        for (id, text) in docs {
            index.index_document(id, &a.analyze_document(id, text)).unwrap();
        }
        index
    }

    fn synonyms() -> Ontology {
        let mut o = Ontology::new();
        o.assert_triple(Triple::new("kid", SYNONYM_OF, "child", "base"))
            .unwrap();
        o
    }

    #[test]
    fn synonyms_share_a_concept() {
        let index = ConceptIndex::new(&synonyms());
        assert_eq!(index.concept_of("kid"), index.concept_of("child"));
        assert_ne!(index.concept_of("kid"), UNKNOWN_CONCEPT);
        assert_eq!(index.concept(index.concept_of("kid")).unwrap().canonical, "child");
    }

    #[test]
    fn empty_ontology_gives_singletons() {
        let index = build(&Ontology::new(), &[("d", "The kid saw a child.")]);
        assert_ne!(index.concept_of("kid"), index.concept_of("child"));
        assert_eq!(index.concept_of("zebra"), UNKNOWN_CONCEPT);
    }

    #[test]
    fn bookkeeping() {
        let index = build(&Ontology::new(), &[("d1", "John slept. The fox ran to the river.")]);
        assert_eq!(index.doc_count(), 1);
        let fox = index.concept_of("fox");
        assert_eq!(index.postings(fox).len(), 1);
        assert_eq!(index.postings(fox)[0].sentence_ordinal, 1);
        assert_eq!(index.concept_of("the"), UNKNOWN_CONCEPT);
        let mut index = index;
        assert!(matches!(
            index.index_document("d1", &[]),
            Err(IndexError::DuplicateDocument(_))
        ));
    }

    #[test]
    fn document_frequency_counts_documents() {
        let docs = [
            ("a", "The fox ran. The fox slept."),
            ("b", "A fox sang."),
            ("c", "The crow sang."),
            ("d", "The fox ate."),
            ("e", "The hen sang."),
        ];
        let index = build(&Ontology::new(), &docs);
        assert_eq!(index.document_frequency(index.concept_of("fox")), 3);
        assert_eq!(index.postings(index.concept_of("fox")).len(), 4);
    }

    #[test]
    fn empty_index_retrieves_nothing() {
        let index = ConceptIndex::new(&Ontology::new());
        assert!(index.retrieve(&[(0, 1.0)], 5).is_empty());
    }

    #[test]
    fn three_document_ranking_matches_hand_scores() {
        let docs = [
            ("a", "The fox ate the cheese."),
            ("b", "The fox ran. The fox slept."),
            ("c", "The crow found cheese."),
        ];
        let index = build(&Ontology::new(), &docs);
        let (fox, cheese) = (index.concept_of("fox"), index.concept_of("cheese"));
        let got = index.retrieve(&[(fox, 1.0), (cheese, 0.5)], 10);
        // fox: df 2, cheese: df 2, idf = ln(1 + 3/2) for both.
        let idf = (2.5f64).ln();
        let expected = [("b", 2.0 * idf), ("a", 1.5 * idf), ("c", 0.5 * idf)];
        assert_eq!(got.len(), 3);
        for ((d, s), (ed, es)) in got.iter().zip(expected) {
            assert_eq!(d, ed);
            assert!((s - es).abs() < 1e-12);
        }
        assert_eq!(index.retrieve(&[(fox, 1.0)], 1), [("b".to_string(), 2.0 * idf)]);
    }

    #[test]
    fn ties_break_by_doc_id() {
        let index = build(&Ontology::new(), &[("z", "A fox ran."), ("m", "A fox sat.")]);
        let got = index.retrieve(&[(index.concept_of("fox"), 1.0)], 5);
        assert_eq!(got[0].0, "m");
        assert_eq!(got[1].0, "z");
    }

    #[test]
    fn snapshot_round_trip() {
        let index = build(&synonyms(), &[("a", "The kid ran."), ("b", "A child sang.")]);
        let back = ConceptIndex::from_json(&index.to_json()).unwrap();
        assert_eq!(back, index);
        assert_eq!(back.concept_of("kid"), index.concept_of("child"));
        assert_eq!(back.to_json(), index.to_json());
        assert!(ConceptIndex::from_json(r#"{"format":"x","version":1,"index":{}}"#).is_err());
    }
}
