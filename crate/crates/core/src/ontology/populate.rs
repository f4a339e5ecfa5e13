use log::info;
use serde::{Deserialize, Serialize};

use super::{Ontology, Triple, INSTANCE_OF};
use crate::semantic_frames::{Phrase, SemanticFrame, VerbLexicon};
use crate::text_analysis::{AnalyzedSentence, EntityLabel, PosTag};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopulationReport {
    pub asserted: usize,
    pub duplicates: usize,
    pub skipped: usize,
}

impl PopulationReport {
    pub fn merge(&mut self, other: PopulationReport) {
        self.asserted += other.asserted;
        self.duplicates += other.duplicates;
        self.skipped += other.skipped;
    }
}

/// Assert `instance_of` triples for PERSON and LOCATION entities, then one
/// triple per frame whose verb maps to an ontology property. `frames[i]`
/// holds the frames of `sentences[i]`. Constraint violations are logged and
/// skipped.
pub fn populate_from_document(
    ontology: &mut Ontology,
    doc_id: &str,
    sentences: &[AnalyzedSentence],
    frames: &[Vec<SemanticFrame>],
    verbs: &VerbLexicon,
) -> PopulationReport {
    let mut report = PopulationReport::default();
    let mut assert = |ontology: &mut Ontology, triple: Triple| match ontology.assert_triple(triple) {
        Ok(true) => report.asserted += 1,
        Ok(false) => report.duplicates += 1,
        Err(e) => {
            info!("{doc_id}: rejected triple: {e}");
            report.skipped += 1;
        }
    };

    for s in sentences {
        for (label, start, end) in s.entity_spans() {
            let class = match label {
                EntityLabel::Person => "Person",
                EntityLabel::Location => "Location",
                _ => continue,
            };
            assert(
                ontology,
                Triple::new(s.span_text(start, end), INSTANCE_OF, class, doc_id),
            );
        }
    }

    for (s, sentence_frames) in sentences.iter().zip(frames) {
        for f in sentence_frames {
            let Some(mapping) = verbs.get(&f.verb_lemma).and_then(|e| e.ontology_property.as_ref()) else {
                continue;
            };
            let filler = |role| f.bindings.get(&role).and_then(|b| b.phrase()).map(|p| term(s, p));
            if let (Some(subj), Some(obj)) = (filler(mapping.subject), filler(mapping.object)) {
                assert(ontology, Triple::new(&subj, &mapping.property, &obj, doc_id));
            }
        }
    }
    report
}

/// Proper-noun run around the head, or the head lemma for common nouns.
fn term(sentence: &AnalyzedSentence, phrase: &Phrase) -> String {
    let Some(head) = sentence.head_index(phrase.start, phrase.end) else {
        return phrase.head.clone();
    };
    if sentence.tagged[head].pos != PosTag::ProperNoun {
        return phrase.head.clone();
    }
    let mut start = head;
    while start > phrase.start && sentence.tagged[start - 1].pos == PosTag::ProperNoun {
        start -= 1;
    }
    sentence.span_text(start, head + 1).to_string()
}
