//! Question focus, phrases, frame and the expanded concept query.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ontology::Ontology;
use crate::semantic_frames::{
    instantiate_frame, label_roles, Phrase, RoleAssignment, SemanticFrame, SemanticRole, Slot, VerbLexicon,
};
use crate::text_analysis::{AnalyzedSentence, Analyzer, Chunk, ChunkLabel, EntityLabel, PosTag, SentenceId};

/// The kind of answer a question asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QuestionFocus {
    Person,
    Location,
    Date,
    Duration,
    Number,
    Metrics,
    Degree,
    Unknown,
}

impl QuestionFocus {
    /// Entity labels that can answer a question with this focus. `DATE`
    /// also takes durations, and the two quantity foci take each other.
    pub fn accepts(self, label: EntityLabel) -> bool {
        use EntityLabel as E;
        match self {
            QuestionFocus::Person => label == E::Person,
            QuestionFocus::Location => label == E::Location,
            QuestionFocus::Date => matches!(label, E::Date | E::Duration),
            QuestionFocus::Duration => label == E::Duration,
            QuestionFocus::Number | QuestionFocus::Metrics => matches!(label, E::Number | E::Metrics),
            QuestionFocus::Degree | QuestionFocus::Unknown => false,
        }
    }

    /// Roles whose filler can stand in for a matching entity.
    pub fn accepts_role(self, role: SemanticRole) -> bool {
        match self {
            QuestionFocus::Person => matches!(role, SemanticRole::Agent | SemanticRole::Recipient),
            QuestionFocus::Location => role == SemanticRole::Location,
            _ => false,
        }
    }

    pub fn filters(self) -> bool {
        !matches!(self, QuestionFocus::Degree | QuestionFocus::Unknown)
    }
}

impl fmt::Display for QuestionFocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuestionFocus::Person => "PERSON",
            QuestionFocus::Location => "LOCATION",
            QuestionFocus::Date => "DATE",
            QuestionFocus::Duration => "DURATION",
            QuestionFocus::Number => "NUMBER",
            QuestionFocus::Metrics => "METRICS",
            QuestionFocus::Degree => "DEGREE",
            QuestionFocus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermSource {
    Question,
    Morphology,
    Ontology,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryTerm {
    pub term: String,
    pub weight: f64,
    pub source: TermSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpansionWeights {
    pub original: f64,
    pub expansion: f64,
}

impl Default for ExpansionWeights {
    fn default() -> Self {
        Self {
            original: 1.0,
            expansion: 0.5,
        }
    }
}

impl ExpansionWeights {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.expansion >= 0.0 && self.original > 0.0) {
            return Err("expansion weights must be nonnegative and the original weight positive".into());
        }
        if self.expansion >= self.original {
            return Err(format!(
                "expansion weight {} must be below the original weight {}",
                self.expansion, self.original
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionAnalysis {
    pub focus: QuestionFocus,
    pub analyzed: AnalyzedSentence,
    pub phrases: Vec<Chunk>,
    pub frame: Option<SemanticFrame>,
    pub concept_query: Vec<QueryTerm>,
}

/// Full question analysis: focus, phrases, frame and concept query.
pub fn analyze_question(
    question: &str,
    analyzer: &dyn Analyzer,
    verbs: &VerbLexicon,
    ontology: &Ontology,
    weights: &ExpansionWeights,
) -> QuestionAnalysis {
    let id = SentenceId {
        doc_id: "question".into(),
        ordinal: 0,
    };
    let analyzed = analyzer.analyze(id, question.trim());
    let focus = classify_focus(&analyzed);
    let phrases = detect_phrases(&analyzed);
    let frame = detect_frame(&analyzed, verbs);
    let concept_query = reformulate_query(&analyzed, analyzer, ontology, weights);
    QuestionAnalysis {
        focus,
        analyzed,
        phrases,
        frame,
        concept_query,
    }
}

fn word_after(analyzed: &AnalyzedSentence, i: usize) -> Option<(String, PosTag)> {
    analyzed.tagged[i + 1..]
        .iter()
        .find(|t| t.pos != PosTag::Punctuation)
        .map(|t| (t.token.surface.to_lowercase(), t.pos))
}

/// Focus from the first wh-word and, for `how` and `what`, the word after it.
pub fn classify_focus(analyzed: &AnalyzedSentence) -> QuestionFocus {
    let Some(i) = analyzed.tagged.iter().position(|t| t.pos == PosTag::WhWord) else {
        return QuestionFocus::Unknown;
    };
    let wh = analyzed.tagged[i].token.surface.to_lowercase();
    let next = word_after(analyzed, i);
    let next_word = next.as_ref().map(|(w, _)| w.as_str());
    match wh.as_str() {
        "who" | "whom" | "whose" => QuestionFocus::Person,
        "where" => QuestionFocus::Location,
        "when" => QuestionFocus::Date,
        "what" | "which" if next_word == Some("time") => QuestionFocus::Date,
        "how" => match next_word {
            Some("far") | Some("many") => QuestionFocus::Number,
            Some("long") => QuestionFocus::Duration,
            Some("much") => QuestionFocus::Metrics,
            _ if next
                .as_ref()
                .is_some_and(|(_, pos)| matches!(pos, PosTag::Adjective | PosTag::Adverb)) =>
            {
                QuestionFocus::Degree
            }
            _ => QuestionFocus::Unknown,
        },
        _ => QuestionFocus::Unknown,
    }
}

/// NP and PP chunks other than a bare wh-word.
pub fn detect_phrases(analyzed: &AnalyzedSentence) -> Vec<Chunk> {
    analyzed
        .chunks
        .iter()
        .filter(|c| matches!(c.label, ChunkLabel::NP | ChunkLabel::PP) && !analyzed.is_bare_wh(c))
        .copied()
        .collect()
}

/// Question frame, with a fronted wh-phrase moved into the role its
/// question word asks about.
pub fn detect_frame(analyzed: &AnalyzedSentence, verbs: &VerbLexicon) -> Option<SemanticFrame> {
    let mut roles = label_roles(analyzed, verbs).ok()?;
    front_wh(analyzed, verbs, &mut roles);
    instantiate_frame(&roles, verbs).ok()
}

/// Rewrite for wh-phrases left unbound by role labeling:
/// `where` → location, `when` → time, `how many/much NP` → the NP fills an
/// empty object slot, any other wh-word → the object, or the first free
/// prepositional role when the object is taken.
fn front_wh(analyzed: &AnalyzedSentence, verbs: &VerbLexicon, roles: &mut RoleAssignment) {
    let Some(entry) = verbs.get(&roles.verb_lemma) else {
        return;
    };
    let bound = |roles: &RoleAssignment, c: &Chunk| {
        let span = c.noun_span();
        roles.bindings.values().any(|p| Some((p.start, p.end)) == span)
    };
    let Some(ci) = analyzed.chunks.iter().position(|c| {
        c.start < roles.verb_span.0
            && c.label != ChunkLabel::VP
            && analyzed.tagged[c.start..c.end].iter().any(|t| t.pos == PosTag::WhWord)
    }) else {
        return;
    };
    let chunk = analyzed.chunks[ci];
    if bound(roles, &chunk) {
        return;
    }
    let Some(phrase) = Phrase::from_chunk(analyzed, &chunk) else {
        return;
    };
    let wh_index = (chunk.start..chunk.end)
        .find(|&i| analyzed.tagged[i].pos == PosTag::WhWord)
        .unwrap_or(chunk.start);
    let wh = analyzed.tagged[wh_index].lemma().to_string();
    let free = |roles: &RoleAssignment, r: SemanticRole| entry.has_role(r) && !roles.bindings.contains_key(&r);
    let target = match wh.as_str() {
        "where" => Some(SemanticRole::Location).filter(|&r| free(roles, r)),
        "when" => Some(SemanticRole::Time).filter(|&r| free(roles, r)),
        "why" => None,
        "how" => {
            let quantity = word_after(analyzed, wh_index).is_some_and(|(w, _)| w == "many" || w == "much");
            let object = entry.role_for(&Slot::Object).filter(|&r| free(roles, r));
            if let (true, Some(role)) = (quantity, object) {
                let next = analyzed
                    .chunks
                    .get(ci + 1)
                    .filter(|c| c.label == ChunkLabel::NP && c.start < roles.verb_span.0);
                if let Some(p) = next.and_then(|c| Phrase::from_chunk(analyzed, c)) {
                    roles.bindings.insert(role, p);
                }
            }
            None
        }
        _ => entry
            .role_for(&Slot::Object)
            .filter(|&r| free(roles, r))
            .or_else(|| entry.prep_roles().find(|&r| free(roles, r)))
            .or_else(|| entry.role_for(&Slot::Subject).filter(|&r| free(roles, r))),
    };
    if let Some(role) = target {
        roles.bindings.insert(role, phrase);
    }
}

/// Content lemmas at the original weight, plus inflections and ontology
/// neighbours at the expansion weight. A term keeps its highest weight.
/// A question without content words falls back to all its word lemmas.
pub fn reformulate_query(
    analyzed: &AnalyzedSentence,
    analyzer: &dyn Analyzer,
    ontology: &Ontology,
    weights: &ExpansionWeights,
) -> Vec<QueryTerm> {
    let mut terms: Vec<QueryTerm> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut add = |term: &str, weight: f64, source: TermSource| {
        let term = term.trim().to_lowercase();
        if term.is_empty() {
            return;
        }
        match index.get(&term) {
            Some(&i) if terms[i].weight >= weight => {}
            Some(&i) => {
                terms[i].weight = weight;
                terms[i].source = source;
            }
            None => {
                index.insert(term.clone(), terms.len());
                terms.push(QueryTerm { term, weight, source });
            }
        }
    };

    let mut content: Vec<(&str, PosTag)> = analyzed
        .tagged
        .iter()
        .filter(|t| t.is_content())
        .map(|t| (t.lemma(), t.pos))
        .collect();
    if content.is_empty() {
        content = analyzed
            .tagged
            .iter()
            .filter(|t| t.pos != PosTag::Punctuation)
            .map(|t| (t.lemma(), t.pos))
            .collect();
    }
    for &(lemma, _) in &content {
        add(lemma, weights.original, TermSource::Question);
    }
    for &(lemma, pos) in &content {
        for form in analyzer.inflections(lemma, pos) {
            add(&form, weights.expansion, TermSource::Morphology);
        }
        for rel in ontology.related_concepts(lemma) {
            add(&rel.term, weights.expansion, TermSource::Ontology);
        }
    }
    terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Triple, SYNONYM_OF};
    use crate::text_analysis::RuleAnalyzer;

    fn analyzed(text: &str) -> AnalyzedSentence {
        RuleAnalyzer::bundled().analyze(
            SentenceId {
                doc_id: "q".into(),
                ordinal: 0,
            },
            text,
        )
    }

    fn focus(text: &str) -> QuestionFocus {
        classify_focus(&analyzed(text))
    }

    #[test]
    fn focus_examples() {
        assert_eq!(focus("Who gave a balloon to the kid?"), QuestionFocus::Person);
        assert_eq!(focus("How many legs does a spider have?"), QuestionFocus::Number);
        assert_eq!(focus("Name the capital."), QuestionFocus::Unknown);
        assert_eq!(focus("What time did the race start?"), QuestionFocus::Date);
        assert_eq!(focus("What did the crow find?"), QuestionFocus::Unknown);
        assert_eq!(focus("To whom did Peter sell the egg?"), QuestionFocus::Person);
    }

    #[test]
    fn focus_ignores_case_and_trailing_punctuation() {
        for q in [
            "how long did the hare sleep?",
            "HOW LONG DID THE HARE SLEEP",
            "How long did the hare sleep",
        ] {
            assert_eq!(focus(q), QuestionFocus::Duration, "{q}");
        }
    }

    #[test]
    fn phrases_exclude_bare_wh() {
        let a = analyzed("Who gave a balloon to the kid?");
        let texts: Vec<_> = detect_phrases(&a).iter().map(|c| a.chunk_text(c).to_string()).collect();
        assert_eq!(texts, ["a balloon", "to the kid"]);
        let a = analyzed("Where is Rome?");
        let texts: Vec<_> = detect_phrases(&a).iter().map(|c| a.chunk_text(c).to_string()).collect();
        assert_eq!(texts, ["Rome"]);
        assert!(detect_phrases(&analyzed("Who?")).is_empty());
    }

    #[test]
    fn frames_with_fronting() {
        let verbs = VerbLexicon::bundled();
        let f = detect_frame(&analyzed("Who gave a balloon to the kid?"), &verbs).unwrap();
        assert_eq!(f.wh_role(), Some(SemanticRole::Agent));
        assert!(detect_frame(&analyzed("Who is happy?"), &verbs).is_none());

        let f = detect_frame(&analyzed("Whom did John give a balloon?"), &verbs).unwrap();
        assert_eq!(f.wh_role(), Some(SemanticRole::Recipient));
        assert_eq!(f.bindings[&SemanticRole::Agent].text(), "John");

        let f = detect_frame(&analyzed("What did the crow find?"), &verbs).unwrap();
        assert_eq!(f.wh_role(), Some(SemanticRole::Theme));

        let f = detect_frame(&analyzed("Where did the hare sleep?"), &verbs).unwrap();
        assert_eq!(f.wh_role(), Some(SemanticRole::Location));

        let f = detect_frame(&analyzed("When did the race start?"), &verbs).unwrap();
        assert_eq!(f.wh_role(), Some(SemanticRole::Time));

        let f = detect_frame(&analyzed("To whom did Peter sell the golden egg?"), &verbs).unwrap();
        assert_eq!(f.wh_role(), Some(SemanticRole::Recipient));
        assert_eq!(f.bindings[&SemanticRole::Theme].head(), Some("egg"));

        let f = detect_frame(&analyzed("How many beans did the old man give to Jack?"), &verbs).unwrap();
        assert_eq!(f.wh_role(), None);
        assert_eq!(f.bindings[&SemanticRole::Theme].head(), Some("bean"));
        assert_eq!(f.bindings[&SemanticRole::Agent].head(), Some("man"));
    }

    fn query(text: &str, ontology: &Ontology) -> Vec<(String, f64)> {
        let a = RuleAnalyzer::bundled();
        reformulate_query(&analyzed(text), &a, ontology, &ExpansionWeights::default())
            .into_iter()
            .map(|t| (t.term, t.weight))
            .collect()
    }

    #[test]
    fn empty_ontology_keeps_content_and_morphology() {
        let q = query("Who gave a balloon to the kid?", &Ontology::new());
        let originals: Vec<_> = q.iter().filter(|(_, w)| *w == 1.0).map(|(t, _)| t.as_str()).collect();
        assert_eq!(originals, ["give", "balloon", "kid"]);
        assert!(q.contains(&("balloons".to_string(), 0.5)));
        assert!(q.iter().all(|(_, w)| *w == 1.0 || *w == 0.5));
    }

    #[test]
    fn synonym_expansion() {
        let mut o = Ontology::new();
        o.assert_triple(Triple::new("kid", SYNONYM_OF, "child", "base"))
            .unwrap();
        assert!(query("Who gave a balloon to the kid?", &o).contains(&("child".to_string(), 0.5)));
    }

    #[test]
    fn never_empty() {
        let q = query("Who is it?", &Ontology::new());
        assert!(!q.is_empty());
    }

    #[test]
    fn weights_validate() {
        assert!(ExpansionWeights::default().validate().is_ok());
        assert!(ExpansionWeights {
            original: 1.0,
            expansion: 1.0
        }
        .validate()
        .is_err());
    }
}
