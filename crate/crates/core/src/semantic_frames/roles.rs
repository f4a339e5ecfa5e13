use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{SemanticRole, Slot, VerbEntry, VerbLexicon};
use crate::text_analysis::{AnalyzedSentence, Chunk, ChunkLabel, EntityLabel, PosTag};

const CONJUNCTIONS: [&str; 4] = ["and", "but", "or", "then"];
const ADVERBIAL_WH: [&str; 4] = ["where", "when", "why", "how"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no verb in the sentence has a lexicon entry")]
pub struct NoVerbEntry;

/// A role filler taken from the sentence. `start..end` is a token span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phrase {
    pub text: String,
    /// Lemma of the nominal head.
    pub head: String,
    pub start: usize,
    pub end: usize,
    pub wh: bool,
}

impl Phrase {
    /// Noun phrase over a token span; `None` if the span has no nominal head.
    pub fn from_span(sentence: &AnalyzedSentence, start: usize, end: usize) -> Option<Phrase> {
        let head = sentence.head_index(start, end)?;
        Some(Phrase {
            text: sentence.span_text(start, end).to_string(),
            head: sentence.tagged[head].lemma().to_string(),
            start,
            end,
            wh: sentence.tagged[start..end].iter().any(|t| t.pos == PosTag::WhWord),
        })
    }

    pub fn from_chunk(sentence: &AnalyzedSentence, chunk: &Chunk) -> Option<Phrase> {
        let (s, e) = chunk.noun_span()?;
        Self::from_span(sentence, s, e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub event_id: String,
    pub verb_lemma: String,
    /// Token span of the verb group.
    pub verb_span: (usize, usize),
    pub bindings: BTreeMap<SemanticRole, Phrase>,
}

/// Roles for the first verb group whose head has a lexicon entry.
pub fn label_roles(sentence: &AnalyzedSentence, lexicon: &VerbLexicon) -> Result<RoleAssignment, NoVerbEntry> {
    label_all_roles(sentence, lexicon).into_iter().next().ok_or(NoVerbEntry)
}

/// Roles for every verb group with a lexicon entry, left to right.
///
/// A verb's arguments are looked for between the previous main verb and the
/// next verb group. The subject is the last plain NP before the verb, or the
/// previous verb's subject when the verb directly follows a conjunction. The
/// object is the first plain NP after the verb; two adjacent NPs are read as
/// a dative (`gave the kid a balloon`) when the entry has a `to`/`for` slot.
/// PPs are matched by preposition and date/duration phrases fill the
/// temporal slot. The first match for a role wins.
pub fn label_all_roles(sentence: &AnalyzedSentence, lexicon: &VerbLexicon) -> Vec<RoleAssignment> {
    let chunks = &sentence.chunks;
    let main_verbs: Vec<usize> = (0..chunks.len())
        .filter(|&i| chunks[i].label == ChunkLabel::VP && !is_auxiliary_only(sentence, &chunks[i]))
        .collect();

    let mut out = Vec::new();
    let mut prev_subject: Option<Phrase> = None;
    for (n, &v) in main_verbs.iter().enumerate() {
        let scope_start = if n == 0 { 0 } else { main_verbs[n - 1] + 1 };
        let scope_end = (v + 1..chunks.len())
            .find(|&i| chunks[i].label == ChunkLabel::VP)
            .unwrap_or(chunks.len());
        let subject = if follows_conjunction(sentence, &chunks[v]) && prev_subject.is_some() {
            prev_subject.clone()
        } else {
            (scope_start..v)
                .rev()
                .find(|&i| is_plain_np(sentence, &chunks[i]))
                .and_then(|i| Phrase::from_chunk(sentence, &chunks[i]))
        };

        if let Some(entry) = verb_lemma(sentence, &chunks[v]).and_then(|l| lexicon.get(l)) {
            out.push(assign(sentence, entry, v, scope_start, scope_end, subject.clone()));
        }
        if subject.is_some() {
            prev_subject = subject;
        }
    }
    out
}

fn assign(
    sentence: &AnalyzedSentence,
    entry: &VerbEntry,
    v: usize,
    scope_start: usize,
    scope_end: usize,
    subject: Option<Phrase>,
) -> RoleAssignment {
    let chunks = &sentence.chunks;
    let mut bindings: BTreeMap<SemanticRole, Phrase> = BTreeMap::new();
    let mut bind = |role: Option<SemanticRole>, phrase: Option<Phrase>| {
        if let (Some(r), Some(p)) = (role, phrase) {
            bindings.entry(r).or_insert(p);
        }
    };

    bind(entry.role_for(&Slot::Subject), subject);

    let after: Vec<usize> = (v + 1..scope_end).collect();
    let before: Vec<usize> = (scope_start..v).collect();
    let objects: Vec<usize> = after
        .iter()
        .copied()
        .filter(|&i| is_plain_np(sentence, &chunks[i]))
        .collect();
    if let Some(&first) = objects.first() {
        let second = objects
            .get(1)
            .copied()
            .filter(|&j| chunks[j].start == chunks[first].end);
        let dative = entry
            .role_for_preposition("to")
            .or_else(|| entry.role_for_preposition("for"));
        match (second, dative) {
            (Some(j), Some(d)) => {
                bind(Some(d), Phrase::from_chunk(sentence, &chunks[first]));
                bind(entry.role_for(&Slot::Object), Phrase::from_chunk(sentence, &chunks[j]));
            }
            _ => bind(
                entry.role_for(&Slot::Object),
                Phrase::from_chunk(sentence, &chunks[first]),
            ),
        }
    }

    for &i in after.iter().chain(before.iter()) {
        let c = &chunks[i];
        if is_temporal(sentence, c) {
            bind(entry.role_for(&Slot::Temporal), Phrase::from_chunk(sentence, c));
        } else if c.label == ChunkLabel::PP {
            let prep = sentence.tagged[c.start].lemma();
            bind(entry.role_for_preposition(prep), Phrase::from_chunk(sentence, c));
        }
    }

    let vp = &chunks[v];
    RoleAssignment {
        event_id: format!(
            "{}#{}:{}",
            sentence.sentence_id.doc_id, sentence.sentence_id.ordinal, vp.start
        ),
        verb_lemma: entry.lemma.clone(),
        verb_span: (vp.start, vp.end),
        bindings,
    }
}

/// Lemma of the last verb in a verb group.
pub(crate) fn verb_lemma<'a>(sentence: &'a AnalyzedSentence, vp: &Chunk) -> Option<&'a str> {
    (vp.start..vp.end)
        .rev()
        .find(|&i| sentence.tagged[i].pos == PosTag::Verb)
        .map(|i| sentence.tagged[i].lemma())
}

fn is_auxiliary_only(sentence: &AnalyzedSentence, vp: &Chunk) -> bool {
    sentence.tagged[vp.start..vp.end]
        .iter()
        .filter(|t| t.pos == PosTag::Verb)
        .all(|t| t.closed_class)
}

fn follows_conjunction(sentence: &AnalyzedSentence, vp: &Chunk) -> bool {
    vp.start > 0 && CONJUNCTIONS.contains(&sentence.tagged[vp.start - 1].lemma())
}

pub(crate) fn is_temporal(sentence: &AnalyzedSentence, chunk: &Chunk) -> bool {
    chunk
        .noun_span()
        .and_then(|(s, e)| sentence.head_index(s, e))
        .is_some_and(|h| matches!(sentence.tagged[h].ner, EntityLabel::Date | EntityLabel::Duration))
}

fn is_adverbial_wh(sentence: &AnalyzedSentence, chunk: &Chunk) -> bool {
    chunk
        .noun_span()
        .and_then(|(s, e)| sentence.head_index(s, e))
        .is_some_and(|h| ADVERBIAL_WH.contains(&sentence.tagged[h].lemma()))
}

/// NP that can be a subject or object: not a date/duration, not `where`/`how`.
fn is_plain_np(sentence: &AnalyzedSentence, chunk: &Chunk) -> bool {
    chunk.label == ChunkLabel::NP && !is_temporal(sentence, chunk) && !is_adverbial_wh(sentence, chunk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_analysis::{Analyzer, RuleAnalyzer, SentenceId};
    use SemanticRole::*;

    fn analyze(text: &str) -> AnalyzedSentence {
        RuleAnalyzer::bundled().analyze(
            SentenceId {
                doc_id: "t".into(),
                ordinal: 0,
            },
            text,
        )
    }

    fn roles(text: &str) -> Vec<(SemanticRole, String)> {
        let s = analyze(text);
        label_roles(&s, &VerbLexicon::bundled())
            .unwrap()
            .bindings
            .into_iter()
            .map(|(r, p)| (r, p.text))
            .collect()
    }

    fn pairs(expected: &[(SemanticRole, &str)]) -> Vec<(SemanticRole, String)> {
        expected.iter().map(|(r, t)| (*r, t.to_string())).collect()
    }

    #[test]
    fn give_question_roles() {
        assert_eq!(
            roles("Who gave a balloon to the kid?"),
            pairs(&[(Agent, "Who"), (Theme, "a balloon"), (Recipient, "the kid")])
        );
    }

    #[test]
    fn give_statement_roles() {
        assert_eq!(
            roles("John gave a balloon to the kid."),
            pairs(&[(Agent, "John"), (Theme, "a balloon"), (Recipient, "the kid")])
        );
    }

    #[test]
    fn lexicon_miss() {
        let s = analyze("The sun rose.");
        assert_eq!(label_roles(&s, &VerbLexicon::bundled()), Err(NoVerbEntry));
    }

    #[test]
    fn dative_alternation() {
        assert_eq!(
            roles("John gave the kid a balloon."),
            pairs(&[(Agent, "John"), (Theme, "a balloon"), (Recipient, "the kid")])
        );
    }

    #[test]
    fn pp_and_temporal_slots() {
        assert_eq!(
            roles("The hare slept under an oak tree for three hours."),
            pairs(&[(Agent, "The hare"), (Location, "an oak tree"), (Time, "three hours")])
        );
        assert_eq!(
            roles("One morning a crow found some cheese in a garden."),
            pairs(&[
                (Agent, "a crow"),
                (Theme, "some cheese"),
                (Location, "a garden"),
                (Time, "One morning")
            ])
        );
    }

    #[test]
    fn auxiliary_does_not_take_the_subject() {
        assert_eq!(roles("What did the crow find?"), pairs(&[(Agent, "the crow")]));
    }

    #[test]
    fn conjunction_inherits_subject() {
        let s = analyze("The crow opened her beak and sang a song.");
        let all = label_all_roles(&s, &VerbLexicon::bundled());
        let sing = all.iter().find(|r| r.verb_lemma == "sing").unwrap();
        assert_eq!(sing.bindings[&Agent].text, "The crow");
        assert_eq!(sing.bindings[&Theme].text, "a song");
    }

    #[test]
    fn several_frames_per_sentence() {
        let s = analyze("The fox ate the cheese and ran into the forest.");
        let all = label_all_roles(&s, &VerbLexicon::bundled());
        let verbs: Vec<_> = all.iter().map(|r| r.verb_lemma.as_str()).collect();
        assert_eq!(verbs, ["eat", "run"]);
        assert_eq!(all[1].bindings[&Agent].text, "The fox");
        assert_eq!(all[1].bindings[&Location].text, "the forest");
        assert_ne!(all[0].event_id, all[1].event_id);
    }
}
