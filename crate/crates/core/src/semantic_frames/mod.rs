//! Semantic role labeling over chunks, time-anchored frame predicates, and
//! frame-to-frame similarity.

mod lexicon;
mod roles;
mod similarity;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use lexicon::{OntologyMapping, PredicateTemplate, RoleSlot, Slot, VerbEntry, VerbLexicon, VerbLexiconError};
pub use roles::{label_all_roles, label_roles, NoVerbEntry, Phrase, RoleAssignment};
pub use similarity::{frame_similarity, SimilarityWeights, WeightError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SemanticRole {
    Agent,
    Theme,
    Recipient,
    Location,
    Time,
    Unknown,
}

impl SemanticRole {
    pub fn name(self) -> &'static str {
        match self {
            SemanticRole::Agent => "Agent",
            SemanticRole::Theme => "Theme",
            SemanticRole::Recipient => "Recipient",
            SemanticRole::Location => "Location",
            SemanticRole::Time => "Time",
            SemanticRole::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for SemanticRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeAnchor {
    Start,
    End,
    During,
}

impl fmt::Display for TimeAnchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeAnchor::Start => "start",
            TimeAnchor::End => "end",
            TimeAnchor::During => "during",
        })
    }
}

/// What stands in a role: a phrase from the sentence, or the sought answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Filler {
    Wh,
    Phrase(Phrase),
}

impl Filler {
    pub fn is_wh(&self) -> bool {
        matches!(self, Filler::Wh)
    }

    pub fn head(&self) -> Option<&str> {
        match self {
            Filler::Wh => None,
            Filler::Phrase(p) => Some(&p.head),
        }
    }

    pub fn phrase(&self) -> Option<&Phrase> {
        match self {
            Filler::Wh => None,
            Filler::Phrase(p) => Some(p),
        }
    }

    pub fn text(&self) -> &str {
        match self {
            Filler::Wh => "WH",
            Filler::Phrase(p) => &p.text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateArg {
    pub role: SemanticRole,
    pub filler: Filler,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramePredicate {
    pub name: String,
    pub anchor: TimeAnchor,
    pub args: Vec<PredicateArg>,
}

/// Name, anchor and role list: the part of a predicate compared across frames.
pub type Signature = (String, TimeAnchor, Vec<SemanticRole>);

impl FramePredicate {
    pub fn signature(&self) -> Signature {
        (
            self.name.clone(),
            self.anchor,
            self.args.iter().map(|a| a.role).collect(),
        )
    }

    /// `has_possession(start(E), Agent, Theme)`
    pub fn render(&self) -> String {
        let mut out = format!("{}({}(E)", self.name, self.anchor);
        for a in &self.args {
            out.push_str(", ");
            out.push_str(a.role.name());
        }
        out.push(')');
        out
    }

    /// Same shape as [`render`](Self::render) with fillers in place of roles.
    pub fn render_bound(&self) -> String {
        let mut out = format!("{}({}(E)", self.name, self.anchor);
        for a in &self.args {
            out.push_str(", ");
            out.push_str(a.filler.text());
        }
        out.push(')');
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticFrame {
    pub event_id: String,
    pub verb_lemma: String,
    pub bindings: BTreeMap<SemanticRole, Filler>,
    pub predicates: Vec<FramePredicate>,
}

impl SemanticFrame {
    pub fn wh_role(&self) -> Option<SemanticRole> {
        self.bindings.iter().find(|(_, f)| f.is_wh()).map(|(r, _)| *r)
    }

    pub fn rendered_predicates(&self) -> Vec<String> {
        self.predicates.iter().map(FramePredicate::render).collect()
    }
}

/// Substitute role bindings into the verb's frame template.
///
/// Wh-phrases become [`Filler::Wh`]; only the first one in role order keeps
/// its binding. Template predicates that mention an unbound role are dropped.
pub fn instantiate_frame(roles: &RoleAssignment, lexicon: &VerbLexicon) -> Result<SemanticFrame, NoVerbEntry> {
    let entry = lexicon.get(&roles.verb_lemma).ok_or(NoVerbEntry)?;
    let mut bindings = BTreeMap::new();
    let mut wh_seen = false;
    for (role, phrase) in &roles.bindings {
        if phrase.wh {
            if wh_seen {
                continue;
            }
            wh_seen = true;
            bindings.insert(*role, Filler::Wh);
        } else {
            bindings.insert(*role, Filler::Phrase(phrase.clone()));
        }
    }
    let predicates = entry
        .frame_template
        .iter()
        .filter_map(|t| {
            let args = t
                .args
                .iter()
                .map(|r| {
                    bindings.get(r).map(|f| PredicateArg {
                        role: *r,
                        filler: f.clone(),
                    })
                })
                .collect::<Option<Vec<_>>>()?;
            Some(FramePredicate {
                name: t.name.clone(),
                anchor: t.anchor,
                args,
            })
        })
        .collect();
    Ok(SemanticFrame {
        event_id: roles.event_id.clone(),
        verb_lemma: roles.verb_lemma.clone(),
        bindings,
        predicates,
    })
}

/// Every frame the lexicon can build for a sentence, in verb order.
pub fn sentence_frames(sentence: &crate::text_analysis::AnalyzedSentence, lexicon: &VerbLexicon) -> Vec<SemanticFrame> {
    label_all_roles(sentence, lexicon)
        .iter()
        .filter_map(|r| instantiate_frame(r, lexicon).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_analysis::{Analyzer, RuleAnalyzer, SentenceId};

    fn frame(text: &str) -> SemanticFrame {
        let s = RuleAnalyzer::bundled().analyze(
            SentenceId {
                doc_id: "t".into(),
                ordinal: 0,
            },
            text,
        );
        let lex = VerbLexicon::bundled();
        instantiate_frame(&label_roles(&s, &lex).unwrap(), &lex).unwrap()
    }

    #[test]
    fn give_question_predicates() {
        let f = frame("Who gave a balloon to the kid?");
        assert_eq!(
            f.rendered_predicates(),
            [
                "has_possession(start(E), Agent, Theme)",
                "has_possession(end(E), Recipient, Theme)",
                "transfer(during(E), Theme)"
            ]
        );
        assert_eq!(f.bindings[&SemanticRole::Agent], Filler::Wh);
        assert_eq!(f.wh_role(), Some(SemanticRole::Agent));
    }

    #[test]
    fn give_statement_binds_john() {
        let f = frame("John gave a balloon to the kid.");
        assert_eq!(f.bindings[&SemanticRole::Agent].text(), "John");
        assert_eq!(
            f.predicates[1].render_bound(),
            "has_possession(end(E), the kid, a balloon)"
        );
        assert_eq!(f.wh_role(), None);
    }

    #[test]
    fn missing_recipient_drops_predicate() {
        let f = frame("John gave a balloon.");
        assert_eq!(
            f.rendered_predicates(),
            ["has_possession(start(E), Agent, Theme)", "transfer(during(E), Theme)"]
        );
    }

    #[test]
    fn only_one_wh_binding() {
        let f = frame("Who gave what to the kid?");
        assert_eq!(f.bindings.values().filter(|b| b.is_wh()).count(), 1);
    }

    #[test]
    fn unknown_verb_cannot_instantiate() {
        let lex = VerbLexicon::bundled();
        let roles = RoleAssignment {
            event_id: "e".into(),
            verb_lemma: "rise".into(),
            verb_span: (0, 1),
            bindings: BTreeMap::new(),
        };
        assert_eq!(instantiate_frame(&roles, &lex), Err(NoVerbEntry));
    }
}
