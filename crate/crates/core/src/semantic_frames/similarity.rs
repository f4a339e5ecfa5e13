use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Filler, SemanticFrame, Signature};

/// Weights of predicate overlap, role agreement and verb identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimilarityWeights {
    pub predicates: f64,
    pub roles: f64,
    pub verb: f64,
}

impl Default for SimilarityWeights {
    fn default() -> Self {
        Self {
            predicates: 0.5,
            roles: 0.3,
            verb: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("weight `{0}` is negative")]
    Negative(&'static str),
    #[error("similarity weights sum to {0}, not 1")]
    BadSum(f64),
}

impl SimilarityWeights {
    pub fn validate(&self) -> Result<(), WeightError> {
        for (name, w) in [
            ("predicates", self.predicates),
            ("roles", self.roles),
            ("verb", self.verb),
        ] {
            if w.is_nan() || w < 0.0 {
                return Err(WeightError::Negative(name));
            }
        }
        let sum = self.predicates + self.roles + self.verb;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(WeightError::BadSum(sum));
        }
        Ok(())
    }
}

/// `wp·P + wr·R + wv·V` where P is the Jaccard overlap of predicate
/// signatures, R the share of `q`'s bindings that `a` satisfies, and V verb
/// identity. A WH binding in `q` is satisfied by any filler of the same role;
/// a phrase binding needs an equal head lemma.
pub fn frame_similarity(q: &SemanticFrame, a: &SemanticFrame, weights: &SimilarityWeights) -> f64 {
    let score = weights.predicates * predicate_overlap(q, a)
        + weights.roles * role_agreement(q, a)
        + weights.verb * verb_match(q, a);
    score.clamp(0.0, 1.0)
}

fn signatures(f: &SemanticFrame) -> BTreeSet<Signature> {
    f.predicates.iter().map(|p| p.signature()).collect()
}

pub(crate) fn predicate_overlap(q: &SemanticFrame, a: &SemanticFrame) -> f64 {
    let (sq, sa) = (signatures(q), signatures(a));
    let union = sq.union(&sa).count();
    if union == 0 {
        return 1.0;
    }
    sq.intersection(&sa).count() as f64 / union as f64
}

fn role_agreement(q: &SemanticFrame, a: &SemanticFrame) -> f64 {
    if q.bindings.is_empty() {
        return 0.0;
    }
    let satisfied = q
        .bindings
        .iter()
        .filter(|(role, filler)| match (filler, a.bindings.get(role)) {
            (_, None) => false,
            (Filler::Wh, Some(_)) => true,
            (Filler::Phrase(p), Some(Filler::Phrase(o))) => p.head == o.head,
            (Filler::Phrase(_), Some(Filler::Wh)) => false,
        })
        .count();
    satisfied as f64 / q.bindings.len() as f64
}

fn verb_match(q: &SemanticFrame, a: &SemanticFrame) -> f64 {
    if q.verb_lemma == a.verb_lemma {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_weights_are_valid() {
        assert!(SimilarityWeights::default().validate().is_ok());
        let bad = SimilarityWeights {
            predicates: 0.5,
            roles: 0.5,
            verb: 0.5,
        };
        assert!(matches!(bad.validate(), Err(WeightError::BadSum(_))));
        let neg = SimilarityWeights {
            predicates: 1.5,
            roles: -0.5,
            verb: 0.0,
        };
        assert_eq!(neg.validate(), Err(WeightError::Negative("roles")));
    }
}
