use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use qa_core::ontology::{Ontology, Triple, SYNONYM_OF};
use qa_core::retrieval::ConceptIndex;
use qa_core::text_analysis::{AnalyzedSentence, Analyzer, RuleAnalyzer};

const NOUNS: [&str; 8] = ["fox", "crow", "cheese", "kid", "child", "river", "hare", "rabbit"];
const VERBS: [&str; 4] = ["ate", "saw", "found", "chased"];

fn arb_corpus() -> impl Strategy<Value = Vec<Vec<(usize, usize, usize)>>> {
    proptest::collection::vec(
        proptest::collection::vec((0..NOUNS.len(), 0..VERBS.len(), 0..NOUNS.len()), 1..4),
        1..6,
    )
}

fn text(sentences: &[(usize, usize, usize)]) -> String {
    sentences
        .iter()
        .map(|&(s, v, o)| format!("The {} {} the {}.", NOUNS[s], VERBS[v], NOUNS[o]))
        .collect::<Vec<_>>()
        .join(" ")
}

fn analyzed(corpus: &[Vec<(usize, usize, usize)>]) -> Vec<(String, Vec<AnalyzedSentence>)> {
    let a = RuleAnalyzer::bundled();
    corpus
        .iter()
        .enumerate()
        .map(|(i, doc)| {
            let id = format!("doc{i:02}");
            let sentences = a.analyze_document(&id, &text(doc));
            (id, sentences)
        })
        .collect()
}

fn build(ontology: &Ontology, docs: &[(String, Vec<AnalyzedSentence>)]) -> ConceptIndex {
    let mut index = ConceptIndex::new(ontology);
    for (id, s) in docs {
        index.index_document(id, s).unwrap();
    }
    index
}

/// Plain lemma → documents map over content tokens.
fn keyword_index(docs: &[(String, Vec<AnalyzedSentence>)]) -> BTreeMap<String, BTreeSet<String>> {
    let mut map: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (id, sentences) in docs {
        for t in sentences.iter().flat_map(|s| &s.tagged).filter(|t| t.is_content()) {
            map.entry(t.lemma().to_string()).or_default().insert(id.clone());
        }
    }
    map
}

fn query(index: &ConceptIndex, lemmas: &[&str]) -> Vec<(String, f64)> {
    let q: Vec<_> = lemmas.iter().map(|l| (index.concept_of(l), 1.0)).collect();
    index.retrieve(&q, usize::MAX)
}

fn synonyms() -> Ontology {
    let mut o = Ontology::new();
    for (a, b) in [("kid", "child"), ("hare", "rabbit")] {
        o.assert_triple(Triple::new(a, SYNONYM_OF, b, "base")).unwrap();
    }
    o
}

proptest! {
    #[test]
    fn empty_ontology_equals_keyword_index(corpus in arb_corpus(), picks in proptest::collection::vec(0..NOUNS.len() + VERBS.len(), 1..4)) {
        let docs = analyzed(&corpus);
        let index = build(&Ontology::new(), &docs);
        let keywords = keyword_index(&docs);
        let lemmas: Vec<&str> = picks.iter().map(|&i| if i < NOUNS.len() { NOUNS[i] } else { ["eat", "see", "find", "chase"][i - NOUNS.len()] }).collect();
        let expected: BTreeSet<String> = lemmas.iter().flat_map(|l| keywords.get(*l).cloned().unwrap_or_default()).collect();
        let got: BTreeSet<String> = query(&index, &lemmas).into_iter().map(|(d, _)| d).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn synonyms_only_add_documents(corpus in arb_corpus(), pick in 0..NOUNS.len()) {
        let docs = analyzed(&corpus);
        let plain: BTreeSet<String> = query(&build(&Ontology::new(), &docs), &[NOUNS[pick]]).into_iter().map(|(d, _)| d).collect();
        let conceptual: BTreeSet<String> = query(&build(&synonyms(), &docs), &[NOUNS[pick]]).into_iter().map(|(d, _)| d).collect();
        prop_assert!(plain.is_subset(&conceptual));
    }

    #[test]
    fn df_matches_distinct_posting_documents(corpus in arb_corpus()) {
        let index = build(&synonyms(), &analyzed(&corpus));
        for c in index.concepts() {
            let docs: BTreeSet<&str> = index.postings(c.id).iter().map(|p| p.doc_id.as_str()).collect();
            prop_assert_eq!(index.document_frequency(c.id), docs.len());
        }
    }

    #[test]
    fn extra_occurrence_never_lowers_score(corpus in arb_corpus(), target in 0..NOUNS.len()) {
        let docs = analyzed(&corpus);
        let before = query(&build(&Ontology::new(), &docs), &[NOUNS[target], "eat"]);
        let mut grown = corpus.clone();
        grown[0].push((target, 0, target));
        let after = query(&build(&Ontology::new(), &analyzed(&grown)), &[NOUNS[target], "eat"]);
        let score = |r: &[(String, f64)]| r.iter().find(|(d, _)| d == "doc00").map_or(0.0, |(_, s)| *s);
        prop_assert!(score(&after) >= score(&before) - 1e-12);
    }

    #[test]
    fn ranking_is_deterministic_and_ordered(corpus in arb_corpus(), pick in 0..NOUNS.len()) {
        let docs = analyzed(&corpus);
        let a = query(&build(&synonyms(), &docs), &[NOUNS[pick], "find"]);
        let b = query(&build(&synonyms(), &docs), &[NOUNS[pick], "find"]);
        prop_assert_eq!(&a, &b);
        for w in a.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
    }

    #[test]
    fn snapshot_round_trip(corpus in arb_corpus()) {
        let index = build(&synonyms(), &analyzed(&corpus));
        let back = ConceptIndex::from_json(&index.to_json()).unwrap();
        prop_assert_eq!(&back, &index);
        prop_assert_eq!(back.to_json(), index.to_json());
    }
}
