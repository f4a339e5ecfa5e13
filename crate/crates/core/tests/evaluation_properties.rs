use proptest::prelude::*;
use qa_core::evaluation::{compute_recall, judge, normalize, AnswerMode, QuestionRecord};

/// Long division in decimal: one digit after the point, half-up.
fn recall_oracle(correct: usize, total: usize) -> String {
    let scaled = 1000 * correct;
    let (mut q, r) = (scaled / total, scaled % total);
    if 2 * r >= total {
        q += 1;
    }
    format!("{}.{}", q / 10, q % 10)
}

fn record(gold: &str) -> QuestionRecord {
    QuestionRecord {
        id: "q".into(),
        question: "?".into(),
        gold_answers: vec![gold.into()],
        answer_mode: AnswerMode::Precise,
    }
}

#[test]
fn recall_matches_oracle_exhaustively() {
    for total in 1..=300 {
        for correct in 0..=total {
            let got = compute_recall(correct, total).unwrap();
            assert_eq!(format!("{got:.1}"), recall_oracle(correct, total), "{correct}/{total}");
        }
    }
}

#[test]
fn reference_cells_via_oracle() {
    for (c, t, want) in [
        (41, 50, "82.0"),
        (97, 120, "80.8"),
        (47, 50, "94.0"),
        (112, 120, "93.3"),
    ] {
        assert_eq!(recall_oracle(c, t), want);
        assert_eq!(format!("{:.1}", compute_recall(c, t).unwrap()), want);
    }
}

fn word() -> impl Strategy<Value = String> {
    "[a-z]{2,8}".prop_filter("not an article", |w| !["an", "the"].contains(&w.as_str()))
}

proptest! {
    #[test]
    fn recall_in_range(total in 1usize..10_000, frac in 0.0f64..=1.0) {
        let correct = ((total as f64) * frac).floor() as usize;
        let r = compute_recall(correct, total).unwrap();
        prop_assert!((0.0..=100.0).contains(&r));
    }

    #[test]
    fn strict_prefix_is_never_correct(gold in word(), cut in 1usize..8) {
        let cut = cut.min(gold.len() - 1);
        let partial = &gold[..cut];
        let r = record(&gold);
        prop_assert!(!judge(Some(partial), &r, AnswerMode::Precise).correct);
        let sentence = format!("{partial} was here.");
        prop_assert!(!judge(Some(&sentence), &r, AnswerMode::Sentence).correct);
    }

    #[test]
    fn case_articles_and_punctuation_do_not_matter(words in prop::collection::vec(word(), 1..4), upper in any::<bool>()) {
        let gold = words.join(" ");
        let mut answer = format!("The {gold}!");
        if upper {
            answer = answer.to_uppercase();
        }
        let r = record(&gold);
        prop_assert!(judge(Some(&answer), &r, AnswerMode::Precise).correct);
        prop_assert_eq!(normalize(&answer), normalize(&gold));
    }

    #[test]
    fn sentence_mode_finds_embedded_gold(gold in word(), before in word(), after in word()) {
        let sentence = format!("{before} {gold} {after}.");
        let r = record(&gold);
        let j = judge(Some(&sentence), &r, AnswerMode::Sentence);
        prop_assert!(j.correct && j.relevant && j.complete);
        prop_assert_eq!(j.matched_gold.as_deref(), Some(gold.as_str()));
    }
}
