use super::{EntityLabel, Lexicon, PosTag, TaggedToken};

const PLACE_PREPOSITIONS: [&str; 5] = ["in", "at", "near", "into", "from"];

/// Assign entity labels from gazetteers and pattern lexicons.
///
/// Labels are recomputed from the POS tags alone, so the function is
/// idempotent.
pub fn ner_tag(mut tagged: Vec<TaggedToken>, lexicon: &Lexicon) -> Vec<TaggedToken> {
    for t in &mut tagged {
        t.ner = EntityLabel::None;
    }
    let lowers: Vec<String> = tagged.iter().map(|t| t.token.surface.to_lowercase()).collect();

    // Proper-noun runs: dates, people, places.
    let mut i = 0;
    while i < tagged.len() {
        if tagged[i].pos != PosTag::ProperNoun {
            i += 1;
            continue;
        }
        let start = i;
        while i < tagged.len() && tagged[i].pos == PosTag::ProperNoun {
            i += 1;
        }
        let run = &lowers[start..i];
        let label = if run.iter().all(|w| lexicon.is_date_word(w)) {
            EntityLabel::Date
        } else if run.iter().any(|w| lexicon.is_title(w) || lexicon.is_person(w)) {
            EntityLabel::Person
        } else if run.iter().any(|w| lexicon.is_location(w))
            || (start > 0 && PLACE_PREPOSITIONS.contains(&tagged[start - 1].token.lemma.as_str()))
        {
            EntityLabel::Location
        } else {
            EntityLabel::None
        };
        for t in &mut tagged[start..i] {
            t.ner = label;
        }
    }

    for (i, w) in lowers.iter().enumerate() {
        if tagged[i].ner == EntityLabel::None && lexicon.is_date_word(w) && tagged[i].pos != PosTag::Verb {
            tagged[i].ner = EntityLabel::Date;
        }
    }

    let is_numeral = |t: &TaggedToken| t.pos == PosTag::Number;
    for i in 0..tagged.len() {
        if !is_numeral(&tagged[i]) {
            continue;
        }
        let next = tagged.get(i + 1);
        let prev_month = i > 0 && lexicon.is_month(&lowers[i - 1]);
        let next_month = i + 1 < tagged.len() && lexicon.is_month(&lowers[i + 1]);
        if prev_month || next_month {
            tagged[i].ner = EntityLabel::Date;
            continue;
        }
        match next {
            Some(n) if lexicon.is_duration_unit(n.lemma()) => {
                tagged[i].ner = EntityLabel::Duration;
                tagged[i + 1].ner = EntityLabel::Duration;
            }
            Some(n) if lexicon.is_unit(n.lemma()) => {
                tagged[i].ner = EntityLabel::Metrics;
                tagged[i + 1].ner = EntityLabel::Metrics;
            }
            _ => {
                if tagged[i].ner == EntityLabel::None {
                    tagged[i].ner = EntityLabel::Number;
                }
            }
        }
    }
    tagged
}
