use super::{EntityLabel, Lexicon, PosTag, TaggedToken, Token};

#[derive(Clone, Copy)]
struct Prev {
    pos: PosTag,
    auxiliary: bool,
    lower_is_to: bool,
}

/// Assign exactly one tag to every token.
///
/// Order of evidence: closed-class lexicon, numerals, capitalization,
/// open-class lexicon with a left-context tie-break, suffix heuristics, and
/// finally the noun default.
pub fn pos_tag(tokens: Vec<Token>, lexicon: &Lexicon) -> Vec<TaggedToken> {
    let first_word = tokens
        .iter()
        .position(|t| t.surface.chars().any(char::is_alphanumeric))
        .unwrap_or(0);

    let mut out: Vec<TaggedToken> = Vec::with_capacity(tokens.len());
    let lowers: Vec<String> = tokens.iter().map(|t| t.surface.to_lowercase()).collect();
    for (i, token) in tokens.into_iter().enumerate() {
        let prev = out.last().map(|p: &TaggedToken| Prev {
            pos: p.pos,
            auxiliary: p.closed_class && p.pos == PosTag::Verb,
            lower_is_to: p.token.lemma == "to",
        });
        let next_lower = lowers.get(i + 1).map(String::as_str);
        let (pos, closed_class) = tag_one(&token, &lowers[i], i == first_word, prev, next_lower, lexicon);
        out.push(TaggedToken {
            token,
            pos,
            ner: EntityLabel::None,
            closed_class,
        });
    }
    out
}

fn tag_one(
    token: &Token,
    lower: &str,
    initial: bool,
    prev: Option<Prev>,
    next_lower: Option<&str>,
    lexicon: &Lexicon,
) -> (PosTag, bool) {
    let surface = token.surface.as_str();
    if !surface.chars().any(char::is_alphanumeric) {
        return (PosTag::Punctuation, false);
    }
    let capitalized = surface.chars().next().is_some_and(char::is_uppercase);
    if capitalized && !initial && lexicon.is_date_word(lower) {
        return (PosTag::ProperNoun, false);
    }
    if let Some((tag, _)) = lexicon.closed_class(lower) {
        return (tag, true);
    }
    if surface.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        return (PosTag::Number, false);
    }
    if capitalized && (!initial || lexicon.is_person(lower) || lexicon.is_location(lower) || lexicon.is_title(lower)) {
        return (PosTag::ProperNoun, false);
    }

    let mut tags = lexicon.open_tags(lower);
    if tags.is_empty() {
        tags = lexicon.open_tags(&token.lemma);
    }
    let inflected = lower.ends_with("ing") || lower.ends_with("ed");
    if !tags.is_empty() {
        if tags == [PosTag::Verb] && inflected && prev.is_some_and(|p| p.pos == PosTag::Determiner) {
            return (PosTag::Adjective, false);
        }
        let next_is_word =
            next_lower.is_some_and(|n| n.chars().any(char::is_alphanumeric) && lexicon.closed_class(n).is_none());
        return (disambiguate(tags, prev, next_is_word), false);
    }

    if lower.len() > 4 && lower.ends_with("ly") {
        return (PosTag::Adverb, false);
    }
    if inflected && lower.len() > 4 {
        match prev {
            Some(p) if p.pos == PosTag::Determiner => return (PosTag::Adjective, false),
            Some(p) if p.auxiliary => return (PosTag::Verb, false),
            Some(p)
                if lower.ends_with("ed") && matches!(p.pos, PosTag::Noun | PosTag::ProperNoun | PosTag::Pronoun) =>
            {
                return (PosTag::Verb, false)
            }
            _ => {}
        }
    }
    if ["ful", "ous", "less", "ive", "able"]
        .iter()
        .any(|s| lower.len() > 5 && lower.ends_with(s))
    {
        return (PosTag::Adjective, false);
    }
    (PosTag::Noun, false)
}

fn disambiguate(tags: &[PosTag], prev: Option<Prev>, next_is_word: bool) -> PosTag {
    if tags.len() == 1 {
        return tags[0];
    }
    let has = |t: PosTag| tags.contains(&t);
    let Some(p) = prev else {
        return tags[0];
    };
    if (p.auxiliary || p.lower_is_to) && has(PosTag::Verb) {
        return PosTag::Verb;
    }
    match p.pos {
        PosTag::Determiner | PosTag::Adjective | PosTag::Number | PosTag::Other => {
            if has(PosTag::Adjective) && next_is_word {
                PosTag::Adjective
            } else if has(PosTag::Noun) {
                PosTag::Noun
            } else {
                tags[0]
            }
        }
        PosTag::Noun | PosTag::ProperNoun | PosTag::Pronoun | PosTag::WhWord if has(PosTag::Verb) => PosTag::Verb,
        PosTag::Verb => {
            if has(PosTag::Adverb) && !has(PosTag::Noun) {
                PosTag::Adverb
            } else if has(PosTag::Noun) {
                PosTag::Noun
            } else {
                tags[0]
            }
        }
        PosTag::Preposition if has(PosTag::Noun) => PosTag::Noun,
        _ => tags[0],
    }
}
