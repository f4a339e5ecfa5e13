use super::{Lexicon, Token};

/// Split on whitespace, detach leading/trailing punctuation and possessive
/// `'s` into their own tokens. Listed abbreviations keep their period.
pub fn tokenize(sentence: &str, lexicon: &Lexicon) -> Vec<Token> {
    let mut spans = Vec::new();
    let mut word_start = None;
    for (i, c) in sentence.char_indices().chain(std::iter::once((sentence.len(), ' '))) {
        match (c.is_whitespace(), word_start) {
            (true, Some(s)) => {
                split_word(sentence, s, i, lexicon, &mut spans);
                word_start = None;
            }
            (false, None) => word_start = Some(i),
            _ => {}
        }
    }
    spans
        .into_iter()
        .map(|(s, e)| {
            let surface = &sentence[s..e];
            let lemma = if surface.chars().any(char::is_alphanumeric) {
                lexicon.lemmatize(surface)
            } else {
                surface.to_string()
            };
            Token {
                surface: surface.to_string(),
                lemma,
                start_offset: s,
                end_offset: e,
            }
        })
        .collect()
}

fn is_punct(c: char) -> bool {
    !c.is_alphanumeric()
}

fn split_word(text: &str, start: usize, end: usize, lexicon: &Lexicon, out: &mut Vec<(usize, usize)>) {
    let word = &text[start..end];
    if lexicon.is_abbreviation(word) {
        out.push((start, end));
        return;
    }

    let mut s = start;
    let mut leading = Vec::new();
    for (i, c) in word.char_indices() {
        if !is_punct(c) {
            break;
        }
        leading.push((start + i, start + i + c.len_utf8()));
        s = start + i + c.len_utf8();
    }
    out.extend(leading);
    if s == end {
        return;
    }

    let mut trailing = Vec::new();
    let mut e = end;
    while let Some(c) = text[s..e].chars().next_back() {
        if !is_punct(c) {
            break;
        }
        let w = c.len_utf8();
        // Keep an abbreviation's period attached, e.g. "(Dr." -> "(" "Dr."
        if c == '.' && lexicon.is_abbreviation(&text[s..e]) {
            break;
        }
        trailing.push((e - w, e));
        e -= w;
    }

    let core = &text[s..e];
    let possessive = ["'s", "'S", "\u{2019}s"]
        .iter()
        .find(|p| core.len() > p.len() && core.ends_with(*p));
    match possessive {
        Some(p) => {
            out.push((s, e - p.len()));
            out.push((e - p.len(), e));
        }
        None => out.push((s, e)),
    }
    out.extend(trailing.into_iter().rev());
}
