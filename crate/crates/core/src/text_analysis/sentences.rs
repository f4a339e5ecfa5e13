use serde::{Deserialize, Serialize};

use super::Lexicon;

/// A sentence and its byte range in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceSpan {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

/// Split text into sentences at `. ! ?` followed by whitespace and a capital
/// letter, except after a listed abbreviation. A blank line always ends a
/// sentence, so titles and headings stand alone. The returned spans are
/// trimmed; only whitespace lies between consecutive spans.
pub fn split_sentences(text: &str, lexicon: &Lexicon) -> Vec<SentenceSpan> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut boundaries = paragraph_breaks(text);

    let mut i = 0;
    while i < chars.len() {
        let (idx, c) = chars[i];
        if !is_terminal(c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (is_terminal(chars[j].1) || is_closer(chars[j].1)) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let has_gap = k > j;
        while k < chars.len() && is_opener(chars[k].1) {
            k += 1;
        }
        let next_upper = chars
            .get(k)
            .is_some_and(|&(_, n)| n.is_uppercase() || n.is_ascii_digit());
        if has_gap && next_upper && !(c == '.' && ends_with_abbreviation(&text[..idx + 1], lexicon)) {
            boundaries.push(end);
        }
        i = j.max(i + 1);
    }

    boundaries.sort_unstable();
    boundaries.dedup();
    let mut spans = Vec::new();
    let mut start = 0;
    for end in boundaries.into_iter().chain(std::iter::once(text.len())) {
        push_trimmed(text, start, end, &mut spans);
        start = end;
    }
    spans
}

fn paragraph_breaks(text: &str) -> Vec<usize> {
    let mut breaks = Vec::new();
    let mut last_newline: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c == '\n' {
            if let Some(prev) = last_newline {
                if text[prev..i].trim().is_empty() {
                    breaks.push(i);
                }
            }
            last_newline = Some(i);
        } else if !c.is_whitespace() {
            last_newline = None;
        }
    }
    breaks
}

fn ends_with_abbreviation(prefix: &str, lexicon: &Lexicon) -> bool {
    let word_start = prefix
        .char_indices()
        .rev()
        .find(|&(_, c)| c.is_whitespace() || is_opener(c))
        .map_or(0, |(b, c)| b + c.len_utf8());
    lexicon.is_abbreviation(&prefix[word_start..])
}

fn push_trimmed(text: &str, start: usize, end: usize, out: &mut Vec<SentenceSpan>) {
    let slice = &text[start..end];
    let lead = slice.len() - slice.trim_start().len();
    let trimmed = slice.trim();
    if trimmed.is_empty() {
        return;
    }
    let s = start + lead;
    out.push(SentenceSpan {
        text: trimmed.to_string(),
        start: s,
        end: s + trimmed.len(),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn split(text: &str) -> Vec<String> {
        split_sentences(text, &Lexicon::bundled())
            .into_iter()
            .map(|s| s.text)
            .collect()
    }

    #[test]
    fn two_terminal_periods() {
        assert_eq!(split("John slept. Mary ran."), ["John slept.", "Mary ran."]);
    }

    #[test]
    fn empty_text() {
        assert!(split("").is_empty());
        assert!(split("   \n ").is_empty());
    }

    // Hand enumeration over the closed abbreviation list: none of these may
    // end a sentence, and a non-abbreviation with the same shape must.
    #[test]
    fn abbreviations_do_not_split() {
        assert_eq!(split("Mr. Fox ran away."), ["Mr. Fox ran away."]);
        for abbr in ["Mr.", "Mrs.", "Dr.", "St."] {
            let text = format!("We met {abbr} Green today. He smiled.");
            assert_eq!(split(&text).len(), 2, "{text}");
        }
        assert_eq!(split("We met Bob. Green smiled.").len(), 2);
    }

    #[test]
    fn blank_line_ends_heading() {
        assert_eq!(
            split("The Fox\n\nOne day the fox ran."),
            ["The Fox", "One day the fox ran."]
        );
        assert_eq!(split("A line\nwrapped here."), ["A line\nwrapped here."]);
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        assert_eq!(
            split("It was 3.5 miles. then it ended."),
            ["It was 3.5 miles. then it ended."]
        );
    }

    #[test]
    fn quotes_and_exclamations() {
        assert_eq!(
            split("\"Run!\" cried Tom. The wolf came?  Yes."),
            ["\"Run!\" cried Tom.", "The wolf came?", "Yes."]
        );
        assert_eq!(split("Stop! \"Wait,\" she said."), ["Stop!", "\"Wait,\" she said."]);
    }

    proptest! {
        #[test]
        fn spans_cover_text_with_whitespace_gaps(words in proptest::collection::vec("[A-Za-z]{1,6}[.!?]?", 0..20)) {
            let text = words.join(" ");
            let spans = split_sentences(&text, &Lexicon::bundled());
            let mut cursor = 0;
            for s in &spans {
                prop_assert!(text[cursor..s.start].trim().is_empty());
                prop_assert_eq!(&text[s.start..s.end], s.text.as_str());
                cursor = s.end;
            }
            prop_assert!(text[cursor..].trim().is_empty());
        }
    }
}
