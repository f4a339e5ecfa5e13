use super::{Chunk, ChunkLabel, PosTag, TaggedToken};

/// Regular-expression chunk grammar over POS tags:
///
/// ```text
/// NP := determiner? (adjective|number)* (noun|proper-noun|pronoun|wh-word)+
/// VP := adverb* verb+
/// PP := preposition NP
/// ```
///
/// Matched longest-first, left to right, without overlap.
pub fn chunk(tagged: &[TaggedToken]) -> Vec<Chunk> {
    let tags: Vec<PosTag> = tagged.iter().map(|t| t.pos).collect();
    chunk_tags(&tags)
}

pub(crate) fn chunk_tags(tags: &[PosTag]) -> Vec<Chunk> {
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let best = [
            (ChunkLabel::PP, match_pp(tags, i)),
            (ChunkLabel::NP, match_np(tags, i)),
            (ChunkLabel::VP, match_vp(tags, i)),
        ]
        .into_iter()
        .filter_map(|(label, end)| end.map(|e| (label, e)))
        .max_by_key(|&(_, e)| e);
        match best {
            Some((label, end)) => {
                chunks.push(Chunk { label, start: i, end });
                i = end;
            }
            None => i += 1,
        }
    }
    chunks
}

fn run(tags: &[PosTag], mut i: usize, accept: impl Fn(PosTag) -> bool) -> usize {
    while i < tags.len() && accept(tags[i]) {
        i += 1;
    }
    i
}

fn match_np(tags: &[PosTag], i: usize) -> Option<usize> {
    let mut j = i;
    if tags.get(j) == Some(&PosTag::Determiner) {
        j += 1;
    }
    j = run(tags, j, |t| matches!(t, PosTag::Adjective | PosTag::Number));
    let end = run(tags, j, PosTag::is_nominal);
    (end > j).then_some(end)
}

fn match_vp(tags: &[PosTag], i: usize) -> Option<usize> {
    let j = run(tags, i, |t| t == PosTag::Adverb);
    let end = run(tags, j, |t| t == PosTag::Verb);
    (end > j).then_some(end)
}

fn match_pp(tags: &[PosTag], i: usize) -> Option<usize> {
    if tags.get(i) != Some(&PosTag::Preposition) {
        return None;
    }
    match_np(tags, i + 1)
}
