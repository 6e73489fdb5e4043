//! Review ingestion: CSV parsing, emoji replacement, the vote override,
//! engagement filtering, and the user–item bipartite graph.

mod bipartite;
mod emoji;
mod record;
mod sentiment;

pub use bipartite::{build_bipartite, BipartiteGraph, IncidenceRule};
pub use emoji::{map_emojis, EmojiDictionary, Extraction, PHRASE_SEPARATOR};
pub use record::{
    deduplicate, filter_low_engagement, parse_reviews, prefixed, read_reviews, write_reviews,
    write_reviews_to, Category, ReviewRecord, Sentiment, Votes, ITEM_PREFIX, USER_PREFIX,
};
pub use sentiment::{
    apply_vote_override, classify_vote, IdentityNormalizer, TextNormalizer, VoteSignal,
};

/// Applies the normalizer and, when given, emoji replacement to every comment.
pub fn normalize_comments(
    records: &mut [ReviewRecord],
    normalizer: &dyn TextNormalizer,
    emoji: Option<&EmojiDictionary>,
) {
    for r in records {
        let text = normalizer.normalize(&r.comment);
        r.comment = match emoji {
            Some(dict) => dict.map_emojis(&text),
            None => text,
        };
    }
}
