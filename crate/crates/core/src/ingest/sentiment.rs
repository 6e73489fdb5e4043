use crate::error::{Error, Result};
use crate::ingest::Sentiment;

/// What a single 1–10 category vote says about the comment's sentiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoteSignal {
    /// 7 or higher.
    Positive,
    /// 3 or lower.
    Negative,
    /// 4 through 6: leaves the text-derived sentiment alone.
    Ambiguous,
}

pub fn classify_vote(rating: u8) -> Result<VoteSignal> {
    match rating {
        7..=10 => Ok(VoteSignal::Positive),
        4..=6 => Ok(VoteSignal::Ambiguous),
        1..=3 => Ok(VoteSignal::Negative),
        other => Err(Error::VoteOutOfRange(other.into())),
    }
}

/// Final sentiment after letting the category vote override the text label.
pub fn apply_vote_override(base: Sentiment, rating: Option<u8>) -> Result<Sentiment> {
    let Some(rating) = rating else {
        return Ok(base);
    };
    Ok(match classify_vote(rating)? {
        VoteSignal::Positive => Sentiment::Positive,
        VoteSignal::Negative => Sentiment::Negative,
        VoteSignal::Ambiguous => base,
    })
}

/// Text normalization applied to comments before any other processing.
pub trait TextNormalizer: Send + Sync {
    fn normalize(&self, text: &str) -> String;
}

/// Leaves text untouched.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityNormalizer;

impl TextNormalizer for IdentityNormalizer {
    fn normalize(&self, text: &str) -> String {
        text.to_string()
    }
}
