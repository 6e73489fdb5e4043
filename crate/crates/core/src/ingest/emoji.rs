//! Emoji-to-phrase replacement for comment text.
//!
//! Every mapped emoji is deleted from the comment body and its phrase is
//! appended to the end of the comment, one phrase per occurrence, joined by
//! `" و "` ("and"). Matching walks grapheme clusters and prefers the longest
//! dictionary key, so ZWJ sequences and skin-tone variants win over their
//! single-codepoint prefixes. A trailing emoji presentation selector
//! (U+FE0F) on the text side is ignored when looking up a key.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use unicode_segmentation::UnicodeSegmentation;

use crate::error::{Error, Result};

/// Joins appended phrases.
pub const PHRASE_SEPARATOR: &str = " و ";

const PRESENTATION_SELECTOR: char = '\u{FE0F}';

/// Emoji → replacement phrase. Keys are unique and phrases non-empty.
#[derive(Debug, Clone, Default)]
pub struct EmojiDictionary {
    phrases: HashMap<String, String>,
    longest_key: usize,
}

impl EmojiDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, emoji: &str, phrase: &str) -> Result<()> {
        let key = strip_selector(emoji);
        if key.is_empty() || phrase.trim().is_empty() {
            return Err(Error::InvalidParameter(format!(
                "emoji dictionary entry {emoji:?} → {phrase:?} is empty"
            )));
        }
        if self.phrases.contains_key(&key) {
            return Err(Error::InvalidParameter(format!(
                "duplicate emoji key {emoji:?}"
            )));
        }
        self.longest_key = self.longest_key.max(key.graphemes(true).count());
        self.phrases.insert(key, phrase.trim().to_string());
        Ok(())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut dict = Self::new();
        for (emoji, phrase) in pairs {
            dict.insert(emoji, phrase)?;
        }
        Ok(dict)
    }

    /// Loads a two-column `emoji<TAB>phrase` file. Blank lines are skipped.
    pub fn read_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse_tsv(file, &path.display().to_string())
    }

    pub fn parse_tsv<R: Read>(reader: R, source: &str) -> Result<Self> {
        let mut dict = Self::new();
        for (n, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |message: String| Error::MalformedRow {
                path: source.to_string(),
                line: n as u64 + 1,
                message,
            };
            let (emoji, phrase) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected emoji<TAB>phrase".to_string()))?;
            dict.insert(emoji.trim(), phrase)
                .map_err(|e| malformed(e.to_string()))?;
        }
        Ok(dict)
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn phrase(&self, emoji: &str) -> Option<&str> {
        self.phrases.get(&strip_selector(emoji)).map(String::as_str)
    }

    /// Splits `text` into its body (mapped emoji removed) and the phrases of
    /// the removed emoji in order of occurrence.
    pub fn extract(&self, text: &str) -> Extraction {
        let mut body = String::with_capacity(text.len());
        let mut phrases = Vec::new();
        let bounds: Vec<usize> = text
            .grapheme_indices(true)
            .map(|(i, _)| i)
            .chain(std::iter::once(text.len()))
            .collect();

        let mut g = 0;
        while g + 1 < bounds.len() {
            let start = bounds[g];
            let mut matched = None;
            let max_span = self.longest_key.min(bounds.len() - 1 - g);
            for span in (1..=max_span).rev() {
                if let Some(phrase) = self.phrase(&text[start..bounds[g + span]]) {
                    matched = Some((span, phrase));
                    break;
                }
            }
            match matched {
                Some((span, phrase)) => {
                    phrases.push(phrase.to_string());
                    g += span;
                }
                None => {
                    body.push_str(&text[start..bounds[g + 1]]);
                    g += 1;
                }
            }
        }
        Extraction { body, phrases }
    }

    /// Removes mapped emoji from `text` and appends their phrases.
    pub fn map_emojis(&self, text: &str) -> String {
        self.extract(text).into_text()
    }
}

/// Result of [`EmojiDictionary::extract`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub body: String,
    pub phrases: Vec<String>,
}

impl Extraction {
    /// Body followed by the joined phrases. A single space separates them
    /// unless the body is empty or already ends in whitespace.
    pub fn into_text(self) -> String {
        if self.phrases.is_empty() {
            return self.body;
        }
        let mut out = self.body;
        if !out.is_empty() && !out.ends_with(char::is_whitespace) {
            out.push(' ');
        }
        out.push_str(&self.phrases.join(PHRASE_SEPARATOR));
        out
    }
}

/// Free-function form of [`EmojiDictionary::map_emojis`].
pub fn map_emojis(text: &str, dict: &EmojiDictionary) -> String {
    dict.map_emojis(text)
}

fn strip_selector(s: &str) -> String {
    s.chars().filter(|&c| c != PRESENTATION_SELECTOR).collect()
}
