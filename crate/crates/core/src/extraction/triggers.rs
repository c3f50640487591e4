use std::collections::HashSet;

use crate::text::lemma_candidates;

use super::tagger::TaggedSentence;
use super::ExtractionError;

/// Base forms of words that mark a sentence as carrying topic event items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerLexicon {
    words: HashSet<String>,
}

impl TriggerLexicon {
    pub fn new<I, S>(words: I) -> Result<Self, ExtractionError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: HashSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        if words.is_empty() {
            return Err(ExtractionError::EmptyLexicon);
        }
        Ok(Self { words })
    }

    /// One word per line; `#` starts a comment line.
    pub fn parse(source: &str) -> Result<Self, ExtractionError> {
        Self::new(
            source
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn matches(&self, word: &str) -> bool {
        lemma_candidates(word)
            .iter()
            .any(|l| self.words.contains(l))
    }
}

/// Token positions whose surface or stripped form is in the lexicon.
pub fn find_triggers(sentence: &TaggedSentence, lexicon: &TriggerLexicon) -> Vec<usize> {
    sentence
        .tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            t.surface.chars().next().is_some_and(char::is_alphabetic) && lexicon.matches(&t.surface)
        })
        .map(|(i, _)| i)
        .collect()
}
