//! Tokenization and string normalization shared by linking, tagging and
//! rule matching.

use std::ops::Range;

const LEADING_ARTICLES: [&str; 3] = ["a", "an", "the"];

/// Lowercases and collapses runs of whitespace to a single space.
pub fn collapse(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

/// Canonical form of a terminology: lowercase, single-spaced, no surrounding
/// punctuation and no leading article when more words follow.
pub fn normalize_term(s: &str) -> String {
    let collapsed = collapse(s);
    let trimmed = collapsed.trim_matches(|c: char| !c.is_alphanumeric());
    let mut words = trimmed.split(' ').filter(|w| !w.is_empty()).peekable();
    let mut out = String::with_capacity(trimmed.len());
    if let Some(first) = words.next() {
        if !(LEADING_ARTICLES.contains(&first) && words.peek().is_some()) {
            out.push_str(first);
        }
    }
    for w in words {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

/// A token with its byte span in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub span: Range<usize>,
}

impl Token<'_> {
    pub fn is_word(&self) -> bool {
        self.text.chars().next().is_some_and(char::is_alphanumeric)
    }
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '_' | '.' | '/')
}

/// Splits text into word and punctuation tokens.
///
/// Words are runs of alphanumerics, optionally joined by `- ' _ . /` when
/// the joiner sits between two alphanumerics ("large-scale", "3.5").
/// Every other non-space character is its own token.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphanumeric() {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if cj.is_alphanumeric() {
                    j += 1;
                } else if is_joiner(cj)
                    && chars.get(j + 1).is_some_and(|&(_, n)| n.is_alphanumeric())
                {
                    j += 2;
                } else {
                    break;
                }
            }
            let end = end_of(j);
            tokens.push(Token {
                text: &text[start..end],
                span: start..end,
            });
            i = j;
        } else {
            let end = end_of(i + 1);
            tokens.push(Token {
                text: &text[start..end],
                span: start..end,
            });
            i += 1;
        }
    }
    tokens
}

/// Candidate base forms of a word under crude suffix stripping
/// (`-s`, `-es`, `-ies`, `-ed`, `-ied`, `-ing`, doubled final consonants).
/// The lowercased word itself is always the first candidate.
pub fn lemma_candidates(word: &str) -> Vec<String> {
    let w = word.to_lowercase();
    let mut out = vec![w.clone()];
    let mut push = |s: String| {
        if s.chars().count() >= 2 && !out.contains(&s) {
            out.push(s);
        }
    };
    if let Some(stem) = w.strip_suffix("ies") {
        push(format!("{stem}y"));
    }
    if let Some(stem) = w.strip_suffix("ied") {
        push(format!("{stem}y"));
    }
    if let Some(stem) = w.strip_suffix("es") {
        push(stem.to_string());
    }
    if !w.ends_with("ss") {
        if let Some(stem) = w.strip_suffix('s') {
            push(stem.to_string());
        }
    }
    for suffix in ["ed", "ing"] {
        if let Some(stem) = w.strip_suffix(suffix) {
            push(stem.to_string());
            push(format!("{stem}e"));
            let mut cs = stem.chars().rev();
            if let (Some(a), Some(b)) = (cs.next(), cs.next()) {
                if a == b && !"aeiou".contains(a) {
                    push(stem[..stem.len() - a.len_utf8()].to_string());
                }
            }
        }
    }
    if let Some(stem) = w.strip_suffix('d') {
        if w.ends_with("ed") {
            push(stem.to_string());
        }
    }
    out
}
