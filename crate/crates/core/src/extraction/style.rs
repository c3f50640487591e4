use crate::te_model::ResearchStyle;
use crate::text::{lemma_candidates, tokenize, Token};

use super::ExtractionError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StylePattern {
    /// Lowercased title fragment tokens.
    Fragment(Vec<String>),
    /// Title opens with an abbreviated name followed by ':' or '-'.
    LeadingAbbreviation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StyleRule {
    pub style: ResearchStyle,
    pub pattern: StylePattern,
    pub priority: i32,
}

/// Parses `style <TAB> pattern|@colon <TAB> priority` lines, sorted by
/// priority with file order kept among equals.
pub fn parse_style_rules(source: &str) -> Result<Vec<StyleRule>, ExtractionError> {
    let mut rules = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let err = |message: String| ExtractionError::RuleFile {
            line: n + 1,
            message,
        };
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [style, pattern, priority] = fields[..] else {
            return Err(err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let style = style
            .parse::<ResearchStyle>()
            .map_err(|e| err(e.to_string()))?;
        let pattern = if pattern.eq_ignore_ascii_case("@colon") {
            StylePattern::LeadingAbbreviation
        } else {
            let tokens: Vec<String> = tokenize(pattern)
                .iter()
                .map(|t| t.text.to_lowercase())
                .collect();
            if tokens.is_empty() {
                return Err(err("empty pattern".into()));
            }
            StylePattern::Fragment(tokens)
        };
        let priority = priority
            .parse::<i32>()
            .map_err(|e| err(format!("bad priority {priority:?}: {e}")))?;
        rules.push(StyleRule {
            style,
            pattern,
            priority,
        });
    }
    rules.sort_by_key(|r| r.priority);
    Ok(rules)
}

fn is_abbreviation(word: &str) -> bool {
    let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
    let upper = letters.iter().filter(|c| c.is_uppercase()).count();
    !letters.is_empty() && (upper == letters.len() || upper >= 2)
}

fn leading_abbreviation(tokens: &[Token<'_>]) -> bool {
    match tokens {
        [first, sep, ..] => {
            first.is_word()
                && is_abbreviation(first.text)
                && matches!(sep.text, ":" | "-" | "\u{2014}" | "\u{2013}")
        }
        _ => false,
    }
}

fn fragment_matches(words: &[Vec<String>], fragment: &[String]) -> bool {
    let n = fragment.len();
    (0..(words.len() + 1).saturating_sub(n)).any(|i| {
        fragment
            .iter()
            .enumerate()
            .all(|(j, f)| words[i + j].iter().any(|cand| cand == f))
    })
}

/// First rule in priority order that matches decides; IssueSolution otherwise.
pub fn classify_style(title: &str, rules: &[StyleRule]) -> ResearchStyle {
    let tokens = tokenize(title);
    // each title token with its lowercase form first, then stripped forms
    let words: Vec<Vec<String>> = tokens.iter().map(|t| lemma_candidates(t.text)).collect();
    let mut ordered: Vec<&StyleRule> = rules.iter().collect();
    ordered.sort_by_key(|r| r.priority);
    ordered
        .into_iter()
        .find(|rule| match &rule.pattern {
            StylePattern::LeadingAbbreviation => leading_abbreviation(&tokens),
            StylePattern::Fragment(f) => fragment_matches(&words, f),
        })
        .map_or(ResearchStyle::IssueSolution, |r| r.style)
}
