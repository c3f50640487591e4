use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::te_model::Terminology;
use crate::text::tokenize;

use super::tagger::{PosTag, TaggedSentence};
use super::ExtractionError;

/// The topic event items recovered by pattern matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ItemKind {
    Target,
    Methodology,
}

impl FromStr for ItemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "target" => Ok(ItemKind::Target),
            "methodology" => Ok(ItemKind::Methodology),
            other => Err(format!(
                "unknown element {other:?}, expected Target or Methodology"
            )),
        }
    }
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ItemKind::Target => "Target",
            ItemKind::Methodology => "Methodology",
        })
    }
}

/// Whether the pattern sits before or after the item it selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    Pre,
    Post,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRule {
    pub element: ItemKind,
    pub position: Position,
    /// Lowercased pattern tokens.
    pub pattern: Vec<String>,
    /// Lower wins.
    pub priority: i32,
}

impl PatternRule {
    pub fn new(element: ItemKind, position: Position, pattern: &str, priority: i32) -> Self {
        let pattern = tokenize(pattern)
            .iter()
            .map(|t| t.text.to_lowercase())
            .collect();
        Self {
            element,
            position,
            pattern,
            priority,
        }
    }
}

/// Parses `element <TAB> pre|post <TAB> pattern <TAB> priority` lines.
/// The result is sorted by priority; equal priorities keep file order.
pub fn parse_pattern_rules(source: &str) -> Result<Vec<PatternRule>, ExtractionError> {
    let mut rules = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line_no = n + 1;
        let err = |message: String| ExtractionError::RuleFile {
            line: line_no,
            message,
        };
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [element, position, pattern, priority] = fields[..] else {
            return Err(err(format!(
                "expected 4 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let element = element.parse::<ItemKind>().map_err(err)?;
        let position = match position.to_lowercase().as_str() {
            "pre" => Position::Pre,
            "post" => Position::Post,
            other => {
                return Err(err(format!(
                    "position must be pre or post, found {other:?}"
                )))
            }
        };
        let priority = priority
            .parse::<i32>()
            .map_err(|e| err(format!("bad priority {priority:?}: {e}")))?;
        let rule = PatternRule::new(element, position, pattern, priority);
        if rule.pattern.is_empty() {
            return Err(err("empty pattern".into()));
        }
        rules.push(rule);
    }
    rules.sort_by_key(|r| r.priority);
    Ok(rules)
}

/// A firing rule together with the token span it selected.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementMatch {
    pub rule: PatternRule,
    pub span: Range<usize>,
    pub terminology: Terminology,
}

fn occurrences<'a>(lower: &'a [String], pattern: &'a [String]) -> impl Iterator<Item = usize> + 'a {
    let n = pattern.len();
    (0..(lower.len() + 1).saturating_sub(n)).filter(move |&i| lower[i..i + n] == *pattern)
}

fn fire(sentence: &TaggedSentence, lower: &[String], rule: &PatternRule) -> Option<Range<usize>> {
    let tokens = &sentence.tokens;
    let n = rule.pattern.len();
    occurrences(lower, &rule.pattern).find_map(|at| match rule.position {
        Position::Pre => {
            let end = at + n;
            sentence.np_spans.iter().find_map(|sp| {
                let adjacent =
                    sp.start == end || (sp.start + 1 == end && tokens[sp.start].tag == PosTag::Det);
                (adjacent && sp.end > end.max(sp.start)).then(|| sp.start.max(end)..sp.end)
            })
        }
        Position::Post => sentence.np_spans.iter().find_map(|sp| {
            // the pattern follows the phrase, or forms its trailing tokens
            if sp.end == at || (sp.start < at && at < sp.end && at + n >= sp.end) {
                let cand = sp.start..at;
                let cand = sentence.strip_determiner(cand);
                (!cand.is_empty() && tokens[cand.end - 1].tag == PosTag::Noun).then_some(cand)
            } else {
                None
            }
        }),
    })
}

/// First rule for `element` (in priority order) that selects a noun phrase.
pub fn match_element_detailed(
    sentence: &TaggedSentence,
    rules: &[PatternRule],
    element: ItemKind,
) -> Option<ElementMatch> {
    let lower: Vec<String> = sentence.tokens.iter().map(|t| t.lower()).collect();
    let mut ordered: Vec<&PatternRule> = rules.iter().filter(|r| r.element == element).collect();
    ordered.sort_by_key(|r| r.priority);
    ordered.into_iter().find_map(|rule| {
        let span = sentence.strip_determiner(fire(sentence, &lower, rule)?);
        if sentence.tokens[span.start].tag == PosTag::Det {
            return None;
        }
        let terminology = Terminology::new(sentence.span_text(span.clone()));
        Some(ElementMatch {
            rule: rule.clone(),
            span,
            terminology,
        })
    })
}

pub fn match_element(
    sentence: &TaggedSentence,
    rules: &[PatternRule],
    element: ItemKind,
) -> Option<Terminology> {
    match_element_detailed(sentence, rules, element).map(|m| m.terminology)
}

#[cfg(test)]
mod tests {
    use super::super::tagger::tag_and_chunk;
    use super::*;
    use crate::resources::PATTERNS;

    const WORKED: &str =
        "In this paper, we propose a supervised machine learning approach for relation extraction";

    fn rules() -> Vec<PatternRule> {
        parse_pattern_rules(PATTERNS).unwrap()
    }

    #[test]
    fn worked_sentence_target() {
        let s = tag_and_chunk(WORKED);
        let m = match_element_detailed(&s, &rules(), ItemKind::Target).unwrap();
        assert_eq!(m.terminology.surface, "relation extraction");
        assert_eq!(m.rule.pattern, ["approach", "for"]);
    }

    #[test]
    fn worked_sentence_methodology() {
        let s = tag_and_chunk(WORKED);
        let m = match_element(&s, &rules(), ItemKind::Methodology).unwrap();
        assert_eq!(m.surface, "supervised machine learning approach");
    }

    #[test]
    fn single_rule_methodology() {
        let s = tag_and_chunk(WORKED);
        let only = [PatternRule::new(
            ItemKind::Methodology,
            Position::Pre,
            "propose a",
            1,
        )];
        assert_eq!(
            match_element(&s, &only, ItemKind::Methodology)
                .unwrap()
                .surface,
            "supervised machine learning approach"
        );
    }

    #[test]
    fn no_adjacent_rule() {
        let s = tag_and_chunk("parsers are fast and small");
        assert!(match_element(&s, &rules(), ItemKind::Target).is_none());
        assert!(match_element(&s, &rules(), ItemKind::Methodology).is_none());
    }

    #[test]
    fn priority_beats_position() {
        let s = tag_and_chunk(
            "we address the problem of word segmentation with a framework for parsing",
        );
        assert_eq!(
            match_element(&s, &rules(), ItemKind::Target)
                .unwrap()
                .surface,
            "word segmentation"
        );
    }

    #[test]
    fn post_pattern_inside_phrase() {
        let s = tag_and_chunk("we describe a named entity recognition system for news");
        let only = [PatternRule::new(
            ItemKind::Target,
            Position::Post,
            "system",
            1,
        )];
        assert_eq!(
            match_element(&s, &only, ItemKind::Target).unwrap().surface,
            "named entity recognition"
        );
    }

    #[test]
    fn post_pattern_after_phrase() {
        let s = tag_and_chunk("a graph kernel based method");
        let only = [PatternRule::new(
            ItemKind::Methodology,
            Position::Post,
            "based",
            1,
        )];
        assert_eq!(
            match_element(&s, &only, ItemKind::Methodology)
                .unwrap()
                .surface,
            "graph kernel"
        );
    }

    #[test]
    fn rule_file_errors_carry_line() {
        let bad = "# c\nTarget\tpre\tproblem of\tx\n";
        assert!(matches!(
            parse_pattern_rules(bad),
            Err(ExtractionError::RuleFile { line: 2, .. })
        ));
        assert!(matches!(
            parse_pattern_rules("Goal\tpre\tx\t1"),
            Err(ExtractionError::RuleFile { line: 1, .. })
        ));
        assert!(matches!(
            parse_pattern_rules("Target\tmid\tx\t1"),
            Err(ExtractionError::RuleFile { line: 1, .. })
        ));
    }

    #[test]
    fn matches_stay_inside_phrases() {
        let rules = rules();
        for text in [
            WORKED,
            "we tackle the task of machine translation using a phrase based model",
            "this survey on parsing",
        ] {
            let s = tag_and_chunk(text);
            for kind in [ItemKind::Target, ItemKind::Methodology] {
                if let Some(m) = match_element_detailed(&s, &rules, kind) {
                    assert!(
                        s.np_spans
                            .iter()
                            .any(|sp| sp.start <= m.span.start && m.span.end <= sp.end),
                        "{text}"
                    );
                }
            }
        }
    }
}
