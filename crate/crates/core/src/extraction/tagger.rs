//! Lexicon and suffix based coarse POS tagging with a `DET? ADJ* NOUN+`
//! noun phrase chunker.

use std::ops::Range;

use crate::text::{lemma_candidates, tokenize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Det,
    Prep,
    Punct,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub surface: String,
    pub tag: PosTag,
}

impl TaggedToken {
    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<TaggedToken>,
    /// Non-overlapping token ranges, each ending in a noun.
    pub np_spans: Vec<Range<usize>>,
}

impl TaggedSentence {
    pub fn span_text(&self, span: Range<usize>) -> String {
        self.tokens[span]
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The span with a leading determiner dropped.
    pub fn strip_determiner(&self, span: Range<usize>) -> Range<usize> {
        if span.len() > 1 && self.tokens[span.start].tag == PosTag::Det {
            span.start + 1..span.end
        } else {
            span
        }
    }

    /// Noun phrase texts without leading determiners.
    pub fn noun_phrases(&self) -> Vec<String> {
        self.np_spans
            .iter()
            .map(|s| self.span_text(self.strip_determiner(s.clone())))
            .collect()
    }
}

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "our", "its", "their", "each", "every",
    "some", "any", "all", "both", "no", "his", "her", "my", "your", "another", "such",
];

const PREPOSITIONS: &[&str] = &[
    "of", "for", "in", "on", "at", "by", "with", "from", "to", "into", "via", "through", "over",
    "under", "between", "among", "about", "against", "during", "without", "within", "across",
    "toward", "towards", "upon", "as", "than", "onto", "per", "beyond", "behind", "after",
    "before",
];

const PRONOUNS: &[&str] = &[
    "we", "they", "i", "you", "he", "she", "it", "us", "them", "one",
];

const OTHER_WORDS: &[&str] = &[
    "and",
    "or",
    "but",
    "nor",
    "not",
    "also",
    "then",
    "however",
    "very",
    "more",
    "most",
    "only",
    "well",
    "here",
    "there",
    "which",
    "who",
    "whom",
    "whose",
    "how",
    "what",
    "when",
    "where",
    "whether",
    "if",
    "so",
    "while",
    "thus",
    "hence",
    "therefore",
    "et",
    "al",
    "etc",
    "e.g",
    "i.e",
    "further",
    "furthermore",
    "moreover",
    "both",
    "either",
    "neither",
    "much",
    "many",
    "few",
    "less",
    "even",
    "still",
    "yet",
    "already",
];

const AUXILIARIES: &[&str] = &[
    "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "do", "does",
    "did", "can", "could", "will", "would", "shall", "should", "may", "might", "must",
];

const ADJECTIVES: &[&str] = &[
    "new",
    "novel",
    "fast",
    "large",
    "small",
    "simple",
    "efficient",
    "effective",
    "robust",
    "different",
    "various",
    "several",
    "good",
    "better",
    "best",
    "high",
    "low",
    "open",
    "supervised",
    "unsupervised",
    "semi-supervised",
    "weakly-supervised",
    "annotated",
    "labeled",
    "labelled",
    "unlabeled",
    "automatic",
    "free",
    "hard",
    "deep",
    "shallow",
    "first",
    "second",
    "third",
    "same",
    "other",
    "existing",
    "previous",
    "recent",
    "key",
    "main",
    "early",
];

/// Verbs recognised through any of their inflected forms.
const VERBS: &[&str] = &[
    "propose",
    "present",
    "describe",
    "introduce",
    "develop",
    "design",
    "implement",
    "evaluate",
    "survey",
    "analyze",
    "analyse",
    "focus",
    "address",
    "investigate",
    "compare",
    "study",
    "build",
    "construct",
    "apply",
    "explore",
    "examine",
    "report",
    "demonstrate",
    "show",
    "extend",
    "improve",
    "employ",
    "use",
    "exploit",
    "adopt",
    "aim",
    "tackle",
    "solve",
    "review",
    "discuss",
    "outline",
    "define",
    "formulate",
    "suggest",
    "offer",
    "leverage",
    "utilize",
    "achieve",
    "obtain",
    "outperform",
    "perform",
    "provide",
    "allow",
    "enable",
    "require",
    "consider",
    "base",
    "take",
    "make",
    "find",
    "give",
    "yield",
    "call",
    "incorporate",
    "combine",
    "integrate",
    "capture",
    "measure",
    "compute",
    "calculate",
    "learn",
    "train",
    "predict",
    "identify",
    "extract",
    "generate",
    "produce",
    "represent",
    "obtain",
    "include",
    "contain",
    "reduce",
    "increase",
    "describe",
];

/// Nouns whose endings would otherwise read as adjectives or verbs.
const NOUN_EXCEPTIONS: &[&str] = &[
    "retrieval",
    "proposal",
    "approval",
    "signal",
    "journal",
    "interval",
    "tutorial",
    "manual",
    "trial",
    "removal",
    "arrival",
    "survival",
    "terminal",
    "material",
    "potential",
    "individual",
    "principal",
    "renewal",
    "animal",
    "capital",
    "hospital",
    "total",
    "objective",
    "alternative",
    "initiative",
    "narrative",
    "directive",
    "topic",
    "logic",
    "music",
    "rhetoric",
    "arithmetic",
    "heuristic",
    "heuristics",
    "classic",
    "need",
    "speed",
    "seed",
    "feed",
    "corpus",
    "learning",
    "training",
    "parsing",
    "tagging",
    "processing",
    "understanding",
    "clustering",
    "matching",
    "labeling",
    "labelling",
    "modeling",
    "modelling",
    "embedding",
    "embeddings",
    "ranking",
    "mining",
    "reasoning",
    "filtering",
    "indexing",
    "pooling",
    "smoothing",
    "planning",
    "meaning",
    "setting",
    "settings",
    "study",
    "studies",
    "survey",
    "surveys",
    "design",
    "use",
    "report",
    "review",
    "focus",
    "show",
    "measure",
    "measures",
    "model",
    "models",
    "base",
    "call",
    "approach",
    "approaches",
    "process",
    "set",
];

fn in_list(list: &[&str], w: &str) -> bool {
    list.contains(&w)
}

fn is_verb_form(w: &str) -> bool {
    lemma_candidates(w).iter().any(|l| in_list(VERBS, l))
}

fn suffix_tag(w: &str) -> Option<PosTag> {
    const NOUN_SUFFIXES: [&str; 9] = [
        "tion", "sion", "ment", "ity", "ness", "ism", "ance", "ence", "ship",
    ];
    const ADJ_SUFFIXES: [&str; 8] = ["ous", "al", "ive", "ful", "less", "able", "ible", "ic"];
    const VERB_SUFFIXES: [&str; 6] = ["ize", "izes", "ise", "ises", "ed", "ify"];
    if w.len() > 4 && w.ends_with("ly") {
        return Some(PosTag::Other);
    }
    if NOUN_SUFFIXES
        .iter()
        .any(|s| w.len() > s.len() + 1 && w.ends_with(s))
    {
        return Some(PosTag::Noun);
    }
    if w.len() > 4 && VERB_SUFFIXES.iter().any(|s| w.ends_with(s)) {
        return Some(PosTag::Verb);
    }
    if ADJ_SUFFIXES
        .iter()
        .any(|s| w.len() > s.len() + 2 && w.ends_with(s))
    {
        return Some(PosTag::Adj);
    }
    None
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Origin {
    Lexicon,
    Suffix,
    Default,
}

fn tag_word(w: &str, prev: Option<(&str, PosTag)>) -> (PosTag, Origin) {
    let first = w.chars().next().unwrap_or(' ');
    if !first.is_alphanumeric() {
        return (PosTag::Punct, Origin::Lexicon);
    }
    if w.chars()
        .all(|c| c.is_ascii_digit() || c == '.' || c == ',')
    {
        return (PosTag::Other, Origin::Lexicon);
    }
    for (list, tag) in [
        (DETERMINERS, PosTag::Det),
        (PREPOSITIONS, PosTag::Prep),
        (PRONOUNS, PosTag::Other),
        (OTHER_WORDS, PosTag::Other),
        (AUXILIARIES, PosTag::Verb),
        (ADJECTIVES, PosTag::Adj),
    ] {
        if in_list(list, w) {
            return (tag, Origin::Lexicon);
        }
    }
    let after_modifier = matches!(prev, Some((_, PosTag::Det | PosTag::Adj)));
    let after_subject = matches!(prev, Some((p, _)) if matches!(p, "we" | "they" | "i" | "you"));
    if after_subject {
        return (PosTag::Verb, Origin::Lexicon);
    }
    if in_list(NOUN_EXCEPTIONS, w) {
        return (PosTag::Noun, Origin::Lexicon);
    }
    if is_verb_form(w) {
        return if after_modifier {
            (PosTag::Noun, Origin::Lexicon)
        } else {
            (PosTag::Verb, Origin::Lexicon)
        };
    }
    match suffix_tag(w) {
        Some(PosTag::Verb) if after_modifier && w.ends_with("ed") => (PosTag::Adj, Origin::Suffix),
        Some(tag) => (tag, Origin::Suffix),
        None => (PosTag::Noun, Origin::Default),
    }
}

/// Tags every token and chunks maximal `DET? ADJ* NOUN+` noun phrases.
pub fn tag_and_chunk(sentence: &str) -> TaggedSentence {
    let raw = tokenize(sentence);
    let mut tokens: Vec<TaggedToken> = Vec::with_capacity(raw.len());
    let mut origins = Vec::with_capacity(raw.len());
    let mut prev_lower = String::new();
    for (i, tok) in raw.iter().enumerate() {
        let lower = tok.text.to_lowercase();
        let prev = (i > 0).then(|| (prev_lower.as_str(), tokens[i - 1].tag));
        let (tag, origin) = tag_word(&lower, prev);
        tokens.push(TaggedToken {
            surface: tok.text.to_string(),
            tag,
        });
        origins.push(origin);
        prev_lower = lower;
    }
    // a suffix-derived adjective that modifies nothing is a noun ("information retrieval")
    for i in (0..tokens.len()).rev() {
        if tokens[i].tag == PosTag::Adj && origins[i] == Origin::Suffix {
            let next = tokens.get(i + 1).map(|t| t.tag);
            if !matches!(next, Some(PosTag::Noun | PosTag::Adj)) {
                tokens[i].tag = PosTag::Noun;
            }
        }
    }
    let np_spans = chunk(&tokens);
    TaggedSentence { tokens, np_spans }
}

fn chunk(tokens: &[TaggedToken]) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut j = i;
        if tokens[j].tag == PosTag::Det {
            j += 1;
        }
        while j < tokens.len() && tokens[j].tag == PosTag::Adj {
            j += 1;
        }
        let nouns_start = j;
        while j < tokens.len() && tokens[j].tag == PosTag::Noun {
            j += 1;
        }
        if j > nouns_start {
            spans.push(i..j);
            i = j;
        } else {
            i += 1;
        }
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nps(s: &str) -> Vec<String> {
        let t = tag_and_chunk(s);
        t.np_spans
            .iter()
            .map(|sp| t.span_text(sp.clone()))
            .collect()
    }

    #[test]
    fn worked_sentence_noun_phrases() {
        let got = nps("we propose a supervised machine learning approach for relation extraction");
        assert!(
            got.contains(&"a supervised machine learning approach".to_string()),
            "{got:?}"
        );
        assert!(got.contains(&"relation extraction".to_string()), "{got:?}");
    }

    #[test]
    fn determiner_alone_is_not_a_phrase() {
        assert!(nps("the").is_empty());
    }

    #[test]
    fn adjective_noun() {
        assert_eq!(nps("fast parsers"), ["fast parsers"]);
    }

    #[test]
    fn al_suffix_head_noun_stays_in_phrase() {
        assert_eq!(
            nps("multilingual information retrieval"),
            ["multilingual information retrieval"]
        );
    }

    #[test]
    fn tags_of_worked_sentence() {
        let t = tag_and_chunk("In this paper, we propose a supervised approach.");
        let tags: Vec<PosTag> = t.tokens.iter().map(|t| t.tag).collect();
        use PosTag::*;
        assert_eq!(
            tags,
            [Prep, Det, Noun, Punct, Other, Verb, Det, Adj, Noun, Punct]
        );
    }

    #[test]
    fn verb_after_determiner_reads_as_noun() {
        assert_eq!(
            nps("this survey presents parsing"),
            ["this survey", "parsing"]
        );
    }

    proptest! {
        #[test]
        fn spans_are_disjoint_and_end_in_nouns(s in "[a-z ,.]{0,60}") {
            let t = tag_and_chunk(&s);
            let mut last_end = 0;
            for sp in &t.np_spans {
                prop_assert!(sp.start >= last_end && sp.start < sp.end && sp.end <= t.tokens.len());
                prop_assert_eq!(t.tokens[sp.end - 1].tag, PosTag::Noun);
                last_end = sp.end;
            }
        }
    }
}
