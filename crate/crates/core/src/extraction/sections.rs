use super::article::ArticleText;

/// Which part of the article a selected text block came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionKind {
    Title,
    Abstract,
    Introduction,
    Conclusion,
    /// First section, used when no heading is recognised.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectedSection<'a> {
    pub kind: SectionKind,
    pub text: &'a str,
}

const ROMAN: [&str; 12] = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii",
];

/// Lowercases a heading and strips leading numbering ("1.", "2.3", "IV.").
pub fn normalize_heading(heading: &str) -> String {
    let lower = heading.trim().to_lowercase();
    let mut rest =
        lower.trim_start_matches(|c: char| c.is_ascii_digit() || c == '.' || c.is_whitespace());
    if let Some((first, tail)) = rest.split_once('.') {
        if ROMAN.contains(&first.trim()) {
            rest = tail;
        }
    }
    rest.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn classify_heading(heading: &str) -> Option<SectionKind> {
    let h = normalize_heading(heading);
    if h == "abstract" {
        Some(SectionKind::Abstract)
    } else if h == "introduction" {
        Some(SectionKind::Introduction)
    } else if h == "conclusion"
        || h == "conclusions"
        || h.starts_with("conclusion ")
        || h.starts_with("conclusions ")
    {
        Some(SectionKind::Conclusion)
    } else {
        None
    }
}

/// Title plus the abstract, introduction and conclusion bodies, in
/// document order. Falls back to title plus first section when no
/// heading is recognised.
pub fn select_sections(article: &ArticleText) -> Vec<SelectedSection<'_>> {
    let mut out = vec![SelectedSection {
        kind: SectionKind::Title,
        text: &article.title,
    }];
    for s in &article.sections {
        if let Some(kind) = classify_heading(&s.heading) {
            out.push(SelectedSection {
                kind,
                text: &s.body,
            });
        }
    }
    if out.len() == 1 {
        if let Some(first) = article.sections.first() {
            out.push(SelectedSection {
                kind: SectionKind::Fallback,
                text: &first.body,
            });
        }
    }
    out
}
