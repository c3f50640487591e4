use crate::te_model::PubDate;

use super::ExtractionError;

/// Plain-text article: front matter followed by `== heading` sections.
///
/// ```text
/// did: P04-1054
/// title: Dependency Tree Kernels for Relation Extraction
/// date: 2004-07
/// keywords: relation extraction, tree kernel
///
/// == Abstract
/// We extend previous work on tree kernels ...
/// == 1 Introduction
/// ...
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ArticleText {
    pub did: String,
    pub title: String,
    pub sections: Vec<Section>,
    pub date: PubDate,
    pub declared_keywords: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub heading: String,
    pub body: String,
}

impl ArticleText {
    pub fn parse(text: &str) -> Result<Self, ExtractionError> {
        let article_err = |line: usize, message: String| ExtractionError::Article { line, message };
        let (mut did, mut title, mut date, mut keywords) = (None, None, None, None);
        let mut sections: Vec<Section> = Vec::new();
        let mut body: Vec<&str> = Vec::new();

        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            if let Some(heading) = line.strip_prefix("==") {
                if let Some(last) = sections.last_mut() {
                    last.body = body.join("\n").trim().to_string();
                }
                body.clear();
                sections.push(Section {
                    heading: heading.trim().to_string(),
                    body: String::new(),
                });
                continue;
            }
            if !sections.is_empty() {
                body.push(line);
                continue;
            }
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some((key, value)) = trimmed.split_once(':') else {
                return Err(article_err(
                    line_no,
                    format!("expected `key: value` front matter, found {trimmed:?}"),
                ));
            };
            let value = value.trim();
            match key.trim().to_lowercase().as_str() {
                "did" => did = Some(value.to_string()),
                "title" => title = Some(value.to_string()),
                "date" => {
                    date = Some(
                        value
                            .parse::<PubDate>()
                            .map_err(|e| article_err(line_no, e.to_string()))?,
                    )
                }
                "keywords" => {
                    keywords = Some(
                        value
                            .split(',')
                            .map(str::trim)
                            .filter(|k| !k.is_empty())
                            .map(String::from)
                            .collect(),
                    )
                }
                _ => log::debug!("line {line_no}: ignoring front matter key {key:?}"),
            }
        }
        if let Some(last) = sections.last_mut() {
            last.body = body.join("\n").trim().to_string();
        }

        let did = did
            .filter(|d| !d.is_empty())
            .ok_or(ExtractionError::ArticleMissing("did"))?;
        let title = title
            .filter(|t| !t.is_empty())
            .ok_or(ExtractionError::ArticleMissing("title"))?;
        let date = date.ok_or(ExtractionError::ArticleMissing("date"))?;
        let article = ArticleText {
            did,
            title,
            sections,
            date,
            declared_keywords: keywords,
        };
        article.check()?;
        Ok(article)
    }

    pub fn check(&self) -> Result<(), ExtractionError> {
        if self.title.trim().is_empty() {
            return Err(ExtractionError::ArticleMissing("title"));
        }
        if self.sections.is_empty() {
            return Err(ExtractionError::ArticleMissing("sections"));
        }
        Ok(())
    }

    /// Title and all section text, for building term-document matrices.
    pub fn full_text(&self) -> String {
        let mut out = self.title.clone();
        for s in &self.sections {
            out.push('\n');
            out.push_str(&s.body);
        }
        out
    }
}
