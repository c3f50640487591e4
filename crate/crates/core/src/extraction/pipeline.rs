use std::collections::HashMap;

use crate::ontology::{NodeIx, OntologyGraph};
use crate::te_model::{Terminology, TopicEvent};

use super::domain::induce_domain;
use super::patterns::{match_element, ItemKind};
use super::sections::select_sections;
use super::sentences::split_sentences;
use super::style::classify_style;
use super::tagger::tag_and_chunk;
use super::triggers::find_triggers;
use super::{ArticleText, ExtractionError, Resources};

/// Keywords kept when the article declares none.
pub const KEYWORD_LIMIT: usize = 5;

fn link_term(g: &OntologyGraph, term: Terminology) -> Terminology {
    let link = g.link(&term.canonical);
    if link.is_confident() {
        let id = g.id(link.node).to_string();
        term.with_concept(id)
    } else {
        term
    }
}

/// Runs the full pipeline on one article.
pub fn extract_topic_event(
    article: &ArticleText,
    res: &Resources,
) -> Result<TopicEvent, ExtractionError> {
    article.check()?;
    let g = &*res.ontology;
    let need_keywords = article.declared_keywords.is_none();
    let mut target: Option<Terminology> = None;
    let mut methodology: Option<Terminology> = None;
    // node -> (count, first seen)
    let mut phrase_nodes: HashMap<NodeIx, (usize, usize)> = HashMap::new();
    let mut seen = 0;

    for section in select_sections(article) {
        for sentence in split_sentences(section.text) {
            let tagged = tag_and_chunk(sentence);
            if need_keywords {
                for np in tagged.noun_phrases() {
                    let link = g.link(&np);
                    if link.is_confident() && link.node != g.root() {
                        let entry = phrase_nodes.entry(link.node).or_insert((0, seen));
                        entry.0 += 1;
                        seen += 1;
                    }
                }
            }
            if (target.is_some() && methodology.is_some())
                || find_triggers(&tagged, &res.triggers).is_empty()
            {
                continue;
            }
            if target.is_none() {
                target = match_element(&tagged, &res.patterns, ItemKind::Target);
            }
            if methodology.is_none() {
                methodology = match_element(&tagged, &res.patterns, ItemKind::Methodology);
            }
        }
    }

    let target = link_term(g, target.ok_or(ExtractionError::TargetNotFound)?);
    let domain_ix = induce_domain(g, &target, &res.domain_candidates)?;
    let domain = Terminology::linked(g.label(domain_ix), g.id(domain_ix));

    let keywords = match &article.declared_keywords {
        Some(declared) => declared
            .iter()
            .map(|k| link_term(g, Terminology::new(k.as_str())))
            .collect(),
        None => {
            let mut ranked: Vec<(NodeIx, (usize, usize))> = phrase_nodes.into_iter().collect();
            ranked.sort_by(|(_, (ca, fa)), (_, (cb, fb))| cb.cmp(ca).then(fa.cmp(fb)));
            ranked
                .into_iter()
                .take(KEYWORD_LIMIT)
                .map(|(ix, _)| Terminology::linked(g.label(ix), g.id(ix)))
                .collect()
        }
    };

    let te = TopicEvent {
        eid: format!("te-{}", article.did),
        did: article.did.clone(),
        target: vec![target],
        methodology: methodology.map(|m| link_term(g, m)).into_iter().collect(),
        domain,
        style: classify_style(&article.title, &res.style_rules),
        keywords,
        date: article.date,
        extras: Default::default(),
    };
    let report = te.validate();
    if report.is_valid() {
        Ok(te)
    } else {
        Err(ExtractionError::Invalid(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::te_model::{PubDate, ResearchStyle};

    const ARTICLE: &str = "\
did: P1
title: Kernel Methods for Relation Extraction
date: 2003-02

== Abstract
In this paper, we propose a supervised machine learning approach for relation extraction. The approach uses tree kernels.
== 1 Introduction
Information extraction is an important task. Relation extraction finds relations between entities.
";

    #[test]
    fn worked_example() {
        let res = Resources::embedded().unwrap();
        let te = extract_topic_event(&ArticleText::parse(ARTICLE).unwrap(), &res).unwrap();
        assert_eq!(te.eid, "te-P1");
        assert_eq!(te.target[0].surface, "relation extraction");
        assert_eq!(
            te.target[0].concept_id.as_deref(),
            Some("RelationExtraction")
        );
        assert_eq!(
            te.methodology[0].surface,
            "supervised machine learning approach"
        );
        assert_eq!(
            te.domain.concept_id.as_deref(),
            Some("InformationExtraction")
        );
        assert_eq!(te.style, ResearchStyle::IssueSolution);
        assert_eq!(te.date, PubDate::new(2003, 2));
        assert!(!te.keywords.is_empty() && te.keywords.len() <= KEYWORD_LIMIT);
        assert_eq!(
            te.keywords[0].concept_id.as_deref(),
            Some("RelationExtraction")
        );
    }

    #[test]
    fn no_trigger_means_no_target() {
        let res = Resources::embedded().unwrap();
        let text =
            "did: P2\ntitle: Notes\ndate: 2001\n\n== Abstract\nParsing is hard. Tables are nice.\n";
        let err = extract_topic_event(&ArticleText::parse(text).unwrap(), &res).unwrap_err();
        assert_eq!(err, ExtractionError::TargetNotFound);
    }

    #[test]
    fn declared_keywords_pass_through() {
        let res = Resources::embedded().unwrap();
        let text = ARTICLE.replace(
            "date: 2003-02",
            "date: 2003-02\nkeywords: Tree Kernels,  SVM ",
        );
        let te = extract_topic_event(&ArticleText::parse(&text).unwrap(), &res).unwrap();
        let kws: Vec<&str> = te.keywords.iter().map(|k| k.surface.as_str()).collect();
        assert_eq!(kws, ["Tree Kernels", "SVM"]);
    }

    #[test]
    fn deterministic_records() {
        let res = Resources::embedded().unwrap();
        let a = ArticleText::parse(ARTICLE).unwrap();
        let one = extract_topic_event(&a, &res).unwrap().to_record();
        let two = extract_topic_event(&a, &res).unwrap().to_record();
        assert_eq!(one, two);
    }
}
