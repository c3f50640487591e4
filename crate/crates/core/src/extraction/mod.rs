//! Rule-based extraction of topic events from article text.
//!
//! The pipeline selects the title, abstract, introduction and conclusion,
//! splits them into sentences, keeps sentences that contain a trigger word,
//! chunks noun phrases and picks the target and methodology through
//! pre/post patterns. The style comes from title rules and the domain from
//! the ontology node closest to the target.

mod article;
mod domain;
mod patterns;
mod pipeline;
mod sections;
mod sentences;
mod style;
mod tagger;
mod triggers;

use std::sync::Arc;

use thiserror::Error;

use crate::ontology::{NodeIx, OntologyError, OntologyGraph};
use crate::resources;
use crate::te_model::ValidationReport;

pub use article::{ArticleText, Section};
pub use domain::{default_domain_candidates, induce_domain, DOMAIN_DEPTH};
pub use patterns::{
    match_element, match_element_detailed, parse_pattern_rules, ElementMatch, ItemKind,
    PatternRule, Position,
};
pub use pipeline::{extract_topic_event, KEYWORD_LIMIT};
pub use sections::{normalize_heading, select_sections, SectionKind, SelectedSection};
pub use sentences::split_sentences;
pub use style::{classify_style, parse_style_rules, StylePattern, StyleRule};
pub use tagger::{tag_and_chunk, PosTag, TaggedSentence, TaggedToken};
pub use triggers::{find_triggers, TriggerLexicon};

#[derive(Debug, Error, PartialEq)]
pub enum ExtractionError {
    #[error("article line {line}: {message}")]
    Article { line: usize, message: String },
    #[error("article has no {0}")]
    ArticleMissing(&'static str),
    #[error("rule file line {line}: {message}")]
    RuleFile { line: usize, message: String },
    #[error("trigger lexicon is empty")]
    EmptyLexicon,
    #[error("target not found in any implicated sentence")]
    TargetNotFound,
    #[error("target {target:?} does not link confidently (nearest {nearest:?}, ratio {ratio:.3}); assign the domain manually")]
    ManualDomainRequired {
        target: String,
        nearest: String,
        ratio: f64,
    },
    #[error("domain candidate {0} is not in the ontology")]
    UnknownCandidate(String),
    #[error("no domain candidates")]
    NoCandidates,
    #[error("extracted topic event is invalid: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Everything the pipeline reads besides the article itself.
#[derive(Debug, Clone)]
pub struct Resources {
    pub ontology: Arc<OntologyGraph>,
    pub patterns: Vec<PatternRule>,
    pub style_rules: Vec<StyleRule>,
    pub triggers: TriggerLexicon,
    pub domain_candidates: Vec<NodeIx>,
}

impl Resources {
    /// The resource set compiled into the library.
    pub fn embedded() -> Result<Self, ExtractionError> {
        Self::from_sources(
            resources::CL_ONTOLOGY,
            resources::PATTERNS,
            resources::STYLE_RULES,
            resources::TRIGGERS,
        )
    }

    pub fn from_sources(
        ontology: &str,
        patterns: &str,
        style_rules: &str,
        triggers: &str,
    ) -> Result<Self, ExtractionError> {
        let ontology = Arc::new(OntologyGraph::load(ontology)?);
        Self::with_ontology(ontology, patterns, style_rules, triggers)
    }

    /// Uses an already loaded ontology; domain candidates take their default.
    pub fn with_ontology(
        ontology: Arc<OntologyGraph>,
        patterns: &str,
        style_rules: &str,
        triggers: &str,
    ) -> Result<Self, ExtractionError> {
        let domain_candidates = default_domain_candidates(&ontology);
        Ok(Self {
            ontology,
            patterns: parse_pattern_rules(patterns)?,
            style_rules: parse_style_rules(style_rules)?,
            triggers: TriggerLexicon::parse(triggers)?,
            domain_candidates,
        })
    }

    /// Replaces the domain candidates by node id.
    pub fn set_domain_candidates<S: AsRef<str>>(
        &mut self,
        ids: &[S],
    ) -> Result<(), ExtractionError> {
        let nodes = ids
            .iter()
            .map(|id| {
                self.ontology
                    .lookup(id.as_ref())
                    .ok_or_else(|| ExtractionError::UnknownCandidate(id.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if nodes.is_empty() {
            return Err(ExtractionError::NoCandidates);
        }
        self.domain_candidates = nodes;
        Ok(())
    }
}
